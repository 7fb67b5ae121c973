use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde_json::{json, Value};

use qmc_core::dihp::{
    reduce_to_stream, run_protocol, sample_instance, separation_experiment, Compute, DihpInstance,
    ExactMaxCut, ProtocolMode, SeparationParams, StreamingAlgorithm, StreamingQmc, Truth,
};
use qmc_core::fourier::{run_suite, SuiteConfig};
use qmc_core::graph::{
    is_bipartite, max_incident_sum, parse_edge_list, serialize_edge_list, total_weight,
    weight_to_f64, EdgeReader,
};
use qmc_core::oracles::{
    certified_lower_bound, constructive_energies, max_cut_exact, qmc_bounds, qmc_exact_with,
    LanczosOptions,
};
use qmc_core::relaxation::{solve_vector_program, RelaxationOptions};
use qmc_core::rng::child_seed;
use qmc_core::streaming::{amplification_shape, estimate_qmc_online};
use qmc_core::{tolerance, Error, Result, Weight, WeightedGraph};

use crate::args::{
    Command, DihpExpArgs, DihpGenArgs, EstimateArgs, ExactArgs, Format, FourierArgs, InputArgs,
    ModeArg, Quantity, RelaxArgs, TruthArg,
};

const SCHEMA: u32 = 1;
const QMC_TOL: f64 = tolerance::ITERATIVE;

pub fn run(command: Command) -> Result<String> {
    match command {
        Command::Estimate(a) => estimate(a),
        Command::Exact(a) => exact(a),
        Command::Relax(a) => relax(a),
        Command::DihpGen(a) => dihp_gen(a),
        Command::DihpExp(a) => dihp_exp(a),
        Command::FourierVerify(a) => fourier_verify(a),
        Command::Wexact(a) => wexact(a),
    }
}

fn open(input: &Path) -> Result<Box<dyn BufRead>> {
    if input == Path::new("-") {
        return Ok(Box::new(BufReader::new(std::io::stdin())));
    }
    let f = File::open(input)
        .map_err(|e| Error::InvalidInput(format!("cannot open {}: {e}", input.display())))?;
    Ok(Box::new(BufReader::new(f)))
}

fn read_graph(input: &InputArgs) -> Result<WeightedGraph> {
    let mut text = String::new();
    open(&input.input)?
        .read_to_string(&mut text)
        .map_err(|e| Error::InvalidInput(format!("reading input: {e}")))?;
    Ok(parse_edge_list(&text)?.to_graph())
}

fn json_report(command: &str, seed: Option<u64>, body: Value) -> String {
    let mut out = json!({ "schema": SCHEMA, "command": command });
    if let Some(seed) = seed {
        out["seed"] = json!(seed);
    }
    if let (Value::Object(out), Value::Object(body)) = (&mut out, body) {
        out.extend(body);
    }
    let mut s = serde_json::to_string_pretty(&out).expect("values serialize");
    s.push('\n');
    s
}

fn exact_json(w: &Weight) -> Value {
    json!(w.to_string())
}

fn estimate(a: EstimateArgs) -> Result<String> {
    amplification_shape(a.eps, a.delta)?;
    let reader = EdgeReader::new(open(&a.input.input)?)?;
    let est = estimate_qmc_online(reader, a.eps, a.delta, a.seed)?;
    let body = serde_json::to_value(&est).expect("estimate serializes");
    Ok(json_report("estimate", Some(a.seed), body))
}

fn exact(a: ExactArgs) -> Result<String> {
    let g = read_graph(&a.input)?;
    let m = total_weight(&g);
    let w = max_incident_sum(&g);
    let bounds = qmc_bounds(&g);
    let cons = constructive_energies(&g);
    let certified = certified_lower_bound(&g);
    let lower = bounds.lower_unweighted.unwrap_or(bounds.lower_weighted);
    let mut body = json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "unweighted": g.is_unweighted(),
        "m": weight_to_f64(&m),
        "W": weight_to_f64(&w),
        "upper": weight_to_f64(&bounds.upper),
        "lower": weight_to_f64(&lower),
        "lower_weighted": weight_to_f64(&bounds.lower_weighted),
        "lower_unweighted": bounds.lower_unweighted.as_ref().map(weight_to_f64),
        "constructive": {
            "matching_value": weight_to_f64(&cons.matching_value),
            "forest_cut_value": weight_to_f64(&cons.forest_cut_value),
            "dfs_level_value": cons.dfs_level_value.as_ref().map(weight_to_f64),
            "certified_lower": weight_to_f64(&certified),
        },
        "exact": {
            "m": exact_json(&m),
            "W": exact_json(&w),
            "upper": exact_json(&bounds.upper),
            "lower": exact_json(&lower),
            "certified_lower": exact_json(&certified),
        },
    });
    if a.compute.contains(&Quantity::Maxcut) {
        let cut = max_cut_exact(&g)?;
        body["maxcut"] = json!(weight_to_f64(&cut.value));
        body["maxcut_side"] = json!(cut.side.iter().map(|&b| b as u8).collect::<Vec<_>>());
        body["exact"]["maxcut"] = exact_json(&cut.value);
    }
    if a.compute.contains(&Quantity::Qmc) {
        let opts = LanczosOptions {
            seed: a.seed,
            ..LanczosOptions::default()
        };
        let sol = qmc_exact_with(&g, QMC_TOL, opts)?;
        body["qmc"] = json!(sol.value);
        body["qmc_residual"] = json!(sol.residual);
        body["qmc_tolerance"] = json!(QMC_TOL);
    }
    if a.compute.contains(&Quantity::Sdp) {
        let mut o = RelaxationOptions::new(g.n().max(2));
        o.seed = a.seed;
        body["sdp"] = json!(solve_vector_program(&g, o)?.best_value);
    }
    Ok(json_report("exact", Some(a.seed), body))
}

fn relax(a: RelaxArgs) -> Result<String> {
    let g = read_graph(&a.input)?;
    let mut o = RelaxationOptions::new(a.rank.unwrap_or(g.n().max(2)));
    o.restarts = a.trials;
    o.seed = a.seed;
    let r = solve_vector_program(&g, o)?;
    let m = weight_to_f64(&total_weight(&g));
    let k = r.best_value;
    let body = json!({
        "n": g.n(),
        "m": m,
        "rank": o.rank,
        "restarts": o.restarts,
        "sdp": k,
        "converged": r.converged,
        "cut_seeded": r.cut_seeded,
        "tolerance": o.tol,
        "maxcut_upper": (m + k) / 2.0,
        "qmc_upper": (m + 3.0 * k) / 4.0,
        "vectors": r.assignment.vectors(),
    });
    Ok(json_report("relax", Some(a.seed), body))
}

fn truth(t: TruthArg) -> Truth {
    match t {
        TruthArg::Yes => Truth::Yes,
        TruthArg::No => Truth::No,
    }
}

fn instance_json(inst: &DihpInstance) -> Value {
    let g = reduce_to_stream(inst).to_graph();
    json!({
        "n": inst.n,
        "alpha_n": inst.alpha_n,
        "players": inst.players,
        "truth": inst.truth,
        "matchings": inst.matchings,
        "labels": inst.labels.iter().map(|l| l.iter().map(|&b| b as u8).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "hidden_partition": inst.hidden_partition.as_ref().map(|p| p.iter().map(|&b| b as u8).collect::<Vec<_>>()),
        "reduced_m": g.edge_count(),
        "reduced_bipartite": is_bipartite(&g).is_bipartite(),
    })
}

fn dihp_gen(a: DihpGenArgs) -> Result<String> {
    let s = &a.shape;
    let inst = sample_instance(s.n, s.alpha_n, s.t_players, truth(a.truth), s.seed)?;
    match a.format {
        Format::Json => Ok(json_report("dihp-gen", Some(s.seed), instance_json(&inst))),
        Format::Instance => Ok(inst.serialize()),
        Format::Edges => Ok(serialize_edge_list(&reduce_to_stream(&inst))),
        Format::Csv => Err(Error::InvalidInput(
            "dihp-gen supports --format json, instance or edges".into(),
        )),
    }
}

struct ProtocolRun {
    decision: Truth,
    correct: bool,
    handoff_words: usize,
}

fn protocol_runs(a: &DihpExpArgs, mode: ModeArg) -> Result<Vec<ProtocolRun>> {
    let s = &a.shape;
    let mut runs = Vec::with_capacity(2 * a.trials);
    for trial in 0..a.trials {
        for (k, t) in [Truth::Yes, Truth::No].into_iter().enumerate() {
            let seed = child_seed(s.seed, 2 * trial as u64 + k as u64);
            let inst = sample_instance(s.n, s.alpha_n, s.t_players, t, seed)?;
            let (mut alg, pm): (Box<dyn StreamingAlgorithm>, _) = match mode {
                ModeArg::Maxcut => (Box::new(ExactMaxCut::new(s.n)), ProtocolMode::MaxCut),
                ModeArg::Qmc => (
                    Box::new(StreamingQmc::new(a.eps, a.delta, child_seed(seed, 1))?),
                    ProtocolMode::Qmc,
                ),
            };
            let out = run_protocol(&inst, alg.as_mut(), pm, a.eps)?;
            runs.push(ProtocolRun {
                decision: out.decision,
                correct: out.correct,
                handoff_words: out.transcript.handoff_words.into_iter().max().unwrap_or(0),
            });
        }
    }
    Ok(runs)
}

fn dihp_exp(a: DihpExpArgs) -> Result<String> {
    if a.trials == 0 {
        return Err(Error::InvalidInput("--trials must be positive".into()));
    }
    if !(a.eps > 0.0 && a.eps < 1.0) {
        return Err(Error::InvalidInput(format!(
            "--eps must lie in (0, 1), got {}",
            a.eps
        )));
    }
    let s = &a.shape;
    let params = SeparationParams {
        n: s.n,
        alpha_n: s.alpha_n,
        players: s.t_players,
        trials: a.trials,
        seed: s.seed,
        compute: Compute {
            maxcut: a.compute.contains(&Quantity::Maxcut),
            sdp: a.compute.contains(&Quantity::Sdp),
            qmc: a.compute.contains(&Quantity::Qmc),
        },
    };
    let report = separation_experiment(params)?;
    let runs = a.mode.map(|m| protocol_runs(&a, m)).transpose()?;
    match a.format {
        Format::Csv => {
            let mut out = String::new();
            for (i, line) in report.to_csv().lines().enumerate() {
                out.push_str(line);
                match (&runs, i) {
                    (Some(_), 0) => out.push_str(",decision,correct"),
                    (Some(r), i) => {
                        let r = &r[i - 1];
                        out.push_str(&format!(",{},{}", r.decision, r.correct));
                    }
                    (None, _) => {}
                }
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => {
            let mut body = serde_json::to_value(&report).expect("report serializes");
            if let (Some(runs), Some(mode)) = (&runs, a.mode) {
                // runs alternate YES, NO per trial
                let rate = |offset: usize| {
                    let sel: Vec<_> = runs.iter().skip(offset).step_by(2).collect();
                    sel.iter().filter(|r| r.correct).count() as f64 / sel.len() as f64
                };
                body["protocol"] = json!({
                    "mode": match mode { ModeArg::Maxcut => "maxcut", ModeArg::Qmc => "qmc" },
                    "epsilon": a.eps,
                    "delta": a.delta,
                    "success_rate": runs.iter().filter(|r| r.correct).count() as f64 / runs.len() as f64,
                    "yes_success_rate": rate(0),
                    "no_success_rate": rate(1),
                    "max_handoff_words": runs.iter().map(|r| r.handoff_words).max(),
                });
            }
            Ok(json_report("dihp-exp", Some(s.seed), body))
        }
        _ => Err(Error::InvalidInput(
            "dihp-exp supports --format json or csv".into(),
        )),
    }
}

fn fourier_verify(a: FourierArgs) -> Result<String> {
    if !(a.scale.is_finite() && a.scale > 0.0) {
        return Err(Error::InvalidInput(format!(
            "--scale must be positive, got {}",
            a.scale
        )));
    }
    let report = run_suite(SuiteConfig {
        seed: a.seed,
        scale: a.scale,
    })?;
    for l in report.lemmas.iter().filter(|l| !l.passed) {
        eprintln!(
            "{}: {} of {} checks violated",
            l.lemma, l.violations, l.checks
        );
    }
    let body = serde_json::to_value(&report).expect("report serializes");
    Ok(json_report("fourier-verify", None, body))
}

fn wexact(a: InputArgs) -> Result<String> {
    let g = read_graph(&a)?;
    let m = total_weight(&g);
    let w = max_incident_sum(&g);
    let body = json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "m": weight_to_f64(&m),
        "W": weight_to_f64(&w),
        "exact": { "m": exact_json(&m), "W": exact_json(&w) },
    });
    Ok(json_report("wexact", None, body))
}
