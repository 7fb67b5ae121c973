//! Acceptance criteria 1-11. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. Pass criterion numbers as arguments to run a
//! subset, e.g. `cargo test --test acceptance -- 3 8`.

use std::collections::HashSet;
use std::io::{BufWriter, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use rand::Rng;

use qmc_core::dihp::{
    reduce_to_stream, sample_instance, separation_experiment, Compute, SeparationParams, Truth,
};
use qmc_core::fourier::{phibound_experiment, run_suite, SuiteConfig, ToyProtocol};
use qmc_core::graph::families::{dfs_levels_example, path, star};
use qmc_core::graph::random::{all_graphs, connected, gnp, random_edges};
use qmc_core::graph::{
    int_weight, is_bipartite, max_incident_sum, total_weight, weight_to_f64, EdgeReader,
};
use qmc_core::oracles::{constructive_energies, max_cut_exact, qmc_bounds, qmc_exact};
use qmc_core::relaxation::{solve_vector_program, RelaxationOptions};
use qmc_core::rng::{child_seed, substream};
use qmc_core::streaming::{
    amplification_shape, estimate_qmc, estimate_qmc_online, estimate_w, expectation_oracle,
    EstimatorBank,
};
use qmc_core::{EdgeStream, Weight, WeightedEdge, WeightedGraph};

/// Process overhead allowed on top of the bank's word bound: binary, runtime,
/// allocator slack and I/O buffers.
const PROCESS_OVERHEAD_BYTES: u64 = 32 << 20;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn f(w: &Weight) -> f64 {
    weight_to_f64(w)
}

fn qmc(g: &WeightedGraph) -> f64 {
    qmc_exact(g, 1e-9).expect("small graph").value
}

/// Minimum edge mask over all vertex relabellings.
fn canonical_mask(g: &WeightedGraph) -> u64 {
    let n = g.n();
    let index = |u: usize, v: usize| {
        let (a, b) = (u.min(v), u.max(v));
        a * n + b
    };
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        let mask = g
            .edges()
            .iter()
            .fold(0u64, |m, e| m | 1 << index(perm[e.u], perm[e.v]));
        best = best.min(mask);
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| perm[i] < perm[i + 1])
        else {
            return best;
        };
        let j = (i + 1..n)
            .rev()
            .find(|&j| perm[j] > perm[i])
            .expect("successor exists");
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

/// One representative per isomorphism class of connected graphs on `2..=6`
/// vertices.
fn connected_classes() -> Vec<WeightedGraph> {
    let mut out = Vec::new();
    for n in 2..=6 {
        let mut seen = HashSet::new();
        for g in all_graphs(n).filter(|g| g.is_connected()) {
            if seen.insert(canonical_mask(&g)) {
                out.push(g);
            }
        }
    }
    out
}

/// 500 graphs on `2..=8` vertices, alternating unit and `1..=8` weights.
fn random_corpus(seed: u64) -> Vec<WeightedGraph> {
    let mut rng = substream(seed, 0);
    (0..500)
        .map(|i| {
            let n = rng.random_range(2..=8);
            let p = rng.random_range(0.2..0.9);
            gnp(n, p, if i % 2 == 0 { 1 } else { 8 }, &mut rng)
        })
        .collect()
}

fn c1_unbiasedness() -> Outcome {
    let n = 6;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut streams: Vec<Vec<WeightedEdge>> = vec![vec![]];
    for len in 1..=3 {
        let mut next = Vec::new();
        for s in streams.iter().filter(|s| s.len() == len - 1) {
            for &(u, v) in &pairs {
                if s.iter().any(|e| e.key() == (u, v)) {
                    continue;
                }
                for w in [1, 2] {
                    let mut t = s.clone();
                    t.push(WeightedEdge::new(u, v, int_weight(w)));
                    next.push(t);
                }
            }
        }
        streams.extend(next);
    }
    let mut rng = substream(101, 0);
    for _ in 0..50 {
        let n = rng.random_range(2..=8usize);
        let len = rng.random_range(1..=8usize.min(n * (n - 1) / 2));
        let mut edges = random_edges(n, len, &mut rng);
        for e in &mut edges {
            e.w = Weight::new(rng.random_range(1..=12), rng.random_range(1..=4));
        }
        streams.push(edges);
    }
    let mut failures = 0;
    for edges in &streams {
        let s = EdgeStream::new(
            n.max(edges.iter().map(|e| e.u.max(e.v) + 1).max().unwrap_or(0)),
            edges.clone(),
        )
        .expect("valid stream");
        let g = s.to_graph();
        let m = total_weight(&g);
        let want = if m == Weight::from_integer(0) {
            Weight::from_integer(0)
        } else {
            max_incident_sum(&g) / (m * Weight::from_integer(2))
        };
        if expectation_oracle(&s).expect("short stream") != want {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!(
            "{} streams, {failures} mismatches (exact rationals)",
            streams.len()
        ),
    )
}

fn c2_w_estimation() -> Outcome {
    let mut within = 0;
    for trial in 0..100u64 {
        let mut rng = substream(202, trial);
        let g = gnp(100, 0.04, 1, &mut rng);
        let m = f(&total_weight(&g));
        let w = f(&max_incident_sum(&g));
        let w_hat = estimate_w(&g.to_stream(), 0.1, 0.1, child_seed(202, trial)).expect("valid");
        if (w_hat - w).abs() <= 0.1 * m {
            within += 1;
        }
    }
    outcome(
        within >= 90,
        format!("{within}/100 trials with |W_hat - W| <= 0.1 m"),
    )
}

fn c3_approximation() -> Outcome {
    let eps = 0.25;
    let mut ok = [0, 0];
    for (k, max_w) in [1i64, 8].into_iter().enumerate() {
        let ratio = if max_w == 1 { 2.0 + eps } else { 2.5 + eps };
        for trial in 0..50u64 {
            let mut rng = substream(303 + k as u64, trial);
            let n = rng.random_range(2..=10);
            let g = connected(n, rng.random_range(0.1..0.7), max_w, &mut rng);
            let opt = qmc(&g);
            let est =
                estimate_qmc(&g.to_stream(), eps, 0.05, child_seed(303, trial)).expect("valid");
            if est.value >= opt - 1e-9 && est.value <= ratio * opt + 1e-9 {
                ok[k] += 1;
            }
        }
    }
    outcome(
        ok[0] >= 45 && ok[1] >= 45,
        format!(
            "unweighted {}/50 within 2+eps, weighted {}/50 within 5/2+eps",
            ok[0], ok[1]
        ),
    )
}

fn c4_sandwich() -> Outcome {
    let classes = connected_classes();
    let corpus = random_corpus(404);
    let mut violations = 0;
    let mut worst: f64 = f64::NEG_INFINITY;
    for g in classes.iter().chain(&corpus) {
        let q = qmc(g);
        let b = qmc_bounds(g);
        let mut check = |slack: f64| {
            worst = worst.max(slack);
            if slack > 1e-7 {
                violations += 1;
            }
        };
        check(q - f(&b.upper));
        check(f(&b.lower_weighted) - q);
        if let Some(l) = &b.lower_unweighted {
            check(f(l) - q);
        }
    }
    outcome(
        violations == 0,
        format!(
            "{} connected classes (n<=6) + {} random graphs, {violations} violations, max slack {worst:.2e}",
            classes.len(),
            corpus.len()
        ),
    )
}

fn c5_anchors() -> Outcome {
    let mut fails = Vec::new();
    let e = qmc(&path(2));
    if (e - 1.0).abs() > 1e-9 {
        fails.push(format!("edge {e}"));
    }
    for d in 1..=5 {
        let v = qmc(&star(d));
        if (v - (d as f64 + 1.0) / 2.0).abs() > 1e-8 {
            fails.push(format!("K_1,{d} {v}"));
        }
    }
    let mut checked = 0;
    for g in connected_classes().iter().chain(&random_corpus(505)) {
        let mc = f(&max_cut_exact(g).expect("small").value);
        checked += 1;
        if qmc(g) < mc / 2.0 - 1e-7 {
            fails.push(format!("qmc below maxcut/2 on {g:?}"));
        }
    }
    outcome(
        fails.is_empty(),
        if fails.is_empty() {
            format!("edge, K_1,1..5 and qmc >= maxcut/2 on {checked} graphs")
        } else {
            fails.join("; ")
        },
    )
}

fn c6_constructive() -> Outcome {
    let fig = constructive_energies(&dfs_levels_example()).dfs_level_value;
    let mut fails = Vec::new();
    if fig != Some(Weight::new(19, 4)) {
        fails.push(format!("figure graph gives {fig:?}"));
    }
    let mut checked = 0;
    for g in connected_classes().iter().chain(&random_corpus(606)) {
        let c = constructive_energies(g);
        let q = qmc(g);
        checked += 1;
        for (name, v) in [
            ("matching", Some(&c.matching_value)),
            ("forest", Some(&c.forest_cut_value)),
            ("dfs", c.dfs_level_value.as_ref()),
        ] {
            if let Some(v) = v {
                if f(v) > q + 1e-7 {
                    fails.push(format!("{name} {} > qmc {q}", f(v)));
                }
            }
        }
        if let (Some(d), true) = (&c.dfs_level_value, g.is_connected()) {
            let lb = f(&total_weight(g)) / 4.0 + f(&max_incident_sum(g)) / 8.0;
            if f(d) <= lb - 1e-7 {
                fails.push(format!("dfs {} <= m/4 + W/8 = {lb}", f(d)));
            }
        }
    }
    outcome(
        fails.is_empty(),
        if fails.is_empty() {
            format!("figure graph 19/4; constructions within bounds on {checked} graphs")
        } else {
            fails.join("; ")
        },
    )
}

fn c7_relaxation() -> Outcome {
    let mut rng = substream(707, 0);
    let mut violations = 0;
    for i in 0..300 {
        let n = rng.random_range(2..=8);
        let g = gnp(
            n,
            rng.random_range(0.2..0.9),
            if i % 2 == 0 { 1 } else { 8 },
            &mut rng,
        );
        let m = f(&total_weight(&g));
        let mc = f(&max_cut_exact(&g).expect("small").value);
        let mut o = RelaxationOptions::new(n.max(2));
        o.seed = child_seed(707, i);
        let r = solve_vector_program(&g, o).expect("valid");
        let k = r.best_value;
        let q = qmc(&g);
        if !r.cut_seeded
            || k < 2.0 * mc - m - 1e-9
            || q > (m + 3.0 * k) / 4.0 + 1e-6 * m
            || mc > (m + k) / 2.0 + 1e-6 * m
        {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("300 graphs, {violations} violations"),
    )
}

fn c8_separation() -> Outcome {
    let mut yes_ok = 0;
    for i in 0..400u64 {
        let inst = sample_instance(32, 4, 8, Truth::Yes, child_seed(808, i)).expect("valid");
        let g = reduce_to_stream(&inst).to_graph();
        let mc = max_cut_exact(&g).expect("bipartite cores reduce");
        if is_bipartite(&g).is_bipartite() && mc.value == total_weight(&g) {
            yes_ok += 1;
        }
    }
    let r = separation_experiment(SeparationParams {
        n: 32,
        alpha_n: 4,
        players: 8,
        trials: 200,
        seed: 1,
        compute: Compute {
            maxcut: true,
            sdp: false,
            qmc: false,
        },
    })
    .expect("feasible");
    let gap = r.maxcut_gap_in_se.unwrap_or(0.0);
    let (y, n) = (r.yes.maxcut_ratio.unwrap(), r.no.maxcut_ratio.unwrap());
    outcome(
        yes_ok == 400 && gap >= 5.0,
        format!(
            "YES bipartite with maxcut = m in {yes_ok}/400; mean ratio YES {:.4} NO {:.4}, gap {gap:.2} SE",
            y.mean, n.mean
        ),
    )
}

fn c9_fourier() -> Outcome {
    let r = run_suite(SuiteConfig {
        seed: 909,
        scale: 1.0,
    })
    .expect("suite runs");
    let bad: Vec<_> = r
        .lemmas
        .iter()
        .filter(|l| !l.passed)
        .map(|l| l.lemma.clone())
        .collect();
    let checks: usize = r.lemmas.iter().map(|l| l.checks).sum();
    outcome(
        bad.is_empty() && r.lemmas.len() == 15,
        if bad.is_empty() {
            format!(
                "{} lemma checks over {checks} random instances, zero violations",
                r.lemmas.len()
            )
        } else {
            format!("violations in {}", bad.join(", "))
        },
    )
}

fn c10_phibound() -> Outcome {
    let mut rng = substream(1010, 0);
    let mut protocols = vec![ToyProtocol::parity_forwarding()];
    while protocols.len() < 50 {
        let n = [2, 4][protocols.len() % 2];
        let alpha_n = rng.random_range(1..=n / 2);
        let beta = rng.random_range(1..=2);
        let players = rng.random_range(1..=3);
        protocols.push(ToyProtocol::random(n, alpha_n, beta, players, &mut rng).expect("valid"));
    }
    let mut violations = 0;
    let mut tightest = f64::NEG_INFINITY;
    for p in &protocols {
        let r = phibound_experiment(p).expect("small protocol");
        tightest = tightest.max(r.lhs - r.rhs);
        if r.lhs > r.rhs + 1e-9 {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("50 protocols, {violations} violations, max lhs - rhs {tightest:.2e}"),
    )
}

/// Distinct unit edges `{u, u + k}` for `k = 1..`, `n` vertices.
fn synthetic_edges(n: usize, count: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..count).map(move |i| {
        let (k, u) = (1 + i / n, i % n);
        (u, (u + k) % n)
    })
}

fn bank_words(eps: f64, delta: f64, edges: usize) -> usize {
    let mut bank = EstimatorBank::new(eps, delta, 11).expect("valid");
    for (u, v) in synthetic_edges(50_000, edges) {
        bank.process_edge(&WeightedEdge::unit(u, v))
            .expect("valid edge");
    }
    bank.word_count()
}

/// Peak resident set of a running process; `None` once it has exited.
fn vm_hwm(pid: u32) -> Option<u64> {
    let status = std::fs::read_to_string(format!("/proc/{pid}/status")).ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn c11_space() -> Outcome {
    let (eps, delta) = (0.5, 0.1);
    let small = bank_words(eps, delta, 10);
    let large = bank_words(eps, delta, 100_000);
    let mut detail = format!("bank words after 10 edges {small}, after 1e5 edges {large}");
    let mut pass = small == large;

    let (k, b) = amplification_shape(eps / 4.0, delta).expect("valid");
    let bound = EstimatorBank::word_bound(k, b);

    // library path, lazily generated stream
    let n = 100_000;
    let text = std::iter::once(format!("n {n}\n"))
        .chain(synthetic_edges(n, 1_000_000).map(|(u, v)| format!("{u} {v}\n")))
        .collect::<String>();
    let est = estimate_qmc_online(
        EdgeReader::new(text.as_bytes()).expect("header"),
        eps,
        delta,
        5,
    )
    .expect("valid stream");
    pass &= est.words_used <= bound && est.edges == 1_000_000;
    detail += &format!(
        "; 1e6-edge library run uses {} <= {bound} words",
        est.words_used
    );
    drop(text);

    #[cfg(target_os = "linux")]
    {
        let mut child = Command::new(env!("CARGO_BIN_EXE_qmc"))
            .args(["estimate", "--eps", "0.5", "--delta", "0.1", "--seed", "5"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .expect("spawn qmc");
        let stdin = child.stdin.take().expect("stdin");
        let writer = std::thread::spawn(move || {
            let mut w = BufWriter::new(stdin);
            writeln!(w, "n {n}").unwrap();
            for (u, v) in synthetic_edges(n, 1_000_000) {
                writeln!(w, "{u} {v}").unwrap();
            }
        });
        let mut stdout = child.stdout.take().expect("stdout");
        let reader = std::thread::spawn(move || {
            let mut s = String::new();
            std::io::Read::read_to_string(&mut stdout, &mut s).unwrap();
            s
        });
        // the high-water mark resets at exec and only grows, so the last
        // sample before exit is the peak up to the polling interval
        let pid = child.id();
        let mut rss = 0;
        while let Some(v) = vm_hwm(pid) {
            rss = v;
            std::thread::sleep(Duration::from_millis(5));
        }
        writer.join().expect("writer");
        let code = child.wait().expect("wait").code().unwrap_or(-1);
        let out: serde_json::Value = serde_json::from_str(&reader.join().unwrap()).expect("json");
        let ceiling = 8 * bound as u64 + PROCESS_OVERHEAD_BYTES;
        pass &= code == 0 && out["edges"] == 1_000_000 && rss <= ceiling;
        detail += &format!(
            "; `qmc estimate` on 1e6 edges: exit {code}, peak RSS {:.1} MiB <= ceiling {:.1} MiB (8 bytes x {bound} words + 32 MiB)",
            rss as f64 / 1048576.0,
            ceiling as f64 / 1048576.0
        );
    }
    outcome(pass, detail)
}

type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "unbiasedness", c1_unbiasedness, Duration::from_secs(5)),
        (2, "W estimation", c2_w_estimation, Duration::from_secs(30)),
        (
            3,
            "approximation guarantee",
            c3_approximation,
            Duration::from_secs(120),
        ),
        (4, "bound sandwiches", c4_sandwich, Duration::from_secs(300)),
        (5, "exact anchors", c5_anchors, Duration::MAX),
        (6, "constructive energies", c6_constructive, Duration::MAX),
        (
            7,
            "relaxation chain",
            c7_relaxation,
            Duration::from_secs(300),
        ),
        (
            8,
            "hidden-partition separation",
            c8_separation,
            Duration::from_secs(180),
        ),
        (
            9,
            "Fourier lemma suite",
            c9_fourier,
            Duration::from_secs(120),
        ),
        (10, "phi-bound", c10_phibound, Duration::from_secs(120)),
        (11, "space discipline", c11_space, Duration::MAX),
    ];
    // libtest-style flags from `cargo test` are ignored
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let chosen: Vec<_> = criteria
        .iter()
        .filter(|c| selected.is_empty() || selected.contains(&c.0))
        .collect();
    let results: Vec<(Outcome, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = chosen
            .iter()
            .map(|c| {
                s.spawn(move || {
                    let t = Instant::now();
                    let o = (c.2)();
                    (o, t.elapsed())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion panicked"))
            .collect()
    });
    let mut failed = 0;
    for (c, (o, took)) in chosen.iter().zip(results) {
        let in_time = took <= c.3;
        let pass = o.pass && in_time;
        failed += !pass as usize;
        let budget = if c.3 == Duration::MAX {
            String::new()
        } else {
            format!(", budget {}s", c.3.as_secs())
        };
        println!(
            "criterion {:>2} {:<28} {}  {} [{:.1}s{budget}]",
            c.0,
            c.1,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            took.as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        chosen.len() - failed,
        chosen.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
