use std::collections::HashMap;
use std::mem::size_of;

use num_traits::{CheckedAdd, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Weight, WeightedEdge};
use rand_xoshiro::SplitMix64;

use crate::rng::compact_rng;

const NIL: u32 = u32::MAX;

/// Thresholds are bucketed by their top bits: sign, 11 exponent bits and
/// `MANTISSA_BITS` of mantissa, i.e. 256 buckets per octave.
const MANTISSA_BITS: u32 = 8;
const BUCKETS: usize = 1 << (11 + MANTISSA_BITS);

fn bucket_of(t: f64) -> usize {
    (t.to_bits() >> (52 - MANTISSA_BITS)) as usize
}

/// `(K, B)`: `K = 2⌈12 ln(1/δ)⌉ + 1` groups of `B = ⌈36/ε²⌉` reservoirs.
pub fn amplification_shape(epsilon: f64, delta: f64) -> Result<(usize, usize)> {
    if !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!(
            "epsilon and delta must lie in (0, 1), got {epsilon} and {delta}"
        )));
    }
    let per_group = (36.0 / (epsilon * epsilon)).ceil() as usize;
    let groups = 2 * (12.0 * (1.0 / delta).ln()).ceil() as usize + 1;
    Ok((groups, per_group))
}

/// Sample record shared by every reservoir holding the same edge and
/// endpoint.
#[derive(Debug, Clone, Copy)]
struct Slot {
    endpoint: usize,
    weight: f64,
    best_after: f64,
    superseded: bool,
    /// Still watching later edges at `endpoint`.
    live: bool,
    refs: u32,
    prev: u32,
    next: u32,
}

impl Slot {
    const EMPTY: Slot = Slot {
        endpoint: 0,
        weight: 0.0,
        best_after: 0.0,
        superseded: false,
        live: false,
        refs: 0,
        prev: NIL,
        next: NIL,
    };

    fn sample(&self) -> f64 {
        if self.superseded {
            0.0
        } else {
            1.0 - self.best_after / self.weight
        }
    }
}

/// `K × B` independent weighted reservoirs over one stream.
///
/// Reservoir `r` replaces its sample at the first edge whose running weight
/// exceeds `S/U`, where `S` is the running weight at its previous
/// replacement and `U` is uniform on `(0, 1]`; this has the same law as a coin
/// flip with probability `w/S` on every edge. Pending thresholds sit in
/// log-scale buckets (intrusive lists), so a replacement costs O(1). All
/// storage is allocated up front and never grows.
#[derive(Debug, Clone)]
pub struct EstimatorBank {
    groups: usize,
    per_group: usize,
    m: Weight,
    running: f64,
    edges_seen: u64,
    unweighted: bool,
    threshold: Vec<f64>,
    next_due: Vec<u32>,
    buckets: Vec<u32>,
    /// Every bucket below this one is empty.
    cursor: usize,
    assigned: Vec<u32>,
    rngs: Vec<SplitMix64>,
    slots: Vec<Slot>,
    free: Vec<u32>,
    watch: HashMap<usize, u32>,
}

impl EstimatorBank {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Result<Self> {
        let (k, b) = amplification_shape(epsilon, delta)?;
        Self::with_shape(k, b, seed)
    }

    pub fn with_shape(groups: usize, per_group: usize, seed: u64) -> Result<Self> {
        let total = groups
            .checked_mul(per_group)
            .filter(|&t| t > 0 && t < NIL as usize)
            .ok_or_else(|| Error::InvalidInput(format!("bank shape {groups}x{per_group}")))?;
        // every reservoir starts due at threshold 0, chained in bucket 0
        let mut buckets = vec![NIL; BUCKETS];
        buckets[0] = 0;
        let next_due = (1..=total as u32)
            .map(|r| if r == total as u32 { NIL } else { r })
            .collect();
        Ok(Self {
            groups,
            per_group,
            m: Weight::zero(),
            running: 0.0,
            edges_seen: 0,
            unweighted: true,
            threshold: vec![0.0; total],
            next_due,
            buckets,
            cursor: 0,
            assigned: vec![NIL; total],
            rngs: (0..total as u64).map(|r| compact_rng(seed, r)).collect(),
            slots: vec![Slot::EMPTY; total],
            free: (0..total as u32).rev().collect(),
            watch: HashMap::with_capacity(total),
        })
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn per_group(&self) -> usize {
        self.per_group
    }

    /// Exact total weight seen so far.
    pub fn m(&self) -> Weight {
        self.m
    }

    pub fn edges_seen(&self) -> u64 {
        self.edges_seen
    }

    /// True while every edge seen has weight 1.
    pub fn all_unit_weights(&self) -> bool {
        self.unweighted
    }

    pub fn process_edge(&mut self, e: &WeightedEdge) -> Result<()> {
        if e.w <= Weight::zero() {
            return Err(Error::InvalidInput(format!("nonpositive weight {}", e.w)));
        }
        self.m = self
            .m
            .checked_add(&e.w)
            .ok_or_else(|| Error::InvalidInput("total weight overflows".into()))?;
        let w = e.weight_f64();
        self.running += w;
        self.edges_seen += 1;
        self.unweighted &= e.w == Weight::from_integer(1);

        self.update_watchers(e.u, w);
        self.update_watchers(e.v, w);

        let mut fresh = [NIL, NIL];
        let top = bucket_of(self.running);
        while self.cursor <= top {
            let k = self.cursor;
            let mut r = std::mem::replace(&mut self.buckets[k], NIL);
            while r != NIL {
                let next = self.next_due[r as usize];
                if self.threshold[r as usize] < self.running {
                    self.replace(r, e, w, &mut fresh);
                } else {
                    self.schedule(r);
                }
                r = next;
            }
            if k == top {
                break;
            }
            self.cursor += 1;
        }
        Ok(())
    }

    fn schedule(&mut self, r: u32) {
        let k = bucket_of(self.threshold[r as usize]);
        self.next_due[r as usize] = self.buckets[k];
        self.buckets[k] = r;
    }

    fn replace(&mut self, r: u32, e: &WeightedEdge, w: f64, fresh: &mut [u32; 2]) {
        let rng = &mut self.rngs[r as usize];
        let side = usize::from(rng.random::<bool>());
        let u: f64 = 1.0 - rng.random::<f64>();
        self.threshold[r as usize] = self.running / u;
        self.schedule(r);
        let old = self.assigned[r as usize];
        if old != NIL {
            Self::release(&mut self.slots, &mut self.free, &mut self.watch, old);
        }
        if fresh[side] == NIL {
            let endpoint = if side == 0 { e.u } else { e.v };
            fresh[side] = self.acquire(endpoint, w);
        }
        self.slots[fresh[side] as usize].refs += 1;
        self.assigned[r as usize] = fresh[side];
    }

    fn update_watchers(&mut self, x: usize, w: f64) {
        let mut cur = match self.watch.get(&x) {
            Some(&h) => h,
            None => return,
        };
        while cur != NIL {
            let s = &mut self.slots[cur as usize];
            let next = s.next;
            if w > s.weight {
                s.superseded = true;
            }
            s.best_after = s.best_after.max(w);
            if s.superseded || s.best_after >= s.weight {
                unlink(&mut self.slots, &mut self.watch, cur);
            }
            cur = next;
        }
    }

    fn acquire(&mut self, endpoint: usize, weight: f64) -> u32 {
        let id = self.free.pop().expect("one slot per reservoir suffices");
        let head = self.watch.get(&endpoint).copied().unwrap_or(NIL);
        self.slots[id as usize] = Slot {
            endpoint,
            weight,
            best_after: 0.0,
            superseded: false,
            live: true,
            refs: 0,
            prev: NIL,
            next: head,
        };
        if head != NIL {
            self.slots[head as usize].prev = id;
        }
        self.watch.insert(endpoint, id);
        id
    }

    fn release(slots: &mut [Slot], free: &mut Vec<u32>, watch: &mut HashMap<usize, u32>, id: u32) {
        let s = &mut slots[id as usize];
        s.refs -= 1;
        if s.refs == 0 {
            if s.live {
                unlink(slots, watch, id);
            }
            free.push(id);
        }
    }

    /// Current `X` of every reservoir, group-major.
    pub fn samples(&self) -> Vec<f64> {
        self.assigned
            .iter()
            .map(|&id| {
                if id == NIL {
                    0.0
                } else {
                    self.slots[id as usize].sample()
                }
            })
            .collect()
    }

    /// `2m·mean(X)` for each group.
    pub fn group_estimates(&self) -> Vec<f64> {
        let two_m = 2.0 * crate::graph::weight_to_f64(&self.m);
        self.samples()
            .chunks(self.per_group)
            .map(|g| two_m * g.iter().sum::<f64>() / g.len() as f64)
            .collect()
    }

    /// Median of the group estimates, clamped to `[0, 2m]`.
    pub fn w_hat(&self) -> f64 {
        let mut est = self.group_estimates();
        est.sort_by(f64::total_cmp);
        let two_m = 2.0 * crate::graph::weight_to_f64(&self.m);
        let mid = if est.len() % 2 == 1 {
            est[est.len() / 2]
        } else {
            0.5 * (est[est.len() / 2 - 1] + est[est.len() / 2])
        };
        mid.clamp(0.0, two_m)
    }

    /// Words of state actually held, from container capacities.
    pub fn word_count(&self) -> usize {
        let bytes = self.threshold.capacity() * size_of::<f64>()
            + self.next_due.capacity() * size_of::<u32>()
            + self.buckets.capacity() * size_of::<u32>()
            + self.assigned.capacity() * size_of::<u32>()
            + self.rngs.capacity() * size_of::<SplitMix64>()
            + self.slots.capacity() * size_of::<Slot>()
            + self.free.capacity() * size_of::<u32>()
            + self.watch.capacity() * (size_of::<(usize, u32)>() + 1)
            + size_of::<Self>();
        bytes.div_ceil(8)
    }

    /// Upper bound on [`word_count`](Self::word_count) for a bank of `K·B`
    /// reservoirs, independent of the stream.
    pub fn word_bound(groups: usize, per_group: usize) -> usize {
        // threshold 1, links and ids 2, rng 1, slot 5, map 4.5; buckets fixed
        16 * groups * per_group + BUCKETS / 2 + 64
    }
}

fn unlink(slots: &mut [Slot], watch: &mut HashMap<usize, u32>, id: u32) {
    let Slot {
        endpoint,
        prev,
        next,
        ..
    } = slots[id as usize];
    if prev != NIL {
        slots[prev as usize].next = next;
    } else if next != NIL {
        watch.insert(endpoint, next);
    } else {
        watch.remove(&endpoint);
    }
    if next != NIL {
        slots[next as usize].prev = prev;
    }
    let s = &mut slots[id as usize];
    s.live = false;
    s.prev = NIL;
    s.next = NIL;
}
