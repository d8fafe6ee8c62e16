//! Delta-nets by uniform sampling with an explicit sample-size formula,
//! exhaustive transversal oracles, fractional-to-integral replication, and
//! epsilon-coverings of set systems.
//!
//! Samples are multisets (drawn with repetition); callers consume the
//! deduplicated set. Validation never trusts the sampler: every net is
//! checked edge by edge against the raw hypergraph.

use crate::bits::VSet;
use crate::core::{Frac, SetSystem, TriEdge, TriHypergraph};
use crate::rng::derive_rng;
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetsError {
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("set {0} smaller than the size floor")]
    SizeFloor(usize),
    #[error("all weights are zero")]
    ZeroWeights,
    #[error("lcm of weight denominators exceeds {0}")]
    LcmOverflow(u64),
    #[error("some vertex has empty D(x); uncoverable by sampling")]
    ZeroDisjointness,
    #[error("no valid covering found within {0} retry rounds")]
    RetriesExhausted(usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct NetRequest {
    pub delta: Frac,
    pub failure_prob: f64,
    pub dimension: usize,
    pub seed: u64,
}

impl NetRequest {
    pub fn new(delta: Frac, failure_prob: f64, dimension: usize, seed: u64) -> Self {
        assert!(delta > Frac::zero() && delta <= Frac::from_integer(1));
        assert!(failure_prob > 0.0 && failure_prob < 1.0);
        assert!(dimension >= 1);
        NetRequest {
            delta,
            failure_prob,
            dimension,
            seed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NetReport {
    pub sample: Vec<usize>,
    pub deduplicated: VSet,
    pub valid: bool,
    pub violating_edge: Option<usize>,
}

/// Sample size 2 * (d / ln(1+delta)) * ln(e / (ln(1+delta) * p^{1/d})),
/// rounded up.
pub fn tau_p(d: usize, delta: f64, p: f64) -> usize {
    assert!(d >= 1 && delta > 0.0 && delta <= 1.0 && p > 0.0 && p < 1.0);
    let l = (1.0 + delta).ln();
    let inner = std::f64::consts::E / (l * p.powf(1.0 / d as f64));
    (2.0 * (d as f64 / l) * inner.ln()).ceil() as usize
}

/// `count >= q * total`, exactly.
fn ge_frac_of(count: usize, q: Frac, total: usize) -> bool {
    Frac::from_integer(count as i64) >= q * Frac::from_integer(total as i64)
}

/// First delta-heavy edge missed by X on B cup R, if any.
pub fn validate_net(h: &TriHypergraph, x: &VSet, delta: Frac) -> Option<usize> {
    h.edges.iter().position(|e| {
        ge_frac_of(e.black.len(), delta, h.ground_size)
            && x.intersection_size(&e.black.union(&e.red)) == 0
    })
}

/// Draw tau_p uniform vertices with repetition and validate exhaustively.
/// Deterministic given the seed; invalid nets are reported, not raised.
pub fn sample_delta_net(h: &TriHypergraph, req: &NetRequest) -> NetReport {
    assert!(h.ground_size > 0, "empty ground set");
    let size = tau_p(
        req.dimension,
        *req.delta.numer() as f64 / *req.delta.denom() as f64,
        req.failure_prob,
    );
    let mut rng = derive_rng(req.seed, "delta-net", 0);
    let sample: Vec<usize> = (0..size).map(|_| rng.gen_range(0..h.ground_size)).collect();
    let deduplicated = VSet::from_iter(h.ground_size, sample.iter().copied());
    let violating_edge = validate_net(h, &deduplicated, req.delta);
    NetReport {
        sample,
        deduplicated,
        valid: violating_edge.is_none(),
        violating_edge,
    }
}

pub const MIN_TRANSVERSAL_MAX_N: usize = 24;

/// Smallest X meeting B cup R of every tri-edge; branch and bound over the
/// vertices of an uncovered edge.
pub fn min_transversal_exhaustive(h: &TriHypergraph) -> Result<VSet, NetsError> {
    if h.ground_size > MIN_TRANSVERSAL_MAX_N {
        return Err(NetsError::TooLarge(format!(
            "transversal oracle capped at n = {MIN_TRANSVERSAL_MAX_N}"
        )));
    }
    let targets: Vec<VSet> = h.edges.iter().map(|e| e.black.union(&e.red)).collect();
    // an edge with empty B and R can never be hit; treat as unhittable only
    // if it exists (then no transversal exists and we fall back to V, which
    // still fails validation; spec edges always have nonempty B cup R in
    // practice, so assert instead)
    assert!(
        targets.iter().all(|t| !t.is_empty()),
        "tri-edge with empty B and R cannot be transversed"
    );
    let mut current = VSet::empty(h.ground_size);
    fn recurse(targets: &[VSet], current: &mut VSet, best: &mut VSet) {
        if current.len() + 1 >= best.len() {
            return;
        }
        match targets
            .iter()
            .find(|t| t.intersection_size(current) == 0)
        {
            None => {
                if current.len() < best.len() {
                    *best = current.clone();
                }
            }
            Some(t) => {
                for v in t.iter().collect::<Vec<_>>() {
                    current.insert(v);
                    recurse(targets, current, best);
                    current.remove(v);
                }
            }
        }
    }
    // seed `best` with a greedy solution so the bound starts tight
    let mut greedy = VSet::empty(h.ground_size);
    loop {
        let uncovered: Vec<&VSet> = targets
            .iter()
            .filter(|t| t.intersection_size(&greedy) == 0)
            .collect();
        if uncovered.is_empty() {
            break;
        }
        let v = (0..h.ground_size)
            .max_by_key(|&v| uncovered.iter().filter(|t| t.contains(v)).count())
            .unwrap();
        greedy.insert(v);
    }
    let mut best = greedy;
    recurse(&targets, &mut current, &mut best);
    Ok(best)
}

/// Greedy hitting set for a family of vertex subsets, each of size at least
/// min_fraction * N. The guarantee is
/// |X| <= ceil(ln(#sets) / -ln(1 - min_fraction)).
pub fn greedy_transversal(universe: usize, sets: &[VSet], min_fraction: Frac) -> Result<Vec<usize>, NetsError> {
    for (i, s) in sets.iter().enumerate() {
        if !ge_frac_of(s.len(), min_fraction, universe) {
            return Err(NetsError::SizeFloor(i));
        }
    }
    let mut picks = Vec::new();
    let mut alive: Vec<usize> = (0..sets.len()).collect();
    while !alive.is_empty() {
        let v = (0..universe)
            .max_by_key(|&v| alive.iter().filter(|&&i| sets[i].contains(v)).count())
            .unwrap();
        picks.push(v);
        alive.retain(|&i| !sets[i].contains(v));
    }
    Ok(picks)
}

pub fn greedy_transversal_bound(num_sets: usize, min_fraction: Frac) -> usize {
    if num_sets == 0 {
        return 0;
    }
    let q = *min_fraction.numer() as f64 / *min_fraction.denom() as f64;
    ((num_sets as f64).ln() / -(1.0 - q).ln()).ceil().max(1.0) as usize
}

pub const LCM_CAP: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct ReplicatedHypergraph {
    pub hypergraph: TriHypergraph,
    /// original vertex of each copy
    pub vertex_map: Vec<usize>,
    /// N = lcm of the weight denominators
    pub scale: u64,
}

/// Duplicate vertex v into N*omega(v) copies (N = lcm of denominators);
/// zero-weight vertices are dropped and tri-edges lifted copy-wise.
pub fn replicate_by_weights(h: &TriHypergraph, weights: &[Frac]) -> Result<ReplicatedHypergraph, NetsError> {
    assert_eq!(weights.len(), h.ground_size);
    assert!(weights.iter().all(|w| *w >= Frac::zero()), "negative weight");
    if weights.iter().all(|w| w.is_zero()) {
        return Err(NetsError::ZeroWeights);
    }
    let mut n_scale: u64 = 1;
    for w in weights {
        n_scale = n_scale.lcm(&(*w.denom() as u64));
        if n_scale > LCM_CAP {
            return Err(NetsError::LcmOverflow(LCM_CAP));
        }
    }
    let mut vertex_map = Vec::new();
    let mut copies_of: Vec<Vec<usize>> = vec![Vec::new(); h.ground_size];
    for (v, w) in weights.iter().enumerate() {
        let count = (*w * Frac::from_integer(n_scale as i64)).to_integer() as usize;
        for _ in 0..count {
            copies_of[v].push(vertex_map.len());
            vertex_map.push(v);
        }
    }
    let m = vertex_map.len();
    let edges = h
        .edges
        .iter()
        .map(|e| {
            let mut b = VSet::empty(m);
            let mut r = VSet::empty(m);
            for (new, &old) in vertex_map.iter().enumerate() {
                if e.black.contains(old) {
                    b.insert(new);
                } else if e.red.contains(old) {
                    r.insert(new);
                }
            }
            TriEdge::from_black_red(b, r).unwrap()
        })
        .collect();
    Ok(ReplicatedHypergraph {
        hypergraph: TriHypergraph::new(m, edges),
        vertex_map,
        scale: n_scale,
    })
}

pub const COVERING_MAX_RETRIES: usize = 6;

#[derive(Debug, Clone, Serialize)]
pub struct CoveringReport {
    pub covering: Vec<usize>,
    pub rounds_used: usize,
    pub sample_size: usize,
}

/// X with union of D_eps(x) = V, by delta-net sampling over the
/// disjointness-trigraph's neighborhood hypergraph with d = ceil(1/eps).
/// Redraws with doubled sample size on validation failure, up to
/// [`COVERING_MAX_RETRIES`] rounds.
pub fn epsilon_covering(f: &SetSystem, eps: Frac, seed: u64) -> Result<CoveringReport, NetsError> {
    let n = f.ground_size;
    assert!(n > 0);
    let delta = f.disjointness_ratio();
    if delta.is_zero() {
        return Err(NetsError::ZeroDisjointness);
    }
    let d = (Frac::from_integer(1) / eps).ceil().to_integer().max(1) as usize;
    let base = tau_p(
        d,
        *delta.numer() as f64 / *delta.denom() as f64,
        0.5,
    );
    let d_eps: Vec<VSet> = (0..n).map(|x| f.disjoint_set(x, eps)).collect();
    for round in 0..COVERING_MAX_RETRIES {
        let size = (base << round).min(64 * n.max(1));
        let mut rng = derive_rng(seed, "epsilon-covering", round as u64);
        let sample = VSet::from_iter(n, (0..size).map(|_| rng.gen_range(0..n)));
        let mut covered = VSet::empty(n);
        for x in sample.iter() {
            covered = covered.union(&d_eps[x]);
        }
        if covered.len() == n {
            // shrink greedily: drop members whose D_eps is redundant
            let mut picks: Vec<usize> = sample.to_vec();
            let mut i = 0;
            while i < picks.len() {
                let without: VSet = picks
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(VSet::empty(n), |acc, (_, &x)| acc.union(&d_eps[x]));
                if without.len() == n {
                    picks.remove(i);
                } else {
                    i += 1;
                }
            }
            return Ok(CoveringReport {
                covering: picks,
                rounds_used: round + 1,
                sample_size: size,
            });
        }
    }
    Err(NetsError::RetriesExhausted(COVERING_MAX_RETRIES))
}

/// Independent validator: does the union of D_eps(x) over X cover V?
pub fn validate_covering(f: &SetSystem, eps: Frac, x: &[usize]) -> bool {
    let mut covered = VSet::empty(f.ground_size);
    for &v in x {
        covered = covered.union(&f.disjoint_set(v, eps));
    }
    covered.len() == f.ground_size
}
