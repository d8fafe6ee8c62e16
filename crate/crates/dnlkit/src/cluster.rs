//! Refined tri-hypergraphs of differences, the three epsilon-clustering
//! constructions with exhaustive validators, and the ultra-strong regularity
//! partition.
//!
//! Clusterings are produced by signature keys over a sampled net and are
//! never trusted: every public constructor re-validates its output against
//! the raw data (set intersections or distances) and retries with a doubled
//! net on failure.

use crate::bits::VSet;
use crate::core::{frac, le_frac_of, Frac, SetSystem, TriEdge, TriGraph, TriHypergraph};
use crate::metric::{
    embed_euclidean_to_hamming, hamming_distance, Geometry, MetricError, PointCloud, GUARD_BAND,
};
use crate::nets::tau_p;
use crate::rng::derive_rng;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("clustering validation failed after {rounds} rounds ({violations} violating pairs remained)")]
    Validation { rounds: usize, violations: usize },
    #[error("red-edge hypothesis violated: {red} red edges exceeds eta^2 n^2 / 8 = {bound}")]
    RedHypothesis { red: usize, bound: String },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("geometry mismatch: expected {0}")]
    Geometry(&'static str),
}

pub const CLUSTER_MAX_ROUNDS: usize = 6;
/// above this ground size the pair validator samples instead of enumerating
pub const EXHAUSTIVE_VALIDATION_MAX_N: usize = 500;
pub const SAMPLED_VALIDATION_PAIRS: usize = 100_000;

/// Frozen net dimension for refined-differences nets: ceil((8/e) ln(12/e)).
pub fn refined_net_dimension(eps: f64) -> usize {
    assert!(eps > 0.0 && eps <= 1.0);
    ((8.0 / eps) * (12.0 / eps).ln()).ceil() as usize
}

#[derive(Debug, Clone, Serialize)]
pub struct Clustering {
    pub parts: Vec<VSet>,
    /// one key per part; same key iff same part
    pub signature_keys: Vec<String>,
    /// vertex indices of the sampled net
    pub net: Vec<usize>,
}

impl Clustering {
    fn from_keys(n: usize, keys: Vec<String>, net: Vec<usize>) -> Self {
        // group by key; parts ordered by their lowest vertex
        let mut order: Vec<String> = Vec::new();
        let mut parts: Vec<VSet> = Vec::new();
        for (v, key) in keys.iter().enumerate() {
            match order.iter().position(|k| k == key) {
                Some(i) => parts[i].insert(v),
                None => {
                    order.push(key.clone());
                    parts.push(VSet::singleton(n, v));
                }
            }
        }
        Clustering { parts, signature_keys: order, net }
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.parts.iter().position(|p| p.contains(v)).expect("vertex not covered")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checked_pairs: usize,
    pub violations: Vec<(usize, usize)>,
    pub sampled: bool,
}

impl ValidationReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Refined tri-hypergraph of differences
// ---------------------------------------------------------------------------

pub enum DiffKind<'a> {
    Disjointness { f: &'a SetSystem, eps: Frac },
    Hamming { p: &'a PointCloud, tau: f64, eps: f64 },
}

/// Split the red band at its midpoint and take T1 \ T2: one tri-edge per
/// ordered pair (v, w), with x black iff x is close to v and far from w, and
/// white iff x is far-ish from v or close-ish to w.
pub fn refined_differences(kind: &DiffKind) -> Result<TriHypergraph, ClusterError> {
    match kind {
        DiffKind::Disjointness { f, eps } => Ok(refined_differences_sets(f, *eps)),
        DiffKind::Hamming { p, tau, eps } => refined_differences_hamming(p, *tau, *eps),
    }
}

fn co_membership_matrix(f: &SetSystem) -> Vec<Vec<usize>> {
    let n = f.ground_size;
    let fx: Vec<VSet> = (0..n).map(|x| f.sets_containing(x)).collect();
    (0..n)
        .map(|x| (0..n).map(|v| fx[x].intersection_size(&fx[v])).collect())
        .collect()
}

/// Disjointness bands: black iff F_xv empty and |F_xw| > eps|F|; red band
/// between the eps/2 midpoints.
pub fn refined_differences_sets(f: &SetSystem, eps: Frac) -> TriHypergraph {
    let n = f.ground_size;
    let m = f.size();
    let co = co_membership_matrix(f);
    let half = eps * frac(1, 2);
    let mut edges = Vec::with_capacity(n * n);
    for v in 0..n {
        for w in 0..n {
            let mut black = VSet::empty(n);
            let mut red = VSet::empty(n);
            for x in 0..n {
                let close_v = co[x][v] == 0;
                let nearish_v = le_frac_of(co[x][v], half, m);
                let far_w = !le_frac_of(co[x][w], eps, m);
                let farish_w = !le_frac_of(co[x][w], half, m);
                if close_v && far_w {
                    black.insert(x);
                } else if nearish_v && farish_w {
                    red.insert(x);
                }
            }
            edges.push(TriEdge::from_black_red(black, red).unwrap());
        }
    }
    TriHypergraph::new(n, edges)
}

/// Hamming bands of Fig-style semantics: black iff d(x,v) <= tau N and
/// d(x,w) > (tau+eps) N; white iff d(x,v) >= (tau+eps/2) N or
/// d(x,w) <= (tau+eps/2) N.
pub fn refined_differences_hamming(
    p: &PointCloud,
    tau: f64,
    eps: f64,
) -> Result<TriHypergraph, ClusterError> {
    if p.geometry != Geometry::Hamming {
        return Err(ClusterError::Geometry("hamming"));
    }
    let n = p.len();
    let nn = p.dimension as f64;
    let bits = p.bits();
    let d: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|v| hamming_distance(&bits[x], &bits[v])).collect())
        .collect();
    let t0 = tau * nn + GUARD_BAND;
    let t1 = (tau + eps / 2.0) * nn + GUARD_BAND;
    let t2 = (tau + eps) * nn + GUARD_BAND;
    let mut edges = Vec::with_capacity(n * n);
    for v in 0..n {
        for w in 0..n {
            let mut black = VSet::empty(n);
            let mut red = VSet::empty(n);
            for x in 0..n {
                let dv = d[x][v] as f64;
                let dw = d[x][w] as f64;
                if dv <= t0 && dw > t2 {
                    black.insert(x);
                } else if dv <= t1 && dw > t1 {
                    red.insert(x);
                }
            }
            edges.push(TriEdge::from_black_red(black, red).unwrap());
        }
    }
    Ok(TriHypergraph::new(n, edges))
}

// ---------------------------------------------------------------------------
// Net sampling shared by the clusterings
// ---------------------------------------------------------------------------

fn sample_net(n: usize, size: usize, seed: u64, label: &str, round: usize) -> Vec<usize> {
    let mut rng = derive_rng(seed, label, round as u64);
    let dedup = VSet::from_iter(n, (0..size).map(|_| rng.gen_range(0..n)));
    dedup.to_vec()
}

fn same_part_pairs(parts: &[VSet]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for p in parts {
        let vs = p.to_vec();
        for i in 0..vs.len() {
            for j in (i + 1)..vs.len() {
                out.push((vs[i], vs[j]));
            }
        }
    }
    out
}

/// Pair loop shared by the validators: exhaustive at desk scale, sampled
/// (and labeled as such) above [`EXHAUSTIVE_VALIDATION_MAX_N`].
fn validate_pairs<FV: Fn(usize, usize) -> bool>(
    n: usize,
    parts: &[VSet],
    violates: FV,
    seed: u64,
) -> ValidationReport {
    if n <= EXHAUSTIVE_VALIDATION_MAX_N {
        let pairs = same_part_pairs(parts);
        let violations: Vec<(usize, usize)> =
            pairs.iter().copied().filter(|&(u, v)| violates(u, v)).collect();
        ValidationReport { checked_pairs: pairs.len(), violations, sampled: false }
    } else {
        let mut rng = derive_rng(seed, "cluster-validate-sample", 0);
        let part_of: Vec<usize> = {
            let mut ids = vec![0; n];
            for (i, p) in parts.iter().enumerate() {
                for v in p.iter() {
                    ids[v] = i;
                }
            }
            ids
        };
        let mut checked = 0;
        let mut violations = Vec::new();
        for _ in 0..SAMPLED_VALIDATION_PAIRS {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u == v || part_of[u] != part_of[v] {
                continue;
            }
            checked += 1;
            if violates(u, v) {
                violations.push((u, v));
            }
        }
        ValidationReport { checked_pairs: checked, violations, sampled: true }
    }
}

// ---------------------------------------------------------------------------
// Set-system clustering
// ---------------------------------------------------------------------------

/// Same-part pairs (u, v) must satisfy |D(u) \ D_eps(v)| <= eta |V|,
/// re-derived from raw set intersections.
pub fn validate_set_clustering(
    f: &SetSystem,
    eps: Frac,
    eta: Frac,
    parts: &[VSet],
    seed: u64,
) -> ValidationReport {
    let n = f.ground_size;
    let d0: Vec<VSet> = (0..n).map(|x| f.disjoint_set(x, Frac::zero())).collect();
    let de: Vec<VSet> = (0..n).map(|x| f.disjoint_set(x, eps)).collect();
    validate_pairs(
        n,
        parts,
        |u, v| {
            let a = d0[u].difference(&de[v]).len();
            let b = d0[v].difference(&de[u]).len();
            !le_frac_of(a.max(b), eta, n)
        },
        seed,
    )
}

/// Cluster by the bit vector [ |F_vx| <= eps|F|/2 : x in X ] over an eta-net
/// X of the refined differences.
pub fn set_system_clustering(
    f: &SetSystem,
    eps: Frac,
    eta: Frac,
    seed: u64,
) -> Result<(Clustering, ValidationReport), ClusterError> {
    let n = f.ground_size;
    assert!(n > 0);
    let m = f.size();
    let co = co_membership_matrix(f);
    let half = eps * frac(1, 2);
    let d = refined_net_dimension(eps.to_f64().unwrap());
    let base = tau_p(d, eta.to_f64().unwrap(), 0.5);
    let mut last = 0;
    for round in 0..CLUSTER_MAX_ROUNDS {
        let net = sample_net(n, base << round, seed, "set-cluster-net", round);
        let keys: Vec<String> = (0..n)
            .map(|v| {
                net.iter()
                    .map(|&x| if le_frac_of(co[v][x], half, m) { '1' } else { '0' })
                    .collect()
            })
            .collect();
        let clustering = Clustering::from_keys(n, keys, net);
        assert!(clustering.parts.len() <= 1usize << clustering.net.len().min(60));
        let report = validate_set_clustering(f, eps, eta, &clustering.parts, seed);
        if report.clean() {
            return Ok((clustering, report));
        }
        last = report.violations.len();
    }
    Err(ClusterError::Validation { rounds: CLUSTER_MAX_ROUNDS, violations: last })
}

// ---------------------------------------------------------------------------
// Hamming clustering
// ---------------------------------------------------------------------------

/// Same-part pairs (u, v): at most eta n points w with d_H(u,w) >= cN and
/// d_H(v,w) <= (c - eps) N (in either orientation).
pub fn validate_hamming_clustering(
    p: &PointCloud,
    c: f64,
    eps: f64,
    eta: Frac,
    parts: &[VSet],
    seed: u64,
) -> ValidationReport {
    let n = p.len();
    let nn = p.dimension as f64;
    let bits = p.bits();
    let far: Vec<VSet> = (0..n)
        .map(|v| {
            VSet::from_iter(
                n,
                (0..n).filter(|&w| hamming_distance(&bits[v], &bits[w]) as f64 >= c * nn - GUARD_BAND),
            )
        })
        .collect();
    let near: Vec<VSet> = (0..n)
        .map(|v| {
            VSet::from_iter(
                n,
                (0..n)
                    .filter(|&w| hamming_distance(&bits[v], &bits[w]) as f64 <= (c - eps) * nn + GUARD_BAND),
            )
        })
        .collect();
    validate_pairs(
        n,
        parts,
        |u, v| {
            let a = far[u].intersect(&near[v]).len();
            let b = far[v].intersect(&near[u]).len();
            !le_frac_of(a.max(b), eta, n)
        },
        seed,
    )
}

/// Cluster by the band signature [ d_H(v,x) <= (c - eps/2) N : x in X ].
pub fn hamming_clustering(
    p: &PointCloud,
    c: f64,
    eps: f64,
    eta: Frac,
    seed: u64,
) -> Result<(Clustering, ValidationReport), ClusterError> {
    if p.geometry != Geometry::Hamming {
        return Err(ClusterError::Geometry("hamming"));
    }
    let n = p.len();
    assert!(n > 0);
    let nn = p.dimension as f64;
    let bits = p.bits();
    let mid = (c - eps / 2.0) * nn + GUARD_BAND;
    let d = refined_net_dimension(eps);
    let base = tau_p(d, eta.to_f64().unwrap(), 0.5);
    let mut last = 0;
    for round in 0..CLUSTER_MAX_ROUNDS {
        let net = sample_net(n, base << round, seed, "hamming-cluster-net", round);
        let keys: Vec<String> = (0..n)
            .map(|v| {
                net.iter()
                    .map(|&x| {
                        if (hamming_distance(&bits[v], &bits[x]) as f64) <= mid { '1' } else { '0' }
                    })
                    .collect()
            })
            .collect();
        let clustering = Clustering::from_keys(n, keys, net);
        assert!(clustering.parts.len() <= 1usize << clustering.net.len().min(60));
        let report = validate_hamming_clustering(p, c, eps, eta, &clustering.parts, seed);
        if report.clean() {
            return Ok((clustering, report));
        }
        last = report.violations.len();
    }
    Err(ClusterError::Validation { rounds: CLUSTER_MAX_ROUNDS, violations: last })
}

// ---------------------------------------------------------------------------
// Euclidean clustering
// ---------------------------------------------------------------------------

/// Same-part pairs (u, v): at most eta |V| points w in B(u,1) \ B(v,1+eps)
/// (either orientation), straight from the distances.
pub fn validate_euclidean_clustering(
    p: &PointCloud,
    eps: f64,
    eta: Frac,
    parts: &[VSet],
    seed: u64,
) -> ValidationReport {
    let n = p.len();
    let inball: Vec<VSet> = (0..n)
        .map(|v| VSet::from_iter(n, (0..n).filter(|&w| p.distance(v, w) <= 1.0 + GUARD_BAND)))
        .collect();
    let outside: Vec<VSet> = (0..n)
        .map(|v| VSet::from_iter(n, (0..n).filter(|&w| p.distance(v, w) > 1.0 + eps + GUARD_BAND)))
        .collect();
    validate_pairs(
        n,
        parts,
        |u, v| {
            let a = inball[u].intersect(&outside[v]).len();
            let b = inball[v].intersect(&outside[u]).len();
            !le_frac_of(a.max(b), eta, n)
        },
        seed,
    )
}

/// Greedy maximal 2-separated eta-heavy centers; each ball of radius 3 is
/// translated, embedded into the Hamming cube, and pre-clustered there; the
/// final key combines ball memberships with the per-ball part ids.
pub fn euclidean_clustering(
    p: &PointCloud,
    eps: f64,
    eta: Frac,
    seed: u64,
) -> Result<(Clustering, ValidationReport), ClusterError> {
    if p.geometry != Geometry::Euclidean {
        return Err(ClusterError::Geometry("euclidean"));
    }
    let n = p.len();
    assert!(n > 0);
    let pts = p.reals();
    // eta-heavy: at least eta |V| points within distance 1
    let heavy: Vec<bool> = (0..n)
        .map(|v| {
            let cnt = (0..n).filter(|&w| p.distance(v, w) <= 1.0 + GUARD_BAND).count();
            frac(cnt as i64, 1) >= eta * frac(n as i64, 1)
        })
        .collect();
    let mut centers: Vec<usize> = Vec::new();
    for v in 0..n {
        if heavy[v] && centers.iter().all(|&z| p.distance(v, z) > 2.0 + GUARD_BAND) {
            centers.push(v);
        }
    }
    let balls: Vec<VSet> = centers
        .iter()
        .map(|&z| VSet::from_iter(n, (0..n).filter(|&v| p.distance(v, z) <= 3.0 + GUARD_BAND)))
        .collect();

    let mut last = 0;
    for round in 0..3 {
        let mut keys: Vec<String> = vec![String::new(); n];
        let mut net: Vec<usize> = Vec::new();
        let mut failed = false;
        for (i, (&z, ball)) in centers.iter().zip(&balls).enumerate() {
            let members = ball.to_vec();
            let translated: Vec<Vec<f64>> = members
                .iter()
                .map(|&v| pts[v].iter().zip(&pts[z]).map(|(a, b)| a - b).collect())
                .collect();
            let sub = PointCloud::euclidean(p.dimension, translated)?;
            let mut srng = derive_rng(seed, "euclid-ball-seed", (round * 1000 + i) as u64);
            let subseed: u64 = srng.gen();
            let emb = match embed_euclidean_to_hamming(&sub, eps, subseed) {
                Ok(e) => e,
                Err(MetricError::GapFailure { .. }) => {
                    failed = true;
                    break;
                }
                Err(e) => return Err(e.into()),
            };
            // threshold c_i: close pairs land at <= cert.threshold bits, far
            // pairs at >= cert.threshold + eps^2 N
            let ci = emb.certificate.threshold / emb.bits as f64 + eps * eps;
            let (pre, _) = match hamming_clustering(&emb.cloud, ci, eps * eps, eta, subseed) {
                Ok(x) => x,
                Err(ClusterError::Validation { violations, .. }) => {
                    last = violations;
                    failed = true;
                    break;
                }
                Err(e) => return Err(e),
            };
            for &x in &pre.net {
                net.push(members[x]);
            }
            for (j, &v) in members.iter().enumerate() {
                keys[v].push_str(&format!("b{i}p{};", pre.part_of(j)));
            }
        }
        if failed {
            continue;
        }
        for key in keys.iter_mut() {
            if key.is_empty() {
                key.push('-');
            }
        }
        let clustering = Clustering::from_keys(n, keys, net);
        let report = validate_euclidean_clustering(p, eps, eta, &clustering.parts, seed);
        if report.clean() {
            return Ok((clustering, report));
        }
        last = report.violations.len();
    }
    Err(ClusterError::Validation { rounds: 3, violations: last })
}

// ---------------------------------------------------------------------------
// Ultra-strong regularity
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct RegularityPartition {
    pub parts: Vec<VSet>,
    pub non_homogeneous_pairs: Vec<(usize, usize)>,
    pub eta: Frac,
    pub bad_fraction: Frac,
}

fn pair_is_homogeneous(t: &TriGraph, a: &VSet, b: &VSet, eta: Frac) -> bool {
    let mut edges = 0usize;
    let mut whites = 0usize;
    for u in a.iter() {
        edges += t.neighbors(u).intersection_size(b);
        whites += t.non_neighbors(u).intersection_size(b);
    }
    let total = a.len() * b.len();
    le_frac_of(edges, eta, total) || le_frac_of(whites, eta, total)
}

/// Equitable regularity partition of the disjointness-trigraph of F at
/// sensitivity eps: cluster at (eps, eta^2/16), chop equitably into
/// K = max(ceil(8/eta), ceil(4t/eta)) parts (t = cluster count), then report
/// every pair of parts failing eta-homogeneity.
pub fn regularity_partition(
    f: &SetSystem,
    eps: Frac,
    eta: Frac,
    seed: u64,
) -> Result<RegularityPartition, ClusterError> {
    let n = f.ground_size;
    let t = f.disjointness_trigraph(eps);
    let red = t.red_count();
    let bound = eta * eta * frac((n * n) as i64, 8);
    if frac(red as i64, 1) > bound {
        return Err(ClusterError::RedHypothesis { red, bound: bound.to_string() });
    }
    let delta = eta * eta * frac(1, 16);
    let (clustering, _) = set_system_clustering(f, eps, delta, seed)?;
    let tclusters = clustering.parts.len();
    let eta_f = eta.to_f64().unwrap();
    let k = ((8.0 / eta_f).ceil() as usize)
        .max(((4.0 * tclusters as f64) / eta_f).ceil() as usize)
        .min(n)
        .max(1);

    // vertices in cluster order (clusters and members already index-sorted),
    // sliced into K runs of near-equal length: cuts respect cluster
    // boundaries except where a run must straddle into the next cluster
    let ordered: Vec<usize> = clustering.parts.iter().flat_map(|p| p.to_vec()).collect();
    let small = n / k;
    let rem = n % k;
    let mut parts = Vec::with_capacity(k);
    let mut at = 0;
    for i in 0..k {
        let size = if i < rem { small + 1 } else { small };
        parts.push(VSet::from_iter(n, ordered[at..at + size].iter().copied()));
        at += size;
    }
    parts.retain(|p| !p.is_empty());

    let mut bad = Vec::new();
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            if !pair_is_homogeneous(&t, &parts[i], &parts[j], eta) {
                bad.push((i, j));
            }
        }
    }
    let total_pairs = parts.len() * (parts.len() - 1) / 2;
    let bad_fraction = if total_pairs == 0 {
        Frac::zero()
    } else {
        frac(bad.len() as i64, total_pairs as i64)
    };
    Ok(RegularityPartition { parts, non_homogeneous_pairs: bad, eta, bad_fraction })
}

// ---------------------------------------------------------------------------
// Conflicts
// ---------------------------------------------------------------------------

/// Ordered triples (a, b, b') with a on one side, b, b' on the other, one of
/// ab, ab' an edge and the other a non-edge (white). Counts both the
/// V1-conflicts and the V2-conflicts.
pub fn count_conflicts(t: &TriGraph, v1: &VSet, v2: &VSet) -> u64 {
    assert!(v1.is_disjoint(v2), "slices must be disjoint");
    let side = |from: &VSet, to: &VSet| -> u64 {
        from.iter()
            .map(|a| {
                let e = t.neighbors(a).intersection_size(to) as u64;
                let w = t.non_neighbors(a).intersection_size(to) as u64;
                2 * e * w
            })
            .sum()
    };
    side(v1, v2) + side(v2, v1)
}
