//! Instance generators: the named extremal graphs, Schrijver / Kneser /
//! Schrijver-Hajnal families, Borsuk-Hajnal sphere constructions, the
//! regular K_t-free threshold constructions, and seeded random instances.
//!
//! Every generator validates its own output (regularity, triangle-freeness,
//! K_t-freeness, permutation validity) before returning it.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bits::VSet;
use crate::chromatic::{find_clique, is_kt_free, is_triangle_free, SimpleGraph};
use crate::core::{frac, Frac, PairStatus, SetSystem, TriGraph, TriGraphBuilder, TriTournament};
use crate::metric::PointCloud;
use crate::rng::derive_rng;
use crate::tournament::VoterProfile;

pub const SUBSET_GRAPH_CAP: usize = 100_000;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("unknown graph name: {0}")]
    UnknownName(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

// ---------------------------------------------------------------------------
// Named graphs

/// SHA-256 of the DIMACS serialization, frozen; regenerating a named graph
/// must reproduce these bytes exactly.
pub const NAMED_DIGESTS: [(&str, &str); 4] = [
    ("petersen", "5fca6893ea4a948173525c2ade6ff09b9fc5fa496c2517b212d6929c930ed4cd"),
    ("grotzsch", "3f0f7fa0c703a536e444c5bc0b429abd5044540d81333b43800e9d5a9e50a670"),
    ("haggkvist", "d18b6f5b9d437fd035738d78d84263c7d8873269c90e102533e3bb93f57301f3"),
    ("brandt12", "2b487b1c4531edf9dc9974c3c0bbf29036aa19406e08b437db72fd29831da28e"),
];

pub fn named_graph(name: &str) -> Result<SimpleGraph, GenError> {
    match name {
        "petersen" => Ok(petersen()),
        "grotzsch" => Ok(grotzsch()),
        "haggkvist" => Ok(haggkvist()),
        "brandt12" => Ok(brandt12()),
        other => Err(GenError::UnknownName(other.to_string())),
    }
}

pub fn named_graph_digest(name: &str) -> Result<String, GenError> {
    let g = named_graph(name)?;
    let mut hasher = Sha256::new();
    hasher.update(g.to_dimacs().as_bytes());
    Ok(hex_string(&hasher.finalize()))
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn petersen() -> SimpleGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5)); // outer cycle
        edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
        edges.push((i, 5 + i)); // spokes
    }
    SimpleGraph::from_edges(10, &edges)
}

/// Vertices 0..4 outer cycle u_i, 5..9 mirror vertices v_i adjacent to the
/// cycle neighbors of u_i, 10 the hub adjacent to every v_i.
fn grotzsch() -> SimpleGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, (i + 4) % 5));
        edges.push((5 + i, (i + 1) % 5));
        edges.push((5 + i, 10));
    }
    SimpleGraph::from_edges(11, &edges)
}

fn blow_up_weighted(n_base: usize, edges: &[(usize, usize)], weights: &[usize]) -> SimpleGraph {
    assert_eq!(weights.len(), n_base);
    let offsets: Vec<usize> = weights
        .iter()
        .scan(0, |acc, w| {
            let o = *acc;
            *acc += w;
            Some(o)
        })
        .collect();
    let n: usize = weights.iter().sum();
    let mut g = SimpleGraph::new(n);
    for &(u, v) in edges {
        for i in 0..weights[u] {
            for j in 0..weights[v] {
                g.add_edge(offsets[u] + i, offsets[v] + j);
            }
        }
    }
    g
}

/// The 29-vertex 10-regular triangle-free 4-chromatic graph: the weighted
/// blow-up of the Grotzsch graph with cycle vertices tripled, mirror
/// vertices doubled, and the hub quadrupled.
fn haggkvist() -> SimpleGraph {
    let base = grotzsch();
    let weights = [3, 3, 3, 3, 3, 2, 2, 2, 2, 2, 4];
    let g = blow_up_weighted(11, &base.edges(), &weights);
    debug_assert_eq!(g.ground_size(), 29);
    debug_assert_eq!(g.regular_degree(), Some(10));
    g
}

/// Brandt's 12-vertex graph: u_1..u_4 (0..3), w_1..w_4 (4..7), x (8),
/// y (9), v_2 (10), v_3 (11). u_i is adjacent to every w_j with j != i;
/// x hangs on u_1,w_1, y on u_4,w_4, and v_2, v_3 connect u_2/w_2 resp.
/// u_3/w_3 to both x and y.
fn brandt12() -> SimpleGraph {
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                edges.push((i, 4 + j));
            }
        }
    }
    edges.extend([
        (8, 0),
        (8, 4), // x - u1, w1
        (9, 3),
        (9, 7), // y - u4, w4
        (10, 1),
        (10, 5),
        (10, 8),
        (10, 9), // v2 - u2, w2, x, y
        (11, 2),
        (11, 6),
        (11, 8),
        (11, 9), // v3 - u3, w3, x, y
    ]);
    // dedupe the u-w block double counting
    let mut g = SimpleGraph::new(12);
    for (u, v) in edges {
        if !g.has_edge(u, v) {
            g.add_edge(u, v);
        }
    }
    g
}

// ---------------------------------------------------------------------------
// Kneser / Schrijver / Schrijver-Hajnal

#[derive(Clone, Debug, Serialize)]
pub struct SubsetGraph {
    pub graph: SimpleGraph,
    /// vertex i corresponds to this subset of the base cycle / ground set
    pub subsets: Vec<Vec<usize>>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn disjoint_pairs_graph(subsets: &[Vec<usize>]) -> SimpleGraph {
    let n = subsets.len();
    let mut g = SimpleGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if subsets[i].iter().all(|x| !subsets[j].contains(x)) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Kneser graph K(n, k): k-subsets of [n], edges between disjoint pairs.
pub fn kneser_graph(n: usize, k: usize) -> Result<SubsetGraph, GenError> {
    if binomial(n, k) > SUBSET_GRAPH_CAP as u128 {
        return Err(GenError::TooLarge(format!(
            "C({n},{k}) exceeds {SUBSET_GRAPH_CAP}"
        )));
    }
    let subsets = k_subsets(n, k);
    let graph = disjoint_pairs_graph(&subsets);
    Ok(SubsetGraph { graph, subsets })
}

/// Schrijver graph S(l, k): stable l-subsets of the cycle C_{2l+k}, edges
/// between disjoint pairs. chi = k + 2.
pub fn schrijver_graph(l: usize, k: usize) -> Result<SubsetGraph, GenError> {
    if l < 1 || k < 1 {
        return Err(GenError::Parameter("need l >= 1 and k >= 1".into()));
    }
    let nc = 2 * l + k;
    if binomial(nc, l) > SUBSET_GRAPH_CAP as u128 {
        return Err(GenError::TooLarge(format!(
            "C({nc},{l}) exceeds {SUBSET_GRAPH_CAP}"
        )));
    }
    let stable: Vec<Vec<usize>> = k_subsets(nc, l)
        .into_iter()
        .filter(|s| {
            s.windows(2).all(|w| w[1] - w[0] >= 2) && !(s.contains(&0) && s.contains(&(nc - 1)))
        })
        .collect();
    let graph = disjoint_pairs_graph(&stable);
    Ok(SubsetGraph {
        graph,
        subsets: stable,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SchrijverHajnal {
    pub graph: SimpleGraph,
    /// number of Schrijver vertices (they come first)
    pub schrijver_size: usize,
    /// the A blocks come next, one block per cycle element, each this big
    pub block_size: usize,
    pub blocks: usize,
    /// the B independent set comes last
    pub b_size: usize,
}

/// Schrijver-Hajnal graph SH(l, k) with block parameter K: S(l, k) plus an
/// independent set A of (2l+k) blocks of size l^K wired by membership, plus
/// an independent set B of size |A|/2 complete to A.
pub fn schrijver_hajnal(l: usize, k: usize, big_k: u32) -> Result<SchrijverHajnal, GenError> {
    let s = schrijver_graph(l, k)?;
    let blocks = 2 * l + k;
    let block_size = l
        .checked_pow(big_k)
        .ok_or_else(|| GenError::TooLarge("l^K overflows".into()))?;
    let a_size = blocks * block_size;
    if a_size % 2 != 0 {
        return Err(GenError::Parameter(
            "|A| must be even so that |B| = |A|/2 is integral".into(),
        ));
    }
    let b_size = a_size / 2;
    let s_size = s.graph.ground_size();
    let n = s_size + a_size + b_size;
    if n > SUBSET_GRAPH_CAP {
        return Err(GenError::TooLarge(format!("{n} vertices")));
    }
    let mut g = SimpleGraph::new(n);
    for (u, v) in s.graph.edges() {
        g.add_edge(u, v);
    }
    let a_off = s_size;
    let b_off = s_size + a_size;
    // X ~ every vertex of A_i for every i in X
    for (x, subset) in s.subsets.iter().enumerate() {
        for &i in subset {
            for j in 0..block_size {
                g.add_edge(x, a_off + i * block_size + j);
            }
        }
    }
    for a in 0..a_size {
        for b in 0..b_size {
            g.add_edge(a_off + a, b_off + b);
        }
    }
    // triangle-freeness needs l > k: for l <= k three pairwise disjoint
    // stable l-subsets fit inside the (2l+k)-cycle
    if l > k && n <= 2000 && !is_triangle_free(&g) {
        return Err(GenError::Verification("SH graph contains a triangle".into()));
    }
    Ok(SchrijverHajnal {
        graph: g,
        schrijver_size: s_size,
        block_size,
        blocks,
        b_size,
    })
}

// ---------------------------------------------------------------------------
// Borsuk-Hajnal sphere construction

#[derive(Clone, Debug, Serialize)]
pub struct BorsukHajnal {
    pub graph: SimpleGraph,
    pub x_size: usize,
    pub y_size: usize,
    pub z_size: usize,
    pub min_degree: usize,
    /// the realized deficit: min_degree >= (1/3 - eps_prime) * n
    pub eps_prime: f64,
}

fn unit_sphere_point(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

fn spherical_distance(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    dot.clamp(-1.0, 1.0).acos()
}

/// seeded rejection sampling with a minimum-separation filter, halving the
/// separation whenever it proves too strict
fn well_distributed(count: usize, dim: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut sep = std::f64::consts::PI / (count as f64).powf(1.0 / (dim as f64 - 1.0));
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut stale = 0usize;
    while points.len() < count {
        let p = unit_sphere_point(dim, rng);
        if points.iter().all(|q| spherical_distance(&p, q) >= sep) {
            points.push(p);
            stale = 0;
        } else {
            stale += 1;
            if stale > 200 {
                sep /= 2.0;
                stale = 0;
            }
        }
    }
    points
}

/// Borsuk-Hajnal graph on the sphere S^{d+1}: X with near-antipodal internal
/// edges (distance >= pi - eps), X-Y edges at distance <= pi/2 - eps, and an
/// abstract independent set Z of size |Y|/2 complete to Y.
pub fn borsuk_hajnal(
    d: usize,
    eps: f64,
    x_size: usize,
    y_size: usize,
    seed: u64,
) -> Result<BorsukHajnal, GenError> {
    if !(eps > 0.0 && eps < std::f64::consts::PI / 3.0) {
        return Err(GenError::Parameter("need 0 < eps < pi/3".into()));
    }
    let dim = d + 2; // S^{d+1} lives in R^{d+2}; d = 0 is the circle
    let z_size = y_size / 2;
    let n = x_size + y_size + z_size;
    if n > 20_000 {
        return Err(GenError::TooLarge(format!("{n} vertices")));
    }
    for round in 0..5u64 {
        let mut rng = derive_rng(seed, "borsuk-hajnal", round);
        let xs = well_distributed(x_size, dim, &mut rng);
        let ys = well_distributed(y_size, dim, &mut rng);
        let mut g = SimpleGraph::new(n);
        for i in 0..x_size {
            for j in i + 1..x_size {
                if spherical_distance(&xs[i], &xs[j]) >= std::f64::consts::PI - eps {
                    g.add_edge(i, j);
                }
            }
            for j in 0..y_size {
                if spherical_distance(&xs[i], &ys[j]) <= std::f64::consts::PI / 2.0 - eps {
                    g.add_edge(i, x_size + j);
                }
            }
        }
        for j in 0..y_size {
            for z in 0..z_size {
                g.add_edge(x_size + j, x_size + y_size + z);
            }
        }
        if !is_triangle_free(&g) {
            continue;
        }
        let min_degree = g.min_degree();
        let eps_prime = 1.0 / 3.0 - min_degree as f64 / n as f64;
        return Ok(BorsukHajnal {
            graph: g,
            x_size,
            y_size,
            z_size,
            min_degree,
            eps_prime,
        });
    }
    Err(GenError::Verification(
        "triangle persisted across resampling rounds".into(),
    ))
}

// ---------------------------------------------------------------------------
// O'Rourke regular K_t-free constructions

#[derive(Clone, Debug, Serialize)]
pub struct OrourkeInstance {
    pub graph: SimpleGraph,
    pub t: usize,
    pub degree: usize,
    pub core_size: usize,
    pub core_degree: usize,
    /// degree / n, the realized regular fraction (target r_t - eps)
    pub degree_ratio: f64,
}

/// Circulant Borsuk core on the circle: m evenly spaced points, edges
/// between near-antipodal pairs (circular index distance >= m/2 - w).
/// Exactly (2w+1)-regular and triangle-free whenever 3(m/2 - w) > m.
fn circulant_borsuk_core(m: usize, w: usize) -> SimpleGraph {
    assert!(m % 2 == 0 && w >= 1);
    let mut g = SimpleGraph::new(m);
    for i in 0..m {
        for j in i + 1..m {
            let d = (j - i).min(m - (j - i));
            if d >= m / 2 - w {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Regular K_t-free graph with degree ratio approaching r_t = (3t-8)/(3t-5)
/// from below: a near-(1/4 - eps)-regular triangle-free Borsuk core, then
/// t - 3 rounds of joining an independent set sized to restore exact
/// regularity. Every round preserves exact regularity and adds one to the
/// clique number, so the output is K_t-free with clique number t - 1.
pub fn orourke_regular(t: usize, eps: f64, scale: usize, _seed: u64) -> Result<OrourkeInstance, GenError> {
    if !(4..=5).contains(&t) {
        return Err(GenError::Parameter("t must be 4 or 5".into()));
    }
    if !(0.0..0.20).contains(&eps) {
        return Err(GenError::Parameter("need 0 <= eps < 0.2".into()));
    }
    let m = if scale % 2 == 0 { scale } else { scale + 1 };
    if m < 24 {
        return Err(GenError::Parameter("scale must be at least 24".into()));
    }
    // core degree 2w+1 targeting (1/4 - eps) m; triangle-freeness needs
    // w < m/6
    let target = ((0.25 - eps) * m as f64).round() as usize;
    let w = (target.saturating_sub(1) / 2).clamp(1, (m - 2) / 6);
    let mut g = circulant_borsuk_core(m, w);
    let core_degree = 2 * w + 1;
    if g.regular_degree() != Some(core_degree) {
        return Err(GenError::Verification("core is not regular".into()));
    }
    if !is_triangle_free(&g) {
        return Err(GenError::Verification("core has a triangle".into()));
    }
    let mut degree = core_degree;
    for _ in 0..t - 3 {
        let n_old = g.ground_size();
        let add = n_old - degree;
        let mut next = SimpleGraph::new(n_old + add);
        for (u, v) in g.edges() {
            next.add_edge(u, v);
        }
        for u in 0..n_old {
            for j in 0..add {
                next.add_edge(u, n_old + j);
            }
        }
        g = next;
        degree = n_old;
    }
    if g.regular_degree() != Some(degree) {
        return Err(GenError::Verification("output is not regular".into()));
    }
    if !is_kt_free(&g, t) {
        return Err(GenError::Verification(format!("output contains a K_{t}")));
    }
    if find_clique(&g, t - 1).is_none() {
        return Err(GenError::Verification(format!(
            "output should contain a K_{}",
            t - 1
        )));
    }
    let n = g.ground_size();
    Ok(OrourkeInstance {
        graph: g,
        t,
        degree,
        core_size: m,
        core_degree,
        degree_ratio: degree as f64 / n as f64,
    })
}

// ---------------------------------------------------------------------------
// Random instance families

pub fn random_tournament(n: usize, seed: u64) -> TriTournament {
    let mut rng = derive_rng(seed, "random-tournament", 0);
    let mut arcs = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if rng.gen_bool(0.5) {
                arcs.push((x, y));
            } else {
                arcs.push((y, x));
            }
        }
    }
    TriTournament::new(n, &arcs, &[]).expect("orientation is a tournament")
}

/// Random tournament where each non-arc direction independently becomes a
/// red buffer arc with probability p_red.
pub fn random_tri_tournament(n: usize, p_red: f64, seed: u64) -> TriTournament {
    let mut rng = derive_rng(seed, "random-tri-tournament", 0);
    let mut arcs = Vec::new();
    let mut red = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let (a, b) = if rng.gen_bool(0.5) { (x, y) } else { (y, x) };
            arcs.push((a, b));
            if rng.gen_bool(p_red) {
                red.push((b, a));
            }
        }
    }
    TriTournament::new(n, &arcs, &red).expect("red arcs reverse plain arcs")
}

pub fn random_profile(candidates: usize, voters: usize, seed: u64) -> VoterProfile {
    let mut rng = derive_rng(seed, "random-profile", 0);
    let orders: Vec<Vec<usize>> = (0..voters)
        .map(|_| {
            let mut order: Vec<usize> = (0..candidates).collect();
            for i in (1..candidates).rev() {
                let j = rng.gen_range(0..=i);
                order.swap(i, j);
            }
            order
        })
        .collect();
    VoterProfile::new(candidates, orders).expect("shuffles are permutations")
}

pub fn random_set_system(ground: usize, sets: usize, density: f64, seed: u64) -> SetSystem {
    let mut rng = derive_rng(seed, "random-set-system", 0);
    let sets = (0..sets)
        .map(|_| VSet::from_iter(ground, (0..ground).filter(|_| rng.gen_bool(density))))
        .collect();
    SetSystem::new(ground, sets)
}

pub fn random_trigraph(n: usize, p_edge: f64, p_red: f64, seed: u64) -> TriGraph {
    assert!(p_edge + p_red <= 1.0);
    let mut rng = derive_rng(seed, "random-trigraph", 0);
    let mut b = TriGraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let roll: f64 = rng.gen();
            let st = if roll < p_edge {
                PairStatus::Edge
            } else if roll < p_edge + p_red {
                PairStatus::Red
            } else {
                PairStatus::White
            };
            b.set(u, v, st);
        }
    }
    b.build()
}

#[derive(Clone, Debug, Serialize)]
pub struct DenseTfInstance {
    pub graph: SimpleGraph,
    /// base Andrasfai parameter; k = 2 is the C5 core
    pub core_k: usize,
    pub blob: usize,
    pub deleted_edges: usize,
}

/// The Andrasfai graph And(k): vertices Z_{3k-1}, i ~ j iff the cyclic
/// difference is 1 mod 3. Triangle-free, k-regular, And(2) = C5.
pub fn andrasfai(k: usize) -> SimpleGraph {
    assert!(k >= 1);
    let n = 3 * k - 1;
    let mut g = SimpleGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if (j - i) % 3 == 1 || (n - (j - i)) % 3 == 1 {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Dense triangle-free instance with min degree >= (1/3 + eps)n: a balanced
/// blow-up of an Andrasfai core (the deepest one whose degree fraction
/// clears the threshold), with optional noise that deletes random edges
/// while preserving the degree floor. Hypotheses re-verified before return.
pub fn dense_tf_graph(
    n: usize,
    eps: Frac,
    noise_deletions: usize,
    seed: u64,
) -> Result<DenseTfInstance, GenError> {
    if eps <= frac(0, 1) || eps >= frac(1, 15) {
        // And(2) = C5 gives fraction 2/5 = 1/3 + 1/15, the loosest core
        return Err(GenError::Parameter(
            "need 0 < eps < 1/15 for a blow-up core to exist".into(),
        ));
    }
    let threshold = frac(1, 3) + eps;
    let core_k = (2..=12)
        .rev()
        .find(|&k| frac(k as i64, 3 * k as i64 - 1) >= threshold)
        .expect("k = 2 always qualifies");
    let base = andrasfai(core_k);
    let nb = base.ground_size();
    let blob = n.div_ceil(nb).max(1);
    let mut g = blow_up_weighted(nb, &base.edges(), &vec![blob; nb]);
    let total = g.ground_size();
    // degree floor after blow-up: ceil(threshold * total)
    let need = threshold * frac(total as i64, 1);
    let floor = {
        let c = need.ceil();
        (*c.numer() / *c.denom()) as usize
    };
    let mut rng = derive_rng(seed, "dense-tf-noise", 0);
    let mut deleted = 0usize;
    let mut degrees: Vec<usize> = (0..total).map(|v| g.degree(v)).collect();
    for _ in 0..noise_deletions.saturating_mul(4) {
        if deleted == noise_deletions {
            break;
        }
        let u = rng.gen_range(0..total);
        let nbrs: Vec<usize> = g.neighbors(u).iter().collect();
        if nbrs.is_empty() {
            continue;
        }
        let v = nbrs[rng.gen_range(0..nbrs.len())];
        if degrees[u] > floor && degrees[v] > floor {
            g.remove_edge(u, v);
            degrees[u] -= 1;
            degrees[v] -= 1;
            deleted += 1;
        }
    }
    if !is_triangle_free(&g) {
        return Err(GenError::Verification("blow-up has a triangle".into()));
    }
    if frac(g.min_degree() as i64, 1) < need {
        return Err(GenError::Verification("degree floor violated".into()));
    }
    Ok(DenseTfInstance {
        graph: g,
        core_k,
        blob,
        deleted_edges: deleted,
    })
}

// ---------------------------------------------------------------------------
// Random point clouds

pub fn random_hamming_cloud(count: usize, nbits: usize, seed: u64) -> PointCloud {
    let mut rng = derive_rng(seed, "hamming-cloud", 0);
    let points = (0..count)
        .map(|_| VSet::from_iter(nbits, (0..nbits).filter(|_| rng.gen_bool(0.5))))
        .collect();
    PointCloud::hamming(nbits, points)
}

pub fn random_sphere_cloud(count: usize, dim: usize, seed: u64) -> PointCloud {
    let mut rng = derive_rng(seed, "sphere-cloud", 0);
    let points = (0..count).map(|_| unit_sphere_point(dim, &mut rng)).collect();
    PointCloud::sphere(dim, points).expect("normalized points")
}

/// Uniform points in the radius-3 ball. Dimension should be at least 10 so
/// that sub-unit pairs are rare, which is what the Euclidean embedding's gap
/// certificate needs to stay clean at moderate eps.
pub fn random_euclidean_ball_cloud(count: usize, dim: usize, seed: u64) -> PointCloud {
    let mut rng = derive_rng(seed, "euclidean-ball-cloud", 0);
    let points = (0..count)
        .map(|_| {
            let dir = unit_sphere_point(dim, &mut rng);
            let r = 3.0 * rng.gen::<f64>().powf(1.0 / dim as f64);
            dir.iter().map(|x| x * r).collect()
        })
        .collect();
    PointCloud::euclidean(dim, points).expect("dimensions match")
}

/// Tight groups far apart: group centers 25 apart on the first axis, points
/// jittered by at most 0.2 per coordinate. Suited to euclidean clustering
/// tests, where within-group distances stay below 1 and between-group
/// distances far above 3.
pub fn clustered_euclidean_cloud(
    groups: usize,
    per_group: usize,
    dim: usize,
    seed: u64,
) -> PointCloud {
    let mut rng = derive_rng(seed, "clustered-euclidean-cloud", 0);
    let mut points = Vec::with_capacity(groups * per_group);
    for gi in 0..groups {
        for _ in 0..per_group {
            let mut p = vec![0.0; dim];
            p[0] = 25.0 * gi as f64;
            for c in p.iter_mut() {
                *c += rng.gen_range(-0.2..0.2);
            }
            points.push(p);
        }
    }
    PointCloud::euclidean(dim, points).expect("dimensions match")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromatic::{chromatic_number, independence_number};

    #[test]
    fn named_graph_basics() {
        let p = named_graph("petersen").unwrap();
        assert_eq!(p.ground_size(), 10);
        assert_eq!(p.regular_degree(), Some(3));
        let g = named_graph("grotzsch").unwrap();
        assert_eq!(g.ground_size(), 11);
        assert!(is_triangle_free(&g));
        assert_eq!(chromatic_number(&g).unwrap(), 4);
        assert!(named_graph("nonsense").is_err());
    }

    #[test]
    fn haggkvist_properties() {
        let g = named_graph("haggkvist").unwrap();
        assert_eq!(g.ground_size(), 29);
        assert_eq!(g.regular_degree(), Some(10));
        assert!(is_triangle_free(&g));
        assert_eq!(chromatic_number(&g).unwrap(), 4);
    }

    #[test]
    fn brandt_properties() {
        let g = named_graph("brandt12").unwrap();
        assert_eq!(g.ground_size(), 12);
        assert_eq!(g.edge_count(), 24);
        assert_eq!(g.regular_degree(), Some(4));
        assert_eq!(independence_number(&g).unwrap(), 4);
    }

    #[test]
    fn named_digests_frozen() {
        for (name, frozen) in NAMED_DIGESTS {
            let digest = named_graph_digest(name).unwrap();
            assert_eq!(digest, frozen, "digest drift for {name}");
        }
    }

    #[test]
    fn schrijver_s22() {
        let s = schrijver_graph(2, 2).unwrap();
        assert_eq!(s.graph.ground_size(), 9);
        assert_eq!(chromatic_number(&s.graph).unwrap(), 4);
    }

    #[test]
    fn schrijver_inside_kneser() {
        let s = schrijver_graph(2, 2).unwrap();
        let k = kneser_graph(6, 2).unwrap();
        // map each stable subset to its Kneser vertex and compare adjacency
        let index_of = |sub: &Vec<usize>| k.subsets.iter().position(|t| t == sub).unwrap();
        for i in 0..s.subsets.len() {
            for j in i + 1..s.subsets.len() {
                let ki = index_of(&s.subsets[i]);
                let kj = index_of(&s.subsets[j]);
                assert_eq!(s.graph.has_edge(i, j), k.graph.has_edge(ki, kj));
            }
        }
    }

    #[test]
    fn schrijver_hajnal_structure() {
        let sh = schrijver_hajnal(3, 2, 2).unwrap();
        let g = &sh.graph;
        assert!(is_triangle_free(g));
        // printed deficit formula d = k * l^K / 2
        let a_size = sh.blocks * sh.block_size;
        let min_deg_a: usize = (0..sh.schrijver_size)
            .map(|x| {
                g.neighbors(x)
                    .iter()
                    .filter(|&v| v >= sh.schrijver_size && v < sh.schrijver_size + a_size)
                    .count()
            })
            .min()
            .unwrap();
        // k = 2, l^K = 9: deficit 2 * 9 / 2 = 9
        assert_eq!(a_size / 2 - min_deg_a, 2 * sh.block_size / 2);
        // chi(SH) >= 4 via the embedded S(2,2)
        let sh2 = schrijver_hajnal(2, 2, 2).unwrap();
        let s = schrijver_graph(2, 2).unwrap();
        for i in 0..s.graph.ground_size() {
            for j in 0..s.graph.ground_size() {
                if i != j {
                    assert_eq!(s.graph.has_edge(i, j), sh2.graph.has_edge(i, j));
                }
            }
        }
        assert_eq!(chromatic_number(&s.graph).unwrap(), 4);
    }

    #[test]
    fn borsuk_hajnal_triangle_free_with_degree_report() {
        let bh = borsuk_hajnal(1, 0.3, 12, 60, 3).unwrap();
        assert!(is_triangle_free(&bh.graph));
        let n = bh.graph.ground_size();
        assert_eq!(n, 12 + 60 + 30);
        let bound = ((1.0 / 3.0 - bh.eps_prime) * n as f64).floor() as usize;
        assert!(bh.min_degree >= bound);
    }

    #[test]
    fn borsuk_hajnal_circle_adjacency() {
        // d = 0 puts everything on the circle; check the X-internal rule
        // directly against pairwise angles
        let bh = borsuk_hajnal(0, 0.5, 8, 24, 1).unwrap();
        assert!(is_triangle_free(&bh.graph));
        // Z vertices see exactly Y
        let zoff = bh.x_size + bh.y_size;
        for z in zoff..bh.graph.ground_size() {
            assert_eq!(bh.graph.degree(z), bh.y_size);
        }
    }

    #[test]
    fn orourke_t4() {
        let inst = orourke_regular(4, 0.02, 40, 0).unwrap();
        assert!(is_kt_free(&inst.graph, 4));
        assert!(!is_kt_free(&inst.graph, 3));
        assert!(inst.graph.regular_degree().is_some());
        assert!((inst.degree_ratio - 4.0 / 7.0).abs() < 0.08);
        // sits below the 4/7 threshold
        assert!(inst.degree_ratio < 4.0 / 7.0);
    }

    #[test]
    fn orourke_t5() {
        let inst = orourke_regular(5, 0.02, 30, 0).unwrap();
        assert!(is_kt_free(&inst.graph, 5));
        assert!(!is_kt_free(&inst.graph, 4));
        assert!(inst.graph.regular_degree().is_some());
        assert!((inst.degree_ratio - 0.7).abs() < 0.08);
        assert!(inst.degree_ratio < 0.7);
    }

    #[test]
    fn random_generators_deterministic() {
        let a = random_tournament(5, 1);
        let b = random_tournament(5, 1);
        assert_eq!(a.arcs(), b.arcs());
        let p = random_profile(10, 7, 3);
        assert_eq!(p.orders.len(), 7);
        let p2 = random_profile(10, 7, 3);
        assert_eq!(p.orders, p2.orders);
        let t = random_tri_tournament(8, 0.3, 5);
        let t2 = random_tri_tournament(8, 0.3, 5);
        assert_eq!(t.red_arcs(), t2.red_arcs());
        let s = random_set_system(12, 20, 0.4, 9);
        assert_eq!(s.size(), 20);
        let tg = random_trigraph(10, 0.4, 0.1, 4);
        let tg2 = random_trigraph(10, 0.4, 0.1, 4);
        assert_eq!(tg.edge_count(), tg2.edge_count());
        assert_eq!(tg.red_count(), tg2.red_count());
    }

    #[test]
    fn dense_tf_instances() {
        let inst = dense_tf_graph(200, frac(1, 20), 0, 7).unwrap();
        let g = &inst.graph;
        assert!(is_triangle_free(g));
        let n = g.ground_size();
        assert!(frac(g.min_degree() as i64, 1) >= (frac(1, 3) + frac(1, 20)) * frac(n as i64, 1));
        // with noise: floor still holds
        let noisy = dense_tf_graph(150, frac(1, 30), 25, 8).unwrap();
        assert!(is_triangle_free(&noisy.graph));
        let n = noisy.graph.ground_size();
        assert!(
            frac(noisy.graph.min_degree() as i64, 1)
                >= (frac(1, 3) + frac(1, 30)) * frac(n as i64, 1)
        );
        // deeper cores kick in for smaller eps
        assert!(noisy.core_k >= inst.core_k);
    }

    #[test]
    fn andrasfai_family() {
        for k in 1..=5 {
            let g = andrasfai(k);
            assert_eq!(g.ground_size(), 3 * k - 1);
            assert_eq!(g.regular_degree(), Some(k));
            assert!(is_triangle_free(&g));
        }
    }

    #[test]
    fn point_cloud_shapes() {
        let h = random_hamming_cloud(10, 64, 1);
        assert_eq!(h.len(), 10);
        let s = random_sphere_cloud(8, 5, 2);
        for p in s.reals() {
            let norm: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-9);
        }
        let e = random_euclidean_ball_cloud(20, 12, 3);
        for p in e.reals() {
            let norm: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(norm <= 3.0 + 1e-9);
        }
        let c = clustered_euclidean_cloud(3, 5, 10, 4);
        assert_eq!(c.len(), 15);
        // groups tight, far apart
        assert!(c.distance(0, 1) < 1.0);
        assert!(c.distance(0, 5) > 20.0);
    }
}
