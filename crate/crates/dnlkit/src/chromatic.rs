//! Coloring and homomorphism algorithms for dense triangle-free and K_t-free
//! graphs, together with small exact oracles (chromatic number, independence
//! number, clique counts) used to validate them.
//!
//! The algorithms never trust their own bookkeeping: every coloring is
//! re-checked against the adjacency lists, every quotient is re-checked for
//! K_t-freeness, and failures trigger resampling with fresh derived seeds.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::VSet;
use crate::cluster::{set_system_clustering, ClusterError};
use crate::constants::{eps_prime_default, gamma, homomorphism_threshold, regular_threshold};
use crate::core::{frac, le_frac_of, Frac, SetSystem};
use crate::nets::{epsilon_covering, NetsError};
use crate::rng::derive_rng;

pub const CHROMATIC_ORACLE_MAX_N: usize = 40;
pub const INDEPENDENT_ORACLE_MAX_N: usize = 60;
/// resampling rounds for the randomized coloring / quotient algorithms
pub const COLOR_MAX_ROUNDS: usize = 6;
/// cap on the clique family kept in a CliqueSystem; beyond it we keep a
/// seeded uniform sample (the disjointness thresholds are relative, so a
/// large sample preserves them up to sampling error)
pub const CLIQUE_FAMILY_CAP: usize = 50_000;

#[derive(Debug, Error)]
pub enum ChromaticError {
    #[error("instance too large for this exact oracle: n = {n}, cap = {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("validation failed after {rounds} rounds: {detail}")]
    Verification { rounds: usize, detail: String },
    #[error("graph input: {0}")]
    Parse(String),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Nets(#[from] NetsError),
}

// ---------------------------------------------------------------------------
// SimpleGraph

/// Undirected simple graph on vertices 0..n with bitset adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<VSet>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph {
            n,
            adj: (0..n).map(|_| VSet::empty(n)).collect(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = SimpleGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "no self-loops");
        assert!(u < self.n && v < self.n);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n);
        self.adj[u].remove(v);
        self.adj[v].remove(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &VSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Some(d) if every vertex has degree d.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0.min(self.n.saturating_sub(1)));
        if self.n == 0 {
            return None;
        }
        if (0..self.n).all(|v| self.degree(v) == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// The neighborhood set system F = {N(v) : v in V} over ground set V.
    /// Set index v is N(v), so membership counts F_xy = |N(x) cap N(y)|.
    pub fn neighborhood_system(&self) -> SetSystem {
        SetSystem {
            ground_size: self.n,
            sets: self.adj.clone(),
        }
    }

    pub fn complement(&self) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// DIMACS-like parser: `c` comment lines, one `p edge <n> <m>` line,
    /// `e <u> <v>` edge lines with 1-based endpoints.
    pub fn from_dimacs(text: &str) -> Result<SimpleGraph, ChromaticError> {
        let mut g: Option<SimpleGraph> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "p" => {
                    if g.is_some() {
                        return Err(ChromaticError::Parse("duplicate p line".into()));
                    }
                    if fields.len() < 3 || fields[1] != "edge" {
                        return Err(ChromaticError::Parse(format!(
                            "line {}: expected `p edge <n> <m>`",
                            lineno + 1
                        )));
                    }
                    let n: usize = fields[2]
                        .parse()
                        .map_err(|_| ChromaticError::Parse(format!("line {}: bad n", lineno + 1)))?;
                    g = Some(SimpleGraph::new(n));
                }
                "e" => {
                    let g = g.as_mut().ok_or_else(|| {
                        ChromaticError::Parse("edge line before p line".into())
                    })?;
                    if fields.len() != 3 {
                        return Err(ChromaticError::Parse(format!(
                            "line {}: expected `e <u> <v>`",
                            lineno + 1
                        )));
                    }
                    let u: usize = fields[1].parse().map_err(|_| {
                        ChromaticError::Parse(format!("line {}: bad endpoint", lineno + 1))
                    })?;
                    let v: usize = fields[2].parse().map_err(|_| {
                        ChromaticError::Parse(format!("line {}: bad endpoint", lineno + 1))
                    })?;
                    if u == 0 || v == 0 || u > g.n || v > g.n {
                        return Err(ChromaticError::Parse(format!(
                            "line {}: endpoint out of range (1-based)",
                            lineno + 1
                        )));
                    }
                    if u == v {
                        return Err(ChromaticError::Parse(format!(
                            "line {}: self-loop",
                            lineno + 1
                        )));
                    }
                    g.add_edge(u - 1, v - 1);
                }
                _ => {
                    return Err(ChromaticError::Parse(format!(
                        "line {}: unknown record `{}`",
                        lineno + 1,
                        fields[0]
                    )));
                }
            }
        }
        g.ok_or_else(|| ChromaticError::Parse("missing p line".into()))
    }

    pub fn to_dimacs(&self) -> String {
        let edges = self.edges();
        let mut out = String::new();
        let _ = writeln!(out, "p edge {} {}", self.n, edges.len());
        for (u, v) in edges {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for SimpleGraph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.n,
            edges: self.edges(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SimpleGraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(de)?;
        for &(u, v) in &repr.edges {
            if u == v || u >= repr.n || v >= repr.n {
                return Err(serde::de::Error::custom("bad edge"));
            }
        }
        Ok(SimpleGraph::from_edges(repr.n, &repr.edges))
    }
}

// ---------------------------------------------------------------------------
// Exact oracles

fn adjacency_masks(g: &SimpleGraph) -> Vec<u64> {
    assert!(g.n <= 64);
    (0..g.n)
        .map(|v| g.adj[v].iter().fold(0u64, |m, w| m | (1 << w)))
        .collect()
}

/// Tomita-style branch and bound with a greedy-coloring bound. Returns the
/// vertex mask of a maximum clique.
fn expand_max_clique(adj: &[u64], mut cand: u64, cur: u64, best: &mut (u32, u64)) {
    if cand == 0 {
        let size = cur.count_ones();
        if size > best.0 {
            *best = (size, cur);
        }
        return;
    }
    // greedy colour classes over the candidates; class index bounds the
    // clique size achievable from that vertex onwards
    let mut order: Vec<(usize, u32)> = Vec::with_capacity(cand.count_ones() as usize);
    let mut uncolored = cand;
    let mut color = 0u32;
    while uncolored != 0 {
        color += 1;
        let mut avail = uncolored;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            let bit = 1u64 << v;
            avail &= !bit;
            avail &= !adj[v];
            uncolored &= !bit;
            order.push((v, color));
        }
    }
    let cur_size = cur.count_ones();
    for &(v, col) in order.iter().rev() {
        if cur_size + col <= best.0 {
            return;
        }
        let bit = 1u64 << v;
        expand_max_clique(adj, cand & adj[v], cur | bit, best);
        cand &= !bit;
    }
}

/// Maximum independent set, exact, n <= 60 (max clique of the complement).
pub fn max_independent_set(g: &SimpleGraph) -> Result<VSet, ChromaticError> {
    if g.n > INDEPENDENT_ORACLE_MAX_N {
        return Err(ChromaticError::TooLarge {
            n: g.n,
            cap: INDEPENDENT_ORACLE_MAX_N,
        });
    }
    if g.n == 0 {
        return Ok(VSet::empty(0));
    }
    let full = if g.n == 64 { !0u64 } else { (1u64 << g.n) - 1 };
    let co_adj: Vec<u64> = adjacency_masks(g)
        .iter()
        .enumerate()
        .map(|(v, &m)| (!m & full) & !(1u64 << v))
        .collect();
    let mut best = (0u32, 0u64);
    expand_max_clique(&co_adj, full, 0, &mut best);
    Ok(VSet::from_iter(
        g.n,
        (0..g.n).filter(|&v| best.1 & (1 << v) != 0),
    ))
}

pub fn independence_number(g: &SimpleGraph) -> Result<usize, ChromaticError> {
    max_independent_set(g).map(|s| s.len())
}

fn clique_number_small(g: &SimpleGraph) -> usize {
    let full = if g.n == 64 { !0u64 } else { (1u64 << g.n) - 1 };
    let adj = adjacency_masks(g);
    let mut best = (0u32, 0u64);
    expand_max_clique(&adj, full, 0, &mut best);
    best.0 as usize
}

/// DSATUR-ordered backtracking search for a proper k-coloring.
fn k_colorable(adj: &[u64], n: usize, k: usize) -> Option<Vec<usize>> {
    if n == 0 {
        return Some(vec![]);
    }
    let mut colors: Vec<Option<usize>> = vec![None; n];
    // forbidden[v] = bitmask of colors used by colored neighbors
    let mut forbidden: Vec<u64> = vec![0; n];
    fn rec(
        adj: &[u64],
        n: usize,
        k: usize,
        colors: &mut Vec<Option<usize>>,
        forbidden: &mut Vec<u64>,
        colored: usize,
        max_used: usize,
    ) -> bool {
        if colored == n {
            return true;
        }
        // pick the uncolored vertex with the most saturated palette,
        // breaking ties by degree
        let mut pick = None;
        let mut pick_key = (0usize, 0usize);
        for v in 0..n {
            if colors[v].is_none() {
                let key = (forbidden[v].count_ones() as usize, adj[v].count_ones() as usize);
                if pick.is_none() || key > pick_key {
                    pick = Some(v);
                    pick_key = key;
                }
            }
        }
        let v = pick.unwrap();
        // symmetry breaking: at most one brand-new color is worth trying
        let limit = (max_used + 1).min(k);
        for c in 0..limit {
            if forbidden[v] & (1 << c) != 0 {
                continue;
            }
            colors[v] = Some(c);
            let mut touched = Vec::new();
            let mut nb = adj[v];
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if forbidden[w] & (1 << c) == 0 {
                    forbidden[w] |= 1 << c;
                    touched.push(w);
                }
            }
            let new_max = max_used.max(c + 1);
            if rec(adj, n, k, colors, forbidden, colored + 1, new_max) {
                return true;
            }
            for w in touched {
                forbidden[w] &= !(1u64 << c);
            }
            colors[v] = None;
        }
        false
    }
    if rec(adj, n, k, &mut colors, &mut forbidden, 0, 0) {
        Some(colors.into_iter().map(|c| c.unwrap()).collect())
    } else {
        None
    }
}

/// Chromatic number, exact, n <= 40.
pub fn chromatic_number(g: &SimpleGraph) -> Result<usize, ChromaticError> {
    if g.n > CHROMATIC_ORACLE_MAX_N {
        return Err(ChromaticError::TooLarge {
            n: g.n,
            cap: CHROMATIC_ORACLE_MAX_N,
        });
    }
    if g.n == 0 {
        return Ok(0);
    }
    let adj = adjacency_masks(g);
    let lb = clique_number_small(g).max(1);
    for k in lb..=g.n {
        if let Some(c) = k_colorable(&adj, g.n, k) {
            debug_assert!(coloring_is_proper(g, &c));
            return Ok(k);
        }
    }
    unreachable!("n colors always suffice")
}

pub fn is_triangle_free(g: &SimpleGraph) -> bool {
    for u in 0..g.n {
        for v in g.adj[u].iter() {
            if v > u && !g.adj[u].intersect(&g.adj[v]).is_empty() {
                return false;
            }
        }
    }
    true
}

fn find_clique_rec(g: &SimpleGraph, t: usize, cand: &VSet, cur: &mut Vec<usize>) -> bool {
    if cur.len() == t {
        return true;
    }
    if cur.len() + cand.len() < t {
        return false;
    }
    for v in cand.iter() {
        cur.push(v);
        let above = VSet::from_iter(g.n, v + 1..g.n);
        let next = cand.intersect(&g.adj[v]).intersect(&above);
        if find_clique_rec(g, t, &next, cur) {
            return true;
        }
        cur.pop();
    }
    false
}

/// Some clique of size exactly t, if one exists.
pub fn find_clique(g: &SimpleGraph, t: usize) -> Option<Vec<usize>> {
    if t == 0 {
        return Some(vec![]);
    }
    if t > g.n {
        return None;
    }
    let mut cur = Vec::with_capacity(t);
    if find_clique_rec(g, t, &VSet::full(g.n), &mut cur) {
        Some(cur)
    } else {
        None
    }
}

pub fn is_kt_free(g: &SimpleGraph, t: usize) -> bool {
    find_clique(g, t).is_none()
}

fn count_cliques_rec(g: &SimpleGraph, k: usize, cand: &VSet, depth: usize) -> u64 {
    if depth == k {
        return 1;
    }
    let mut total = 0u64;
    for v in cand.iter() {
        let above = VSet::from_iter(g.n, v + 1..g.n);
        let next = cand.intersect(&g.adj[v]).intersect(&above);
        total += count_cliques_rec(g, k, &next, depth + 1);
    }
    total
}

/// Exact number of k-vertex cliques, optionally restricted to `within`.
pub fn count_cliques(g: &SimpleGraph, k: usize, within: Option<&VSet>) -> u64 {
    let base = match within {
        Some(x) => x.clone(),
        None => VSet::full(g.n),
    };
    if k == 0 {
        return 1;
    }
    count_cliques_rec(g, k, &base, 0)
}

/// All cliques of size exactly k as vertex sets, in lexicographic order.
pub fn enumerate_cliques(g: &SimpleGraph, k: usize) -> Vec<VSet> {
    fn rec(g: &SimpleGraph, k: usize, cand: &VSet, cur: &mut Vec<usize>, out: &mut Vec<VSet>) {
        if cur.len() == k {
            out.push(VSet::from_iter(g.n, cur.iter().copied()));
            return;
        }
        for v in cand.iter() {
            cur.push(v);
            let above = VSet::from_iter(g.n, v + 1..g.n);
            let next = cand.intersect(&g.adj[v]).intersect(&above);
            rec(g, k, &next, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        out.push(VSet::empty(g.n));
        return out;
    }
    let mut cur = Vec::with_capacity(k);
    rec(g, k, &VSet::full(g.n), &mut cur, &mut out);
    out
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub edge_count: usize,
    pub triangle_free: bool,
    /// None when the instance is above the oracle cap
    pub chromatic_number: Option<usize>,
    pub independence_number: Option<usize>,
}

pub fn exact_oracles(g: &SimpleGraph) -> OracleReport {
    OracleReport {
        n: g.n,
        edge_count: g.edge_count(),
        triangle_free: is_triangle_free(g),
        chromatic_number: chromatic_number(g).ok(),
        independence_number: independence_number(g).ok(),
    }
}

// ---------------------------------------------------------------------------
// Clique counting floor

#[derive(Debug, Serialize)]
pub struct CliqueFloorReport {
    pub count: u64,
    pub floor: u64,
    pub holds: bool,
}

/// Checks the counting lower bound: if delta(G) >= (1-c)n and
/// |X| >= (sc+eps)n then G[X] contains at least eps * c^s * n^{s+1} / (s+1)!
/// cliques of size s+1. Hypotheses are verified exactly; the floor is
/// computed in exact big-rational arithmetic and compared to the exact count.
pub fn clique_count_floor(
    g: &SimpleGraph,
    x: &VSet,
    c: Frac,
    s: usize,
    eps: Frac,
) -> Result<CliqueFloorReport, ChromaticError> {
    let n = g.n;
    assert_eq!(x.ground_size(), n);
    let nf = frac(n as i64, 1);
    let min_deg = frac(g.min_degree() as i64, 1);
    if min_deg < (frac(1, 1) - c) * nf {
        return Err(ChromaticError::Hypothesis(format!(
            "min degree {} below (1-c)n = {}",
            min_deg,
            (frac(1, 1) - c) * nf
        )));
    }
    let sc = frac(s as i64, 1) * c;
    if frac(x.len() as i64, 1) < (sc + eps) * nf {
        return Err(ChromaticError::Hypothesis(format!(
            "|X| = {} below (sc+eps)n = {}",
            x.len(),
            (sc + eps) * nf
        )));
    }
    // floor = eps * c^s * n^{s+1} / (s+1)!
    let big = |f: Frac| Ratio::new(BigInt::from(*f.numer()), BigInt::from(*f.denom()));
    let mut floor = big(eps);
    for _ in 0..s {
        floor *= big(c);
    }
    for _ in 0..s + 1 {
        floor *= Ratio::from_integer(BigInt::from(n));
    }
    for k in 2..=(s as u64 + 1) {
        floor /= Ratio::from_integer(BigInt::from(k));
    }
    assert!(!floor.is_negative());
    let floor = floor.floor().to_integer().to_u64().expect("floor fits u64");
    let count = count_cliques(g, s + 1, Some(x));
    Ok(CliqueFloorReport {
        count,
        floor,
        holds: count >= floor,
    })
}

// ---------------------------------------------------------------------------
// Coloring results and validators

#[derive(Clone, Debug, Serialize)]
pub struct ColoringResult {
    pub colors: Vec<usize>,
    /// recomputed from the adjacency lists, never trusted from the algorithm
    pub proper: bool,
    pub classes_count: usize,
}

pub fn coloring_is_proper(g: &SimpleGraph, colors: &[usize]) -> bool {
    assert_eq!(colors.len(), g.n);
    for u in 0..g.n {
        for v in g.adj[u].iter() {
            if v > u && colors[u] == colors[v] {
                return false;
            }
        }
    }
    true
}

fn coloring_from_colors(g: &SimpleGraph, colors: Vec<usize>) -> ColoringResult {
    let classes_count = colors.iter().copied().max().map_or(0, |m| m + 1);
    let proper = coloring_is_proper(g, &colors);
    ColoringResult {
        colors,
        proper,
        classes_count,
    }
}

/// Partition classes as vertex sets, indexed by color id.
pub fn color_classes(n: usize, colors: &[usize]) -> Vec<VSet> {
    let k = colors.iter().copied().max().map_or(0, |m| m + 1);
    let mut parts = vec![VSet::empty(n); k];
    for (v, &c) in colors.iter().enumerate() {
        parts[c].insert(v);
    }
    parts
}

fn first_edge_inside(g: &SimpleGraph, part: &VSet) -> Option<(usize, usize)> {
    for u in part.iter() {
        let inside = g.adj[u].intersect(part);
        let hit = inside.iter().find(|&v| v > u);
        if let Some(v) = hit {
            return Some((u, v));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Dense triangle-free coloring

fn check_min_degree(g: &SimpleGraph, threshold: Frac, what: &str) -> Result<(), ChromaticError> {
    let need = threshold * frac(g.n as i64, 1);
    if frac(g.min_degree() as i64, 1) < need {
        return Err(ChromaticError::Hypothesis(format!(
            "{}: min degree {} < {} required on {} vertices",
            what,
            g.min_degree(),
            need,
            g.n
        )));
    }
    Ok(())
}

/// Colors a triangle-free graph with min degree (1/3+eps)n using an
/// eps-covering X of the neighborhood system: each vertex goes to the first
/// x in X with v in D_eps(x), so the number of classes is at most |X|.
/// Properness is recomputed; on failure the covering is redrawn.
pub fn dnl_color_triangle_free(
    g: &SimpleGraph,
    eps: Frac,
    seed: u64,
    force: bool,
) -> Result<ColoringResult, ChromaticError> {
    assert!(g.n > 0);
    if !force {
        if !is_triangle_free(g) {
            return Err(ChromaticError::Hypothesis("graph has a triangle".into()));
        }
        check_min_degree(g, frac(1, 3) + eps, "dnl_color_triangle_free")?;
    }
    let f = g.neighborhood_system();
    for round in 0..COLOR_MAX_ROUNDS {
        let sub_seed: u64 = derive_rng(seed, "dnl-color", round as u64).gen();
        let covering = epsilon_covering(&f, eps, sub_seed)?;
        let classes: Vec<VSet> = covering
            .covering
            .iter()
            .map(|&x| f.disjoint_set(x, eps))
            .collect();
        let mut colors = vec![usize::MAX; g.n];
        for v in 0..g.n {
            for (i, class) in classes.iter().enumerate() {
                if class.contains(v) {
                    colors[v] = i;
                    break;
                }
            }
            // epsilon_covering only returns validated coverings
            assert!(colors[v] != usize::MAX, "vertex {v} left uncovered");
        }
        let result = coloring_from_colors(g, colors);
        if result.proper {
            return Ok(result);
        }
        eprintln!(
            "dnl_color_triangle_free: improper coloring on round {round} \
             (this contradicts the independence of D_eps classes on-hypothesis); redrawing"
        );
    }
    Err(ChromaticError::Verification {
        rounds: COLOR_MAX_ROUNDS,
        detail: "no proper coloring from any covering".into(),
    })
}

/// Colors a d-regular triangle-free graph with d >= (1/4+eps)n by an
/// (eps/2, eps/2)-clustering of the neighborhood system; the clusters are
/// the color classes and are re-verified independent.
pub fn cluster_color_regular_triangle_free(
    g: &SimpleGraph,
    eps: Frac,
    seed: u64,
    force: bool,
) -> Result<ColoringResult, ChromaticError> {
    assert!(g.n > 0);
    if !force {
        if !is_triangle_free(g) {
            return Err(ChromaticError::Hypothesis("graph has a triangle".into()));
        }
        match g.regular_degree() {
            None => {
                return Err(ChromaticError::Hypothesis("graph is not regular".into()));
            }
            Some(d) => {
                let need = (frac(1, 4) + eps) * frac(g.n as i64, 1);
                if frac(d as i64, 1) < need {
                    return Err(ChromaticError::Hypothesis(format!(
                        "degree {} < {} required",
                        d, need
                    )));
                }
            }
        }
    }
    cluster_color_with_system(g, &g.neighborhood_system(), eps * frac(1, 2), seed)
}

/// Shared tail of the clustering-based colorings: cluster the set system at
/// (eps', eps'), use part ids as colors, verify every part independent.
fn cluster_color_with_system(
    g: &SimpleGraph,
    f: &SetSystem,
    eps_prime: Frac,
    seed: u64,
) -> Result<ColoringResult, ChromaticError> {
    for round in 0..3 {
        let sub_seed: u64 = derive_rng(seed, "cluster-color", round as u64).gen();
        let (clustering, _report) = set_system_clustering(f, eps_prime, eps_prime, sub_seed)?;
        let mut colors = vec![usize::MAX; g.n];
        for (i, part) in clustering.parts.iter().enumerate() {
            for v in part.iter() {
                colors[v] = i;
            }
        }
        assert!(colors.iter().all(|&c| c != usize::MAX));
        let result = coloring_from_colors(g, colors);
        if result.proper {
            return Ok(result);
        }
        let bad = clustering
            .parts
            .iter()
            .find_map(|p| first_edge_inside(g, p));
        eprintln!(
            "cluster coloring: edge {:?} inside a cluster on round {round} \
             (contradicts cluster independence on-hypothesis); reclustering",
            bad
        );
    }
    Err(ChromaticError::Verification {
        rounds: 3,
        detail: "clusters kept containing edges".into(),
    })
}

// ---------------------------------------------------------------------------
// Clique systems

/// The (t-2)-clique extension family of a graph: for each clique K of size
/// t-2, the set E(K) of vertices extending it to a clique of size t-1.
#[derive(Clone, Debug)]
pub struct CliqueSystem {
    pub t: usize,
    /// the (t-2)-cliques, one per extension set; a seeded uniform sample
    /// when the full family exceeds CLIQUE_FAMILY_CAP
    pub cliques: Vec<VSet>,
    pub extensions: SetSystem,
    pub sampled: bool,
}

pub fn clique_system(g: &SimpleGraph, t: usize, seed: u64) -> Result<CliqueSystem, ChromaticError> {
    assert!(t >= 3);
    let mut cliques = enumerate_cliques(g, t - 2);
    if cliques.is_empty() {
        return Err(ChromaticError::Hypothesis(format!(
            "graph has no clique of size {}",
            t - 2
        )));
    }
    let mut sampled = false;
    if cliques.len() > CLIQUE_FAMILY_CAP {
        let mut rng = derive_rng(seed, "clique-family", 0);
        let idx = rand::seq::index::sample(&mut rng, cliques.len(), CLIQUE_FAMILY_CAP);
        let mut keep: Vec<usize> = idx.into_vec();
        keep.sort_unstable();
        cliques = keep.into_iter().map(|i| cliques[i].clone()).collect();
        sampled = true;
    }
    let sets: Vec<VSet> = cliques
        .iter()
        .map(|k| {
            let mut e = VSet::full(g.n);
            for v in k.iter() {
                e = e.intersect(&g.adj[v]);
            }
            e
        })
        .collect();
    Ok(CliqueSystem {
        t,
        cliques,
        extensions: SetSystem {
            ground_size: g.n,
            sets,
        },
        sampled,
    })
}

/// When G is K_t-free, adjacent vertices cannot extend the same (t-2)-clique,
/// so F_uv must be empty on every edge. Returns the first violating edge.
pub fn extension_invariant_violation(
    g: &SimpleGraph,
    cs: &CliqueSystem,
) -> Option<(usize, usize)> {
    let rows: Vec<VSet> = (0..g.n).map(|v| cs.extensions.sets_containing(v)).collect();
    for u in 0..g.n {
        for v in g.adj[u].iter() {
            if v > u && rows[u].intersection_size(&rows[v]) > 0 {
                return Some((u, v));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Homomorphism quotients

#[derive(Clone, Debug, Serialize)]
pub struct QuotientResult {
    pub part_of: Vec<usize>,
    pub parts: Vec<VSet>,
    pub quotient: SimpleGraph,
}

fn parts_from_keys(n: usize, keys: &[String]) -> (Vec<usize>, Vec<VSet>) {
    // parts ordered by their lowest vertex
    let mut by_key: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (v, k) in keys.iter().enumerate() {
        by_key.entry(k.as_str()).or_default().push(v);
    }
    let mut groups: Vec<Vec<usize>> = by_key.into_values().collect();
    groups.sort_by_key(|g| g[0]);
    let mut part_of = vec![0usize; n];
    let mut parts = Vec::with_capacity(groups.len());
    for (i, group) in groups.iter().enumerate() {
        for &v in group {
            part_of[v] = i;
        }
        parts.push(VSet::from_iter(n, group.iter().copied()));
    }
    (part_of, parts)
}

fn build_quotient(g: &SimpleGraph, part_of: &[usize], parts: &[VSet]) -> SimpleGraph {
    let k = parts.len();
    let mut q = SimpleGraph::new(k);
    for u in 0..g.n {
        for v in g.adj[u].iter() {
            if v > u && part_of[u] != part_of[v] && !q.has_edge(part_of[u], part_of[v]) {
                q.add_edge(part_of[u], part_of[v]);
            }
        }
    }
    q
}

/// Checks both directions of the quotient-edge definition: (i,j) is an edge
/// of the quotient iff some G-edge crosses parts i and j.
fn quotient_edges_consistent(g: &SimpleGraph, part_of: &[usize], q: &SimpleGraph) -> bool {
    let mut seen = vec![false; q.n * q.n];
    for u in 0..g.n {
        for v in g.adj[u].iter() {
            if v > u && part_of[u] != part_of[v] {
                seen[part_of[u] * q.n + part_of[v]] = true;
                seen[part_of[v] * q.n + part_of[u]] = true;
            }
        }
    }
    for i in 0..q.n {
        for j in 0..q.n {
            if i != j && q.has_edge(i, j) != seen[i * q.n + j] {
                return false;
            }
        }
    }
    true
}

/// Finds a homomorphism from a dense K_t-free graph onto a K_t-free graph of
/// constant size: vertices are classified by which reference objects they are
/// far from (neighborhood disjointness for t = 3, clique-extension
/// disjointness for t >= 4), the classes are the parts, and both the
/// independence of every part and the K_t-freeness of the quotient are
/// re-verified exactly.
pub fn homomorphism_quotient(
    g: &SimpleGraph,
    t: usize,
    eps: Frac,
    seed: u64,
    force: bool,
) -> Result<QuotientResult, ChromaticError> {
    assert!(t >= 3);
    assert!(g.n > 0);
    if !force {
        if !is_kt_free(g, t) {
            return Err(ChromaticError::Hypothesis(format!(
                "graph contains a K_{t}"
            )));
        }
        check_min_degree(g, homomorphism_threshold(t) + eps, "homomorphism_quotient")?;
    }
    for round in 0..COLOR_MAX_ROUNDS {
        let keys = if t == 3 {
            quotient_keys_neighborhoods(g, eps, seed, round)?
        } else {
            quotient_keys_cliques(g, t, eps, seed, round)?
        };
        let (part_of, parts) = parts_from_keys(g.n, &keys);
        if let Some(bad) = parts.iter().find_map(|p| first_edge_inside(g, p)) {
            eprintln!(
                "homomorphism_quotient: edge {bad:?} inside a part on round {round}; resampling"
            );
            continue;
        }
        let quotient = build_quotient(g, &part_of, &parts);
        assert!(quotient_edges_consistent(g, &part_of, &quotient));
        if !is_kt_free(&quotient, t) {
            eprintln!("homomorphism_quotient: quotient contains a K_{t} on round {round}; resampling");
            continue;
        }
        return Ok(QuotientResult {
            part_of,
            parts,
            quotient,
        });
    }
    Err(ChromaticError::Verification {
        rounds: COLOR_MAX_ROUNDS,
        detail: "no verified quotient from any sampled reference family".into(),
    })
}

/// t = 3 classification keys: signature of v = which x in X have v in
/// D_eps(x), where X is an eps-covering of the neighborhood system padded
/// with extra random vertices on retries.
fn quotient_keys_neighborhoods(
    g: &SimpleGraph,
    eps: Frac,
    seed: u64,
    round: usize,
) -> Result<Vec<String>, ChromaticError> {
    let f = g.neighborhood_system();
    let sub_seed: u64 = derive_rng(seed, "quotient-net", round as u64).gen();
    let covering = epsilon_covering(&f, eps, sub_seed)?;
    let mut x = covering.covering;
    if round > 0 {
        // a uniform sample works with constant probability, so widening the
        // reference set on retries recovers the missing witnesses
        let mut rng = derive_rng(seed, "quotient-extra", round as u64);
        let extra = (8usize << round).min(g.n);
        for i in rand::seq::index::sample(&mut rng, g.n, extra).into_iter() {
            if !x.contains(&i) {
                x.push(i);
            }
        }
    }
    let classes: Vec<VSet> = x.iter().map(|&xi| f.disjoint_set(xi, eps)).collect();
    Ok((0..g.n)
        .map(|v| {
            classes
                .iter()
                .map(|c| if c.contains(v) { '1' } else { '0' })
                .collect()
        })
        .collect())
}

/// t >= 4 classification keys: signature of v = which sampled (t-2)-cliques
/// are gamma*eps-disjoint from v (every clique vertex w has few common
/// extension sets with v).
fn quotient_keys_cliques(
    g: &SimpleGraph,
    t: usize,
    eps: Frac,
    seed: u64,
    round: usize,
) -> Result<Vec<String>, ChromaticError> {
    let cs = clique_system(g, t, seed)?;
    let m = cs.extensions.size();
    let ge = gamma(t) * eps;
    let rows: Vec<VSet> = (0..g.n).map(|v| cs.extensions.sets_containing(v)).collect();
    // family C of reference cliques, doubled on every retry
    let base = ((4f64 / (ge.numer().abs() as f64 / *ge.denom() as f64)).ceil() as usize)
        .clamp(16, 4096);
    let want = (base << round).min(m);
    let mut rng = derive_rng(seed, "quotient-cliques", round as u64);
    let mut pick: Vec<usize> = rand::seq::index::sample(&mut rng, m, want).into_vec();
    pick.sort_unstable();
    // disj[w] = vertices gamma*eps-disjoint from w, for every w used by C
    let mut members = VSet::empty(g.n);
    for &ci in &pick {
        members = members.union(&cs.cliques[ci]);
    }
    let mut disj: Vec<Option<VSet>> = vec![None; g.n];
    for w in members.iter() {
        let mut d = VSet::empty(g.n);
        for v in 0..g.n {
            if le_frac_of(rows[v].intersection_size(&rows[w]), ge, m) {
                d.insert(v);
            }
        }
        disj[w] = Some(d);
    }
    Ok((0..g.n)
        .map(|v| {
            pick.iter()
                .map(|&ci| {
                    let far = cs.cliques[ci]
                        .iter()
                        .all(|w| disj[w].as_ref().unwrap().contains(v));
                    if far {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect()
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Regular K_t-free coloring

/// Colors a d-regular K_t-free graph with d >= (r_t+eps)n by clustering the
/// (t-2)-clique extension family at (eps', eps') and using cluster ids as
/// colors. eps' defaults to the frozen calibration in the constants module.
pub fn cluster_color_regular_kt_free(
    g: &SimpleGraph,
    t: usize,
    eps: Frac,
    seed: u64,
    eps_prime: Option<Frac>,
    force: bool,
) -> Result<ColoringResult, ChromaticError> {
    assert!(t >= 3);
    assert!(g.n > 0);
    if !force {
        if !is_kt_free(g, t) {
            return Err(ChromaticError::Hypothesis(format!(
                "graph contains a K_{t}"
            )));
        }
        match g.regular_degree() {
            None => {
                return Err(ChromaticError::Hypothesis("graph is not regular".into()));
            }
            Some(d) => {
                let need = (regular_threshold(t) + eps) * frac(g.n as i64, 1);
                if frac(d as i64, 1) < need {
                    return Err(ChromaticError::Hypothesis(format!(
                        "degree {} < {} required for t = {}",
                        d, need, t
                    )));
                }
            }
        }
    }
    let ep = eps_prime.unwrap_or_else(|| eps_prime_default(t, eps));
    if t == 3 {
        // extension sets of 1-cliques are exactly the neighborhoods
        return cluster_color_with_system(g, &g.neighborhood_system(), ep, seed);
    }
    let cs = clique_system(g, t, seed)?;
    cluster_color_with_system(g, &cs.extensions, ep, seed)
}

/// Searches for t+1 pairwise eps'-disjoint vertices in the clique-extension
/// family. On hypothesis-satisfying regular instances none should exist;
/// a witness falsifies the disjointness lemma for these parameters.
pub fn farvertices_falsifier(
    g: &SimpleGraph,
    cs: &CliqueSystem,
    eps_prime: Frac,
) -> Option<Vec<usize>> {
    let t = cs.t;
    if t + 1 > g.n {
        return None;
    }
    let m = cs.extensions.size();
    let rows: Vec<VSet> = (0..g.n).map(|v| cs.extensions.sets_containing(v)).collect();
    // auxiliary graph: uv iff u,v are eps'-disjoint; a witness is a clique
    // of size t+1 in it
    let mut h = SimpleGraph::new(g.n);
    for u in 0..g.n {
        for v in u + 1..g.n {
            if le_frac_of(rows[u].intersection_size(&rows[v]), eps_prime, m) {
                h.add_edge(u, v);
            }
        }
    }
    find_clique(&h, t + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::frac;

    fn cycle(n: usize) -> SimpleGraph {
        SimpleGraph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    fn complete_bipartite(m: usize) -> SimpleGraph {
        let mut g = SimpleGraph::new(2 * m);
        for u in 0..m {
            for v in m..2 * m {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// blow-up: each vertex of `base` becomes an independent m-set, edges
    /// become complete bipartite bundles
    fn blow_up(base: &SimpleGraph, m: usize) -> SimpleGraph {
        let n = base.ground_size() * m;
        let mut g = SimpleGraph::new(n);
        for (u, v) in base.edges() {
            for i in 0..m {
                for j in 0..m {
                    g.add_edge(u * m + i, v * m + j);
                }
            }
        }
        g
    }

    fn complete_multipartite(parts: usize, m: usize) -> SimpleGraph {
        let mut base = SimpleGraph::new(parts);
        for i in 0..parts {
            for j in i + 1..parts {
                base.add_edge(i, j);
            }
        }
        blow_up(&base, m)
    }

    #[test]
    fn c5_oracles() {
        let g = cycle(5);
        assert_eq!(chromatic_number(&g).unwrap(), 3);
        assert_eq!(independence_number(&g).unwrap(), 2);
        assert!(is_triangle_free(&g));
        assert!(is_kt_free(&g, 3));
        assert_eq!(count_cliques(&g, 2, None), 5);
    }

    #[test]
    fn petersen_oracles() {
        // outer C5, inner pentagram, spokes
        let mut g = cycle(5);
        let mut edges = g.edges();
        edges.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        edges.extend((0..5).map(|i| (i, i + 5)));
        g = SimpleGraph::from_edges(10, &edges);
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(chromatic_number(&g).unwrap(), 3);
        assert_eq!(independence_number(&g).unwrap(), 4);
        assert!(is_triangle_free(&g));
    }

    #[test]
    fn oracle_caps_enforced() {
        let g = SimpleGraph::new(41);
        assert!(matches!(
            chromatic_number(&g),
            Err(ChromaticError::TooLarge { .. })
        ));
        let g = SimpleGraph::new(61);
        assert!(matches!(
            max_independent_set(&g),
            Err(ChromaticError::TooLarge { .. })
        ));
    }

    #[test]
    fn chromatic_matches_brute_force() {
        // brute force: minimal k admitting any proper assignment
        fn brute(g: &SimpleGraph) -> usize {
            let n = g.ground_size();
            if n == 0 {
                return 0;
            }
            'outer: for k in 1..=n {
                let mut assignment = vec![0usize; n];
                loop {
                    if coloring_is_proper(g, &assignment) {
                        return k;
                    }
                    let mut pos = 0;
                    loop {
                        if pos == n {
                            continue 'outer;
                        }
                        assignment[pos] += 1;
                        if assignment[pos] < k {
                            break;
                        }
                        assignment[pos] = 0;
                        pos += 1;
                    }
                }
            }
            unreachable!()
        }
        let mut rng = derive_rng(0xC0103, "chromatic-oracle", 0);
        for _ in 0..30 {
            let n = rng.gen_range(2..=7);
            let mut g = SimpleGraph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v);
                    }
                }
            }
            assert_eq!(chromatic_number(&g).unwrap(), brute(&g));
        }
    }

    #[test]
    fn independence_matches_brute_force() {
        let mut rng = derive_rng(0xA1FA, "alpha-oracle", 0);
        for _ in 0..30 {
            let n = rng.gen_range(2..=12);
            let mut g = SimpleGraph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        g.add_edge(u, v);
                    }
                }
            }
            let best = max_independent_set(&g).unwrap();
            // witness really is independent
            for u in best.iter() {
                assert!(g.neighbors(u).intersect(&best).is_empty());
            }
            // brute force over all subsets
            let mut brute = 0usize;
            for mask in 0u64..(1 << n) {
                let s = VSet::from_iter(n, (0..n).filter(|&v| mask & (1 << v) != 0));
                if s.len() > brute
                    && s.iter().all(|u| g.neighbors(u).intersect(&s).is_empty())
                {
                    brute = s.len();
                }
            }
            assert_eq!(best.len(), brute);
        }
    }

    #[test]
    fn dimacs_and_json_round_trip() {
        let g = cycle(6);
        let text = g.to_dimacs();
        let back = SimpleGraph::from_dimacs(&text).unwrap();
        assert_eq!(g, back);
        let json = serde_json::to_string(&g).unwrap();
        let back: SimpleGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(g, back);
        assert!(SimpleGraph::from_dimacs("e 1 2").is_err());
        assert!(SimpleGraph::from_dimacs("p edge 3 1\ne 1 1").is_err());
    }

    #[test]
    fn clique_floor_vertices_and_edges() {
        // s = 0 counts vertices: floor is eps * n
        let g = complete_bipartite(10);
        let x = VSet::full(20);
        let rep = clique_count_floor(&g, &x, frac(1, 2), 0, frac(1, 4)).unwrap();
        assert_eq!(rep.floor, 5);
        assert_eq!(rep.count, 20);
        assert!(rep.holds);
        // complete graph, s = 1: count is all edges
        let k = complete_multipartite(20, 1);
        let rep = clique_count_floor(&k, &VSet::full(20), frac(1, 20), 1, frac(1, 4)).unwrap();
        assert_eq!(rep.count, 190);
        assert!(rep.holds);
    }

    #[test]
    fn clique_floor_triangles_in_blowup() {
        // complete 4-partite with parts of 10: delta = 0.75n, c = 1/4,
        // s = 2 counts triangles
        let g = complete_multipartite(4, 10);
        let rep = clique_count_floor(&g, &VSet::full(40), frac(1, 4), 2, frac(1, 4)).unwrap();
        assert_eq!(rep.count, 4 * 1000);
        assert!(rep.floor <= rep.count);
        assert!(rep.holds);
        // hypothesis failures are reported as such
        assert!(matches!(
            clique_count_floor(&g, &VSet::full(40), frac(1, 8), 2, frac(1, 4)),
            Err(ChromaticError::Hypothesis(_))
        ));
        let small = VSet::from_iter(40, 0..5);
        assert!(matches!(
            clique_count_floor(&g, &small, frac(1, 4), 2, frac(1, 4)),
            Err(ChromaticError::Hypothesis(_))
        ));
    }

    #[test]
    fn dnl_color_complete_bipartite() {
        let g = complete_bipartite(12);
        let res = dnl_color_triangle_free(&g, frac(1, 8), 7, false).unwrap();
        assert!(res.proper);
        assert!(res.classes_count <= 24);
    }

    #[test]
    fn dnl_color_c5_blowup() {
        // C5 blow-up with m = 10: n = 50, delta = 2m = 0.4n >= (1/3 + 1/20)n
        let g = blow_up(&cycle(5), 10);
        assert_eq!(g.regular_degree(), Some(20));
        let res = dnl_color_triangle_free(&g, frac(1, 20), 3, false).unwrap();
        assert!(res.proper);
        // properness is recomputed, never trusted
        assert!(coloring_is_proper(&g, &res.colors));
    }

    #[test]
    fn dnl_color_hypothesis_checks() {
        // triangle
        let g = complete_multipartite(3, 1);
        assert!(matches!(
            dnl_color_triangle_free(&g, frac(1, 10), 0, false),
            Err(ChromaticError::Hypothesis(_))
        ));
        // degree too low: C5 blow-up has delta = 0.4n < (1/3 + 1/10)n
        let g = blow_up(&cycle(5), 8);
        assert!(matches!(
            dnl_color_triangle_free(&g, frac(1, 10), 0, false),
            Err(ChromaticError::Hypothesis(_))
        ));
    }

    #[test]
    fn cluster_color_regular_instances() {
        // C5 blow-up: 0.4n-regular triangle-free
        let g = blow_up(&cycle(5), 8);
        let res = cluster_color_regular_triangle_free(&g, frac(1, 10), 11, false).unwrap();
        assert!(res.proper);
        // K_{m,m}: degree n/2, few classes
        let g = complete_bipartite(10);
        let res = cluster_color_regular_triangle_free(&g, frac(1, 8), 11, false).unwrap();
        assert!(res.proper);
        assert!(res.classes_count <= 4);
        // non-regular graph is refused
        let mut g = complete_bipartite(6);
        g.add_edge(0, 1);
        assert!(matches!(
            cluster_color_regular_triangle_free(&g, frac(1, 8), 0, false),
            Err(ChromaticError::Hypothesis(_))
        ));
    }

    #[test]
    fn quotient_complete_bipartite_t3() {
        let g = complete_bipartite(10);
        let q = homomorphism_quotient(&g, 3, frac(1, 8), 5, false).unwrap();
        assert!(q.quotient.edge_count() >= 1);
        assert!(is_kt_free(&q.quotient, 3));
        // parts independent (validated inside, re-check here)
        for p in &q.parts {
            assert!(first_edge_inside(&g, p).is_none());
        }
    }

    #[test]
    fn quotient_c5_blowup_t3() {
        let g = blow_up(&cycle(5), 10);
        let q = homomorphism_quotient(&g, 3, frac(1, 20), 9, false).unwrap();
        assert!(is_kt_free(&q.quotient, 3));
        // a proper homomorphic image of a C5 blow-up is not bipartite-sized:
        // it needs at least 5 parts with edges (odd cycle)
        assert!(q.quotient.ground_size() >= 5 || q.quotient.edge_count() == 0);
        assert!(q.quotient.edge_count() >= 1);
    }

    #[test]
    fn quotient_3partite_t4() {
        // balanced complete 3-partite blow-up: delta = 2n/3 >= (3/5 + eps)n
        let g = complete_multipartite(3, 12);
        let q = homomorphism_quotient(&g, 4, frac(1, 20), 13, false).unwrap();
        assert!(is_kt_free(&q.quotient, 4));
        assert!(q.quotient.edge_count() >= 1);
        for p in &q.parts {
            assert!(first_edge_inside(&g, p).is_none());
        }
    }

    #[test]
    fn quotient_hypothesis_checks() {
        let g = complete_multipartite(3, 4);
        // contains triangles, so t = 3 is refused
        assert!(matches!(
            homomorphism_quotient(&g, 3, frac(1, 10), 0, false),
            Err(ChromaticError::Hypothesis(_))
        ));
    }

    #[test]
    fn clique_system_invariant() {
        let g = complete_multipartite(3, 5);
        let cs = clique_system(&g, 4, 0).unwrap();
        // 2-cliques are the edges
        assert_eq!(cs.cliques.len(), g.edge_count());
        assert!(!cs.sampled);
        assert_eq!(extension_invariant_violation(&g, &cs), None);
        // in a graph with a K_4 the invariant can fail
        let k4 = complete_multipartite(4, 1);
        let cs = clique_system(&k4, 4, 0).unwrap();
        assert!(extension_invariant_violation(&k4, &cs).is_some());
    }

    #[test]
    fn kt_free_cluster_coloring() {
        // t = 3 path reduces to neighborhood clustering
        let g = blow_up(&cycle(5), 8);
        let res = cluster_color_regular_kt_free(&g, 3, frac(1, 10), 17, None, false).unwrap();
        assert!(res.proper);
        // t = 4 on complete 3-partite: 2n/3-regular K_4-free, 2/3 > 4/7
        let g = complete_multipartite(3, 10);
        let res = cluster_color_regular_kt_free(&g, 4, frac(1, 12), 17, None, false).unwrap();
        assert!(res.proper);
        assert!(coloring_is_proper(&g, &res.colors));
    }

    #[test]
    fn kt_free_coloring_refuses_below_threshold() {
        // 0.4n-regular K_5-free sits far below r_5 = 7/10
        let g = blow_up(&cycle(5), 8);
        assert!(matches!(
            cluster_color_regular_kt_free(&g, 5, frac(1, 50), 0, None, false),
            Err(ChromaticError::Hypothesis(_))
        ));
    }

    #[test]
    fn farvertices_search() {
        // above-threshold 3-partite instance: no 5 pairwise disjoint vertices
        let g = complete_multipartite(3, 10);
        let cs = clique_system(&g, 4, 0).unwrap();
        let ep = eps_prime_default(4, frac(1, 12));
        assert_eq!(farvertices_falsifier(&g, &cs, ep), None);
        // sub-threshold instance: a perfect matching has pairwise disjoint
        // neighborhoods, so any four vertices are pairwise 0-disjoint
        let m4 = SimpleGraph::from_edges(8, &[(0, 1), (2, 3), (4, 5), (6, 7)]);
        let cs = clique_system(&m4, 3, 0).unwrap();
        let w = farvertices_falsifier(&m4, &cs, frac(0, 1)).unwrap();
        assert_eq!(w.len(), 4);
        // t + 1 > n is vacuous
        let small = complete_multipartite(2, 1);
        let cs = clique_system(&small, 3, 0).unwrap();
        assert_eq!(farvertices_falsifier(&small, &cs, frac(1, 2)), None);
    }

    #[test]
    fn force_skips_hypothesis_but_not_validation() {
        // regular, below the 1/4 threshold, still triangle-free: force runs
        // the clustering and the result is validated for real
        let g = blow_up(&cycle(7), 4);
        assert_eq!(g.regular_degree(), Some(8));
        match cluster_color_regular_triangle_free(&g, frac(1, 10), 21, true) {
            Ok(res) => assert!(coloring_is_proper(&g, &res.colors)),
            Err(ChromaticError::Verification { .. }) => {}
            Err(ChromaticError::Cluster(_)) => {}
            Err(e) => panic!("unexpected error off-hypothesis: {e}"),
        }
    }
}
