//! Set systems, tri-edges, tri-hypergraphs, trigraphs, tri-tournaments and
//! digraphs, plus the tri-edge algebra everything downstream consumes.
//!
//! All types are immutable after construction and safe to share across
//! threads. Thresholds like eps*|F| are compared in exact rational
//! arithmetic so ties classify deterministically (ties go red: <= inclusive).

use crate::bits::VSet;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Exact fraction used for all density thresholds.
pub type Frac = Ratio<i64>;

pub fn frac(num: i64, den: i64) -> Frac {
    Ratio::new(num, den)
}

/// Parse "1/3" or a plain decimal like "0.25" into an exact fraction.
pub fn parse_frac(s: &str) -> Result<Frac, CoreError> {
    let bad = || CoreError::BadFraction(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((int, fracpart)) = s.split_once('.') {
        let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        if fracpart.len() > 15 || fracpart.chars().any(|c| !c.is_ascii_digit()) {
            return Err(bad());
        }
        let num: i64 = if fracpart.is_empty() { 0 } else { fracpart.parse().map_err(|_| bad())? };
        let den = 10i64.pow(fracpart.len() as u32);
        return Ok(Ratio::from_integer(int) + Ratio::new(num, den));
    }
    let n: i64 = s.trim().parse().map_err(|_| bad())?;
    Ok(Ratio::from_integer(n))
}

/// `count <= q * total`, exactly.
pub fn le_frac_of(count: usize, q: Frac, total: usize) -> bool {
    Ratio::from_integer(count as i64) <= q * Ratio::from_integer(total as i64)
}

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("ground-set mismatch: {0} vs {1}")]
    GroundMismatch(usize, usize),
    #[error("vertex {0} out of range 0..{1}")]
    VertexRange(usize, usize),
    #[error("tri-edge parts do not partition the ground set")]
    NotAPartition,
    #[error("malformed fraction: {0}")]
    BadFraction(String),
    #[error("malformed edge list line {0}: {1}")]
    BadEdgeLine(usize, String),
    #[error("pair ({0},{1}) assigned twice in edge list")]
    DuplicatePair(usize, usize),
    #[error("arcs do not orient every pair exactly once")]
    NotATournament,
    #[error("red arc ({0},{1}) duplicates a plain arc")]
    RedOverlapsArc(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
}

// ---------------------------------------------------------------------------
// SetSystem

/// A family of subsets of {0..ground_size-1}. Duplicates are preserved:
/// |F| counts multiplicity, matching fractional thresholds eps*|F|.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetSystem {
    pub ground_size: usize,
    pub sets: Vec<VSet>,
}

impl SetSystem {
    pub fn new(ground_size: usize, sets: Vec<VSet>) -> Self {
        for s in &sets {
            assert_eq!(s.ground_size(), ground_size, "set on wrong ground set");
        }
        SetSystem { ground_size, sets }
    }

    pub fn from_lists(ground_size: usize, lists: &[Vec<usize>]) -> Result<Self, CoreError> {
        let mut sets = Vec::with_capacity(lists.len());
        for l in lists {
            if let Some(&bad) = l.iter().find(|&&v| v >= ground_size) {
                return Err(CoreError::VertexRange(bad, ground_size));
            }
            sets.push(VSet::from_iter(ground_size, l.iter().copied()));
        }
        Ok(SetSystem { ground_size, sets })
    }

    pub fn size(&self) -> usize {
        self.sets.len()
    }

    /// Indices of the members containing x (the paper's F_x, as a bitset
    /// over set indices).
    pub fn sets_containing(&self, x: usize) -> VSet {
        VSet::from_iter(
            self.sets.len(),
            self.sets
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(x))
                .map(|(i, _)| i),
        )
    }

    /// |F_xy|: number of members containing both x and y.
    pub fn co_membership(&self, x: usize, y: usize) -> usize {
        self.sets.iter().filter(|s| s.contains(x) && s.contains(y)).count()
    }

    /// D_eps(x) = { y : |F_xy| <= eps * |F| }.
    pub fn disjoint_set(&self, x: usize, eps: Frac) -> VSet {
        assert!(x < self.ground_size);
        let fx = self.sets_containing(x);
        let mut out = VSet::empty(self.ground_size);
        for y in 0..self.ground_size {
            let fxy = self
                .sets
                .iter()
                .enumerate()
                .filter(|(i, s)| fx.contains(*i) && s.contains(y))
                .count();
            if le_frac_of(fxy, eps, self.sets.len()) {
                out.insert(y);
            }
        }
        out
    }

    /// min over x of |D_0(x)| / |V|.
    pub fn disjointness_ratio(&self) -> Frac {
        if self.ground_size == 0 {
            return Frac::zero();
        }
        let min = (0..self.ground_size)
            .map(|x| self.disjoint_set(x, Frac::zero()).len())
            .min()
            .unwrap();
        frac(min as i64, self.ground_size as i64)
    }

    /// Disjointness-trigraph: xy edge iff F_xy empty, red iff 0 < |F_xy| <= eps|F|.
    pub fn disjointness_trigraph(&self, eps: Frac) -> TriGraph {
        let n = self.ground_size;
        let fx: Vec<VSet> = (0..n).map(|x| self.sets_containing(x)).collect();
        let mut t = TriGraphBuilder::new(n);
        for v in 1..n {
            for u in 0..v {
                let fxy = fx[u].intersection_size(&fx[v]);
                let st = if fxy == 0 {
                    PairStatus::Edge
                } else if le_frac_of(fxy, eps, self.sets.len()) {
                    PairStatus::Red
                } else {
                    PairStatus::White
                };
                t.set(u, v, st);
            }
        }
        t.build()
    }
}

// ---------------------------------------------------------------------------
// TriEdge / TriHypergraph

/// A tripartition (B, R, W) of the ground set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriEdge {
    pub black: VSet,
    pub red: VSet,
    pub white: VSet,
}

impl TriEdge {
    pub fn new(black: VSet, red: VSet, white: VSet) -> Result<Self, CoreError> {
        let n = black.ground_size();
        if red.ground_size() != n || white.ground_size() != n {
            return Err(CoreError::GroundMismatch(n, red.ground_size().max(white.ground_size())));
        }
        let disjoint = black.is_disjoint(&red) && black.is_disjoint(&white) && red.is_disjoint(&white);
        if !disjoint || black.len() + red.len() + white.len() != n {
            return Err(CoreError::NotAPartition);
        }
        Ok(TriEdge { black, red, white })
    }

    /// W is implicitly the complement of B and R.
    pub fn from_black_red(black: VSet, red: VSet) -> Result<Self, CoreError> {
        let white = black.union(&red).complement();
        Self::new(black, red, white)
    }

    pub fn ground_size(&self) -> usize {
        self.black.ground_size()
    }

    pub fn intersect(&self, other: &TriEdge) -> Result<TriEdge, CoreError> {
        if self.ground_size() != other.ground_size() {
            return Err(CoreError::GroundMismatch(self.ground_size(), other.ground_size()));
        }
        let b = self.black.intersect(&other.black);
        let r = self
            .black
            .union(&self.red)
            .intersect(&other.black.union(&other.red))
            .difference(&b);
        TriEdge::from_black_red(b, r)
    }

    pub fn difference(&self, other: &TriEdge) -> Result<TriEdge, CoreError> {
        if self.ground_size() != other.ground_size() {
            return Err(CoreError::GroundMismatch(self.ground_size(), other.ground_size()));
        }
        let b = self.black.intersect(&other.white);
        let r = self
            .black
            .union(&self.red)
            .intersect(&other.white.union(&other.red))
            .difference(&b);
        TriEdge::from_black_red(b, r)
    }

    /// Swap black and white, keep red.
    pub fn complement(&self) -> TriEdge {
        TriEdge {
            black: self.white.clone(),
            red: self.red.clone(),
            white: self.black.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineMode {
    Intersect,
    Difference,
}

pub fn triedge_combine(e1: &TriEdge, e2: &TriEdge, mode: CombineMode) -> Result<TriEdge, CoreError> {
    match mode {
        CombineMode::Intersect => e1.intersect(e2),
        CombineMode::Difference => e1.difference(e2),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriHypergraph {
    pub ground_size: usize,
    pub edges: Vec<TriEdge>,
}

impl TriHypergraph {
    pub fn new(ground_size: usize, edges: Vec<TriEdge>) -> Self {
        for e in &edges {
            assert_eq!(e.ground_size(), ground_size, "tri-edge on wrong ground set");
        }
        TriHypergraph { ground_size, edges }
    }

    /// All pairwise combinations of the two edge lists.
    pub fn combine(&self, other: &TriHypergraph, mode: CombineMode) -> Result<TriHypergraph, CoreError> {
        if self.ground_size != other.ground_size {
            return Err(CoreError::GroundMismatch(self.ground_size, other.ground_size));
        }
        let mut edges = Vec::with_capacity(self.edges.len() * other.edges.len());
        for e1 in &self.edges {
            for e2 in &other.edges {
                edges.push(triedge_combine(e1, e2, mode)?);
            }
        }
        Ok(TriHypergraph::new(self.ground_size, edges))
    }

    /// Edge-wise complement (B and W swapped).
    pub fn complement(&self) -> TriHypergraph {
        TriHypergraph::new(
            self.ground_size,
            self.edges.iter().map(TriEdge::complement).collect(),
        )
    }
}

// ---------------------------------------------------------------------------
// TriGraph

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairStatus {
    White,
    Edge,
    Red,
}

/// Trigraph with a 2-bit status per unordered pair plus eagerly derived
/// per-vertex neighborhood bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriGraph {
    n: usize,
    code: Vec<u8>, // 4 pairs per byte, pair index v*(v-1)/2 + u for u < v
    nbr: Vec<VSet>,
    red_nbr: Vec<VSet>,
}

pub struct TriGraphBuilder {
    n: usize,
    code: Vec<u8>,
}

fn pair_index(u: usize, v: usize) -> usize {
    debug_assert!(u < v);
    v * (v - 1) / 2 + u
}

impl TriGraphBuilder {
    pub fn new(n: usize) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        TriGraphBuilder {
            n,
            code: vec![0; pairs.div_ceil(4)],
        }
    }

    pub fn set(&mut self, u: usize, v: usize, st: PairStatus) {
        assert!(u != v, "self-pair");
        assert!(u < self.n && v < self.n);
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        let i = pair_index(u, v);
        let bits = match st {
            PairStatus::White => 0u8,
            PairStatus::Edge => 1,
            PairStatus::Red => 2,
        };
        let shift = (i % 4) * 2;
        self.code[i / 4] = (self.code[i / 4] & !(0b11 << shift)) | (bits << shift);
    }

    pub fn build(self) -> TriGraph {
        let mut nbr = vec![VSet::empty(self.n); self.n];
        let mut red_nbr = vec![VSet::empty(self.n); self.n];
        for v in 1..self.n {
            for u in 0..v {
                let i = pair_index(u, v);
                match (self.code[i / 4] >> ((i % 4) * 2)) & 0b11 {
                    1 => {
                        nbr[u].insert(v);
                        nbr[v].insert(u);
                    }
                    2 => {
                        red_nbr[u].insert(v);
                        red_nbr[v].insert(u);
                    }
                    _ => {}
                }
            }
        }
        TriGraph {
            n: self.n,
            code: self.code,
            nbr,
            red_nbr,
        }
    }
}

impl TriGraph {
    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn status(&self, u: usize, v: usize) -> PairStatus {
        assert!(u != v && u < self.n && v < self.n);
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        let i = pair_index(u, v);
        match (self.code[i / 4] >> ((i % 4) * 2)) & 0b11 {
            1 => PairStatus::Edge,
            2 => PairStatus::Red,
            _ => PairStatus::White,
        }
    }

    pub fn neighbors(&self, v: usize) -> &VSet {
        &self.nbr[v]
    }

    pub fn closed_neighbors(&self, v: usize) -> VSet {
        let mut s = self.nbr[v].clone();
        s.insert(v);
        s
    }

    pub fn red_neighbors(&self, v: usize) -> &VSet {
        &self.red_nbr[v]
    }

    pub fn non_neighbors(&self, v: usize) -> VSet {
        let mut s = self.nbr[v].union(&self.red_nbr[v]).complement();
        s.remove(v);
        s
    }

    /// Minimum plain degree. Isolated vertices are permitted; they simply
    /// report delta(T) = 0.
    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.nbr[v].len()).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.nbr[v].len()).sum::<usize>() / 2
    }

    pub fn red_count(&self) -> usize {
        (0..self.n).map(|v| self.red_nbr[v].len()).sum::<usize>() / 2
    }

    /// One tri-edge (N[v], R(v), W(v)) per vertex; transversals of the
    /// output are exactly the dominating sets of the trigraph.
    pub fn to_hypergraph(&self) -> TriHypergraph {
        let edges = (0..self.n)
            .map(|v| {
                TriEdge::from_black_red(self.closed_neighbors(v), self.red_nbr[v].clone()).unwrap()
            })
            .collect();
        TriHypergraph::new(self.n, edges)
    }

    /// Plain-text edge list "u v [e|r]", one pair per line, '#' comments.
    /// Ground size is one past the largest vertex mentioned.
    pub fn from_edge_list(text: &str) -> Result<TriGraph, CoreError> {
        let mut pairs: Vec<(usize, usize, PairStatus)> = Vec::new();
        let mut max_v = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let err = || CoreError::BadEdgeLine(lineno + 1, line.to_string());
            let u: usize = it.next().ok_or_else(err)?.parse().map_err(|_| err())?;
            let v: usize = it.next().ok_or_else(err)?.parse().map_err(|_| err())?;
            let st = match it.next() {
                None | Some("e") => PairStatus::Edge,
                Some("r") => PairStatus::Red,
                Some(_) => return Err(err()),
            };
            if it.next().is_some() {
                return Err(err());
            }
            if u == v {
                return Err(CoreError::SelfLoop(u));
            }
            max_v = max_v.max(u).max(v);
            pairs.push((u, v, st));
        }
        let n = if pairs.is_empty() { 0 } else { max_v + 1 };
        let mut seen = BTreeSet::new();
        let mut b = TriGraphBuilder::new(n);
        for (u, v, st) in pairs {
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(CoreError::DuplicatePair(key.0, key.1));
            }
            b.set(u, v, st);
        }
        Ok(b.build())
    }
}

impl Serialize for TriGraph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            ground_size: usize,
            status: Vec<(usize, usize, PairStatus)>,
        }
        let mut status = Vec::new();
        for v in 1..self.n {
            for u in 0..v {
                let st = self.status(u, v);
                if st != PairStatus::White {
                    status.push((u, v, st));
                }
            }
        }
        Repr {
            ground_size: self.n,
            status,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TriGraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            ground_size: usize,
            status: Vec<(usize, usize, PairStatus)>,
        }
        let r = Repr::deserialize(de)?;
        let mut b = TriGraphBuilder::new(r.ground_size);
        let mut seen = BTreeSet::new();
        for (u, v, st) in r.status {
            if u == v || u >= r.ground_size || v >= r.ground_size {
                return Err(serde::de::Error::custom(format!("bad pair ({u},{v})")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(serde::de::Error::custom(format!("pair ({u},{v}) repeated")));
            }
            b.set(u, v, st);
        }
        Ok(b.build())
    }
}

// ---------------------------------------------------------------------------
// TriTournament

/// Tournament with optional red back-arcs. Exactly one of xy, yx is a plain
/// arc for every pair; red arcs are ordered pairs not in the arc set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriTournament {
    n: usize,
    out: Vec<VSet>,
    red_out: Vec<VSet>,
}

impl TriTournament {
    pub fn new(n: usize, arcs: &[(usize, usize)], red_arcs: &[(usize, usize)]) -> Result<Self, CoreError> {
        let mut out = vec![VSet::empty(n); n];
        for &(x, y) in arcs {
            if x == y {
                return Err(CoreError::SelfLoop(x));
            }
            if x >= n || y >= n {
                return Err(CoreError::VertexRange(x.max(y), n));
            }
            out[x].insert(y);
        }
        for v in 1..n {
            for u in 0..v {
                if out[u].contains(v) == out[v].contains(u) {
                    return Err(CoreError::NotATournament);
                }
            }
        }
        let mut red_out = vec![VSet::empty(n); n];
        for &(x, y) in red_arcs {
            if x == y {
                return Err(CoreError::SelfLoop(x));
            }
            if x >= n || y >= n {
                return Err(CoreError::VertexRange(x.max(y), n));
            }
            if out[x].contains(y) {
                return Err(CoreError::RedOverlapsArc(x, y));
            }
            red_out[x].insert(y);
        }
        Ok(TriTournament { n, out, red_out })
    }

    /// A plain tournament from its out-neighborhoods (no red arcs).
    pub fn from_out_sets(out: Vec<VSet>) -> Result<Self, CoreError> {
        let n = out.len();
        let arcs: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| out[x].to_vec().into_iter().map(move |y| (x, y)))
            .collect();
        Self::new(n, &arcs, &[])
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, x: usize, y: usize) -> bool {
        self.out[x].contains(y)
    }

    pub fn has_red(&self, x: usize, y: usize) -> bool {
        self.red_out[x].contains(y)
    }

    pub fn out_neighbors(&self, v: usize) -> &VSet {
        &self.out[v]
    }

    /// Plain in-neighborhood; every pair is oriented, so this is just the
    /// complement of the out-neighborhood.
    pub fn in_neighbors(&self, v: usize) -> VSet {
        let mut s = self.out[v].complement();
        s.remove(v);
        s
    }

    pub fn red_out_neighbors(&self, v: usize) -> &VSet {
        &self.red_out[v]
    }

    pub fn red_arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| self.red_out[x].to_vec().into_iter().map(move |y| (x, y)))
            .collect()
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| self.out[x].to_vec().into_iter().map(move |y| (x, y)))
            .collect()
    }

    /// X dominates: every y not in X has some x in X with xy in A or xy in R.
    pub fn dominates(&self, x_set: &VSet) -> bool {
        (0..self.n).all(|y| {
            x_set.contains(y)
                || x_set
                    .iter()
                    .any(|x| self.out[x].contains(y) || self.red_out[x].contains(y))
        })
    }

    /// Tri-hypergraph with B = closed in-neighborhood, R = red in-neighbors;
    /// its transversals are the dominating sets.
    pub fn to_hypergraph(&self) -> TriHypergraph {
        let edges = (0..self.n)
            .map(|v| {
                let mut black = VSet::from_iter(
                    self.n,
                    (0..self.n).filter(|&u| u != v && self.out[u].contains(v)),
                );
                black.insert(v);
                let red = VSet::from_iter(
                    self.n,
                    (0..self.n).filter(|&u| u != v && self.red_out[u].contains(v)),
                );
                let red = red.difference(&black);
                TriEdge::from_black_red(black, red).unwrap()
            })
            .collect();
        TriHypergraph::new(self.n, edges)
    }

    /// Induced sub-tri-tournament on `verts`; returns the mapping old->new.
    pub fn induced(&self, verts: &VSet) -> (TriTournament, Vec<usize>) {
        let keep: Vec<usize> = verts.to_vec();
        let m = keep.len();
        let mut out = vec![VSet::empty(m); m];
        let mut red_out = vec![VSet::empty(m); m];
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                if i != j {
                    if self.out[x].contains(y) {
                        out[i].insert(j);
                    }
                    if self.red_out[x].contains(y) {
                        red_out[i].insert(j);
                    }
                }
            }
        }
        (TriTournament { n: m, out, red_out }, keep)
    }

    /// True if the induced subtournament on `verts` is transitive
    /// (acyclic under plain arcs).
    pub fn is_transitive_on(&self, verts: &VSet) -> bool {
        let vs = verts.to_vec();
        for &a in &vs {
            for &b in &vs {
                for &c in &vs {
                    if a != b && b != c && a != c
                        && self.out[a].contains(b)
                        && self.out[b].contains(c)
                        && self.out[c].contains(a)
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl Serialize for TriTournament {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            ground_size: usize,
            arcs: Vec<(usize, usize)>,
            red_arcs: Vec<(usize, usize)>,
        }
        Repr {
            ground_size: self.n,
            arcs: self.arcs(),
            red_arcs: self.red_arcs(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TriTournament {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            ground_size: usize,
            arcs: Vec<(usize, usize)>,
            #[serde(default)]
            red_arcs: Vec<(usize, usize)>,
        }
        let r = Repr::deserialize(de)?;
        TriTournament::new(r.ground_size, &r.arcs, &r.red_arcs).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Digraph

/// Plain digraph; both directions may coexist (majority digraphs need that).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<VSet>,
}

impl Digraph {
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self, CoreError> {
        let mut out = vec![VSet::empty(n); n];
        for &(x, y) in arcs {
            if x == y {
                return Err(CoreError::SelfLoop(x));
            }
            if x >= n || y >= n {
                return Err(CoreError::VertexRange(x.max(y), n));
            }
            out[x].insert(y);
        }
        Ok(Digraph { n, out })
    }

    pub fn from_out_sets(out: Vec<VSet>) -> Self {
        Digraph { n: out.len(), out }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, x: usize, y: usize) -> bool {
        self.out[x].contains(y)
    }

    pub fn out_neighbors(&self, v: usize) -> &VSet {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> VSet {
        VSet::from_iter(self.n, (0..self.n).filter(|&u| self.out[u].contains(v)))
    }

    pub fn closed_in_neighbors(&self, v: usize) -> VSet {
        let mut s = self.in_neighbors(v);
        s.insert(v);
        s
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| self.out[x].to_vec().into_iter().map(move |y| (x, y)))
            .collect()
    }

    /// X dominates: every y outside X has an in-neighbor in X.
    pub fn dominates(&self, x_set: &VSet) -> bool {
        (0..self.n).all(|y| x_set.contains(y) || x_set.iter().any(|x| self.out[x].contains(y)))
    }
}

impl Serialize for Digraph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            ground_size: usize,
            arcs: Vec<(usize, usize)>,
        }
        Repr {
            ground_size: self.n,
            arcs: self.arcs(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            ground_size: usize,
            arcs: Vec<(usize, usize)>,
        }
        let r = Repr::deserialize(de)?;
        Digraph::new(r.ground_size, &r.arcs).map_err(serde::de::Error::custom)
    }
}

// Deserialization for SetSystem / TriEdge / TriHypergraph goes through raw
// index lists so the bitsets can be bound to the right ground size.

impl<'de> Deserialize<'de> for SetSystem {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            ground_size: usize,
            sets: Vec<Vec<usize>>,
        }
        let r = Repr::deserialize(de)?;
        SetSystem::from_lists(r.ground_size, &r.sets).map_err(serde::de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for TriHypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct EdgeRepr {
            black: Vec<usize>,
            red: Vec<usize>,
            white: Vec<usize>,
        }
        #[derive(Deserialize)]
        struct Repr {
            ground_size: usize,
            edges: Vec<EdgeRepr>,
        }
        let r = Repr::deserialize(de)?;
        let n = r.ground_size;
        let mut edges = Vec::with_capacity(r.edges.len());
        for e in r.edges {
            if let Some(&bad) = e
                .black
                .iter()
                .chain(&e.red)
                .chain(&e.white)
                .find(|&&v| v >= n)
            {
                return Err(serde::de::Error::custom(format!("vertex {bad} out of range")));
            }
            let te = TriEdge::new(
                VSet::from_iter(n, e.black),
                VSet::from_iter(n, e.red),
                VSet::from_iter(n, e.white),
            )
            .map_err(serde::de::Error::custom)?;
            edges.push(te);
        }
        Ok(TriHypergraph::new(n, edges))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn disjoint_set_enumeration() {
        // F = {{0,1},{1,2}} on V={0,1,2}: D_0(0) = {2}
        let f = SetSystem::from_lists(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(f.disjoint_set(0, Frac::zero()).to_vec(), vec![2]);
        // empty family: everything vacuously disjoint
        let e = SetSystem::from_lists(3, &[]).unwrap();
        assert_eq!(e.disjoint_set(1, Frac::zero()).len(), 3);
        // eps = 1 covers everything
        assert_eq!(f.disjoint_set(0, Frac::one()).len(), 3);
    }

    #[test]
    fn disjoint_set_monotone_in_eps() {
        let f = SetSystem::from_lists(5, &[vec![0, 1, 2], vec![1, 3], vec![0, 4], vec![2, 3, 4]]).unwrap();
        for x in 0..5 {
            let d0 = f.disjoint_set(x, frac(1, 4));
            let d1 = f.disjoint_set(x, frac(1, 2));
            assert!(d0.is_subset(&d1));
        }
    }

    #[test]
    fn disjointness_trigraph_threshold() {
        // F = {{0,1}} on 3 vertices, eps = 1/2: |F_01| = 1 > 0.5*1 -> white;
        // pair (0,2) has empty intersection -> edge.
        let f = SetSystem::from_lists(3, &[vec![0, 1]]).unwrap();
        let t = f.disjointness_trigraph(frac(1, 2));
        assert_eq!(t.status(0, 1), PairStatus::White);
        assert_eq!(t.status(0, 2), PairStatus::Edge);
        // eps = 1 saturates the threshold -> red
        let t1 = f.disjointness_trigraph(Frac::one());
        assert_eq!(t1.status(0, 1), PairStatus::Red);
        // empty family -> complete edge graph
        let e = SetSystem::from_lists(3, &[]).unwrap();
        let te = e.disjointness_trigraph(frac(1, 2));
        for v in 1..3 {
            for u in 0..v {
                assert_eq!(te.status(u, v), PairStatus::Edge);
            }
        }
    }

    #[test]
    fn triedge_algebra() {
        let n = 3;
        let e1 = TriEdge::new(
            VSet::singleton(n, 0),
            VSet::singleton(n, 1),
            VSet::singleton(n, 2),
        )
        .unwrap();
        let e2 = TriEdge::new(
            VSet::singleton(n, 1),
            VSet::singleton(n, 0),
            VSet::singleton(n, 2),
        )
        .unwrap();
        // idempotence
        assert_eq!(e1.intersect(&e1).unwrap(), e1);
        // hand-computed: B = {}, R = {0,1}, W = {2}
        let m = e1.intersect(&e2).unwrap();
        assert!(m.black.is_empty());
        assert_eq!(m.red.to_vec(), vec![0, 1]);
        assert_eq!(m.white.to_vec(), vec![2]);
        // subtracting the all-white edge is the identity
        let white = TriEdge::from_black_red(VSet::empty(n), VSet::empty(n)).unwrap();
        assert_eq!(e1.difference(&white).unwrap(), e1);
        // complement is an involution
        let h = TriHypergraph::new(n, vec![e1.clone(), e2]);
        assert_eq!(h.complement().complement(), h);
    }

    #[test]
    fn hypergraph_combine_counts() {
        let n = 4;
        let mk = |b: &[usize], r: &[usize]| {
            TriEdge::from_black_red(VSet::from_iter(n, b.iter().copied()), VSet::from_iter(n, r.iter().copied()))
                .unwrap()
        };
        let h1 = TriHypergraph::new(n, vec![mk(&[0], &[1]), mk(&[2], &[]), mk(&[0, 3], &[2])]);
        let h2 = TriHypergraph::new(n, vec![mk(&[0, 2], &[3]), mk(&[1], &[0])]);
        let c = h1.combine(&h2, CombineMode::Intersect).unwrap();
        assert_eq!(c.edges.len(), 6);
        for (i, e) in c.edges.iter().enumerate() {
            let (e1, e2) = (&h1.edges[i / 2], &h2.edges[i % 2]);
            // recheck the formulas element by element
            for v in 0..n {
                let in_b = e1.black.contains(v) && e2.black.contains(v);
                let in_br = (e1.black.contains(v) || e1.red.contains(v))
                    && (e2.black.contains(v) || e2.red.contains(v));
                assert_eq!(e.black.contains(v), in_b);
                assert_eq!(e.red.contains(v), in_br && !in_b);
            }
        }
    }

    #[test]
    fn trigraph_roundtrip_and_hypergraph() {
        let t = TriGraph::from_edge_list("0 1 e\n1 2 r\n0 3\n").unwrap();
        assert_eq!(t.ground_size(), 4);
        assert_eq!(t.status(1, 2), PairStatus::Red);
        assert_eq!(t.status(0, 3), PairStatus::Edge);
        assert_eq!(t.status(2, 3), PairStatus::White);
        let json = serde_json::to_string(&t).unwrap();
        let back: TriGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);

        let h = t.to_hypergraph();
        assert_eq!(h.edges.len(), 4);
        assert_eq!(h.edges[1].black.to_vec(), vec![0, 1]);
        assert_eq!(h.edges[1].red.to_vec(), vec![2]);
    }

    #[test]
    fn edgeless_and_allred_hypergraphs() {
        let t = TriGraphBuilder::new(3).build();
        let h = t.to_hypergraph();
        for (v, e) in h.edges.iter().enumerate() {
            assert_eq!(e.black.to_vec(), vec![v]);
            assert!(e.red.is_empty());
        }
        let mut b = TriGraphBuilder::new(3);
        for v in 1..3 {
            for u in 0..v {
                b.set(u, v, PairStatus::Red);
            }
        }
        let h = b.build().to_hypergraph();
        for (v, e) in h.edges.iter().enumerate() {
            assert_eq!(e.black.to_vec(), vec![v]);
            assert_eq!(e.red.len(), 2);
            assert!(e.white.is_empty());
        }
    }

    #[test]
    fn tournament_invariants() {
        let t = TriTournament::new(3, &[(0, 1), (1, 2), (2, 0)], &[(1, 0)]).unwrap();
        assert!(t.has_arc(0, 1) && !t.has_arc(1, 0));
        assert!(t.has_red(1, 0));
        assert!(TriTournament::new(2, &[(0, 1), (1, 0)], &[]).is_err());
        assert!(TriTournament::new(2, &[(0, 1)], &[(0, 1)]).is_err());
        // 3-cycle: single vertex does not dominate, pairs do
        let c3 = TriTournament::new(3, &[(0, 1), (1, 2), (2, 0)], &[]).unwrap();
        assert!(!c3.dominates(&VSet::singleton(3, 0)));
        assert!(c3.dominates(&VSet::from_iter(3, [0, 1])));
    }

    #[test]
    fn frac_parsing() {
        assert_eq!(parse_frac("1/3").unwrap(), frac(1, 3));
        assert_eq!(parse_frac("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_frac("2").unwrap(), frac(2, 1));
        assert!(parse_frac("x").is_err());
        assert!(parse_frac("1/0").is_err());
    }
}
