//! Tournament domination via fractional chromatic number, tri-tournament
//! domination by weighted sampling, locally-bounded transitive covers, and
//! domination of majority digraphs built from voter profiles.

use num_traits::{One, ToPrimitive, Zero};
use rand::distributions::WeightedIndex;
use rand::prelude::Distribution as _;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::VSet;
use crate::core::{frac, Frac, TriTournament};
use crate::lp::{rat, winning_strategy, Rat};
use crate::nets::tau_p;
use crate::rng::derive_rng;

pub const EXHAUSTIVE_DOMINATION_MAX_N: usize = 20;
/// doubling rounds for the weighted-sampling dominating-set search
pub const SAMPLE_MAX_ROUNDS: usize = 12;

#[derive(Debug, Error)]
pub enum TournamentError {
    #[error("instance too large: n = {n}, cap = {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("member {0} is not transitive")]
    NotTransitive(usize),
    #[error("family/coverage inconsistency: {0}")]
    Coverage(String),
    #[error("invalid partition at vertex {v}: {detail}")]
    Partition { v: usize, detail: String },
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
}

// ---------------------------------------------------------------------------
// Transitive families

/// A family of transitive subtournaments used as a fractional acyclic
/// coloring certificate: a declared c means every vertex lies in at least
/// c * |members| of them.
#[derive(Clone, Debug, Serialize)]
pub struct TransitiveFamily {
    pub members: Vec<VSet>,
}

impl TransitiveFamily {
    pub fn new(t: &TriTournament, members: Vec<VSet>) -> Result<Self, TournamentError> {
        for (i, m) in members.iter().enumerate() {
            if !t.is_transitive_on(m) {
                return Err(TournamentError::NotTransitive(i));
            }
        }
        Ok(TransitiveFamily { members })
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// number of members containing each vertex
    pub fn coverage(&self, n: usize) -> Vec<usize> {
        let mut cov = vec![0usize; n];
        for m in &self.members {
            for v in m.iter() {
                cov[v] += 1;
            }
        }
        cov
    }

    pub fn co_membership(&self, x: usize, y: usize) -> usize {
        self.members
            .iter()
            .filter(|m| m.contains(x) && m.contains(y))
            .count()
    }

    /// checks that every vertex lies in >= c * t members (exact arithmetic)
    pub fn check_coverage(&self, n: usize, c: Frac) -> Result<(), TournamentError> {
        let t = self.size();
        for (v, &cov) in self.coverage(n).iter().enumerate() {
            if frac(cov as i64, 1) < c * frac(t as i64, 1) {
                return Err(TournamentError::Coverage(format!(
                    "vertex {v} lies in {cov} of {t} members, below c = {c}"
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Tri-tournament domination by weighted sampling

fn rat_to_f64(x: &Rat) -> f64 {
    x.numer().to_f64().unwrap_or(0.0) / x.denom().to_f64().unwrap_or(1.0)
}

/// Dominating set of a tri-tournament: sample vertices from the winning
/// strategy of the underlying (plain-arc) tournament — twice that strategy
/// is a fractional dominating certificate of weight 2 — and validate against
/// the arcs, doubling the sample size on failure. Always terminates since
/// X = V dominates.
pub fn dominating_set_tri_tournament(t: &TriTournament, seed: u64) -> VSet {
    let n = t.ground_size();
    if n == 0 {
        return VSet::empty(0);
    }
    if n == 1 {
        return VSet::singleton(1, 0);
    }
    let p = winning_strategy(t);
    let weights: Vec<f64> = p.probabilities.iter().map(rat_to_f64).collect();
    // degenerate profiles (single support point) short-circuit the sampler
    if let Ok(dist) = WeightedIndex::new(&weights) {
        let mut size = 8usize;
        for round in 0..SAMPLE_MAX_ROUNDS {
            let mut rng = derive_rng(seed, "tri-tournament-dominate", round as u64);
            let mut x = VSet::empty(n);
            for _ in 0..size {
                x.insert(dist.sample(&mut rng));
            }
            // greedily shrink before validating: drop vertices whose removal
            // keeps domination
            if t.dominates(&x) {
                let mut picks: Vec<usize> = x.to_vec();
                for v in picks.clone() {
                    x.remove(v);
                    if !t.dominates(&x) {
                        x.insert(v);
                    }
                }
                picks = x.to_vec();
                debug_assert!(!picks.is_empty());
                return x;
            }
            size = size.saturating_mul(2).min(4 * n);
        }
    }
    VSet::full(n)
}

/// Exact minimum dominating set of a tri-tournament (n <= 20).
pub fn exhaustive_domination(t: &TriTournament) -> Result<(usize, VSet), TournamentError> {
    let n = t.ground_size();
    if n > EXHAUSTIVE_DOMINATION_MAX_N {
        return Err(TournamentError::TooLarge {
            n,
            cap: EXHAUSTIVE_DOMINATION_MAX_N,
        });
    }
    if n == 0 {
        return Ok((0, VSet::empty(0)));
    }
    fn combos(
        t: &TriTournament,
        n: usize,
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
    ) -> Option<VSet> {
        if cur.len() == k {
            let x = VSet::from_iter(n, cur.iter().copied());
            return if t.dominates(&x) { Some(x) } else { None };
        }
        for v in start..n {
            cur.push(v);
            if let Some(x) = combos(t, n, k, v + 1, cur) {
                return Some(x);
            }
            cur.pop();
        }
        None
    }
    for k in 1..=n {
        let mut cur = Vec::with_capacity(k);
        if let Some(x) = combos(t, n, k, 0, &mut cur) {
            return Ok((k, x));
        }
    }
    unreachable!("V always dominates")
}

// ---------------------------------------------------------------------------
// Red augmentation and the fractional-chromatic recursion

/// For every plain arc xy lying in at most threshold * |F| members, add the
/// reverse red arc yx. The returned tri-tournament keeps the original arcs.
pub fn red_augment(t: &TriTournament, f: &TransitiveFamily, threshold: Frac) -> TriTournament {
    let n = t.ground_size();
    let total = frac(f.size() as i64, 1);
    let mut red: Vec<(usize, usize)> = Vec::new();
    for (x, y) in t.arcs() {
        if frac(f.co_membership(x, y) as i64, 1) <= threshold * total {
            red.push((y, x));
        }
    }
    TriTournament::new(n, &t.arcs(), &red).expect("reverse arcs cannot clash with arcs")
}

/// Per-level sample floor from the shattered-set bound s = 4/c^2: the
/// delta-net size tau_p with d = ceil(4/c^2) and p = 0.1.
pub fn level_sample_floor(c: Frac) -> usize {
    let cf = *c.numer() as f64 / *c.denom() as f64;
    let d = (4.0 / (cf * cf)).ceil() as usize;
    tau_p(d, 1.0, 0.1)
}

/// Dominating set of a tournament from a fractional acyclic coloring
/// certificate: red-augment at threshold c^2/2, dominate the tri-tournament,
/// then recurse on every red out-neighborhood with the members through x
/// removed (a (1/c - 1/2)-certificate there). Result validated at every
/// level; recursion depth is bounded since 1/c drops by at least 1/2.
pub fn dominate_from_fractional_coloring(
    t: &TriTournament,
    f: &TransitiveFamily,
    c: Frac,
    seed: u64,
) -> Result<VSet, TournamentError> {
    if c <= Frac::zero() || c > Frac::one() {
        return Err(TournamentError::Parameter(format!("c = {c} not in (0,1]")));
    }
    f.check_coverage(t.ground_size(), c)?;
    let out = recurse(t, f, c, seed, 0);
    assert!(t.dominates(&out), "recursion must return a dominating set");
    Ok(out)
}

fn recurse(t: &TriTournament, f: &TransitiveFamily, c: Frac, seed: u64, depth: usize) -> VSet {
    let n = t.ground_size();
    if n == 0 {
        return VSet::empty(0);
    }
    // base case: a transitive tournament is dominated by its source
    if t.is_transitive_on(&VSet::full(n)) {
        let source = (0..n)
            .find(|&v| t.out_neighbors(v).len() == n - 1)
            .expect("transitive tournament has a source");
        return VSet::singleton(n, source);
    }
    // each level multiplies 1/c' = 1/c - 1/2; a hard cap keeps malformed
    // inputs from spinning (V is always a valid answer)
    let inv_c = frac(*c.denom(), *c.numer());
    let max_depth = 2 * (*inv_c.ceil().numer() as usize) + 2;
    if depth >= max_depth {
        return VSet::full(n);
    }
    let threshold = c * c * frac(1, 2);
    let tri = red_augment(t, f, threshold);
    let sub_seed: u64 = derive_rng(seed, "fraccolor-level", depth as u64).gen();
    let x = dominating_set_tri_tournament(&tri, sub_seed);
    let mut result = x.clone();
    // only the red out-neighborhoods of X are not yet dominated in T itself
    for v in x.iter() {
        let r_plus = tri.red_out_neighbors(v).difference(&x);
        if r_plus.is_empty() {
            continue;
        }
        let (sub, keep) = t.induced(&r_plus);
        // drop every member through v and restrict the rest to R+(v)
        let sub_members: Vec<VSet> = f
            .members
            .iter()
            .filter(|m| !m.contains(v))
            .map(|m| {
                VSet::from_iter(
                    keep.len(),
                    keep.iter()
                        .enumerate()
                        .filter(|(_, &old)| m.contains(old))
                        .map(|(i, _)| i),
                )
            })
            .collect();
        let sub_family = TransitiveFamily {
            members: sub_members,
        };
        // the family handed down never contains a member through v
        debug_assert_eq!(
            f.members.iter().filter(|m| m.contains(v)).count() + sub_family.members.len(),
            f.members.len()
        );
        // the new certificate value: 1/c' = 1/c - 1/2
        let c_new = frac(2, 1) * c / (frac(2, 1) - c);
        let c_eff = if sub_family.size() == 0 || sub_family.check_coverage(keep.len(), c_new).is_err()
        {
            // certificate degraded (can happen on tiny instances); fall back
            // to exhaustive-ish domination by taking everything
            result = result.union(&VSet::from_iter(
                t.ground_size(),
                keep.iter().copied(),
            ));
            continue;
        } else {
            c_new
        };
        let sub_dom = recurse(&sub, &sub_family, c_eff, sub_seed, depth + 1);
        result = result.union(&VSet::from_iter(
            t.ground_size(),
            sub_dom.iter().map(|i| keep[i]),
        ));
    }
    result
}

// ---------------------------------------------------------------------------
// Locally bounded covers

#[derive(Clone, Debug, Serialize)]
pub struct WeightedTransitiveFamily {
    pub family: TransitiveFamily,
    #[serde(serialize_with = "crate::lp::ratser::many")]
    pub weights: Vec<Rat>,
    #[serde(serialize_with = "crate::lp::ratser::one")]
    pub total_weight: Rat,
}

/// From a per-vertex partition of {v} u N+(v) into k transitive parts,
/// builds the fractional acyclic coloring certificate of total weight <= 2k:
/// each part of vertex v gets weight 2p(v) where p is the winning strategy.
/// Per-vertex coverage >= 1 is re-checked exactly.
pub fn locally_bounded_cover(
    t: &TriTournament,
    partitions: &[Vec<VSet>],
) -> Result<WeightedTransitiveFamily, TournamentError> {
    let n = t.ground_size();
    assert_eq!(partitions.len(), n);
    let k = partitions
        .first()
        .map(|p| p.len())
        .ok_or_else(|| TournamentError::Parameter("empty tournament".into()))?;
    for (v, parts) in partitions.iter().enumerate() {
        if parts.len() != k {
            return Err(TournamentError::Partition {
                v,
                detail: format!("expected {k} parts, got {}", parts.len()),
            });
        }
        let mut closed = t.out_neighbors(v).clone();
        closed.insert(v);
        let mut seen = VSet::empty(n);
        for part in parts {
            if !part.is_subset(&closed) {
                return Err(TournamentError::Partition {
                    v,
                    detail: "part leaves {v} u N+(v)".into(),
                });
            }
            if !seen.is_disjoint(part) {
                return Err(TournamentError::Partition {
                    v,
                    detail: "parts overlap".into(),
                });
            }
            if !t.is_transitive_on(part) {
                return Err(TournamentError::Partition {
                    v,
                    detail: "part not transitive".into(),
                });
            }
            seen = seen.union(part);
        }
        if seen != closed {
            return Err(TournamentError::Partition {
                v,
                detail: "parts do not cover {v} u N+(v)".into(),
            });
        }
    }
    let p = winning_strategy(t);
    let mut members = Vec::new();
    let mut weights = Vec::new();
    for (v, parts) in partitions.iter().enumerate() {
        let w = rat(2, 1) * p.probabilities[v].clone();
        for part in parts {
            members.push(part.clone());
            weights.push(w.clone());
        }
    }
    let total: Rat = weights.iter().cloned().sum();
    assert!(total <= rat(2 * k as i64, 1));
    // coverage: every vertex gathers weight >= 1
    for u in 0..n {
        let cov: Rat = members
            .iter()
            .zip(&weights)
            .filter(|(m, _)| m.contains(u))
            .map(|(_, w)| w.clone())
            .sum();
        if cov < Rat::one() {
            return Err(TournamentError::Coverage(format!(
                "vertex {u} covered with weight {cov} < 1"
            )));
        }
    }
    let family = TransitiveFamily { members };
    Ok(WeightedTransitiveFamily {
        family,
        weights,
        total_weight: total,
    })
}

// ---------------------------------------------------------------------------
// Voter profiles and majority digraphs

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VoterProfile {
    pub candidates: usize,
    /// one permutation of 0..candidates per voter; earlier = preferred
    pub orders: Vec<Vec<usize>>,
}

impl VoterProfile {
    pub fn new(candidates: usize, orders: Vec<Vec<usize>>) -> Result<Self, TournamentError> {
        for (i, order) in orders.iter().enumerate() {
            if order.len() != candidates {
                return Err(TournamentError::Profile(format!(
                    "order {i} has length {} != {candidates}",
                    order.len()
                )));
            }
            let mut seen = vec![false; candidates];
            for &c in order {
                if c >= candidates || seen[c] {
                    return Err(TournamentError::Profile(format!(
                        "order {i} is not a permutation"
                    )));
                }
                seen[c] = true;
            }
        }
        Ok(VoterProfile { candidates, orders })
    }

    pub fn voters(&self) -> usize {
        self.orders.len()
    }

    /// positions[i][c] = rank of candidate c in order i (0 = top)
    fn positions(&self) -> Vec<Vec<usize>> {
        self.orders
            .iter()
            .map(|order| {
                let mut pos = vec![0usize; self.candidates];
                for (rank, &c) in order.iter().enumerate() {
                    pos[c] = rank;
                }
                pos
            })
            .collect()
    }

    /// number of voters ranking x before y
    pub fn prefer_count(&self, x: usize, y: usize) -> usize {
        self.positions_cached().iter().filter(|p| p[x] < p[y]).count()
    }

    fn positions_cached(&self) -> Vec<Vec<usize>> {
        // profiles are small; recomputing keeps the type plain-old-data
        self.positions()
    }
}

/// The c-majority digraph D_c: arc xy iff x precedes y in at least c*m
/// orders. For c <= 1/2 both directions of a pair may be present.
pub fn majority_digraph(p: &VoterProfile, c: Frac) -> crate::core::Digraph {
    assert!(c >= Frac::zero() && c <= Frac::one());
    let n = p.candidates;
    let m = p.voters();
    let pos = p.positions();
    let mut arcs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y {
                let cnt = pos.iter().filter(|q| q[x] < q[y]).count();
                if frac(cnt as i64, 1) >= c * frac(m as i64, 1) {
                    arcs.push((x, y));
                }
            }
        }
    }
    crate::core::Digraph::new(n, &arcs).expect("no self loops by construction")
}

/// The majority tri-tournament: A is D_{1/2} tournamentized (exact ties
/// directed toward the lower index), R is the arcs of D_{1/2-eps} missing
/// from A.
pub fn majority_tri_tournament(p: &VoterProfile, eps: Frac) -> TriTournament {
    assert!(eps > Frac::zero() && eps < frac(1, 2));
    let n = p.candidates;
    let m = p.voters();
    let pos = p.positions();
    let count = |x: usize, y: usize| pos.iter().filter(|q| q[x] < q[y]).count();
    let mut arcs = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let cxy = count(x, y);
            let cyx = m - cxy;
            // ties go toward the lower candidate index
            if cxy >= cyx {
                arcs.push((x, y));
            } else {
                arcs.push((y, x));
            }
        }
    }
    let thresh = (frac(1, 2) - eps) * frac(m as i64, 1);
    let mut red = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y && frac(count(x, y) as i64, 1) >= thresh {
                if !arcs.contains(&(x, y)) {
                    red.push((x, y));
                }
            }
        }
    }
    TriTournament::new(n, &arcs, &red).expect("red arcs disjoint from arcs by construction")
}

/// X validated directly against the raw counts: every candidate outside X
/// has some x in X preferred to it by at least a (1/2 - eps) fraction.
pub fn validate_majority_domination(p: &VoterProfile, eps: Frac, x: &VSet) -> bool {
    let m = p.voters();
    let thresh = (frac(1, 2) - eps) * frac(m as i64, 1);
    (0..p.candidates).all(|y| {
        x.contains(y)
            || x.iter()
                .any(|xv| frac(p.prefer_count(xv, y) as i64, 1) >= thresh)
    })
}

/// Dominating set of the (1/2-eps)-majority digraph, via the majority
/// tri-tournament and weighted sampling.
pub fn majority_domination(p: &VoterProfile, eps: Frac, seed: u64) -> VSet {
    let t = majority_tri_tournament(p, eps);
    let x = dominating_set_tri_tournament(&t, seed);
    assert!(
        validate_majority_domination(p, eps, &x),
        "tri-tournament domination must imply majority domination"
    );
    x
}
