//! Shattering, traces, brute-force VC-dimension and Sauer-Shelah validators.
//!
//! A tri-edge (B, R, W) realizes the clean separation Y of X when
//! X cap B = X cap (B cup R) = Y, i.e. no vertex of X is red in the edge.
//! X is shattered when every one of its 2^|X| subsets is realized.

use crate::bits::VSet;
use crate::core::TriHypergraph;
use serde::Serialize;
use std::collections::BTreeSet;

/// Certificate that `shattered_set` is shattered: `selectors[y]` is the
/// index of a tri-edge realizing the subset of X encoded by the bitmask y
/// over the sorted elements of X.
#[derive(Debug, Clone, Serialize)]
pub struct ShatterWitness {
    pub shattered_set: Vec<usize>,
    pub selectors: Vec<usize>,
}

impl ShatterWitness {
    /// Independent recheck straight from the hypergraph.
    pub fn verify(&self, h: &TriHypergraph) -> bool {
        let k = self.shattered_set.len();
        if self.selectors.len() != 1 << k {
            return false;
        }
        for (y, &ei) in self.selectors.iter().enumerate() {
            let Some(e) = h.edges.get(ei) else { return false };
            for (i, &v) in self.shattered_set.iter().enumerate() {
                let want_black = (y >> i) & 1 == 1;
                if e.red.contains(v) || e.black.contains(v) != want_black {
                    return false;
                }
            }
        }
        true
    }
}

/// Per-edge classification of X: None if the edge has a red vertex in X,
/// otherwise the bitmask of X cap B.
fn edge_mask(h: &TriHypergraph, xs: &[usize], ei: usize) -> Option<usize> {
    let e = &h.edges[ei];
    let mut mask = 0usize;
    for (i, &v) in xs.iter().enumerate() {
        if e.red.contains(v) {
            return None;
        }
        if e.black.contains(v) {
            mask |= 1 << i;
        }
    }
    Some(mask)
}

pub fn is_shattered(h: &TriHypergraph, x: &VSet) -> Option<ShatterWitness> {
    let xs = x.to_vec();
    let want = 1usize << xs.len();
    let mut selectors = vec![usize::MAX; want];
    let mut found = 0;
    for ei in 0..h.edges.len() {
        if let Some(mask) = edge_mask(h, &xs, ei) {
            if selectors[mask] == usize::MAX {
                selectors[mask] = ei;
                found += 1;
                if found == want {
                    break;
                }
            }
        }
    }
    if found == want {
        Some(ShatterWitness {
            shattered_set: xs,
            selectors,
        })
    } else {
        None
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VcReport {
    /// Largest certified dimension; -1 for an edgeless hypergraph.
    pub dimension: i64,
    /// False when the search stopped at the cap and only a lower bound holds.
    pub exact: bool,
    pub witness: Option<ShatterWitness>,
}

pub const DEFAULT_VC_CAP: usize = 12;

/// Exact VC-dimension by levelwise search: every shattered (d+1)-set extends
/// a shattered d-set, so we grow candidates by appending larger vertices.
/// Reports `>= cap` (exact = false) when a shattered cap-set exists.
pub fn vc_dimension(h: &TriHypergraph, cap: usize) -> VcReport {
    if h.edges.is_empty() {
        // no edge can realize even the empty separation
        return VcReport {
            dimension: -1,
            exact: true,
            witness: None,
        };
    }
    let n = h.ground_size;
    let mut level: Vec<Vec<usize>> = vec![vec![]]; // the empty set is shattered
    let mut best: Option<ShatterWitness> = None;
    let mut d = 0usize;
    while d < cap {
        let mut next: Vec<Vec<usize>> = Vec::new();
        let mut next_witness: Option<ShatterWitness> = None;
        for xs in &level {
            let lo = xs.last().map_or(0, |&m| m + 1);
            for v in lo..n {
                let mut cand = xs.clone();
                cand.push(v);
                if let Some(w) = is_shattered(h, &VSet::from_iter(n, cand.iter().copied())) {
                    if next_witness.is_none() {
                        next_witness = Some(w);
                    }
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        d += 1;
        best = next_witness;
        level = next;
    }
    VcReport {
        dimension: d as i64,
        exact: d < cap,
        witness: best,
    }
}

/// tr_H(Z) for a word Z (letters may repeat): the set of index sets
/// I such that some tri-edge has every letter at a position in I black and
/// every other letter white. Each edge contributes at most one index set.
pub fn word_trace(h: &TriHypergraph, z: &[usize]) -> BTreeSet<u64> {
    assert!(z.len() <= 20, "word too long");
    let mut tr = BTreeSet::new();
    'edges: for e in &h.edges {
        let mut mask = 0u64;
        for (i, &v) in z.iter().enumerate() {
            if e.red.contains(v) {
                continue 'edges;
            }
            if e.black.contains(v) {
                mask |= 1 << i;
            }
        }
        tr.insert(mask);
    }
    tr
}

/// Sum_{i<=d} C(m, i); the Sauer-Shelah ceiling.
pub fn sauer_shelah_bound(m: usize, d: i64) -> u128 {
    if d < 0 {
        return 0;
    }
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for i in 0..=(d as usize).min(m) {
        if i > 0 {
            c = c * (m - i + 1) as u128 / i as u128;
        }
        total += c;
    }
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct SauerShelahReport {
    pub dimension: i64,
    pub redless_trace_count: usize,
    pub redless_bound: u128,
    pub pass: bool,
    /// First violating word, if any (as a letter list).
    pub violation: Option<Vec<usize>>,
}

/// Checks (a) the classical bound on the red-free restriction: the number of
/// distinct traces of redless edges on V is at most Sum_{i<=d} C(n, i), and
/// (b) the word bound |tr_H(Z)| <= Sum_{i<=d} C(|Z|, i) for every word of
/// length at most `max_word_len`.
///
/// A word and its support have the same trace set (equal letters always land
/// on the same side of a separation), and the right-hand side only grows
/// with repetition, so checking each distinct-letter support set covers all
/// words; repeated-letter words are covered a fortiori.
pub fn sauer_shelah_check(h: &TriHypergraph, max_word_len: usize) -> SauerShelahReport {
    assert!(h.ground_size <= 16, "instance too large");
    let n = h.ground_size;
    let d = vc_dimension(h, n).dimension;

    let redless: BTreeSet<Vec<usize>> = h
        .edges
        .iter()
        .filter(|e| e.red.is_empty())
        .map(|e| e.black.to_vec())
        .collect();
    let redless_bound = sauer_shelah_bound(n, d);
    let mut pass = (redless.len() as u128) <= redless_bound;
    let mut violation = None;

    if pass {
        'subsets: for mask in 0u32..(1u32 << n) {
            let z: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if z.is_empty() || z.len() > max_word_len {
                continue;
            }
            let tr = word_trace(h, &z);
            if tr.len() as u128 > sauer_shelah_bound(z.len(), d) {
                pass = false;
                violation = Some(z);
                break 'subsets;
            }
        }
    }
    SauerShelahReport {
        dimension: d,
        redless_trace_count: redless.len(),
        redless_bound,
        pass,
        violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{frac, PairStatus, SetSystem, TriEdge, TriGraphBuilder, TriHypergraph};
    use rand::Rng;

    fn mk_edge(n: usize, b: &[usize], r: &[usize]) -> TriEdge {
        TriEdge::from_black_red(
            VSet::from_iter(n, b.iter().copied()),
            VSet::from_iter(n, r.iter().copied()),
        )
        .unwrap()
    }

    fn random_hypergraph(rng: &mut impl Rng, n: usize, m: usize) -> TriHypergraph {
        let edges = (0..m)
            .map(|_| {
                let mut b = VSet::empty(n);
                let mut r = VSet::empty(n);
                for v in 0..n {
                    match rng.gen_range(0..4) {
                        0 => b.insert(v),
                        1 => r.insert(v),
                        _ => {}
                    }
                }
                TriEdge::from_black_red(b, r).unwrap()
            })
            .collect();
        TriHypergraph::new(n, edges)
    }

    #[test]
    fn empty_conventions() {
        let h = TriHypergraph::new(4, vec![]);
        assert!(is_shattered(&h, &VSet::empty(4)).is_none());
        assert_eq!(vc_dimension(&h, 12).dimension, -1);
        let h1 = TriHypergraph::new(4, vec![mk_edge(4, &[0], &[])]);
        assert!(is_shattered(&h1, &VSet::empty(4)).is_some());
        // a singleton needs two distinct traces; one edge cannot shatter it
        assert!(is_shattered(&h1, &VSet::singleton(4, 0)).is_none());
        assert_eq!(vc_dimension(&h1, 12).dimension, 0);
    }

    #[test]
    fn powerset_saturates() {
        // all subsets of a 3-set as plain edges: vc = 3, 8 = Sum C(3,i) traces
        let n = 3;
        let edges = (0u32..8)
            .map(|m| mk_edge(n, &(0..n).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>(), &[]))
            .collect();
        let h = TriHypergraph::new(n, edges);
        let rep = vc_dimension(&h, 12);
        assert_eq!(rep.dimension, 3);
        assert!(rep.witness.unwrap().verify(&h));
        let ss = sauer_shelah_check(&h, 3);
        assert!(ss.pass);
        assert_eq!(ss.redless_trace_count, 8);
        assert_eq!(ss.redless_bound, 8);
    }

    #[test]
    fn all_red_trigraph_has_vc_zero() {
        let mut b = TriGraphBuilder::new(3);
        for v in 1..3 {
            for u in 0..v {
                b.set(u, v, PairStatus::Red);
            }
        }
        let h = b.build().to_hypergraph();
        // every vertex has a red-free trace only on sets avoiding its red
        // neighbors, which here means singletons {v} via the edge of v itself
        assert_eq!(vc_dimension(&h, 12).dimension, 0);
    }

    #[test]
    fn word_trace_repeated_letter() {
        let h = TriHypergraph::new(
            2,
            vec![mk_edge(2, &[0], &[]), mk_edge(2, &[], &[]), mk_edge(2, &[0, 1], &[])],
        );
        let tr = word_trace(&h, &[0, 0]);
        // a letter cannot be separated from itself: only 00 and 11 patterns
        assert!(tr.contains(&0b00) && tr.contains(&0b11));
        assert_eq!(tr.len(), 2);
        // empty word: trace is {empty} as soon as one edge exists
        assert_eq!(word_trace(&h, &[]).len(), 1);
        assert!(word_trace(&TriHypergraph::new(2, vec![]), &[]).is_empty());
    }

    #[test]
    fn complement_preserves_vc() {
        let mut rng = crate::rng::derive_rng(11, "vc-test", 0);
        for _ in 0..40 {
            let n = rng.gen_range(2..=7);
            let m = rng.gen_range(1..=12);
            let h = random_hypergraph(&mut rng, n, m);
            assert_eq!(
                vc_dimension(&h, n).dimension,
                vc_dimension(&h.complement(), n).dimension
            );
        }
    }

    #[test]
    fn refinement_only_raises_vc() {
        // recolor red vertices to black/white: any refinement of the edges
        let mut rng = crate::rng::derive_rng(12, "vc-test", 1);
        for _ in 0..30 {
            let n = rng.gen_range(2..=7);
            let m = rng.gen_range(1..=10);
            let h = random_hypergraph(&mut rng, n, m);
            let refined = TriHypergraph::new(
                n,
                h.edges
                    .iter()
                    .map(|e| {
                        let mut b = e.black.clone();
                        let mut r = VSet::empty(n);
                        for v in e.red.iter() {
                            if rng.gen_bool(0.5) {
                                b.insert(v);
                            }
                        }
                        let _ = &mut r;
                        TriEdge::from_black_red(b, r).unwrap()
                    })
                    .collect(),
            );
            assert!(vc_dimension(&h, n).dimension <= vc_dimension(&refined, n).dimension);
        }
    }

    #[test]
    fn random_sauer_shelah_never_violated() {
        let mut rng = crate::rng::derive_rng(13, "vc-test", 2);
        for _ in 0..60 {
            let n = rng.gen_range(1..=8);
            let m = rng.gen_range(0..=14);
            let h = random_hypergraph(&mut rng, n, m);
            let rep = sauer_shelah_check(&h, 4);
            assert!(rep.pass, "violation: {:?}", rep.violation);
        }
    }

    #[test]
    fn disjointness_vc_spot_check() {
        // vc of a disjointness trigraph is at most 1/eps
        let mut rng = crate::rng::derive_rng(14, "vc-test", 3);
        for _ in 0..20 {
            let n = rng.gen_range(3..=9);
            let m = rng.gen_range(1..=10);
            let lists: Vec<Vec<usize>> = (0..m)
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.4)).collect())
                .collect();
            let f = SetSystem::from_lists(n, &lists).unwrap();
            let h = f.disjointness_trigraph(frac(1, 3)).to_hypergraph();
            assert!(vc_dimension(&h, n).dimension <= 3);
        }
    }
}
