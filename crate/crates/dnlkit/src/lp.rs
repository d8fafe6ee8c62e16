//! Exact linear programming over arbitrary-precision rationals, plus the
//! game/fractional solvers built on it: winning strategies, fractional
//! domination, and fractional acyclic chromatic number.
//!
//! Dense two-phase tableau simplex with Bland's rule (lowest eligible index
//! enters, lowest-index basic leaves on ratio ties), so no cycling. All
//! arithmetic is exact; optimality certificates are produced as dual vectors
//! recovered from the final basis.

use crate::bits::VSet;
use crate::core::{Digraph, TriTournament};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

pub type Rat = Ratio<BigInt>;

pub fn rat(n: i64, d: i64) -> Rat {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Ratio::from_integer(BigInt::from(n))
}

/// Render as the exact fraction string "num/den" (or just "num" for integers).
pub fn rat_str(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rat>,
    pub rows: Vec<(Vec<Rat>, Rel, Rat)>,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("inconsistent dimensions: row {0} has {1} coefficients, expected {2}")]
    Dimensions(usize, usize, usize),
    #[error("instance too large: {0}")]
    TooLarge(String),
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: Rat,
    pub solution: Vec<Rat>,
    /// One multiplier per constraint row; a strong-duality certificate
    /// (checked by [`check_duality`]).
    pub dual: Vec<Rat>,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

/// Verifies primal feasibility, dual feasibility and equal objectives,
/// exactly. Returns false on any discrepancy.
pub fn check_duality(lp: &LinearProgram, sol: &LpSolution) -> bool {
    let nv = lp.objective.len();
    if sol.solution.len() != nv || sol.dual.len() != lp.rows.len() {
        return false;
    }
    if sol.solution.iter().any(|x| x.is_negative()) {
        return false;
    }
    for (coeffs, rel, rhs) in &lp.rows {
        let lhs: Rat = coeffs
            .iter()
            .zip(&sol.solution)
            .map(|(a, x)| a.clone() * x.clone())
            .sum();
        let ok = match rel {
            Rel::Le => lhs <= *rhs,
            Rel::Eq => lhs == *rhs,
            Rel::Ge => lhs >= *rhs,
        };
        if !ok {
            return false;
        }
    }
    // objective value
    let obj: Rat = lp
        .objective
        .iter()
        .zip(&sol.solution)
        .map(|(c, x)| c.clone() * x.clone())
        .sum();
    if obj != sol.value {
        return false;
    }
    // dual signs: for a max problem, y_i >= 0 on <=-rows, <= 0 on >=-rows,
    // free on =-rows; reversed for min.
    for ((_, rel, _), y) in lp.rows.iter().zip(&sol.dual) {
        let ok = match (lp.sense, rel) {
            (_, Rel::Eq) => true,
            (Sense::Max, Rel::Le) | (Sense::Min, Rel::Ge) => !y.is_negative(),
            (Sense::Max, Rel::Ge) | (Sense::Min, Rel::Le) => !y.is_positive(),
        };
        if !ok {
            return false;
        }
    }
    // dual feasibility: A^T y >= c (max) resp. <= c (min), vars >= 0
    for j in 0..nv {
        let aty: Rat = lp
            .rows
            .iter()
            .zip(&sol.dual)
            .map(|((coeffs, _, _), y)| coeffs[j].clone() * y.clone())
            .sum();
        let ok = match lp.sense {
            Sense::Max => aty >= lp.objective[j],
            Sense::Min => aty <= lp.objective[j],
        };
        if !ok {
            return false;
        }
    }
    // dual objective b^T y equals the primal value (strong duality)
    let dual_obj: Rat = lp
        .rows
        .iter()
        .zip(&sol.dual)
        .map(|((_, _, rhs), y)| rhs.clone() * y.clone())
        .sum();
    dual_obj == sol.value
}

/// Standard-form tableau: min c'x over Ax = b, x >= 0, b >= 0.
struct Tableau {
    /// rows x (cols + 1); last column is the rhs
    a: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.a[r][c].clone();
        for x in self.a[r].iter_mut() {
            *x /= piv.clone();
        }
        for i in 0..self.a.len() {
            if i != r && !self.a[i][c].is_zero() {
                let f = self.a[i][c].clone();
                for j in 0..=self.cols {
                    let sub = f.clone() * self.a[r][j].clone();
                    self.a[i][j] -= sub;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland: entering = lowest-index column with negative reduced cost;
    /// leaving = min-ratio row, ties to the lowest basic index.
    /// `cost` has one reduced-cost entry per column. Returns false when
    /// optimal, errs with None row on unboundedness.
    fn simplex(&mut self, cost: &mut Vec<Rat>, obj: &mut Rat, allowed: usize) -> Result<(), ()> {
        loop {
            let Some(c) = (0..allowed).find(|&j| cost[j].is_negative()) else {
                return Ok(());
            };
            let mut leave: Option<usize> = None;
            let mut best: Option<Rat> = None;
            for r in 0..self.a.len() {
                if self.a[r][c].is_positive() {
                    let ratio = self.a[r][self.cols].clone() / self.a[r][c].clone();
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            ratio < *b
                                || (ratio == *b
                                    && self.basis[r] < self.basis[leave.unwrap()])
                        }
                    };
                    if better {
                        best = Some(ratio);
                        leave = Some(r);
                    }
                }
            }
            let Some(r) = leave else {
                return Err(()); // unbounded in the entering direction
            };
            self.pivot(r, c);
            // eliminate the entering column from the cost row
            let f = cost[c].clone();
            if !f.is_zero() {
                for j in 0..=self.cols {
                    if j < self.cols {
                        let sub = f.clone() * self.a[r][j].clone();
                        cost[j] -= sub;
                    }
                }
                *obj -= f * self.a[r][self.cols].clone();
            }
        }
    }
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    let nv = lp.objective.len();
    for (i, (coeffs, _, _)) in lp.rows.iter().enumerate() {
        if coeffs.len() != nv {
            return Err(LpError::Dimensions(i, coeffs.len(), nv));
        }
    }
    let m = lp.rows.len();

    // Standard form: min. Flip a max objective.
    let min_obj: Vec<Rat> = match lp.sense {
        Sense::Min => lp.objective.clone(),
        Sense::Max => lp.objective.iter().map(|c| -c.clone()).collect(),
    };

    // Columns: nv structural, then one slack/surplus per inequality row,
    // then one artificial per row that needs one. Track layout for duals.
    let mut slack_col = vec![usize::MAX; m];
    let mut ncols = nv;
    // normalize rhs >= 0 by flipping rows (tracked for dual recovery)
    let mut flipped = vec![false; m];
    let mut rows: Vec<(Vec<Rat>, Rel, Rat)> = lp.rows.clone();
    for (i, (coeffs, rel, rhs)) in rows.iter_mut().enumerate() {
        if rhs.is_negative() {
            flipped[i] = true;
            for c in coeffs.iter_mut() {
                *c = -c.clone();
            }
            *rhs = -rhs.clone();
            *rel = match rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
        }
    }
    for (i, (_, rel, _)) in rows.iter().enumerate() {
        if !matches!(rel, Rel::Eq) {
            slack_col[i] = ncols;
            ncols += 1;
        }
    }
    let struct_cols = ncols;
    let mut art_col = vec![usize::MAX; m];
    for (i, (_, rel, _)) in rows.iter().enumerate() {
        // Le rows start basic on their slack; Eq and Ge rows need an artificial
        if !matches!(rel, Rel::Le) {
            art_col[i] = ncols;
            ncols += 1;
        }
    }

    let mut a = vec![vec![Rat::zero(); ncols + 1]; m];
    let mut basis = vec![0usize; m];
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        for (j, c) in coeffs.iter().enumerate() {
            a[i][j] = c.clone();
        }
        match rel {
            Rel::Le => {
                a[i][slack_col[i]] = Rat::one();
                basis[i] = slack_col[i];
            }
            Rel::Ge => {
                a[i][slack_col[i]] = -Rat::one();
                a[i][art_col[i]] = Rat::one();
                basis[i] = art_col[i];
            }
            Rel::Eq => {
                a[i][art_col[i]] = Rat::one();
                basis[i] = art_col[i];
            }
        }
        a[i][ncols] = rhs.clone();
    }

    let mut t = Tableau { a, basis, cols: ncols };

    // Phase 1: minimize the sum of artificials.
    let any_art = art_col.iter().any(|&c| c != usize::MAX);
    if any_art {
        let mut cost = vec![Rat::zero(); ncols];
        for &c in &art_col {
            if c != usize::MAX {
                cost[c] = Rat::one();
            }
        }
        let mut obj = Rat::zero();
        // reduce cost row by the initial artificial basis
        for i in 0..m {
            if art_col[i] != usize::MAX {
                for j in 0..ncols {
                    let sub = t.a[i][j].clone();
                    cost[j] -= sub;
                }
                obj -= t.a[i][ncols].clone();
            }
        }
        t.simplex(&mut cost, &mut obj, ncols)
            .expect("phase 1 is bounded below by 0");
        if !obj.is_zero() {
            return Ok(LpOutcome::Infeasible);
        }
        // drive any artificial still in the basis out (degenerate rows)
        for r in 0..m {
            if t.basis[r] >= struct_cols {
                if let Some(c) = (0..struct_cols).find(|&j| !t.a[r][j].is_zero()) {
                    t.pivot(r, c);
                }
                // else: the row is 0 = 0 and the artificial stays at value 0
            }
        }
    }

    // Phase 2.
    let mut cost = vec![Rat::zero(); ncols];
    for j in 0..nv {
        cost[j] = min_obj[j].clone();
    }
    let mut obj = Rat::zero();
    for r in 0..m {
        let b = t.basis[r];
        if b < nv && !cost[b].is_zero() {
            let f = cost[b].clone();
            for j in 0..ncols {
                let sub = f.clone() * t.a[r][j].clone();
                cost[j] -= sub;
            }
            obj -= f * t.a[r][ncols].clone();
        }
    }
    if t.simplex(&mut cost, &mut obj, struct_cols).is_err() {
        return Ok(LpOutcome::Unbounded);
    }

    let mut solution = vec![Rat::zero(); nv];
    for r in 0..m {
        if t.basis[r] < nv {
            solution[t.basis[r]] = t.a[r][ncols].clone();
        }
    }
    let value: Rat = lp
        .objective
        .iter()
        .zip(&solution)
        .map(|(c, x)| c.clone() * x.clone())
        .sum();

    // Dual recovery from the final reduced costs: for the min-form problem,
    // a column equal to e_i with zero cost (a Le slack, or any artificial)
    // has reduced cost -y_i where y = c_B B^{-1}. Undo row flips, and for a
    // max objective negate (we minimized -c x).
    let mut dual = vec![Rat::zero(); m];
    for i in 0..m {
        let col = if art_col[i] != usize::MAX { art_col[i] } else { slack_col[i] };
        let mut y = -cost[col].clone();
        if flipped[i] {
            y = -y;
        }
        if matches!(lp.sense, Sense::Max) {
            y = -y;
        }
        dual[i] = y;
    }

    Ok(LpOutcome::Optimal(LpSolution { value, solution, dual }))
}

/// Solve an (overdetermined but consistent) linear system given as rows
/// [a_1 .. a_k | b]; returns any solution, or None if inconsistent.
#[cfg(test)]
fn gauss_solve_any(mut rows: Vec<Vec<Rat>>, k: usize) -> Option<Vec<Rat>> {
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r0 = 0usize;
    for c in 0..k {
        if let Some(pr) = (r0..rows.len()).find(|&r| !rows[r][c].is_zero()) {
            rows.swap(r0, pr);
            let piv = rows[r0][c].clone();
            for x in rows[r0].iter_mut() {
                *x /= piv.clone();
            }
            for r in 0..rows.len() {
                if r != r0 && !rows[r][c].is_zero() {
                    let f = rows[r][c].clone();
                    for j in 0..=k {
                        let sub = f.clone() * rows[r0][j].clone();
                        rows[r][j] -= sub;
                    }
                }
            }
            pivots.push((r0, c));
            r0 += 1;
        }
    }
    // consistency: no row 0 = nonzero
    for r in r0..rows.len() {
        if !rows[r][k].is_zero() {
            return None;
        }
    }
    let mut y = vec![Rat::zero(); k];
    for (r, c) in pivots {
        y[c] = rows[r][k].clone();
    }
    Some(y)
}


pub mod ratser {
    use super::{rat_str, Rat};
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn one<S: Serializer>(x: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&rat_str(x))
    }

    pub fn many<S: Serializer>(xs: &[Rat], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&rat_str(x))?;
        }
        seq.end()
    }

    pub fn pairs<S: Serializer>(xs: &[(Vec<usize>, Rat)], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(xs.len()))?;
        for (set, w) in xs {
            seq.serialize_element(&(set, rat_str(w)))?;
        }
        seq.end()
    }
}

// ---------------------------------------------------------------------------
// Tournament solvers

/// Probability distribution over vertices, exact.
#[derive(Debug, Clone, Serialize)]
pub struct Distribution {
    #[serde(serialize_with = "ratser::many")]
    pub probabilities: Vec<Rat>,
}

impl Distribution {
    pub fn is_valid(&self) -> bool {
        self.probabilities.iter().all(|p| !p.is_negative())
            && self.probabilities.iter().cloned().sum::<Rat>() == Rat::one()
    }
}

/// Exact p with p(N+(v)) <= p(N-(v)) for every v; always feasible.
pub fn winning_strategy(t: &TriTournament) -> Distribution {
    let n = t.ground_size();
    assert!(n > 0, "empty tournament has no distribution");
    let mut rows: Vec<(Vec<Rat>, Rel, Rat)> = Vec::new();
    // sum p = 1
    rows.push((vec![Rat::one(); n], Rel::Eq, Rat::one()));
    for v in 0..n {
        let mut coeffs = vec![Rat::zero(); n];
        for u in t.in_neighbors(v).iter() {
            coeffs[u] = Rat::one();
        }
        for u in t.out_neighbors(v).iter() {
            coeffs[u] = -Rat::one();
        }
        rows.push((coeffs, Rel::Ge, Rat::zero()));
    }
    let lp = LinearProgram {
        sense: Sense::Max,
        objective: vec![Rat::zero(); n],
        rows,
    };
    let out = solve_lp(&lp).expect("dimensions are consistent");
    let sol = out
        .optimal()
        .expect("a winning strategy always exists for a tournament");
    Distribution {
        probabilities: sol.solution.clone(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FractionalDomination {
    #[serde(serialize_with = "ratser::one")]
    pub value: Rat,
    #[serde(serialize_with = "ratser::many")]
    pub weights: Vec<Rat>,
}

/// gamma_f^+: min total weight with omega(N^-[v]) >= 1 for every v.
pub fn fractional_domination(d: &Digraph) -> FractionalDomination {
    let n = d.ground_size();
    let rows = (0..n)
        .map(|v| {
            let mut coeffs = vec![Rat::zero(); n];
            for u in d.closed_in_neighbors(v).iter() {
                coeffs[u] = Rat::one();
            }
            (coeffs, Rel::Ge, Rat::one())
        })
        .collect();
    let lp = LinearProgram {
        sense: Sense::Min,
        objective: vec![Rat::one(); n],
        rows,
    };
    let sol = solve_lp(&lp)
        .expect("consistent")
        .optimal()
        .expect("v in N^-[v] makes the all-ones vector feasible")
        .clone();
    FractionalDomination {
        value: sol.value,
        weights: sol.solution,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FractionalAcyclicChromatic {
    #[serde(serialize_with = "ratser::one")]
    pub value: Rat,
    /// (vertex set, weight) for every enumerated transitive set with
    /// positive weight.
    #[serde(serialize_with = "ratser::pairs")]
    pub weighted_sets: Vec<(Vec<usize>, Rat)>,
}

pub const FRACTIONAL_ACYCLIC_MAX_N: usize = 10;

/// All maximal transitive vertex subsets of a tournament (n <= 10).
pub fn maximal_transitive_sets(t: &TriTournament) -> Vec<VSet> {
    let n = t.ground_size();
    let mut transitive: Vec<u32> = Vec::new();
    for mask in 1u32..(1 << n) {
        let vs = VSet::from_iter(n, (0..n).filter(|&v| mask >> v & 1 == 1));
        if t.is_transitive_on(&vs) {
            transitive.push(mask);
        }
    }
    transitive
        .iter()
        .filter(|&&m| !transitive.iter().any(|&m2| m2 != m && m2 & m == m))
        .map(|&m| VSet::from_iter(n, (0..n).filter(|&v| m >> v & 1 == 1)))
        .collect()
}

/// chi_f^a by column enumeration over all maximal transitive subtournaments.
pub fn fractional_acyclic_chromatic(t: &TriTournament) -> Result<FractionalAcyclicChromatic, LpError> {
    let n = t.ground_size();
    if n > FRACTIONAL_ACYCLIC_MAX_N {
        return Err(LpError::TooLarge(format!(
            "chi_f^a column enumeration capped at n = {FRACTIONAL_ACYCLIC_MAX_N}, got {n}"
        )));
    }
    let cols = maximal_transitive_sets(t);
    let rows = (0..n)
        .map(|v| {
            let coeffs = cols
                .iter()
                .map(|s| if s.contains(v) { Rat::one() } else { Rat::zero() })
                .collect();
            (coeffs, Rel::Ge, Rat::one())
        })
        .collect();
    let lp = LinearProgram {
        sense: Sense::Min,
        objective: vec![Rat::one(); cols.len()],
        rows,
    };
    let sol = solve_lp(&lp)?
        .optimal()
        .expect("singletons are transitive, so the cover is feasible")
        .clone();
    Ok(FractionalAcyclicChromatic {
        value: sol.value,
        weighted_sets: cols
            .iter()
            .zip(&sol.solution)
            .filter(|(_, w)| w.is_positive())
            .map(|(s, w)| (s.to_vec(), w.clone()))
            .collect(),
    })
}
