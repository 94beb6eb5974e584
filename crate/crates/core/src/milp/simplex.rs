//! Dense tableau simplex, two phases, lowest-index entering rule with a
//! Harris ratio test and periodic refactorization.

use super::{MilpError, Relation};
use crate::tol;

/// Entries at or below this magnitude never serve as pivots.
const PIVOT_EPS: f64 = 1e-9;
/// Smallest entry the ratio test looks at; anything below is round-off.
const PIVOT_FLOOR: f64 = 1e-12;
/// Infeasibility the Harris ratio test may trade for a larger pivot.
const HARRIS_DELTA: f64 = 1e-10;
/// Entries below this magnitude after a pivot are flushed to zero.
const DROP: f64 = 1e-12;
/// Differences this small relative to their operands are round-off.
const CANCEL: f64 = 1e-11;
/// Relative slack within which two ratios count as tied.
const RATIO_TIE: f64 = 1e-12;
/// Consecutive degenerate pivots before switching to Bland's rule.
const BLAND_AFTER: usize = 50;
/// Basic values this small make a pivot count as degenerate.
const DEGENERATE_STEP: f64 = 1e-9;
/// Pivots between refactorizations from the starting tableau.
const REFACTOR_EVERY: usize = 64;
/// A zero-level artificial row whose structural entries all fall below this
/// is a redundant equation and is dropped.
const REDUNDANT: f64 = 1e-7;
/// Conditioning guard on tableau entries.
const ENTRY_LIMIT: f64 = 1e13;
const MAX_PIVOTS: usize = 200_000;

/// `maximize objective · x` subject to dense rows, `x >= 0`.
#[derive(Debug, Clone)]
pub(crate) struct DenseLp {
    pub objective: Vec<f64>,
    pub rows: Vec<DenseRow>,
}

#[derive(Debug, Clone)]
pub(crate) struct DenseRow {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal(Vec<f64>),
    Infeasible,
    Unbounded,
}

/// `a - b`, flushed to zero when it is cancellation noise relative to the operands.
#[inline]
fn cancel(a: f64, b: f64) -> f64 {
    let d = a - b;
    if d.abs() <= CANCEL * a.abs().max(b.abs()) {
        0.0
    } else {
        d
    }
}

struct Tableau {
    /// Row-major, `width` entries per row; the last entry is the rhs.
    cells: Vec<f64>,
    /// The starting tableau, kept for refactorization.
    original: Vec<f64>,
    width: usize,
    basis: Vec<usize>,
    /// Active objective and its reduced costs `c_j - c_B B^-1 a_j`.
    costs: Vec<f64>,
    reduced: Vec<f64>,
    /// Columns that may never enter (artificials during phase two).
    barred: Vec<bool>,
    pivots: usize,
    /// Consecutive pivots that left the objective unchanged.
    degenerate_run: usize,
}

impl Tableau {
    fn rows(&self) -> usize {
        self.basis.len()
    }

    fn cols(&self) -> usize {
        self.width - 1
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.width + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.cells[i * self.width + self.width - 1]
    }

    fn set_costs(&mut self, costs: &[f64]) {
        self.costs = costs.to_vec();
        self.recompute_reduced();
    }

    fn recompute_reduced(&mut self) {
        let n = self.cols();
        self.reduced = self.costs.clone();
        for i in 0..self.rows() {
            let cb = self.costs[self.basis[i]];
            if cb != 0.0 {
                for j in 0..n {
                    self.reduced[j] -= cb * self.at(i, j);
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) -> Result<(), MilpError> {
        self.pivots += 1;
        if self.pivots > MAX_PIVOTS {
            return Err(MilpError::NumericalBreakdown(format!(
                "pivot limit of {MAX_PIVOTS} reached"
            )));
        }
        let w = self.width;
        let p = self.at(r, q);
        let (before, rest) = self.cells.split_at_mut(r * w);
        let (pivot_row, after) = rest.split_at_mut(w);
        for v in pivot_row.iter_mut() {
            *v /= p;
        }
        pivot_row[q] = 1.0;
        let eliminate = |row: &mut [f64]| {
            let f = row[q];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *v = cancel(*v, f * pv);
                }
                row[q] = 0.0;
            }
        };
        before.chunks_exact_mut(w).for_each(eliminate);
        after.chunks_exact_mut(w).for_each(eliminate);

        let f = self.reduced[q];
        if f != 0.0 {
            for (d, &pv) in self.reduced.iter_mut().zip(pivot_row.iter()) {
                *d = cancel(*d, f * pv);
            }
            self.reduced[q] = 0.0;
        }
        self.basis[r] = q;

        if self.pivots.is_multiple_of(REFACTOR_EVERY) || !self.healthy() {
            self.refactor()?;
            if !self.healthy() {
                return Err(MilpError::NumericalBreakdown(
                    "basis is ill-conditioned or lost feasibility".into(),
                ));
            }
        }
        self.clean();
        Ok(())
    }

    /// Every entry finite and within the conditioning guard, every basic
    /// value nonnegative within tolerance relative to the largest one.
    fn healthy(&self) -> bool {
        let scale = (0..self.rows()).fold(1.0_f64, |m, i| m.max(self.rhs(i).abs()));
        self.cells
            .iter()
            .all(|v| v.is_finite() && v.abs() <= ENTRY_LIMIT)
            && (0..self.rows()).all(|i| self.rhs(i) >= -tol::FEASIBILITY * scale)
    }

    /// Flushes round-off: tiny entries to zero, tiny negative basic values to zero.
    fn clean(&mut self) {
        for v in self.cells.iter_mut().chain(self.reduced.iter_mut()) {
            if v.abs() < DROP {
                *v = 0.0;
            }
        }
        let w = self.width;
        for i in 0..self.rows() {
            let b = &mut self.cells[i * w + w - 1];
            if *b < 0.0 {
                *b = 0.0;
            }
        }
    }

    /// Rebuilds `B^-1 [A | b]` for the current basis from the starting
    /// tableau by Gauss-Jordan elimination with partial pivoting.
    fn refactor(&mut self) -> Result<(), MilpError> {
        let (m, w) = (self.rows(), self.width);
        let mut t = self.original.clone();
        for k in 0..m {
            let col = self.basis[k];
            let r = (k..m)
                .max_by(|&a, &b| t[a * w + col].abs().total_cmp(&t[b * w + col].abs()))
                .expect("nonempty range");
            if t[r * w + col].abs() <= PIVOT_EPS {
                return Err(MilpError::NumericalBreakdown(
                    "basis matrix is singular".into(),
                ));
            }
            for j in 0..w {
                t.swap(k * w + j, r * w + j);
            }
            let p = t[k * w + col];
            for j in 0..w {
                t[k * w + j] /= p;
            }
            for i in (0..m).filter(|&i| i != k) {
                let f = t[i * w + col];
                if f != 0.0 {
                    for j in 0..w {
                        t[i * w + j] -= f * t[k * w + j];
                    }
                }
            }
        }
        self.cells = t;
        self.recompute_reduced();
        Ok(())
    }

    /// Leaving row for entering column `q`, or `None` if unbounded.
    ///
    /// Harris' two-pass test: the step is bounded with every basic value
    /// relaxed by `HARRIS_DELTA`, then the largest pivot within that bound
    /// wins, which keeps growth in check without skipping small but genuine
    /// entries. After a long run of degenerate pivots the choice falls back
    /// to Bland's lowest basis index among the exact minimum ratios,
    /// ruling out cycles.
    fn leaving_row(&self, q: usize) -> Option<usize> {
        let candidates: Vec<(usize, f64)> = (0..self.rows())
            .map(|i| (i, self.at(i, q)))
            .filter(|&(_, a)| a > PIVOT_FLOOR)
            .collect();
        if self.degenerate_run >= BLAND_AFTER {
            let ratio = |&(i, a): &(usize, f64)| self.rhs(i) / a;
            let best = candidates.iter().map(ratio).fold(f64::INFINITY, f64::min);
            return candidates
                .iter()
                .filter(|c| ratio(c) <= best + RATIO_TIE * best.abs().max(1.0))
                .min_by_key(|c| self.basis[c.0])
                .map(|c| c.0);
        }
        let bound = candidates
            .iter()
            .map(|&(i, a)| (self.rhs(i) + HARRIS_DELTA) / a)
            .fold(f64::INFINITY, f64::min);
        candidates
            .iter()
            .filter(|&&(i, a)| self.rhs(i) / a <= bound)
            .max_by(|x, y| {
                x.1.total_cmp(&y.1)
                    .then(self.basis[y.0].cmp(&self.basis[x.0]))
            })
            .map(|c| c.0)
    }

    /// Runs primal simplex on the active costs. `Ok(false)` means unbounded.
    fn optimize(&mut self) -> Result<bool, MilpError> {
        self.degenerate_run = 0;
        loop {
            let entering =
                (0..self.cols()).find(|&j| !self.barred[j] && self.reduced[j] > tol::OPTIMALITY);
            let Some(q) = entering else {
                return Ok(true);
            };
            let Some(r) = self.leaving_row(q) else {
                return Ok(false);
            };
            if self.rhs(r) <= DEGENERATE_STEP {
                self.degenerate_run += 1;
            } else {
                self.degenerate_run = 0;
            }
            self.pivot(r, q)?;
        }
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.width;
        self.cells.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        // Refactorization must see the same rows; the starting tableau is
        // recomputed from the current one, which is an equivalent system.
        self.original = self.cells.clone();
    }
}

/// Power of two closest to `1 / magnitude`, so rescaling is exact.
fn unit_scale(magnitude: f64) -> f64 {
    if magnitude > 0.0 && magnitude.is_finite() {
        (-magnitude.log2().round()).exp2()
    } else {
        1.0
    }
}

/// Equilibrates rows, then columns, to unit max magnitude. Returns the
/// scaled problem and the column factors (`x = factor * x_scaled`).
fn equilibrate(lp: &DenseLp) -> (DenseLp, Vec<f64>) {
    let n = lp.objective.len();
    let mut rows = lp.rows.clone();
    for r in &mut rows {
        let k = unit_scale(r.coeffs.iter().fold(0.0_f64, |a, v| a.max(v.abs())));
        r.coeffs.iter_mut().for_each(|v| *v *= k);
        r.rhs *= k;
    }
    let factors: Vec<f64> = (0..n)
        .map(|j| unit_scale(rows.iter().fold(0.0_f64, |a, r| a.max(r.coeffs[j].abs()))))
        .collect();
    for r in &mut rows {
        r.coeffs.iter_mut().zip(&factors).for_each(|(v, k)| *v *= k);
    }
    let objective = lp
        .objective
        .iter()
        .zip(&factors)
        .map(|(c, k)| c * k)
        .collect();
    (DenseLp { objective, rows }, factors)
}

pub(crate) fn solve_dense(lp: &DenseLp) -> Result<LpOutcome, MilpError> {
    let (scaled, factors) = equilibrate(lp);
    Ok(match solve_scaled(&scaled)? {
        LpOutcome::Optimal(x) => {
            LpOutcome::Optimal(x.iter().zip(&factors).map(|(v, k)| v * k).collect())
        }
        other => other,
    })
}

fn solve_scaled(lp: &DenseLp) -> Result<LpOutcome, MilpError> {
    let n = lp.objective.len();
    let m = lp.rows.len();

    // Normalize to nonnegative right-hand sides.
    let rows: Vec<(Vec<f64>, Relation, f64)> = lp
        .rows
        .iter()
        .map(|r| {
            if r.rhs < 0.0 {
                let flipped = match r.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (r.coeffs.iter().map(|a| -a).collect(), flipped, -r.rhs)
            } else {
                (r.coeffs.clone(), r.relation, r.rhs)
            }
        })
        .collect();

    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let cols = n + n_slack + n_art;
    let width = cols + 1;

    let mut cells = vec![0.0; m * width];
    let mut basis = vec![0; m];
    let mut next_slack = n;
    let mut next_art = n + n_slack;
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        let row = &mut cells[i * width..(i + 1) * width];
        row[..n].copy_from_slice(coeffs);
        row[cols] = *rhs;
        match rel {
            Relation::Le => {
                row[next_slack] = 1.0;
                basis[i] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
        }
    }
    let is_art = |j: usize| j >= n + n_slack;

    let mut t = Tableau {
        original: cells.clone(),
        cells,
        width,
        basis,
        costs: vec![0.0; cols],
        reduced: vec![0.0; cols],
        barred: vec![false; cols],
        pivots: 0,
        degenerate_run: 0,
    };

    if n_art > 0 {
        let mut phase1 = vec![0.0; cols];
        for c in phase1.iter_mut().skip(n + n_slack) {
            *c = -1.0;
        }
        t.set_costs(&phase1);
        // Phase one is bounded by zero, so unbounded cannot happen.
        t.optimize()?;
        let residual: f64 = (0..t.rows())
            .filter(|&i| is_art(t.basis[i]))
            .map(|i| t.rhs(i))
            .sum();
        if residual > tol::FEASIBILITY {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut i = 0;
        while i < t.rows() {
            if is_art(t.basis[i]) {
                let largest = (0..n + n_slack)
                    .map(|j| (j, t.at(i, j).abs()))
                    .filter(|&(_, a)| a > REDUNDANT)
                    .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
                match largest.map(|(j, _)| j) {
                    Some(q) => {
                        t.pivot(i, q)?;
                        i += 1;
                    }
                    None => t.remove_row(i),
                }
            } else {
                i += 1;
            }
        }
        for j in n + n_slack..cols {
            t.barred[j] = true;
        }
    }

    let mut costs = vec![0.0; cols];
    costs[..n].copy_from_slice(&lp.objective);
    t.set_costs(&costs);
    if !t.optimize()? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut x = vec![0.0; n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs(i);
        }
    }
    Ok(LpOutcome::Optimal(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(coeffs: &[f64], relation: Relation, rhs: f64) -> DenseRow {
        DenseRow {
            coeffs: coeffs.to_vec(),
            relation,
            rhs,
        }
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        // x + y = 2 twice, maximize x.
        let lp = DenseLp {
            objective: vec![1.0, 0.0],
            rows: vec![
                row(&[1.0, 1.0], Relation::Eq, 2.0),
                row(&[1.0, 1.0], Relation::Eq, 2.0),
            ],
        };
        assert_eq!(
            solve_dense(&lp).unwrap(),
            LpOutcome::Optimal(vec![2.0, 0.0])
        );
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        // -x <= -3  (x >= 3), maximize -x.
        let lp = DenseLp {
            objective: vec![-1.0],
            rows: vec![row(&[-1.0], Relation::Le, -3.0)],
        };
        assert_eq!(solve_dense(&lp).unwrap(), LpOutcome::Optimal(vec![3.0]));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling LP (cycles under the textbook largest-coefficient rule).
        let lp = DenseLp {
            objective: vec![0.75, -150.0, 0.02, -6.0],
            rows: vec![
                row(&[0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0),
                row(&[0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0),
                row(&[0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0),
            ],
        };
        match solve_dense(&lp).unwrap() {
            LpOutcome::Optimal(x) => {
                let obj: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                assert!((obj - 0.05).abs() < 1e-12, "objective {obj}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbounded_direction_is_detected() {
        let lp = DenseLp {
            objective: vec![1.0, 0.0],
            rows: vec![row(&[-1.0, 1.0], Relation::Le, 1.0)],
        };
        assert_eq!(solve_dense(&lp).unwrap(), LpOutcome::Unbounded);
    }
}
