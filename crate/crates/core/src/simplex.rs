//! Big-M tableau simplex for maximization.
//!
//! The penalty `M` is kept symbolic: objective-row entries are [`BigMNumber`]s
//! compared lexicographically, so no numeric "large constant" ever enters the
//! arithmetic. The objective row stores `Z_j - C_j`; the tableau is optimal
//! once no entry is negative.

use thiserror::Error;

use crate::linalg::{DenseMatrix, DenseVector};
use crate::model::{
    constraint_residuals, evaluate_objective, to_big_m_form, BigMForm, BigMNumber, LpModel, DEFAULT_FEASIBILITY_TOL,
};
use crate::solution::{Solution, Status};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimplexError {
    #[error("pivot element at ({row}, {col}) is too small: {value:e}")]
    ZeroPivot { row: usize, col: usize, value: f64 },
    #[error("invalid simplex options: {0}")]
    InvalidOptions(&'static str),
}

/// Entering-column rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Most negative reduced cost (Dantzig). Falls back to [`PivotRule::Bland`]
    /// after `3m` consecutive degenerate pivots.
    LargestCoefficient,
    /// Smallest-index rule; never cycles.
    Bland,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub pivot_tol: f64,
    pub max_pivots: usize,
    pub anti_cycling: PivotRule,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            pivot_tol: 1e-9,
            max_pivots: 10_000,
            anti_cycling: PivotRule::LargestCoefficient,
        }
    }
}

/// One pivot as reported to trace consumers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotEvent {
    pub iteration: usize,
    pub entering: usize,
    pub leaving: usize,
    pub objective: BigMNumber,
}

/// `value - f·k`, with an `M` part that cancels to rounding noise set to zero
/// so the lexicographic order is decided by the finite part.
fn eliminate(value: BigMNumber, f: BigMNumber, k: f64) -> BigMNumber {
    let mut out = value - f * k;
    if out.m_coeff.abs() <= 1e-12 * (value.m_coeff.abs() + (f.m_coeff * k).abs()) {
        out.m_coeff = 0.0;
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tableau {
    pub body: DenseMatrix,
    pub rhs: DenseVector,
    pub basis: Vec<usize>,
    /// `Z_j - C_j` per column.
    pub obj_row: Vec<BigMNumber>,
    pub obj_value: BigMNumber,
    /// Columns that may never re-enter once they leave the basis.
    pub artificial: Vec<bool>,
}

/// Builds the starting tableau on the slack/artificial identity basis.
pub fn init_tableau(form: &BigMForm) -> Tableau {
    let body = form.matrix.clone();
    let rhs = form.base.b.clone();
    let basis = form.initial_basis.clone();
    let costs = &form.costs;

    let obj_row = (0..body.cols())
        .map(|j| {
            let z = basis
                .iter()
                .enumerate()
                .fold(BigMNumber::ZERO, |acc, (r, &bj)| acc + costs[bj] * body[(r, j)]);
            z - costs[j]
        })
        .collect();
    let obj_value = basis
        .iter()
        .zip(rhs.iter())
        .fold(BigMNumber::ZERO, |acc, (&bj, &v)| acc + costs[bj] * v);
    let artificial = (0..body.cols()).map(|j| form.is_artificial(j)).collect();

    Tableau {
        body,
        rhs,
        basis,
        obj_row,
        obj_value,
        artificial,
    }
}

impl Tableau {
    /// A tableau without artificial columns, mainly for tests and examples.
    pub fn new(
        body: DenseMatrix,
        rhs: Vec<f64>,
        basis: Vec<usize>,
        obj_row: Vec<BigMNumber>,
        obj_value: BigMNumber,
    ) -> Self {
        let artificial = vec![false; body.cols()];
        Self {
            body,
            rhs: rhs.into(),
            basis,
            obj_row,
            obj_value,
            artificial,
        }
    }

    fn is_candidate(&self, j: usize) -> bool {
        !self.artificial[j] && !self.basis.contains(&j)
    }

    /// Entering column, or `None` when every reduced cost is `>= -tol`.
    pub fn select_entering(&self, rule: PivotRule, tol: f64) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in 0..self.obj_row.len() {
            if !self.is_candidate(j) || !self.obj_row[j].is_negative(tol) {
                continue;
            }
            match rule {
                PivotRule::Bland => return Some(j),
                PivotRule::LargestCoefficient => {
                    if best.is_none_or(|b| self.obj_row[j] < self.obj_row[b]) {
                        best = Some(j);
                    }
                }
            }
        }
        best
    }

    /// Like [`Tableau::select_entering`] but prices the `M` part alone, which
    /// minimizes the total artificial level regardless of the real objective.
    fn select_entering_penalty_only(&self, rule: PivotRule, tol: f64) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in 0..self.obj_row.len() {
            if !self.is_candidate(j) || self.obj_row[j].m_coeff >= -tol {
                continue;
            }
            match rule {
                PivotRule::Bland => return Some(j),
                PivotRule::LargestCoefficient => {
                    if best.is_none_or(|b| self.obj_row[j].m_coeff < self.obj_row[b].m_coeff) {
                        best = Some(j);
                    }
                }
            }
        }
        best
    }

    /// Minimum-ratio row for `enter`; ties go to the row whose basic variable
    /// has the smallest index. `None` means the column is an unbounded ray.
    pub fn select_leaving(&self, enter: usize, tol: f64) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.body.rows() {
            let a = self.body[(r, enter)];
            if a <= tol {
                continue;
            }
            let ratio = self.rhs[r].max(0.0) / a;
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    let tie = (ratio - bratio).abs() <= 1e-12 * bratio.abs().max(1.0);
                    if (!tie && ratio < bratio) || (tie && self.basis[r] < self.basis[br]) {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        best.map(|(r, _)| r)
    }

    /// Gauss-Jordan pivot on `(row, col)`.
    pub fn pivot(&mut self, row: usize, col: usize, tol: f64) -> Result<(), SimplexError> {
        let p = self.body[(row, col)];
        if p.abs() <= tol {
            return Err(SimplexError::ZeroPivot { row, col, value: p });
        }
        for v in self.body.row_mut(row) {
            *v /= p;
        }
        self.rhs[row] /= p;
        self.body[(row, col)] = 1.0;

        let pivot_row = self.body.row(row).to_vec();
        let pivot_rhs = self.rhs[row];
        for r in 0..self.body.rows() {
            if r == row {
                continue;
            }
            let f = self.body[(r, col)];
            if f == 0.0 {
                continue;
            }
            for (v, &pv) in self.body.row_mut(r).iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.body[(r, col)] = 0.0;
            self.rhs[r] -= f * pivot_rhs;
        }

        let f = self.obj_row[col];
        for (z, &pv) in self.obj_row.iter_mut().zip(&pivot_row) {
            *z = eliminate(*z, f, pv);
        }
        self.obj_row[col] = BigMNumber::ZERO;
        self.obj_value = eliminate(self.obj_value, f, pivot_rhs);
        self.basis[row] = col;
        Ok(())
    }

    /// Every basic column is the matching unit vector to within `tol`.
    pub fn basis_is_identity(&self, tol: f64) -> bool {
        self.basis.iter().enumerate().all(|(pos, &j)| {
            (0..self.body.rows()).all(|r| {
                let expected = if r == pos { 1.0 } else { 0.0 };
                (self.body[(r, j)] - expected).abs() <= tol
            })
        })
    }

    /// Values of every column at the current basic solution.
    pub fn primal_values(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.body.cols()];
        for (r, &j) in self.basis.iter().enumerate() {
            x[j] = self.rhs[r];
        }
        x
    }

    /// Largest value held by a basic artificial column.
    pub fn artificial_level(&self) -> f64 {
        self.basis
            .iter()
            .zip(self.rhs.iter())
            .filter(|(&j, _)| self.artificial[j])
            .map(|(_, &v)| v.max(0.0))
            .fold(0.0, f64::max)
    }
}

pub fn solve_simplex(model: &LpModel, opts: &SimplexOptions) -> Result<Solution, SimplexError> {
    solve_simplex_traced(model, opts, |_| {})
}

/// Runs the Big-M simplex, calling `on_pivot` after every pivot.
pub fn solve_simplex_traced(
    model: &LpModel,
    opts: &SimplexOptions,
    mut on_pivot: impl FnMut(&PivotEvent),
) -> Result<Solution, SimplexError> {
    solve_simplex_inspected(model, opts, |e, _| on_pivot(e))
}

/// Like [`solve_simplex_traced`], but also hands out the tableau as it stands
/// after each pivot.
pub fn solve_simplex_inspected(
    model: &LpModel,
    opts: &SimplexOptions,
    mut on_pivot: impl FnMut(&PivotEvent, &Tableau),
) -> Result<Solution, SimplexError> {
    if opts.pivot_tol.is_nan() || opts.pivot_tol <= 0.0 {
        return Err(SimplexError::InvalidOptions("pivot_tol must be positive"));
    }
    let form = to_big_m_form(model);
    let mut t = init_tableau(&form);
    let n = form.base.num_structural;
    let m = t.body.rows();
    let tol = opts.pivot_tol;
    let artificial_tol = DEFAULT_FEASIBILITY_TOL * (1.0 + form.base.b.norm_inf());

    let mut rule = opts.anti_cycling;
    let mut degenerate_run = 0usize;
    let mut penalty_only = false;
    let mut pivots = 0usize;

    loop {
        let entering = if penalty_only {
            t.select_entering_penalty_only(rule, tol)
        } else {
            t.select_entering(rule, tol)
        };
        let Some(col) = entering else {
            if penalty_only {
                if t.artificial_level() > artificial_tol {
                    return Ok(Solution::without_point(Status::Infeasible, pivots));
                }
                penalty_only = false;
                continue;
            }
            break;
        };
        let Some(row) = t.select_leaving(col, tol) else {
            // A ray is only conclusive once the artificials are gone; until
            // then, settle feasibility first.
            if !penalty_only && t.artificial_level() > artificial_tol {
                penalty_only = true;
                continue;
            }
            return Ok(Solution::without_point(Status::Unbounded, pivots));
        };
        if pivots >= opts.max_pivots {
            return Ok(finish(model, &t, n, Status::IterationLimit, pivots));
        }

        let degenerate = t.rhs[row].abs() <= tol;
        let leaving = t.basis[row];
        t.pivot(row, col, tol)?;
        pivots += 1;
        on_pivot(
            &PivotEvent {
                iteration: pivots,
                entering: col,
                leaving,
                objective: t.obj_value,
            },
            &t,
        );

        if degenerate {
            degenerate_run += 1;
            if degenerate_run >= 3 * m {
                rule = PivotRule::Bland;
            }
        } else {
            degenerate_run = 0;
        }
    }

    if t.artificial_level() > artificial_tol {
        return Ok(Solution::without_point(Status::Infeasible, pivots));
    }
    Ok(finish(model, &t, n, Status::Optimal, pivots))
}

fn finish(model: &LpModel, t: &Tableau, n: usize, status: Status, pivots: usize) -> Solution {
    let x: Vec<f64> = t.primal_values()[..n].iter().map(|v| v.max(0.0)).collect();
    let objective = evaluate_objective(model, &x).unwrap_or(f64::NAN);
    let binding = constraint_residuals(model, &x, DEFAULT_FEASIBILITY_TOL)
        .map(|r| r.binding)
        .unwrap_or_default();
    Solution {
        status,
        x,
        objective,
        iterations: pivots,
        binding,
    }
}
