//! Primal affine-scaling interior point method.
//!
//! Each iteration rescales the current point to the all-ones vector with
//! `D = diag(x)`, projects the scaled objective `D·c` onto the nullspace of
//! `A·D`, and moves a fixed fraction `alpha` of the way to the nearest
//! boundary along that projection. The projector is never formed; `P·v` is
//! computed as `v - Âᵀ·(ÂÂᵀ)⁻¹·Â·v` with a Cholesky solve.

use thiserror::Error;

use crate::linalg::{dot, gram, mat_t_vec, mat_vec, norm, Cholesky, DenseMatrix, DenseVector, LinalgError};
use crate::model::{ColumnKind, StandardForm, DEFAULT_FEASIBILITY_TOL};
use crate::solution::{Solution, Status};

/// Equality residuals are accepted up to this multiple of `1 + ‖b‖`.
pub const EQUALITY_TOL: f64 = 1e-7;

/// Phase 1 stops once the artificial variable falls below this level.
const ARTIFICIAL_EXIT: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IpmError {
    #[error("point is not strictly interior (component {index} is {value:e})")]
    NotInterior { index: usize, value: f64 },
    #[error("constraint matrix is rank deficient")]
    RankDeficient,
    #[error("objective is unbounded along the projected direction")]
    Unbounded,
    #[error("no strictly interior point found (artificial level {artificial:e})")]
    InfeasibleInterior { artificial: f64 },
    #[error("phase 1 hit the iteration limit (artificial level {artificial:e})")]
    PhaseOneLimit { artificial: f64 },
    #[error("invalid options: {0}")]
    InvalidOptions(&'static str),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpmOptions {
    /// Fraction of the distance to the boundary taken per step, in `(0, 1)`.
    pub alpha: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub ridge: f64,
}

impl Default for IpmOptions {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            tol: 1e-8,
            max_iter: 500,
            ridge: 0.0,
        }
    }
}

impl IpmOptions {
    pub fn validate(&self) -> Result<(), IpmError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(IpmError::InvalidOptions("alpha must lie in (0, 1)"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(IpmError::InvalidOptions("tol must be positive"));
        }
        if self.ridge.is_nan() || self.ridge < 0.0 {
            return Err(IpmError::InvalidOptions("ridge must be nonnegative"));
        }
        Ok(())
    }
}

/// One iterate of the method.
#[derive(Debug, Clone, PartialEq)]
pub struct IpmState {
    pub x: DenseVector,
    pub iteration: usize,
    /// Objective in the model's native sense.
    pub objective: f64,
    /// `‖x_k - x_{k-1}‖ / (1 + ‖x_{k-1}‖)`; zero for the starting point.
    pub step_norm: f64,
    /// `‖A·x - b‖`.
    pub residual: f64,
}

impl IpmState {
    pub fn min_x(&self) -> f64 {
        self.x.min()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionResult {
    /// Ascent direction in scaled space, `P·D·c`.
    pub d: DenseVector,
    /// Dual estimate `y` solving `ÂÂᵀ·y = Â·D·c`.
    pub dual_y: DenseVector,
    /// `D·c - Âᵀ·y`, i.e. `x ∘ (c - Aᵀy)`.
    pub reduced: DenseVector,
}

fn check_interior(x: &[f64]) -> Result<(), IpmError> {
    match x.iter().position(|&v| v.is_nan() || v <= 0.0) {
        Some(index) => Err(IpmError::NotInterior { index, value: x[index] }),
        None => Ok(()),
    }
}

/// `D = diag(x)`.
pub fn scaling_matrix(x: &[f64]) -> Result<DenseMatrix, IpmError> {
    check_interior(x)?;
    Ok(DenseMatrix::diagonal(x))
}

/// Factors `ÂÂᵀ`, retrying once with a small trace-scaled ridge.
fn factor_gram(a_hat: &DenseMatrix, ridge: f64) -> Result<Cholesky, IpmError> {
    let g = gram(a_hat);
    match Cholesky::factor(&g, ridge) {
        Ok(c) => Ok(c),
        Err(LinalgError::NotPositiveDefinite { .. }) => {
            let fallback = ridge.max(1e-10 * g.trace() / g.rows() as f64);
            Cholesky::factor(&g, fallback).map_err(|_| IpmError::RankDeficient)
        }
        Err(e) => Err(e.into()),
    }
}

/// Projects `v` onto the nullspace of `a_hat`, accumulating the multipliers
/// in `y`. Two passes keep `Â·Pv` near roundoff even when `ÂÂᵀ` is poorly
/// conditioned.
fn project(a_hat: &DenseMatrix, chol: &Cholesky, v: &[f64]) -> Result<(DenseVector, DenseVector), IpmError> {
    let mut p = DenseVector::from(v.to_vec());
    let mut y = DenseVector::zeros(a_hat.rows());
    for _ in 0..2 {
        let rhs = mat_vec(a_hat, &p)?;
        let dy = chol.solve(&rhs)?;
        let back = mat_t_vec(a_hat, &dy)?;
        for (pi, bi) in p.iter_mut().zip(back.iter()) {
            *pi -= bi;
        }
        for (yi, di) in y.iter_mut().zip(dy.iter()) {
            *yi += di;
        }
    }
    Ok((p, y))
}

/// Projected ascent direction at `x` for maximizing `cᵀx` over `A·x = b`.
pub fn projected_direction(a: &DenseMatrix, c: &[f64], x: &[f64], ridge: f64) -> Result<DirectionResult, IpmError> {
    check_interior(x)?;
    if c.len() != a.cols() || x.len() != a.cols() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.cols(),
            found: if c.len() != a.cols() { c.len() } else { x.len() },
        }
        .into());
    }
    let a_hat = a.scale_columns(x)?;
    let c_hat: Vec<f64> = c.iter().zip(x).map(|(ci, xi)| ci * xi).collect();
    let chol = factor_gram(&a_hat, ridge)?;
    let (d, dual_y) = project(&a_hat, &chol, &c_hat)?;
    Ok(DirectionResult {
        reduced: d.clone(),
        d,
        dual_y,
    })
}

/// Moves from `x` along the scaled direction `d`.
///
/// With `γ = min_i d_i < 0`, the scaled point is `e + (alpha/|γ|)·d`, whose
/// smallest component is exactly `1 - alpha`; the result is that point mapped
/// back through `D`. If `‖d‖ ≤ stall_tol` the point is returned unchanged.
/// A nonzero `d` with no negative component is an unbounded ray.
pub fn step(x: &[f64], d: &[f64], alpha: f64, stall_tol: f64) -> Result<DenseVector, IpmError> {
    check_interior(x)?;
    let d_norm = norm(d);
    if d_norm <= stall_tol {
        return Ok(x.to_vec().into());
    }
    let gamma = d.iter().copied().fold(f64::INFINITY, f64::min);
    let d_max = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if gamma >= -1e-12 * d_max {
        return Err(IpmError::Unbounded);
    }
    let t = alpha / -gamma;
    Ok(x.iter().zip(d).map(|(xi, di)| xi * (1.0 + t * di)).collect())
}

fn residual_norm(form: &StandardForm, x: &[f64]) -> Result<f64, IpmError> {
    let ax = mat_vec(&form.a, x)?;
    Ok(ax
        .iter()
        .zip(form.b.iter())
        .map(|(l, r)| (l - r).powi(2))
        .sum::<f64>()
        .sqrt())
}

fn equality_ok(form: &StandardForm, x: &[f64]) -> Result<bool, IpmError> {
    Ok(residual_norm(form, x)? <= EQUALITY_TOL * (1.0 + form.b.norm()))
}

/// Pulls `x` back onto `A·x = b` with the correction of least `D⁻¹`-weighted
/// norm, so components near zero barely move.
fn reproject(form: &StandardForm, x: &mut [f64], ridge: f64) -> Result<(), IpmError> {
    for _ in 0..2 {
        let ax = mat_vec(&form.a, x)?;
        let r: Vec<f64> = form.b.iter().zip(ax.iter()).map(|(b, l)| b - l).collect();
        let a_hat = form.a.scale_columns(x)?;
        let chol = factor_gram(&a_hat, ridge)?;
        let y = chol.solve(&r)?;
        let dx_hat = mat_t_vec(&a_hat, &y)?;
        for (xi, di) in x.iter_mut().zip(dx_hat.iter()) {
            *xi += *xi * di;
        }
    }
    Ok(())
}

/// Deterministic strictly positive guess used to seed phase 1.
fn phase_one_guess(form: &StandardForm) -> Vec<f64> {
    let m = form.rows().max(1) as f64;
    let mean_b = form.b.iter().map(|v| v.abs()).sum::<f64>() / m;
    (0..form.cols())
        .map(|j| {
            let col_norm = norm(&form.a.column(j));
            (mean_b / col_norm.max(1.0)).max(1.0)
        })
        .collect()
}

/// Finds `x > 0` with `A·x = b`.
///
/// An artificial column `u = b - A·x_g` is appended with level 1, and the
/// affine iteration minimizes that level. When a step can drive the
/// artificial to exactly zero while every other component keeps at least the
/// `1 - alpha` fraction of its value, the step is taken in full.
pub fn find_interior_point(form: &StandardForm, opts: &IpmOptions) -> Result<DenseVector, IpmError> {
    opts.validate()?;
    let n = form.cols();
    let guess = phase_one_guess(form);
    let ax = mat_vec(&form.a, &guess)?;
    let u: Vec<f64> = form.b.iter().zip(ax.iter()).map(|(b, l)| b - l).collect();
    if norm(&u) <= EQUALITY_TOL * (1.0 + form.b.norm()) {
        return Ok(guess.into());
    }

    let augmented = form.a.with_column(&u)?;
    let mut cost = vec![0.0; n + 1];
    cost[n] = -1.0;
    let mut x = guess;
    x.push(1.0);

    let finish = |mut x: Vec<f64>| -> Result<DenseVector, IpmError> {
        x.truncate(n);
        reproject(form, &mut x, opts.ridge)?;
        if x.iter().all(|&v| v > 0.0) && equality_ok(form, &x)? {
            Ok(x.into())
        } else {
            Err(IpmError::InfeasibleInterior { artificial: 0.0 })
        }
    };

    for _ in 0..opts.max_iter {
        let dir = projected_direction(&augmented, &cost, &x, opts.ridge)?;
        let d = &dir.d;
        let d_art = d[n];
        if d_art < 0.0 {
            let t = 1.0 / -d_art;
            let keeps_margin = d[..n].iter().all(|&di| 1.0 + t * di >= 1.0 - opts.alpha);
            if keeps_margin {
                let jumped = x.iter().zip(d.iter()).map(|(xi, di)| xi * (1.0 + t * di)).collect();
                return finish(jumped);
            }
        }
        let before = x[n];
        x = match step(&x, d, opts.alpha, 1e-14 * x[n]) {
            Ok(next) => next.into_inner(),
            // the artificial cannot decrease any further
            Err(IpmError::Unbounded) => return Err(IpmError::InfeasibleInterior { artificial: x[n] }),
            Err(e) => return Err(e),
        };
        if x[n] <= ARTIFICIAL_EXIT {
            return finish(x);
        }
        if before - x[n] <= opts.tol * before {
            return Err(IpmError::InfeasibleInterior { artificial: x[n] });
        }
    }
    Err(IpmError::PhaseOneLimit { artificial: x[n] })
}

/// Turns a boundary point (such as a simplex vertex) into a strictly interior
/// starting point: zero slacks are lifted to `1e-3·(1 + |b_row|)`, zero
/// structurals to `1e-3`, and the result is re-projected onto `A·x = b`.
pub fn warm_start_point(form: &StandardForm, boundary: &[f64], ridge: f64) -> Result<DenseVector, IpmError> {
    if boundary.len() != form.cols() {
        return Err(LinalgError::DimensionMismatch {
            expected: form.cols(),
            found: boundary.len(),
        }
        .into());
    }
    let mut x: Vec<f64> = boundary
        .iter()
        .zip(&form.column_kinds)
        .map(|(&v, kind)| {
            let floor = match *kind {
                ColumnKind::Slack(r) | ColumnKind::Surplus(r) | ColumnKind::Artificial(r) => {
                    1e-3 * (1.0 + form.b[r].abs())
                }
                ColumnKind::Structural(_) => 1e-3,
            };
            v.max(floor)
        })
        .collect();
    reproject(form, &mut x, ridge)?;
    check_interior(&x)?;
    if !equality_ok(form, &x)? {
        return Err(IpmError::NotInterior { index: 0, value: 0.0 });
    }
    Ok(x.into())
}

/// Completes a structural point with its slack/surplus values.
pub fn complete_with_slacks(form: &StandardForm, structural: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; form.cols()];
    x[..form.num_structural].copy_from_slice(structural);
    for (j, kind) in form.column_kinds.iter().enumerate() {
        if let ColumnKind::Slack(r) | ColumnKind::Surplus(r) = *kind {
            let lhs = dot(&form.a.row(r)[..form.num_structural], structural);
            x[j] = (form.b[r] - lhs) / form.a[(r, j)];
        }
    }
    x
}

fn state(form: &StandardForm, x: DenseVector, iteration: usize, step_norm: f64) -> Result<IpmState, IpmError> {
    Ok(IpmState {
        objective: form.native_objective(form.internal_objective(&x)),
        residual: residual_norm(form, &x)?,
        x,
        iteration,
        step_norm,
    })
}

/// Runs the affine-scaling iteration from `x0`, or from a phase-1 point when
/// `x0` is `None`. Returns the solution and every iterate, starting point
/// included. If phase 1 runs out of iterations the status is
/// `IterationLimit` and the trace is empty.
///
/// The iteration stops as optimal when any of these falls to `tol`: the
/// relative iterate change, the relative objective change, or the duality gap
/// implied by the current dual estimate (provided that estimate is dual
/// feasible to the same tolerance).
pub fn solve_affine(
    form: &StandardForm,
    x0: Option<&DenseVector>,
    opts: &IpmOptions,
) -> Result<(Solution, Vec<IpmState>), IpmError> {
    opts.validate()?;
    let x = match x0 {
        Some(x0) => {
            check_interior(x0)?;
            if !equality_ok(form, x0)? {
                return Err(IpmError::NotInterior { index: 0, value: 0.0 });
            }
            x0.clone()
        }
        None => match find_interior_point(form, opts) {
            Ok(x) => x,
            Err(IpmError::PhaseOneLimit { .. }) => {
                return Ok((
                    Solution::without_point(Status::IterationLimit, opts.max_iter),
                    Vec::new(),
                ));
            }
            Err(e) => return Err(e),
        },
    };

    let c_scale = 1.0 + form.c.norm_inf();
    let mut trace = vec![state(form, x, 0, 0.0)?];
    let mut status = Status::IterationLimit;

    for k in 1..=opts.max_iter {
        let current = trace.last().expect("trace starts non-empty");
        let x = &current.x;
        let internal = form.internal_objective(x);
        let dir = projected_direction(&form.a, &form.c, x, opts.ridge)?;

        let c_hat_norm = form
            .c
            .iter()
            .zip(x.iter())
            .map(|(c, x)| (c * x).powi(2))
            .sum::<f64>()
            .sqrt();
        let stall = opts.tol * (1.0 + c_hat_norm);
        if dir.d.norm() <= stall {
            status = Status::Optimal;
            break;
        }
        let dual_feasible = dir
            .reduced
            .iter()
            .zip(x.iter())
            .all(|(r, xi)| r / xi <= opts.tol * c_scale);
        let gap = -dir.reduced.iter().sum::<f64>();
        if dual_feasible && gap.abs() <= opts.tol * (1.0 + internal.abs()) {
            status = Status::Optimal;
            break;
        }

        let next = match step(x, &dir.d, opts.alpha, stall) {
            Ok(next) => next,
            Err(IpmError::Unbounded) => {
                status = Status::Unbounded;
                break;
            }
            Err(e) => return Err(e),
        };
        let diff: Vec<f64> = next.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
        let step_norm = norm(&diff) / (1.0 + x.norm());
        let objective_change = (form.internal_objective(&next) - internal).abs() / (1.0 + internal.abs());
        trace.push(state(form, next, k, step_norm)?);
        if step_norm <= opts.tol || objective_change <= opts.tol {
            status = Status::Optimal;
            break;
        }
    }

    let last = trace.last().expect("trace starts non-empty");
    let solution = match status {
        Status::Unbounded => Solution::without_point(Status::Unbounded, last.iteration),
        _ => Solution {
            status,
            x: form.structural_part(&last.x),
            objective: last.objective,
            iterations: last.iteration,
            binding: form.binding_rows(&last.x, DEFAULT_FEASIBILITY_TOL),
        },
    };
    Ok((solution, trace))
}
