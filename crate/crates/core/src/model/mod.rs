//! LP models as users write them, and their conversions into the equality and
//! Big-M forms consumed by the engines.
//!
//! Every variable carries an implicit lower bound of zero. Right-hand sides are
//! kept nonnegative: a row written with a negative right-hand side is negated
//! and its relation flipped when the model is built.

mod lana;
mod standard;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::linalg::{dot, DenseVector};

pub use lana::{lana_instance, LANA_PROFIT_CAP, REFERENCE_QM, REFERENCE_WINQSB};
pub use standard::{to_big_m_form, to_equality_form, BigMForm, BigMNumber, ColumnKind, StandardForm};

/// Absolute tolerance, scaled by `1 + |b_i|`, used to classify rows as
/// satisfied or binding.
pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },
    #[error("model needs at least one variable and one constraint")]
    EmptyModel,
    #[error("non-finite value in {0}")]
    NonFiniteInput(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub coefficients: DenseVector,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(name: impl Into<String>, coefficients: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self {
            name: name.into(),
            coefficients: coefficients.into(),
            relation,
            rhs,
        }
    }

    /// If the row involves exactly one variable, returns its index and coefficient.
    pub fn single_variable(&self) -> Option<(usize, f64)> {
        let mut found = None;
        for (j, &a) in self.coefficients.iter().enumerate() {
            if a != 0.0 {
                if found.is_some() {
                    return None;
                }
                found = Some((j, a));
            }
        }
        found
    }
}

/// A validated linear program over nonnegative variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    sense: Sense,
    variable_names: Vec<String>,
    objective: DenseVector,
    constraints: Vec<Constraint>,
}

impl LpModel {
    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn objective(&self) -> &DenseVector {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_variables(&self) -> usize {
        self.variable_names.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }
}

/// Validates the pieces of a model and normalizes every row to a nonnegative
/// right-hand side.
pub fn build_model(
    sense: Sense,
    variable_names: Vec<String>,
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
) -> Result<LpModel, ModelError> {
    let n = variable_names.len();
    if n == 0 || constraints.is_empty() {
        return Err(ModelError::EmptyModel);
    }
    if objective.len() != n {
        return Err(ModelError::DimensionMismatch {
            context: "objective".into(),
            expected: n,
            found: objective.len(),
        });
    }
    if objective.iter().any(|v| !v.is_finite()) {
        return Err(ModelError::NonFiniteInput("objective".into()));
    }
    let mut seen = HashSet::new();
    for name in &variable_names {
        if !seen.insert(name.as_str()) {
            return Err(ModelError::DuplicateName(name.clone()));
        }
    }

    let mut normalized = Vec::with_capacity(constraints.len());
    for mut c in constraints {
        if c.coefficients.len() != n {
            return Err(ModelError::DimensionMismatch {
                context: format!("constraint `{}`", c.name),
                expected: n,
                found: c.coefficients.len(),
            });
        }
        if !c.rhs.is_finite() || c.coefficients.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::NonFiniteInput(format!("constraint `{}`", c.name)));
        }
        if c.rhs < 0.0 {
            c.rhs = -c.rhs;
            for a in c.coefficients.iter_mut() {
                *a = -*a;
            }
            c.relation = c.relation.flipped();
        }
        normalized.push(c);
    }

    Ok(LpModel {
        sense,
        variable_names,
        objective: objective.into(),
        constraints: normalized,
    })
}

fn check_len(model: &LpModel, x: &[f64]) -> Result<(), ModelError> {
    if x.len() != model.num_variables() {
        return Err(ModelError::DimensionMismatch {
            context: "point".into(),
            expected: model.num_variables(),
            found: x.len(),
        });
    }
    Ok(())
}

/// `cᵀx` in the model's own sense.
pub fn evaluate_objective(model: &LpModel, x: &[f64]) -> Result<f64, ModelError> {
    check_len(model, x)?;
    Ok(model.objective.dot(x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residuals {
    /// Signed slack per row; negative means violated (EQ rows report `|aᵀx - b|`).
    pub residuals: Vec<f64>,
    pub feasible: bool,
    pub binding: Vec<usize>,
}

/// Row-by-row slack of `x`. A row counts as satisfied when its residual is at
/// least `-tol·(1 + |b_i|)` and as binding when `|residual| ≤ tol·(1 + |b_i|)`.
pub fn constraint_residuals(model: &LpModel, x: &[f64], tol: f64) -> Result<Residuals, ModelError> {
    check_len(model, x)?;
    let mut residuals = Vec::with_capacity(model.num_constraints());
    let mut binding = Vec::new();
    let mut feasible = x.iter().all(|&v| v >= -tol);
    for (i, c) in model.constraints.iter().enumerate() {
        let lhs = dot(&c.coefficients, x);
        let r = match c.relation {
            Relation::Le => c.rhs - lhs,
            Relation::Ge => lhs - c.rhs,
            Relation::Eq => (lhs - c.rhs).abs(),
        };
        let scaled_tol = tol * (1.0 + c.rhs.abs());
        match c.relation {
            Relation::Eq => feasible &= r <= scaled_tol,
            _ => feasible &= r >= -scaled_tol,
        }
        if r.abs() <= scaled_tol {
            binding.push(i);
        }
        residuals.push(r);
    }
    Ok(Residuals {
        residuals,
        feasible,
        binding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_var(relation: Relation, rhs: f64) -> LpModel {
        build_model(
            Sense::Maximize,
            vec!["x".into()],
            vec![1.0],
            vec![Constraint::new("c1", vec![1.0], relation, rhs)],
        )
        .unwrap()
    }

    #[test]
    fn builds_single_variable_model() {
        let m = one_var(Relation::Le, 1.0);
        assert_eq!(m.num_variables(), 1);
        assert_eq!(m.num_constraints(), 1);
    }

    #[test]
    fn negative_rhs_is_normalized() {
        let m = build_model(
            Sense::Maximize,
            vec!["x".into(), "y".into()],
            vec![1.0, 1.0],
            vec![Constraint::new("c", vec![1.0, -2.0], Relation::Le, -5.0)],
        )
        .unwrap();
        let c = &m.constraints()[0];
        assert_eq!(c.rhs, 5.0);
        assert_eq!(c.relation, Relation::Ge);
        assert_eq!(c.coefficients.as_slice(), &[-1.0, 2.0]);
    }

    #[test]
    fn build_errors() {
        let empty = build_model(Sense::Maximize, vec!["x".into()], vec![1.0], vec![]);
        assert_eq!(empty, Err(ModelError::EmptyModel));

        let short = build_model(
            Sense::Maximize,
            vec!["x".into(), "y".into()],
            vec![1.0, 1.0],
            vec![Constraint::new("c", vec![1.0], Relation::Le, 1.0)],
        );
        assert!(matches!(short, Err(ModelError::DimensionMismatch { .. })));

        let nan = build_model(
            Sense::Maximize,
            vec!["x".into()],
            vec![f64::NAN],
            vec![Constraint::new("c", vec![1.0], Relation::Le, 1.0)],
        );
        assert!(matches!(nan, Err(ModelError::NonFiniteInput(_))));

        let dup = build_model(
            Sense::Maximize,
            vec!["x".into(), "x".into()],
            vec![1.0, 1.0],
            vec![Constraint::new("c", vec![1.0, 1.0], Relation::Le, 1.0)],
        );
        assert_eq!(dup, Err(ModelError::DuplicateName("x".into())));
    }

    #[test]
    fn equality_at_bound_is_binding() {
        let m = one_var(Relation::Ge, 2200.0);
        let r = constraint_residuals(&m, &[2200.0], DEFAULT_FEASIBILITY_TOL).unwrap();
        assert_eq!(r.residuals, vec![0.0]);
        assert!(r.feasible);
        assert_eq!(r.binding, vec![0]);
    }

    #[test]
    fn residual_signs() {
        let m = one_var(Relation::Le, 1.0);
        let r = constraint_residuals(&m, &[3.0], 1e-9).unwrap();
        assert_eq!(r.residuals, vec![-2.0]);
        assert!(!r.feasible);

        let m = one_var(Relation::Eq, 1.0);
        let r = constraint_residuals(&m, &[3.0], 1e-9).unwrap();
        assert_eq!(r.residuals, vec![2.0]);
        assert!(!r.feasible);
        assert!(constraint_residuals(&m, &[1.0], 1e-9).unwrap().feasible);
    }

    #[test]
    fn negative_point_is_infeasible() {
        let m = one_var(Relation::Le, 1.0);
        assert!(!constraint_residuals(&m, &[-0.5], 1e-9).unwrap().feasible);
        assert!(matches!(
            evaluate_objective(&m, &[1.0, 2.0]),
            Err(ModelError::DimensionMismatch { .. })
        ));
    }
}
