use std::fmt;

use serde::Serialize;

/// Termination status shared by every engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
            Status::IterationLimit => "iteration_limit",
        })
    }
}

/// Result of a solve, expressed over the structural variables of the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub status: Status,
    /// Structural variable values. Empty when no point is available.
    pub x: Vec<f64>,
    /// Objective in the model's native sense. NaN when no point is available.
    pub objective: f64,
    /// Pivots, IPM steps or enumerated subsets, depending on the engine.
    pub iterations: usize,
    /// Indices of constraints satisfied with equality at `x`.
    pub binding: Vec<usize>,
}

impl Solution {
    pub fn without_point(status: Status, iterations: usize) -> Self {
        Self {
            status,
            x: Vec::new(),
            objective: f64::NAN,
            iterations,
            binding: Vec::new(),
        }
    }
}
