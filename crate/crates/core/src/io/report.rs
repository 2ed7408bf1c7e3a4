//! Solve reports in human-readable and JSON form.

use std::fmt::Write as _;

use serde::Serialize;

use crate::model::{LpModel, Relation, DEFAULT_FEASIBILITY_TOL};
use crate::solution::{Solution, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Simplex,
    Affine,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Simplex => "simplex",
            Method::Affine => "affine",
        })
    }
}

/// A single-variable `>=` row acting as a lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    pub constraint: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariableValue {
    pub name: String,
    pub value: f64,
    #[serde(skip)]
    pub lower_bound: Option<LowerBound>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub method: Method,
    pub status: Status,
    /// `None` when the solve produced no point.
    pub objective: Option<f64>,
    pub variables: Vec<VariableValue>,
    pub binding_constraints: Vec<String>,
    pub iterations: usize,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Human,
    Json,
}

fn lower_bound(model: &LpModel, j: usize) -> Option<LowerBound> {
    model
        .constraints()
        .iter()
        .filter(|c| c.relation == Relation::Ge)
        .filter_map(|c| match c.single_variable() {
            Some((k, a)) if k == j && a > 0.0 => Some(LowerBound {
                constraint: c.name.clone(),
                value: c.rhs / a,
            }),
            _ => None,
        })
        .max_by(|a, b| a.value.total_cmp(&b.value))
}

impl SolveReport {
    pub fn from_solution(model: &LpModel, method: Method, solution: &Solution, wall_time_ms: f64) -> Self {
        let has_point = !solution.x.is_empty();
        let variables = if has_point {
            model
                .variable_names()
                .iter()
                .zip(&solution.x)
                .enumerate()
                .map(|(j, (name, &value))| VariableValue {
                    name: name.clone(),
                    value,
                    lower_bound: lower_bound(model, j),
                })
                .collect()
        } else {
            Vec::new()
        };
        Self {
            method,
            status: solution.status,
            objective: has_point.then_some(solution.objective),
            variables,
            binding_constraints: solution
                .binding
                .iter()
                .map(|&i| model.constraints()[i].name.clone())
                .collect(),
            iterations: solution.iterations,
            wall_time_ms,
        }
    }
}

fn bound_status(v: &VariableValue) -> String {
    match &v.lower_bound {
        None => "-".into(),
        Some(lb) if (v.value - lb.value).abs() <= DEFAULT_FEASIBILITY_TOL * (1.0 + lb.value.abs()) => {
            format!("at bound {} ({})", lb.value, lb.constraint)
        }
        Some(lb) => format!("above bound {} ({})", lb.value, lb.constraint),
    }
}

pub fn write_solution_report(report: &SolveReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string(report).expect("report serializes"),
        ReportFormat::Human => {
            let mut out = String::new();
            let _ = writeln!(out, "method: {}", report.method);
            let _ = writeln!(out, "status: {}", report.status);
            if let Some(obj) = report.objective {
                let _ = writeln!(out, "objective: {obj}");
            }
            let _ = writeln!(out, "iterations: {}", report.iterations);
            let _ = writeln!(out, "time: {:.3} ms", report.wall_time_ms);
            if !report.variables.is_empty() {
                let width = report.variables.iter().map(|v| v.name.len()).max().unwrap_or(0).max(8);
                let _ = writeln!(out, "{:<width$}  {:>20}  lower bound", "variable", "value");
                for v in &report.variables {
                    let _ = writeln!(out, "{:<width$}  {:>20}  {}", v.name, v.value, bound_status(v));
                }
            }
            if !report.binding_constraints.is_empty() {
                let _ = writeln!(out, "binding: {}", report.binding_constraints.join(", "));
            }
            out
        }
    }
}

#[derive(Serialize)]
struct Delta {
    objective_delta: Option<f64>,
}

/// `second - first` objective, or `None` if either report has no point.
pub fn objective_delta(first: &SolveReport, second: &SolveReport) -> Option<f64> {
    Some(second.objective? - first.objective?)
}

pub fn write_comparison(first: &SolveReport, second: &SolveReport, format: ReportFormat) -> String {
    let delta = objective_delta(first, second);
    match format {
        ReportFormat::Json => serde_json::to_string(&Delta { objective_delta: delta }).expect("delta serializes"),
        ReportFormat::Human => match delta {
            Some(d) => format!("objective delta ({} - {}): {d:e}\n", second.method, first.method),
            None => format!("objective delta ({} - {}): n/a\n", second.method, first.method),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::lana_instance;

    fn lana_report() -> SolveReport {
        let m = lana_instance();
        let sol = Solution {
            status: Status::Optimal,
            x: vec![20000.0, 30000.0, 8800.0, 2200.0, 40000.0, 2200.0],
            objective: 765_056.25,
            iterations: 9,
            binding: vec![4, 10],
        };
        SolveReport::from_solution(&m, Method::Simplex, &sol, 1.5)
    }

    #[test]
    fn json_field_order() {
        let json = write_solution_report(&lana_report(), ReportFormat::Json);
        assert!(json.starts_with(
            r#"{"method":"simplex","status":"optimal","objective":765056.25,"variables":[{"name":"K1","value":20000.0}"#
        ));
        assert!(json.ends_with(r#""binding_constraints":["profit_cap","k3_min"],"iterations":9,"wall_time_ms":1.5}"#));
    }

    #[test]
    fn infeasible_report_has_no_variables() {
        let r = SolveReport::from_solution(
            &lana_instance(),
            Method::Affine,
            &Solution::without_point(Status::Infeasible, 3),
            0.0,
        );
        assert!(r.variables.is_empty());
        let json = write_solution_report(&r, ReportFormat::Json);
        assert!(
            json.contains(r#""status":"infeasible","objective":null,"variables":[]"#),
            "{json}"
        );
    }

    #[test]
    fn human_table_shows_bounds() {
        let text = write_solution_report(&lana_report(), ReportFormat::Human);
        assert!(text.contains("status: optimal"));
        assert!(text.contains("above bound 11000 (k1_min)"), "{text}");
        assert!(text.contains("at bound 8800 (k3_min)"), "{text}");
        assert!(text.contains("binding: profit_cap, k3_min"));
    }

    #[test]
    fn comparison_line() {
        let a = lana_report();
        let mut b = a.clone();
        b.method = Method::Affine;
        b.objective = Some(765_056.0);
        assert_eq!(
            write_comparison(&a, &b, ReportFormat::Json),
            r#"{"objective_delta":-0.25}"#
        );
        assert!(write_comparison(&a, &b, ReportFormat::Human).contains("(affine - simplex): -2.5e-1"));
        b.objective = None;
        assert_eq!(
            write_comparison(&a, &b, ReportFormat::Json),
            r#"{"objective_delta":null}"#
        );
    }
}
