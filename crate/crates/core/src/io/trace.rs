//! Per-iteration CSV traces.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::affine::IpmState;
use crate::model::{BigMNumber, Sense};
use crate::simplex::PivotEvent;

pub const AFFINE_HEADER: &str = "iteration,objective,step_norm,min_x,residual";
pub const SIMPLEX_HEADER: &str = "iteration,objective,entering,leaving";

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace is empty")]
    Empty,
    #[error("trace mixes simplex and affine rows")]
    Mixed,
    #[error("iteration {0} does not follow the previous row")]
    NotIncreasing(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceRow {
    Affine {
        iteration: usize,
        objective: f64,
        step_norm: f64,
        min_x: f64,
        residual: f64,
    },
    /// The starting tableau is recorded with no entering or leaving column.
    Simplex {
        iteration: usize,
        objective: BigMNumber,
        entering: Option<usize>,
        leaving: Option<usize>,
    },
}

impl TraceRow {
    pub fn iteration(&self) -> usize {
        match self {
            TraceRow::Affine { iteration, .. } | TraceRow::Simplex { iteration, .. } => *iteration,
        }
    }

    pub fn from_ipm_state(s: &IpmState) -> Self {
        TraceRow::Affine {
            iteration: s.iteration,
            objective: s.objective,
            step_norm: s.step_norm,
            min_x: s.min_x(),
            residual: s.residual,
        }
    }

    /// `objective` is the internal maximization value carried by the tableau.
    pub fn from_pivot(e: &PivotEvent, sense: Sense) -> Self {
        TraceRow::Simplex {
            iteration: e.iteration,
            objective: native(e.objective, sense),
            entering: Some(e.entering),
            leaving: Some(e.leaving),
        }
    }
}

pub fn native(objective: BigMNumber, sense: Sense) -> BigMNumber {
    match sense {
        Sense::Maximize => objective,
        Sense::Minimize => -objective,
    }
}

fn opt(v: Option<usize>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_trace_to(rows: &[TraceRow], out: &mut impl Write) -> Result<(), TraceError> {
    let first = rows.first().ok_or(TraceError::Empty)?;
    let affine = matches!(first, TraceRow::Affine { .. });
    writeln!(out, "{}", if affine { AFFINE_HEADER } else { SIMPLEX_HEADER })?;
    let mut prev: Option<usize> = None;
    for row in rows {
        if matches!(row, TraceRow::Affine { .. }) != affine {
            return Err(TraceError::Mixed);
        }
        if prev.is_some_and(|p| row.iteration() <= p) {
            return Err(TraceError::NotIncreasing(row.iteration()));
        }
        prev = Some(row.iteration());
        match row {
            TraceRow::Affine {
                iteration,
                objective,
                step_norm,
                min_x,
                residual,
            } => writeln!(out, "{iteration},{objective},{step_norm},{min_x},{residual}")?,
            TraceRow::Simplex {
                iteration,
                objective,
                entering,
                leaving,
            } => writeln!(out, "{iteration},{objective},{},{}", opt(*entering), opt(*leaving))?,
        }
    }
    Ok(())
}

/// Writes `rows` as CSV to `path`.
pub fn write_iteration_trace(rows: &[TraceRow], path: &Path) -> Result<(), TraceError> {
    if rows.is_empty() {
        return Err(TraceError::Empty);
    }
    let mut out = BufWriter::new(File::create(path)?);
    write_trace_to(rows, &mut out)?;
    out.flush()?;
    Ok(())
}
