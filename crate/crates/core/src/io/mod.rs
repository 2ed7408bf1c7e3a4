//! Text model format, solve reports and iteration traces.

pub mod lp_format;
pub mod report;
pub mod trace;

pub use lp_format::{format_number, parse_lp_text, write_lp_text, ParseError};
pub use report::{write_comparison, write_solution_report, Method, ReportFormat, SolveReport, VariableValue};
pub use trace::{write_iteration_trace, TraceError, TraceRow};
