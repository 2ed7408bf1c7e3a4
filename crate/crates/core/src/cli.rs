//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::affine::{solve_affine, IpmError, IpmOptions};
use crate::io::parse_lp_text;
use crate::io::report::{write_comparison, write_solution_report, Method, ReportFormat, SolveReport};
use crate::io::trace::{native, write_iteration_trace, TraceRow};
use crate::model::{
    constraint_residuals, evaluate_objective, lana_instance, to_big_m_form, to_equality_form, LpModel,
    DEFAULT_FEASIBILITY_TOL, LANA_PROFIT_CAP, REFERENCE_QM, REFERENCE_WINQSB,
};
use crate::simplex::{init_tableau, solve_simplex_traced, SimplexOptions};
use crate::solution::{Solution, Status};

/// Profits reported for two published interior-point runs on the LANA model.
pub const PUBLISHED_IPM_PROFITS: [f64; 2] = [765_289.924_4, 765_121.877_5];

#[derive(Debug, Parser)]
#[command(name = "lpduet", version, about = "Big-M simplex and affine-scaling LP solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a model in the text LP format.
    Solve(SolveArgs),
    /// Solve the built-in LANA budget model with both engines and compare.
    Lana(EngineArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Simplex,
    Affine,
    Both,
}

#[derive(Debug, Args)]
struct EngineArgs {
    /// Affine-scaling step fraction, in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Affine-scaling convergence tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Iteration cap applied to each engine (pivots for the simplex).
    #[arg(long)]
    max_iter: Option<usize>,
    /// Emit JSON lines instead of tables.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Simplex)]
    method: MethodArg,
    /// Write a per-iteration CSV trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Optimal => 0,
        Status::Infeasible => 2,
        Status::Unbounded => 3,
        Status::IterationLimit => 4,
    }
}

/// A finished engine run.
#[derive(Debug, Clone)]
pub struct Run {
    pub report: SolveReport,
    pub solution: Solution,
    pub trace: Vec<TraceRow>,
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn simplex_options(max_iter: Option<usize>) -> SimplexOptions {
    let mut opts = SimplexOptions::default();
    if let Some(n) = max_iter {
        opts.max_pivots = n;
    }
    opts
}

fn ipm_options(alpha: f64, tol: f64, max_iter: Option<usize>) -> IpmOptions {
    let mut opts = IpmOptions {
        alpha,
        tol,
        ..IpmOptions::default()
    };
    if let Some(n) = max_iter {
        opts.max_iter = n;
    }
    opts
}

pub fn run_simplex(model: &LpModel, opts: &SimplexOptions) -> Result<Run, String> {
    let start = Instant::now();
    let initial = init_tableau(&to_big_m_form(model)).obj_value;
    let mut trace = vec![TraceRow::Simplex {
        iteration: 0,
        objective: native(initial, model.sense()),
        entering: None,
        leaving: None,
    }];
    let solution = solve_simplex_traced(model, opts, |e| trace.push(TraceRow::from_pivot(e, model.sense())))
        .map_err(|e| format!("simplex failed: {e}"))?;
    let report = SolveReport::from_solution(model, Method::Simplex, &solution, elapsed_ms(start));
    Ok(Run {
        report,
        solution,
        trace,
    })
}

pub fn run_affine(model: &LpModel, opts: &IpmOptions) -> Result<Run, String> {
    let start = Instant::now();
    let form = to_equality_form(model);
    let (solution, trace) = match solve_affine(&form, None, opts) {
        Ok((sol, states)) => (sol, states.iter().map(TraceRow::from_ipm_state).collect()),
        Err(IpmError::InfeasibleInterior { .. }) => (Solution::without_point(Status::Infeasible, 0), Vec::new()),
        Err(e) => return Err(format!("affine scaling failed: {e}")),
    };
    let report = SolveReport::from_solution(model, Method::Affine, &solution, elapsed_ms(start));
    Ok(Run {
        report,
        solution,
        trace,
    })
}

/// `out.csv` becomes `out.simplex.csv`.
fn tagged_path(path: &Path, tag: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

fn save_trace(run: &Run, path: &Path, err: &mut dyn Write) -> bool {
    match write_iteration_trace(&run.trace, path) {
        Ok(()) => true,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write trace `{}`: {e}", path.display());
            false
        }
    }
}

fn run_engines(model: &LpModel, method: MethodArg, engine: &EngineArgs) -> Result<Vec<Run>, String> {
    let sx = simplex_options(engine.max_iter);
    let ipm = ipm_options(engine.alpha, engine.tol, engine.max_iter);
    ipm.validate().map_err(|e| e.to_string())?;
    match method {
        MethodArg::Simplex => Ok(vec![run_simplex(model, &sx)?]),
        MethodArg::Affine => Ok(vec![run_affine(model, &ipm)?]),
        MethodArg::Both => {
            let (simplex, affine) = std::thread::scope(|s| {
                let handle = s.spawn(|| run_affine(model, &ipm));
                let simplex = run_simplex(model, &sx);
                (simplex, handle.join().expect("affine thread panicked"))
            });
            Ok(vec![simplex?, affine?])
        }
    }
}

fn print_runs(runs: &[Run], format: ReportFormat, out: &mut dyn Write) {
    for (i, run) in runs.iter().enumerate() {
        if i > 0 && format == ReportFormat::Human {
            let _ = writeln!(out);
        }
        let text = write_solution_report(&run.report, format);
        let _ = write!(out, "{text}");
        if format == ReportFormat::Json {
            let _ = writeln!(out);
        }
    }
    if let [a, b] = runs {
        if format == ReportFormat::Human {
            let _ = writeln!(out);
        }
        let _ = write!(out, "{}", write_comparison(&a.report, &b.report, format));
        if format == ReportFormat::Json {
            let _ = writeln!(out);
        }
    }
}

fn worst_code(runs: &[Run]) -> i32 {
    runs.iter().map(|r| exit_code(r.report.status)).max().unwrap_or(1)
}

fn format_of(json: bool) -> ReportFormat {
    if json {
        ReportFormat::Json
    } else {
        ReportFormat::Human
    }
}

fn solve_command(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read `{}`: {e}", args.file.display());
            return 1;
        }
    };
    let model = match parse_lp_text(&text) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(
                err,
                "error: {}:{}:{}: {}",
                args.file.display(),
                e.line,
                e.column,
                e.message
            );
            return 1;
        }
    };
    let runs = match run_engines(&model, args.method, &args.engine) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    print_runs(&runs, format_of(args.engine.json), out);

    let mut code = worst_code(&runs);
    if let Some(path) = &args.trace {
        for run in &runs {
            let target = if runs.len() > 1 {
                tagged_path(path, &run.report.method.to_string())
            } else {
                path.clone()
            };
            if run.trace.is_empty() {
                let _ = writeln!(
                    err,
                    "warning: {} produced no iterates; `{}` not written",
                    run.report.method,
                    target.display()
                );
            } else if !save_trace(run, &target, err) {
                code = 1;
            }
        }
    }
    code
}

fn cell(v: Option<f64>, digits: usize) -> String {
    v.map(|v| format!("{v:.digits$}")).unwrap_or_else(|| "-".into())
}

fn lana_command(args: &EngineArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let model = lana_instance();
    let runs = match run_engines(&model, MethodArg::Both, args) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    if args.json {
        print_runs(&runs, ReportFormat::Json, out);
        return worst_code(&runs);
    }

    let columns: Vec<(&str, Option<Vec<f64>>)> = vec![
        ("WinQSB", Some(REFERENCE_WINQSB.to_vec())),
        ("QM", Some(REFERENCE_QM.to_vec())),
        ("simplex", Some(runs[0].solution.x.clone()).filter(|x| !x.is_empty())),
        ("affine", Some(runs[1].solution.x.clone()).filter(|x| !x.is_empty())),
    ];
    let _ = writeln!(out, "LANA budget allocation: maximize profit over products K1..K6\n");
    let _ = write!(out, "{:<12}", "");
    for (name, _) in &columns {
        let _ = write!(out, "{name:>16}");
    }
    let _ = writeln!(out);
    for (j, var) in model.variable_names().iter().enumerate() {
        let _ = write!(out, "{var:<12}");
        for (_, x) in &columns {
            let _ = write!(out, "{:>16}", cell(x.as_ref().map(|x| x[j]), 2));
        }
        let _ = writeln!(out);
    }
    let _ = write!(out, "{:<12}", "profit");
    for (_, x) in &columns {
        let p = x.as_ref().map(|x| evaluate_objective(&model, x).expect("six values"));
        let _ = write!(out, "{:>16}", cell(p, 4));
    }
    let _ = writeln!(out);
    let _ = write!(out, "{:<12}", "feasible");
    for (_, x) in &columns {
        let f = match x {
            Some(x) => match constraint_residuals(&model, x, DEFAULT_FEASIBILITY_TOL) {
                Ok(r) if r.feasible => "yes",
                _ => "no",
            },
            None => "-",
        };
        let _ = write!(out, "{f:>16}");
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "\nsimplex: {} in {} pivots; affine: {} in {} iterations",
        runs[0].report.status, runs[0].report.iterations, runs[1].report.status, runs[1].report.iterations
    );

    if let Some(x) = columns[2].1.as_ref() {
        let r = constraint_residuals(&model, x, DEFAULT_FEASIBILITY_TOL).expect("six values");
        let _ = writeln!(
            out,
            "\n{:<12} {:>16} {:>3} {:>16} {:>14}",
            "constraint", "lhs (simplex)", "", "rhs", "slack"
        );
        for (c, &res) in model.constraints().iter().zip(&r.residuals) {
            let lhs = c.coefficients.dot(x);
            let res = if res.abs() < 5e-5 { 0.0 } else { res };
            let _ = writeln!(
                out,
                "{:<12} {lhs:>16.4} {:>3} {:>16} {res:>14.4}",
                c.name, c.relation, c.rhs
            );
        }
    }
    let _ = writeln!(
        out,
        "\nnote: the published interior-point profits {} and {} exceed the profit cap {LANA_PROFIT_CAP}, \
         so no feasible plan attains them.",
        PUBLISHED_IPM_PROFITS[0], PUBLISHED_IPM_PROFITS[1]
    );
    worst_code(&runs)
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match &cli.command {
        Command::Solve(args) => solve_command(args, out, err),
        Command::Lana(args) => lana_command(args, out, err),
    }
}
