//! `rcint`: evaluate and rank interval-scored alternatives with robust
//! non-additive integrals, transform capacities, and validate input files.
//!
//! Exit codes: 0 on success, 1 on I/O failure, 2 on any validation failure
//! (malformed files, inconsistent tables, unsupported flag combinations).

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rcint_core::extensions::{
    bipolar_rci, concave_robust, concave_robust_exact, mpoint_rci, rci_level_dependent,
};
use rcint_core::formats::{self, FormatError};
use rcint_core::integrals::{
    choquet, rci, rci_mobius, rci_riemann_sampled, robust_shilkret, rsi_sorted, shilkret, sugeno,
};
use rcint_core::mobius::{self, interval_capacity_conditions};
use rcint_core::{Capacity, IntervalCapacity, SeparableDecomposition};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rcint",
    version,
    about = "Robust non-additive integrals over interval capacities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an integral for every alternative, in input order.
    Eval(EvalArgs),
    /// Rank alternatives by an integral, grouping ties.
    Rank(EvalArgs),
    /// Write the Möbius mass table of a capacity.
    Mobius(MobiusArgs),
    /// Validate a capacity or Möbius file.
    Check(CheckArgs),
    /// Mix two classical capacities into a separable interval capacity.
    GenSeparable(GenSeparableArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum IntegralKind {
    Rci,
    RciMobius,
    Rsi,
    ShilkretR,
    Choquet,
    Sugeno,
    Shilkret,
    Bipolar,
    Level,
    Concave,
    Mpoint,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    Float,
    Exact,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct EvalArgs {
    /// Integral to evaluate.
    #[arg(long, value_enum)]
    integral: IntegralKind,
    /// Capacity file; the expected schema follows the integral.
    #[arg(long)]
    capacity: PathBuf,
    /// Alternatives file (CSV).
    #[arg(long)]
    alts: PathBuf,
    /// Numeric mode. Exact arithmetic is supported for the concave integral.
    #[arg(long, value_enum, env = "RCINT_MODE", default_value_t = Mode::Float)]
    mode: Mode,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Midpoint-rule sample count: adds an independent integration
    /// diagnostic column (rci only).
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct MobiusArgs {
    /// Capacity file to transform.
    #[arg(long)]
    capacity: PathBuf,
    /// Numeric mode; exact runs the transform in rational arithmetic.
    #[arg(long, value_enum, env = "RCINT_MODE", default_value_t = Mode::Float)]
    mode: Mode,
    /// Write the Möbius table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Capacity or Möbius file to validate.
    #[arg(long)]
    capacity: PathBuf,
}

#[derive(Args)]
struct GenSeparableArgs {
    /// Mixture weight on the pessimistic capacity, in [0, 1].
    #[arg(long)]
    alpha: f64,
    /// Classical capacity file weighing the sure coalition.
    #[arg(long)]
    lower: PathBuf,
    /// Classical capacity file weighing the possible coalition.
    #[arg(long)]
    upper: PathBuf,
    /// Write the interval capacity here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum AppError {
    Io(String),
    Validation(String),
}

impl AppError {
    fn validation(message: impl Into<String>) -> Self {
        Self::Validation(message.into())
    }
}

impl From<FormatError> for AppError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Io { .. } => AppError::Io(e.to_string()),
            _ => AppError::Validation(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(args) => run_eval(args, false),
        Command::Rank(args) => run_eval(args, true),
        Command::Mobius(args) => run_mobius(args),
        Command::Check(args) => run_check(args),
        Command::GenSeparable(args) => run_gen_separable(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Io(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(AppError::Validation(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// One alternative's computed value; rationals carry the exact concave
/// result through ranking and printing.
#[derive(Clone, PartialEq)]
enum Value {
    Float(f64),
    Exact(BigRational),
}

impl Value {
    fn as_f64(&self) -> f64 {
        match self {
            Value::Float(v) => *v,
            Value::Exact(r) => rcint_core::numeric::Scalar::to_f64(r),
        }
    }

    fn render(&self) -> String {
        match self {
            Value::Float(v) => format_significant(*v, 12),
            Value::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
        }
    }

    fn ties_with(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a == b,
            _ => (self.as_f64() - other.as_f64()).abs() <= 1e-9,
        }
    }
}

/// Rounds to the given number of significant digits and prints the shortest
/// plain decimal form.
fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let text = format!("{v:.decimals$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

struct Report {
    /// `(id, value, diagnostic)` in input order.
    rows: Vec<(String, Value, Option<f64>)>,
}

fn evaluate(args: &EvalArgs) -> Result<Report, AppError> {
    if args.mode == Mode::Exact && args.integral != IntegralKind::Concave {
        return Err(AppError::validation(
            "exact mode is only supported for --integral concave (and the mobius command)",
        ));
    }
    if args.samples.is_some() && args.integral != IntegralKind::Rci {
        return Err(AppError::validation("--samples applies to --integral rci only"));
    }
    let mut rows = Vec::new();
    match args.integral {
        IntegralKind::Rci | IntegralKind::Rsi | IntegralKind::ShilkretR | IntegralKind::Concave => {
            let (mu, labels) = formats::load_interval_capacity(&args.capacity)?;
            let alts = formats::load_alternatives(&args.alts, &labels)?;
            for (id, x) in alts {
                let (value, diagnostic) = match args.integral {
                    IntegralKind::Rci => {
                        let v = rci(&x, &mu).map_err(|e| AppError::validation(e.to_string()))?;
                        let diag = match args.samples {
                            Some(samples) => Some(
                                rci_riemann_sampled(&x, &mu, samples)
                                    .map_err(|e| AppError::validation(e.to_string()))?,
                            ),
                            None => None,
                        };
                        (Value::Float(v), diag)
                    }
                    IntegralKind::Rsi => (
                        Value::Float(
                            rsi_sorted(&x, &mu).map_err(|e| AppError::validation(e.to_string()))?,
                        ),
                        None,
                    ),
                    IntegralKind::ShilkretR => (
                        Value::Float(
                            robust_shilkret(&x, &mu)
                                .map_err(|e| AppError::validation(e.to_string()))?,
                        ),
                        None,
                    ),
                    IntegralKind::Concave => {
                        let value = if args.mode == Mode::Exact {
                            Value::Exact(
                                concave_robust_exact(&x, &mu)
                                    .map_err(|e| AppError::validation(e.to_string()))?
                                    .value,
                            )
                        } else {
                            Value::Float(
                                concave_robust(&x, &mu)
                                    .map_err(|e| AppError::validation(e.to_string()))?
                                    .value,
                            )
                        };
                        (value, None)
                    }
                    _ => unreachable!(),
                };
                rows.push((id, value, diagnostic));
            }
        }
        IntegralKind::RciMobius => {
            let (table, labels) = formats::load_mobius(&args.capacity)?;
            let alts = formats::load_alternatives(&args.alts, &labels)?;
            for (id, x) in alts {
                let v =
                    rci_mobius(&x, &table).map_err(|e| AppError::validation(e.to_string()))?;
                rows.push((id, Value::Float(v), None));
            }
        }
        IntegralKind::Choquet | IntegralKind::Sugeno | IntegralKind::Shilkret => {
            let (nu, labels) = formats::load_capacity(&args.capacity)?;
            let alts = formats::load_alternatives(&args.alts, &labels)?;
            for (id, x) in alts {
                if !x.is_degenerate() {
                    return Err(AppError::validation(format!(
                        "alternative {id:?} has interval scores; classical integrals need \
                         degenerate (lo = hi) columns"
                    )));
                }
                let xs = x.lower();
                let v = match args.integral {
                    IntegralKind::Choquet => choquet(&xs, &nu),
                    IntegralKind::Sugeno => sugeno(&xs, &nu),
                    _ => shilkret(&xs, &nu),
                }
                .map_err(|e| AppError::validation(e.to_string()))?;
                rows.push((id, Value::Float(v), None));
            }
        }
        IntegralKind::Bipolar => {
            let (bmu, labels) = formats::load_bipolar(&args.capacity)?;
            let alts = formats::load_alternatives(&args.alts, &labels)?;
            for (id, x) in alts {
                let v =
                    bipolar_rci(&x, &bmu).map_err(|e| AppError::validation(e.to_string()))?;
                rows.push((id, Value::Float(v), None));
            }
        }
        IntegralKind::Level => {
            let (level, labels) = formats::load_level(&args.capacity)?;
            let alts = formats::load_alternatives(&args.alts, &labels)?;
            for (id, x) in alts {
                let v = rci_level_dependent(&x, &level)
                    .map_err(|e| AppError::validation(e.to_string()))?;
                rows.push((id, Value::Float(v), None));
            }
        }
        IntegralKind::Mpoint => {
            let (mm, labels) = formats::load_mpoint_capacity(&args.capacity)?;
            let alts = formats::load_mpoint_alternatives(&args.alts, &labels, mm.points())?;
            for (id, x) in alts {
                let v =
                    mpoint_rci(&x, &mm).map_err(|e| AppError::validation(e.to_string()))?;
                rows.push((id, Value::Float(v), None));
            }
        }
    }
    Ok(Report { rows })
}

fn run_eval(args: EvalArgs, rank: bool) -> Result<(), AppError> {
    let report = evaluate(&args)?;
    let text = if rank {
        render_ranking(&report, args.format)
    } else {
        render_values(&report, args.format)
    };
    emit(args.out.as_deref(), &text)
}

fn render_values(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let with_diag = report.rows.iter().any(|(_, _, d)| d.is_some());
            let mut text = String::from(if with_diag { "id,value,riemann\n" } else { "id,value\n" });
            for (id, value, diagnostic) in &report.rows {
                let _ = write!(text, "{id},{}", value.render());
                if with_diag {
                    let _ = match diagnostic {
                        Some(d) => write!(text, ",{}", format_significant(*d, 12)),
                        None => write!(text, ","),
                    };
                }
                text.push('\n');
            }
            text
        }
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = report
                .rows
                .iter()
                .map(|(id, value, diagnostic)| {
                    let mut obj = serde_json::json!({ "id": id, "value": value_json(value) });
                    if let Some(d) = diagnostic {
                        obj["riemann"] = serde_json::json!(d);
                    }
                    obj
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
        }
    }
}

fn value_json(value: &Value) -> serde_json::Value {
    match value {
        Value::Float(v) => serde_json::json!(v),
        Value::Exact(_) => serde_json::json!(value.render()),
    }
}

/// Stable descending sort with tie groups: equal values (exact in exact
/// mode, within the print precision otherwise) share a rank.
fn render_ranking(report: &Report, format: OutputFormat) -> String {
    let mut order: Vec<usize> = (0..report.rows.len()).collect();
    order.sort_by(|&a, &b| {
        report.rows[b]
            .1
            .as_f64()
            .total_cmp(&report.rows[a].1.as_f64())
            .then(a.cmp(&b))
    });
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for idx in order {
        match groups.last_mut() {
            Some((_, members))
                if report.rows[members[0]].1.ties_with(&report.rows[idx].1) =>
            {
                members.push(idx);
            }
            _ => {
                let rank = groups.iter().map(|(_, m)| m.len()).sum::<usize>() + 1;
                groups.push((rank, vec![idx]));
            }
        }
    }
    match format {
        OutputFormat::Csv => {
            let mut text = String::from("rank,id,value,tied\n");
            for (rank, members) in &groups {
                let tied = members.len() > 1;
                for &idx in members {
                    let (id, value, _) = &report.rows[idx];
                    let _ = writeln!(text, "{rank},{id},{},{}", value.render(), tied);
                }
            }
            text
        }
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = groups
                .iter()
                .map(|(rank, members)| {
                    serde_json::json!({
                        "rank": rank,
                        "ids": members.iter().map(|&i| report.rows[i].0.clone()).collect::<Vec<_>>(),
                        "value": value_json(&report.rows[members[0]].1),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
        }
    }
}

fn run_mobius(args: MobiusArgs) -> Result<(), AppError> {
    let (mu, labels) = formats::load_interval_capacity(&args.capacity)?;
    let table = match args.mode {
        Mode::Float => mobius::mobius(&mu),
        Mode::Exact => {
            // Exact transform; masses land in the file as nearest doubles.
            let rational: Vec<BigRational> = mu
                .values()
                .iter()
                .map(|&v| rcint_core::numeric::Scalar::from_f64(v))
                .collect();
            let values = mobius::mobius_table(mu.n(), &rational)
                .into_iter()
                .map(|r| rcint_core::numeric::Scalar::to_f64(&r))
                .collect();
            mobius::MobiusRepresentation::new(mu.n(), mu.top(), values)
                .map_err(|e| AppError::validation(e.to_string()))?
        }
    };
    match &args.out {
        Some(path) => {
            formats::save_mobius(path, &table, &labels)?;
            Ok(())
        }
        None => {
            print!("{}", formats::mobius_json(&table, &labels));
            Ok(())
        }
    }
}

fn run_check(args: CheckArgs) -> Result<(), AppError> {
    // A capacity file and a Möbius table share the schema; the flag decides
    // which validator runs.
    let text = std::fs::read_to_string(&args.capacity)
        .map_err(|e| AppError::Io(format!("{}: {e}", args.capacity.display())))?;
    let probe: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| AppError::validation(format!("{}: {e}", args.capacity.display())))?;
    let is_mobius = probe.get("mobius").and_then(serde_json::Value::as_bool).unwrap_or(false);
    if is_mobius {
        let (table, _) = formats::load_mobius(&args.capacity)?;
        let violations = interval_capacity_conditions(table.n(), &table.top(), table.values());
        if violations.is_empty() {
            println!(
                "OK: Möbius table over {} criteria represents an interval capacity (top = {})",
                table.n(),
                table.top()
            );
            Ok(())
        } else {
            Err(AppError::validation(format!(
                "{}: {} characterization violations, first: {:?}",
                args.capacity.display(),
                violations.len(),
                violations[0]
            )))
        }
    } else {
        let (mu, _) = formats::load_interval_capacity(&args.capacity)?;
        println!(
            "OK: interval capacity over {} criteria (top = {}, {} entries)",
            mu.n(),
            mu.top(),
            mu.values().len()
        );
        Ok(())
    }
}

fn run_gen_separable(args: GenSeparableArgs) -> Result<(), AppError> {
    let (lower, lower_labels) = formats::load_capacity(&args.lower)?;
    let (upper, upper_labels) = formats::load_capacity(&args.upper)?;
    if lower_labels != upper_labels {
        return Err(AppError::validation(
            "the two capacities disagree on criterion labels",
        ));
    }
    let mixture = build_mixture(args.alpha, lower, upper)?;
    match &args.out {
        Some(path) => {
            formats::save_interval_capacity(path, &mixture, &lower_labels)?;
            Ok(())
        }
        None => {
            print!("{}", formats::interval_capacity_json(&mixture, &lower_labels));
            Ok(())
        }
    }
}

fn build_mixture(
    alpha: f64,
    lower: Capacity,
    upper: Capacity,
) -> Result<IntervalCapacity, AppError> {
    let decomposition = SeparableDecomposition::new(alpha, lower, upper)
        .map_err(|e| AppError::validation(e.to_string()))?;
    Ok(decomposition.mixture())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), AppError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| AppError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
