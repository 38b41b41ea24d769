//! Command-line front end: `fit`, `eval` and `simulate`.
//!
//! Exit codes: 0 success, 2 unreadable or malformed input, 3 internal
//! numerical failure (a defect, not a data property).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cash;
use crate::dataset::{BinnedDataset, GapSpec};
use crate::error::Error;
use crate::extended::{self, ExtendedModel};
use crate::io::{format_f64, json_f64, json_f64_array, parse_bins_csv, parse_gaps_flag};
use crate::oracle;
use crate::sim::{self, CountShape, SimConfig};
use crate::solver::{self, DiagnosticsLevel, RejectionReason, SolverDiagnostics};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cashfit",
    version,
    about = "Maximum-likelihood linear models for binned Poisson count data"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit the extended non-negative linear model to a CSV dataset and
    /// print a JSON report.
    Fit(FitArgs),
    /// Tabulate the solver functions over a slope grid as CSV.
    Eval(EvalArgs),
    /// Run the Monte Carlo acceptance-fraction experiment.
    Simulate(SimArgs),
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Input CSV file (header x_lo,x_hi,count; '#' comments).
    input: PathBuf,
    /// Declared gaps as "a:b,a:b". Default: inferred from bin voids.
    #[arg(long, allow_hyphen_values = true)]
    gaps: Option<String>,
    /// Also isolate the internal zeros of the slope equation.
    #[arg(long)]
    diagnostics: bool,
    /// Cross-check against the grid-search oracle and report the delta.
    #[arg(long)]
    oracle: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Input CSV file (header x_lo,x_hi,count; '#' comments).
    input: PathBuf,
    /// Slope grid as "lo:hi:steps".
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    /// Declared gaps as "a:b,a:b". Default: inferred from bin voids.
    #[arg(long, allow_hyphen_values = true)]
    gaps: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct SimArgs {
    /// JSON experiment config; overrides the individual flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parent density of event positions.
    #[arg(long, default_value = "uniform")]
    shape: String,
    /// Events per trial. Default: sweep the built-in grid of totals.
    #[arg(long)]
    counts: Option<u64>,
    /// Comma-separated list of per-trial totals to sweep.
    #[arg(long, value_delimiter = ',')]
    count_grid: Option<Vec<u64>>,
    #[arg(long, default_value_t = 100)]
    bins: usize,
    #[arg(long, default_value_t = 100)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Range of the independent variable as "lo:hi".
    #[arg(long, default_value = "0:100", allow_hyphen_values = true)]
    range: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

/// Parse arguments and dispatch; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Fit(args) => cmd_fit(&args),
        Command::Eval(args) => cmd_eval(&args),
        Command::Simulate(args) => cmd_simulate(&args),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::BracketFailure { .. }
        | Error::SingularDenominator { .. }
        | Error::EvaluationAtSingularity { .. } => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

fn read_dataset(input: &Path, gaps: Option<&str>) -> Result<BinnedDataset, Error> {
    let text = std::fs::read_to_string(input).map_err(|e| Error::MalformedInput {
        line: 0,
        message: format!("cannot read {}: {e}", input.display()),
    })?;
    let bins = parse_bins_csv(&text)?;
    let gap_spec = match gaps {
        Some(flag) => GapSpec::Explicit(parse_gaps_flag(flag)?),
        None => GapSpec::Auto,
    };
    BinnedDataset::build(bins, gap_spec)
}

fn dataset_summary(ds: &BinnedDataset) -> Value {
    json!({
        "n_bins": ds.num_bins(),
        "total_counts": ds.total_counts(),
        "nonzero_bins": ds.num_nonzero(),
        "x_a": json_f64(ds.x_a()),
        "x_b": json_f64(ds.x_b()),
        "range": json_f64(ds.range()),
        "gap_length": json_f64(ds.gap_length()),
        "effective_range": json_f64(ds.effective_range()),
    })
}

fn diagnostics_json(d: &SolverDiagnostics) -> Value {
    json!({
        "g_singularities": json_f64_array(d.g_singularities.iter().copied()),
        "f_singularities": json_f64_array(d.f_singularities.iter().copied()),
        "f_infinity": json_f64(d.f_infinity),
        "f_zeros": d.f_zeros.iter().map(|z| json!({
            "a": json_f64(z.a),
            "acceptable": z.acceptable,
            "external": z.external,
        })).collect::<Vec<_>>(),
        "acceptability_interval": [
            json_f64(d.acceptability_interval.0),
            json_f64(d.acceptability_interval.1),
        ],
    })
}

fn rejection_name(reason: RejectionReason) -> &'static str {
    match reason {
        RejectionReason::EmptyData => "empty_data",
        RejectionReason::InsufficientData => "insufficient_data",
        RejectionReason::DegenerateAsymptote => "degenerate_asymptote",
        RejectionReason::ExternalZeroUnacceptable => "external_zero_unacceptable",
    }
}

fn cmd_fit(args: &FitArgs) -> Result<(), Error> {
    let ds = read_dataset(&args.input, args.gaps.as_deref())?;
    let level = if args.diagnostics {
        DiagnosticsLevel::Full
    } else {
        DiagnosticsLevel::ExternalOnly
    };
    let fit = extended::fit_extended_with(&ds, level)?;

    let (c_total, per_bin) = cash::cash_from_means(&ds, &fit.model.means(&ds))?;
    debug_assert!(
        (c_total - fit.c_min).abs() <= 1e-9 * (1.0 + c_total.abs()) || !c_total.is_finite()
    );

    let model = match &fit.model {
        ExtendedModel::Standard(sf) => json!({
            "kind": "standard",
            "a": json_f64(sf.a),
            "lambda": json_f64(sf.lambda),
        }),
        ExtendedModel::PivotA { lambda } => json!({
            "kind": "pivot_a", "a": Value::Null, "lambda": json_f64(*lambda),
        }),
        ExtendedModel::PivotB { lambda } => json!({
            "kind": "pivot_b", "a": Value::Null, "lambda": json_f64(*lambda),
        }),
        ExtendedModel::Constant { lambda } => json!({
            "kind": "constant", "a": Value::Null, "lambda": json_f64(*lambda),
        }),
        ExtendedModel::DegenerateEmpty => json!({
            "kind": "degenerate_empty", "a": Value::Null, "lambda": json_f64(0.0),
        }),
    };

    let diagnostics = match &fit.model {
        ExtendedModel::Standard(sf) => Some(&sf.diagnostics),
        _ => fit.diagnostics.as_ref(),
    };

    let mut out = json!({
        "dataset": dataset_summary(&ds),
        "model": model,
        "c_min": json_f64(fit.c_min),
        "per_bin_c": json_f64_array(per_bin.iter().copied()),
        "fallbacks": fit.alternatives.iter().map(|f| json!({
            "kind": f.kind.name(),
            "lambda": json_f64(f.lambda),
            "c": json_f64(f.c),
        })).collect::<Vec<_>>(),
        "standard_rejection": fit.standard_rejection.map(rejection_name),
        "diagnostics": diagnostics.map(diagnostics_json),
    });

    if args.oracle {
        let (a_grid, l_grid) = oracle::default_grid_specs(&ds);
        let best = oracle::grid_minimize_cash(&ds, &a_grid, &l_grid);
        out["oracle"] = json!({
            "family": match best.family {
                oracle::Family::Standard => "standard",
                oracle::Family::PivotStart => "pivot_a",
                oracle::Family::PivotEnd => "pivot_b",
                oracle::Family::Constant => "constant",
            },
            "a": best.a.map(json_f64),
            "lambda": json_f64(best.lambda),
            "c": json_f64(best.c),
            "delta_c": json_f64(best.c - fit.c_min),
            "a_pitch": json_f64(a_grid.pitch()),
        });
    }

    println!(
        "{}",
        serde_json::to_string_pretty(&out).expect("valid json")
    );
    Ok(())
}

fn parse_grid(spec: &str) -> Result<(f64, f64, usize), Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = |message: String| Error::MalformedInput { line: 0, message };
    if parts.len() != 3 {
        return Err(bad(format!("grid '{spec}' is not of the form lo:hi:steps")));
    }
    let lo: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| bad(format!("bad grid lower bound '{}'", parts[0])))?;
    let hi: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| bad(format!("bad grid upper bound '{}'", parts[1])))?;
    let steps: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| bad(format!("bad grid step count '{}'", parts[2])))?;
    if steps < 1 || hi.is_nan() || lo.is_nan() || hi <= lo {
        return Err(bad(format!("grid '{spec}' is empty or reversed")));
    }
    Ok((lo, hi, steps))
}

fn cmd_eval(args: &EvalArgs) -> Result<(), Error> {
    let ds = read_dataset(&args.input, args.gaps.as_deref())?;
    let (lo, hi, steps) = parse_grid(&args.grid)?;
    let mut stdout = String::with_capacity(64 * (steps + 2));
    stdout.push_str("a,F,g,lambda\n");
    for k in 0..=steps {
        let a = lo + (hi - lo) * k as f64 / steps as f64;
        let f = solver::f_value(&ds, a).ok().filter(|v| v.is_finite());
        let g = solver::g_value(&ds, a).ok().filter(|v| v.is_finite());
        let l = solver::lambda_of_a(&ds, a).ok().filter(|v| v.is_finite());
        let cell = |v: Option<f64>| v.map(format_f64).unwrap_or_default();
        stdout.push_str(&format!(
            "{},{},{},{}\n",
            format_f64(a),
            cell(f),
            cell(g),
            cell(l)
        ));
    }
    print!("{stdout}");
    Ok(())
}

fn parse_range(spec: &str) -> Result<(f64, f64), Error> {
    let bad = |message: String| Error::MalformedInput { line: 0, message };
    let (lo, hi) = spec
        .split_once(':')
        .ok_or_else(|| bad(format!("range '{spec}' is not of the form lo:hi")))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| bad(format!("bad range start '{lo}'")))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| bad(format!("bad range end '{hi}'")))?;
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return Err(bad(format!("range '{spec}' is empty or reversed")));
    }
    Ok((lo, hi))
}

fn sim_metadata(
    shape: CountShape,
    bins: usize,
    trials: u32,
    seed: u64,
    range: (f64, f64),
) -> Value {
    json!({
        "generator": sim::GENERATOR,
        "shape": shape.name(),
        "bins": bins,
        "trials": trials,
        "seed": seed,
        "range": [json_f64(range.0), json_f64(range.1)],
        "count_grid_is_artifact_default": true,
    })
}

fn cmd_simulate(args: &SimArgs) -> Result<(), Error> {
    let bad_input = |message: String| Error::MalformedInput { line: 0, message };

    // A config file pins one experiment point exactly.
    let (shape, bins, trials, seed, range, count_list) = if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad_input(format!("cannot read {}: {e}", path.display())))?;
        let cfg: SimConfig = serde_json::from_str(&text)
            .map_err(|e| bad_input(format!("bad config {}: {e}", path.display())))?;
        (
            cfg.shape,
            cfg.bins,
            cfg.trials,
            cfg.seed,
            cfg.range,
            vec![cfg.counts],
        )
    } else {
        let shape: CountShape = args.shape.parse().map_err(|e: String| bad_input(e))?;
        let range = parse_range(&args.range)?;
        let counts = match (&args.count_grid, args.counts) {
            (Some(grid), _) => grid.clone(),
            (None, Some(m)) => vec![m],
            (None, None) => sim::DEFAULT_COUNT_GRID.to_vec(),
        };
        (shape, args.bins, args.trials, args.seed, range, counts)
    };

    let mut points = Vec::new();
    for &m in &count_list {
        let cfg = SimConfig {
            shape,
            counts: m,
            bins,
            trials,
            seed,
            range,
        };
        let result = sim::run_acceptance_experiment(&cfg)?;
        points.push((m, result));
    }

    match args.format {
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str("M,shape,trials,fraction_acceptable,fraction_Finf_negative\n");
            for (m, r) in &points {
                out.push_str(&format!(
                    "{m},{},{trials},{},{}\n",
                    shape.name(),
                    format_f64(r.fraction_acceptable),
                    format_f64(r.fraction_f_infinity_negative),
                ));
            }
            print!("{out}");
        }
        OutputFormat::Json => {
            let out = json!({
                "metadata": sim_metadata(shape, bins, trials, seed, range),
                "points": points.iter().map(|(m, r)| json!({
                    "counts": m,
                    "fraction_acceptable": json_f64(r.fraction_acceptable),
                    "fraction_f_infinity_negative": json_f64(r.fraction_f_infinity_negative),
                    "outcomes": r.outcomes.iter().map(|o| json!({
                        "acceptable": o.acceptable,
                        "f_infinity_negative": o.f_infinity_negative,
                    })).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("valid json")
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parsing() {
        assert_eq!(parse_grid("-1:1:100").unwrap(), (-1.0, 1.0, 100));
        assert!(parse_grid("1:0:10").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("a:b:c").is_err());
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0:100").unwrap(), (0.0, 100.0));
        assert!(parse_range("5:5").is_err());
        assert!(parse_range("100").is_err());
    }
}
