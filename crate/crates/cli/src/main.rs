use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use rslab_core::arith::{load_or_build, verify_cache, write_cache, CoefficientTable};
use rslab_core::deltasym::delta_check;
use rslab_core::exppair::{search_best_pair, ExponentPair};
use rslab_core::labcli::{run_experiment, Config, EXPERIMENTS};
use rslab_core::lfunc::zeta::zeta_with_error;
use rslab_core::lfunc::{
    afe_value, moment_with_bound, voronoi_check, AfeSettings, LFunctionSpec, LfuncError, LogNormalWeight, VoronoiKernel,
};
use rslab_core::oscint::InertWeight;

#[derive(Parser)]
#[command(name = "rslab", version, about = "Rankin-Selberg numerical laboratory")]
struct Cli {
    /// Coefficient-cache directory.
    #[arg(long, env = "RSLAB_CACHE", global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Zeta,
    Sym2,
    Rs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    /// Exponent of the Rankin-Selberg error term; the CLI spelling is fixed.
    #[value(name = "paper")]
    ErrorTerm,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write `<out>/<name>.json` and `<out>/<name>.csv`.
    Run {
        experiment: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
    /// Build a tau cache file, or verify one.
    Tau {
        #[arg(long, required_unless_present = "verify")]
        max: Option<usize>,
        #[arg(long, requires = "max")]
        out: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["max", "out"])]
        verify: Option<PathBuf>,
    },
    /// Best exponent pair reachable from the bases by A/B words.
    Exppair {
        /// `k/kden,l/lden`; repeatable.
        #[arg(long, required = true)]
        base: Vec<String>,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Objective::ErrorTerm)]
        objective: Objective,
    },
    /// Detector deviation of the delta-symbol expansion.
    DeltaCheck {
        #[arg(long = "Q")]
        q: usize,
        #[arg(long)]
        nmax: i64,
    },
    /// `ζ(1/2 + it)` by Euler-Maclaurin.
    Zeta {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Critical-line value through the approximate functional equation.
    Afe {
        #[arg(long, value_enum, default_value_t = Form::Sym2)]
        form: Form,
        #[arg(long)]
        t: f64,
    },
    /// First moment `∫ V(t/T) ζ L(Sym²) X^{it} dt` with its Cauchy-Schwarz bound.
    Moment {
        #[arg(long = "T")]
        t_scale: f64,
        #[arg(long = "X")]
        x: f64,
    },
    /// Both sides of the GL(3) Voronoi identity for `e(d n / c)`.
    Voronoi {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: u64,
        #[arg(long = "N")]
        n: f64,
    },
}

fn complex(z: Complex64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im })
}

fn print(value: &impl serde::Serialize) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{}", serde_json::to_string_pretty(value)?) {
        // a closed pipe downstream is not an error of ours
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

/// Runs `f` on a table of size `start`, growing it whenever `f` reports
/// that the table is too short.
fn with_table<T>(
    cache: Option<&Path>,
    start: usize,
    mut f: impl FnMut(&CoefficientTable) -> Result<T, LfuncError>,
) -> Result<T> {
    let mut n_max = start.max(16);
    for _ in 0..8 {
        let table = load_or_build(cache, n_max)?;
        match f(&table) {
            Err(LfuncError::TableTooShort { needed, .. }) => {
                n_max = (needed as usize).max(2 * n_max);
            }
            other => return Ok(other?),
        }
    }
    bail!("coefficient table did not cover the request up to n = {n_max}")
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cache = cli.cache.as_deref();
    match cli.command {
        Command::Run { experiment, config, out } => {
            let config = match config {
                Some(path) => Config::load(&path).with_context(|| format!("reading {}", path.display()))?,
                None => Config::default(),
            };
            if !EXPERIMENTS.contains(&experiment.as_str()) {
                bail!("unknown experiment `{experiment}`; expected one of {}", EXPERIMENTS.join(", "));
            }
            let report = run_experiment(&experiment, &config, cache)?;
            let (json_path, csv_path) = report.write(&out)?;
            for v in &report.verdicts {
                let mark = if v.passed { "PASS" } else { "FAIL" };
                eprintln!("{mark} {} {}: {} ({})", v.criterion, v.check, v.measured, v.threshold);
            }
            print(&json!({
                "experiment": report.experiment,
                "passed": report.all_passed(),
                "json": json_path,
                "csv": csv_path,
            }))?;
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Tau { verify: Some(path), .. } => {
            let report = verify_cache(&path)?;
            print(&report)?;
            Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Tau { max, out, verify: None } => {
            let max = max.context("--max is required")?;
            let table = load_or_build(cache, max)?;
            let path = out.unwrap_or_else(|| PathBuf::from("tau.rslb"));
            write_cache(&path, &table)?;
            print(&json!({ "n_max": max, "out": path }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Exppair { base, depth, objective: Objective::ErrorTerm } => {
            let bases = base.iter().map(|b| ExponentPair::parse(b)).collect::<Result<Vec<_>, _>>()?;
            let best = search_best_pair(&bases, depth)?;
            print(&best.summary())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DeltaCheck { q, nmax } => {
            print(&delta_check(q, nmax)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Zeta { t } => {
            let (value, error) = zeta_with_error(Complex64::new(0.5, t))?;
            print(&json!({
                "t": t,
                "value": complex(value),
                "error_estimate": error,
                "settings": { "method": "euler-maclaurin" },
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Afe { form, t } => {
            let start = (t.abs().max(10.0) * 40.0) as usize;
            let value = with_table(cache, start, |table| {
                let spec = match form {
                    Form::Zeta => LFunctionSpec::zeta(table.n_max()),
                    Form::Sym2 => LFunctionSpec::sym2_delta(table),
                    Form::Rs => LFunctionSpec::rankin_selberg_delta(table)?,
                };
                afe_value(&spec, t)
            })?;
            print(&json!({
                "form": form.to_possible_value().map(|v| v.get_name().to_string()),
                "t": t,
                "s": complex(value.s),
                "value": complex(value.value),
                "error_estimate": value.error_estimate,
                "remainder_scale": value.remainder_scale,
                "direct_terms": value.direct_terms,
                "dual_terms": value.dual_terms,
                "settings": format!("{:?}", AfeSettings::default()),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Moment { t_scale, x } => {
            let weight = InertWeight::bump(1.5, 0.5);
            let start = (t_scale.max(10.0) * 200.0) as usize;
            let report = with_table(cache, start, |table| {
                moment_with_bound(t_scale, x, &weight, &LFunctionSpec::sym2_delta(table))
            })?;
            print(&json!({ "report": report, "settings": { "weight": "bump on [1, 2]" } }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Voronoi { c, d, n } => {
            let weight = LogNormalWeight::on_dyadic(n);
            let kernel = VoronoiKernel::holomorphic_sym2(12, Complex64::new(0.0, -1.0));
            let start = (n * 8.0) as usize + 100;
            let report = with_table(cache, start, |table| voronoi_check(c, d, &weight, table, &kernel))?;
            print(&json!({
                "report": report,
                "settings": { "weight": format!("{weight:?}"), "kernel": kernel.label },
            }))?;
            Ok(if report.residual <= 0.05 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
