//! Experiment driver: configuration, smooth windows, the five experiments
//! and their reports.

pub mod config;
pub mod delta2;
pub mod dual;
pub mod imv;
pub mod moebius;
pub mod report;
pub mod vdc;
pub mod window;

use std::path::Path;

use crate::arith::{load_or_build, ArithError};
use crate::lfunc::LfuncError;
use crate::quad::QuadError;

pub use config::Config;
pub use delta2::{run_delta2, Delta2Params};
pub use dual::{run_dual_sum, DualSumParams, DualWeights};
pub use imv::{run_imv, ImvParams};
pub use moebius::{run_moebius_descent, MoebiusParams};
pub use report::{ExperimentReport, Fitted, ScaleStability, Verdict};
pub use vdc::{run_vdc, VdcParams};
pub use window::{SmoothWindow, WindowKind, DEFAULT_DELTA};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("config: {0}")]
    Config(String),
    #[error("unknown experiment `{0}` (expected one of: {list})", list = EXPERIMENTS.join(", "))]
    UnknownExperiment(String),
    #[error("coefficient table too short: need n <= {needed}, have n <= {available}")]
    TableTooShort { needed: usize, available: usize },
    #[error("range violation: {0}")]
    Range(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Lfunc(#[from] LfuncError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub const EXPERIMENTS: &[&str] = &["delta2", "dual-sum", "vdc", "imv", "moebius"];

fn check_keys(config: &Config, known: &[&str]) -> Result<(), LabError> {
    let mut known = known.to_vec();
    known.push("n_max");
    match config.unknown_keys(&known).as_slice() {
        [] => Ok(()),
        extra => Err(LabError::Config(format!("unknown keys: {}", extra.join(", ")))),
    }
}

/// Runs `name` with `config`, reading or filling the coefficient cache in
/// `cache` when given. `n_max` in the config enlarges the table.
pub fn run_experiment(name: &str, config: &Config, cache: Option<&Path>) -> Result<ExperimentReport, LabError> {
    let table_for = |needed: usize| -> Result<_, LabError> {
        let n_max = config.count_or("n_max", needed)?.max(needed);
        Ok(load_or_build(cache, n_max)?)
    };
    match name {
        "delta2" => {
            check_keys(config, delta2::Delta2Params::KEYS)?;
            let p = Delta2Params::from_config(config)?;
            run_delta2(&table_for(p.required_table())?, &p)
        }
        "dual-sum" => {
            check_keys(config, dual::DualSumParams::KEYS)?;
            let p = DualSumParams::from_config(config)?;
            run_dual_sum(&table_for(p.required_table())?, &p)
        }
        "vdc" => {
            check_keys(config, vdc::VdcParams::KEYS)?;
            run_vdc(&VdcParams::from_config(config)?)
        }
        "imv" => {
            check_keys(config, imv::ImvParams::KEYS)?;
            run_imv(&ImvParams::from_config(config)?)
        }
        "moebius" => {
            check_keys(config, moebius::MoebiusParams::KEYS)?;
            let p = MoebiusParams::from_config(config)?;
            run_moebius_descent(&table_for(p.x_max)?, &p)
        }
        other => Err(LabError::UnknownExperiment(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch_and_key_checks() {
        assert!(matches!(run_experiment("nope", &Config::default(), None), Err(LabError::UnknownExperiment(_))));
        let bad = Config::parse("x_maxx = 10\n").unwrap();
        assert!(matches!(run_experiment("moebius", &bad, None), Err(LabError::Config(_))));
        let ok = Config::parse("x_max = 2000\nsamples = 5\n").unwrap();
        let r = run_experiment("moebius", &ok, None).unwrap();
        assert!(r.all_passed());
    }
}
