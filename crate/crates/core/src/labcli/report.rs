//! Experiment reports and their JSON and CSV forms.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::fit::{fit_loglog, LineFit};

use super::LabError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One measured value in a named series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub series: String,
    pub x: f64,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitKind {
    Slope,
    Constant,
}

/// A fitted quantity; slopes always carry the RMS residual of their fit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fitted {
    pub kind: FitKind,
    pub value: f64,
    pub residual: Option<f64>,
}

impl Fitted {
    pub fn slope(fit: &LineFit) -> Self {
        Fitted { kind: FitKind::Slope, value: fit.slope, residual: Some(fit.residual) }
    }

    pub fn constant(value: f64) -> Self {
        Fitted { kind: FitKind::Constant, value, residual: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// Acceptance criterion this check belongs to.
    pub criterion: String,
    pub check: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: BTreeMap<String, f64>,
    pub samples: Vec<Sample>,
    pub fitted: BTreeMap<String, Fitted>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
    pub seed: Option<u64>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub version: String,
}

impl ExperimentReport {
    pub fn new(experiment: &str) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        ExperimentReport {
            experiment: experiment.to_string(),
            params: BTreeMap::new(),
            samples: Vec::new(),
            fitted: BTreeMap::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
            seed: None,
            timestamp,
            version: TOOL_VERSION.to_string(),
        }
    }

    pub fn param(&mut self, key: &str, value: f64) -> &mut Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn sample(&mut self, series: &str, x: f64, value: f64) {
        self.samples.push(Sample { series: series.to_string(), x, value });
    }

    pub fn fit(&mut self, key: &str, fitted: Fitted) {
        self.fitted.insert(key.to_string(), fitted);
    }

    pub fn verdict(&mut self, criterion: &str, check: &str, passed: bool, measured: f64, threshold: impl Into<String>) {
        self.verdicts.push(Verdict {
            criterion: criterion.to_string(),
            check: check.to_string(),
            passed,
            measured,
            threshold: threshold.into(),
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// True iff there is at least one verdict and all pass.
    pub fn all_passed(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict_for(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    pub fn series(&self, name: &str) -> Vec<(f64, f64)> {
        self.samples.iter().filter(|s| s.series == name).map(|s| (s.x, s.value)).collect()
    }

    /// Every slope carries a residual and every verdict names a criterion.
    pub fn is_well_formed(&self) -> bool {
        self.fitted.values().all(|f| f.kind != FitKind::Slope || f.residual.is_some())
            && self.verdicts.iter().all(|v| !v.criterion.is_empty())
    }

    pub fn to_json(&self) -> Result<String, LabError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, LabError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Samples only: `experiment, <param names>, x, value`, where the
    /// experiment column is `name.series`.
    pub fn to_csv(&self) -> Result<String, LabError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["experiment".to_string()];
        header.extend(self.params.keys().cloned());
        header.extend(["x".to_string(), "value".to_string()]);
        w.write_record(&header)?;
        let params: Vec<String> = self.params.values().map(|v| v.to_string()).collect();
        for s in &self.samples {
            let mut row = vec![format!("{}.{}", self.experiment, s.series)];
            row.extend(params.iter().cloned());
            row.extend([s.x.to_string(), s.value.to_string()]);
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| LabError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Writes `<dir>/<experiment>.json` and `<dir>/<experiment>.csv`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf), LabError> {
        std::fs::create_dir_all(dir)?;
        let json = dir.join(format!("{}.json", self.experiment));
        let csv = dir.join(format!("{}.csv", self.experiment));
        std::fs::write(&json, self.to_json()?)?;
        std::fs::write(&csv, self.to_csv()?)?;
        Ok((json, csv))
    }
}

/// Power-law constant refitted on the upper half of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleStability {
    pub full: f64,
    pub upper: f64,
    /// `max(full, upper) / min(full, upper)`.
    pub ratio: f64,
}

impl ScaleStability {
    pub fn from_constants(full: f64, upper: f64) -> Self {
        let ratio = full.max(upper) / full.min(upper);
        ScaleStability { full, upper, ratio: if ratio.is_nan() { f64::INFINITY } else { ratio } }
    }

    /// Amplitude of a log-log fit, normalised at the geometric mean of the
    /// full grid so that both fits are compared at the same scale.
    pub fn power_law(xs: &[f64], ys: &[f64]) -> Self {
        let x_ref = (xs.iter().map(|x| x.ln()).sum::<f64>() / xs.len() as f64).exp();
        let amp = |xs: &[f64], ys: &[f64]| {
            let f = fit_loglog(xs, ys);
            (f.intercept + f.slope * x_ref.ln()).exp()
        };
        let h = xs.len() / 2;
        Self::from_constants(amp(xs, ys), amp(&xs[h..], &ys[h..]))
    }

    /// Supremum of the ratios on the full grid against the upper half.
    pub fn sup(ratios: &[f64]) -> Self {
        let h = ratios.len() / 2;
        let max = |r: &[f64]| r.iter().cloned().fold(0.0f64, f64::max);
        Self::from_constants(max(ratios), max(&ratios[h..]))
    }

    pub fn stable(&self) -> bool {
        self.ratio <= 2.0
    }
}
