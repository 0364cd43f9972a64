//! Mean value of Dirichlet polynomials: `∫₀^T |Σ a_n n^{it}|² dt` against
//! `(T + N) Σ |a_n|²`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::quad::integrate_real;

use super::report::{ExperimentReport, Fitted};
use super::{Config, LabError};

pub const CRITERION: &str = "mean-value";

#[derive(Clone, Debug, PartialEq)]
pub struct ImvParams {
    pub t: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_ratio: f64,
}

impl Default for ImvParams {
    fn default() -> Self {
        ImvParams { t: 100.0, n: 200, trials: 50, seed: 20_240_601, max_ratio: 3.0 }
    }
}

impl ImvParams {
    pub const KEYS: &'static [&'static str] = &["t", "n", "trials", "seed", "max_ratio"];

    pub fn from_config(c: &Config) -> Result<Self, LabError> {
        let d = Self::default();
        Ok(ImvParams {
            t: c.get_or("t", d.t)?,
            n: c.count_or("n", d.n)?,
            trials: c.count_or("trials", d.trials)?,
            seed: c.get_or("seed", d.seed)?,
            max_ratio: c.get_or("max_ratio", d.max_ratio)?,
        })
    }
}

/// Unit-normal coefficients `a_1..a_N` of trial `trial`; each trial reads its
/// own ChaCha stream, so trials are independent of evaluation order.
pub fn trial_coefficients(seed: u64, trial: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// `∫₀^T |Σ_{n≤N} a_n n^{it}|² dt` by adaptive quadrature; `a[k]` is `a_{k+1}`.
pub fn mean_square_quadrature(a: &[f64], t: f64) -> Result<f64, LabError> {
    let logs: Vec<f64> = (1..=a.len()).map(|n| (n as f64).ln()).collect();
    let norm: f64 = a.iter().map(|x| x * x).sum();
    let f = |s: f64| {
        let z: Complex64 = a.iter().zip(&logs).map(|(&c, &l)| Complex64::from_polar(c, s * l)).sum();
        z.norm_sqr()
    };
    let rate = logs.last().copied().unwrap_or(0.0).max(1.0);
    let panels = ((t * rate / std::f64::consts::PI).ceil() as usize).max(4);
    Ok(integrate_real(&f, 0.0, t, panels, 1e-11 * t * norm.max(1e-300))?)
}

/// Closed form `T Σ a_n² + Σ_{m≠n} a_m a_n sin(T log(m/n)) / log(m/n)`.
pub fn mean_square_exact(a: &[f64], t: f64) -> f64 {
    let mut total: f64 = t * a.iter().map(|x| x * x).sum::<f64>();
    for m in 1..=a.len() {
        for n in 1..m {
            let l = (m as f64 / n as f64).ln();
            total += 2.0 * a[m - 1] * a[n - 1] * (t * l).sin() / l;
        }
    }
    total
}

pub fn run_imv(p: &ImvParams) -> Result<ExperimentReport, LabError> {
    if p.trials < 20 {
        return Err(LabError::Config(format!("imv needs trials >= 20, got {}", p.trials)));
    }
    if p.n == 0 || p.t <= 0.0 {
        return Err(LabError::Config("imv needs n >= 1 and t > 0".into()));
    }
    let mut r = ExperimentReport::new("imv");
    r.seed = Some(p.seed);
    r.param("t", p.t).param("n", p.n as f64).param("trials", p.trials as f64);
    let mut worst = 0.0f64;
    let mut sum = 0.0;
    for k in 0..p.trials {
        let a = trial_coefficients(p.seed, k as u64, p.n);
        let integral = mean_square_quadrature(&a, p.t)?;
        let norm: f64 = a.iter().map(|x| x * x).sum();
        let ratio = integral / ((p.t + p.n as f64) * norm);
        worst = worst.max(ratio);
        sum += ratio;
        r.sample("ratio", k as f64, ratio);
    }
    r.fit("max_ratio", Fitted::constant(worst));
    r.fit("mean_ratio", Fitted::constant(sum / p.trials as f64));
    r.verdict(CRITERION, "imv_ratio", worst <= p.max_ratio, worst, format!("<= {}", p.max_ratio));
    Ok(r)
}
