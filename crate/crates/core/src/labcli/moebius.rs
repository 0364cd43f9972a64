//! Recovering `λ(n)²` and `S₂(X)` from the Rankin–Selberg coefficients by
//! Möbius inversion over square divisors.

use crate::arith::CoefficientTable;
use crate::fit::geometric_grid;

use super::delta2::second_moment_prefix;
use super::report::{ExperimentReport, Fitted};
use super::{Config, LabError};

pub const CRITERION: &str = "moebius-descent";

#[derive(Clone, Debug, PartialEq)]
pub struct MoebiusParams {
    pub x_max: usize,
    pub samples: usize,
    pub entry_tol: f64,
    pub sum_tol: f64,
}

impl Default for MoebiusParams {
    fn default() -> Self {
        MoebiusParams { x_max: 100_000, samples: 12, entry_tol: 1e-9, sum_tol: 1e-6 }
    }
}

impl MoebiusParams {
    pub const KEYS: &'static [&'static str] = &["x_max", "samples", "entry_tol", "sum_tol"];

    pub fn from_config(c: &Config) -> Result<Self, LabError> {
        let d = Self::default();
        Ok(MoebiusParams {
            x_max: c.count_or("x_max", d.x_max)?,
            samples: c.count_or("samples", d.samples)?,
            entry_tol: c.get_or("entry_tol", d.entry_tol)?,
            sum_tol: c.get_or("sum_tol", d.sum_tol)?,
        })
    }
}

/// `Σ_{ℓ²m = n} μ(ℓ) rs(m)` for every `n <= x_max`; slot 0 unused.
pub fn inverted_squares(table: &CoefficientTable, x_max: usize) -> Vec<f64> {
    let mu = table.sieve().mobius_table();
    let mut out = vec![0.0; x_max + 1];
    let mut l = 1;
    while l * l <= x_max {
        if mu[l] != 0 {
            let sign = mu[l] as f64;
            let sq = l * l;
            for m in 1..=x_max / sq {
                out[sq * m] += sign * table.rs(m);
            }
        }
        l += 1;
    }
    out
}

/// `Σ_{ℓ ≤ √X} μ(ℓ) 𝒜(X/ℓ²)` from the prefix sums `rs_prefix` of `rs`.
pub fn block_reconstruction(table: &CoefficientTable, rs_prefix: &[f64], x: usize) -> f64 {
    let mu = table.sieve().mobius_table();
    let mut total = 0.0;
    let mut l = 1;
    while l * l <= x {
        total += mu[l] as f64 * rs_prefix[x / (l * l)];
        l += 1;
    }
    total
}

pub fn run_moebius_descent(table: &CoefficientTable, p: &MoebiusParams) -> Result<ExperimentReport, LabError> {
    if table.n_max() < p.x_max {
        return Err(LabError::TableTooShort { needed: p.x_max, available: table.n_max() });
    }
    if p.x_max < 2 || p.samples < 2 {
        return Err(LabError::Config("moebius needs x_max >= 2 and samples >= 2".into()));
    }
    let mut r = ExperimentReport::new("moebius");
    r.param("x_max", p.x_max as f64).param("samples", p.samples as f64);

    let inv = inverted_squares(table, p.x_max);
    let mut worst = 0.0f64;
    let mut worst_n = 1;
    for (n, v) in inv.iter().enumerate().skip(1) {
        let l2 = table.lambda(n).powi(2);
        let e = (v - l2).abs() / l2.max(1.0);
        if e > worst {
            worst = e;
            worst_n = n;
        }
    }
    r.fit("entry_max_error", Fitted::constant(worst));
    r.fit("entry_worst_n", Fitted::constant(worst_n as f64));
    r.verdict(CRITERION, "entrywise_inversion", worst <= p.entry_tol, worst, format!("<= {:e}", p.entry_tol));

    let mut rs_prefix = vec![0.0; p.x_max + 1];
    for n in 1..=p.x_max {
        rs_prefix[n] = rs_prefix[n - 1] + table.rs(n);
    }
    let s2 = second_moment_prefix(table, p.x_max);
    let mut grid: Vec<usize> =
        geometric_grid(1.0, p.x_max as f64, p.samples).iter().map(|x| x.round() as usize).collect();
    grid.dedup();
    let mut worst_sum = 0.0f64;
    for &x in &grid {
        let rebuilt = block_reconstruction(table, &rs_prefix, x);
        let rel = (rebuilt - s2[x]).abs() / s2[x].abs();
        worst_sum = worst_sum.max(rel);
        r.sample("s2_direct", x as f64, s2[x]);
        r.sample("s2_blocks", x as f64, rebuilt);
    }
    r.fit("block_max_relative_error", Fitted::constant(worst_sum));
    r.verdict(CRITERION, "block_reconstruction", worst_sum <= p.sum_tol, worst_sum, format!("<= {:e}", p.sum_tol));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_tau_table;

    #[test]
    fn first_entries() {
        let table = build_tau_table(100).unwrap();
        let inv = inverted_squares(&table, 100);
        // n = 1: only ℓ = 1
        assert_eq!(inv[1], table.rs(1));
        assert_eq!(inv[1], 1.0);
        // n = 4: ℓ ∈ {1, 2}, μ(2) = −1
        assert!((inv[4] - (table.rs(4) - table.rs(1))).abs() < 1e-15);
        assert!((inv[4] - table.lambda(4).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn experiment_passes_at_moderate_size() {
        let table = build_tau_table(20_000).unwrap();
        let p = MoebiusParams { x_max: 20_000, ..Default::default() };
        let r = run_moebius_descent(&table, &p).unwrap();
        assert!(r.all_passed(), "{:?}", r.verdicts);
        assert!(r.fitted["block_max_relative_error"].value < 1e-12);
    }
}
