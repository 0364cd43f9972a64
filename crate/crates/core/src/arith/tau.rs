//! Exact Ramanujan tau values and the coefficient arrays derived from them.
//!
//! `Δ(z) = q ∏ (1 - q^k)^24`. The product is assembled from the sparse
//! Jacobi series of `∏ (1 - q^k)^3` by three truncated squarings, each done
//! with number-theoretic transforms modulo a small set of primes; the final
//! residues are lifted to signed 128-bit integers by CRT.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::ntt::{ceil_log2, Crt, NttPlan, NttPrime, DEFAULT_PRIMES};
use super::sieve::Sieve;
use super::ArithError;

/// Weight of the discriminant form.
pub const WEIGHT: u32 = 12;

/// `τ(n)` and its normalised relatives for `1 <= n <= n_max`.
///
/// All arrays are indexed directly by `n`; slot 0 is unused.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    n_max: usize,
    tau: Vec<i128>,
    lambda: Vec<f64>,
    rs: Vec<f64>,
    sym2: Vec<f64>,
    sieve: Sieve,
}

impl CoefficientTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tau(&self, n: usize) -> i128 {
        assert!(n >= 1 && n <= self.n_max, "n = {n} outside 1..={}", self.n_max);
        self.tau[n]
    }

    /// `λ(n) = τ(n) / n^{11/2}`.
    pub fn lambda(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.n_max, "n = {n} outside 1..={}", self.n_max);
        self.lambda[n]
    }

    /// Rankin–Selberg coefficient `Σ_{ℓ²m = n} λ(m)²`.
    pub fn rs(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.n_max, "n = {n} outside 1..={}", self.n_max);
        self.rs[n]
    }

    /// Symmetric-square coefficient `A(1, n)`.
    pub fn sym2(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.n_max, "n = {n} outside 1..={}", self.n_max);
        self.sym2[n]
    }

    pub fn tau_values(&self) -> &[i128] {
        &self.tau
    }
    pub fn lambda_values(&self) -> &[f64] {
        &self.lambda
    }
    pub fn rs_values(&self) -> &[f64] {
        &self.rs
    }
    pub fn sym2_values(&self) -> &[f64] {
        &self.sym2
    }
    pub fn sieve(&self) -> &Sieve {
        &self.sieve
    }

    /// Rebuild the derived arrays from a list of exact tau values (`tau[0]` unused).
    pub fn from_tau(tau: Vec<i128>) -> Result<Self, ArithError> {
        let n_max = tau.len().saturating_sub(1);
        if n_max == 0 {
            return Err(ArithError::InvalidArgument("empty tau table".into()));
        }
        if tau[1] != 1 {
            return Err(ArithError::Data(format!("tau(1) = {} (expected 1)", tau[1])));
        }
        let sieve = Sieve::new(n_max);
        let lambda: Vec<f64> = tau
            .iter()
            .enumerate()
            .map(|(n, &t)| if n == 0 { 0.0 } else { normalise(t, n) })
            .collect();
        let rs = super::coeffs::rankin_selberg_from_lambda(&lambda);
        let sym2 = super::coeffs::sym2_from_satake(&lambda, &sieve)?;
        Ok(CoefficientTable { n_max, tau, lambda, rs, sym2, sieve })
    }
}

/// `τ(n) / n^{11/2}` with the power split to keep full double precision.
fn normalise(t: i128, n: usize) -> f64 {
    let nf = n as f64;
    (t as f64) / (nf.powi(5) * nf.sqrt())
}

/// Exact `τ(n)` for `n <= n_max` with the default three-prime residue system.
pub fn build_tau_table(n_max: usize) -> Result<CoefficientTable, ArithError> {
    build_tau_table_with(n_max, &DEFAULT_PRIMES)
}

/// As [`build_tau_table`], with an explicit residue system.
pub fn build_tau_table_with(n_max: usize, primes: &[NttPrime]) -> Result<CoefficientTable, ArithError> {
    let tau = tau_values(n_max, primes)?;
    CoefficientTable::from_tau(tau)
}

/// Largest value of `d(n) · n^{11/2}` over `n <= n_max` (as a float).
fn deligne_envelope(n_max: usize, sieve: &Sieve) -> f64 {
    let d = sieve.divisor_count_table();
    (1..=n_max)
        .map(|n| d[n] as f64 * (n as f64).powf(5.5))
        .fold(0.0, f64::max)
}

/// Exact `τ(1..=n_max)`, slot 0 set to zero.
pub fn tau_values(n_max: usize, primes: &[NttPrime]) -> Result<Vec<i128>, ArithError> {
    if n_max == 0 {
        return Err(ArithError::InvalidArgument("n_max must be at least 1".into()));
    }
    if primes.is_empty() {
        return Err(ArithError::Capacity { n_max, needed_bits: 0.0, available_bits: 0.0 });
    }
    let sieve = Sieve::new(n_max);
    let envelope = deligne_envelope(n_max, &sieve);
    let crt = Crt::new(&primes.iter().map(|p| p.modulus).collect::<Vec<_>>());
    // centred residues must represent ±envelope, and the result must fit i128
    let half_product = (crt.product() / BigInt::from(2)).to_f64().unwrap_or(f64::INFINITY);
    let available = half_product.min(2f64.powi(127));
    let needed_bits = (envelope * 1.01).log2();
    if envelope * 1.01 >= available {
        return Err(ArithError::Capacity { n_max, needed_bits, available_bits: available.log2() });
    }

    // coefficient j of ∏(1-q^k)^24 is τ(j+1)
    let len = n_max;
    let log_len = ceil_log2(2 * len - 1);
    for p in primes {
        if log_len > p.two_adicity {
            return Err(ArithError::Capacity { n_max, needed_bits, available_bits: available.log2() });
        }
    }
    let eta3 = jacobi_eta_cubed(len);
    let mut residues: Vec<Vec<u64>> = Vec::with_capacity(primes.len());
    for &prime in primes {
        let plan = NttPlan::new(prime, log_len);
        let mont = plan.montgomery();
        let modulus = prime.modulus as i64;
        let mut series: Vec<u64> = eta3
            .iter()
            .map(|&c| mont.to_mont(c.rem_euclid(modulus) as u64))
            .collect();
        for _ in 0..3 {
            series = plan.square_truncated(&series, len);
        }
        residues.push(series.into_iter().map(|x| mont.from_mont(x)).collect());
    }
    let mut tau = vec![0i128; n_max + 1];
    let mut scratch = vec![0u64; primes.len()];
    for j in 0..len {
        for (slot, r) in scratch.iter_mut().zip(&residues) {
            *slot = r[j];
        }
        tau[j + 1] = crt.reconstruct(&scratch).ok_or(ArithError::Capacity {
            n_max,
            needed_bits,
            available_bits: available.log2(),
        })?;
    }
    Ok(tau)
}

/// `∏ (1 - q^k)^3 = Σ_{m >= 0} (-1)^m (2m+1) q^{m(m+1)/2}`, truncated to `len` terms.
pub fn jacobi_eta_cubed(len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    let mut m = 0usize;
    loop {
        let e = m * (m + 1) / 2;
        if e >= len {
            break;
        }
        let c = 2 * m as i64 + 1;
        out[e] = if m % 2 == 0 { c } else { -c };
        m += 1;
    }
    out
}
