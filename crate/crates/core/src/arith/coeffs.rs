//! Rankin–Selberg, symmetric-square and GL(3) coefficients built from `λ(n)`,
//! together with the structural checks the tables must pass.

use super::sieve::Sieve;
use super::tau::CoefficientTable;
use super::ArithError;

/// `rs[n] = Σ_{ℓ² m = n} λ(m)²`.
pub fn rankin_selberg_from_lambda(lambda: &[f64]) -> Vec<f64> {
    let n_max = lambda.len().saturating_sub(1);
    let mut rs = vec![0.0; n_max + 1];
    let mut l = 1usize;
    while l * l <= n_max {
        let step = l * l;
        let mut m = 1usize;
        while m * step <= n_max {
            rs[m * step] += lambda[m] * lambda[m];
            m += 1;
        }
        l += 1;
    }
    rs
}

/// `A(1, p^k)` for `k = 0..=k_max` from the Satake angle of `λ(p) = 2cos θ`:
/// complete homogeneous polynomials in `(e^{2iθ}, 1, e^{-2iθ})`.
pub fn sym2_prime_powers(lambda_p: f64, k_max: usize) -> Result<Vec<f64>, ArithError> {
    if lambda_p.abs() > 2.0 + 1e-12 {
        return Err(ArithError::Data(format!("|λ(p)| = {} exceeds 2", lambda_p.abs())));
    }
    let theta = (lambda_p / 2.0).clamp(-1.0, 1.0).acos();
    // e1 = e2 = 1 + 2 cos 2θ, e3 = 1
    let e1 = 1.0 + 2.0 * (2.0 * theta).cos();
    let mut h = Vec::with_capacity(k_max + 1);
    h.push(1.0);
    for k in 1..=k_max {
        let h1 = h[k - 1];
        let h2 = if k >= 2 { h[k - 2] } else { 0.0 };
        let h3 = if k >= 3 { h[k - 3] } else { 0.0 };
        h.push(e1 * h1 - e1 * h2 + h3);
    }
    Ok(h)
}

/// `A(1, n)` by Satake parameters at each prime, extended multiplicatively.
pub fn sym2_from_satake(lambda: &[f64], sieve: &Sieve) -> Result<Vec<f64>, ArithError> {
    let n_max = lambda.len().saturating_sub(1);
    let mut a = vec![0.0; n_max + 1];
    if n_max == 0 {
        return Ok(a);
    }
    a[1] = 1.0;
    for &p in sieve.primes() {
        let p = p as usize;
        if p > n_max {
            break;
        }
        let mut k_max = 0;
        let mut pk = 1usize;
        while pk <= n_max / p {
            pk *= p;
            k_max += 1;
        }
        let h = sym2_prime_powers(lambda[p], k_max)?;
        let mut pk = 1usize;
        for hk in h.iter().skip(1) {
            pk *= p;
            a[pk] = *hk;
        }
    }
    for n in 2..=n_max {
        let (p, k, m) = sieve.split_prime_power(n);
        if m > 1 {
            a[n] = a[m] * a[p.pow(k)];
        }
    }
    Ok(a)
}

/// Independent route: `L(s, φ×φ) = ζ(s) L(s, Sym²φ)`, so `A(1, ·) = μ * rs`.
pub fn sym2_from_dirichlet(rs: &[f64], sieve: &Sieve) -> Vec<f64> {
    let n_max = rs.len().saturating_sub(1);
    let mu = sieve.mobius_table();
    let mut a = vec![0.0; n_max + 1];
    for d in 1..=n_max {
        let m = mu[d];
        if m == 0 {
            continue;
        }
        let m = m as f64;
        let mut k = 1usize;
        while k * d <= n_max {
            a[k * d] += m * rs[k];
            k += 1;
        }
    }
    a
}

/// `A(m, n) = Σ_{d | (m,n)} μ(d) A(m/d, 1) A(1, n/d)` with `A(m,1) = A(1,m)`.
pub fn gl3_coeff(table: &CoefficientTable, m: usize, n: usize) -> Result<f64, ArithError> {
    if m == 0 || n == 0 || m > table.n_max() || n > table.n_max() {
        return Err(ArithError::OutOfRange { m, n, n_max: table.n_max() });
    }
    let g = super::sieve::gcd(m as i64, n as i64) as usize;
    let sieve = table.sieve();
    let mut total = 0.0;
    for d in sieve.divisors(g) {
        let mu = sieve.mobius(d);
        if mu != 0 {
            total += mu as f64 * table.sym2(m / d) * table.sym2(n / d);
        }
    }
    Ok(total)
}

/// A single GL(3) coefficient tagged with its indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GL3Coefficient {
    pub m: usize,
    pub n: usize,
    pub value: f64,
}

impl GL3Coefficient {
    pub fn compute(table: &CoefficientTable, m: usize, n: usize) -> Result<Self, ArithError> {
        Ok(GL3Coefficient { m, n, value: gl3_coeff(table, m, n)? })
    }
}

/// Outcome of the exhaustive structural checks on a coefficient table.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct TableCheck {
    pub n_max: usize,
    pub hecke_relations_checked: usize,
    pub multiplicativity_checked: usize,
    pub max_deligne_ratio: f64,
    pub min_rs: f64,
    pub max_sym2_route_gap: f64,
    pub max_sym2_prime_gap: f64,
}

impl CoefficientTable {
    /// `τ(p^{k+1}) = τ(p)τ(p^k) − p^{11}τ(p^{k−1})` for every prime power in range.
    pub fn verify_hecke_recursion(&self) -> Result<usize, ArithError> {
        let n_max = self.n_max();
        let mut checked = 0;
        for &p in self.sieve().primes() {
            let p = p as usize;
            // no p² in range; p^11 would also overflow i128 beyond p ≈ 2900
            if p > n_max / p {
                break;
            }
            let p11 = (p as i128).pow(11);
            let tp = self.tau(p);
            let (mut prev, mut cur) = (1i128, tp);
            let mut pk = p;
            while pk <= n_max / p {
                let next_n = pk * p;
                let expected = tp
                    .checked_mul(cur)
                    .and_then(|a| p11.checked_mul(prev).and_then(|b| a.checked_sub(b)))
                    .ok_or_else(|| ArithError::Data(format!("overflow in Hecke relation at {next_n}")))?;
                let actual = self.tau(next_n);
                if expected != actual {
                    return Err(ArithError::Data(format!(
                        "Hecke recursion fails at n = {next_n}: {actual} != {expected}"
                    )));
                }
                checked += 1;
                (prev, cur) = (cur, actual);
                pk = next_n;
            }
        }
        Ok(checked)
    }

    /// `τ(n) = τ(p^k) τ(n / p^k)` for every composite `n` that is not a prime power.
    ///
    /// Together with the Hecke recursion this pins down multiplicativity on
    /// all coprime pairs with product in range.
    pub fn verify_multiplicativity(&self) -> Result<usize, ArithError> {
        let mut checked = 0;
        for n in 2..=self.n_max() {
            let (p, k, m) = self.sieve().split_prime_power(n);
            if m == 1 {
                continue;
            }
            let expected = self
                .tau(p.pow(k))
                .checked_mul(self.tau(m))
                .ok_or_else(|| ArithError::Data(format!("overflow at {n}")))?;
            if expected != self.tau(n) {
                return Err(ArithError::Data(format!("τ({n}) != τ({})·τ({m})", p.pow(k))));
            }
            checked += 1;
        }
        Ok(checked)
    }

    /// Largest `|λ(n)| / d(n)`; Deligne's bound says at most 1.
    pub fn max_deligne_ratio(&self) -> f64 {
        let d = self.sieve().divisor_count_table();
        (1..=self.n_max())
            .map(|n| self.lambda(n).abs() / d[n] as f64)
            .fold(0.0, f64::max)
    }

    /// Largest entrywise gap between the Satake and Dirichlet-series `A(1,n)`.
    pub fn sym2_route_gap(&self) -> f64 {
        let alt = sym2_from_dirichlet(self.rs_values(), self.sieve());
        (1..=self.n_max())
            .map(|n| (alt[n] - self.sym2(n)).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `|A(1,p) − (λ(p)² − 1)|` over primes.
    pub fn sym2_prime_gap(&self) -> f64 {
        self.sieve()
            .primes()
            .iter()
            .map(|&p| p as usize)
            .take_while(|&p| p <= self.n_max())
            .map(|p| (self.sym2(p) - (self.lambda(p).powi(2) - 1.0)).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_rs(&self) -> f64 {
        self.rs_values()[1..].iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Σ_{m² n <= x} |A(m,n)|²`.
    pub fn gl3_mean_square(&self, x: usize) -> Result<f64, ArithError> {
        let x = x.min(self.n_max());
        let mut total = 0.0;
        let mut m = 1usize;
        while m * m <= x {
            for n in 1..=x / (m * m) {
                total += gl3_coeff(self, m, n)?.powi(2);
            }
            m += 1;
        }
        Ok(total)
    }

    /// Run all exact and floating checks, failing on the first violation.
    pub fn check_all(&self) -> Result<TableCheck, ArithError> {
        let hecke = self.verify_hecke_recursion()?;
        let mult = self.verify_multiplicativity()?;
        let check = TableCheck {
            n_max: self.n_max(),
            hecke_relations_checked: hecke,
            multiplicativity_checked: mult,
            max_deligne_ratio: self.max_deligne_ratio(),
            min_rs: self.min_rs(),
            max_sym2_route_gap: self.sym2_route_gap(),
            max_sym2_prime_gap: self.sym2_prime_gap(),
        };
        if check.max_deligne_ratio > 1.0 + 1e-9 {
            return Err(ArithError::Data(format!("Deligne bound violated: {}", check.max_deligne_ratio)));
        }
        if check.min_rs < 0.0 {
            return Err(ArithError::Data("negative Rankin–Selberg coefficient".into()));
        }
        Ok(check)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tau::build_tau_table;
    use super::*;

    fn table() -> CoefficientTable {
        build_tau_table(2000).unwrap()
    }

    #[test]
    fn rs_small_cases() {
        let t = table();
        assert_eq!(t.rs(1), 1.0);
        // ℓ²m = 4: (ℓ,m) = (1,4), (2,1)
        let expect = (t.tau(4) as f64 / 4f64.powf(5.5)).powi(2) + 1.0;
        assert!((t.rs(4) - expect).abs() < 1e-14);
        for p in [2usize, 3, 5, 7, 1999] {
            assert!((t.rs(p) - t.lambda(p).powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn sym2_small_cases_and_routes() {
        let t = table();
        assert_eq!(t.sym2(1), 1.0);
        for p in [2usize, 3, 5, 7, 11, 1999] {
            assert!((t.sym2(p) - (t.lambda(p).powi(2) - 1.0)).abs() < 1e-12);
        }
        let alt = sym2_from_dirichlet(t.rs_values(), t.sieve());
        assert!((alt[4] - t.sym2(4)).abs() < 1e-9);
        assert!(t.sym2_route_gap() < 1e-9);
    }

    #[test]
    fn gl3_coefficients() {
        let t = table();
        assert_eq!(gl3_coeff(&t, 1, 10).unwrap(), t.sym2(10));
        let v = gl3_coeff(&t, 3, 10).unwrap();
        assert!((v - t.sym2(3) * t.sym2(10)).abs() < 1e-12);
        // (p,p): Euler factor of L(s, Sym²) at p is degree 3 with e1 = e2
        for p in [2usize, 3, 5, 7] {
            let v = gl3_coeff(&t, p, p).unwrap();
            assert!((v - (t.sym2(p) * t.sym2(p) - 1.0)).abs() < 1e-12);
            // Schur polynomial s_(2,1) = e1 e2 − e3 with e2 = h1² − h2, e3 = 1
            let (h1, h2) = (t.sym2(p), t.sym2(p * p));
            assert!((v - (h1 * (h1 * h1 - h2) - 1.0)).abs() < 1e-9);
        }
        assert!(matches!(gl3_coeff(&t, 0, 1), Err(ArithError::OutOfRange { .. })));
        assert!(matches!(gl3_coeff(&t, 5000, 1), Err(ArithError::OutOfRange { .. })));
        // symmetry
        assert_eq!(gl3_coeff(&t, 4, 6).unwrap(), gl3_coeff(&t, 6, 4).unwrap());
    }

    #[test]
    fn structural_checks_pass() {
        let t = table();
        let c = t.check_all().unwrap();
        assert!(c.hecke_relations_checked > 0);
        assert!(c.max_deligne_ratio <= 1.0);
        assert!(c.min_rs >= 0.0);
        // Ramanujan on average: Σ_{m²n<=N}|A(m,n)|² ≤ C N^{1.01}, C measured
        let c1 = t.gl3_mean_square(500).unwrap() / 500f64.powf(1.01);
        let c2 = t.gl3_mean_square(2000).unwrap() / 2000f64.powf(1.01);
        assert!(c2 < 2.0 * c1, "mean-square constant drifts: {c1} -> {c2}");
    }

    #[test]
    fn hecke_check_survives_large_primes() {
        // primes near 3000 have p^11 at the edge of i128
        let t = build_tau_table(3000).unwrap();
        assert!(t.verify_hecke_recursion().unwrap() > 0);
    }

    #[test]
    fn satake_rejects_out_of_range_eigenvalue() {
        assert!(matches!(sym2_prime_powers(2.5, 3), Err(ArithError::Data(_))));
        let h = sym2_prime_powers(0.0, 2).unwrap();
        // θ = π/2: Satake triple (-1, 1, -1)
        assert!((h[1] + 1.0).abs() < 1e-15);
        assert!((h[2] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn corrupted_table_fails_hecke() {
        let t = build_tau_table(50).unwrap();
        let mut tau = t.tau_values().to_vec();
        tau[8] += 1;
        let bad = CoefficientTable::from_tau(tau).unwrap();
        assert!(bad.verify_hecke_recursion().is_err());
    }
}
