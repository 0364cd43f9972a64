//! Complete exponential sums over residue classes.
//!
//! Phases are reduced exactly in integers before any trigonometry, so every
//! sum is a combination of `e(r/c)` for `0 <= r < c`, read from a table that
//! is antisymmetric in its sine part.

use num_complex::Complex64;
use std::f64::consts::TAU;

use super::sieve::{gcd, mod_inverse};
use super::ArithError;

/// `e(r/c)` for `r = 0..c`, with `sin` exactly antisymmetric under `r -> c - r`.
pub(crate) fn unit_roots(c: u64) -> Vec<Complex64> {
    let c = c as usize;
    let mut out = vec![Complex64::new(1.0, 0.0); c];
    for r in 1..c {
        if 2 * r > c {
            out[r] = out[c - r].conj();
        } else {
            let a = TAU * r as f64 / c as f64;
            out[r] = Complex64::new(a.cos(), a.sin());
        }
    }
    out
}

fn reduce(x: i128, c: u64) -> usize {
    x.rem_euclid(c as i128) as usize
}

/// `S(a, b; c) = Σ*_{d mod c} e((a d + b d̄) / c)`.
///
/// # Panics
/// If `c == 0`, or if the imaginary residue exceeds `1e-12 · c`.
pub fn kloosterman(a: i64, b: i64, c: u64) -> f64 {
    assert!(c >= 1, "modulus must be positive");
    let roots = unit_roots(c);
    let s = kloosterman_with(&roots, a, b, c);
    assert!(s.im.abs() <= 1e-12 * c.max(1) as f64, "Kloosterman sum not real: {s}");
    s.re
}

pub(crate) fn kloosterman_with(roots: &[Complex64], a: i64, b: i64, c: u64) -> Complex64 {
    let ci = c as i64;
    let mut s = Complex64::new(0.0, 0.0);
    for d in 0..ci {
        if gcd(d, ci) != 1 {
            continue;
        }
        let dbar = mod_inverse(d, ci).expect("unit has an inverse");
        let r = reduce(a as i128 * d as i128 + b as i128 * dbar as i128, c);
        s += roots[r];
    }
    s
}

/// Ramanujan sum `c_q(n) = Σ_{d | (q, n)} d μ(q/d)`, exact.
pub fn ramanujan_sum(q: u64, n: i64) -> i64 {
    assert!(q >= 1);
    let g = gcd(q as i64, n) as u64;
    let g = if g == 0 { q } else { g };
    let mut total = 0i64;
    let mut d = 1u64;
    while d * d <= g {
        if g % d == 0 {
            total += d as i64 * mobius_small(q / d) as i64;
            let e = g / d;
            if e != d {
                total += e as i64 * mobius_small(q / e) as i64;
            }
        }
        d += 1;
    }
    total
}

/// Möbius by trial division.
pub fn mobius_small(mut n: u64) -> i8 {
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Orientation of the `b` twist in the two Kloosterman factors of ℭ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// `ℭ = Σ_{b mod q̂q̂′} S(−m̄, ±b; q̂) S(m̄′, ∓b; q̂′) e(nb / (q̂q̂′))` by direct summation,
/// where `m̄` inverts `m` mod `q̂` and `m̄′` inverts `m′` mod `q̂′`.
pub fn character_sum_c(
    n: i64,
    m: i64,
    m_prime: i64,
    q_hat: u64,
    q_hat_prime: u64,
    sign: Sign,
) -> Result<Complex64, ArithError> {
    if q_hat == 0 || q_hat_prime == 0 {
        return Err(ArithError::InvalidArgument("moduli must be positive".into()));
    }
    let mbar = mod_inverse(m, q_hat as i64)
        .ok_or_else(|| ArithError::InvalidArgument(format!("{m} not invertible mod {q_hat}")))?;
    let mpbar = mod_inverse(m_prime, q_hat_prime as i64).ok_or_else(|| {
        ArithError::InvalidArgument(format!("{m_prime} not invertible mod {q_hat_prime}"))
    })?;
    let s = sign.as_i64();
    let r1 = unit_roots(q_hat);
    let r2 = unit_roots(q_hat_prime);
    // the first factor depends on b mod q̂, the second on b mod q̂′
    let first: Vec<Complex64> =
        (0..q_hat as i64).map(|b| kloosterman_with(&r1, -mbar, s * b, q_hat)).collect();
    let second: Vec<Complex64> = (0..q_hat_prime as i64)
        .map(|b| kloosterman_with(&r2, mpbar, -s * b, q_hat_prime))
        .collect();
    let modulus = q_hat * q_hat_prime;
    let roots = unit_roots(modulus);
    let mut total = Complex64::new(0.0, 0.0);
    for b in 0..modulus {
        let k1 = first[(b % q_hat) as usize];
        let k2 = second[(b % q_hat_prime) as usize];
        total += k1 * k2 * roots[reduce(n as i128 * b as i128, modulus)];
    }
    Ok(total)
}

/// Bound `q̂ q̂′ gcd(q̂, q̂′, n)` for `|ℭ|`.
pub fn character_sum_bound(n: i64, q_hat: u64, q_hat_prime: u64) -> f64 {
    let g = gcd(gcd(q_hat as i64, q_hat_prime as i64), n);
    (q_hat * q_hat_prime) as f64 * g as f64
}

#[cfg(test)]
mod tests {
    use super::super::sieve::{divisor_count, Sieve};
    use super::*;

    /// Complex-exponential Kloosterman sum with no phase reduction.
    fn kloosterman_naive(a: i64, b: i64, c: i64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for d in 1..=c {
            if gcd(d, c) != 1 {
                continue;
            }
            let dbar = mod_inverse(d, c).unwrap();
            let x = TAU * ((a * d + b * dbar) as f64) / c as f64;
            s += Complex64::new(x.cos(), x.sin());
        }
        s
    }

    #[test]
    fn kloosterman_examples() {
        let sieve = Sieve::new(100);
        for c in 1..=30u64 {
            assert!((kloosterman(0, 0, c) - sieve.totient(c as usize) as f64).abs() < 1e-9);
        }
        assert!((kloosterman(1, 1, 2) - 1.0).abs() < 1e-12);
        let s3 = kloosterman(1, 1, 3);
        assert!((s3 + 1.0).abs() < 1e-12);
        assert!(s3.abs() <= 2.0 * 3f64.sqrt());
    }

    #[test]
    fn kloosterman_matches_naive() {
        for c in 1..40i64 {
            for (a, b) in [(1, 1), (2, 5), (-3, 7), (0, 4), (6, -6)] {
                let fast = kloosterman(a, b, c as u64);
                let slow = kloosterman_naive(a, b, c);
                assert!((fast - slow.re).abs() < 1e-9, "S({a},{b};{c})");
            }
        }
    }

    #[test]
    fn weil_bound_small_moduli() {
        for c in 1..=120u64 {
            for (a, b) in [(1i64, 1i64), (1, 2), (3, 5), (c as i64, 1), (2, 4)] {
                let s = kloosterman(a, b, c);
                let g = gcd(gcd(a, b), c as i64) as f64;
                let bound = divisor_count(c) as f64 * (c as f64).sqrt() * g.sqrt();
                assert!(s.abs() <= bound + 1e-9, "S({a},{b};{c}) = {s} > {bound}");
            }
        }
    }

    #[test]
    fn ramanujan_sum_identity() {
        // Σ_{q | r} c_q(n) = r [r | n]
        for r in 1..=200u64 {
            for n in -30i64..=30 {
                let mut total = 0i64;
                for q in 1..=r {
                    if r % q == 0 {
                        total += ramanujan_sum(q, n);
                    }
                }
                let expect = if n % r as i64 == 0 { r as i64 } else { 0 };
                assert_eq!(total, expect, "r = {r}, n = {n}");
            }
        }
        assert_eq!(ramanujan_sum(12, 0), 4);
        assert_eq!(ramanujan_sum(6, 1), 1);
    }

    #[test]
    fn character_sum_examples() {
        let c = character_sum_c(0, 1, 1, 2, 3, Sign::Plus).unwrap();
        assert!(c.norm() < 1e-9);
        let c = character_sum_c(0, 1, 1, 3, 3, Sign::Plus).unwrap();
        assert!(c.norm() <= 27.0 + 1e-9);
        let c = character_sum_c(1, 1, 1, 2, 2, Sign::Minus).unwrap();
        assert!(c.norm() <= 4.0 + 1e-9);
        assert!(character_sum_c(0, 2, 1, 4, 3, Sign::Plus).is_err());
    }
}
