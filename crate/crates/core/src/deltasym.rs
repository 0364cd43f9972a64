//! Finite divisor expansion of the Kronecker delta on the integers:
//! `δ(n) = Σ_q c_q(n) Δ_q(n)` with `Δ_q(u) = Σ_{q | r} (ω(r) − ω(|u|/r)) / r`
//! for a normalized bump `ω` on `(Q, 2Q)`.

use std::f64::consts::TAU;

use crate::arith::sieve::{gcd, Sieve};
use crate::bump::{bump01, smooth_step};
use crate::fit::fit_loglog;
use crate::quad::{integrate, QuadError};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DeltaError {
    #[error("Q = {0} is below the minimum of 8")]
    QTooSmall(usize),
    #[error("|n| = {0} exceeds the cost guard Q^4")]
    TooLarge(i64),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Profile of the bump `ω` before normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BumpShape {
    /// `exp(−1/(x(1−x)))`.
    Standard,
    /// `exp(−2/(x(1−x)))·(1 + x)`: different shape, same support.
    Skewed,
}

impl BumpShape {
    fn profile(self, x: f64) -> f64 {
        match self {
            BumpShape::Standard => bump01(x),
            BumpShape::Skewed => {
                let b = bump01(x);
                b * b * (1.0 + x)
            }
        }
    }
}

/// The weight `ω` on `(Q, 2Q)` with `Σ_m ω(m) = 1`.
#[derive(Clone, Debug)]
pub struct DeltaExpansion {
    q_param: usize,
    shape: BumpShape,
    norm: f64,
    sieve: Sieve,
    mobius: Vec<i8>,
}

/// `build_expansion(Q)` with the standard bump.
pub fn build_expansion(q: usize) -> Result<DeltaExpansion, DeltaError> {
    DeltaExpansion::with_shape(q, BumpShape::Standard)
}

impl DeltaExpansion {
    pub fn with_shape(q: usize, shape: BumpShape) -> Result<Self, DeltaError> {
        if q < 8 {
            return Err(DeltaError::QTooSmall(q));
        }
        let qf = q as f64;
        let norm: f64 = (q + 1..2 * q).map(|m| shape.profile((m as f64 - qf) / qf)).sum();
        let sieve = Sieve::new(4 * q);
        let mobius = sieve.mobius_table();
        Ok(DeltaExpansion { q_param: q, shape, norm, sieve, mobius })
    }

    pub fn q(&self) -> usize {
        self.q_param
    }

    pub fn shape(&self) -> BumpShape {
        self.shape
    }

    /// `ω(x)` at a real argument.
    pub fn omega(&self, x: f64) -> f64 {
        let qf = self.q_param as f64;
        self.shape.profile((x - qf) / qf) / self.norm
    }

    /// `Σ_{m >= 1} ω(m)`; equals 1 up to rounding.
    pub fn omega_mass(&self) -> f64 {
        (self.q_param + 1..2 * self.q_param).map(|m| self.omega(m as f64)).sum()
    }

    /// `Δ_q(u)`; zero for `q >= 2Q` and `|u| < qQ`.
    pub fn delta_q(&self, q: usize, u: f64) -> f64 {
        let qq = self.q_param;
        let au = u.abs();
        let mut total = 0.0;
        // ω(r) ≠ 0 only for Q < r < 2Q
        let first = (qq / q + 1) * q;
        let mut r = first;
        while r < 2 * qq {
            total += self.omega(r as f64) / r as f64;
            r += q;
        }
        // ω(|u|/r) ≠ 0 only for |u|/(2Q) < r < |u|/Q
        let lo = (au / (2.0 * qq as f64)).floor() as usize;
        let hi = (au / qq as f64).ceil() as usize;
        let mut r = (lo / q + 1) * q;
        while r <= hi {
            total -= self.omega(au / r as f64) / r as f64;
            r += q;
        }
        total
    }

    fn mobius_at(&self, n: usize) -> i8 {
        if n < self.mobius.len() {
            self.mobius[n]
        } else {
            crate::arith::expsum::mobius_small(n as u64)
        }
    }

    /// `c_q(n) = Σ_{d | (q, n)} d μ(q/d)`.
    pub fn ramanujan(&self, q: usize, n: i64) -> i64 {
        let g = if n == 0 { q } else { gcd(q as i64, n) as usize };
        let divs = if g <= self.sieve.limit() {
            self.sieve.divisors(g)
        } else {
            (1..=g).filter(|d| g % d == 0).collect()
        };
        divs.into_iter().map(|d| d as i64 * self.mobius_at(q / d) as i64).sum()
    }

    /// Upper limit of the `q` sum: every `r` contributing to some `Δ_q(n)` is at most this.
    pub fn q_limit(&self, n: i64) -> usize {
        let qq = self.q_param;
        (2 * qq).max(n.unsigned_abs() as usize / qq + 1)
    }
}

/// `Σ_q c_q(n) Δ_q(n)`; 1 at `n = 0` and 0 elsewhere up to rounding.
pub fn delta_symbol(n: i64, exp: &DeltaExpansion) -> Result<f64, DeltaError> {
    let qq = exp.q_param as f64;
    if (n.unsigned_abs() as f64) > qq.powi(4) {
        return Err(DeltaError::TooLarge(n));
    }
    let mut total = 0.0;
    for q in 1..=exp.q_limit(n) {
        let d = exp.delta_q(q, n as f64);
        if d != 0.0 {
            total += exp.ramanujan(q, n) as f64 * d;
        }
    }
    Ok(total)
}

/// Worst deviation of the detector from the Kronecker delta on `|n| <= n_max`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DetectorCheck {
    pub q: usize,
    pub n_max: i64,
    pub deviation_at_zero: f64,
    pub max_off_zero: f64,
    pub argmax: i64,
}

pub fn detector_check(exp: &DeltaExpansion, n_max: i64) -> Result<DetectorCheck, DeltaError> {
    let deviation_at_zero = (delta_symbol(0, exp)? - 1.0).abs();
    let mut max_off_zero: f64 = 0.0;
    let mut argmax = 0;
    for n in 1..=n_max {
        for m in [n, -n] {
            let v = delta_symbol(m, exp)?.abs();
            if v > max_off_zero {
                max_off_zero = v;
                argmax = m;
            }
        }
    }
    Ok(DetectorCheck { q: exp.q(), n_max, deviation_at_zero, max_off_zero, argmax })
}

/// Largest `|Δ_q(u)| / (1/((q+Q)Q) + 1/(|u|+qQ))` over `q <= 2Q` and `u` on a grid in `[0, Q²]`.
pub fn delta_q_bound_constant(exp: &DeltaExpansion, u_samples: usize) -> f64 {
    let qq = exp.q() as f64;
    let mut worst: f64 = 0.0;
    for q in 1..=2 * exp.q() {
        let qf = q as f64;
        for i in 0..=u_samples {
            let u = qq * qq * i as f64 / u_samples as f64;
            let env = 1.0 / ((qf + qq) * qq) + 1.0 / (u + qf * qq);
            worst = worst.max(exp.delta_q(q, u).abs() / env);
        }
    }
    worst
}

/// Cutoff `f(u)`: 1 on `|u| <= Q²/4`, smoothly down to 0 over the next
/// `width · Q²`, with `f^{(j)} ≪ Q^{−2j}`.
pub fn mollifier(u: f64, q: usize, width: f64) -> f64 {
    let q2 = (q * q) as f64;
    1.0 - smooth_step((u.abs() - q2 / 4.0) / (width * q2))
}

/// `g(q, x) = ∫ Δ_q(u) f(u) e(−ux/(qQ)) du`, real since the integrand is even in `u`.
pub fn g_diagnostic(q: usize, x: f64, exp: &DeltaExpansion, mollifier_width: f64) -> Result<f64, DeltaError> {
    let qq = exp.q();
    let q2 = (qq * qq) as f64;
    let end = q2 / 4.0 + mollifier_width * q2;
    let freq = TAU * x / (q as f64 * qq as f64);
    let f = |u: f64| {
        let v = exp.delta_q(q, u) * mollifier(u, qq, mollifier_width) * (freq * u).cos();
        num_complex::Complex64::new(v, 0.0)
    };
    // panels no wider than the narrowest bump ω(u/r), width rQ >= qQ
    let panels = ((end / (q as f64 * qq as f64)).ceil() as usize * 4).max(64);
    let v = integrate(&f, 0.0, end, panels, 1e-12 * end)?;
    Ok(2.0 * v.re)
}

/// Fitted exponent of `|g(q, x)|` over `x ∈ xs`.
pub fn g_decay_exponent(q: usize, xs: &[f64], exp: &DeltaExpansion, width: f64) -> Result<f64, DeltaError> {
    let vals: Vec<f64> = xs.iter().map(|&x| g_diagnostic(q, x, exp, width).map(f64::abs)).collect::<Result<_, _>>()?;
    let floor = 1e-14;
    let kept: Vec<usize> = (0..xs.len()).filter(|&i| vals[i] > floor).collect();
    if kept.len() < 2 {
        return Ok(f64::NEG_INFINITY);
    }
    let fit = fit_loglog(
        &kept.iter().map(|&i| xs[i]).collect::<Vec<_>>(),
        &kept.iter().map(|&i| vals[i]).collect::<Vec<_>>(),
    );
    Ok(fit.slope)
}

/// Measured constant in `|∂g/∂x| ≤ C |x|^{-1} min(|x|^{-1}, Q/q) log Q`
/// from central differences at the given points.
pub fn g_derivative_constant(q: usize, xs: &[f64], exp: &DeltaExpansion, width: f64) -> Result<f64, DeltaError> {
    let qq = exp.q() as f64;
    let mut worst: f64 = 0.0;
    for &x in xs {
        let h = 1e-3 * x.abs().max(1e-2);
        let d = (g_diagnostic(q, x + h, exp, width)? - g_diagnostic(q, x - h, exp, width)?) / (2.0 * h);
        let env = (1.0 / x.abs()) * (1.0 / x.abs()).min(qq / q as f64) * qq.ln();
        worst = worst.max(d.abs() / env);
    }
    Ok(worst)
}

/// JSON payload of the `delta-check` subcommand.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DeltaCheckReport {
    pub detector: DetectorCheck,
    pub omega_mass_error: f64,
    pub shape_sensitivity: f64,
}

/// Detector deviation together with its sensitivity to the bump shape.
pub fn delta_check(q: usize, n_max: i64) -> Result<DeltaCheckReport, DeltaError> {
    let exp = build_expansion(q)?;
    let alt = DeltaExpansion::with_shape(q, BumpShape::Skewed)?;
    let detector = detector_check(&exp, n_max)?;
    let mut shape_sensitivity: f64 = 0.0;
    let step = (n_max / 200).max(1);
    let mut n = 1;
    while n <= n_max {
        shape_sensitivity = shape_sensitivity.max((delta_symbol(n, &exp)? - delta_symbol(n, &alt)?).abs());
        n += step;
    }
    Ok(DeltaCheckReport { detector, omega_mass_error: (exp.omega_mass() - 1.0).abs(), shape_sensitivity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    /// `Σ_q Σ*_{a mod q} e(an/q) Δ_q(n)` with explicit exponentials.
    fn delta_direct(n: i64, exp: &DeltaExpansion) -> f64 {
        let mut total = Complex64::new(0.0, 0.0);
        for q in 1..=exp.q_limit(n) {
            let d = exp.delta_q(q, n as f64);
            if d == 0.0 {
                continue;
            }
            let mut c = Complex64::new(0.0, 0.0);
            for a in 0..q as i64 {
                if gcd(a, q as i64) == 1 {
                    c += Complex64::from_polar(1.0, TAU * (a * n).rem_euclid(q as i64) as f64 / q as f64);
                }
            }
            total += c * d;
        }
        total.re
    }

    #[test]
    fn construction() {
        assert_eq!(build_expansion(4).unwrap_err(), DeltaError::QTooSmall(4));
        let e = build_expansion(50).unwrap();
        assert!((e.omega_mass() - 1.0).abs() <= 1e-14);
        assert_eq!(e.omega(50.0), 0.0);
        assert_eq!(e.omega(100.0), 0.0);
        assert!(e.delta_q(3, 0.0) >= 0.0);
        assert_eq!(e.delta_q(101, 0.0), 0.0);
        assert_eq!(e.delta_q(150, 1234.0), 0.0);
    }

    #[test]
    fn detector_examples() {
        let e = build_expansion(50).unwrap();
        assert!((delta_symbol(0, &e).unwrap() - 1.0).abs() <= 1e-12);
        assert!(delta_symbol(7, &e).unwrap().abs() <= 1e-12);
        assert!(delta_symbol(-360, &e).unwrap().abs() <= 1e-12);
        assert!(delta_direct(7, &e).abs() <= 1e-12);
        assert!((delta_direct(0, &e) - 1.0).abs() <= 1e-12);
        // |n| beyond Q² uses q up to |n|/Q
        assert!(delta_symbol(2 * 50 * 50 * 3 + 1, &e).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn ramanujan_matches_expsum() {
        let e = build_expansion(20).unwrap();
        for q in 1..60 {
            for n in -40..40 {
                assert_eq!(e.ramanujan(q, n), crate::arith::expsum::ramanujan_sum(q as u64, n));
            }
        }
    }

    #[test]
    fn delta_q_envelope() {
        let e = build_expansion(30).unwrap();
        assert!(delta_q_bound_constant(&e, 300) <= 100.0);
    }

    #[test]
    fn g_near_one_at_origin() {
        let e = build_expansion(64).unwrap();
        let g = g_diagnostic(1, 0.0, &e, 0.25).unwrap();
        assert!((g - 1.0).abs() < 0.1, "g = {g}");
    }

    #[test]
    fn shape_independence() {
        let a = build_expansion(40).unwrap();
        let b = DeltaExpansion::with_shape(40, BumpShape::Skewed).unwrap();
        for n in [1i64, 12, 97, 360, 1601] {
            let d = (delta_symbol(n, &a).unwrap() - delta_symbol(n, &b).unwrap()).abs();
            assert!(d <= 1e-10);
        }
    }
}
