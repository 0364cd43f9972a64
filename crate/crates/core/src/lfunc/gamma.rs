//! Complex log-gamma by Stirling's series after an upward shift.

use num_complex::Complex64;

// B_{2k} / (2k (2k − 1)), k = 1..=12
const STIRLING: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
    77683.0 / 5796.0,
    -236_364_091.0 / 1_506_960.0,
];

const SHIFT_TO: f64 = 15.0;
const HALF_LN_TAU: f64 = 0.918_938_533_204_672_8;

/// A logarithm of `Γ(z)`; exponentiates to `Γ(z)` (branch not normalized).
///
/// # Panics
/// At the poles `z = 0, −1, −2, …`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    assert!(
        !(z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0),
        "ln_gamma pole at {z}"
    );
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    if w.im.abs() < SHIFT_TO || w.re < 1.0 {
        while w.re < SHIFT_TO {
            shift += w.ln();
            w += 1.0;
        }
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_TAU + series - shift
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// `ln Γ(a) − ln Γ(b)`.
pub fn ln_gamma_ratio(a: Complex64, b: Complex64) -> Complex64 {
    ln_gamma(a) - ln_gamma(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_values() {
        assert!((gamma(c(0.5, 0.0)).re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(c(5.0, 0.0)).re - 24.0).abs() < 1e-11);
        assert!((gamma(c(-0.5, 0.0)).re + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((ln_gamma(c(100.0, 0.0)).re - 359.134_205_369_575_4).abs() < 1e-10);
    }

    #[test]
    fn critical_line_modulus() {
        // |Γ(1/2 + it)|² = π / cosh(πt)
        for t in [0.3, 4.0, 17.5, 60.0, 300.0] {
            let g = ln_gamma(c(0.5, t)).re * 2.0;
            // ln cosh x = x + ln(1 + e^{−2x}) − ln 2
            let x = PI * t;
            let expect = PI.ln() - (x + (-2.0 * x).exp().ln_1p() - 2f64.ln());
            assert!((g - expect).abs() < 1e-12 * expect.abs().max(1.0), "t = {t}");
        }
    }

    #[test]
    fn recurrence() {
        for z in [c(0.3, 2.0), c(-3.7, 0.2), c(2.0, -40.0), c(0.01, 900.0)] {
            let lhs = ln_gamma(z + 1.0);
            let rhs = ln_gamma(z) + z.ln();
            let d = (lhs - rhs).exp();
            assert!((d - 1.0).norm() < 1e-12, "z = {z}: {d}");
        }
    }
}
