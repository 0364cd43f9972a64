//! The smoothed first moment `∫ V(t/T) L(1/2+it) X^{it} dt` of the
//! Rankin–Selberg L-function, evaluated as `ζ · L(·, Sym²)` on the line.

use num_complex::Complex64;
use serde::Serialize;

use super::afe::{afe_value_with, AfeSettings};
use super::zeta::zeta_critical;
use super::{LFunctionSpec, LfuncError};
use crate::oscint::InertWeight;
use crate::quad::{gk15_array, integrate_breakpoints};

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub t_scale: f64,
    pub x: f64,
    pub value: Complex64,
    /// `∫ V(t/T) |ζ(1/2+it)|² dt`.
    pub m2_zeta: f64,
    /// `∫ V(t/T) |L(1/2+it, Sym²)|² dt`.
    pub m2_sym2: f64,
    pub cauchy_schwarz_bound: f64,
    pub panels: usize,
    /// Summed Kronrod−Gauss panel differences for `value`.
    pub error_estimate: f64,
}

fn afe_for_moment() -> AfeSettings {
    AfeSettings { tail_tol: 1e-7, ..AfeSettings::default() }
}

/// Panels of at most half an oscillation of `X^{it}` times the L-values.
fn moment_breaks(t_lo: f64, t_hi: f64, x: f64) -> Vec<f64> {
    let rate = x.ln().abs() + 2.0 * (t_hi / (2.0 * std::f64::consts::PI)).ln().max(1.0) + 2.0;
    let n = ((t_hi - t_lo) * rate / std::f64::consts::PI).ceil().max(8.0) as usize;
    (0..=n).map(|i| t_lo + (t_hi - t_lo) * i as f64 / n as f64).collect()
}

fn check_args(t_scale: f64, x: f64) -> Result<(), LfuncError> {
    if !(t_scale > 0.0 && t_scale <= 500.0) {
        return Err(LfuncError::InvalidArgument(format!("T = {t_scale} outside (0, 500]")));
    }
    if !(x >= 1.0) {
        return Err(LfuncError::InvalidArgument(format!("X = {x} below 1")));
    }
    Ok(())
}

/// Integrand triple at `t`: `V ζ L X^{it}`, `V |ζ|²`, `V |L|²`.
fn moment_node(t: f64, t_scale: f64, ln_x: f64, v: &InertWeight, sym2: &LFunctionSpec) -> Result<[Complex64; 3], LfuncError> {
    let w = v.eval(t / t_scale);
    let zero = Complex64::new(0.0, 0.0);
    if w == 0.0 {
        return Ok([zero; 3]);
    }
    let z = zeta_critical(t)?;
    let l = afe_value_with(sym2, t, &afe_for_moment())?.value;
    Ok([
        z * l * w * Complex64::new(0.0, t * ln_x).exp(),
        Complex64::new(w * z.norm_sqr(), 0.0),
        Complex64::new(w * l.norm_sqr(), 0.0),
    ])
}

/// `ℐ = ∫ V(t/T) ζ(1/2+it) L(1/2+it, Sym²) X^{it} dt` together with the two
/// weighted second moments bounding it by Cauchy–Schwarz.
pub fn moment_with_bound(
    t_scale: f64,
    x: f64,
    v: &InertWeight,
    sym2: &LFunctionSpec,
) -> Result<MomentReport, LfuncError> {
    check_args(t_scale, x)?;
    let (a, b) = v.support;
    let (t_lo, t_hi) = (a * t_scale, b * t_scale);
    let ln_x = x.ln();
    let breaks = moment_breaks(t_lo, t_hi, x);
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    let mut error_estimate = 0.0;
    for pair in breaks.windows(2) {
        let mut failure = None;
        let (part, gauss) = gk15_array(
            |t| match moment_node(t, t_scale, ln_x, v, sym2) {
                Ok(r) => r,
                Err(e) => {
                    failure.get_or_insert(e);
                    [Complex64::new(0.0, 0.0); 3]
                }
            },
            pair[0],
            pair[1],
        );
        if let Some(e) = failure {
            return Err(e);
        }
        error_estimate += (part[0] - gauss[0]).norm();
        for (s, p) in acc.iter_mut().zip(part) {
            *s += p;
        }
    }
    let (mz, ms) = (acc[1].re, acc[2].re);
    Ok(MomentReport {
        t_scale,
        x,
        value: acc[0],
        m2_zeta: mz,
        m2_sym2: ms,
        cauchy_schwarz_bound: (mz * ms).sqrt(),
        panels: breaks.len() - 1,
        error_estimate,
    })
}

/// `ℐ` alone.
pub fn moment_i(t_scale: f64, x: f64, v: &InertWeight, sym2: &LFunctionSpec) -> Result<Complex64, LfuncError> {
    moment_with_bound(t_scale, x, v, sym2).map(|r| r.value)
}

/// `∫ V(t/T) Σ_{n ≤ n_max} a_n n^{−1/2−it} X^{it} dt`, the model of a dyadic
/// piece whose phase `t ln(X/n)` never stalls when `X > n_max`.
pub fn i1_type_integral(
    t_scale: f64,
    x: f64,
    coeffs: &[f64],
    n_max: usize,
    v: &InertWeight,
) -> Result<Complex64, LfuncError> {
    if n_max >= coeffs.len() {
        return Err(LfuncError::TableTooShort { needed: n_max as u64, available: coeffs.len() as u64 - 1 });
    }
    let (a, b) = v.support;
    let mut total = Complex64::new(0.0, 0.0);
    for (n, an) in coeffs.iter().enumerate().take(n_max + 1).skip(1) {
        if *an == 0.0 {
            continue;
        }
        // t = T τ: T ∫ V(τ) e^{iTτ ln(X/n)} dτ
        let freq = t_scale * (x / n as f64).ln();
        let panels = ((b - a) * freq.abs() / std::f64::consts::PI).ceil().max(16.0) as usize;
        let breaks: Vec<f64> = (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect();
        let g = |tau: f64| Complex64::new(0.0, freq * tau).exp() * v.eval(tau);
        let ft = integrate_breakpoints(&g, &breaks, 1e-13, 1 << 16)?;
        total += *an / (n as f64).sqrt() * t_scale * ft;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_tau_table;
    use crate::fit::fit_loglog;
    use std::sync::Arc;

    #[test]
    fn zero_weight_gives_zero() {
        let table = build_tau_table(100).unwrap();
        let spec = LFunctionSpec::sym2_delta(&table);
        let v = InertWeight::new(Arc::new(|_| 0.0), (1.0, 2.0), 1.0);
        assert_eq!(moment_i(20.0, 1e3, &v, &spec).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn first_moment_below_cauchy_schwarz() {
        let table = build_tau_table(200_000).unwrap();
        let spec = LFunctionSpec::sym2_delta(&table);
        let v = InertWeight::bump(1.5, 0.5);
        let r = moment_with_bound(20.0, 1e4, &v, &spec).unwrap();
        assert!(r.value.norm() <= r.cauchy_schwarz_bound, "{r:?}");
        assert!(r.m2_zeta > 0.0 && r.m2_sym2 > 0.0);
        assert!(r.error_estimate < 1e-3 * r.cauchy_schwarz_bound, "{r:?}");
    }

    #[test]
    fn nonstationary_piece_decays_fast() {
        let table = build_tau_table(50).unwrap();
        let v = InertWeight::bump(1.5, 0.5);
        let ts = [10.0, 20.0, 40.0];
        let vals: Vec<f64> =
            ts.iter().map(|t| i1_type_integral(*t, 1e3, table.rs_values(), 50, &v).unwrap().norm()).collect();
        let fit = fit_loglog(&ts, &vals);
        assert!(fit.slope <= -3.0, "slope {} from {vals:?}", fit.slope);
    }
}
