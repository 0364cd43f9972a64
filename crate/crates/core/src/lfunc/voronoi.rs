//! Numerical check of GL(3) Voronoi summation for the symmetric square:
//! `Σ A(1,n) e(n d̄/c) ψ(n) = (c π^{3/2}/2) Σ± Σ_{n₁|c} Σ_{n₂} A(n₂,n₁)/(n₁n₂) S(d, ±n₂; c/n₁) Ψ±(n₁²n₂/c³)`.

use num_complex::Complex64;
use serde::Serialize;

use super::psi::{MellinPsi, MellinSettings, MellinWeight, VoronoiKernel};
use super::LfuncError;
use crate::arith::sieve::{gcd, mod_inverse};
use crate::arith::{gl3_coeff, kloosterman, CoefficientTable, Sign};

/// Consecutive dual terms below the floor needed to stop.
const QUIET_RUN: usize = 40;

#[derive(Clone, Debug, Serialize)]
pub struct DualRange {
    pub n1: u64,
    pub sign: Sign,
    pub n2_max: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VoronoiReport {
    pub c: u64,
    pub d: u64,
    pub kernel: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `|lhs − rhs| / |lhs|`.
    pub residual: f64,
    pub lhs_range: (u64, u64),
    pub dual: Vec<DualRange>,
}

/// Both sides of the identity; the dual sum stops where `|Ψ±|` has stayed
/// below `1e−10` of its running peak for a run of terms.
pub fn voronoi_check(
    c: u64,
    d: u64,
    weight: &dyn MellinWeight,
    table: &CoefficientTable,
    kernel: &VoronoiKernel,
) -> Result<VoronoiReport, LfuncError> {
    if c == 0 || gcd(c as i64, d as i64) != 1 {
        return Err(LfuncError::InvalidArgument(format!("need gcd(c, d) = 1, got c = {c}, d = {d}")));
    }
    let d_bar = if c == 1 { 0 } else { mod_inverse(d as i64, c as i64).expect("coprime") as u64 };
    let (lo, hi) = weight.support();
    let n_lo = lo.ceil().max(1.0) as u64;
    let n_hi = hi.floor() as u64;
    if n_hi as usize > table.n_max() {
        return Err(LfuncError::TableTooShort { needed: n_hi, available: table.n_max() as u64 });
    }
    let mut lhs = Complex64::new(0.0, 0.0);
    for n in n_lo..=n_hi {
        let phase = 2.0 * std::f64::consts::PI * ((n * d_bar) % c) as f64 / c as f64;
        lhs += Complex64::from_polar(table.sym2(n as usize), phase) * weight.eval(n as f64);
    }
    let c3 = (c as f64).powi(3);
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut dual = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let mp = MellinPsi::new(kernel, weight, sign, &MellinSettings::default())?;
        for n1 in (1..=c).filter(|n1| c % n1 == 0) {
            let modulus = c / n1;
            let mut peak: f64 = 0.0;
            let mut quiet = 0;
            let mut n2 = 0u64;
            let mut part = Complex64::new(0.0, 0.0);
            loop {
                n2 += 1;
                if (n2 * n1) as usize > table.n_max() {
                    // the dual terms have not decayed yet; ask for twice the range
                    return Err(LfuncError::TableTooShort { needed: 2 * table.n_max() as u64, available: table.n_max() as u64 });
                }
                let psi = mp.eval((n1 * n1 * n2) as f64 / c3);
                peak = peak.max(psi.norm());
                if psi.norm() < 1e-10 * peak {
                    quiet += 1;
                    if quiet >= QUIET_RUN {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                let b = match sign {
                    Sign::Plus => n2 as i64,
                    Sign::Minus => -(n2 as i64),
                };
                let a = gl3_coeff(table, n2 as usize, n1 as usize)?;
                let k = kloosterman(d as i64, b, modulus);
                part += psi * (a * k / (n1 * n2) as f64);
            }
            rhs += part;
            dual.push(DualRange { n1, sign, n2_max: n2 });
        }
    }
    rhs *= c as f64 * std::f64::consts::PI.powf(1.5) / 2.0;
    Ok(VoronoiReport {
        c,
        d,
        kernel: kernel.label.clone(),
        lhs,
        rhs,
        residual: (lhs - rhs).norm() / lhs.norm(),
        lhs_range: (n_lo, n_hi),
        dual,
    })
}
