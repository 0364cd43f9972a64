//! Approximate functional equation with the exact cutoff
//! `V_s(y) = (1/2πi) ∫ y^{−w} γ(s+w)/γ(s) e^{w²} dw/w`.
//!
//! `V_s` is tabulated on a grid in `u = ln y` and interpolated; the
//! `w`-integral runs on `Re w = contour_re` by the trapezoid rule, which is
//! spectrally accurate here because the integrand is analytic in a strip.

use num_complex::Complex64;
use serde::Serialize;

use super::{LFunctionSpec, LfuncError};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AfeSettings {
    /// `Re w` of the cutoff contour.
    pub contour_re: f64,
    /// Trapezoid step in `Im w`.
    pub step: f64,
    /// `|Im w| <= cap_factor · max(ln t, 1)`.
    pub cap_factor: f64,
    /// Grid step in `ln y`.
    pub grid_step: f64,
    /// `|V|` below which the smoothed sums are truncated.
    pub tail_tol: f64,
    /// Largest acceptable `|V|` at the end of a short coefficient table.
    pub table_edge_tol: f64,
}

impl Default for AfeSettings {
    fn default() -> Self {
        AfeSettings { contour_re: 0.01, step: 0.05, cap_factor: 10.0, grid_step: 0.01, tail_tol: 1e-10, table_edge_tol: 1e-4 }
    }
}

/// Contributions of `n ∈ [lo, hi)` to the direct and dual smoothed sums.
#[derive(Clone, Debug, Serialize)]
pub struct DyadicBlock {
    pub lo: u64,
    pub hi: u64,
    pub direct: Complex64,
    pub dual: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AfeValue {
    pub s: Complex64,
    pub value: Complex64,
    /// Numerical error estimate: truncation tail plus discretization.
    pub error_estimate: f64,
    /// `t^{d/4 − 1}`, the scale of the classical stationary-phase remainder.
    pub remainder_scale: f64,
    pub direct_terms: u64,
    pub dual_terms: u64,
    pub blocks: Vec<DyadicBlock>,
}

const V_FLOOR: f64 = 1e-14;

/// Tabulated `V_s` on `u ∈ [u_lo, u_lo + step·(len − 1)]`; zero beyond.
struct Cutoff {
    u_lo: f64,
    step: f64,
    values: Vec<Complex64>,
}

impl Cutoff {
    /// Tabulates until `|V(u)| n^{1 − Re s}` stays below `tail_tol`, `n = √q e^u`.
    fn build(spec: &LFunctionSpec, s: Complex64, u_lo: f64, set: &AfeSettings) -> Result<Self, LfuncError> {
        let growth = (1.0 - s.re).max(0.0);
        let half_ln_q = 0.5 * (spec.conductor as f64).ln();
        let scale = s.im.abs().max(std::f64::consts::E).ln().max(1.0);
        let cap = set.cap_factor * scale;
        let ln_gs = spec.ln_gamma_factor(s);
        // the contour must pass right of every pole of γ(s + w)
        let kmax = spec.kappa.iter().map(|k| k.re).fold(f64::NEG_INFINITY, f64::max);
        let c_re = set.contour_re.max(kmax - s.re + 0.5);
        // trapezoid nodes: (w_j, R_j e^{w_j²}/w_j, e^{w_j²}/w_j)
        let mut nodes = Vec::new();
        let m = (cap / set.step).floor() as i64;
        for j in -m..=m {
            let w = Complex64::new(c_re, j as f64 * set.step);
            let g = (w * w).exp() / w;
            if g.norm() < 1e-300 {
                continue;
            }
            let r = (spec.ln_gamma_factor(s + w) - ln_gs).exp();
            let a = r * g;
            if a.norm() < 1e-25 && g.norm() < 1e-25 {
                continue;
            }
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(LfuncError::AccuracyUnreachable(format!("cutoff weight overflow at w = {w}")));
            }
            nodes.push((w, a, g));
        }
        let h = set.step / (2.0 * std::f64::consts::PI);
        let du = set.grid_step;
        // e^{−u w_j} advanced multiplicatively along the grid
        let mut cur: Vec<Complex64> = nodes.iter().map(|(w, _, _)| (-w * u_lo).exp()).collect();
        let stride: Vec<Complex64> = nodes.iter().map(|(w, _, _)| (-w * du).exp()).collect();
        let u_centre: f64 =
            spec.kappa.iter().map(|k| 0.5 * ((s - k).norm().max(1.0) / (2.0 * std::f64::consts::PI)).ln()).sum();
        let mut values = Vec::new();
        let mut quiet = 0usize;
        let u_stop = u_centre.max(u_lo) + 60.0;
        loop {
            let u = u_lo + du * values.len() as f64;
            let mut acc = Complex64::new(0.5, 0.0);
            for (j, (_, a, g)) in nodes.iter().enumerate() {
                acc += (cur[j] * a - g) * h;
            }
            values.push(acc);
            for (c, st) in cur.iter_mut().zip(&stride) {
                *c *= st;
            }
            if values.len() % 256 == 0 {
                // resynchronize to shed multiplicative drift
                let u_next = u_lo + du * values.len() as f64;
                for (c, (w, _, _)) in cur.iter_mut().zip(&nodes) {
                    *c = (-w * u_next).exp();
                }
            }
            // `V` is formed as ½ plus O(1) terms, so it cannot resolve below ~1e−14
            let weighted = acc.norm() * (growth * (u + half_ln_q)).exp();
            if u > u_centre && (weighted < set.tail_tol || acc.norm() < V_FLOOR) {
                quiet += 1;
                if quiet >= 100 {
                    break;
                }
            } else {
                quiet = 0;
            }
            if u > u_stop {
                return Err(LfuncError::AccuracyUnreachable("cutoff function does not decay".into()));
            }
        }
        Ok(Cutoff { u_lo, step: du, values })
    }

    fn u_end(&self) -> f64 {
        self.u_lo + self.step * (self.values.len() - 1) as f64
    }

    /// Four-point Lagrange interpolation.
    fn eval(&self, u: f64) -> Complex64 {
        let pos = (u - self.u_lo) / self.step;
        let last = self.values.len() - 1;
        if pos >= last as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let i = (pos.floor() as isize).clamp(1, last as isize - 2) as usize;
        let x = pos - i as f64;
        let (p0, p1, p2, p3) = (self.values[i - 1], self.values[i], self.values[i + 1], self.values[i + 2]);
        let l0 = -x * (x - 1.0) * (x - 2.0) / 6.0;
        let l1 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
        let l2 = -(x + 1.0) * x * (x - 2.0) / 2.0;
        let l3 = (x + 1.0) * x * (x - 1.0) / 6.0;
        p0 * l0 + p1 * l1 + p2 * l2 + p3 * l3
    }
}

struct SmoothedSum {
    total: Complex64,
    terms: u64,
    blocks: Vec<Complex64>,
    tail: f64,
}

fn smoothed_sum(spec: &LFunctionSpec, s: Complex64, set: &AfeSettings) -> Result<SmoothedSum, LfuncError> {
    let half_ln_q = 0.5 * (spec.conductor as f64).ln();
    let cut = Cutoff::build(spec, s, -half_ln_q - 2.0 * set.grid_step, set)?;
    let n_need = (cut.u_end() + half_ln_q).exp().floor() as u64;
    let available = spec.n_max();
    let mut n_top = n_need;
    let mut tail = cut.values.last().map(|v| v.norm()).unwrap_or(0.0).max(set.tail_tol.min(V_FLOOR));
    if n_need > available {
        let edge = cut.eval((available as f64).ln() - half_ln_q).norm();
        if !(edge <= set.table_edge_tol) {
            return Err(LfuncError::TableTooShort { needed: n_need, available });
        }
        n_top = available;
        tail = edge;
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut blocks = Vec::new();
    let mut block = Complex64::new(0.0, 0.0);
    let mut block_end = 2u64;
    for n in 1..=n_top {
        if n == block_end {
            blocks.push(block);
            total += block;
            block = Complex64::new(0.0, 0.0);
            block_end *= 2;
        }
        let c = spec.coeffs[n as usize];
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        let ln_n = (n as f64).ln();
        block += c * (-s * ln_n).exp() * cut.eval(ln_n - half_ln_q);
    }
    blocks.push(block);
    total += block;
    // boundary term of the truncated tail: |V| at the cut times n^{1 − Re s}
    let scale = (n_top as f64).powf((1.0 - s.re).max(0.0)).max(1.0);
    Ok(SmoothedSum { total, terms: n_top, blocks, tail: tail * scale })
}

/// `L(s)` for `−1/2 <= Re s <= 3/2`.
pub fn l_value(spec: &LFunctionSpec, s: Complex64, set: &AfeSettings) -> Result<AfeValue, LfuncError> {
    spec.validate()?;
    if !(-0.5..=1.5).contains(&s.re) {
        return Err(LfuncError::InvalidArgument(format!("Re s = {} outside [-0.5, 1.5]", s.re)));
    }
    let dual = spec.dual();
    let sd = Complex64::new(1.0, 0.0) - s;
    let q = spec.conductor as f64;
    let direct = smoothed_sum(spec, s, set)?;
    let back = smoothed_sum(&dual, sd, set)?;
    let ln_gs = spec.ln_gamma_factor(s);
    let factor = spec.root_number * ((0.5 - s) * q.ln() + dual.ln_gamma_factor(sd) - ln_gs).exp();
    let mut value = direct.total + factor * back.total;
    // poles of the completed function crossed by the contour shift; e^{w²}
    // and the gamma normalization both underflow at large t, so combine logs
    let ln_norm = s * 0.5 * q.ln() + ln_gs;
    for (p, r) in &spec.poles {
        let w = p - s;
        if w.norm() < 1e-12 {
            return Err(LfuncError::Pole);
        }
        value -= r * (w * w - ln_norm).exp() / w;
    }
    let blocks = direct
        .blocks
        .iter()
        .enumerate()
        .map(|(k, b)| DyadicBlock {
            lo: 1 << k,
            hi: 1 << (k + 1),
            direct: *b,
            dual: back.blocks.get(k).map(|x| factor * x).unwrap_or_default(),
        })
        .chain(back.blocks.iter().enumerate().skip(direct.blocks.len()).map(|(k, b)| DyadicBlock {
            lo: 1 << k,
            hi: 1 << (k + 1),
            direct: Complex64::new(0.0, 0.0),
            dual: factor * b,
        }))
        .collect();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(LfuncError::AccuracyUnreachable(format!("non-finite value at s = {s}")));
    }
    let d = spec.degree() as f64;
    let t = s.im.abs().max(1.0);
    Ok(AfeValue {
        s,
        value,
        error_estimate: direct.tail + factor.norm() * back.tail + 1e-12 * (direct.terms.max(back.terms) as f64).sqrt(),
        remainder_scale: t.powf(d / 4.0 - 1.0),
        direct_terms: direct.terms,
        dual_terms: back.terms,
        blocks,
    })
}

/// `L(1/2 + it)` for `t ∈ [10, 10⁴]` with default settings.
pub fn afe_value(spec: &LFunctionSpec, t: f64) -> Result<AfeValue, LfuncError> {
    afe_value_with(spec, t, &AfeSettings::default())
}

pub fn afe_value_with(spec: &LFunctionSpec, t: f64, set: &AfeSettings) -> Result<AfeValue, LfuncError> {
    if !(10.0..=1e4).contains(&t.abs()) {
        return Err(LfuncError::InvalidArgument(format!("|t| = {t} outside [10, 1e4]")));
    }
    l_value(spec, Complex64::new(0.5, t), set)
}
