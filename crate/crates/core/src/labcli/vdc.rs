//! Exponential sums `Σ_{ℓ∈I} e(h(ℓ))` over subintervals of `[L, 2L]` with
//! `h(ℓ) = −4(ℓmX)^{1/4} + (v′/2π) log ℓ`, against `F^{1/30} L^{5/6} + L/F`.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::fit::fit_loglog;

use super::report::{ExperimentReport, Fitted, ScaleStability};
use super::{Config, LabError};

pub const CRITERION: &str = "van-der-corput";
pub const STABILITY: &str = "scale-stability";

/// `|h^{(k)}| L^k / F` must lie in `[1/C, C]` for `k <= 5`.
pub const SCALING_CONSTANT: f64 = 100.0;

#[derive(Clone, Debug, PartialEq)]
pub struct VdcParams {
    pub l: f64,
    pub f: f64,
    pub m: f64,
    pub v_prime: f64,
    pub doublings: usize,
    pub max_ratio: f64,
    pub growth_limit: f64,
}

impl Default for VdcParams {
    fn default() -> Self {
        VdcParams { l: 1e4, f: 1e3, m: 1.0, v_prime: 0.0, doublings: 4, max_ratio: 10.0, growth_limit: 5.0 / 6.0 + 0.05 }
    }
}

impl VdcParams {
    pub const KEYS: &'static [&'static str] = &["l", "f", "m", "v_prime", "doublings", "max_ratio", "growth_limit"];

    pub fn from_config(c: &Config) -> Result<Self, LabError> {
        let d = Self::default();
        Ok(VdcParams {
            l: c.get_or("l", d.l)?,
            f: c.get_or("f", d.f)?,
            m: c.get_or("m", d.m)?,
            v_prime: c.get_or("v_prime", d.v_prime)?,
            doublings: c.count_or("doublings", d.doublings)?,
            max_ratio: c.get_or("max_ratio", d.max_ratio)?,
            growth_limit: c.get_or("growth_limit", d.growth_limit)?,
        })
    }

    /// `X` with `4(LmX)^{1/4} = F`.
    pub fn x(&self) -> f64 {
        (self.f / 4.0).powi(4) / (self.l * self.m)
    }
}

/// The phase for a fixed product `mX`.
#[derive(Clone, Copy, Debug)]
pub struct FourthRootPhase {
    pub mx: f64,
    pub v_prime: f64,
}

impl FourthRootPhase {
    /// `h^{(k)}(ℓ)` for `k <= 5`.
    pub fn d(&self, k: usize, l: f64) -> f64 {
        // d^k/dℓ^k ℓ^{1/4} = (1/4)(1/4 − 1)···(1/4 − k + 1) ℓ^{1/4 − k}
        let falling: f64 = (0..k).map(|j| 0.25 - j as f64).product();
        let root = -4.0 * self.mx.powf(0.25) * falling * l.powf(0.25 - k as f64);
        let log = match k {
            0 => l.ln(),
            _ => {
                let fact: f64 = (1..k).map(|j| j as f64).product();
                (if k % 2 == 1 { fact } else { -fact }) / l.powi(k as i32)
            }
        };
        root + self.v_prime / TAU * log
    }

    /// Size `F = 4(LmX)^{1/4}` on `[L, 2L]`.
    pub fn size(&self, l: f64) -> f64 {
        4.0 * (l * self.mx).powf(0.25)
    }

    /// Extremes of `|h^{(k)}(ℓ)| L^k / F` over `[L, 2L]`, `k = 1..=5`.
    pub fn scaling_ratios(&self, l: f64, points: usize) -> [(f64, f64); 5] {
        let f = self.size(l);
        let mut out = [(f64::INFINITY, 0.0f64); 5];
        for i in 0..=points {
            let x = l * (1.0 + i as f64 / points as f64);
            for (k, slot) in out.iter_mut().enumerate() {
                let v = self.d(k + 1, x).abs() * l.powi(k as i32 + 1) / f;
                slot.0 = slot.0.min(v);
                slot.1 = slot.1.max(v);
            }
        }
        out
    }

    /// `e(h(ℓ))` for integers `ℓ ∈ (L, 2L]`.
    pub fn terms(&self, l: u64) -> Vec<Complex64> {
        ((l + 1)..=(2 * l))
            .map(|n| {
                let h = self.d(0, n as f64);
                Complex64::from_polar(1.0, TAU * (h - h.floor()))
            })
            .collect()
    }
}

/// `max_{I} |Σ_{ℓ∈I} z_ℓ|` over all contiguous subintervals: the diameter of
/// the partial-sum path, through its convex hull.
pub fn max_subinterval_sum(terms: &[Complex64]) -> f64 {
    let mut pts = Vec::with_capacity(terms.len() + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    pts.push((0.0, 0.0));
    for z in terms {
        acc += z;
        pts.push((acc.re, acc.im));
    }
    let hull = convex_hull(pts);
    let mut best = 0.0f64;
    for i in 0..hull.len() {
        for j in (i + 1)..hull.len() {
            best = best.max((hull[i].0 - hull[j].0).hypot(hull[i].1 - hull[j].1));
        }
    }
    best
}

fn convex_hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// `F^{1/30} L^{5/6} + L/F`.
pub fn envelope(f: f64, l: f64) -> f64 {
    f.powf(1.0 / 30.0) * l.powf(5.0 / 6.0) + l / f
}

pub fn run_vdc(p: &VdcParams) -> Result<ExperimentReport, LabError> {
    if !(p.l >= 2.0 && p.f > 0.0 && p.m > 0.0) {
        return Err(LabError::Config("vdc needs L >= 2, F > 0, m > 0".into()));
    }
    let mut r = ExperimentReport::new("vdc");
    let x = p.x();
    r.param("l", p.l).param("f", p.f).param("m", p.m).param("x", x).param("v_prime", p.v_prime);
    r.param("doublings", p.doublings as f64);
    let phase = FourthRootPhase { mx: p.m * x, v_prime: p.v_prime };

    let mut ls = Vec::new();
    let mut sums = Vec::new();
    let mut ratios = Vec::new();
    for j in 0..=p.doublings {
        let l = (p.l * (1u64 << j) as f64).round();
        let ranges = phase.scaling_ratios(l, 256);
        if let Some((k, bad)) = ranges
            .iter()
            .enumerate()
            .find(|(_, &(lo, hi))| lo < 1.0 / SCALING_CONSTANT || hi > SCALING_CONSTANT)
        {
            return Err(LabError::Precondition(format!(
                "|h^({})| L^{} / F ranges over [{:.3e}, {:.3e}] at L = {l}",
                k + 1,
                k + 1,
                bad.0,
                bad.1
            )));
        }
        if j == 0 {
            for (k, (lo, hi)) in ranges.iter().enumerate() {
                r.fit(&format!("scaling_min_k{}", k + 1), Fitted::constant(*lo));
                r.fit(&format!("scaling_max_k{}", k + 1), Fitted::constant(*hi));
            }
        }
        let f = phase.size(l);
        let s = max_subinterval_sum(&phase.terms(l as u64));
        let ratio = s / envelope(f, l);
        r.sample("max_sum", l, s);
        r.sample("envelope_ratio", l, ratio);
        ls.push(l);
        sums.push(s);
        ratios.push(ratio);
    }
    r.fit("envelope_ratio", Fitted::constant(ratios[0]));
    r.verdict(CRITERION, "envelope_ratio", ratios[0] <= p.max_ratio, ratios[0], format!("<= {}", p.max_ratio));
    if ls.len() >= 2 {
        let growth = fit_loglog(&ls, &sums);
        r.fit("doubling_exponent", Fitted::slope(&growth));
        r.verdict(
            CRITERION,
            "doubling_exponent",
            growth.slope <= p.growth_limit,
            growth.slope,
            format!("<= {:.4}", p.growth_limit),
        );
        let stab = ScaleStability::sup(&ratios);
        r.verdict(STABILITY, "envelope_constant_refit", stab.stable(), stab.ratio, "<= 2");
    }
    r.note("doublings keep mX fixed, so F grows like L^{1/4}");
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_finite_differences() {
        let ph = FourthRootPhase { mx: 3.7e5, v_prime: 1.3 };
        let l = 1.5e4;
        let h = 0.5;
        for k in 0..5 {
            let fd = (ph.d(k, l + h) - ph.d(k, l - h)) / (2.0 * h);
            let exact = ph.d(k + 1, l);
            assert!((fd - exact).abs() < 1e-5 * exact.abs(), "k = {k}: {fd} vs {exact}");
        }
    }

    #[test]
    fn constant_phase_sums_to_length() {
        let terms = vec![Complex64::new(1.0, 0.0); 500];
        assert!((max_subinterval_sum(&terms) - 500.0).abs() < 1e-9);
        // F → 0 makes the L/F term dominate
        assert!(envelope(1e-9, 500.0) > 1e10);
    }

    #[test]
    fn subinterval_sup_matches_brute_force() {
        let ph = FourthRootPhase { mx: 2.0e6, v_prime: 0.5 };
        let terms = ph.terms(300);
        let mut prefix = vec![Complex64::new(0.0, 0.0)];
        for z in &terms {
            prefix.push(prefix.last().unwrap() + z);
        }
        let mut brute = 0.0f64;
        for a in 0..prefix.len() {
            for b in a..prefix.len() {
                brute = brute.max((prefix[b] - prefix[a]).norm());
            }
        }
        assert!((max_subinterval_sum(&terms) - brute).abs() < 1e-9 * brute);
    }

    #[test]
    fn default_run() {
        let p = VdcParams { doublings: 2, ..Default::default() };
        assert!((4.0 * (p.l * p.m * p.x()).powf(0.25) - p.f).abs() < 1e-9 * p.f);
        let r = run_vdc(&p).unwrap();
        assert!(r.all_passed(), "{:?}", r.verdicts);
        assert!(r.is_well_formed());
    }

    #[test]
    fn precondition_failure_is_reported() {
        // a large log term breaks the fourth-root scaling of the derivatives
        let p = VdcParams { l: 100.0, f: 1e-2, v_prime: 50.0, doublings: 0, ..Default::default() };
        assert!(matches!(run_vdc(&p), Err(LabError::Precondition(_))));
    }
}
