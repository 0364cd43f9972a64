//! Smooth windows bracketing the indicator of `(1/2, 1]`.

use serde::{Deserialize, Serialize};

use crate::bump::smooth_step;
use crate::quad::integrate_real;

use super::LabError;

/// Default `δ` in `Y = X^{3/5 − δ}`.
pub const DEFAULT_DELTA: f64 = 1.0 / 560.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WindowKind {
    /// 1 on `[1/2, 1]`, supported in `[1/2 − Y/X, 1 + Y/X]`.
    Outer,
    /// 1 on `[1/2 + Y/X, 1 − Y/X]`, supported in `[1/2, 1]`.
    Inner,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothWindow {
    pub kind: WindowKind,
    pub x: f64,
    pub y: f64,
}

impl SmoothWindow {
    pub fn new(kind: WindowKind, x: f64, y: f64) -> Result<Self, LabError> {
        if !(x > 0.0 && y > 0.0 && y <= x / 5.0) {
            return Err(LabError::Config(format!("window needs 0 < Y <= X/5, got X = {x}, Y = {y}")));
        }
        Ok(SmoothWindow { kind, x, y })
    }

    /// `Y = X^{3/5 − δ}`.
    pub fn with_delta(kind: WindowKind, x: f64, delta: f64) -> Result<Self, LabError> {
        Self::new(kind, x, x.powf(0.6 - delta))
    }

    pub fn ramp(&self) -> f64 {
        self.y / self.x
    }

    pub fn support(&self) -> (f64, f64) {
        let r = self.ramp();
        match self.kind {
            WindowKind::Outer => (0.5 - r, 1.0 + r),
            WindowKind::Inner => (0.5, 1.0),
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        let r = self.ramp();
        let (a, b) = self.support();
        smooth_step((u - a) / r) * smooth_step((b - u) / r)
    }

    /// `∫ W(u) du`, the Mellin transform at 1; equals `1/2 + O(Y/X)`.
    pub fn mellin_at_one(&self) -> f64 {
        let (a, b) = self.support();
        let r = self.ramp();
        let ramps = [(a, a + r), (a + r, b - r), (b - r, b)];
        ramps
            .iter()
            .map(|&(lo, hi)| integrate_real(&|u| self.eval(u), lo, hi, 8, 1e-14).unwrap_or(f64::NAN))
            .sum()
    }

    /// `max |W^{(k)}| / (X/Y)^k` for `k = 1, 2`, by central differences on the ramps.
    pub fn derivative_ratio(&self, samples: usize) -> [f64; 2] {
        let r = self.ramp();
        let h = r * 1e-3;
        let (a, _) = self.support();
        let mut worst = [0.0f64; 2];
        for i in 1..samples {
            let u = a + r * i as f64 / samples as f64;
            let (m, c, p) = (self.eval(u - h), self.eval(u), self.eval(u + h));
            worst[0] = worst[0].max(((p - m) / (2.0 * h)).abs() * r);
            worst[1] = worst[1].max(((p - 2.0 * c + m) / (h * h)).abs() * r * r);
        }
        worst
    }
}

/// Integer sample points `n` at which `W₂(n/X) ≤ 1_{X/2 < n ≤ X} ≤ W₁(n/X)` fails.
pub fn sandwich_violations(inner: &SmoothWindow, outer: &SmoothWindow) -> Vec<u64> {
    let x = outer.x;
    let hi = ((1.0 + outer.ramp()) * x).ceil() as u64 + 1;
    (1..=hi)
        .filter(|&n| {
            let u = n as f64 / x;
            let ind = if 2.0 * n as f64 > x && n as f64 <= x { 1.0 } else { 0.0 };
            let (w2, w1) = (inner.eval(u), outer.eval(u));
            !(0.0..=1.0).contains(&w1) || !(0.0..=1.0).contains(&w2) || w2 > ind || ind > w1
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_regions_and_supports() {
        let x = 1e4;
        let w1 = SmoothWindow::with_delta(WindowKind::Outer, x, DEFAULT_DELTA).unwrap();
        let w2 = SmoothWindow::with_delta(WindowKind::Inner, x, DEFAULT_DELTA).unwrap();
        let r = w1.ramp();
        for u in [0.5, 0.6, 0.77, 1.0] {
            assert_eq!(w1.eval(u), 1.0);
        }
        assert_eq!(w1.eval(0.5 - r), 0.0);
        assert_eq!(w1.eval(1.0 + r), 0.0);
        assert_eq!(w2.eval(0.5), 0.0);
        assert_eq!(w2.eval(1.0), 0.0);
        assert_eq!(w2.eval(0.5 + r), 1.0);
        assert_eq!(w2.eval(1.0 - r), 1.0);
        assert!((w1.mellin_at_one() - 0.5 - r).abs() < 1e-10);
        assert!((w2.mellin_at_one() - 0.5 + r).abs() < 1e-10);
    }

    #[test]
    fn sandwich_on_integers() {
        for x in [100.0, 1e3, 1e4] {
            let w1 = SmoothWindow::new(WindowKind::Outer, x, x.powf(0.6)).unwrap();
            let w2 = SmoothWindow::new(WindowKind::Inner, x, x.powf(0.6)).unwrap();
            assert!(sandwich_violations(&w2, &w1).is_empty());
        }
    }

    #[test]
    fn derivative_ratio_scale_free() {
        let a = SmoothWindow::new(WindowKind::Inner, 1e3, 100.0).unwrap().derivative_ratio(200);
        let b = SmoothWindow::new(WindowKind::Inner, 1e6, 1e3).unwrap().derivative_ratio(200);
        assert!(a[0] < 5.0 && a[1] < 50.0);
        assert!((a[0] - b[0]).abs() < 1e-3 * a[0] && (a[1] - b[1]).abs() < 1e-2 * a[1]);
    }

    #[test]
    fn rejects_wide_ramp() {
        assert!(SmoothWindow::new(WindowKind::Outer, 10.0, 3.0).is_err());
    }
}
