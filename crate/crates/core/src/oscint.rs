//! Oscillatory integrals `∫ w(ξ) e^{i h(ξ)} dξ`: a frequency-aware adaptive
//! quadrature oracle, the leading stationary-phase term, decay diagnostics,
//! and the perturbative critical point of `T y^β − A y + 3B y^{1/3}`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::bump::bump_centred;
use crate::fit::fit_loglog;
use crate::quad::{integrate_breakpoints, QuadError};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum OscError {
    #[error("no stationary point in [{0}, {1}]")]
    NoStationaryPoint(f64, f64),
    #[error("{0} stationary points in support")]
    MultipleStationaryPoints(usize),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("panel count would exceed {0}")]
    TooManyPanels(usize),
    #[error("Newton iteration did not converge")]
    NewtonFailed,
    #[error("domain violation: {0}")]
    Domain(String),
}

pub const MAX_PANELS: usize = 1 << 20;
const NODES_PER_PANEL: f64 = 15.0;
const MIN_NODES_PER_PERIOD: f64 = 8.0;
const SCAN_POINTS: usize = 1024;

/// Phase `h` with analytic derivatives `h′..h⁽⁵⁾` on a support interval.
#[derive(Clone)]
pub struct PhaseSpec {
    pub h: RealFn,
    /// `derivs[j-1] = h^{(j)}` for `j = 1..=5`.
    pub derivs: [RealFn; 5],
    pub support: (f64, f64),
    /// Size of `h`, so that `h^{(j)} ≍ Y / Z^j`.
    pub y: f64,
    /// Support length scale.
    pub z: f64,
}

impl std::fmt::Debug for PhaseSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PhaseSpec")
            .field("support", &self.support)
            .field("y", &self.y)
            .field("z", &self.z)
            .finish_non_exhaustive()
    }
}

fn arc<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> RealFn {
    Arc::new(f)
}

impl PhaseSpec {
    pub fn new(h: RealFn, derivs: [RealFn; 5], support: (f64, f64), y: f64, z: f64) -> Self {
        PhaseSpec { h, derivs, support, y, z }
    }

    pub fn h(&self, x: f64) -> f64 {
        (self.h)(x)
    }

    /// `h^{(j)}(x)` for `0 <= j <= 5`.
    pub fn d(&self, j: usize, x: f64) -> f64 {
        if j == 0 {
            (self.h)(x)
        } else {
            (self.derivs[j - 1])(x)
        }
    }

    /// `c · h`, with `Y` scaled accordingly.
    pub fn scaled(&self, c: f64) -> PhaseSpec {
        let h = self.h.clone();
        let derivs = self.derivs.clone().map(|d| arc(move |x| c * d(x)));
        PhaseSpec { h: arc(move |x| c * h(x)), derivs, support: self.support, y: self.y * c.abs(), z: self.z }
    }

    pub fn with_support(mut self, a: f64, b: f64) -> Self {
        self.support = (a, b);
        self
    }

    /// Polynomial phase `Σ c_j (ξ − ξ_c)^j` for `j < coeffs.len() <= 6`.
    pub fn polynomial(center: f64, coeffs: Vec<f64>, support: (f64, f64), y: f64, z: f64) -> Self {
        assert!(coeffs.len() <= 6);
        let coeffs = Arc::new(coeffs);
        let deriv = |j: usize| {
            let c = coeffs.clone();
            arc(move |x| {
                let v = x - center;
                let mut s = 0.0;
                for (k, ck) in c.iter().enumerate().skip(j) {
                    let falling: f64 = ((k - j + 1)..=k).map(|m| m as f64).product();
                    s += ck * falling * v.powi((k - j) as i32);
                }
                s
            })
        };
        PhaseSpec {
            h: deriv(0),
            derivs: [deriv(1), deriv(2), deriv(3), deriv(4), deriv(5)],
            support,
            y,
            z,
        }
    }

    pub fn zero(support: (f64, f64)) -> Self {
        Self::polynomial(0.0, vec![0.0], support, 0.0, support.1 - support.0)
    }

    /// `h(ξ) = Y ξ / Z`.
    pub fn linear(y: f64, support: (f64, f64)) -> Self {
        let z = support.1 - support.0;
        Self::polynomial(0.0, vec![0.0, y / z], support, y, z)
    }

    /// First dual-side phase `4ξT log ξ + ξT log(T⁴/((2πe)⁴ nX))`, critical at `2π(nX)^{1/4}/T`.
    pub fn dual_t_phase(t: f64, n: f64, x: f64) -> Self {
        let c = (t.powi(4) / ((TAU * std::f64::consts::E).powi(4) * n * x)).ln();
        let xi0 = TAU * (n * x).powf(0.25) / t;
        PhaseSpec {
            h: arc(move |xi| 4.0 * xi * t * xi.ln() + xi * t * c),
            derivs: [
                arc(move |xi| 4.0 * t * xi.ln() + 4.0 * t + t * c),
                arc(move |xi| 4.0 * t / xi),
                arc(move |xi| -4.0 * t / (xi * xi)),
                arc(move |xi| 8.0 * t / xi.powi(3)),
                arc(move |xi| -24.0 * t / xi.powi(4)),
            ],
            support: (0.5 * xi0, 2.0 * xi0),
            y: t * xi0,
            z: xi0,
        }
    }

    /// Voronoi-side phase `−2πYξ + s·6π(zNξ)^{1/3}`, `s = ±1`.
    pub fn voronoi_phase(y: f64, zn: f64, sign: f64) -> Self {
        let a = sign * 6.0 * PI * zn.cbrt();
        let xi0 = zn.sqrt() / (sign * y).powf(1.5);
        PhaseSpec {
            h: arc(move |xi| -TAU * y * xi + a * xi.cbrt()),
            derivs: [
                arc(move |xi| -TAU * y + a / 3.0 * xi.powf(-2.0 / 3.0)),
                arc(move |xi| -2.0 * a / 9.0 * xi.powf(-5.0 / 3.0)),
                arc(move |xi| 10.0 * a / 27.0 * xi.powf(-8.0 / 3.0)),
                arc(move |xi| -80.0 * a / 81.0 * xi.powf(-11.0 / 3.0)),
                arc(move |xi| 880.0 * a / 243.0 * xi.powf(-14.0 / 3.0)),
            ],
            support: (0.5 * xi0, 2.0 * xi0),
            y: (TAU * y * xi0).abs(),
            z: xi0,
        }
    }

    /// `T y^β − A y + 3B y^{1/3}`.
    pub fn perturbed_power_phase(a: f64, b: f64, t: f64, beta: f64, support: (f64, f64)) -> Self {
        let pw = move |e: f64, k: usize| -> f64 {
            // falling factorial e (e−1) … (e−k+1)
            (0..k).map(|i| e - i as f64).product()
        };
        let third = 1.0 / 3.0;
        let d = move |k: usize| {
            arc(move |y: f64| {
                let mut v = t * pw(beta, k) * y.powf(beta - k as f64) + 3.0 * b * pw(third, k) * y.powf(third - k as f64);
                if k == 0 {
                    v -= a * y;
                } else if k == 1 {
                    v -= a;
                }
                v
            })
        };
        PhaseSpec {
            h: d(0),
            derivs: [d(1), d(2), d(3), d(4), d(5)],
            support,
            y: t,
            z: 1.0,
        }
    }

    /// Largest relative gap between each supplied derivative and a
    /// Richardson-extrapolated central difference of the one below, over
    /// `samples` interior points. The gap is measured against the largest
    /// sampled magnitude of that derivative.
    pub fn derivative_consistency(&self, samples: usize) -> f64 {
        let (a, b) = self.support;
        let pts: Vec<f64> = (1..=samples).map(|i| a + (b - a) * i as f64 / (samples + 1) as f64).collect();
        let mut worst: f64 = 0.0;
        for j in 1..=5 {
            let scale = pts.iter().map(|&x| self.d(j, x).abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
            for &x in &pts {
                let step = 1e-3 * (b - a);
                let cd = |s: f64| (self.d(j - 1, x + s) - self.d(j - 1, x - s)) / (2.0 * s);
                let fd = (4.0 * cd(step / 2.0) - cd(step)) / 3.0;
                worst = worst.max((fd - self.d(j, x)).abs() / scale);
            }
        }
        worst
    }
}

/// Smooth weight with an inertness parameter.
#[derive(Clone)]
pub struct InertWeight {
    pub w: RealFn,
    pub support: (f64, f64),
    pub x: f64,
}

impl std::fmt::Debug for InertWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InertWeight").field("support", &self.support).field("x", &self.x).finish_non_exhaustive()
    }
}

impl InertWeight {
    pub fn new(w: RealFn, support: (f64, f64), x: f64) -> Self {
        InertWeight { w, support, x }
    }

    pub fn eval(&self, xi: f64) -> f64 {
        if xi <= self.support.0 || xi >= self.support.1 {
            0.0
        } else {
            (self.w)(xi)
        }
    }

    /// `exp(−1/(1−s²))`, `s = (ξ − c)/r`, on `(c − r, c + r)`; inertness `X = c / r`.
    pub fn bump(center: f64, radius: f64) -> Self {
        InertWeight {
            w: arc(move |xi| bump_centred((xi - center) / radius)),
            support: (center - radius, center + radius),
            x: center / radius,
        }
    }

    /// 1 on `[a + r, b − r]`, smoothly ramped to 0 at `a` and `b`.
    pub fn smooth_box(a: f64, b: f64, ramp: f64) -> Self {
        InertWeight {
            w: arc(move |xi| crate::bump::smooth_step((xi - a) / ramp) * crate::bump::smooth_step((b - xi) / ramp)),
            support: (a, b),
            x: b / ramp,
        }
    }

    /// `c · w`.
    pub fn scaled(&self, c: f64) -> Self {
        let w = self.w.clone();
        InertWeight { w: arc(move |x| c * w(x)), support: self.support, x: self.x }
    }

    /// Measured `max |ξ^j w^{(j)}(ξ)| / X^j` over `j <= 4` at `samples` interior
    /// points, derivatives by central differences.
    pub fn inertness_constant(&self, samples: usize) -> f64 {
        let (a, b) = self.support;
        let h = (b - a) * 1e-3;
        let mut worst: f64 = 0.0;
        for i in 1..=samples {
            let x = a + (b - a) * i as f64 / (samples + 1) as f64;
            let f = |k: f64| self.eval(x + k * h);
            let derivs = [
                f(0.0),
                (f(1.0) - f(-1.0)) / (2.0 * h),
                (f(1.0) - 2.0 * f(0.0) + f(-1.0)) / (h * h),
                (f(2.0) - 2.0 * f(1.0) + 2.0 * f(-1.0) - f(-2.0)) / (2.0 * h.powi(3)),
                (f(2.0) - 4.0 * f(1.0) + 6.0 * f(0.0) - 4.0 * f(-1.0) + f(-2.0)) / h.powi(4),
            ];
            for (j, d) in derivs.iter().enumerate() {
                worst = worst.max((x.powi(j as i32) * d).abs() / self.x.powi(j as i32));
            }
        }
        worst
    }
}

/// Panel breakpoints covering the overlap of weight and phase supports with
/// at most `NODES_PER_PANEL / MIN_NODES_PER_PERIOD` periods per panel.
fn oscillation_breakpoints(p: &PhaseSpec, a: f64, b: f64) -> Result<Vec<f64>, OscError> {
    let min_panels = 16.0;
    let max_width = (b - a) / min_panels;
    let periods_per_panel = NODES_PER_PANEL / MIN_NODES_PER_PERIOD;
    let mut breaks = vec![a];
    let mut x = a;
    while x < b {
        let freq = |u: f64| p.d(1, u).abs();
        let mut width = max_width;
        // shrink until the panel holds at most `periods_per_panel` periods at both ends
        for _ in 0..4 {
            let f = freq(x).max(freq((x + width).min(b)));
            let allowed = periods_per_panel * TAU / f.max(f64::MIN_POSITIVE);
            if allowed >= width {
                break;
            }
            width = allowed;
        }
        x = (x + width).min(b);
        if b - x < 1e-12 * (b - a) {
            x = b;
        }
        breaks.push(x);
        if breaks.len() > MAX_PANELS {
            return Err(OscError::TooManyPanels(MAX_PANELS));
        }
    }
    Ok(breaks)
}

/// `∫ w e^{ih}` with absolute error target `abs_tol`.
pub fn quad_oscillatory_tol(w: &InertWeight, p: &PhaseSpec, abs_tol: f64) -> Result<Complex64, OscError> {
    let a = w.support.0.max(p.support.0);
    let b = w.support.1.min(p.support.1);
    if b <= a {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let breaks = oscillation_breakpoints(p, a, b)?;
    let f = |x: f64| {
        let wx = w.eval(x);
        if wx == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(wx, p.h(x))
        }
    };
    Ok(integrate_breakpoints(&f, &breaks, abs_tol, MAX_PANELS)?)
}

/// `∫ w e^{ih}` to absolute accuracy `1e-10 ·` support length.
pub fn quad_oscillatory(w: &InertWeight, p: &PhaseSpec) -> Result<Complex64, OscError> {
    let len = w.support.1 - w.support.0;
    quad_oscillatory_tol(w, p, 1e-10 * len)
}

/// The unique simple zero of `h′` in the support.
pub fn stationary_point(p: &PhaseSpec) -> Result<f64, OscError> {
    let (a, b) = p.support;
    let xs: Vec<f64> = (0..=SCAN_POINTS).map(|i| a + (b - a) * i as f64 / SCAN_POINTS as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| p.d(1, x)).collect();
    let mut brackets = Vec::new();
    for i in 0..SCAN_POINTS {
        if vals[i] == 0.0 {
            brackets.push((xs[i], xs[i]));
        } else if vals[i] * vals[i + 1] < 0.0 {
            brackets.push((xs[i], xs[i + 1]));
        }
    }
    if vals[SCAN_POINTS] == 0.0 {
        brackets.push((b, b));
    }
    match brackets.len() {
        0 => Err(OscError::NoStationaryPoint(a, b)),
        1 => {
            let (mut lo, mut hi) = brackets[0];
            if lo == hi {
                return Ok(lo);
            }
            let flo = p.d(1, lo).signum();
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if p.d(1, mid).signum() == flo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let mut x = 0.5 * (lo + hi);
            for _ in 0..3 {
                let step = p.d(1, x) / p.d(2, x);
                let nx = x - step;
                if !(nx.is_finite() && nx >= lo - (hi - lo) && nx <= hi + (hi - lo)) {
                    break;
                }
                x = nx;
                if step.abs() <= 1e-14 * x.abs() {
                    break;
                }
            }
            Ok(x)
        }
        n => Err(OscError::MultipleStationaryPoints(n)),
    }
}

/// Leading stationary-phase term and its ingredients.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct StationaryPhase {
    pub xi0: f64,
    pub h_xi0: f64,
    pub second_derivative: f64,
    pub value: Complex64,
}

/// `√(2π) e^{i(h(ξ₀) + π/4 sgn h″(ξ₀))} w(ξ₀) / √|h″(ξ₀)|`.
pub fn stationary_phase_eval(w: &InertWeight, p: &PhaseSpec) -> Result<StationaryPhase, OscError> {
    let xi0 = stationary_point(p)?;
    let h0 = p.h(xi0);
    let h2 = p.d(2, xi0);
    if h2 == 0.0 {
        return Err(OscError::Domain("degenerate stationary point".into()));
    }
    let phase = h0 + PI / 4.0 * h2.signum();
    let modulus = TAU.sqrt() * w.eval(xi0) / h2.abs().sqrt();
    Ok(StationaryPhase { xi0, h_xi0: h0, second_derivative: h2, value: Complex64::from_polar(modulus, phase) })
}

/// Log-log decay of `|∫ w e^{i 2^j h}|` over `j = 0..=doublings`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DecayFit {
    pub ys: Vec<f64>,
    pub magnitudes: Vec<f64>,
    /// Fitted exponent; `-inf` if the integral drops below the quadrature
    /// floor before two samples are available.
    pub slope: f64,
    pub residual: f64,
}

pub fn decay_diagnostic(w: &InertWeight, p: &PhaseSpec, doublings: usize) -> Result<DecayFit, OscError> {
    let len = w.support.1 - w.support.0;
    let floor = 1e-12 * len;
    let mut ys = Vec::new();
    let mut mags = Vec::new();
    for j in 0..=doublings {
        let c = 2f64.powi(j as i32);
        let v = quad_oscillatory_tol(w, &p.scaled(c), 1e-14 * len)?;
        ys.push(p.y.max(1.0) * c);
        mags.push(v.norm());
    }
    let kept: Vec<usize> = (0..ys.len()).filter(|&i| mags[i] > floor).collect();
    let (slope, residual) = if kept.len() >= 2 {
        let fit = fit_loglog(
            &kept.iter().map(|&i| ys[i]).collect::<Vec<_>>(),
            &kept.iter().map(|&i| mags[i]).collect::<Vec<_>>(),
        );
        (fit.slope, fit.residual)
    } else {
        (f64::NEG_INFINITY, 0.0)
    };
    Ok(DecayFit { ys, magnitudes: mags, slope, residual })
}

/// Series and exact critical point of `T y^β − A y + 3B y^{1/3}` near `y₀ = (A/(Tβ))^{1/(β−1)}`.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct PerturbativeRoot {
    pub y0: f64,
    pub y_series: f64,
    pub y_newton: f64,
    pub phase_series: f64,
    pub phase_exact: f64,
}

pub fn perturbative_root_h7(a: f64, b: f64, t: f64, beta: f64) -> Result<PerturbativeRoot, OscError> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(OscError::Domain(format!("β = {beta} outside (0, 1)")));
    }
    if !(a > 0.0 && t > 0.0) {
        return Err(OscError::Domain("A and T must be positive".into()));
    }
    if (b / a).abs() > 0.05 {
        return Err(OscError::Domain(format!("|B/A| = {} exceeds 0.05", (b / a).abs())));
    }
    let y0 = (a / (t * beta)).powf(1.0 / (beta - 1.0));
    let c = b / a * y0.powf(-2.0 / 3.0);
    // y = y0 (1 + u), u = u1 c + u2 c² + u3 c³
    let a1 = beta - 1.0;
    let a2 = (beta - 1.0) * (beta - 2.0) / 2.0;
    let a3 = (beta - 1.0) * (beta - 2.0) * (beta - 3.0) / 6.0;
    let u1 = 1.0 / (1.0 - beta);
    let u2 = (2.0 - 3.0 * beta) / (6.0 * (1.0 - beta).powi(2));
    let u3 = -(2.0 * a2 * u1 * u2 + a3 * u1.powi(3) - 2.0 / 3.0 * u2 + 5.0 / 9.0 * u1 * u1) / a1;
    let y_series = y0 * (1.0 + u1 * c + u2 * c * c + u3 * c.powi(3));

    let hp = |y: f64| t * beta * y.powf(beta - 1.0) - a + b * y.powf(-2.0 / 3.0);
    let hpp = |y: f64| beta * (beta - 1.0) * t * y.powf(beta - 2.0) - 2.0 / 3.0 * b * y.powf(-5.0 / 3.0);
    let mut y = y_series;
    let mut converged = false;
    for _ in 0..100 {
        let step = hp(y) / hpp(y);
        y -= step;
        if !(y.is_finite() && y > 0.0) {
            return Err(OscError::NewtonFailed);
        }
        if step.abs() <= 4.0 * f64::EPSILON * y {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(OscError::NewtonFailed);
    }
    let h = |y: f64| t * y.powf(beta) - a * y + 3.0 * b * y.cbrt();
    let phase_series = (1.0 / beta - 1.0) * a * y0 + 3.0 * y0.cbrt() * b
        + b * b / (2.0 * (1.0 - beta) * y0.cbrt() * a)
        - beta * b.powi(3) / (6.0 * (beta - 1.0).powi(2) * y0 * a * a);
    Ok(PerturbativeRoot { y0, y_series, y_newton: y, phase_series, phase_exact: h(y) })
}

/// One member of the randomized stationary-phase family used to test the
/// leading-order term: bump weight of inertness `X ∈ [2, 8]`, cubic phase
/// with `|h″| = κ Y / Z²`, `κ ∈ [1, 3]`, critical point at `|s| <= 0.3` in
/// the weight's normalized coordinate, and `Y / X²` log-uniform in `[lo, hi]`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct FamilyMember {
    pub x: f64,
    pub y: f64,
    pub kappa: f64,
    pub sign: f64,
    pub s0: f64,
    pub cubic: f64,
}

impl FamilyMember {
    pub fn sample<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Self {
        let x = rng.gen_range(2.0..8.0);
        let ratio = (rng.gen_range(lo.ln()..hi.ln())).exp();
        FamilyMember {
            x,
            y: ratio * x * x,
            kappa: rng.gen_range(1.0..3.0),
            sign: if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
            s0: rng.gen_range(-0.3..0.3),
            cubic: rng.gen_range(-1.0..1.0),
        }
    }

    /// Weight and phase with `Z = 1` and weight centred at `3/2`.
    pub fn build(&self) -> (InertWeight, PhaseSpec) {
        let z = 1.0;
        let center = 1.5 * z;
        let radius = z / self.x;
        let w = InertWeight { x: self.x, ..InertWeight::bump(center, radius) };
        let xi0 = center + self.s0 * radius;
        let s = self.sign * self.y;
        let p = PhaseSpec::polynomial(
            xi0,
            vec![0.0, 0.0, s * self.kappa / 2.0, s * self.cubic / 6.0],
            (center - radius, center + radius),
            self.y,
            z,
        );
        (w, p)
    }

    pub fn ratio(&self) -> f64 {
        self.y / (self.x * self.x)
    }
}
