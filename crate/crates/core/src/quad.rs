//! Gauss–Kronrod (7, 15) quadrature on panels, with a global adaptive driver.

use num_complex::Complex64;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One panel: Kronrod value and a QUADPACK-style error estimate.
pub fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut vals = [Complex64::new(0.0, 0.0); 15];
    vals[7] = fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        vals[j] = f1;
        vals[14 - j] = f2;
        k += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = k * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((vals[j] - mean).norm() + (vals[14 - j] - mean).norm());
    }
    resasc *= h.abs();
    let k = k * h;
    let raw = ((k - g * h).norm()).max(0.0);
    let err = if resasc > 0.0 && raw > 0.0 {
        resasc * (200.0 * raw / resasc).powf(1.5).min(1.0)
    } else {
        raw
    };
    (k, err.max(50.0 * f64::EPSILON * k.norm()))
}

/// Kronrod 15-point values of several integrands sharing their nodes, paired
/// with the embedded 7-point Gauss values.
pub fn gk15_array<const K: usize, F: FnMut(f64) -> [Complex64; K]>(
    mut f: F,
    a: f64,
    b: f64,
) -> ([Complex64; K], [Complex64; K]) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let zero = Complex64::new(0.0, 0.0);
    let mut kron = [zero; K];
    let mut gauss = [zero; K];
    let mut add = |x: f64, wk: f64, wg: f64| {
        for ((k, g), v) in kron.iter_mut().zip(gauss.iter_mut()).zip(f(x)) {
            *k += v * (wk * h);
            *g += v * (wg * h);
        }
    };
    add(c, WGK[7], WG[3]);
    for j in 0..7 {
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        add(c - h * XGK[j], WGK[j], wg);
        add(c + h * XGK[j], WGK[j], wg);
    }
    (kron, gauss)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("adaptive quadrature did not reach {tol:e} within {panels} panels (estimate {estimate:e})")]
pub struct QuadError {
    pub tol: f64,
    pub panels: usize,
    pub estimate: f64,
}

struct Panel {
    err: f64,
    a: f64,
    b: f64,
    value: Complex64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Global adaptive integration over the given initial breakpoints, refining
/// the worst panel until the summed error estimate is below `abs_tol`.
pub fn integrate_breakpoints<F: Fn(f64) -> Complex64>(
    f: &F,
    breaks: &[f64],
    abs_tol: f64,
    max_panels: usize,
) -> Result<Complex64, QuadError> {
    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let (v, e) = gk15(f, w[0], w[1]);
        total += v;
        err += e;
        heap.push(Panel { err: e, a: w[0], b: w[1], value: v });
    }
    while err > abs_tol || err.is_nan() {
        if heap.len() >= max_panels {
            return Err(QuadError { tol: abs_tol, panels: heap.len(), estimate: err });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel cannot be split further in floating point
            return Err(QuadError { tol: abs_tol, panels: heap.len() + 1, estimate: err });
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        heap.push(Panel { err: e1, a: worst.a, b: mid, value: v1 });
        heap.push(Panel { err: e2, a: mid, b: worst.b, value: v2 });
        if err <= abs_tol {
            // the running estimate may have lost a large term to cancellation
            err = heap.iter().map(|p| p.err).sum();
        }
    }
    // re-sum to shed accumulated cancellation in the running total
    Ok(heap.iter().map(|p| p.value).sum())
}

/// `∫_a^b f` to absolute tolerance, starting from `n0` equal panels.
pub fn integrate<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, n0: usize, abs_tol: f64) -> Result<Complex64, QuadError> {
    let n0 = n0.max(1);
    let breaks: Vec<f64> = (0..=n0).map(|i| a + (b - a) * i as f64 / n0 as f64).collect();
    integrate_breakpoints(f, &breaks, abs_tol, 1 << 20)
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n0: usize, abs_tol: f64) -> Result<f64, QuadError> {
    integrate(&|x| Complex64::new(f(x), 0.0), a, b, n0, abs_tol).map(|z| z.re)
}
