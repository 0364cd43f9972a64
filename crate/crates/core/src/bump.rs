//! The `exp(−1/(x(1−x)))` bump on `(0, 1)` and its normalized integral.

use std::sync::OnceLock;

/// `exp(−1/(x(1−x)))` on `(0, 1)`, zero elsewhere.
pub fn bump01(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        (-1.0 / (x * (1.0 - x))).exp()
    }
}

/// `exp(−1/(1−s²))` on `(−1, 1)`, zero elsewhere.
pub fn bump_centred(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

const CELLS: usize = 1024;

// 10-point Gauss–Legendre on [-1, 1], positive half
const GL_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

fn gauss10(a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..5 {
        s += GL_W[i] * (bump01(c - h * GL_X[i]) + bump01(c + h * GL_X[i]));
    }
    s * h
}

struct StepTable {
    cumulative: Vec<f64>,
    total: f64,
}

fn table() -> &'static StepTable {
    static TABLE: OnceLock<StepTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut cumulative = Vec::with_capacity(CELLS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for i in 0..CELLS {
            acc += gauss10(i as f64 / CELLS as f64, (i + 1) as f64 / CELLS as f64);
            cumulative.push(acc);
        }
        StepTable { cumulative, total: acc }
    })
}

/// `∫_0^1 bump01`.
pub fn bump01_integral() -> f64 {
    table().total
}

/// Smooth monotone step: 0 for `x <= 0`, 1 for `x >= 1`, the normalized
/// integral of [`bump01`] in between.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let t = table();
    let pos = x * CELLS as f64;
    let i = (pos.floor() as usize).min(CELLS - 1);
    let left = i as f64 / CELLS as f64;
    let partial = t.cumulative[i] + gauss10(left, x);
    (partial / t.total).clamp(0.0, 1.0)
}

/// Bump on `(a, b)`, rescaled from [`bump01`].
pub fn bump_on(x: f64, a: f64, b: f64) -> f64 {
    bump01((x - a) / (b - a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_shape() {
        assert_eq!(smooth_step(-0.1), 0.0);
        assert_eq!(smooth_step(1.5), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-13);
        // antisymmetry about 1/2
        for x in [0.1, 0.27, 0.43] {
            assert!((smooth_step(x) + smooth_step(1.0 - x) - 1.0).abs() < 1e-13);
        }
        let mut prev = 0.0;
        for i in 0..=1000 {
            let v = smooth_step(i as f64 / 1000.0);
            assert!(v >= prev);
            prev = v;
        }
        // ∫_0^1 exp(−1/(x(1−x))) dx
        assert!((bump01_integral() - 0.007_029_858_406_609_656).abs() < 1e-12, "{}", bump01_integral());
    }
}
