//! `ζ(s)` by Euler–Maclaurin summation.

use num_complex::Complex64;

use super::LfuncError;

// B_{2k} / (2k)!, k = 1..=15
const EM: [f64; 15] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
    854_513.0 / 20_560_831_566_912_160_000_000.0,
    -236_364_091.0 / 28_158_588_057_866_689_668_096_000_000.0,
    8_553_103.0 / 7_752_845_787_128_160_256_000_000_000.0,
    -23_749_461_029.0 / 164_306_372_036_046_627_133_440_000_000_000_000.0,
    8_615_841_276_005.0 / 429_180_235_093_148_470_165_016_396_800_000_000_000.0,
];

pub const MAX_T: f64 = 1e4;

/// `ζ(s)` for `s ≠ 1`, with the size of the last correction as error estimate.
pub fn zeta_with_error(s: Complex64) -> Result<(Complex64, f64), LfuncError> {
    if (s - 1.0).norm() < 1e-12 {
        return Err(LfuncError::Pole);
    }
    let n = (30.0 + s.norm() / 2.0).ceil() as u64;
    let nf = n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_s = (-s * nf.ln()).exp();
    sum += n_s * nf / (s - 1.0) + n_s * 0.5;
    // rising factorial s(s+1)…(s+2k−2) times N^{−s−2k+1}
    let mut rising = s;
    let mut pow = n_s / nf;
    let mut last = 0.0;
    for (k, c) in EM.iter().enumerate() {
        let term = rising * pow * *c;
        sum += term;
        last = term.norm();
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        pow /= nf * nf;
    }
    Ok((sum, last))
}

pub fn zeta(s: Complex64) -> Result<Complex64, LfuncError> {
    zeta_with_error(s).map(|(v, _)| v)
}

/// `ζ(1/2 + it)` to at least ten correct digits for `|t| <= 10⁴`.
pub fn zeta_critical(t: f64) -> Result<Complex64, LfuncError> {
    if !(t.abs() <= MAX_T) {
        return Err(LfuncError::AccuracyUnreachable(format!("|t| = {t} exceeds {MAX_T}")));
    }
    let (v, err) = zeta_with_error(Complex64::new(0.5, t))?;
    if err > 1e-11 {
        return Err(LfuncError::AccuracyUnreachable(format!("Euler–Maclaurin remainder {err:e}")));
    }
    Ok(v)
}
