//! WebAssembly bindings for the browser page in `www/`.
//!
//! Every operation returns a JSON string. The plain functions are usable
//! from native code and tests; the `wasm_bindgen` wrappers only convert
//! errors to JS exceptions.

use num_complex::Complex64;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use rslab_core::arith::build_tau_table;
use rslab_core::arith::sieve::divisor_count;
use rslab_core::exppair::{search_best_pair, ExponentPair};
use rslab_core::lfunc::zeta::{zeta_with_error, MAX_T};

pub const MAX_DEPTH: usize = 8;
pub const MAX_POINTS: usize = 2000;
pub const MAX_COEFFS: usize = 50_000;

/// Best pair reachable from `bases` (one `k,l` pair per line or `;`).
pub fn exponent_pair(bases: &str, depth: usize) -> Result<Value, String> {
    if depth > MAX_DEPTH {
        return Err(format!("depth {depth} above {MAX_DEPTH}"));
    }
    let bases = bases
        .split(['\n', ';'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(ExponentPair::parse)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    if bases.is_empty() {
        return Err("no base pair given".into());
    }
    let best = search_best_pair(&bases, depth).map_err(|e| e.to_string())?;
    serde_json::to_value(best.summary()).map_err(|e| e.to_string())
}

/// `ζ(1/2 + it)` on `points` equally spaced `t` in `[t_lo, t_hi]`.
pub fn zeta_profile(t_lo: f64, t_hi: f64, points: usize) -> Result<Value, String> {
    if !(t_lo < t_hi) || t_hi.abs().max(t_lo.abs()) > MAX_T {
        return Err(format!("need t_lo < t_hi within ±{MAX_T}"));
    }
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must lie in 2..={MAX_POINTS}"));
    }
    let mut t = Vec::with_capacity(points);
    let (mut re, mut im, mut abs) = (Vec::new(), Vec::new(), Vec::new());
    let mut worst: f64 = 0.0;
    for i in 0..points {
        let ti = t_lo + (t_hi - t_lo) * i as f64 / (points - 1) as f64;
        let (z, err) = zeta_with_error(Complex64::new(0.5, ti)).map_err(|e| e.to_string())?;
        worst = worst.max(err);
        t.push(ti);
        re.push(z.re);
        im.push(z.im);
        abs.push(z.norm());
    }
    Ok(json!({ "t": t, "re": re, "im": im, "abs": abs, "max_error": worst }))
}

/// Normalized coefficients `λ(n)`, the Deligne ratio `|λ(n)|/d(n)` and the
/// running mean `x^{-1} Σ_{n≤x} rs(n)` up to `n_max`.
pub fn coefficient_profile(n_max: usize) -> Result<Value, String> {
    if !(2..=MAX_COEFFS).contains(&n_max) {
        return Err(format!("n_max must lie in 2..={MAX_COEFFS}"));
    }
    let table = build_tau_table(n_max).map_err(|e| e.to_string())?;
    let mut lambda = Vec::with_capacity(n_max);
    let mut rs_mean = Vec::with_capacity(n_max);
    let mut prefix = 0.0;
    let mut max_ratio: f64 = 0.0;
    for n in 1..=n_max {
        let l = table.lambda(n);
        max_ratio = max_ratio.max(l.abs() / divisor_count(n as u64) as f64);
        prefix += table.rs(n);
        lambda.push(l);
        rs_mean.push(prefix / n as f64);
    }
    let head: Vec<String> = (1..=n_max.min(12)).map(|n| table.tau(n).to_string()).collect();
    Ok(json!({
        "n_max": n_max,
        "tau_head": head,
        "lambda": lambda,
        "rs_mean": rs_mean,
        "max_deligne_ratio": max_ratio,
    }))
}

fn to_js(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = exponentPair)]
pub fn exponent_pair_js(bases: &str, depth: usize) -> Result<String, JsError> {
    to_js(exponent_pair(bases, depth))
}

#[wasm_bindgen(js_name = zetaProfile)]
pub fn zeta_profile_js(t_lo: f64, t_hi: f64, points: usize) -> Result<String, JsError> {
    to_js(zeta_profile(t_lo, t_hi, points))
}

#[wasm_bindgen(js_name = coefficientProfile)]
pub fn coefficient_profile_js(n_max: usize) -> Result<String, JsError> {
    to_js(coefficient_profile(n_max))
}
