//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p hardy-lab --test acceptance`. The process fails when a
//! criterion fails, except for the clauses listed in [`KNOWN_UNATTAINABLE`], which are
//! still evaluated and printed as FAIL.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use hardy_lab::analysis::{model_select, schatten_exponent, DecayModel, ModelRanking, Series};
use hardy_lab::bounds::{
    blaschke_upper_curve, kernel_lower_bound, kernel_lower_curve, CurvePoint, DEFAULT_WINDOW_LEVELS,
};
use hardy_lab::disk::{BoundaryAngle, DiskPoint};
use hardy_lab::experiment::{contacts_match, sup_off_contacts};
use hardy_lab::hardy::{approx_numbers, build_matrix, carleson_function, singular_values, Precision};
use hardy_lab::suite::{claim_suite, mobius_suite, newman_suite, DEFAULT_CONTACT_WINDOW, DEFAULT_SEED};
use hardy_lab::symbols::{
    contact_set, cusp, cusp_phi0, holder_exponent, norm_bound, regularity_check, Constant, Cusp, Dilation,
    HolderModel, Identity, Lens, ScPolygon, ShapiroTaylor, Spread, Symbol, CONTACT_TOL,
};

/// Criterion clauses that cannot hold for the cusp map at the stated sample point.
///
/// 2b: (1 − φ(r))·log(1/(1 − r))·(2/π) equals L/(L + log 4 + π/2 + o(1)) with
/// L = log(1/(1 − r)); at 1 − r = 1e−6 this is 0.824, and the band [0.95, 1.05] is only
/// reached once 1 − r is below about 5e−25.
const KNOWN_UNATTAINABLE: &[&str] = &["2b"];

const POINT_TOL: f64 = 1e-10;
const RADIAL_LIMIT_GAP: f64 = 1e-8;
const LOCAL_TOL: f64 = 1e-10;
const LOCAL_BAND: (f64, f64) = (0.95, 1.05);
const LOCAL_GAP: f64 = 1e-6;
const DILATION_TOL: f64 = 1e-12;
const CONSTANT_TOL: f64 = 1e-6;
const CONSTANT_TAIL: f64 = 1e-12;
const GALERKIN_SIZE: usize = 64;
const LENS_WINDOW: (usize, usize) = (10, 60);
const LENS_R2: f64 = 0.99;
const LENS_RESIDUAL_FACTOR: f64 = 0.5;
const CUSP_N_MAX: usize = 100;
const BOUND_CURVE_N_MAX: usize = 60;
const UPPER_LEVELS: u32 = 12;
const POLYGON_WINDOW: (usize, usize) = (10, 50);
const HOLDER_TOL: f64 = 0.05;
const MOBIUS_CASES: usize = 10_000;
const CLOSED_FORM_TOL: f64 = 1e-12;
const NORM_SLACK: f64 = 1e-12;
const SPREAD_GRID: usize = 4096;
const SPREAD_EXCLUSION: f64 = 0.1;
const SPREAD_MARGIN: f64 = 1e-4;
const SCHATTEN_RANGE: (f64, f64) = (0.67, 2.67);
const RATIO_LEVELS: std::ops::RangeInclusive<u32> = 4..=40;
const RATIO_SPREAD: f64 = 10.0;
const CARLESON_FACTOR: f64 = 1.1;
const CARLESON_GRID_T: usize = 4096;
const CARLESON_GRID_XI: usize = 256;

struct Outcome {
    label: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(label: &'static str, passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        label,
        passed,
        detail: detail.into(),
    }
}

fn ranking_text(r: &ModelRanking) -> String {
    r.fits
        .iter()
        .map(|f| format!("{} {:.3e}", f.model, f.residual))
        .collect::<Vec<_>>()
        .join(", ")
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn criterion_1() -> Vec<Outcome> {
    // exact points: a rounded e^{iπ/2} lands 1e-16 from the square-root branch point at i
    let one = c(1.0, 0.0);
    let cases = [
        (one, c(1.0, 0.0), c(0.0, 0.0)),
        (-one, c(0.0, 0.0), c(1.0, 0.0)),
        (c(0.0, 1.0), c(0.5, 0.5), c(0.0, -1.0)),
        (c(0.0, -1.0), c(0.5, -0.5), c(0.0, 1.0)),
    ];
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    for (z, phi_expected, phi0_expected) in cases {
        let (mut phi, mut phi0) = (cusp(z).unwrap(), cusp_phi0(z).unwrap());
        if !(phi.is_finite() && phi0.is_finite()) {
            let inner = z * (1.0 - RADIAL_LIMIT_GAP);
            (phi, phi0) = (cusp(inner).unwrap(), cusp_phi0(inner).unwrap());
            notes.push(format!("radial limit at {z}"));
        }
        worst = worst.max((phi - phi_expected).norm()).max((phi0 - phi0_expected).norm());
    }
    vec![outcome(
        "1",
        worst < POINT_TOL,
        format!("φ and φ₀ at ±1, ±i: max error {worst:.2e} (tol {POINT_TOL:e}){}", notes.join(", ")),
    )]
}

fn criterion_2() -> Vec<Outcome> {
    let mut worst: f64 = 0.0;
    let radii: Vec<f64> = (0..10).map(|k| k as f64 / 10.0).chain([0.99]).collect();
    for &r in &radii {
        let gamma = FRAC_PI_4 - r.atan();
        let expected = (0.5 * gamma).tan();
        let got = cusp_phi0(c(r, 0.0)).unwrap();
        worst = worst.max((got - c(expected, 0.0)).norm());
    }
    let gap = Cusp.radial_gap(LOCAL_GAP);
    let ratio = gap * (1.0 / LOCAL_GAP).ln() * (2.0 / PI);
    vec![
        outcome(
            "2a",
            worst < LOCAL_TOL,
            format!("φ₀(r) against tan(γ/2) on r = 0..0.9, 0.99: max error {worst:.2e} (tol {LOCAL_TOL:e})"),
        ),
        outcome(
            "2b",
            ratio >= LOCAL_BAND.0 && ratio <= LOCAL_BAND.1,
            format!(
                "(1 − φ(r))·log(1/(1 − r))·2/π at 1 − r = {LOCAL_GAP:e}: {ratio:.6}, band [{}, {}]",
                LOCAL_BAND.0, LOCAL_BAND.1
            ),
        ),
    ]
}

fn criterion_3() -> Vec<Outcome> {
    let r = 0.7;
    let dilation = Dilation::new(c(r, 0.0)).unwrap();
    let spectrum = singular_values(&build_matrix(&dilation, GALERKIN_SIZE, Precision::Double).unwrap()).unwrap();
    let worst = (1..=spectrum.reliable_count)
        .map(|n| (spectrum.get(n).unwrap() - r.powi(n as i32 - 1)).abs())
        .fold(0.0, f64::max);
    let constant = Constant::new(c(0.5, 0.0)).unwrap();
    let cs = singular_values(&build_matrix(&constant, GALERKIN_SIZE, Precision::Double).unwrap()).unwrap();
    let s1 = cs.get(1).unwrap();
    let s2 = cs.get(2).unwrap();
    let expected = 2.0 / 3f64.sqrt();
    vec![
        outcome(
            "3a",
            worst < DILATION_TOL && spectrum.reliable_count > 0,
            format!(
                "0.7z, N = {GALERKIN_SIZE}: max |s_n − 0.7^(n−1)| = {worst:.2e} over {} reliable values",
                spectrum.reliable_count
            ),
        ),
        outcome(
            "3b",
            (s1 - expected).abs() < CONSTANT_TOL && s2 < CONSTANT_TAIL,
            format!("constant 0.5: s_1 = {s1:.12}, 2/√3 = {expected:.12}, s_2 = {s2:.2e}"),
        ),
    ]
}

fn criterion_4() -> Vec<Outcome> {
    let lens = Lens::new(0.5).unwrap();
    let spectrum = approx_numbers(&lens, CUSP_N_MAX, Precision::Double).unwrap();
    let window = (LENS_WINDOW.0, LENS_WINDOW.1.min(spectrum.reliable_count));
    let ranking = model_select(&Series::from_spectrum(&spectrum), window).unwrap();
    let best = ranking.best();
    let get = |m| ranking.get(m).unwrap().residual;
    let passed = best.model == DecayModel::SqrtN
        && best.residual <= LENS_RESIDUAL_FACTOR * get(DecayModel::LinearN)
        && best.residual <= LENS_RESIDUAL_FACTOR * get(DecayModel::NOverLog)
        && best.r2 > LENS_R2;
    vec![outcome(
        "4",
        passed && window == LENS_WINDOW,
        format!(
            "lens 1/2 on {window:?}: {}; sqrt_n R² = {:.5}",
            ranking_text(&ranking),
            ranking.get(DecayModel::SqrtN).unwrap().r2
        ),
    )]
}

fn curve_prefers_n_over_log(curve: &[CurvePoint], window: (usize, usize)) -> (bool, String) {
    let series = Series::new(curve.iter().filter(|p| p.value > 0.0).map(|p| (p.n, p.value)).collect());
    match model_select(&series, window) {
        Ok(r) => {
            let nl = r.get(DecayModel::NOverLog).unwrap().residual;
            let sq = r.get(DecayModel::SqrtN).unwrap().residual;
            (nl < sq, ranking_text(&r))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn criterion_5() -> Vec<Outcome> {
    let spectrum = approx_numbers(&Cusp, CUSP_N_MAX, Precision::Double).unwrap();
    let window = (10, spectrum.reliable_count);
    let ranking = model_select(&Series::from_spectrum(&spectrum), window).unwrap();
    let ns: Vec<usize> = (4..=BOUND_CURVE_N_MAX).collect();
    let kernel = kernel_lower_curve(&Cusp, &ns).unwrap();
    let upper = blaschke_upper_curve(&Cusp, 4..=BOUND_CURVE_N_MAX, UPPER_LEVELS, DEFAULT_WINDOW_LEVELS).unwrap();
    let curve_window = (window.0, window.1.min(BOUND_CURVE_N_MAX));
    let (kernel_ok, kernel_text) = curve_prefers_n_over_log(&kernel, curve_window);
    let (upper_ok, upper_text) = curve_prefers_n_over_log(&upper, curve_window);
    vec![
        outcome(
            "5a",
            ranking.best().model == DecayModel::NOverLog,
            format!("cusp spectrum on {window:?}: {}", ranking_text(&ranking)),
        ),
        outcome(
            "5b",
            kernel_ok && upper_ok,
            format!("on {curve_window:?}, kernel bound: {kernel_text}; Blaschke statistic: {upper_text}"),
        ),
    ]
}

fn criterion_6() -> Vec<Outcome> {
    let square = ScPolygon::new(4).unwrap();
    let spectrum = approx_numbers(&square, CUSP_N_MAX, Precision::Double).unwrap();
    let window = (POLYGON_WINDOW.0, POLYGON_WINDOW.1.min(spectrum.reliable_count));
    let ranking = model_select(&Series::from_spectrum(&spectrum), window).unwrap();
    let exponents: Vec<f64> = square
        .contact_angles()
        .into_iter()
        .map(|t| holder_exponent(&square, BoundaryAngle::new(t), HolderModel::Power).unwrap_or(f64::NAN))
        .collect();
    let holder_ok = exponents.iter().all(|b| (b - 0.5).abs() <= HOLDER_TOL);
    vec![
        outcome(
            "6a",
            ranking.best().model == DecayModel::SqrtN && window == POLYGON_WINDOW,
            format!("square on {window:?}: {}", ranking_text(&ranking)),
        ),
        outcome(
            "6b",
            holder_ok,
            format!("vertex exponents {exponents:.4?}, target 0.5 ± {HOLDER_TOL}"),
        ),
    ]
}

fn criterion_7() -> Vec<Outcome> {
    let lens = Lens::new(0.5).unwrap();
    let claim = claim_suite(&[&Cusp, &lens]).unwrap();
    let mobius = mobius_suite(MOBIUS_CASES, DEFAULT_SEED).unwrap();
    vec![
        outcome(
            "7a",
            claim.passed() && claim.cases == 14,
            format!("claim, cusp and lens at N = 2..8: {} cases, {} failures {}", claim.cases, claim.failures, claim.detail),
        ),
        outcome(
            "7b",
            mobius.failures == 0 && mobius.cases == MOBIUS_CASES,
            format!("{} triples, {} violations; {}", mobius.cases, mobius.failures, mobius.detail),
        ),
    ]
}

fn criterion_8() -> Vec<Outcome> {
    let families: Vec<Vec<DiskPoint>> = vec![
        [0.1, 0.5, 0.8].iter().map(|&x| DiskPoint::real(x).unwrap()).collect(),
        (1..=6).map(|j| DiskPoint::real(1.0 - 0.5f64.powi(j)).unwrap()).collect(),
        (0..5)
            .map(|k| DiskPoint::new(Complex64::from_polar(0.6, 1.1 * k as f64)).unwrap())
            .collect(),
    ];
    let lens = Lens::new(0.5).unwrap();
    let dilation = Dilation::new(c(0.6, 0.0)).unwrap();
    let symbols: [&dyn Symbol; 4] = [&Cusp, &lens, &dilation, &Identity];
    let mut norm_ok = true;
    let mut identity_ok = true;
    for points in &families {
        for phi in symbols {
            if let Ok(b) = kernel_lower_bound(phi, points) {
                norm_ok &= b <= norm_bound(phi) + NORM_SLACK;
            }
        }
        identity_ok &= kernel_lower_bound(&Identity, points) == Ok(1.0);
    }
    let mut worst: f64 = 0.0;
    for r in [0.2, 0.6, 0.9] {
        for u in [0.1f64, 0.5, 0.7, 0.95] {
            let phi = Dilation::new(c(r, 0.0)).unwrap();
            let closed = ((1.0 - u * u) / (1.0 - r * r * u * u)).sqrt();
            let got = kernel_lower_bound(&phi, &[DiskPoint::real(u).unwrap()]).unwrap();
            worst = worst.max((got - closed).abs());
        }
    }
    vec![outcome(
        "8",
        norm_ok && identity_ok && worst < CLOSED_FORM_TOL,
        format!(
            "below norm bound: {norm_ok}; identity gives exactly 1: {identity_ok}; rz one-point error {worst:.2e}"
        ),
    )]
}

fn criterion_9() -> Vec<Outcome> {
    let newman = newman_suite().unwrap();
    vec![outcome(
        "9",
        newman.passed(),
        format!("σ = 0.1..0.9: {} failures, {}", newman.failures, newman.detail),
    )]
}

fn criterion_10() -> Vec<Outcome> {
    let spread = Spread::new(Arc::new(Cusp), 0.0, 4).unwrap();
    let found = contact_set(&spread, CONTACT_TOL, SPREAD_GRID);
    let contacts_ok = contacts_match(&found, &spread.contact_angles(), SPREAD_GRID);
    let sup = sup_off_contacts(&spread, SPREAD_EXCLUSION, SPREAD_GRID);
    let spectrum = approx_numbers(&spread, CUSP_N_MAX, Precision::Double).unwrap();
    let window = (10, spectrum.reliable_count);
    let ranking = model_select(&Series::from_spectrum(&spectrum), window).unwrap();
    vec![
        outcome(
            "10a",
            contacts_ok && sup < 1.0 - SPREAD_MARGIN,
            format!(
                "contacts {:.6?}, sup off {SPREAD_EXCLUSION}-neighbourhoods {sup:.8}",
                found.iter().map(|a| a.radians()).collect::<Vec<_>>()
            ),
        ),
        outcome(
            "10b",
            ranking.best().model == DecayModel::NOverLog,
            format!("spread spectrum on {window:?}: {}", ranking_text(&ranking)),
        ),
    ]
}

fn criterion_11() -> Vec<Outcome> {
    let theta = 3.0;
    let st = ShapiroTaylor::new(theta, (-1.0f64).exp()).unwrap();
    let omega = st.modulus().unwrap();
    let regularity = regularity_check(&st, &omega, DEFAULT_CONTACT_WINDOW);
    let ratios = st.boundary_ratios(RATIO_LEVELS);
    let spread = |vals: Vec<f64>| {
        let max = vals.iter().copied().fold(0.0, f64::max);
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        if vals.iter().all(|v| v.is_finite() && *v > 0.0) { max / min } else { f64::INFINITY }
    };
    let disp = spread(ratios.iter().map(|r| r.displacement).collect());
    let gap = spread(ratios.iter().map(|r| r.modulus_gap).collect());
    let spectrum = approx_numbers(&st, CUSP_N_MAX, Precision::Double).unwrap();
    let window = (10, spectrum.reliable_count);
    let estimate = schatten_exponent(&Series::from_spectrum(&spectrum), window);
    let (p_ok, p_text) = match estimate {
        Ok(e) => (
            e.p_star >= SCHATTEN_RANGE.0 && e.p_star <= SCHATTEN_RANGE.1,
            format!("p* = {:.4} beside 4/θ = {:.4} on {window:?}", e.p_star, 4.0 / theta),
        ),
        Err(e) => (false, e.to_string()),
    };
    vec![
        outcome(
            "11a",
            !regularity.holds && disp < RATIO_SPREAD && gap < RATIO_SPREAD,
            format!(
                "regularity holds: {}; ratio max/min over k = 4..40: displacement {disp:.3}, modulus gap {gap:.3}",
                regularity.holds
            ),
        ),
        outcome("11b", p_ok, p_text),
    ]
}

fn criterion_12() -> Vec<Outcome> {
    let hs: Vec<f64> = (3..=8).map(|k| 0.5f64.powi(k)).collect();
    let id_ratios: Vec<f64> = hs
        .iter()
        .map(|&h| carleson_function(&Identity, h, CARLESON_GRID_XI, CARLESON_GRID_T).unwrap().value / h)
        .collect();
    let cusp_ratios: Vec<f64> = hs
        .iter()
        .map(|&h| carleson_function(&Cusp, h, CARLESON_GRID_XI, CARLESON_GRID_T).unwrap().value / h)
        .collect();
    let id_ok = id_ratios
        .iter()
        .all(|&q| q <= CARLESON_FACTOR && q >= 1.0 / CARLESON_FACTOR);
    let cusp_ok = cusp_ratios.windows(2).all(|w| w[1] < w[0]);
    vec![outcome(
        "12",
        id_ok && cusp_ok,
        format!(
            "ρ_id(h)/h {id_ratios:.4?}; ρ_cusp(h)/h [{}]",
            cusp_ratios.iter().map(|q| format!("{q:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    )]
}

fn main() {
    let criteria: [(fn() -> Vec<Outcome>, Duration); 12] = [
        (criterion_1, Duration::from_secs(1)),
        (criterion_2, Duration::from_secs(1)),
        (criterion_3, Duration::from_secs(5)),
        (criterion_4, Duration::from_secs(120)),
        (criterion_5, Duration::from_secs(300)),
        (criterion_6, Duration::from_secs(300)),
        (criterion_7, Duration::from_secs(60)),
        (criterion_8, Duration::from_secs(1)),
        (criterion_9, Duration::from_secs(1)),
        (criterion_10, Duration::from_secs(300)),
        (criterion_11, Duration::from_secs(300)),
        (criterion_12, Duration::from_secs(60)),
    ];
    let mut unexpected = 0;
    let mut known = 0;
    for (run, budget) in criteria {
        let start = Instant::now();
        let outcomes = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        for o in outcomes {
            let passed = o.passed && in_time;
            let status = if passed { "PASS" } else { "FAIL" };
            let expected_fail = !passed && KNOWN_UNATTAINABLE.contains(&o.label);
            println!(
                "{status} [{:>3}] {} ({:.2} s of {} s{}){}",
                o.label,
                o.detail,
                elapsed.as_secs_f64(),
                budget.as_secs(),
                if in_time { "" } else { ", over budget" },
                if expected_fail { " [known unattainable]" } else { "" },
            );
            if !passed {
                if expected_fail {
                    known += 1;
                } else {
                    unexpected += 1;
                }
            }
        }
    }
    println!("acceptance: {unexpected} unexpected failures, {known} known unattainable");
    if unexpected > 0 {
        std::process::exit(1);
    }
}
