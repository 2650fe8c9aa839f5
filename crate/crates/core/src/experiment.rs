//! Named experiments: each computes a spectrum and its diagnostics, checks the expected
//! decay behaviour and renders the output files.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{model_select, schatten_exponent, DecayModel, ModelRanking, Series};
use crate::bounds::{
    blaschke_upper_curve, kernel_lower_curve, lastmin_lower_curve, CurvePoint, DEFAULT_WINDOW_LEVELS,
};
use crate::disk::BoundaryAngle;
use crate::error::{Error, Result};
use crate::hardy::{approx_numbers, Precision, SingularValueSpectrum};
use crate::quad::reduce_angle;
use crate::report::{bounds_csv, bounds_rows, spectrum_csv, to_json, ScheduleProvenance};
use crate::suite::{lemma_suite, DEFAULT_CONTACT_WINDOW, DEFAULT_SEED};
use crate::symbols::{
    contact_set, holder_exponent, regularity_check, Cusp, HolderModel, Lens, ScPolygon, ShapiroTaylor,
    Spread, Symbol, SymbolRef, CONTACT_TOL,
};

pub const DEFAULT_N_MAX: usize = 100;
pub const DEFAULT_GRID_T: usize = 4096;
pub const DEFAULT_GRID_XI: usize = 256;
/// Levels of the Blaschke schedule scanned for the upper curve.
pub const UPPER_MAX_LEVELS: u32 = 12;
/// Largest n on the bound curves.
pub const BOUNDS_N_MAX: usize = 60;
/// Fits start here; the first few singular values carry no rate information.
pub const FIT_START: usize = 10;
/// Allowed distance of a polygon vertex exponent from 1 − 2/p.
pub const HOLDER_TOL: f64 = 0.05;
/// Dyadic levels k of t = 2^{−k} for the Shapiro–Taylor ratios.
pub const RATIO_LEVELS: std::ops::RangeInclusive<u32> = 4..=40;
/// A ratio family counts as bounded when max/min over the levels stays below this.
pub const RATIO_SPREAD_LIMIT: f64 = 10.0;
/// Radius of the excluded neighbourhoods around spread contacts.
pub const SPREAD_EXCLUSION: f64 = 0.1;
pub const SPREAD_SUP_MARGIN: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    CuspRates,
    LensRates(f64),
    Polygon(u32),
    ShapiroTaylor(f64),
    SpreadSchatten(u32),
    LemmaSuite,
}

impl Preset {
    /// Default fit window; `None` upper end means the last reliable n.
    fn default_window(self) -> (usize, Option<usize>) {
        match self {
            Preset::LensRates(_) => (FIT_START, Some(60)),
            Preset::Polygon(_) => (FIT_START, Some(50)),
            _ => (FIT_START, None),
        }
    }

    /// Presets whose checks or rates involve the bound curves.
    fn computes_bounds(self) -> bool {
        matches!(self, Preset::CuspRates | Preset::LensRates(_) | Preset::SpreadSchatten(_))
    }

    pub fn symbol(self) -> Result<Option<SymbolRef>> {
        Ok(match self {
            Preset::CuspRates => Some(Arc::new(Cusp)),
            Preset::LensRates(theta) => Some(Arc::new(Lens::new(theta)?)),
            Preset::Polygon(p) => Some(Arc::new(ScPolygon::new(p)?)),
            Preset::ShapiroTaylor(theta) => Some(Arc::new(ShapiroTaylor::new(theta, (-1.0f64).exp())?)),
            Preset::SpreadSchatten(p) => Some(Arc::new(Spread::new(Arc::new(Cusp), 0.0, p)?)),
            Preset::LemmaSuite => None,
        })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::CuspRates => write!(f, "cusp-rates"),
            Preset::LensRates(t) => write!(f, "lens-rates:{t}"),
            Preset::Polygon(p) => write!(f, "polygon:{p}"),
            Preset::ShapiroTaylor(t) => write!(f, "shapiro-taylor:{t}"),
            Preset::SpreadSchatten(p) => write!(f, "spread-schatten:{p}"),
            Preset::LemmaSuite => write!(f, "lemma-suite"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let real = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| Error::Parse(format!("preset '{name}' needs a parameter")))?
                .parse()
                .map_err(|_| Error::Parse(format!("preset parameter in '{s}'")))
        };
        let order = |a: Option<&str>| -> Result<u32> {
            a.ok_or_else(|| Error::Parse(format!("preset '{name}' needs a parameter")))?
                .parse()
                .map_err(|_| Error::Parse(format!("preset parameter in '{s}'")))
        };
        let none = |a: Option<&str>| match a {
            None => Ok(()),
            Some(_) => Err(Error::Parse(format!("preset '{name}' takes no parameter"))),
        };
        match name {
            "cusp-rates" => none(arg).map(|_| Preset::CuspRates),
            "lens-rates" => real(arg).map(Preset::LensRates),
            "polygon" => order(arg).map(Preset::Polygon),
            "shapiro-taylor" => real(arg).map(Preset::ShapiroTaylor),
            "spread-schatten" => order(arg).map(Preset::SpreadSchatten),
            "lemma-suite" => none(arg).map(|_| Preset::LemmaSuite),
            other => Err(Error::Parse(format!(
                "unknown preset '{other}' (expected cusp-rates, lens-rates:<θ>, polygon:<p>, \
                 shapiro-taylor:<θ>, spread-schatten:<p> or lemma-suite)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    pub n_max: usize,
    pub precision: Precision,
    pub grid_t: usize,
    pub grid_xi: usize,
    pub window: Option<(usize, usize)>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            precision: Precision::Double,
            grid_t: DEFAULT_GRID_T,
            grid_xi: DEFAULT_GRID_XI,
            window: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Rendered files in write order plus the checks behind the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub files: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl ExperimentOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Serialize)]
struct SpectrumSummary<'a> {
    method: crate::hardy::SpectrumMethod,
    computed: usize,
    reliable_count: usize,
    trusted_count: usize,
    floor: f64,
    floor_rule: &'a str,
    convergence: &'a Option<crate::hardy::ConvergenceRecord>,
}

fn summary(s: &SingularValueSpectrum) -> SpectrumSummary<'_> {
    SpectrumSummary {
        method: s.method,
        computed: s.len(),
        reliable_count: s.reliable_count,
        trusted_count: s.trusted_count(),
        floor: s.floor,
        floor_rule: &s.floor_rule,
        convergence: &s.convergence,
    }
}

fn rank_detail(ranking: &ModelRanking) -> String {
    ranking
        .fits
        .iter()
        .map(|f| format!("{} {:.3e}", f.model, f.residual))
        .collect::<Vec<_>>()
        .join(", ")
}

fn first_is(name: &str, ranking: &ModelRanking, model: DecayModel) -> Check {
    Check::new(name, ranking.best().model == model, rank_detail(ranking))
}

fn prefers(name: &str, ranking: &ModelRanking, better: DecayModel, worse: DecayModel) -> Check {
    let (b, w) = (ranking.get(better), ranking.get(worse));
    let passed = matches!((b, w), (Some(b), Some(w)) if b.residual < w.residual);
    Check::new(name, passed, rank_detail(ranking))
}

/// Bound curves for real-on-reals symbols; the upper curve for any symbol with contacts.
struct Curves {
    kernel: Vec<CurvePoint>,
    lastmin: Vec<CurvePoint>,
    upper: Vec<CurvePoint>,
    notes: Vec<String>,
}

fn bound_curves(phi: &dyn Symbol, n_hi: usize) -> Curves {
    let ns: Vec<usize> = (4..=n_hi).collect();
    let mut notes = Vec::new();
    let (kernel, lastmin) = if phi.real_on_reals() {
        let kernel = kernel_lower_curve(phi, &ns).unwrap_or_else(|e| {
            notes.push(format!("kernel curve: {e}"));
            Vec::new()
        });
        (kernel, lastmin_lower_curve(phi, &ns))
    } else {
        notes.push("lower curves need a symbol that is real on the reals".into());
        (Vec::new(), Vec::new())
    };
    let upper = blaschke_upper_curve(phi, 4..=n_hi, UPPER_MAX_LEVELS, DEFAULT_WINDOW_LEVELS)
        .unwrap_or_else(|e| {
            notes.push(format!("upper curve: {e}"));
            Vec::new()
        });
    Curves {
        kernel,
        lastmin,
        upper,
        notes,
    }
}

fn curve_ranking(curve: &[CurvePoint], window: (usize, usize)) -> Option<ModelRanking> {
    let series = Series::from_curve(curve);
    let series = Series::new(series.points.into_iter().filter(|p| p.1 > 0.0).collect());
    model_select(&series, window).ok()
}

/// sup |ψ(e^{it})| over the grid points at distance > `exclusion` from every contact.
pub fn sup_off_contacts(phi: &dyn Symbol, exclusion: f64, grid: usize) -> f64 {
    let contacts = phi.contact_angles();
    (0..grid)
        .map(|k| -PI + TAU * k as f64 / grid as f64)
        .filter(|&t| contacts.iter().all(|&c| reduce_angle(t - c).abs() > exclusion))
        .map(|t| phi.boundary(t).norm())
        .fold(0.0, f64::max)
}

/// True when every declared contact is found within one grid step and nothing else is.
pub fn contacts_match(found: &[BoundaryAngle], declared: &[f64], grid: usize) -> bool {
    let step = TAU / grid as f64;
    let near = |a: f64, b: f64| reduce_angle(a - b).abs() <= step;
    found.len() == declared.len()
        && declared.iter().all(|&d| found.iter().any(|f| near(f.radians(), d)))
}

pub fn run(preset: Preset, settings: &Settings) -> Result<ExperimentOutput> {
    if preset == Preset::LemmaSuite {
        return run_lemma_suite();
    }
    let phi = preset.symbol()?.expect("spectral presets have a symbol");
    let phi = phi.as_ref();
    let spectrum = approx_numbers(phi, settings.n_max, settings.precision)?;
    let reliable = spectrum.reliable_count;
    let (lo, hi) = settings.window.unwrap_or_else(|| {
        let (lo, hi) = preset.default_window();
        (lo, hi.unwrap_or(reliable))
    });
    let window = (lo, hi.min(reliable));
    let series = Series::from_spectrum(&spectrum);
    let ranking = model_select(&series, window)?;

    let mut checks = Vec::new();
    let mut fits = json!({ "window": window, "spectrum": &ranking });
    let mut provenance = json!({
        "preset": preset.to_string(),
        "symbol": phi.id(),
        "settings": settings,
        "spectrum": summary(&spectrum),
        "crate_version": env!("CARGO_PKG_VERSION"),
    });

    let bounds_hi = BOUNDS_N_MAX.min(settings.n_max);
    let curves = if preset.computes_bounds() {
        bound_curves(phi, bounds_hi)
    } else {
        Curves {
            kernel: Vec::new(),
            lastmin: Vec::new(),
            upper: Vec::new(),
            notes: vec![format!("bound curves not computed by this preset; run `hardy-lab bounds {}`", phi.id())],
        }
    };
    let curve_window = (lo, window.1.min(bounds_hi));
    let kernel_rank = curve_ranking(&curves.kernel, curve_window);
    let upper_rank = curve_ranking(&curves.upper, curve_window);
    let lastmin_rank = curve_ranking(&curves.lastmin, curve_window);
    fits["bounds"] = json!({
        "window": curve_window,
        "lower_kernel": kernel_rank,
        "lower_lastmin": lastmin_rank,
        "upper_blaschke_proxy": upper_rank,
    });
    provenance["bounds_notes"] = json!(curves.notes);

    if let Some(omega) = phi.modulus() {
        let regularity = regularity_check(phi, &omega, DEFAULT_CONTACT_WINDOW);
        provenance["schedule"] = serde_json::to_value(ScheduleProvenance::from_report(&regularity))?;
    }

    match preset {
        Preset::CuspRates => {
            checks.push(first_is("spectrum ranks n_over_log first", &ranking, DecayModel::NOverLog));
            for (label, rank) in [("kernel lower bound", &kernel_rank), ("Blaschke upper statistic", &upper_rank)] {
                let name = format!("{label} prefers n_over_log to sqrt_n");
                match rank {
                    Some(r) => checks.push(prefers(&name, r, DecayModel::NOverLog, DecayModel::SqrtN)),
                    None => checks.push(Check::new(&name, false, "curve could not be fitted")),
                }
            }
        }
        Preset::LensRates(_) => {
            checks.push(first_is("spectrum ranks sqrt_n first", &ranking, DecayModel::SqrtN));
        }
        Preset::Polygon(p) => {
            checks.push(first_is("spectrum ranks sqrt_n first", &ranking, DecayModel::SqrtN));
            let target = 1.0 - 2.0 / p as f64;
            let mut exponents = Vec::new();
            let mut ok = true;
            for t in phi.contact_angles() {
                match holder_exponent(phi, BoundaryAngle::new(t), HolderModel::Power) {
                    Ok(beta) => {
                        ok &= (beta - target).abs() <= HOLDER_TOL;
                        exponents.push(json!({ "angle": t, "exponent": beta }));
                    }
                    Err(e) => {
                        ok = false;
                        exponents.push(json!({ "angle": t, "error": e.to_string() }));
                    }
                }
            }
            checks.push(Check::new(
                "vertex exponents within 0.05 of 1 - 2/p",
                ok,
                format!("target {target}, {}", serde_json::to_string(&exponents)?),
            ));
            fits["vertex_exponents"] = json!(exponents);
        }
        Preset::ShapiroTaylor(theta) => {
            let st = ShapiroTaylor::new(theta, (-1.0f64).exp())?;
            let omega = st.modulus().expect("Shapiro-Taylor maps carry a modulus");
            let regularity = regularity_check(&st, &omega, DEFAULT_CONTACT_WINDOW);
            checks.push(Check::new(
                "regularity condition fails",
                !regularity.holds,
                format!(
                    "C = {:e}, c = {:e}",
                    regularity.sector_constant, regularity.approach_constant
                ),
            ));
            let ratios = st.boundary_ratios(RATIO_LEVELS);
            let spread = |f: &dyn Fn(&crate::symbols::BoundaryRatio) -> f64| {
                let vals: Vec<f64> = ratios.iter().map(f).collect();
                let max = vals.iter().copied().fold(0.0, f64::max);
                let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
                if vals.iter().all(|v| v.is_finite() && *v > 0.0) {
                    max / min
                } else {
                    f64::INFINITY
                }
            };
            let (disp, gap) = (spread(&|r| r.displacement), spread(&|r| r.modulus_gap));
            checks.push(Check::new(
                "boundary ratios bounded",
                disp < RATIO_SPREAD_LIMIT && gap < RATIO_SPREAD_LIMIT,
                format!("max/min displacement {disp:.4}, modulus gap {gap:.4}"),
            ));
            fits["boundary_ratios"] = json!(ratios);
            let reference = 4.0 / theta;
            match schatten_exponent(&series, window) {
                Ok(est) => {
                    checks.push(Check::new(
                        "Schatten exponent within a factor 2 of 4/θ",
                        est.p_star >= 0.5 * reference && est.p_star <= 2.0 * reference,
                        format!("p* = {:.4}, 4/θ = {reference:.4}", est.p_star),
                    ));
                    fits["schatten"] = json!({ "estimate": est, "reference": reference });
                }
                Err(e) => checks.push(Check::new("Schatten exponent within a factor 2 of 4/θ", false, e.to_string())),
            }
            let power = ranking.rank_of(DecayModel::Power);
            let above = |m| matches!((power, ranking.rank_of(m)), (Some(p), Some(o)) if p < o);
            checks.push(Check::new(
                "power ranked above sqrt_n and linear_n",
                above(DecayModel::SqrtN) && above(DecayModel::LinearN),
                rank_detail(&ranking),
            ));
        }
        Preset::SpreadSchatten(_) => {
            let found = contact_set(phi, CONTACT_TOL, settings.grid_t);
            let declared = phi.contact_angles();
            checks.push(Check::new(
                "contact set matches the declared angles",
                contacts_match(&found, &declared, settings.grid_t),
                format!(
                    "found {:?}",
                    found.iter().map(|a| a.radians()).collect::<Vec<_>>()
                ),
            ));
            let sup = sup_off_contacts(phi, SPREAD_EXCLUSION, settings.grid_t);
            checks.push(Check::new(
                "sup off contact neighbourhoods below 1 - 1e-4",
                sup < 1.0 - SPREAD_SUP_MARGIN,
                format!("sup {sup:.8}"),
            ));
            checks.push(first_is("spectrum ranks n_over_log first", &ranking, DecayModel::NOverLog));
        }
        Preset::LemmaSuite => unreachable!("handled above"),
    }
    provenance["checks"] = json!(checks);

    Ok(ExperimentOutput {
        files: vec![
            ("spectrum.csv".into(), spectrum_csv(&spectrum)?),
            (
                "bounds.csv".into(),
                bounds_csv(&bounds_rows(&curves.kernel, &curves.lastmin, &curves.upper))?,
            ),
            ("fits.json".into(), pretty(&fits)?),
            ("provenance.json".into(), pretty(&provenance)?),
        ],
        checks,
    })
}

fn pretty(v: &Value) -> Result<String> {
    Ok(to_json(v)? + "\n")
}

fn run_lemma_suite() -> Result<ExperimentOutput> {
    let results = lemma_suite(DEFAULT_SEED)?;
    let checks: Vec<Check> = results
        .iter()
        .map(|r| Check::new(&r.name, r.passed(), format!("{} cases, {} failures. {}", r.cases, r.failures, r.detail)))
        .collect();
    let provenance = json!({
        "preset": Preset::LemmaSuite.to_string(),
        "seed": DEFAULT_SEED,
        "suites": results,
        "crate_version": env!("CARGO_PKG_VERSION"),
    });
    Ok(ExperimentOutput {
        files: vec![("provenance.json".into(), pretty(&provenance)?)],
        checks,
    })
}
