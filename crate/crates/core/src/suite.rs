//! Property suites over the disk lemmas, the claim, the Newman product and
//! Schwarz–Pick contraction.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{claim_check, claim_schedule, newman_product};
use crate::disk::{mobius_bound_check, pseudo_hyperbolic, DiskPoint, MobiusOutcome};
use crate::error::{Error, Result};
use crate::symbols::{gallery, regularity_check, Cusp, Lens, Symbol};

/// Radius of the boundary arcs around each contact used by the regularity check.
pub const DEFAULT_CONTACT_WINDOW: f64 = 0.1353352832366127; // e^{-2}
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub detail: String,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

/// Radii cluster toward the circle, down to 1 − |z| = 10^{−decades}.
fn random_point(rng: &mut ChaCha8Rng, decades: f64) -> Complex64 {
    let gap = 10f64.powf(-rng.random_range(0.0..decades));
    let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    Complex64::from_polar(1.0 - gap, angle)
}

/// Triples (w, w0, M) drawn so that |w − w0| ≤ M·min(1 − |w|, 1 − |w0|).
pub fn mobius_suite(cases: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut inapplicable = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let w0 = random_point(&mut rng, 6.0);
        let m = 10f64.powf(rng.random_range(-1.0..1.0));
        let gap0 = 1.0 - w0.norm();
        // 1 − |w| ≥ gap0 − s, so s ≤ M·gap0/(1 + M) keeps the hypothesis
        let s = rng.random_range(0.0..1.0) * m * gap0 / (1.0 + m);
        let w = w0 + Complex64::from_polar(s, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI));
        let check = mobius_bound_check(DiskPoint::new(w)?, DiskPoint::new(w0)?, m)?;
        match check.outcome {
            MobiusOutcome::Violated => failures += 1,
            MobiusOutcome::Inapplicable => inapplicable += 1,
            MobiusOutcome::Holds => worst = worst.max(check.quotient / check.bound),
        }
    }
    Ok(SuiteResult {
        name: "petit-lemme".into(),
        cases: cases - inapplicable,
        failures,
        detail: format!("largest quotient/bound {worst:.6}, {inapplicable} draws outside the hypothesis"),
    })
}

/// claim_check at N = 2..8 with d = d_N for the given symbols.
pub fn claim_suite(symbols: &[&dyn Symbol]) -> Result<SuiteResult> {
    let mut cases = 0;
    let mut failures = 0;
    let mut detail = Vec::new();
    for phi in symbols {
        let omega = phi
            .modulus()
            .ok_or_else(|| Error::Argument(format!("{} has no modulus of continuity", phi.id())))?;
        let regularity = regularity_check(*phi, &omega, DEFAULT_CONTACT_WINDOW);
        for levels in 2..=8 {
            let schedule = claim_schedule(*phi, &omega, &regularity, levels)?;
            let report = claim_check(*phi, &schedule, &omega, &regularity)?;
            cases += 1;
            if !report.holds {
                failures += 1;
                detail.push(format!(
                    "{} N = {levels}: max {:e} > bound {:e}",
                    phi.id(),
                    report.max_modulus,
                    report.bound
                ));
            }
        }
    }
    Ok(SuiteResult {
        name: "claim".into(),
        cases,
        failures,
        detail: detail.join("; "),
    })
}

/// ∏((1 − σ^l)/(1 + σ^l))² ≥ exp(−5/(1 − σ)) on σ = 0.1, …, 0.9.
pub fn newman_suite() -> Result<SuiteResult> {
    let mut failures = 0;
    let mut tightest = f64::INFINITY;
    for k in 1..=9 {
        let sigma = k as f64 / 10.0;
        let product = newman_product(sigma)?;
        let reference = (-5.0 / (1.0 - sigma)).exp();
        tightest = tightest.min(product / reference);
        if product < reference {
            failures += 1;
        }
    }
    Ok(SuiteResult {
        name: "newman".into(),
        cases: 9,
        failures,
        detail: format!("smallest product/reference {tightest:.4}"),
    })
}

/// ρ(φ(z), φ(w)) ≤ ρ(z, w) + 1e−12 for random interior pairs and every gallery symbol.
pub fn schwarz_pick_suite(pairs: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let mut failures = 0;
    let mut detail = Vec::new();
    for phi in gallery() {
        for _ in 0..pairs {
            let z = DiskPoint::new(random_point(&mut rng, 3.0))?;
            let w = DiskPoint::new(random_point(&mut rng, 3.0))?;
            let (fz, fw) = (phi.eval(z.value()), phi.eval(w.value()));
            let (Ok(fz), Ok(fw)) = (DiskPoint::new(fz), DiskPoint::new(fw)) else {
                failures += 1;
                detail.push(format!("{} left the disk", phi.id()));
                continue;
            };
            cases += 1;
            if pseudo_hyperbolic(fz, fw) > pseudo_hyperbolic(z, w) + 1e-12 {
                failures += 1;
                detail.push(format!("{} expands at {} / {}", phi.id(), z.value(), w.value()));
            }
        }
    }
    Ok(SuiteResult {
        name: "schwarz-pick".into(),
        cases,
        failures,
        detail: detail.join("; "),
    })
}

/// The four suites behind the `lemma-suite` preset.
pub fn lemma_suite(seed: u64) -> Result<Vec<SuiteResult>> {
    let lens = Lens::new(0.5)?;
    Ok(vec![
        mobius_suite(10_000, seed)?,
        claim_suite(&[&Cusp, &lens])?,
        newman_suite()?,
        schwarz_pick_suite(200, seed.wrapping_add(1))?,
    ])
}
