//! Boundary diagnostics: contact detection, regularity constants, local exponents.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::Symbol;
use crate::disk::BoundaryAngle;
use crate::error::{numeric, Result};
use crate::modulus::ModulusOfContinuity;
use crate::quad::reduce_angle;

/// Default tolerance on 1 − |γ| at a contact.
pub const CONTACT_TOL: f64 = 1e-6;
/// Samples per dyadic level in the regularity sweep.
const SUBLEVELS: u32 = 4;
const DEEPEST_LEVEL: u32 = 60;
/// Below this displacement a default-precision trace no longer resolves the ratios.
const MIN_DISPLACEMENT: f64 = 1e-11;
/// Allowed growth of a per-level extreme between level K/2 and level K.
const DRIFT_LIMIT: f64 = 1.5;

/// Angles t where 1 − |γ(t)| ≤ `tol`.
///
/// Local maxima of |γ| on a uniform grid are clustered, refined by golden-section
/// search and tested; declared contact angles inside a candidate's bracket are tried too.
pub fn contact_set(phi: &dyn Symbol, tol: f64, grid: usize) -> Vec<BoundaryAngle> {
    let grid = grid.max(8);
    let h = TAU / grid as f64;
    let angles: Vec<f64> = (0..grid).map(|k| -PI + h * k as f64).collect();
    let moduli: Vec<f64> = angles.iter().map(|&t| phi.boundary(t).norm()).collect();
    let declared = phi.contact_angles();

    let mut candidates: Vec<usize> = (0..grid)
        .filter(|&k| {
            let prev = moduli[(k + grid - 1) % grid];
            let next = moduli[(k + 1) % grid];
            (moduli[k] > prev && moduli[k] >= next) || 1.0 - moduli[k] <= tol
        })
        .collect();
    candidates.sort_unstable();

    // clusters of cyclically adjacent candidates
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &k in &candidates {
        match clusters.last_mut() {
            Some(c) if k - *c.last().expect("nonempty cluster") <= 1 => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    if clusters.len() > 1 {
        let first_start = clusters[0][0];
        let last_end = *clusters.last().and_then(|c| c.last()).expect("nonempty");
        if first_start == 0 && last_end == grid - 1 {
            let tail = clusters.pop().expect("nonempty");
            clusters[0].extend(tail);
        }
    }

    let mut found: Vec<f64> = Vec::new();
    for cluster in clusters {
        let best = *cluster
            .iter()
            .max_by(|&&a, &&b| moduli[a].total_cmp(&moduli[b]))
            .expect("nonempty cluster");
        let center = angles[best];
        let (mut t, mut gap) = golden_maximize(phi, center - h, center + h);
        if 1.0 - moduli[best] < gap {
            t = center;
            gap = 1.0 - moduli[best];
        }
        for &d in &declared {
            if crate::quad::angle_distance(d, center) <= h {
                let g = 1.0 - phi.boundary(d).norm();
                if g <= gap {
                    t = d;
                    gap = g;
                }
            }
        }
        if gap <= tol {
            found.push(reduce_angle(t));
        }
    }
    found.sort_by(f64::total_cmp);
    found.dedup_by(|a, b| crate::quad::angle_distance(*a, *b) < 0.5 * h);
    found.into_iter().map(BoundaryAngle::new).collect()
}

/// Maximizes |γ| on [a, b]; returns the location and 1 − |γ| there.
fn golden_maximize(phi: &dyn Symbol, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let f = |t: f64| phi.boundary(t).norm();
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-15 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, 1.0 - f(t))
}

/// Extremes of the two regularity ratios over one dyadic level |t − t_j| ∈ (r·2^{−k−1}, r·2^{−k}].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityLevel {
    pub contact: f64,
    pub level: u32,
    /// max |γ(t) − ξ| / (1 − |γ(t)|)
    pub sector_max: f64,
    /// min |γ(t) − ξ| / ω(|t − t_j|)
    pub approach_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    /// best constant C in |γ(t) − ξ| ≤ C(1 − |γ(t)|)
    pub sector_constant: f64,
    /// best constant c in |γ(t) − ξ| ≥ c·ω(|t − t_j|)
    pub approach_constant: f64,
    pub window: f64,
    pub holds: bool,
    pub levels: Vec<RegularityLevel>,
}

impl RegularityReport {
    /// M = 2C + 1.
    pub fn cone_constant(&self) -> f64 {
        2.0 * self.sector_constant + 1.0
    }

    /// κ = C/c.
    pub fn kappa(&self) -> f64 {
        self.sector_constant / self.approach_constant
    }
}

/// Measures the regularity constants on dyadic levels |t − t_j| = window·2^{−k}, k ≤ 60.
///
/// The condition is judged to hold when both constants are finite and positive and
/// neither per-level extreme drifts by more than a factor 1.5 between level K/2 and the
/// deepest resolved level K.
pub fn regularity_check(phi: &dyn Symbol, omega: &ModulusOfContinuity, window: f64) -> RegularityReport {
    let mut levels = Vec::new();
    let mut holds = true;
    let mut sector_constant: f64 = 0.0;
    let mut approach_constant = f64::INFINITY;
    let contacts = phi.contact_angles();
    if contacts.is_empty() {
        holds = false;
    }
    for &tj in &contacts {
        let xi = phi.boundary_near(tj, 0.0);
        let mut per_contact = Vec::new();
        for k in 0..=DEEPEST_LEVEL {
            let mut sector_max: f64 = 0.0;
            let mut approach_min = f64::INFINITY;
            let mut resolved = false;
            for m in 0..SUBLEVELS {
                let dt = window * 2f64.powf(-(k as f64) - m as f64 / SUBLEVELS as f64);
                for sign in [1.0, -1.0] {
                    let disp = (phi.boundary_near(tj, sign * dt) - xi).norm();
                    let gap = phi.boundary_gap_near(tj, sign * dt);
                    if disp < MIN_DISPLACEMENT || !(gap > 0.0) {
                        continue;
                    }
                    resolved = true;
                    sector_max = sector_max.max(disp / gap);
                    approach_min = approach_min.min(disp / omega.eval(dt));
                }
            }
            if resolved {
                per_contact.push(RegularityLevel {
                    contact: tj,
                    level: k,
                    sector_max,
                    approach_min,
                });
            }
        }
        if per_contact.len() < 8 {
            holds = false;
        } else {
            let deep = per_contact.last().expect("nonempty");
            let mid = per_contact[per_contact.len() / 2];
            if deep.sector_max > DRIFT_LIMIT * mid.sector_max
                || mid.approach_min > DRIFT_LIMIT * deep.approach_min
            {
                holds = false;
            }
        }
        for l in &per_contact {
            sector_constant = sector_constant.max(l.sector_max);
            approach_constant = approach_constant.min(l.approach_min);
        }
        levels.extend(per_contact);
    }
    if !sector_constant.is_finite() || !(approach_constant > 0.0) || !approach_constant.is_finite() {
        holds = false;
    }
    RegularityReport {
        sector_constant,
        approach_constant,
        window,
        holds,
        levels,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HolderModel {
    /// |γ(t) − ξ| ≈ |t − t_j|^β
    Power,
    /// |γ(t) − ξ| ≈ β / log(1/|t − t_j|)
    Log,
}

/// Local boundary exponent at a contact angle.
///
/// Power model: slope of log|γ − ξ| against log|t − t_j| over 2^{−k}, k = 6..18.
/// Log model: 1/|γ − ξ| is fitted linearly in log(1/|t − t_j|) over k = 6..40 and β is
/// the reciprocal slope.
pub fn holder_exponent(phi: &dyn Symbol, contact: BoundaryAngle, model: HolderModel) -> Result<f64> {
    let tj = contact.radians();
    let xi = phi.boundary_near(tj, 0.0);
    let ks = match model {
        HolderModel::Power => 6..=18,
        HolderModel::Log => 6..=40,
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in ks {
        let dt = 0.5f64.powi(k);
        let disp = (phi.boundary_near(tj, dt) - xi).norm();
        if !(disp > 0.0) || !disp.is_finite() {
            continue;
        }
        match model {
            HolderModel::Power => {
                xs.push(dt.ln());
                ys.push(disp.ln());
            }
            HolderModel::Log => {
                xs.push(-dt.ln());
                ys.push(1.0 / disp);
            }
        }
    }
    if xs.len() < 4 {
        return Err(numeric(
            format!("only {} usable points for the exponent regression", xs.len()),
            xs.len() as f64,
        ));
    }
    let slope = least_squares_slope(&xs, &ys);
    match model {
        HolderModel::Power => Ok(slope),
        HolderModel::Log => {
            if slope > 0.0 {
                Ok(1.0 / slope)
            } else {
                Err(numeric("log-model slope is not positive".to_string(), slope))
            }
        }
    }
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    pub symbol: String,
    /// max |φ| over the interior grid
    pub interior_max: f64,
    pub self_map: bool,
    /// worst |φ(r e^{it}) − γ(t)| at r = 1 − 10^{−8}
    pub boundary_error: f64,
    pub boundary_consistent: bool,
    /// worst |Im φ(x)| on (−1, 1), when the flag is set
    pub real_axis_error: Option<f64>,
    pub contacts_on_circle: bool,
    pub passed: bool,
}

/// Self-map, boundary-trace and real-axis checks.
pub fn check_invariants(phi: &dyn Symbol) -> InvariantReport {
    let mut interior_max: f64 = 0.0;
    for i in 0..16 {
        let r = 0.999 * (i as f64 + 0.5) / 16.0;
        for j in 0..32 {
            let z = Complex64::from_polar(r, TAU * (j as f64 + 0.25) / 32.0);
            interior_max = interior_max.max(phi.eval(z).norm());
        }
    }
    let self_map = interior_max < 1.0;

    let mut boundary_error: f64 = 0.0;
    let mut boundary_consistent = true;
    for j in 0..64 {
        let t = -PI + TAU * j as f64 / 64.0;
        let g = phi.boundary(t);
        let near = (phi.eval(Complex64::from_polar(1.0 - 1e-2, t)) - g).norm();
        let far = (phi.eval(Complex64::from_polar(1.0 - 1e-8, t)) - g).norm();
        boundary_error = boundary_error.max(far);
        // logarithmic contacts converge slowly; require decay rather than smallness there
        if !(far <= 1e-6 || far <= 0.5 * near) {
            boundary_consistent = false;
        }
    }

    let real_axis_error = phi.real_on_reals().then(|| {
        (1..200)
            .map(|k| -1.0 + k as f64 / 100.0)
            .map(|x| phi.eval(Complex64::new(x, 0.0)).im.abs())
            .fold(0.0, f64::max)
    });
    let contacts_on_circle = phi
        .contact_angles()
        .iter()
        .all(|&t| phi.boundary_gap(t).abs() <= CONTACT_TOL);
    let passed = self_map
        && boundary_consistent
        && real_axis_error.is_none_or(|e| e <= 1e-12)
        && contacts_on_circle;
    InvariantReport {
        symbol: phi.id(),
        interior_max,
        self_map,
        boundary_error,
        boundary_consistent,
        real_axis_error,
        contacts_on_circle,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::symbols::{gallery, Cusp, Lens, ScPolygon, ShapiroTaylor, Spread};

    #[test]
    fn contact_sets_of_the_gallery() {
        let c = contact_set(&Cusp, 1e-6, 4096);
        assert_eq!(c.len(), 1);
        assert!(c[0].radians().abs() < 1e-12);
        let l = contact_set(&Lens::new(0.5).unwrap(), 1e-6, 4096);
        assert_eq!(l.len(), 2);
        let s = Spread::new(Arc::new(Cusp), 0.0, 4).unwrap();
        let k = contact_set(&s, 1e-6, 4096);
        assert_eq!(k.len(), 4);
        for (found, declared) in k.iter().zip({
            let mut d = s.contact_angles();
            d.sort_by(f64::total_cmp);
            d
        }) {
            assert!(crate::quad::angle_distance(found.radians(), declared) <= TAU / 4096.0);
        }
    }

    #[test]
    fn regularity_of_cusp_and_lens() {
        let omega = ModulusOfContinuity::inv_log(1.0).unwrap();
        let r = regularity_check(&Cusp, &omega, (-2.0f64).exp());
        assert!(r.holds, "{r:?}");
        assert!(r.sector_constant < 2.0);
        let lens = Lens::new(0.5).unwrap();
        let r = regularity_check(&lens, &ModulusOfContinuity::power(0.5).unwrap(), 0.5);
        assert!(r.holds);
    }

    #[test]
    fn regularity_fails_for_shapiro_taylor() {
        let st = ShapiroTaylor::new(3.0, (-1.0f64).exp()).unwrap();
        let r = regularity_check(&st, &ModulusOfContinuity::h_log().unwrap(), 0.1);
        assert!(!r.holds);
    }

    #[test]
    fn exponents() {
        let lens = Lens::new(0.5).unwrap();
        let e = holder_exponent(&lens, BoundaryAngle::new(0.0), HolderModel::Power).unwrap();
        assert!((e - 0.5).abs() < 0.05);
        let sq = ScPolygon::new(4).unwrap();
        for t in sq.contact_angles() {
            let e = holder_exponent(&sq, BoundaryAngle::new(t), HolderModel::Power).unwrap();
            assert!((e - 0.5).abs() < 0.05, "{t}: {e}");
        }
        let b = holder_exponent(&Cusp, BoundaryAngle::new(0.0), HolderModel::Log).unwrap();
        assert!((b / (PI / 2.0) - 1.0).abs() < 0.1, "{b}");
    }

    #[test]
    fn gallery_invariants() {
        for s in gallery() {
            let r = check_invariants(s.as_ref());
            assert!(r.passed, "{r:?}");
        }
    }
}
