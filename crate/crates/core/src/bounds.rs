//! Upper-bound statistic from Blaschke products and certified lower bounds from
//! reproducing kernels.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::disk::{BlaschkeProduct, BoundaryAngle, DiskPoint};
use crate::error::{numeric, Error, Result};
use crate::hardy::UNIT_ROUNDOFF;
use crate::modulus::{default_sigma_grid, multiplicity_at, omega_inverse, ModulusOfContinuity};
use crate::quad::{angle_distance, Breakpoint, CircleRule};
use crate::symbols::{RegularityReport, Symbol};

/// Halvings of the Blaschke quadrature toward each contact.
const BLASCHKE_LEVELS: u32 = 1000;
/// Dyadic window radii h = 2^{−l}, l = 1..DEFAULT_WINDOW_LEVELS.
pub const DEFAULT_WINDOW_LEVELS: u32 = 40;
const CLAIM_SAMPLES: usize = 20_000;
const CLAIM_SLACK: f64 = 1e-10;
const BISECTION_REL_TOL: f64 = 1e-13;

/// Zeros (1 − 2^{−k})ξ_j, k = 1..N, each of multiplicity d, at every contact ξ_j.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlaschkeSchedule {
    pub contacts: Vec<BoundaryAngle>,
    pub levels: u32,
    pub multiplicity: u32,
}

impl BlaschkeSchedule {
    pub fn new(contacts: Vec<BoundaryAngle>, levels: u32, multiplicity: u32) -> Result<Self> {
        if contacts.is_empty() {
            return Err(Error::Argument("schedule needs at least one contact point".into()));
        }
        Ok(Self {
            contacts,
            levels,
            multiplicity,
        })
    }

    /// Schedule on the symbol's declared contacts.
    pub fn for_symbol(phi: &dyn Symbol, levels: u32, multiplicity: u32) -> Result<Self> {
        let contacts = phi.contact_angles().into_iter().map(BoundaryAngle::new).collect();
        Self::new(contacts, levels, multiplicity)
            .map_err(|_| Error::Argument(format!("{} declares no contact points", phi.id())))
    }

    /// p·N·d.
    pub fn degree(&self) -> u32 {
        self.contacts.len() as u32 * self.levels * self.multiplicity
    }

    pub fn product(&self) -> BlaschkeProduct {
        let mut zeros = Vec::new();
        for c in &self.contacts {
            for k in 1..=self.levels {
                let r = 1.0 - 0.5f64.powi(k as i32);
                let z = DiskPoint::new(r * c.point()).expect("radius below one");
                zeros.push((z, self.multiplicity));
            }
        }
        BlaschkeProduct::new(zeros)
    }
}

/// (1/h)∫_{S(ξ,h)} |B∘γ|² dm at one window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowStatistic {
    pub center: f64,
    pub level: u32,
    pub h: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlaschkeStatistic {
    /// square root of the largest window value
    pub statistic: f64,
    pub windows: Vec<WindowStatistic>,
}

/// Boundary samples of φ with per-level log-moduli of the Blaschke factors, so that
/// statistics for many (N, d) reuse one quadrature.
#[derive(Debug, Clone)]
pub struct BlaschkeEngine {
    weights: Vec<f64>,
    values: Vec<Complex64>,
    contacts: Vec<BoundaryAngle>,
    /// prefix[N][i] = Σ_{k ≤ N} Σ_j log|b_{j,k}(γ(t_i))|
    prefix: Vec<Vec<f64>>,
}

impl BlaschkeEngine {
    pub fn new(phi: &dyn Symbol, max_levels: u32) -> Result<Self> {
        let contacts: Vec<BoundaryAngle> = phi.contact_angles().into_iter().map(BoundaryAngle::new).collect();
        if contacts.is_empty() {
            return Err(Error::Argument(format!("{} declares no contact points", phi.id())));
        }
        let breakpoints: Vec<Breakpoint> = contacts
            .iter()
            .map(|c| Breakpoint {
                angle: c.radians(),
                levels: BLASCHKE_LEVELS,
            })
            .collect();
        let rule = CircleRule::graded(&breakpoints);
        let values: Vec<Complex64> = rule
            .anchors
            .iter()
            .zip(&rule.offsets)
            .map(|(&a, &o)| phi.boundary_near(a, o))
            .collect();
        let mut prefix = vec![vec![0.0; values.len()]];
        for k in 1..=max_levels {
            let r = 1.0 - 0.5f64.powi(k as i32);
            let prev = prefix.last().expect("nonempty");
            let next: Vec<f64> = values
                .iter()
                .zip(prev)
                .map(|(&g, &acc)| {
                    acc + contacts
                        .iter()
                        .map(|c| {
                            let a = r * c.point();
                            ((g - a).norm() / (Complex64::new(1.0, 0.0) - a.conj() * g).norm()).ln()
                        })
                        .sum::<f64>()
                })
                .collect();
            prefix.push(next);
        }
        Ok(Self {
            weights: rule.weights,
            values,
            contacts,
            prefix,
        })
    }

    pub fn max_levels(&self) -> u32 {
        self.prefix.len() as u32 - 1
    }

    /// Window values at the declared contacts for h = 2^{−l}, l = 1..window_levels.
    pub fn statistic(&self, levels: u32, multiplicity: u32, window_levels: u32) -> Result<BlaschkeStatistic> {
        let centers: Vec<f64> = self.contacts.iter().map(|c| c.radians()).collect();
        self.statistic_at(levels, multiplicity, window_levels, &centers)
    }

    fn statistic_at(
        &self,
        levels: u32,
        multiplicity: u32,
        window_levels: u32,
        centers: &[f64],
    ) -> Result<BlaschkeStatistic> {
        if levels > self.max_levels() {
            return Err(Error::Argument(format!(
                "N = {levels} exceeds the engine's {} levels",
                self.max_levels()
            )));
        }
        let logs = &self.prefix[levels as usize];
        let d = multiplicity as f64;
        let mass: Vec<f64> = self
            .weights
            .iter()
            .zip(logs)
            .map(|(w, l)| w * (2.0 * d * l).exp())
            .collect();
        let mut windows = Vec::new();
        let mut best: f64 = 0.0;
        for &center in centers {
            let xi = Complex64::from_polar(1.0, center);
            let mut by_distance: Vec<(f64, f64)> = self
                .values
                .iter()
                .zip(&mass)
                .map(|(g, &m)| ((g - xi).norm(), m))
                .collect();
            by_distance.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut cumulative = Vec::with_capacity(by_distance.len());
            let mut acc = 0.0;
            for &(_, m) in &by_distance {
                acc += m;
                cumulative.push(acc);
            }
            for l in 1..=window_levels {
                let h = 0.5f64.powi(l as i32);
                let count = by_distance.partition_point(|&(dist, _)| dist <= h);
                let inside = if count == 0 { 0.0 } else { cumulative[count - 1] };
                let value = inside / h;
                best = best.max(value);
                windows.push(WindowStatistic {
                    center,
                    level: l,
                    h,
                    value,
                });
            }
        }
        Ok(BlaschkeStatistic {
            statistic: best.sqrt(),
            windows,
        })
    }
}

/// Largest window value over the schedule's contacts, plus a coarse global grid of centers.
pub fn blaschke_upper_statistic(
    phi: &dyn Symbol,
    schedule: &BlaschkeSchedule,
    window_levels: u32,
) -> Result<BlaschkeStatistic> {
    let declared = phi.contact_angles();
    if declared.is_empty() {
        return Err(Error::Argument(format!("{} declares no contact points", phi.id())));
    }
    let matches = schedule.contacts.len() == declared.len()
        && schedule
            .contacts
            .iter()
            .all(|c| declared.iter().any(|&d| angle_distance(d, c.radians()) < 1e-9));
    if !matches {
        return Err(Error::Argument(
            "schedule contacts differ from the symbol's declared contacts".into(),
        ));
    }
    let engine = BlaschkeEngine::new(phi, schedule.levels)?;
    let mut centers: Vec<f64> = declared.clone();
    centers.extend((0..64).map(|k| -PI + TAU * k as f64 / 64.0));
    engine.statistic_at(schedule.levels, schedule.multiplicity, window_levels, &centers)
}

/// One point of an upper or lower curve: the value at n and how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub n: usize,
    pub value: f64,
    pub source: String,
}

/// upper(n) = min over (N, d) with p·N·d + 1 ≤ n of the Blaschke statistic.
pub fn blaschke_upper_curve(
    phi: &dyn Symbol,
    n_range: std::ops::RangeInclusive<usize>,
    max_levels: u32,
    window_levels: u32,
) -> Result<Vec<CurvePoint>> {
    let engine = BlaschkeEngine::new(phi, max_levels)?;
    let p = engine.contacts.len();
    let n_hi = *n_range.end();
    let mut table: Vec<(usize, u32, u32, f64)> = Vec::new();
    for levels in 1..=max_levels {
        let mut d = 0u32;
        while p * (levels as usize) * (d as usize) < n_hi {
            let s = engine.statistic(levels, d, window_levels)?.statistic;
            table.push((p * levels as usize * d as usize + 1, levels, d, s));
            d += 1;
        }
    }
    Ok(n_range
        .filter_map(|n| {
            table
                .iter()
                .filter(|e| e.0 <= n)
                .min_by(|a, b| a.3.total_cmp(&b.3))
                .map(|e| CurvePoint {
                    n,
                    value: e.3,
                    source: format!("N = {}, d = {}", e.1, e.2),
                })
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    pub levels: u32,
    pub multiplicity: u32,
    /// s_N = ω⁻¹(κ·2^{−N})
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub max_modulus: f64,
    /// χ^d with χ = M/√(M²+1), M = 2C + 1
    pub bound: f64,
    pub holds: bool,
}

/// The schedule of the claim at level N: d = d_N from σ = 1/log(χ^{−2}) and κ = C/c.
pub fn claim_schedule(
    phi: &dyn Symbol,
    omega: &ModulusOfContinuity,
    regularity: &RegularityReport,
    levels: u32,
) -> Result<BlaschkeSchedule> {
    if !regularity.holds {
        return Err(Error::Argument("regularity check did not pass".into()));
    }
    let m = regularity.cone_constant();
    let chi = m / (m * m + 1.0).sqrt();
    let sigma = 1.0 / (chi.powi(-2)).ln();
    let d = multiplicity_at(omega, regularity.kappa(), sigma, levels)?;
    BlaschkeSchedule::for_symbol(phi, levels, d)
}

/// max |B(γ(t))| over s_N < |t − t_j| ≤ r against χ^d.
pub fn claim_check(
    phi: &dyn Symbol,
    schedule: &BlaschkeSchedule,
    omega: &ModulusOfContinuity,
    regularity: &RegularityReport,
) -> Result<ClaimReport> {
    if !regularity.holds || !(regularity.approach_constant > 0.0) {
        return Err(Error::Argument("regularity check did not pass".into()));
    }
    let m = regularity.cone_constant();
    let chi = m / (m * m + 1.0).sqrt();
    let bound = chi.powi(schedule.multiplicity as i32);
    let x = regularity.kappa() * 0.5f64.powi(schedule.levels as i32);
    let inner = omega_inverse(omega, x)?;
    let outer = regularity.window;
    let b = schedule.product();
    let mut max_modulus: f64 = 0.0;
    if inner < outer && schedule.multiplicity > 0 {
        let (lo, hi) = (inner.ln(), outer.ln());
        for c in &schedule.contacts {
            for sign in [1.0, -1.0] {
                for i in 1..=CLAIM_SAMPLES {
                    let dt = (lo + (hi - lo) * i as f64 / CLAIM_SAMPLES as f64).exp();
                    let g = phi.boundary(c.radians() + sign * dt);
                    max_modulus = max_modulus.max(b.log_modulus(g).exp());
                }
            }
        }
    }
    if schedule.multiplicity == 0 {
        max_modulus = 1.0;
    }
    Ok(ClaimReport {
        levels: schedule.levels,
        multiplicity: schedule.multiplicity,
        inner_radius: inner,
        outer_radius: outer,
        max_modulus,
        bound,
        holds: max_modulus <= bound + CLAIM_SLACK,
    })
}

/// Upper-triangular factor A with A[k][j] = conj(e_k(z_j)) for the TMW functions at the
/// same points, so that the kernel Gram matrix is A*A.
fn tmw_factor(points: &[Complex64]) -> DMatrix<Complex64> {
    let n = points.len();
    let one = Complex64::new(1.0, 0.0);
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        let x = points[j];
        let mut prod = one;
        for k in 0..=j {
            let w = points[k];
            let den = one - w.conj() * x;
            let g = (1.0 - w.norm_sqr()).max(0.0).sqrt();
            a[(k, j)] = (g / den * prod).conj();
            prod *= (x - w) / den;
        }
    }
    a
}

/// As [`tmw_factor`] for real points given by their gaps δ = 1 − u.
fn tmw_factor_real(gaps: &[f64]) -> DMatrix<f64> {
    let n = gaps.len();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let dx = gaps[j];
        let mut prod = 1.0;
        for k in 0..=j {
            let dk = gaps[k];
            // 1 − u_k x and x − u_k in gap coordinates
            let den = dk + dx - dk * dx;
            let g = (dk * (2.0 - dk)).max(0.0).sqrt();
            a[(k, j)] = g / den * prod;
            prod *= (dk - dx) / den;
        }
    }
    a
}

fn has_repeats(values: &[Complex64]) -> bool {
    values
        .iter()
        .enumerate()
        .any(|(i, a)| values[i + 1..].iter().any(|b| a == b))
}

fn closest_pair(points: &[Complex64]) -> (usize, usize) {
    let mut best = (0, 0, f64::INFINITY);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let r = crate::disk::pseudo_hyperbolic_raw(points[i], points[j]);
            if r < best.2 {
                best = (i, j, r);
            }
        }
    }
    (best.0, best.1)
}

fn condition_limit() -> f64 {
    1.0 / (100.0 * UNIT_ROUNDOFF)
}

/// Rejects point families whose kernel factor is too ill-conditioned, naming the closest pair.
fn conditioning_guard<T>(au: &DMatrix<T>, points: &[Complex64]) -> Result<f64>
where
    T: nalgebra::ComplexField<RealField = f64>,
{
    let sv = au
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| numeric("SVD of the kernel factor did not converge", f64::NAN))?
        .singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= condition_limit()) {
        let (i, j) = closest_pair(points);
        return Err(Error::Conditioning {
            condition,
            limit: condition_limit(),
            i,
            j,
        });
    }
    Ok(condition)
}

fn smallest_ratio<T>(au: DMatrix<T>, av: DMatrix<T>, condition: f64) -> Result<f64>
where
    T: nalgebra::ComplexField<RealField = f64>,
{
    // σ_min(A_v A_u⁻¹) = 1/σ_max(A_u A_v⁻¹); the graded triangular solve keeps relative
    // accuracy far below the level where σ_min of the forward quotient is lost to rounding
    let x = av
        .adjoint()
        .solve_lower_triangular(&au.adjoint())
        .ok_or_else(|| numeric("triangular image factor is singular", condition))?;
    if x.iter().any(|e| !e.clone().is_finite()) {
        return Ok(0.0);
    }
    let s = x
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| numeric("SVD of the kernel quotient did not converge", f64::NAN))?
        .singular_values;
    Ok(1.0 / s.max())
}

/// √λ_min of the pencil (G_v, G_u) with G_u[j,k] = 1/(1 − conj(u_k)u_j), v = φ(u).
pub fn kernel_lower_bound(phi: &dyn Symbol, points: &[DiskPoint]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Argument("need at least one point".into()));
    }
    let u: Vec<Complex64> = points.iter().map(|p| p.value()).collect();
    let v: Vec<Complex64> = u.iter().map(|&z| phi.eval(z)).collect();
    if v.iter().any(|w| !(w.norm() < 1.0)) {
        return Err(Error::Domain("φ maps a point outside the open disk".into()));
    }
    let au = tmw_factor(&u);
    let condition = conditioning_guard(&au, &u)?;
    if has_repeats(&v) {
        // the restricted adjoint has a kernel
        return Ok(0.0);
    }
    smallest_ratio(au, tmw_factor(&v), condition)
}

/// [`kernel_lower_bound`] at real points u_j = 1 − δ_j of a real symbol, in gap coordinates.
pub fn kernel_lower_bound_real(phi: &dyn Symbol, gaps: &[f64]) -> Result<f64> {
    if gaps.is_empty() {
        return Err(Error::Argument("need at least one point".into()));
    }
    if !phi.real_on_reals() {
        return Err(Error::Argument(format!("{} is not real on the reals", phi.id())));
    }
    if gaps.iter().any(|&d| !(d > 0.0 && d <= 1.0)) {
        return Err(Error::Domain("gaps must lie in (0, 1]".into()));
    }
    let v_gaps: Vec<f64> = gaps.iter().map(|&d| phi.radial_gap(d)).collect();
    if v_gaps.iter().any(|&d| !(d > 0.0 && d < 2.0)) {
        return Err(Error::Domain("φ maps a point outside the open disk".into()));
    }
    let u: Vec<Complex64> = gaps.iter().map(|&d| Complex64::new(1.0 - d, 0.0)).collect();
    let v: Vec<Complex64> = v_gaps.iter().map(|&d| Complex64::new(d, 0.0)).collect();
    let au = tmw_factor_real(gaps);
    let condition = conditioning_guard(&au, &u)?;
    if has_repeats(&v) {
        return Ok(0.0);
    }
    smallest_ratio(au, tmw_factor_real(&v_gaps), condition)
}

/// u_0 = 0 < u_1 < … < u_n with 1 − φ(u_{j+1}) = σ(1 − φ(u_j)), stored by gaps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialChain {
    pub sigma: f64,
    /// a = 1 − φ(0)
    pub a: f64,
    /// δ_j = 1 − u_j, j = 1..n
    pub u_gaps: Vec<f64>,
    /// 1 − v_j, j = 1..n
    pub v_gaps: Vec<f64>,
}

impl RadialChain {
    pub fn u(&self) -> Vec<f64> {
        self.u_gaps.iter().map(|d| 1.0 - d).collect()
    }

    pub fn v(&self) -> Vec<f64> {
        self.v_gaps.iter().map(|d| 1.0 - d).collect()
    }

    /// Worst deviation of the step ratios from σ and of 1 − v_n from aσⁿ, both relative.
    pub fn recursion_errors(&self) -> (f64, f64) {
        let mut prev = self.a;
        let mut step: f64 = 0.0;
        for &g in &self.v_gaps {
            step = step.max((g / prev - self.sigma).abs() / self.sigma);
            prev = g;
        }
        let n = self.v_gaps.len() as i32;
        let last = self.v_gaps.last().copied().unwrap_or(self.a);
        let closed = self.a * self.sigma.powi(n);
        (step, (last - closed).abs() / closed)
    }
}

fn check_monotone(phi: &dyn Symbol) -> Result<()> {
    if !phi.real_on_reals() {
        return Err(Error::Argument(format!("{} is not real on the reals", phi.id())));
    }
    let mut prev = f64::INFINITY;
    for k in 0..=400 {
        let delta = 10f64.powf(-(k as f64) / 10.0);
        let g = phi.radial_gap(delta);
        if !(g <= prev) || !(g >= 0.0) {
            return Err(Error::Argument(format!(
                "{} is not increasing on [0, 1) near 1 − {delta:e}",
                phi.id()
            )));
        }
        prev = g;
    }
    Ok(())
}

/// Solves 1 − φ(1 − δ) = target for δ < upper by bisection in log δ.
fn solve_gap(phi: &dyn Symbol, target: f64, upper: f64) -> Result<f64> {
    let mut hi = upper.ln();
    let mut lo = f64::MIN_POSITIVE.ln();
    if phi.radial_gap(lo.exp()) > target {
        return Err(numeric(
            format!("radial gap {target:e} is not reached above the smallest normal double"),
            target,
        ));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if phi.radial_gap(mid.exp()) > target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= BISECTION_REL_TOL * hi.abs().max(1.0) {
            return Ok((0.5 * (lo + hi)).exp());
        }
    }
    Err(numeric("bisection for the radial chain did not converge", hi - lo))
}

/// The chain of the lower-bound recursion, computed in gap coordinates.
pub fn lastmin_points(phi: &dyn Symbol, sigma: f64, n: usize) -> Result<RadialChain> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::Argument(format!("σ = {sigma} not in (0, 1)")));
    }
    check_monotone(phi)?;
    let a = phi.radial_gap(1.0);
    let mut u_gaps = Vec::with_capacity(n);
    let mut v_gaps = Vec::with_capacity(n);
    let mut upper = 1.0;
    let mut target = a;
    for _ in 0..n {
        target *= sigma;
        let delta = solve_gap(phi, target, upper)?;
        u_gaps.push(delta);
        v_gaps.push(phi.radial_gap(delta));
        upper = delta;
    }
    Ok(RadialChain {
        sigma,
        a,
        u_gaps,
        v_gaps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LastminBound {
    /// c′·δ_v⁴·μ_n
    pub bound: f64,
    pub delta_v: f64,
    pub mu: f64,
    /// exp(−5/(1 − σ))
    pub newman_reference: f64,
    pub chain: RadialChain,
}

/// Carleson constant of real points near 1 given by their gaps.
fn carleson_delta_gaps(gaps: &[f64]) -> f64 {
    let mut delta = f64::INFINITY;
    for (k, &gk) in gaps.iter().enumerate() {
        let mut prod = 1.0;
        for (j, &gj) in gaps.iter().enumerate() {
            if j != k {
                prod *= (gj - gk).abs() / (gj + gk - gj * gk);
            }
        }
        delta = delta.min(prod);
    }
    if gaps.len() == 1 {
        1.0
    } else {
        delta
    }
}

pub fn lastmin_lower_bound(phi: &dyn Symbol, sigma: f64, n: usize, c_prime: f64) -> Result<LastminBound> {
    if n == 0 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    let chain = lastmin_points(phi, sigma, n)?;
    let mu_sq = chain
        .u_gaps
        .iter()
        .zip(&chain.v_gaps)
        .map(|(&du, &dv)| du * (2.0 - du) / (dv * (2.0 - dv)))
        .fold(f64::INFINITY, f64::min);
    let mu = mu_sq.sqrt();
    let delta_v = carleson_delta_gaps(&chain.v_gaps);
    Ok(LastminBound {
        bound: c_prime * delta_v.powi(4) * mu,
        delta_v,
        mu,
        newman_reference: (-5.0 / (1.0 - sigma)).exp(),
        chain,
    })
}

/// ∏_{l ≥ 1} ((1 − σ^l)/(1 + σ^l))², stopping once factors exceed 1 − 1e−15.
pub fn newman_product(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::Argument(format!("σ = {sigma} not in (0, 1)")));
    }
    let mut log = 0.0;
    let mut power = sigma;
    loop {
        let factor = (1.0 - power) / (1.0 + power);
        if factor > 1.0 - 1e-15 {
            break;
        }
        log += 2.0 * factor.ln();
        power *= sigma;
    }
    Ok(log.exp())
}

/// Point families tried by [`kernel_lower_curve`], as gaps δ_j.
fn candidate_families(phi: &dyn Symbol, n: usize) -> Vec<(String, Vec<f64>)> {
    let mut out = Vec::new();
    for i in 0..35 {
        let rho = 0.30 + 0.02 * i as f64;
        if rho.powi(n as i32) < 1e-15 {
            continue;
        }
        out.push((
            format!("geometric {rho:.2}"),
            (1..=n).map(|j| rho.powi(j as i32)).collect(),
        ));
    }
    let nf = n as f64;
    out.push((
        "chebyshev".into(),
        (1..=n)
            .map(|j| {
                let theta = PI * (2.0 * j as f64 - 1.0) / (4.0 * nf);
                2.0 * (0.5 * theta).sin().powi(2)
            })
            .rev()
            .collect(),
    ));
    for sigma in default_sigma_grid(n as u32) {
        if let Ok(chain) = lastmin_points(phi, sigma, n) {
            out.push((format!("chain σ = {sigma:.4}"), chain.u_gaps));
        }
    }
    out
}

/// For each n the best certified kernel bound over the candidate real point families.
pub fn kernel_lower_curve(phi: &dyn Symbol, ns: &[usize]) -> Result<Vec<CurvePoint>> {
    if !phi.real_on_reals() {
        return Err(Error::Argument(format!("{} is not real on the reals", phi.id())));
    }
    let mut out = Vec::new();
    for &n in ns {
        let mut best: Option<CurvePoint> = None;
        for (name, gaps) in candidate_families(phi, n) {
            if let Ok(value) = kernel_lower_bound_real(phi, &gaps) {
                if best.as_ref().is_none_or(|b| value > b.value) {
                    best = Some(CurvePoint {
                        n,
                        value,
                        source: name,
                    });
                }
            }
        }
        if let Some(b) = best {
            out.push(b);
        }
    }
    Ok(out)
}

/// For each n the best c′ = 1 chain bound over the default σ grid.
pub fn lastmin_lower_curve(phi: &dyn Symbol, ns: &[usize]) -> Vec<CurvePoint> {
    ns.iter()
        .filter_map(|&n| {
            default_sigma_grid(n as u32)
                .into_iter()
                .filter_map(|sigma| {
                    lastmin_lower_bound(phi, sigma, n, 1.0).ok().map(|b| CurvePoint {
                        n,
                        value: b.bound,
                        source: format!("σ = {sigma:.4}"),
                    })
                })
                .filter(|p| p.value > 0.0)
                .max_by(|a, b| a.value.total_cmp(&b.value))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{Constant, Cusp, Dilation, Identity};

    fn dp(x: f64) -> DiskPoint {
        DiskPoint::real(x).unwrap()
    }

    #[test]
    fn kernel_bound_examples() {
        let pts = [dp(0.1), dp(0.5), dp(0.8)];
        assert!((kernel_lower_bound(&Identity, &pts).unwrap() - 1.0).abs() < 1e-12);
        let r = 0.6;
        let u: f64 = 0.7;
        let phi = Dilation::new(Complex64::new(r, 0.0)).unwrap();
        let closed = ((1.0 - u * u) / (1.0 - r * r * u * u)).sqrt();
        assert!((kernel_lower_bound(&phi, &[dp(u)]).unwrap() - closed).abs() < 1e-12);
        let c = Constant::new(Complex64::new(0.3, 0.0)).unwrap();
        assert_eq!(kernel_lower_bound(&c, &[dp(0.2), dp(0.6)]).unwrap(), 0.0);
        assert!(matches!(
            kernel_lower_bound(&Identity, &[dp(0.5), dp(0.5)]),
            Err(Error::Conditioning { .. })
        ));
        let real = kernel_lower_bound_real(&phi, &[0.3]).unwrap();
        assert!((real - closed).abs() < 1e-12);
    }

    #[test]
    fn identity_chain() {
        let chain = lastmin_points(&Identity, 0.5, 6).unwrap();
        for (j, u) in chain.u().iter().enumerate() {
            assert!((u - (1.0 - 0.5f64.powi(j as i32 + 1))).abs() < 1e-12);
        }
        let b = lastmin_lower_bound(&Identity, 0.5, 2, 1.0).unwrap();
        assert!((b.delta_v - 0.4).abs() < 1e-12);
        assert!((b.mu - 1.0).abs() < 1e-12);
        assert!((b.bound - 0.0256).abs() < 1e-12);
    }

    #[test]
    fn cusp_chain_recursion() {
        let chain = lastmin_points(&Cusp, 0.5, 8).unwrap();
        let (step, last) = chain.recursion_errors();
        assert!(step < 1e-10 && last < 1e-8, "{step} {last}");
    }

    #[test]
    fn newman_products() {
        for k in 1..=9 {
            let s = k as f64 / 10.0;
            assert!(newman_product(s).unwrap() >= (-5.0 / (1.0 - s)).exp());
        }
    }

    #[test]
    fn identity_statistic_does_not_decay() {
        let sched = BlaschkeSchedule::new(vec![BoundaryAngle::new(0.0)], 1, 1).unwrap();
        #[derive(Debug)]
        struct Touching;
        impl Symbol for Touching {
            fn id(&self) -> String {
                "id".into()
            }
            fn eval(&self, z: Complex64) -> Complex64 {
                z
            }
            fn contact_angles(&self) -> Vec<f64> {
                vec![0.0]
            }
        }
        let s = blaschke_upper_statistic(&Touching, &sched, 20).unwrap();
        for w in s.windows.iter().filter(|w| w.center == 0.0 && w.level >= 4) {
            assert!(w.value >= 0.95 / PI, "{w:?}");
        }
    }
}
