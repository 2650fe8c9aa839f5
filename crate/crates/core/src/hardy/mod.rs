//! Truncations of C_φ on H², their singular values, and boundary pull-back measures.

pub mod basis;

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::disk::CarlesonWindow;
use crate::error::{numeric, Error, Result};
use crate::quad::{reduce_angle, Breakpoint, CircleRule, PANEL_ORDER};
use crate::symbols::Symbol;

pub use basis::{restricted_singular_values, KernelBasisPlan, Ray};

/// Unit roundoff of IEEE doubles.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;
const FLOOR_FACTOR: f64 = 1000.0;
const STABILIZATION_TOL: f64 = 1e-12;
const MAX_DOUBLINGS: u32 = 4;
/// Relative change between the two resolutions below which a value counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-3;
/// Halvings of the measure quadrature toward each contact angle.
const MEASURE_LEVELS: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    #[default]
    Double,
    Extended {
        digits: u32,
    },
}

impl Precision {
    fn require_double(self) -> Result<()> {
        match self {
            Precision::Double => Ok(()),
            Precision::Extended { digits } => Err(Error::Unsupported(format!(
                "{digits}-digit arithmetic is not available in this build; use double precision"
            ))),
        }
    }
}

/// N×N block of ⟨C_φ z^m, z^n⟩.
#[derive(Debug, Clone)]
pub struct GalerkinMatrix {
    pub entries: DMatrix<Complex64>,
    pub provenance: MatrixProvenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixProvenance {
    /// sampling radius, absent when the coefficients are exact
    pub radius: Option<f64>,
    pub samples: Option<usize>,
    pub stabilization_error: f64,
    pub exact: bool,
}

impl GalerkinMatrix {
    pub fn size(&self) -> usize {
        self.entries.ncols()
    }
}

/// Taylor coefficients of φ^m, m < N, truncated to N terms.
pub fn build_matrix(phi: &dyn Symbol, size: usize, precision: Precision) -> Result<GalerkinMatrix> {
    precision.require_double()?;
    if size == 0 {
        return Err(Error::Argument("matrix size must be at least 1".into()));
    }
    if let Some(coeffs) = phi.polynomial() {
        return Ok(GalerkinMatrix {
            entries: polynomial_matrix(&coeffs, size),
            provenance: MatrixProvenance {
                radius: None,
                samples: None,
                stabilization_error: 0.0,
                exact: true,
            },
        });
    }
    let radius = 1.0 - 1.0 / (8.0 * size as f64);
    let mut samples = (16 * size).next_power_of_two();
    let mut prev = sampled_matrix(phi, size, radius, samples);
    let mut err = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        samples *= 2;
        let next = sampled_matrix(phi, size, radius, samples);
        err = (&next - &prev).iter().map(|v| v.norm()).fold(0.0, f64::max);
        let scale = next.iter().map(|v| v.norm()).fold(1.0, f64::max);
        if err <= STABILIZATION_TOL * scale {
            return Ok(GalerkinMatrix {
                entries: next,
                provenance: MatrixProvenance {
                    radius: Some(radius),
                    samples: Some(samples),
                    stabilization_error: err,
                    exact: false,
                },
            });
        }
        prev = next;
    }
    Err(numeric(
        format!("Taylor coefficients did not stabilize after {MAX_DOUBLINGS} doublings (M = {samples})"),
        err,
    ))
}

fn polynomial_matrix(coeffs: &[Complex64], size: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(size, size);
    let mut col = vec![Complex64::new(0.0, 0.0); size];
    col[0] = Complex64::new(1.0, 0.0);
    for j in 0..size {
        for (i, &v) in col.iter().enumerate() {
            m[(i, j)] = v;
        }
        let mut next = vec![Complex64::new(0.0, 0.0); size];
        for (i, &v) in col.iter().enumerate() {
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (k, &c) in coeffs.iter().enumerate() {
                if i + k < size {
                    next[i + k] += v * c;
                }
            }
        }
        col = next;
    }
    m
}

fn sampled_matrix(phi: &dyn Symbol, size: usize, radius: f64, samples: usize) -> DMatrix<Complex64> {
    let values: Vec<Complex64> = (0..samples)
        .map(|k| phi.eval(Complex64::from_polar(radius, TAU * k as f64 / samples as f64)))
        .collect();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(samples);
    let rescale: Vec<f64> = (0..size)
        .map(|n| radius.powi(-(n as i32)) / samples as f64)
        .collect();
    let mut m = DMatrix::<Complex64>::zeros(size, size);
    let mut power = vec![Complex64::new(1.0, 0.0); samples];
    let mut buf = vec![Complex64::new(0.0, 0.0); samples];
    for j in 0..size {
        buf.copy_from_slice(&power);
        fft.process(&mut buf);
        for n in 0..size {
            m[(n, j)] = buf[n] * rescale[n];
        }
        for (p, v) in power.iter_mut().zip(&values) {
            *p *= v;
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    /// monomial truncation via boundary sampling
    Galerkin,
    /// restriction to spans of reproducing kernels on rays toward the contacts
    KernelBasis,
}

/// Agreement between two resolutions of the same spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub coarse_label: String,
    pub fine_label: String,
    /// max over reliable n of |s_n(fine) − s_n(coarse)|/s_n(fine)
    pub max_relative_change: f64,
    pub converged: Vec<bool>,
    /// leading run of converged values
    pub converged_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularValueSpectrum {
    pub values: Vec<f64>,
    pub reliable: Vec<bool>,
    pub reliable_count: usize,
    pub floor: f64,
    pub floor_rule: String,
    pub method: SpectrumMethod,
    pub convergence: Option<ConvergenceRecord>,
}

impl SingularValueSpectrum {
    pub fn from_values(mut values: Vec<f64>, method: SpectrumMethod) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        let s1 = values.first().copied().unwrap_or(0.0);
        let floor = FLOOR_FACTOR * UNIT_ROUNDOFF * s1;
        let reliable: Vec<bool> = values.iter().map(|&v| v > floor).collect();
        let reliable_count = reliable.iter().take_while(|&&r| r).count();
        Self {
            values,
            reliable,
            reliable_count,
            floor,
            floor_rule: "1000 · unit roundoff · s_1".into(),
            method,
            convergence: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// s_n with 1-based n.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    /// Number of leading values that are both above the floor and converged.
    pub fn trusted_count(&self) -> usize {
        match &self.convergence {
            Some(c) => self.reliable_count.min(c.converged_count),
            None => self.reliable_count,
        }
    }

    fn truncate(mut self, n_max: usize) -> Self {
        self.values.truncate(n_max);
        self.reliable.truncate(n_max);
        self.reliable_count = self.reliable_count.min(n_max);
        self
    }

    fn attach_convergence(&mut self, coarse: &[f64], coarse_label: String, fine_label: String) {
        let n = self.values.len();
        let mut converged = vec![false; n];
        let mut worst: f64 = 0.0;
        for i in 0..n {
            if let Some(&c) = coarse.get(i) {
                let rel = (self.values[i] - c).abs() / self.values[i];
                converged[i] = rel <= CONVERGENCE_TOL;
                if self.reliable[i] {
                    worst = worst.max(rel);
                }
            }
        }
        let converged_count = converged.iter().take_while(|&&c| c).count();
        self.convergence = Some(ConvergenceRecord {
            coarse_label,
            fine_label,
            max_relative_change: worst,
            converged,
            converged_count,
        });
    }
}

pub fn singular_values(matrix: &GalerkinMatrix) -> Result<SingularValueSpectrum> {
    if matrix.entries.iter().any(|v| !v.is_finite()) {
        return Err(numeric("matrix has non-finite entries", f64::NAN));
    }
    let svd = matrix
        .entries
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| numeric("SVD did not converge", f64::NAN))?;
    Ok(SingularValueSpectrum::from_values(
        svd.singular_values.as_slice().to_vec(),
        SpectrumMethod::Galerkin,
    ))
}

/// The method used when none is requested: exact monomial truncation for polynomial
/// symbols and for symbols without kernel points, the kernel basis otherwise.
pub fn default_method(phi: &dyn Symbol) -> SpectrumMethod {
    if phi.polynomial().is_some() || phi.basis_plan().is_none() {
        SpectrumMethod::Galerkin
    } else {
        SpectrumMethod::KernelBasis
    }
}

/// Approximation numbers s_1 ≥ … ≥ s_{n_max} with a two-resolution convergence record.
pub fn approx_numbers(phi: &dyn Symbol, n_max: usize, precision: Precision) -> Result<SingularValueSpectrum> {
    approx_numbers_with(phi, n_max, precision, default_method(phi))
}

pub fn approx_numbers_with(
    phi: &dyn Symbol,
    n_max: usize,
    precision: Precision,
    method: SpectrumMethod,
) -> Result<SingularValueSpectrum> {
    precision.require_double()?;
    if n_max == 0 {
        return Err(Error::Argument("n_max must be at least 1".into()));
    }
    match method {
        SpectrumMethod::Galerkin => {
            let size = 4 * n_max;
            let coarse = singular_values(&build_matrix(phi, size, precision)?)?;
            let fine = singular_values(&build_matrix(phi, 2 * size, precision)?)?;
            let mut out = fine.truncate(n_max);
            out.attach_convergence(&coarse.values, format!("N = {size}"), format!("N = {}", 2 * size));
            Ok(out)
        }
        SpectrumMethod::KernelBasis => {
            let plan = phi.basis_plan().ok_or_else(|| {
                Error::Unsupported(format!("no kernel basis plan for {}", phi.id()))
            })?;
            let fine_plan = plan.refined();
            let coarse = restricted_singular_values(phi, &plan)?;
            let fine = restricted_singular_values(phi, &fine_plan)?;
            let mut out = SpectrumMethod::KernelBasis.spectrum(fine).truncate(n_max);
            out.attach_convergence(
                &coarse,
                format!("ratio {}", plan.ratio),
                format!("ratio {}", fine_plan.ratio),
            );
            Ok(out)
        }
    }
}

impl SpectrumMethod {
    fn spectrum(self, values: Vec<f64>) -> SingularValueSpectrum {
        SingularValueSpectrum::from_values(values, self)
    }
}

/// A grid measure together with its value on the half-resolution grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub coarse: f64,
}

impl MeasureEstimate {
    pub fn change(&self) -> f64 {
        (self.value - self.coarse).abs()
    }
}

/// Quadrature with about `t_grid` nodes away from the contacts, graded deep toward them.
fn measure_rule(phi: &dyn Symbol, t_grid: usize) -> CircleRule {
    let breakpoints: Vec<Breakpoint> = phi
        .contact_angles()
        .into_iter()
        .map(|angle| Breakpoint {
            angle,
            levels: MEASURE_LEVELS,
        })
        .collect();
    let max_width = TAU * PANEL_ORDER as f64 / t_grid.max(PANEL_ORDER) as f64;
    CircleRule::graded_capped(&breakpoints, max_width)
}

fn pullback_on(phi: &dyn Symbol, window: &CarlesonWindow, t_grid: usize) -> f64 {
    let rule = measure_rule(phi, t_grid);
    let xi = window.center.point();
    (0..rule.len())
        .filter(|&i| (phi.boundary_near(rule.anchors[i], rule.offsets[i]) - xi).norm() <= window.radius)
        .map(|i| rule.weights[i])
        .sum::<f64>()
        .min(1.0)
}

/// m({t : γ(t) ∈ S(ξ, h)}) for normalized arc length.
pub fn window_pullback_measure(phi: &dyn Symbol, window: &CarlesonWindow, t_grid: usize) -> MeasureEstimate {
    MeasureEstimate {
        value: pullback_on(phi, window, 2 * t_grid),
        coarse: pullback_on(phi, window, t_grid),
    }
}

fn carleson_on(phi: &dyn Symbol, h: f64, xi_grid: usize, t_grid: usize) -> f64 {
    let rule = measure_rule(phi, t_grid);
    // boundary points with |ψ| ≥ 1 − h, kept as (argument, weight)
    let mut near: Vec<(f64, f64)> = (0..rule.len())
        .filter(|&i| phi.boundary_gap_near(rule.anchors[i], rule.offsets[i]) <= h)
        .map(|i| (phi.boundary_near(rule.anchors[i], rule.offsets[i]).arg(), rule.weights[i]))
        .collect();
    near.sort_by(|a, b| a.0.total_cmp(&b.0));
    let xi_grid = xi_grid.max(1);
    (0..xi_grid)
        .map(|k| {
            let xi = -PI + TAU * k as f64 / xi_grid as f64;
            near.iter()
                .filter(|(arg, _)| reduce_angle(arg - xi).abs() <= PI * h)
                .map(|(_, w)| w)
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
        .min(1.0)
}

/// ρ_ψ(h) = sup_ξ m({|ψ| ≥ 1 − h, |arg(ψ·conj ξ)| ≤ πh}) over a uniform ξ grid.
pub fn carleson_function(phi: &dyn Symbol, h: f64, xi_grid: usize, t_grid: usize) -> Result<MeasureEstimate> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::Argument(format!("h = {h} not in (0, 1)")));
    }
    Ok(MeasureEstimate {
        value: carleson_on(phi, h, 2 * xi_grid, 2 * t_grid),
        coarse: carleson_on(phi, h, xi_grid, t_grid),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::BoundaryAngle;
    use crate::symbols::{Constant, Cusp, Dilation, Identity, Polynomial};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn exact_matrices() {
        let m = build_matrix(&Dilation::new(c(0.7)).unwrap(), 8, Precision::Double).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let expected = if i == j { 0.7f64.powi(j as i32) } else { 0.0 };
                assert!((m.entries[(i, j)] - c(expected)).norm() < 1e-15);
            }
        }
        let sq = build_matrix(&Polynomial::monomial(2), 9, Precision::Double).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let expected = if i == 2 * j { 1.0 } else { 0.0 };
                assert_eq!(sq.entries[(i, j)], c(expected));
            }
        }
        let k = build_matrix(&Constant::new(c(0.5)).unwrap(), 6, Precision::Double).unwrap();
        for j in 0..6 {
            assert_eq!(k.entries[(0, j)], c(0.5f64.powi(j as i32)));
            for i in 1..6 {
                assert_eq!(k.entries[(i, j)], c(0.0));
            }
        }
    }

    #[test]
    fn sampled_matrix_matches_exact_convolution() {
        #[derive(Debug)]
        struct Sampled(Polynomial);
        impl Symbol for Sampled {
            fn id(&self) -> String {
                "sampled".into()
            }
            fn eval(&self, z: Complex64) -> Complex64 {
                self.0.eval(z)
            }
        }
        let p = Polynomial::new(vec![c(0.0), c(0.5), c(0.5)]).unwrap();
        let exact = build_matrix(&p, 24, Precision::Double).unwrap();
        let sampled = build_matrix(&Sampled(p), 24, Precision::Double).unwrap();
        let diff = (&exact.entries - &sampled.entries).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-10, "{diff}");
    }

    #[test]
    fn spectra_of_simple_maps() {
        let s = singular_values(&build_matrix(&Dilation::new(c(0.7)).unwrap(), 64, Precision::Double).unwrap()).unwrap();
        for n in 1..=s.reliable_count {
            assert!((s.get(n).unwrap() - 0.7f64.powi(n as i32 - 1)).abs() < 1e-12);
        }
        let s = singular_values(&build_matrix(&Constant::new(c(0.5)).unwrap(), 64, Precision::Double).unwrap()).unwrap();
        assert!((s.values[0] - 2.0 / 3f64.sqrt()).abs() < 1e-6);
        assert!(s.values[1] < 1e-12);
        let s = approx_numbers(&Identity, 10, Precision::Double).unwrap();
        assert!(s.values.iter().all(|&v| (v - 1.0).abs() < 1e-14));
        assert!(approx_numbers(&Identity, 4, Precision::Extended { digits: 40 }).is_err());
    }

    #[test]
    fn pullback_measures() {
        let whole = CarlesonWindow::new(BoundaryAngle::new(0.0), 2.0).unwrap();
        assert!((window_pullback_measure(&Identity, &whole, 4096).value - 1.0).abs() < 1e-12);
        let h: f64 = 0.01;
        let w = CarlesonWindow::new(BoundaryAngle::new(0.0), h).unwrap();
        let m = window_pullback_measure(&Identity, &w, 1 << 16).value;
        let exact = 2.0 * (h / 2.0).asin() / PI;
        assert!((m - exact).abs() < 2e-4, "{m} vs {exact}");
        let far = CarlesonWindow::new(BoundaryAngle::new(PI), 0.3).unwrap();
        assert_eq!(window_pullback_measure(&Constant::new(c(0.5)).unwrap(), &far, 4096).value, 0.0);
    }

    #[test]
    fn carleson_function_examples() {
        for k in 3..=8 {
            let h = 0.5f64.powi(k);
            let r = carleson_function(&Identity, h, 512, 1 << 14).unwrap().value;
            assert!((r / h - 1.0).abs() < 0.1, "h = {h}: {r}");
        }
        assert_eq!(carleson_function(&Constant::new(c(0.5)).unwrap(), 0.25, 64, 4096).unwrap().value, 0.0);
        let mut prev = f64::INFINITY;
        for k in 3..=8 {
            let h = 0.5f64.powi(k);
            let ratio = carleson_function(&Cusp, h, 512, 1 << 14).unwrap().value / h;
            assert!(ratio < prev, "h = {h}: {ratio} vs {prev}");
            prev = ratio;
        }
    }
}
