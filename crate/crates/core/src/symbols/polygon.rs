//! Schwarz–Christoffel map of the disk onto the regular p-gon inscribed in the circle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use super::{anchor_point, contact_angles_of_roots, unit_point, Symbol, ONE};
use crate::error::{numeric, Error, Result};
use crate::hardy::basis::{KernelBasisPlan, Ray};
use crate::modulus::ModulusOfContinuity;
use crate::quad::{reference_rule, Breakpoint};

const AGREEMENT: f64 = 1e-10;
const MIN_LEVELS: u32 = 30;

#[derive(Debug, Clone, Copy)]
pub struct ScPolygon {
    p: u32,
    /// exponent of the substitution s = 1 − τ^k absorbing the vertex singularity
    k: f64,
    scale: f64,
}

impl ScPolygon {
    pub fn new(p: u32) -> Result<Self> {
        if p < 3 {
            return Err(Error::Argument(format!("polygon order {p} must be at least 3")));
        }
        let pf = p as f64;
        let scale = pf * gamma(1.0 - 1.0 / pf) / (gamma(1.0 / pf) * gamma(1.0 - 2.0 / pf));
        let poly = Self {
            p,
            k: pf / (pf - 2.0),
            scale,
        };
        let v = poly.try_eval_offset(ONE, Complex64::new(0.0, 0.0))?;
        if (v - ONE).norm() > 1e-9 {
            return Err(numeric(format!("vertex normalization off by {}", (v - ONE).norm()), v.norm()));
        }
        Ok(poly)
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    /// Interior angle exponent 1 − 2/p at each vertex.
    pub fn vertex_exponent(&self) -> f64 {
        1.0 - 2.0 / self.p as f64
    }

    /// ∫₀^{τmax} kτ^{k−1}(1 − ζ(1−τ^k)^p)^{−2/p} dτ on panels graded toward τ = 0.
    fn integral(&self, one_minus_zeta: Complex64, zeta: Complex64, tau_max: f64, levels: u32, split: u32) -> Complex64 {
        let pf = self.p as f64;
        let mu = -2.0 / pf;
        let k = self.k;
        let rule = reference_rule();
        let mut edges = vec![0.0];
        for j in (0..=levels).rev() {
            edges.push(tau_max * 0.5f64.powi(j as i32));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for pair in edges.windows(2) {
            let width = (pair[1] - pair[0]) / split as f64;
            for m in 0..split {
                let a = pair[0] + width * m as f64;
                let half = 0.5 * width;
                let mid = a + half;
                for &(x, w) in rule {
                    let tau = mid + half * x;
                    let tk = tau.powf(k);
                    // 1 − s^p with s = 1 − τ^k
                    let u = -(pf * (-tk).ln_1p()).exp_m1();
                    let base = one_minus_zeta + zeta * u;
                    let jac = k * tau.powf(k - 1.0);
                    let f = if base == Complex64::new(0.0, 0.0) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        base.powf(mu)
                    };
                    total += half * w * jac * f;
                }
            }
        }
        total
    }

    fn adaptive(&self, one_minus_zeta: Complex64, zeta: Complex64, tau_max: f64) -> Result<Complex64> {
        let gap = one_minus_zeta.norm();
        let mut levels = MIN_LEVELS;
        if gap > 0.0 {
            let scale = (gap / self.p as f64).powf(1.0 / self.k) / tau_max;
            if scale < 1.0 {
                levels += (-scale.log2()).ceil() as u32;
            }
        }
        let mut prev = self.integral(one_minus_zeta, zeta, tau_max, levels, 1);
        let mut split = 1;
        for _ in 0..4 {
            levels += 8;
            split *= 2;
            let next = self.integral(one_minus_zeta, zeta, tau_max, levels, split);
            let diff = (next - prev).norm();
            if diff <= AGREEMENT * next.norm().max(1e-300) {
                return Ok(next);
            }
            prev = next;
        }
        Err(numeric(
            format!("polygon quadrature did not settle at ζ = {zeta}"),
            (prev.norm()).max(0.0),
        ))
    }

    /// Evaluation with quadrature diagnostics; `zm1` is z − 1.
    pub fn try_eval_offset(&self, z: Complex64, zm1: Complex64) -> Result<Complex64> {
        let zeta = z.powu(self.p);
        // 1 − z^p = −(z − 1)(1 + z + … + z^{p−1})
        let mut geometric = Complex64::new(0.0, 0.0);
        let mut zpow = ONE;
        for _ in 0..self.p {
            geometric += zpow;
            zpow *= z;
        }
        let one_minus_zeta = -zm1 * geometric;
        let integral = self.adaptive(one_minus_zeta, zeta, 1.0)?;
        Ok(self.scale * z * integral)
    }

    pub fn try_eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() <= 1.0 + 1e-14) {
            return Err(Error::Domain(format!("{z} lies outside the closed unit disk")));
        }
        self.try_eval_offset(z, z - ONE)
    }
}

impl Symbol for ScPolygon {
    fn id(&self) -> String {
        format!("polygon:{}", self.p)
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_offset(z, z - ONE)
    }

    fn eval_offset(&self, z: Complex64, zm1: Complex64) -> Complex64 {
        self.try_eval_offset(z, zm1)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn boundary_near(&self, anchor: f64, offset: f64) -> Complex64 {
        // φ(ωz) = ωφ(z) for p-th roots of unity ω
        let steps = anchor * self.p as f64 / TAU;
        if (steps - steps.round()).abs() < 1e-12 {
            let (w, _) = anchor_point(anchor);
            return w * self.boundary(offset);
        }
        let (w, wm1) = anchor_point(anchor);
        let (e, em1) = unit_point(offset);
        self.eval_offset(w * e, w * em1 + wm1)
    }

    fn contact_angles(&self) -> Vec<f64> {
        contact_angles_of_roots(0.0, self.p)
    }

    fn real_on_reals(&self) -> bool {
        true
    }

    fn modulus(&self) -> Option<ModulusOfContinuity> {
        ModulusOfContinuity::power(self.vertex_exponent()).ok()
    }

    fn radial_gap(&self, delta: f64) -> f64 {
        if delta <= 0.0 {
            return 0.0;
        }
        // 1 − φ(1 − δ) = A∫_{1−δ}^{1} (1 − x^p)^{−2/p} dx
        let tau_max = delta.min(1.0).powf(1.0 / self.k);
        match self.adaptive(Complex64::new(0.0, 0.0), ONE, tau_max) {
            Ok(v) => self.scale * v.re,
            Err(_) => 1.0 - self.eval(Complex64::new(1.0 - delta, 0.0)).re,
        }
    }

    fn basis_plan(&self) -> Option<KernelBasisPlan> {
        let angles = self.contact_angles();
        Some(KernelBasisPlan {
            ratio: 0.93,
            rays: angles.iter().map(|&angle| Ray { angle, depth: 1e-3 }).collect(),
            breakpoints: angles
                .iter()
                .map(|&angle| Breakpoint { angle, levels: 100 })
                .collect(),
        })
    }
}

/// Whether `w` lies in the closed regular p-gon with vertices at the p-th roots of unity.
pub fn inside_regular_polygon(w: Complex64, p: u32, tol: f64) -> bool {
    let apothem = (std::f64::consts::PI / p as f64).cos();
    (0..p).all(|j| {
        let normal = Complex64::from_polar(1.0, TAU * (j as f64 + 0.5) / p as f64);
        (w * normal.conj()).re <= apothem + tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_normalization() {
        let sq = ScPolygon::new(4).unwrap();
        assert!((sq.scale - 0.7627).abs() < 1e-4);
        assert_eq!(sq.eval(Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
        let a1 = Complex64::new(0.0, 1.0);
        assert!((sq.eval(a1).norm() - 1.0).abs() < 1e-9);
        assert!(ScPolygon::new(2).is_err());
    }

    #[test]
    fn rotational_symmetry() {
        for p in [3, 4, 6] {
            let poly = ScPolygon::new(p).unwrap();
            let rot = Complex64::from_polar(1.0, TAU / p as f64);
            for &z in &[
                Complex64::new(0.3, 0.1),
                Complex64::new(-0.5, 0.6),
                Complex64::new(0.9, -0.2),
            ] {
                let lhs = poly.eval(rot * z);
                let rhs = rot * poly.eval(z);
                assert!((lhs - rhs).norm() < 1e-10, "p = {p}");
            }
        }
    }

    #[test]
    fn radial_values_match_hypergeometric_series() {
        // φ(r) = A·r·₂F₁(2/p, 1/p; 1 + 1/p; r^p) for p = 4 at r = 0.5
        let sq = ScPolygon::new(4).unwrap();
        let x: f64 = 0.5f64.powi(4);
        let (a, b, c) = (0.5, 0.25, 1.25);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..200 {
            let nf = n as f64;
            term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
            sum += term;
        }
        let expected = sq.scale * 0.5 * sum;
        assert!((sq.eval(Complex64::new(0.5, 0.0)).re - expected).abs() < 1e-12);
        let d = 1e-3;
        assert!((sq.radial_gap(d) - (1.0 - sq.eval(Complex64::new(1.0 - d, 0.0)).re)).abs() < 1e-12);
    }

    #[test]
    fn boundary_stays_in_the_polygon() {
        let sq = ScPolygon::new(4).unwrap();
        for k in 0..512 {
            let t = -std::f64::consts::PI + TAU * (k as f64 + 0.37) / 512.0;
            let (z, zm1) = unit_point(t);
            let w = sq.eval_offset(z, zm1);
            assert!(inside_regular_polygon(w, 4, 1e-8), "t = {t}: {w}");
            assert!(w.norm() <= 1.0 + 1e-10);
        }
    }
}
