//! The cusp map: a conformal map onto a domain touching the circle only at 1,
//! with a cusp there.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::{unit_point, Symbol, I, ONE};
use crate::error::{Error, Result};
use crate::hardy::basis::{KernelBasisPlan, Ray};
use crate::modulus::ModulusOfContinuity;
use crate::quad::Breakpoint;

/// φ₀ in the closed upper half-disk, given z and z − 1.
fn phi0_upper(z: Complex64, zm1: Complex64) -> Complex64 {
    let izm1 = I * z - ONE;
    let mut s = (z - I) / izm1;
    // the disk maps into the closed upper half-plane; pin boundary rounding there
    if s.im < 0.0 {
        s.im = 0.0;
    }
    let w = s.sqrt();
    (ONE + I) * zm1 / (izm1 * (w + I) * (ONE - I * w))
}

pub(crate) fn phi0_offset(z: Complex64, zm1: Complex64) -> Complex64 {
    if zm1 == Complex64::new(0.0, 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    if z.im < 0.0 {
        phi0_upper(z.conj(), zm1.conj()).conj()
    } else {
        phi0_upper(z, zm1)
    }
}

/// The outer chain z ↦ 1 − 1/(1 − (2/π)·log φ₀).
pub(crate) fn cusp_from_phi0(p0: Complex64) -> Complex64 {
    if p0 == Complex64::new(0.0, 0.0) {
        return ONE;
    }
    let phi2 = ONE - (2.0 / PI) * p0.ln();
    ONE - ONE / phi2
}

/// φ₀(z): the disk onto the right half-disk, with φ₀(1) = 0 and φ₀(±i) = ∓i.
pub fn cusp_phi0(z: Complex64) -> Result<Complex64> {
    if !(z.norm() <= 1.0 + 1e-14) {
        return Err(Error::Domain(format!("{z} lies outside the closed unit disk")));
    }
    Ok(phi0_offset(z, z - ONE))
}

pub fn cusp(z: Complex64) -> Result<Complex64> {
    Ok(cusp_from_phi0(cusp_phi0(z)?))
}

/// 1 − φ(1 − δ) for the cusp map, without cancellation.
pub(crate) fn cusp_radial_gap(delta: f64) -> f64 {
    if delta <= 0.0 {
        return 0.0;
    }
    // on the real axis φ₀(r) = tan(γ/2) with γ = π/4 − arctan r = arctan((1−r)/(1+r))
    let gamma = (delta / (2.0 - delta)).atan();
    let p0 = (0.5 * gamma).tan();
    1.0 / (1.0 - (2.0 / PI) * p0.ln())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Cusp;

impl Symbol for Cusp {
    fn id(&self) -> String {
        "cusp".into()
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        cusp_from_phi0(phi0_offset(z, z - ONE))
    }

    fn eval_offset(&self, z: Complex64, zm1: Complex64) -> Complex64 {
        cusp_from_phi0(phi0_offset(z, zm1))
    }

    fn boundary(&self, t: f64) -> Complex64 {
        let (z, zm1) = unit_point(t);
        self.eval_offset(z, zm1)
    }

    fn contact_angles(&self) -> Vec<f64> {
        vec![0.0]
    }

    fn singular_angles(&self) -> Vec<f64> {
        vec![FRAC_PI_2, -FRAC_PI_2]
    }

    fn real_on_reals(&self) -> bool {
        true
    }

    fn modulus(&self) -> Option<ModulusOfContinuity> {
        ModulusOfContinuity::inv_log(1.0).ok()
    }

    fn radial_gap(&self, delta: f64) -> f64 {
        cusp_radial_gap(delta)
    }

    fn basis_plan(&self) -> Option<KernelBasisPlan> {
        Some(KernelBasisPlan {
            ratio: 0.93,
            rays: vec![
                Ray { angle: 0.0, depth: 1e-4 },
                Ray { angle: FRAC_PI_2, depth: 1e-4 },
                Ray { angle: -FRAC_PI_2, depth: 1e-4 },
            ],
            breakpoints: vec![
                Breakpoint { angle: 0.0, levels: 100 },
                Breakpoint { angle: FRAC_PI_2, levels: 30 },
                Breakpoint { angle: -FRAC_PI_2, levels: 30 },
            ],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phi0_point_values() {
        assert_eq!(cusp_phi0(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((cusp_phi0(c(-1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((cusp_phi0(I).unwrap() - c(0.0, -1.0)).norm() < 1e-15);
        assert!((cusp_phi0(-I).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert!((cusp_phi0(c(0.0, 0.0)).unwrap() - c(2f64.sqrt() - 1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phi0_on_the_radius() {
        for k in 0..10 {
            let r = k as f64 / 10.0;
            let gamma = PI / 4.0 - r.atan();
            let v = cusp_phi0(c(r, 0.0)).unwrap();
            assert!((v - c((gamma / 2.0).tan(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn cusp_point_values() {
        assert_eq!(cusp(c(1.0, 0.0)).unwrap(), ONE);
        assert!(cusp(c(-1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((cusp(I).unwrap() - c(0.5, 0.5)).norm() < 1e-15);
        assert!((cusp(-I).unwrap() - c(0.5, -0.5)).norm() < 1e-15);
        let expected = 1.0 - 1.0 / (1.0 + (2.0 / PI) * (2f64.sqrt() + 1.0).ln());
        assert!((cusp(c(0.0, 0.0)).unwrap() - c(expected, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn boundary_trace_stays_in_the_closed_disk() {
        for k in 0..4096 {
            let t = -PI + 2.0 * PI * k as f64 / 4096.0;
            let g = Cusp.boundary(t);
            assert!(g.norm() <= 1.0 + 1e-13, "t = {t}: {g}");
            assert!(phi0_offset(unit_point(t).0, unit_point(t).1).re >= -1e-12);
        }
    }

    #[test]
    fn radial_gap_matches_direct_evaluation() {
        for &d in &[0.5, 0.1, 1e-3, 1e-6] {
            let direct = 1.0 - Cusp.eval(c(1.0 - d, 0.0)).re;
            assert!((Cusp.radial_gap(d) - direct).abs() < 1e-12, "δ = {d}");
        }
        // (1 − φ(r))·log(1/(1−r))·(2/π) tends to 1, but only like L/(L + log 4 + π/2)
        let ratio = |d: f64| Cusp.radial_gap(d) * (1.0 / d).ln() * 2.0 / PI;
        let oracle = |d: f64| {
            let l = (1.0 / d).ln();
            l / (l + 4f64.ln() + FRAC_PI_2)
        };
        for &d in &[1e-6, 1e-30, 1e-200] {
            assert!((ratio(d) - oracle(d)).abs() < 1e-3 * oracle(d), "{d}: {}", ratio(d));
        }
        assert!((ratio(1e-200) - 1.0).abs() < 0.01);
    }
}
