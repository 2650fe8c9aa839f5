use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Symbol, I, ONE};
use crate::error::{Error, Result};
use crate::hardy::basis::{KernelBasisPlan, Ray};
use crate::modulus::ModulusOfContinuity;
use crate::quad::Breakpoint;

/// Lens map ((1+z)^θ − (1−z)^θ)/((1+z)^θ + (1−z)^θ).
#[derive(Debug, Clone, Copy)]
pub struct Lens {
    theta: f64,
}

impl Lens {
    pub fn new(theta: f64) -> Result<Self> {
        if theta > 0.0 && theta < 1.0 {
            Ok(Self { theta })
        } else {
            Err(Error::Argument(format!("lens exponent {theta} not in (0, 1)")))
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn from_parts(&self, one_plus: Complex64, one_minus: Complex64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        let a = if one_plus == zero { zero } else { one_plus.powf(self.theta) };
        let b = if one_minus == zero { zero } else { one_minus.powf(self.theta) };
        (a - b) / (a + b)
    }
}

impl Symbol for Lens {
    fn id(&self) -> String {
        format!("lens:{}", self.theta)
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.from_parts(ONE + z, ONE - z)
    }

    fn eval_offset(&self, z: Complex64, zm1: Complex64) -> Complex64 {
        self.from_parts(ONE + z, -zm1)
    }

    fn boundary(&self, t: f64) -> Complex64 {
        let half = Complex64::from_polar(1.0, 0.5 * t);
        // 1 + e^{it} = 2cos(t/2)e^{it/2},  1 − e^{it} = −2i·sin(t/2)e^{it/2}
        let one_plus = 2.0 * (0.5 * t).cos() * half;
        let one_minus = -2.0 * I * (0.5 * t).sin() * half;
        self.from_parts(one_plus, one_minus)
    }

    fn contact_angles(&self) -> Vec<f64> {
        vec![0.0, PI]
    }

    fn real_on_reals(&self) -> bool {
        true
    }

    fn modulus(&self) -> Option<ModulusOfContinuity> {
        ModulusOfContinuity::power(self.theta).ok()
    }

    fn radial_gap(&self, delta: f64) -> f64 {
        let a = (2.0 - delta).powf(self.theta);
        let b = delta.powf(self.theta);
        2.0 * b / (a + b)
    }

    fn basis_plan(&self) -> Option<KernelBasisPlan> {
        Some(KernelBasisPlan {
            ratio: 0.93,
            rays: vec![Ray { angle: 0.0, depth: 1e-6 }, Ray { angle: PI, depth: 1e-6 }],
            breakpoints: vec![
                Breakpoint { angle: 0.0, levels: 100 },
                Breakpoint { angle: PI, levels: 100 },
            ],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lens_fixed_points_and_symmetry() {
        let l = Lens::new(0.5).unwrap();
        assert_eq!(l.eval(Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
        assert!((l.eval(ONE) - ONE).norm() < 1e-15);
        assert!((l.eval(-ONE) + ONE).norm() < 1e-15);
        assert!((l.boundary(0.0) - ONE).norm() < 1e-15);
        // t = π is rounded, and the trace is only Hölder-1/2 there
        assert!((l.boundary(PI) + ONE).norm() < 1e-7);
        assert!(Lens::new(1.0).is_err());
        assert!(Lens::new(0.0).is_err());
    }

    #[test]
    fn lens_boundary_exponent() {
        let l = Lens::new(0.5).unwrap();
        let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for k in 6..=20 {
            let t = 2f64.powi(-k);
            let x = t.ln();
            let y = (l.boundary(t) - ONE).norm().ln();
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            n += 1.0;
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((slope - 0.5).abs() < 0.05, "{slope}");
    }

    #[test]
    fn radial_gap_is_exact() {
        let l = Lens::new(0.3).unwrap();
        for &d in &[0.5, 1e-2, 1e-4] {
            let direct = 1.0 - l.eval(Complex64::new(1.0 - d, 0.0)).re;
            assert!((l.radial_gap(d) - direct).abs() < 1e-13);
        }
    }
}
