use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::cusp::phi0_offset;
use super::{unit_point, Symbol, ONE};
use crate::error::{Error, Result};
use crate::hardy::basis::{KernelBasisPlan, Ray};
use crate::modulus::ModulusOfContinuity;
use crate::quad::Breakpoint;

const GRID_CHECK: usize = 2048;

/// e^z − 1 without cancellation for small z.
fn exp_m1(z: Complex64) -> Complex64 {
    let half = (0.5 * z.im).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * half * half,
        z.re.exp() * z.im.sin(),
    )
}

/// ς(z) = exp(−f(ε·φ₀(z))) with f(w) = w·(−log w)^θ.
#[derive(Debug, Clone, Copy)]
pub struct ShapiroTaylor {
    theta: f64,
    eps: f64,
}

/// The two boundary ratio families at t = 2^{−k}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryRatio {
    pub k: u32,
    pub t: f64,
    /// |1 − ς(e^{it})| / (|t|·log(1/|t|)^θ)
    pub displacement: f64,
    /// (1 − |ς(e^{it})|) / (|t|·log(1/|t|)^{θ−1})
    pub modulus_gap: f64,
}

impl ShapiroTaylor {
    pub fn new(theta: f64, eps: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::Argument(format!("exponent θ = {theta} must be positive")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Argument(format!("ε = {eps} not in (0, 1)")));
        }
        let map = Self { theta, eps };
        let worst = (0..GRID_CHECK)
            .map(|j| map.boundary(-PI + TAU * j as f64 / GRID_CHECK as f64).norm())
            .fold(0.0, f64::max);
        if worst > 1.0 + 1e-12 {
            return Err(Error::Parameter(format!(
                "|ς| reaches {worst} on the boundary grid for θ = {theta}, ε = {eps}; choose a smaller ε"
            )));
        }
        Ok(map)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    fn exponent(&self, p0: Complex64) -> Complex64 {
        let w = self.eps * p0;
        if w == Complex64::new(0.0, 0.0) {
            return w;
        }
        w * (-w.ln()).powf(self.theta)
    }

    /// f(ε·φ₀(e^{it})), so that ς(e^{it}) = exp(−f).
    fn boundary_exponent(&self, t: f64) -> Complex64 {
        let (z, zm1) = unit_point(t);
        self.exponent(phi0_offset(z, zm1))
    }

    pub fn boundary_ratios(&self, ks: impl IntoIterator<Item = u32>) -> Vec<BoundaryRatio> {
        ks.into_iter()
            .map(|k| {
                let t = 0.5f64.powi(k as i32);
                let f = self.boundary_exponent(t);
                let log = (1.0 / t).ln();
                let displacement = exp_m1(-f).norm() / (t * log.powf(self.theta));
                let gap = -(-f.re).exp_m1();
                BoundaryRatio {
                    k,
                    t,
                    displacement,
                    modulus_gap: gap / (t * log.powf(self.theta - 1.0)),
                }
            })
            .collect()
    }
}

impl Symbol for ShapiroTaylor {
    fn id(&self) -> String {
        if (self.eps - (-1.0f64).exp()).abs() < 1e-15 {
            format!("shapiro-taylor:{}", self.theta)
        } else {
            format!("shapiro-taylor:{}:{}", self.theta, self.eps)
        }
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_offset(z, z - ONE)
    }

    fn eval_offset(&self, z: Complex64, zm1: Complex64) -> Complex64 {
        (-self.exponent(phi0_offset(z, zm1))).exp()
    }

    fn boundary_gap(&self, t: f64) -> f64 {
        -(-self.boundary_exponent(t).re).exp_m1()
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
        ModulusOfContinuity::h_log().ok()
    }

    fn radial_gap(&self, delta: f64) -> f64 {
        if delta <= 0.0 {
            return 0.0;
        }
        let gamma_angle = (delta / (2.0 - delta)).atan();
        let f = self.exponent(Complex64::new((0.5 * gamma_angle).tan(), 0.0));
        -(-f.re).exp_m1()
    }

    fn basis_plan(&self) -> Option<KernelBasisPlan> {
        Some(KernelBasisPlan {
            ratio: 0.9,
            rays: vec![
                Ray { angle: 0.0, depth: 1e-15 },
                Ray { angle: FRAC_PI_2, depth: 1e-4 },
                Ray { angle: -FRAC_PI_2, depth: 1e-4 },
            ],
            breakpoints: vec![
                Breakpoint { angle: 0.0, levels: 200 },
                Breakpoint { angle: FRAC_PI_2, levels: 30 },
                Breakpoint { angle: -FRAC_PI_2, levels: 30 },
            ],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixes_one() {
        let st = ShapiroTaylor::new(3.0, (-1.0f64).exp()).unwrap();
        assert_eq!(st.eval(ONE), ONE);
        assert_eq!(st.boundary(0.0), ONE);
        assert!(ShapiroTaylor::new(3.0, 1.5).is_err());
        assert!(ShapiroTaylor::new(-1.0, 0.3).is_err());
    }

    #[test]
    fn ratio_families_stay_bounded() {
        let st = ShapiroTaylor::new(3.0, (-1.0f64).exp()).unwrap();
        let r = st.boundary_ratios(8..=20);
        let (dmin, dmax) = r.iter().fold((f64::MAX, 0.0f64), |(a, b), x| (a.min(x.displacement), b.max(x.displacement)));
        let (gmin, gmax) = r.iter().fold((f64::MAX, 0.0f64), |(a, b), x| (a.min(x.modulus_gap), b.max(x.modulus_gap)));
        assert!(dmin > 0.0 && dmax / dmin < 4.0, "{dmin} {dmax}");
        assert!(gmin > 0.0 && gmax / gmin < 4.0, "{gmin} {gmax}");
    }

    #[test]
    fn radial_gap_agrees_with_direct_evaluation() {
        let st = ShapiroTaylor::new(2.0, 0.3).unwrap();
        for &d in &[0.3, 1e-2, 1e-4] {
            let direct = 1.0 - st.eval(Complex64::new(1.0 - d, 0.0)).re;
            assert!((st.radial_gap(d) - direct).abs() < 1e-12);
        }
    }
}
