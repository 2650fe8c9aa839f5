use num_complex::Complex64;

use super::{contact_angles_of_roots, unit_point, Symbol, SymbolRef, ONE};
use crate::error::{Error, Result};
use crate::hardy::basis::{KernelBasisPlan, Ray};
use crate::modulus::ModulusOfContinuity;
use crate::quad::{reduce_angle, Breakpoint};

/// ψ = base∘χ with χ(z) = (1 + (conj(ω₀)z)^p)/2, touching the circle on ω₀·{p-th roots of unity}.
#[derive(Debug, Clone)]
pub struct Spread {
    base: SymbolRef,
    angle: f64,
    p: u32,
    rotation: Complex64,
}

impl Spread {
    pub fn new(base: SymbolRef, angle: f64, p: u32) -> Result<Self> {
        if p == 0 {
            return Err(Error::Argument("spread order must be positive".into()));
        }
        if !angle.is_finite() {
            return Err(Error::Argument(format!("spread angle {angle} is not finite")));
        }
        let contacts = base.contact_angles();
        if contacts.len() != 1 || contacts[0].abs() > 1e-12 {
            return Err(Error::Argument(format!(
                "base symbol {} must touch the circle only at 1, found contacts {contacts:?}",
                base.id()
            )));
        }
        Ok(Self {
            base,
            angle,
            p,
            rotation: Complex64::from_polar(1.0, -angle),
        })
    }

    pub fn base(&self) -> &SymbolRef {
        &self.base
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    fn through_peak(&self, wp_minus_one: Complex64) -> Complex64 {
        let chi_minus_one = 0.5 * wp_minus_one;
        self.base.eval_offset(ONE + chi_minus_one, chi_minus_one)
    }
}

impl Symbol for Spread {
    fn id(&self) -> String {
        format!("spread:{}:{}:{}", self.base.id(), self.angle, self.p)
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.through_peak((self.rotation * z).powu(self.p) - ONE)
    }

    fn boundary(&self, t: f64) -> Complex64 {
        // reducing first makes the declared contacts land exactly on 0
        let (_, um1) = unit_point(reduce_angle(self.p as f64 * (t - self.angle)));
        self.through_peak(um1)
    }

    fn boundary_near(&self, anchor: f64, offset: f64) -> Complex64 {
        let p = self.p as f64;
        let (_, um1) = unit_point(reduce_angle(p * (anchor - self.angle)) + p * offset);
        self.through_peak(um1)
    }

    fn contact_angles(&self) -> Vec<f64> {
        contact_angles_of_roots(self.angle, self.p)
    }

    fn real_on_reals(&self) -> bool {
        self.angle == 0.0 && self.base.real_on_reals()
    }

    fn modulus(&self) -> Option<ModulusOfContinuity> {
        self.base.modulus()
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

#[cfg(test)]
mod tests {
    use std::f64::consts::{PI, TAU};
    use std::sync::Arc;

    use super::*;
    use crate::quad::angle_distance;
    use crate::symbols::{Cusp, Lens};

    #[test]
    fn single_contact() {
        let s = Spread::new(Arc::new(Cusp), 0.0, 1).unwrap();
        assert_eq!(s.eval(ONE), ONE);
        let z = Complex64::new(0.2, 0.3);
        assert!((s.eval(z) - Cusp.eval((ONE + z) / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn four_contacts() {
        let s = Spread::new(Arc::new(Cusp), 0.0, 4).unwrap();
        for z in [Complex64::new(0.0, 1.0), -ONE, Complex64::new(0.0, -1.0)] {
            assert!((s.eval(z) - ONE).norm() < 1e-12, "{z}");
        }
        let k = s.contact_angles();
        let worst = (0..4096)
            .map(|j| -PI + TAU * j as f64 / 4096.0)
            .filter(|&t| k.iter().all(|&c| angle_distance(t, c) >= 0.1))
            .map(|t| s.boundary(t).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1.0 - 1e-4, "{worst}");
    }

    #[test]
    fn rejects_bases_with_other_contacts() {
        assert!(Spread::new(Arc::new(Lens::new(0.5).unwrap()), 0.0, 2).is_err());
    }
}
