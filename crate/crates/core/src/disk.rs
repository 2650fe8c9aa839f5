//! Points, Blaschke products and Carleson windows of the unit disk.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::reduce_angle;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.norm() < 1.0 && z.is_finite() {
            Ok(Self(z))
        } else {
            Err(Error::Domain(format!("{z} is not in the open unit disk")))
        }
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::new(Complex64::new(x, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// A point e^{it} of the unit circle, stored by its angle in `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryAngle(f64);

impl BoundaryAngle {
    pub fn new(t: f64) -> Self {
        Self(reduce_angle(t))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn point(self) -> Complex64 {
        Complex64::from_polar(1.0, self.0)
    }
}

/// S(ξ, h) = { z : |z| ≤ 1, |z − ξ| ≤ h }.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarlesonWindow {
    pub center: BoundaryAngle,
    pub radius: f64,
}

impl CarlesonWindow {
    pub fn new(center: BoundaryAngle, radius: f64) -> Result<Self> {
        if radius > 0.0 && radius <= 2.0 {
            Ok(Self { center, radius })
        } else {
            Err(Error::Argument(format!("window radius {radius} not in (0, 2]")))
        }
    }

    pub fn contains(&self, value: Complex64) -> bool {
        window_pullback_indicator(value, self)
    }
}

/// Finite Blaschke product with multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    zeros: Vec<(DiskPoint, u32)>,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<(DiskPoint, u32)>) -> Self {
        Self {
            zeros: zeros.into_iter().filter(|&(_, m)| m > 0).collect(),
        }
    }

    pub fn zeros(&self) -> &[(DiskPoint, u32)] {
        &self.zeros
    }

    pub fn degree(&self) -> u32 {
        self.zeros.iter().map(|&(_, m)| m).sum()
    }

    /// Evaluates without the domain check.
    pub fn value(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .map(|&(a, m)| {
                let a = a.value();
                ((z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)).powu(m)
            })
            .product()
    }

    /// log|B(z)|, finite except at zeros.
    pub fn log_modulus(&self, z: Complex64) -> f64 {
        self.zeros
            .iter()
            .map(|&(a, m)| {
                let a = a.value();
                m as f64 * ((z - a).norm() / (1.0 - a.conj() * z).norm()).ln()
            })
            .sum()
    }
}

/// |(z − w)/(1 − conj(z)w)|.
pub fn pseudo_hyperbolic(z: DiskPoint, w: DiskPoint) -> f64 {
    pseudo_hyperbolic_raw(z.value(), w.value())
}

pub(crate) fn pseudo_hyperbolic_raw(z: Complex64, w: Complex64) -> f64 {
    let den = (Complex64::new(1.0, 0.0) - z.conj() * w).norm();
    if den == 0.0 {
        return 1.0;
    }
    ((z - w).norm() / den).min(1.0)
}

pub fn blaschke_eval(b: &BlaschkeProduct, z: Complex64) -> Result<Complex64> {
    if !(z.norm() <= 1.0 + 1e-14) {
        return Err(Error::Domain(format!("|{z}| > 1")));
    }
    Ok(b.value(z))
}

/// min over k of ∏_{j≠k} ρ(z_k, z_j).
pub fn carleson_delta(points: &[DiskPoint]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Argument("empty point list".into()));
    }
    let mut delta = f64::INFINITY;
    for (k, &zk) in points.iter().enumerate() {
        let mut prod = 1.0;
        for (j, &zj) in points.iter().enumerate() {
            if j == k {
                continue;
            }
            let r = pseudo_hyperbolic(zk, zj);
            if r == 0.0 {
                return Err(Error::Degenerate(format!(
                    "points {k} and {j} coincide at {}",
                    zk.value()
                )));
            }
            prod *= r;
        }
        delta = delta.min(prod);
    }
    Ok(delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MobiusOutcome {
    Holds,
    Violated,
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MobiusCheck {
    pub outcome: MobiusOutcome,
    pub quotient: f64,
    pub bound: f64,
}

/// If |w − w0| ≤ M·min(1−|w|, 1−|w0|), checks ρ(w, w0) ≤ M/√(M²+1).
pub fn mobius_bound_check(w: DiskPoint, w0: DiskPoint, m: f64) -> Result<MobiusCheck> {
    if !(m > 0.0) {
        return Err(Error::Argument(format!("M = {m} must be positive")));
    }
    let bound = m / (m * m + 1.0).sqrt();
    let quotient = pseudo_hyperbolic(w, w0);
    let gap = (1.0 - w.value().norm()).min(1.0 - w0.value().norm());
    let applicable = (w.value() - w0.value()).norm() <= m * gap * (1.0 + 1e-14);
    let outcome = if !applicable {
        MobiusOutcome::Inapplicable
    } else if quotient <= bound + 1e-15 {
        MobiusOutcome::Holds
    } else {
        MobiusOutcome::Violated
    };
    Ok(MobiusCheck {
        outcome,
        quotient,
        bound,
    })
}

/// True iff |value − e^{i·center}| ≤ h.
pub fn window_pullback_indicator(value: Complex64, window: &CarlesonWindow) -> bool {
    (value - window.center.point()).norm() <= window.radius
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64) -> DiskPoint {
        DiskPoint::real(x).unwrap()
    }

    #[test]
    fn pseudo_hyperbolic_examples() {
        let z = DiskPoint::new(Complex64::new(0.3, -0.4)).unwrap();
        assert!((pseudo_hyperbolic(p(0.0), z) - 0.5).abs() < 1e-15);
        assert_eq!(pseudo_hyperbolic(z, z), 0.0);
        assert!((pseudo_hyperbolic(p(0.5), p(-0.5)) - 0.8).abs() < 1e-15);
        assert!(DiskPoint::real(1.0).is_err());
    }

    #[test]
    fn blaschke_examples() {
        let b = BlaschkeProduct::new(vec![(p(0.0), 1)]);
        assert!((blaschke_eval(&b, Complex64::new(0.3, 0.0)).unwrap() - 0.3).norm() < 1e-15);
        let b2 = BlaschkeProduct::new(vec![(p(0.5), 2)]);
        assert_eq!(blaschke_eval(&b2, Complex64::new(0.5, 0.0)).unwrap().norm(), 0.0);
        assert_eq!(b2.degree(), 2);
        let b1 = BlaschkeProduct::new(vec![(p(0.5), 1)]);
        for k in 0..1024 {
            let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 1024.0);
            assert!((blaschke_eval(&b1, z).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        assert!(blaschke_eval(&b1, Complex64::new(1.5, 0.0)).is_err());
        assert_eq!(BlaschkeProduct::default().value(Complex64::new(0.2, 0.1)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn carleson_delta_examples() {
        assert_eq!(carleson_delta(&[p(0.3)]).unwrap(), 1.0);
        assert!((carleson_delta(&[p(0.0), p(0.5)]).unwrap() - 0.5).abs() < 1e-15);
        assert!((carleson_delta(&[p(0.0), p(0.5), p(-0.5)]).unwrap() - 0.25).abs() < 1e-15);
        assert!(matches!(
            carleson_delta(&[p(0.2), p(0.2)]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn mobius_examples() {
        let c = mobius_bound_check(p(0.1), p(0.2), 1.0).unwrap();
        assert!((c.bound - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        let c = mobius_bound_check(p(0.9), p(0.8), 1.0).unwrap();
        assert_eq!(c.outcome, MobiusOutcome::Holds);
        assert!((c.quotient - 0.1 / 0.28).abs() < 1e-12);
        let c = mobius_bound_check(p(0.4), p(0.4), 0.01).unwrap();
        assert_eq!(c.quotient, 0.0);
        assert_eq!(c.outcome, MobiusOutcome::Holds);
        let c = mobius_bound_check(p(0.9), p(-0.9), 1.0).unwrap();
        assert_eq!(c.outcome, MobiusOutcome::Inapplicable);
    }

    #[test]
    fn window_indicator_examples() {
        let w = CarlesonWindow::new(BoundaryAngle::new(0.7), 1e-9).unwrap();
        assert!(window_pullback_indicator(Complex64::from_polar(1.0, 0.7), &w));
        let w = CarlesonWindow::new(BoundaryAngle::new(0.0), 2.0).unwrap();
        assert!(w.contains(Complex64::new(-1.0, 0.0)));
        let w = CarlesonWindow::new(BoundaryAngle::new(0.0), 1.0).unwrap();
        assert!(!w.contains(Complex64::new(0.0, 1.0)));
        assert!(CarlesonWindow::new(BoundaryAngle::new(0.0), 2.5).is_err());
    }
}
