//! Analytic self-maps of the disk: the gallery, identifiers and boundary diagnostics.

use std::f64::consts::PI;
use std::fmt::Debug;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hardy::basis::KernelBasisPlan;
use crate::modulus::ModulusOfContinuity;

mod regularity;
mod cusp;
mod lens;
mod polygon;
mod shapiro_taylor;
mod simple;
mod spread;

pub use regularity::{
    check_invariants, contact_set, holder_exponent, regularity_check, HolderModel, InvariantReport, CONTACT_TOL,
    RegularityLevel, RegularityReport,
};
pub use cusp::{cusp, cusp_phi0, Cusp};
pub use lens::Lens;
pub use polygon::{inside_regular_polygon, ScPolygon};
pub use shapiro_taylor::{BoundaryRatio, ShapiroTaylor};
pub use simple::{Constant, Dilation, Identity, Polynomial};
pub use spread::Spread;

pub type SymbolRef = Arc<dyn Symbol>;

pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// An analytic self-map of the disk, continuous up to the boundary.
pub trait Symbol: Send + Sync + Debug {
    /// Identifier in the gallery grammar, e.g. `lens:0.5`.
    fn id(&self) -> String;

    /// φ(z) for |z| ≤ 1; callers are responsible for the domain.
    fn eval(&self, z: Complex64) -> Complex64;

    /// φ(z) given z and an accurately computed z − 1.
    fn eval_offset(&self, z: Complex64, _z_minus_one: Complex64) -> Complex64 {
        self.eval(z)
    }

    /// γ(t) = φ(e^{it}).
    fn boundary(&self, t: f64) -> Complex64 {
        let (z, zm1) = unit_point(t);
        self.eval_offset(z, zm1)
    }

    /// 1 − |γ(t)|, accurate near contacts where overridden.
    fn boundary_gap(&self, t: f64) -> f64 {
        1.0 - self.boundary(t).norm()
    }

    /// γ(anchor + offset) for offsets far below the spacing of doubles at `anchor`.
    fn boundary_near(&self, anchor: f64, offset: f64) -> Complex64 {
        if anchor == 0.0 {
            return self.boundary(offset);
        }
        let (w, wm1) = anchor_point(anchor);
        let (e, em1) = unit_point(offset);
        self.eval_offset(w * e, w * em1 + wm1)
    }

    /// 1 − |γ(anchor + offset)|.
    fn boundary_gap_near(&self, anchor: f64, offset: f64) -> f64 {
        if anchor == 0.0 {
            return self.boundary_gap(offset);
        }
        1.0 - self.boundary_near(anchor, offset).norm()
    }

    fn contact_angles(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Boundary angles where the trace is not smooth, other than contacts.
    fn singular_angles(&self) -> Vec<f64> {
        Vec::new()
    }

    fn real_on_reals(&self) -> bool {
        false
    }

    fn modulus(&self) -> Option<ModulusOfContinuity> {
        None
    }

    /// Taylor coefficients when φ is a polynomial.
    fn polynomial(&self) -> Option<Vec<Complex64>> {
        None
    }

    /// 1 − φ(1 − δ) for real-on-reals symbols, accurate for tiny δ where overridden.
    fn radial_gap(&self, delta: f64) -> f64 {
        1.0 - self.eval(Complex64::new(1.0 - delta, 0.0)).re
    }

    /// Point families and quadrature used by the kernel-basis spectrum.
    fn basis_plan(&self) -> Option<KernelBasisPlan> {
        None
    }
}

/// e^{it} together with e^{it} − 1 = 2i·sin(t/2)·e^{it/2}.
pub fn unit_point(t: f64) -> (Complex64, Complex64) {
    let z = Complex64::from_polar(1.0, t);
    let zm1 = 2.0 * I * (0.5 * t).sin() * Complex64::from_polar(1.0, 0.5 * t);
    (z, zm1)
}

/// e^{ia} and e^{ia} − 1, snapped to ±1 and ±i when `a` rounds a multiple of π/2.
pub(crate) fn anchor_point(a: f64) -> (Complex64, Complex64) {
    let (w, wm1) = unit_point(a);
    let snap = |x: f64| {
        if x.abs() < 1e-15 {
            Some(0.0)
        } else if (x.abs() - 1.0).abs() < 1e-15 {
            Some(x.signum())
        } else {
            None
        }
    };
    match (snap(w.re), snap(w.im)) {
        (Some(re), Some(im)) => {
            let exact = Complex64::new(re, im);
            (exact, exact - ONE)
        }
        _ => (w, wm1),
    }
}

/// φ(z) with the closed-disk domain check.
pub fn evaluate(phi: &dyn Symbol, z: Complex64) -> Result<Complex64> {
    if !(z.norm() <= 1.0 + 1e-14) || !z.is_finite() {
        return Err(Error::Domain(format!("{z} lies outside the closed unit disk")));
    }
    Ok(phi.eval(z))
}

/// Classical bound ‖C_φ‖ ≤ √((1+|φ(0)|)/(1−|φ(0)|)).
pub fn norm_bound(phi: &dyn Symbol) -> f64 {
    let a = phi.eval(Complex64::new(0.0, 0.0)).norm();
    ((1.0 + a) / (1.0 - a)).sqrt()
}

/// Parses a complex literal such as `0.5`, `i`, `-0.2+0.7i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim().replace(' ', "");
    Complex64::from_str(&t).map_err(|_| Error::Parse(format!("not a complex number: {s}")))
}

fn parse_real(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{what}: cannot parse '{s}' as a number")))
}

/// Builds a symbol from its identifier.
///
/// Grammar: `cusp`, `lens:<θ>`, `polygon:<p>`, `shapiro-taylor:<θ>[:<ε>]`,
/// `spread:<base>:<angle>:<p>`, `rz:<r>`, `id`, `const:<c>`.
pub fn parse_symbol(id: &str) -> Result<SymbolRef> {
    let id = id.trim();
    let parts: Vec<&str> = id.split(':').collect();
    let arity = |n: usize| -> Result<()> {
        if parts.len() == n {
            Ok(())
        } else {
            Err(Error::Parse(format!("'{id}' expects {} field(s)", n - 1)))
        }
    };
    match parts[0] {
        "cusp" => {
            arity(1)?;
            Ok(Arc::new(Cusp))
        }
        "id" => {
            arity(1)?;
            Ok(Arc::new(Identity))
        }
        "lens" => {
            arity(2)?;
            Ok(Arc::new(Lens::new(parse_real(parts[1], "lens exponent")?)?))
        }
        "polygon" => {
            arity(2)?;
            let p = parts[1]
                .trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("polygon order '{}'", parts[1])))?;
            Ok(Arc::new(ScPolygon::new(p)?))
        }
        "shapiro-taylor" => {
            if parts.len() != 2 && parts.len() != 3 {
                return Err(Error::Parse(format!("'{id}' expects shapiro-taylor:<θ>[:<ε>]")));
            }
            let theta = parse_real(parts[1], "Shapiro-Taylor exponent")?;
            let eps = match parts.get(2) {
                Some(e) => parse_real(e, "Shapiro-Taylor ε")?,
                None => (-1.0f64).exp(),
            };
            Ok(Arc::new(ShapiroTaylor::new(theta, eps)?))
        }
        "spread" => {
            if parts.len() < 4 {
                return Err(Error::Parse(format!("'{id}' expects spread:<base>:<angle>:<p>")));
            }
            let n = parts.len();
            let base = parse_symbol(&parts[1..n - 2].join(":"))?;
            let angle = parse_real(parts[n - 2], "spread angle")?;
            let p = parts[n - 1]
                .trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("spread order '{}'", parts[n - 1])))?;
            Ok(Arc::new(Spread::new(base, angle, p)?))
        }
        "rz" => {
            arity(2)?;
            Ok(Arc::new(Dilation::new(parse_complex(parts[1])?)?))
        }
        "const" => {
            arity(2)?;
            Ok(Arc::new(Constant::new(parse_complex(parts[1])?)?))
        }
        other => Err(Error::Parse(format!("unknown symbol '{other}'"))),
    }
}

/// The rate-carrying gallery: cusp, lens 1/2, square, Shapiro-Taylor 3, four-point spread cusp.
pub fn gallery() -> Vec<SymbolRef> {
    let mut g: Vec<SymbolRef> = vec![Arc::new(Cusp)];
    g.push(Arc::new(Lens::new(0.5).expect("valid lens")));
    g.push(Arc::new(ScPolygon::new(4).expect("valid polygon")));
    g.push(Arc::new(
        ShapiroTaylor::new(3.0, (-1.0f64).exp()).expect("valid Shapiro-Taylor map"),
    ));
    g.push(Arc::new(Spread::new(Arc::new(Cusp), 0.0, 4).expect("valid spread")));
    g
}

pub(crate) fn contact_angles_of_roots(angle: f64, p: u32) -> Vec<f64> {
    (0..p)
        .map(|j| crate::quad::reduce_angle(angle + 2.0 * PI * j as f64 / p as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_gallery_identifiers() {
        for id in [
            "cusp",
            "lens:0.5",
            "polygon:4",
            "shapiro-taylor:3",
            "shapiro-taylor:3:0.2",
            "spread:cusp:0:4",
            "rz:0.7",
            "id",
            "const:0.5",
            "const:0.1+0.2i",
        ] {
            let s = parse_symbol(id).unwrap();
            assert!(s.eval(Complex64::new(0.1, 0.1)).norm() < 1.0, "{id}");
        }
        assert_eq!(parse_symbol("spread:cusp:0:4").unwrap().id(), "spread:cusp:0:4");
        assert!(parse_symbol("lens").is_err());
        assert!(parse_symbol("lens:1.5").is_err());
        assert!(parse_symbol("spread:lens:0.5:0:2").is_err());
        assert!(parse_symbol("blob").is_err());
        assert!(parse_symbol("rz:1.2").is_err());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("i").unwrap(), I);
        assert_eq!(parse_complex("-i").unwrap(), -I);
        assert_eq!(parse_complex("0.5+0.5i").unwrap(), Complex64::new(0.5, 0.5));
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn unit_point_offset_is_accurate() {
        let (z, zm1) = unit_point(1e-9);
        assert!((zm1 - (z - ONE)).norm() < 1e-16);
        assert!((zm1.re + 0.5e-18).abs() < 1e-30);
    }

    #[test]
    fn evaluate_checks_domain() {
        let c = Cusp;
        assert!(evaluate(&c, Complex64::new(1.1, 0.0)).is_err());
        assert!(evaluate(&c, Complex64::new(0.0, 1.0)).is_ok());
    }
}
