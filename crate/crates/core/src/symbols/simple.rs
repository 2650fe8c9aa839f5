use num_complex::Complex64;

use super::{Symbol, ONE};
use crate::error::{Error, Result};

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Identity;

impl Symbol for Identity {
    fn id(&self) -> String {
        "id".into()
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        z
    }

    fn real_on_reals(&self) -> bool {
        true
    }

    fn polynomial(&self) -> Option<Vec<Complex64>> {
        Some(vec![Complex64::new(0.0, 0.0), ONE])
    }

    fn radial_gap(&self, delta: f64) -> f64 {
        delta
    }
}

/// z ↦ rz with |r| < 1.
#[derive(Debug, Clone, Copy)]
pub struct Dilation {
    r: Complex64,
}

impl Dilation {
    pub fn new(r: Complex64) -> Result<Self> {
        if r.norm() < 1.0 {
            Ok(Self { r })
        } else {
            Err(Error::Argument(format!("dilation factor {r} must satisfy |r| < 1")))
        }
    }

    pub fn factor(&self) -> Complex64 {
        self.r
    }
}

impl Symbol for Dilation {
    fn id(&self) -> String {
        format!("rz:{}", fmt_complex(self.r))
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.r * z
    }

    fn real_on_reals(&self) -> bool {
        self.r.im == 0.0
    }

    fn polynomial(&self) -> Option<Vec<Complex64>> {
        Some(vec![Complex64::new(0.0, 0.0), self.r])
    }
}

/// The constant map z ↦ c, |c| < 1.
#[derive(Debug, Clone, Copy)]
pub struct Constant {
    c: Complex64,
}

impl Constant {
    pub fn new(c: Complex64) -> Result<Self> {
        if c.norm() < 1.0 {
            Ok(Self { c })
        } else {
            Err(Error::Argument(format!("constant {c} must satisfy |c| < 1")))
        }
    }
}

impl Symbol for Constant {
    fn id(&self) -> String {
        format!("const:{}", fmt_complex(self.c))
    }

    fn eval(&self, _z: Complex64) -> Complex64 {
        self.c
    }

    fn real_on_reals(&self) -> bool {
        self.c.im == 0.0
    }

    fn polynomial(&self) -> Option<Vec<Complex64>> {
        Some(vec![self.c])
    }
}

/// A polynomial self-map Σ a_k z^k with Σ|a_k| ≤ 1.
#[derive(Debug, Clone)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let l1: f64 = coeffs.iter().map(|c| c.norm()).sum();
        if coeffs.is_empty() || l1 > 1.0 + 1e-15 {
            return Err(Error::Argument(format!(
                "polynomial coefficients need 0 < Σ|a_k| ≤ 1, got {l1}"
            )));
        }
        Ok(Self { coeffs })
    }

    /// z ↦ z^k.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = ONE;
        Self { coeffs }
    }
}

impl Symbol for Polynomial {
    fn id(&self) -> String {
        let terms: Vec<String> = self.coeffs.iter().map(|&c| fmt_complex(c)).collect();
        format!("poly[{}]", terms.join(","))
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn real_on_reals(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    fn polynomial(&self) -> Option<Vec<Complex64>> {
        Some(self.coeffs.clone())
    }
}
