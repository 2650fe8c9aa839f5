//! Moduli of continuity and the closed-form bound values built on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BISECTION_REL_TOL: f64 = 1e-14;
const BISECTION_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModulusKind {
    /// h^α, 0 < α ≤ 1
    Power { alpha: f64 },
    /// h·log(1/h)
    HLog,
    /// (log 1/h)^{−α}, α > 0
    InvLog { alpha: f64 },
}

/// A concave, strictly increasing modulus on `[0, A]` with ω(0) = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusOfContinuity {
    kind: ModulusKind,
    domain: f64,
    closed_form_inverse: bool,
}

impl ModulusOfContinuity {
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Argument(format!("power exponent {alpha} not in (0, 1]")));
        }
        Self::build(ModulusKind::Power { alpha }, 1.0)
    }

    pub fn h_log() -> Result<Self> {
        Self::build(ModulusKind::HLog, (-1.0f64).exp())
    }

    /// The largest concave domain is A = e^{−(α+1)}.
    pub fn inv_log(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::Argument(format!("log exponent {alpha} must be positive")));
        }
        Self::build(ModulusKind::InvLog { alpha }, (-(alpha + 1.0)).exp())
    }

    fn build(kind: ModulusKind, domain: f64) -> Result<Self> {
        let m = Self {
            kind,
            domain,
            closed_form_inverse: true,
        };
        m.check_shape()?;
        Ok(m)
    }

    pub fn with_domain(mut self, domain: f64) -> Result<Self> {
        if !(domain > 0.0) {
            return Err(Error::Argument(format!("domain bound {domain} must be positive")));
        }
        self.domain = domain;
        self.check_shape()?;
        Ok(self)
    }

    /// Forces numeric inversion even when a closed form exists.
    pub fn bisection_only(mut self) -> Self {
        self.closed_form_inverse = false;
        self
    }

    pub fn kind(&self) -> ModulusKind {
        self.kind
    }

    pub fn domain(&self) -> f64 {
        self.domain
    }

    pub fn max_value(&self) -> f64 {
        self.eval(self.domain)
    }

    pub fn eval(&self, h: f64) -> f64 {
        if h <= 0.0 {
            return 0.0;
        }
        match self.kind {
            ModulusKind::Power { alpha } => h.powf(alpha),
            ModulusKind::HLog => -h * h.ln(),
            ModulusKind::InvLog { alpha } => (-h.ln()).powf(-alpha),
        }
    }

    /// log ω⁻¹(x) in closed form, where one exists.
    fn closed_log_inverse(&self, x: f64) -> Option<f64> {
        match self.kind {
            ModulusKind::Power { alpha } => Some(x.ln() / alpha),
            ModulusKind::HLog => None,
            ModulusKind::InvLog { alpha } => Some(-x.powf(-1.0 / alpha)),
        }
    }

    fn check_shape(&self) -> Result<()> {
        let n = 1024;
        let a = self.domain;
        let grid: Vec<f64> = (0..=n).map(|k| a * k as f64 / n as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&h| self.eval(h)).collect();
        if vals[0] != 0.0 {
            return Err(Error::Argument("modulus does not vanish at zero".into()));
        }
        if vals.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Argument(format!(
                "modulus not strictly increasing on [0, {a}]"
            )));
        }
        for i in 0..n {
            for j in (i + 2..=n).step_by(7) {
                let mid = self.eval(0.5 * (grid[i] + grid[j]));
                if mid < 0.5 * (vals[i] + vals[j]) - 1e-12 {
                    return Err(Error::Argument(format!(
                        "modulus not concave on [0, {a}] near h = {}",
                        grid[i]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether ω(h)/h increases along h = 2^{−k}, k = 10..40.
    pub fn satisfies_growth_assumption(&self) -> bool {
        let ratios: Vec<f64> = (10..=40)
            .map(|k| 0.5f64.powi(k))
            .filter(|&h| h <= self.domain)
            .map(|h| self.eval(h) / h)
            .collect();
        ratios.len() >= 2 && ratios.windows(2).all(|w| w[1] > w[0])
    }

    fn check_range(&self, x: f64) -> Result<()> {
        let max = self.max_value();
        if x > 0.0 && x <= max * (1.0 + 1e-15) {
            Ok(())
        } else {
            Err(Error::Range { x, max })
        }
    }

    /// log ω⁻¹(x); stays finite where ω⁻¹(x) itself underflows.
    pub fn log_inverse(&self, x: f64) -> Result<f64> {
        self.check_range(x)?;
        if self.closed_form_inverse {
            if let Some(v) = self.closed_log_inverse(x) {
                return Ok(v.min(self.domain.ln()));
            }
        }
        self.log_inverse_bisection(x)
    }

    fn log_inverse_bisection(&self, x: f64) -> Result<f64> {
        // ω is increasing in u = log h, so bisect there to reach tiny h
        let mut hi = self.domain.ln();
        let mut lo = hi - 1.0;
        while self.eval(lo.exp()) > x {
            lo = hi - 2.0 * (hi - lo);
            if lo < f64::MIN_POSITIVE.ln() {
                return Err(crate::error::numeric(
                    format!("ω⁻¹({x}) underflows the working precision"),
                    x,
                ));
            }
        }
        let mut best = (lo, f64::INFINITY);
        for _ in 0..BISECTION_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            let v = self.eval(mid.exp());
            let err = (v - x).abs();
            if err < best.1 {
                best = (mid, err);
            }
            if err <= BISECTION_REL_TOL * x {
                return Ok(mid);
            }
            if v > x {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
                break;
            }
        }
        if best.1 <= 1e-12 * x {
            Ok(best.0)
        } else {
            Err(crate::error::numeric(
                format!("bisection for ω⁻¹({x}) did not converge"),
                best.1 / x,
            ))
        }
    }
}

pub fn omega_inverse(omega: &ModulusOfContinuity, x: f64) -> Result<f64> {
    Ok(omega.log_inverse(x)?.exp())
}

/// r_ω(x) = ω⁻¹(x)/x.
pub fn r_omega(omega: &ModulusOfContinuity, x: f64) -> Result<f64> {
    Ok((omega.log_inverse(x)? - x.ln()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    /// N_q
    pub levels: u32,
    /// d_{N_q}
    pub multiplicity: u32,
    pub q: u32,
    /// number of contact points
    pub contacts: u32,
}

/// d_N = floor(σ·log(κ2^{−N}/ω⁻¹(κ2^{−N}))) + 1.
pub fn multiplicity_at(omega: &ModulusOfContinuity, kappa: f64, sigma: f64, n: u32) -> Result<u32> {
    let x = kappa * 0.5f64.powi(n as i32);
    let log_ratio = x.ln() - omega.log_inverse(x)?;
    Ok((sigma * log_ratio).floor().max(0.0) as u32 + 1)
}

/// Largest N with p·N·d_N < q; N = 1 when none exists.
pub fn schedule(
    omega: &ModulusOfContinuity,
    kappa: f64,
    sigma: f64,
    contacts: u32,
    q: u32,
) -> Result<Schedule> {
    if contacts == 0 || q == 0 || !(kappa > 0.0) || !(sigma > 0.0) {
        return Err(Error::Argument("schedule needs positive κ, σ, p and q".into()));
    }
    let mut best = Schedule {
        levels: 1,
        multiplicity: multiplicity_at(omega, kappa, sigma, 1)?,
        q,
        contacts,
    };
    let mut n = 1u32;
    loop {
        let d = multiplicity_at(omega, kappa, sigma, n)?;
        if (contacts as u64) * (n as u64) * (d as u64) >= q as u64 {
            break;
        }
        best.levels = n;
        best.multiplicity = d;
        n += 1;
    }
    Ok(best)
}

/// K·√(ω⁻¹(κ2^{−N})/(κ2^{−N})).
pub fn surprise_bound(omega: &ModulusOfContinuity, kappa: f64, k: f64, levels: u32) -> Result<f64> {
    let x = kappa * 0.5f64.powi(levels as i32);
    Ok(k * (0.5 * (omega.log_inverse(x)? - x.ln())).exp())
}

/// σ = 1 − 2^{−k}, k = 1..20, plus 1 − 1/√n and exp(−log n/(2n)).
pub fn default_sigma_grid(n: u32) -> Vec<f64> {
    let mut grid: Vec<f64> = (1..=20).map(|k| 1.0 - 0.5f64.powi(k)).collect();
    let nf = n.max(2) as f64;
    grid.push(1.0 - 1.0 / nf.sqrt());
    grid.push((-nf.ln() / (2.0 * nf)).exp());
    grid
}

/// log of c·max_σ √(r_ω(a σⁿ))·exp(−20/(1−σ)); grid points outside the range of ω are skipped.
pub fn lastmin_bound_log_value(
    omega: &ModulusOfContinuity,
    a: f64,
    n: u32,
    c: f64,
    sigma_grid: &[f64],
) -> Result<f64> {
    if sigma_grid.is_empty() {
        return Err(Error::Argument("empty σ grid".into()));
    }
    if !(a > 0.0 && a <= 2.0) || !(c > 0.0) {
        return Err(Error::Argument(format!("need a in (0, 2] and c > 0, got a = {a}, c = {c}")));
    }
    let mut best = f64::NEG_INFINITY;
    let mut last_err = None;
    for &sigma in sigma_grid {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::Argument(format!("σ = {sigma} not in (0, 1)")));
        }
        let x = a * sigma.powi(n as i32);
        match omega.log_inverse(x) {
            Ok(li) => {
                let v = 0.5 * (li - x.ln()) - 20.0 / (1.0 - sigma);
                best = best.max(v);
            }
            Err(e) => last_err = Some(e),
        }
    }
    if best == f64::NEG_INFINITY {
        return Err(last_err.unwrap_or_else(|| Error::Argument("no admissible σ".into())));
    }
    Ok(c.ln() + best)
}

pub fn lastmin_bound_value(
    omega: &ModulusOfContinuity,
    a: f64,
    n: u32,
    c: f64,
    sigma_grid: &[f64],
) -> Result<f64> {
    Ok(lastmin_bound_log_value(omega, a, n, c, sigma_grid)?.exp())
}
