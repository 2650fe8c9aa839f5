//! Decay-model fits for singular values and bound curves.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::CurvePoint;
use crate::error::{numeric, Error, Result};
use crate::hardy::SingularValueSpectrum;

pub const MIN_POINTS: usize = 6;
/// Largest relative change of the power slope between the two halves of a window.
pub const SCHATTEN_DRIFT: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayModel {
    /// log s = α − β√n
    SqrtN,
    /// log s = α − βn/log n
    NOverLog,
    /// log s = α − βn
    LinearN,
    /// log s = α − β log n
    Power,
}

impl DecayModel {
    pub const ALL: [DecayModel; 4] = [Self::SqrtN, Self::NOverLog, Self::LinearN, Self::Power];

    pub fn name(self) -> &'static str {
        match self {
            Self::SqrtN => "sqrt_n",
            Self::NOverLog => "n_over_log",
            Self::LinearN => "linear_n",
            Self::Power => "power",
        }
    }

    pub fn regressor(self, n: usize) -> f64 {
        let x = n as f64;
        match self {
            Self::SqrtN => x.sqrt(),
            Self::NOverLog => x / x.ln(),
            Self::LinearN => x,
            Self::Power => x.ln(),
        }
    }

    fn smallest_n(self) -> usize {
        match self {
            Self::NOverLog => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for DecayModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecayModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown decay model {s:?}")))
    }
}

/// Positive values indexed by n ≥ 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub points: Vec<(usize, f64)>,
}

impl Series {
    pub fn new(points: Vec<(usize, f64)>) -> Self {
        Self { points }
    }

    /// s_n for n = 1, 2, ….
    pub fn from_values(values: &[f64]) -> Self {
        Self::new(values.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect())
    }

    /// Only the reliable part of the spectrum.
    pub fn from_spectrum(spectrum: &SingularValueSpectrum) -> Self {
        Self::from_values(&spectrum.values[..spectrum.reliable_count])
    }

    pub fn from_curve(curve: &[CurvePoint]) -> Self {
        Self::new(curve.iter().map(|p| (p.n, p.value)).collect())
    }

    pub fn last_index(&self) -> usize {
        self.points.iter().map(|p| p.0).max().unwrap_or(0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.points.iter().map(|&(n, v)| (n, v * factor)).collect())
    }

    fn in_window(&self, window: (usize, usize)) -> Vec<(usize, f64)> {
        self.points
            .iter()
            .copied()
            .filter(|&(n, _)| n >= window.0 && n <= window.1)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub model: DecayModel,
    pub alpha: f64,
    pub beta: f64,
    pub r2: f64,
    pub window: (usize, usize),
    /// Σ (log s_n − fitted)²
    pub residual: f64,
    #[serde(skip)]
    pub residuals: Vec<(usize, f64)>,
}

impl DecayFit {
    pub fn predict(&self, n: usize) -> f64 {
        (self.alpha - self.beta * self.model.regressor(n)).exp()
    }
}

pub fn fit_decay(series: &Series, model: DecayModel, window: (usize, usize)) -> Result<DecayFit> {
    let pts: Vec<(usize, f64)> = series
        .in_window(window)
        .into_iter()
        .filter(|&(n, v)| n >= model.smallest_n() && v > 0.0 && v.is_finite())
        .collect();
    if pts.len() < MIN_POINTS {
        return Err(Error::Argument(format!(
            "{} usable points in [{}, {}], need {MIN_POINTS}",
            pts.len(),
            window.0,
            window.1
        )));
    }
    let xs: Vec<f64> = pts.iter().map(|&(n, _)| model.regressor(n)).collect();
    let ys: Vec<f64> = pts.iter().map(|&(_, v)| v.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let alpha = my - slope * mx;
    let residuals: Vec<(usize, f64)> = pts
        .iter()
        .zip(xs.iter().zip(&ys))
        .map(|(&(n, _), (x, y))| (n, y - (alpha + slope * x)))
        .collect();
    let residual: f64 = residuals.iter().map(|r| r.1 * r.1).sum();
    let r2 = if syy > 0.0 { 1.0 - residual / syy } else { 1.0 };
    Ok(DecayFit {
        model,
        alpha,
        beta: -slope,
        r2,
        window,
        residual,
        residuals,
    })
}

/// All four models on the same window, best residual first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelRanking {
    pub fits: Vec<DecayFit>,
    /// residual of each fit divided by the best residual
    pub ratios: Vec<f64>,
}

impl ModelRanking {
    pub fn best(&self) -> &DecayFit {
        &self.fits[0]
    }

    pub fn get(&self, model: DecayModel) -> Option<&DecayFit> {
        self.fits.iter().find(|f| f.model == model)
    }

    pub fn rank_of(&self, model: DecayModel) -> Option<usize> {
        self.fits.iter().position(|f| f.model == model)
    }
}

pub fn model_select(series: &Series, window: (usize, usize)) -> Result<ModelRanking> {
    let mut fits = DecayModel::ALL
        .into_iter()
        .map(|m| fit_decay(series, m, window))
        .collect::<Result<Vec<_>>>()?;
    fits.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    let best = fits[0].residual;
    let ratios = fits
        .iter()
        .map(|f| if best > 0.0 { f.residual / best } else { f64::INFINITY })
        .collect();
    Ok(ModelRanking { fits, ratios })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchattenEstimate {
    /// power-fit slope
    pub alpha: f64,
    /// 1/alpha
    pub p_star: f64,
}

/// Power slope on the window; fails when it is not positive or when the slopes on the
/// two halves of the window differ by more than [`SCHATTEN_DRIFT`].
pub fn schatten_exponent(series: &Series, window: (usize, usize)) -> Result<SchattenEstimate> {
    let fit = fit_decay(series, DecayModel::Power, window)?;
    if !(fit.beta > 0.0) {
        return Err(numeric(
            format!("power slope {} is not positive: no polynomial decay", fit.beta),
            fit.beta,
        ));
    }
    let mid = (window.0 + window.1.min(series.last_index())) / 2;
    let lower = fit_decay(series, DecayModel::Power, (window.0, mid))?;
    let upper = fit_decay(series, DecayModel::Power, (mid, window.1))?;
    let drift = (upper.beta - lower.beta).abs() / lower.beta.abs().max(upper.beta.abs());
    if drift > SCHATTEN_DRIFT {
        return Err(numeric(
            format!(
                "power slope drifts from {:.3} to {:.3} across the window: decay is not polynomial",
                lower.beta, upper.beta
            ),
            drift,
        ));
    }
    Ok(SchattenEstimate {
        alpha: fit.beta,
        p_star: 1.0 / fit.beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64, lo: usize, hi: usize) -> Series {
        Series::new((lo..=hi).map(|n| (n, f(n as f64))).collect())
    }

    #[test]
    fn synthetic_fits() {
        let s = synthetic(|n| (-2.0 * n.sqrt()).exp(), 1, 100);
        let f = fit_decay(&s, DecayModel::SqrtN, (10, 100)).unwrap();
        assert!((f.beta - 2.0).abs() < 1e-6 && f.r2 > 0.9999);
        let s = synthetic(|n| 5.0 * n.powi(-3), 1, 100);
        let f = fit_decay(&s, DecayModel::Power, (10, 100)).unwrap();
        assert!((f.beta - 3.0).abs() < 1e-6);
        let s = synthetic(|n| (-n / n.ln()).exp(), 3, 100);
        let f = fit_decay(&s, DecayModel::NOverLog, (10, 100)).unwrap();
        assert!((f.beta - 1.0).abs() < 1e-3);
    }

    #[test]
    fn too_few_points() {
        let s = Series::from_values(&[1.0, 0.5, 0.25]);
        assert!(matches!(
            fit_decay(&s, DecayModel::LinearN, (1, 3)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn schatten_examples() {
        let s = synthetic(|n| n.powf(-0.5), 1, 100);
        let est = schatten_exponent(&s, (10, 100)).unwrap();
        assert!((est.p_star - 2.0).abs() < 1e-9);
        let s = synthetic(|n| (-n).exp(), 1, 100);
        assert!(schatten_exponent(&s, (10, 100)).is_err());
    }

    #[test]
    fn model_names_round_trip() {
        for m in DecayModel::ALL {
            assert_eq!(m.name().parse::<DecayModel>().unwrap(), m);
        }
    }
}
