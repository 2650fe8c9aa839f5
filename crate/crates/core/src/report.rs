//! CSV and JSON renderings of spectra, bound curves and fits.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::analysis::{ModelRanking, Series};
use crate::bounds::CurvePoint;
use crate::error::{Error, Result};
use crate::hardy::SingularValueSpectrum;
use crate::symbols::RegularityReport;

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn number(v: f64) -> String {
    format!("{v:e}")
}

/// `n,s_n,reliable`, one row per computed value.
pub fn spectrum_csv(spectrum: &SingularValueSpectrum) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "s_n", "reliable"]).map_err(csv_err)?;
    for (i, (&v, &r)) in spectrum.values.iter().zip(&spectrum.reliable).enumerate() {
        w.write_record([(i + 1).to_string(), number(v), r.to_string()])
            .map_err(csv_err)?;
    }
    finish(w)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundsRow {
    pub n: usize,
    pub lower_kernel: Option<f64>,
    pub lower_lastmin: Option<f64>,
    pub upper_blaschke_proxy: Option<f64>,
}

/// Joins the three curves on n.
pub fn bounds_rows(kernel: &[CurvePoint], lastmin: &[CurvePoint], upper: &[CurvePoint]) -> Vec<BoundsRow> {
    let mut rows: BTreeMap<usize, BoundsRow> = BTreeMap::new();
    let mut set = |curve: &[CurvePoint], field: fn(&mut BoundsRow) -> &mut Option<f64>| {
        for p in curve {
            let row = rows.entry(p.n).or_insert_with(|| BoundsRow {
                n: p.n,
                ..BoundsRow::default()
            });
            *field(row) = Some(p.value);
        }
    };
    set(kernel, |r| &mut r.lower_kernel);
    set(lastmin, |r| &mut r.lower_lastmin);
    set(upper, |r| &mut r.upper_blaschke_proxy);
    rows.into_values().collect()
}

/// `n,lower_kernel,lower_lastmin,upper_blaschke_proxy`; missing values are empty cells.
pub fn bounds_csv(rows: &[BoundsRow]) -> Result<String> {
    let cell = |v: Option<f64>| v.map(number).unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "lower_kernel", "lower_lastmin", "upper_blaschke_proxy"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            cell(r.lower_kernel),
            cell(r.lower_lastmin),
            cell(r.upper_blaschke_proxy),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

/// `model,n,residual` for every fit of a ranking.
pub fn residuals_csv(ranking: &ModelRanking) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["model", "n", "residual"]).map_err(csv_err)?;
    for fit in &ranking.fits {
        for &(n, r) in &fit.residuals {
            w.write_record([fit.model.name().to_string(), n.to_string(), number(r)])
                .map_err(csv_err)?;
        }
    }
    finish(w)
}

/// Reads `n` and a value column (`s_n`, else the second column) from a CSV with a header.
///
/// Rows whose `reliable` column is `false` and empty value cells are skipped.
pub fn series_from_csv(text: &str) -> Result<Series> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(csv_err)?.clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let n_col = find("n").ok_or_else(|| Error::Parse("CSV has no 'n' column".into()))?;
    let value_col = find("s_n")
        .or_else(|| (0..headers.len()).find(|&i| i != n_col))
        .ok_or_else(|| Error::Parse("CSV has no value column".into()))?;
    let reliable_col = find("reliable");
    let mut points = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let field = |i: usize| record.get(i).unwrap_or("").trim();
        if reliable_col.is_some_and(|i| field(i) == "false") || field(value_col).is_empty() {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("row {}: invalid {what}", row + 2));
        let n: usize = field(n_col).parse().map_err(|_| bad("n"))?;
        let v: f64 = field(value_col).parse().map_err(|_| bad("value"))?;
        points.push((n, v));
    }
    Ok(Series::new(points))
}

/// Regularity constants and the derived schedule parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleProvenance {
    /// measured C
    pub sector_constant: f64,
    /// measured c
    pub approach_constant: f64,
    /// M = 2C + 1
    pub cone_constant: f64,
    /// χ = M/√(M² + 1)
    pub chi: f64,
    /// σ = 1/log(χ^{−2})
    pub sigma_schedule: f64,
    pub regularity_holds: bool,
    pub window: f64,
}

impl ScheduleProvenance {
    pub fn from_report(report: &RegularityReport) -> Self {
        let m = report.cone_constant();
        let chi = m / (m * m + 1.0).sqrt();
        Self {
            sector_constant: report.sector_constant,
            approach_constant: report.approach_constant,
            cone_constant: m,
            chi,
            sigma_schedule: 1.0 / chi.powi(-2).ln(),
            regularity_holds: report.holds,
            window: report.window,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::SpectrumMethod;

    #[test]
    fn spectrum_csv_layout() {
        let s = SingularValueSpectrum::from_values(vec![1.0, 0.5, 1e-20], SpectrumMethod::Galerkin);
        let csv = spectrum_csv(&s).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,s_n,reliable");
        assert_eq!(lines[1], "1,1e0,true");
        assert_eq!(lines[3], "3,1e-20,false");
    }

    #[test]
    fn series_round_trip() {
        let s = SingularValueSpectrum::from_values(vec![1.0, 0.25, 1e-20], SpectrumMethod::Galerkin);
        let series = series_from_csv(&spectrum_csv(&s).unwrap()).unwrap();
        assert_eq!(series.points, vec![(1, 1.0), (2, 0.25)]);
        let series = series_from_csv("n,lower_kernel,lower_lastmin\n4,,1e-3\n5,2e-2,\n").unwrap();
        assert_eq!(series.points, vec![(5, 2e-2)]);
        assert!(series_from_csv("k,v\n1,2\n").is_err());
    }

    #[test]
    fn bounds_join() {
        let p = |n, value| CurvePoint {
            n,
            value,
            source: String::new(),
        };
        let rows = bounds_rows(&[p(2, 0.5)], &[p(2, 0.1), p(3, 0.01)], &[p(1, 1.0)]);
        let csv = bounds_csv(&rows).unwrap();
        assert_eq!(
            csv,
            "n,lower_kernel,lower_lastmin,upper_blaschke_proxy\n1,,,1e0\n2,5e-1,1e-1,\n3,,1e-2,\n"
        );
    }
}
