//! Experiment configuration from key=value files and flag overrides.

use std::path::{Path, PathBuf};

use hardy_lab::hardy::Precision;
use hardy_lab::symbols::parse_symbol;
use hardy_lab::{Error, Result};

/// Overrides the default output root.
pub const OUT_ENV: &str = "HARDY_LAB_OUT";
const DEFAULT_ROOT: &str = "hardy-lab-out";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Option<String>,
    pub symbol: Option<String>,
    pub n_max: Option<usize>,
    pub precision: Option<Precision>,
    pub grid_t: Option<usize>,
    pub grid_xi: Option<usize>,
    pub window: Option<(usize, usize)>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Parse(format!("line {}: invalid {what} '{value}'", lineno + 1));
            match key {
                "preset" => cfg.preset = Some(value.to_string()),
                "symbol" => cfg.symbol = Some(value.to_string()),
                "n_max" => cfg.n_max = Some(value.parse().map_err(|_| bad("n_max"))?),
                "precision" => cfg.precision = Some(parse_precision(value)?),
                "grid_t" => cfg.grid_t = Some(value.parse().map_err(|_| bad("grid_t"))?),
                "grid_xi" => cfg.grid_xi = Some(value.parse().map_err(|_| bad("grid_xi"))?),
                "window" => cfg.window = Some(parse_window(value)?),
                "out" => cfg.out = Some(PathBuf::from(value)),
                other => {
                    return Err(Error::Parse(format!("line {}: unknown key '{other}'", lineno + 1)));
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Fields set in `other` win.
    pub fn merged(self, other: Self) -> Self {
        Self {
            preset: other.preset.or(self.preset),
            symbol: other.symbol.or(self.symbol),
            n_max: other.n_max.or(self.n_max),
            precision: other.precision.or(self.precision),
            grid_t: other.grid_t.or(self.grid_t),
            grid_xi: other.grid_xi.or(self.grid_xi),
            window: other.window.or(self.window),
            out: other.out.or(self.out),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(id) = &self.symbol {
            parse_symbol(id)?;
        }
        if let Some((lo, hi)) = self.window {
            if lo > hi || lo == 0 {
                return Err(Error::Argument(format!("window {lo}:{hi} is empty or starts at 0")));
            }
        }
        Ok(())
    }

    /// Explicit `out`, else `$HARDY_LAB_OUT/<name>`, else `hardy-lab-out/<name>`.
    pub fn output_dir(&self, name: &str) -> PathBuf {
        if let Some(out) = &self.out {
            return out.clone();
        }
        let root = std::env::var_os(OUT_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_ROOT));
        root.join(name.replace(':', "_"))
    }
}

pub fn parse_precision(s: &str) -> Result<Precision> {
    match s.trim() {
        "double" => Ok(Precision::Double),
        other => match other.strip_prefix("extended:") {
            Some(d) => Ok(Precision::Extended {
                digits: d
                    .parse()
                    .map_err(|_| Error::Parse(format!("precision digits '{d}'")))?,
            }),
            None => Err(Error::Parse(format!(
                "precision '{other}' (expected double or extended:<digits>)"
            ))),
        },
    }
}

/// `lo:hi`.
pub fn parse_window(s: &str) -> Result<(usize, usize)> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("window '{s}' (expected lo:hi)")))?;
    let num = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("window bound '{x}'")))
    };
    Ok((num(lo)?, num(hi)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_merges() {
        let file = ExperimentConfig::parse("# comment\nsymbol = cusp\nn_max=80\nwindow = 10:40\n").unwrap();
        assert_eq!(file.symbol.as_deref(), Some("cusp"));
        assert_eq!(file.n_max, Some(80));
        assert_eq!(file.window, Some((10, 40)));
        let flags = ExperimentConfig {
            n_max: Some(60),
            ..Default::default()
        };
        let cfg = file.merged(flags);
        assert_eq!(cfg.n_max, Some(60));
        assert_eq!(cfg.symbol.as_deref(), Some("cusp"));
    }

    #[test]
    fn rejects_unknown_keys_and_symbols() {
        assert!(ExperimentConfig::parse("colour = blue").is_err());
        let cfg = ExperimentConfig::parse("symbol = triangle:3").unwrap();
        assert!(cfg.validate().is_err());
        assert_eq!(parse_precision("extended:50").unwrap(), Precision::Extended { digits: 50 });
    }
}
