//! `hardy-lab`: experiment presets, symbol evaluation, decay fits and bound curves.
//!
//! Exit status: 0 success, 1 runtime error, 2 failed checks, 64 usage error.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use hardy_lab::analysis::{fit_decay, model_select, DecayModel, Series};
use hardy_lab::experiment::{self, Preset, Settings, BOUNDS_N_MAX};
use hardy_lab::hardy::carleson_function;
use hardy_lab::report::{bounds_csv, bounds_rows, series_from_csv, to_json};
use hardy_lab::symbols::{evaluate, parse_complex, parse_symbol};
use hardy_lab::{bounds, Error};

use config::{parse_precision, parse_window, ExperimentConfig};

const EXIT_ERROR: u8 = 1;
const EXIT_CHECKS_FAILED: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "hardy-lab", version, about = "Approximation numbers of composition operators on H²")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a preset: cusp-rates, lens-rates:<θ>, polygon:<p>, shapiro-taylor:<θ>,
    /// spread-schatten:<p> or lemma-suite.
    Run {
        preset: Option<String>,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Evaluate a symbol at one point.
    Eval {
        symbol: String,
        #[command(flatten)]
        at: EvalPoint,
    },
    /// Fit decay models to a CSV series with columns n and s_n (or any second column).
    Fit {
        csv: PathBuf,
        /// sqrt_n, n_over_log, linear_n or power; all four are ranked when omitted.
        #[arg(long)]
        model: Option<String>,
        /// lo:hi, default 1:last.
        #[arg(long)]
        window: Option<String>,
    },
    /// Print the lower and upper bound curves of a symbol as CSV.
    Bounds {
        symbol: String,
        #[arg(long, default_value_t = BOUNDS_N_MAX)]
        n_max: usize,
    },
    /// Print the Carleson function at h = 2^-3, …, 2^-8.
    Carleson {
        symbol: String,
        #[arg(long, default_value_t = experiment::DEFAULT_GRID_T)]
        grid_t: usize,
        #[arg(long, default_value_t = experiment::DEFAULT_GRID_XI)]
        grid_xi: usize,
    },
}

#[derive(Args, Debug)]
struct RunOpts {
    #[arg(long)]
    n_max: Option<usize>,
    /// double or extended:<digits>.
    #[arg(long)]
    precision: Option<String>,
    /// Output directory; default $HARDY_LAB_OUT/<preset> or hardy-lab-out/<preset>.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    grid_t: Option<usize>,
    #[arg(long)]
    grid_xi: Option<usize>,
    /// Fit window lo:hi.
    #[arg(long)]
    window: Option<String>,
    /// key=value file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct EvalPoint {
    /// Complex point in the closed disk, e.g. 0.3-0.2i.
    #[arg(long, allow_hyphen_values = true)]
    interior: Option<String>,
    /// Boundary angle t, evaluates φ(e^{it}).
    #[arg(long, allow_hyphen_values = true)]
    boundary: Option<f64>,
    /// Real radius r in [-1, 1].
    #[arg(long, allow_hyphen_values = true)]
    radial: Option<f64>,
}

/// Errors split by exit status.
enum Failure {
    Usage(String),
    Runtime(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

/// Shortest decimal that round-trips; `a+bi` with the imaginary part dropped when zero.
fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        format!("{}{}{}i", z.re, sign, z.im.abs())
    }
}

fn run_preset(preset: Option<String>, opts: RunOpts) -> Result<(), Failure> {
    let file = match &opts.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let flags = ExperimentConfig {
        preset,
        symbol: None,
        n_max: opts.n_max,
        precision: opts.precision.as_deref().map(parse_precision).transpose()?,
        grid_t: opts.grid_t,
        grid_xi: opts.grid_xi,
        window: opts.window.as_deref().map(parse_window).transpose()?,
        out: opts.out,
    };
    let cfg = file.merged(flags);
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let name = cfg
        .preset
        .clone()
        .ok_or_else(|| Failure::Usage("no preset given on the command line or in the config file".into()))?;
    let preset: Preset = name.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if cfg.symbol.is_some() {
        return Err(Failure::Usage("presets fix their symbol; 'symbol' is only for other commands".into()));
    }
    let defaults = Settings::default();
    let settings = Settings {
        n_max: cfg.n_max.unwrap_or(defaults.n_max),
        precision: cfg.precision.unwrap_or(defaults.precision),
        grid_t: cfg.grid_t.unwrap_or(defaults.grid_t),
        grid_xi: cfg.grid_xi.unwrap_or(defaults.grid_xi),
        window: cfg.window,
    };
    let result = experiment::run(preset, &settings)?;
    let dir = cfg.output_dir(&preset.to_string());
    output::write_all(&dir, &result.files)?;
    for check in &result.checks {
        println!(
            "{} {}: {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    println!("wrote {}", dir.display());
    if result.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn eval(symbol: &str, at: EvalPoint) -> Result<(), Failure> {
    let phi = parse_symbol(symbol)?;
    let value = if let Some(z) = at.interior {
        evaluate(phi.as_ref(), parse_complex(&z)?)?
    } else if let Some(t) = at.boundary {
        phi.boundary(t)
    } else if let Some(r) = at.radial {
        if !(-1.0..=1.0).contains(&r) {
            return Err(Failure::Usage(format!("radius {r} outside [-1, 1]")));
        }
        evaluate(phi.as_ref(), Complex64::new(r, 0.0))?
    } else {
        unreachable!("clap requires one evaluation point")
    };
    println!("{}", format_complex(value));
    Ok(())
}

fn fit(path: &PathBuf, model: Option<String>, window: Option<String>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    let series: Series = series_from_csv(&text)?;
    let window = match window {
        Some(w) => parse_window(&w)?,
        None => (1, series.last_index()),
    };
    let json = match model {
        Some(m) => to_json(&fit_decay(&series, m.parse::<DecayModel>()?, window)?)?,
        None => to_json(&model_select(&series, window)?)?,
    };
    println!("{json}");
    Ok(())
}

fn bounds_command(symbol: &str, n_max: usize) -> Result<(), Failure> {
    let phi = parse_symbol(symbol)?;
    let ns: Vec<usize> = (4..=n_max).collect();
    let (kernel, lastmin) = if phi.real_on_reals() {
        (
            bounds::kernel_lower_curve(phi.as_ref(), &ns)?,
            bounds::lastmin_lower_curve(phi.as_ref(), &ns),
        )
    } else {
        eprintln!("note: lower curves need a symbol that is real on the reals");
        (Vec::new(), Vec::new())
    };
    let upper = bounds::blaschke_upper_curve(
        phi.as_ref(),
        4..=n_max,
        experiment::UPPER_MAX_LEVELS,
        bounds::DEFAULT_WINDOW_LEVELS,
    )?;
    print!("{}", bounds_csv(&bounds_rows(&kernel, &lastmin, &upper))?);
    Ok(())
}

fn carleson(symbol: &str, grid_t: usize, grid_xi: usize) -> Result<(), Failure> {
    let phi = parse_symbol(symbol)?;
    println!("h,rho,rho_over_h,coarse");
    for k in 3..=8 {
        let h = 0.5f64.powi(k);
        let m = carleson_function(phi.as_ref(), h, grid_xi, grid_t)?;
        println!("{h:e},{:e},{:e},{:e}", m.value, m.value / h, m.coarse);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Run { preset, opts } => run_preset(preset, opts),
        Command::Eval { symbol, at } => eval(&symbol, at),
        Command::Fit { csv, model, window } => fit(&csv, model, window),
        Command::Bounds { symbol, n_max } => bounds_command(&symbol, n_max),
        Command::Carleson { symbol, grid_t, grid_xi } => carleson(&symbol, grid_t, grid_xi),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(EXIT_CHECKS_FAILED),
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_formatting() {
        assert_eq!(format_complex(Complex64::new(0.5, 0.5)), "0.5+0.5i");
        assert_eq!(format_complex(Complex64::new(1.0, 0.0)), "1");
        assert_eq!(format_complex(Complex64::new(0.5, -0.25)), "0.5-0.25i");
        assert_eq!(format_complex(Complex64::new(0.0, -1.0)), "-1i");
    }
}
