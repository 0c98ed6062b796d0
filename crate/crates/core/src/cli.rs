//! Command-line front end.
//!
//! Exit codes: 0 when every check passed, 1 when a checked inequality or
//! invariant failed, 2 for usage, input and domain errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{run_suite, BoundGrid};
use crate::error::{Error, Result};
use crate::field::{near_field_coefficients, sobolev_norm};
use crate::harmonics::aggregate;
use crate::io::{format_real, sweep_csv, SpectrumFile};
use crate::lab::{ksweep, verify_ensemble, EnsembleConfig, SweepConfig};
use crate::obstacle::{forward, invert, BoundaryPerturbation, ObstacleKind};
use crate::specfun::hankel;
use crate::stability::Estimate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "HELIOS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "helios",
    version,
    about = "Near-field reconstruction and stability checks for radiating Helmholtz fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the normalized spherical Hankel function ĥ_n(t).
    Hankel {
        n: usize,
        t: f64,
        /// Print the derivative instead.
        #[arg(long)]
        deriv: bool,
    },
    /// Check the Hankel envelopes on a log-spaced grid.
    BoundsCheck {
        #[arg(long, default_value_t = 50)]
        nmax: usize,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        tmin: f64,
        #[arg(long, default_value_t = 200.0, allow_negative_numbers = true)]
        tmax: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Near-field trace on ∂B_R from far-field coefficients.
    Reconstruct {
        input: PathBuf,
        /// Keep degrees up to this cutoff.
        #[arg(long)]
        ncut: Option<usize>,
        /// Write the trace coefficients here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the stability estimates on a seeded random ensemble.
    StabilityVerify {
        #[arg(long, default_value_t = 1000)]
        ensemble_size: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// `lo:hi` (or `lo,hi`).
        #[arg(long = "kr-range", visible_alias = "kR-range", default_value = "2:100")]
        kr_range: String,
        /// Restrict to one estimate; all three by default.
        #[arg(long, value_enum)]
        which: Option<WhichArg>,
        /// Append one line per member and estimate.
        #[arg(long)]
        detailed: bool,
    },
    /// Linearized obstacle maps between boundary perturbations and far fields.
    Obstacle(ObstacleArgs),
    /// Wavenumber sweep of noisy obstacle inversion; writes CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Invert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Soft,
    Hard,
}

impl From<KindArg> for ObstacleKind {
    fn from(kind: KindArg) -> Self {
        match kind {
            KindArg::Soft => ObstacleKind::Soft,
            KindArg::Hard => ObstacleKind::Hard,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichArg {
    #[value(name = "T1", alias = "t1")]
    T1,
    #[value(name = "T2", alias = "t2")]
    T2,
    #[value(name = "T1der", alias = "t1der")]
    T1Der,
}

impl From<WhichArg> for Estimate {
    fn from(which: WhichArg) -> Self {
        match which {
            WhichArg::T1 => Estimate::T1,
            WhichArg::T2 => Estimate::T2,
            WhichArg::T1Der => Estimate::T1Der,
        }
    }
}

#[derive(Debug, Args)]
pub struct ObstacleArgs {
    pub direction: Direction,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    pub input: PathBuf,
    /// Inversion cutoff; defaults to the largest degree in the input.
    #[arg(long)]
    pub ncut: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_range(text: &str) -> Result<(f64, f64)> {
    let (lo, hi) = text
        .split_once([':', ','])
        .ok_or_else(|| Error::Input(format!("expected lo:hi, got '{text}'")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Input(format!("bad number '{s}' in range '{text}'")))
    };
    Ok((parse(lo)?, parse(hi)?))
}

fn complex_text(z: num_complex::Complex64) -> String {
    format!("{} {}i", format_real(z.re), format_real(z.im))
}

fn write_or_print(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_hankel(out: &mut dyn Write, n: usize, t: f64, deriv: bool) -> Result<i32> {
    let h = hankel(n, t)?;
    let (label, value) = if deriv {
        ("derivative", h.derivative)
    } else {
        ("value", h.value)
    };
    writeln!(out, "n={n} t={}", format_real(t))?;
    writeln!(out, "magnitude={}", format_real(value.norm()))?;
    writeln!(out, "{label}={}", complex_text(value))?;
    Ok(EXIT_OK)
}

fn cmd_bounds_check(out: &mut dyn Write, grid: BoundGrid) -> Result<i32> {
    let report = run_suite(&grid)?;
    if report.pairs > 1 {
        for t in &report.tallies {
            writeln!(
                out,
                "{}: applicable={} violations={} tight={} min_ratio={}",
                t.envelope.name(),
                t.applicable,
                t.violations,
                t.tight,
                format_real(t.min_ratio)
            )?;
        }
        for v in &report.first_violations {
            writeln!(
                out,
                "violation {} n={} t={} value={} bound={}",
                v.envelope.name(),
                v.n,
                format_real(v.t),
                format_real(v.value_magnitude),
                format_real(v.bound)
            )?;
        }
    }
    writeln!(out, "{}", report.summary_line())?;
    Ok(if report.total_violations() == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    })
}

fn cmd_reconstruct(
    out: &mut dyn Write,
    input: &Path,
    ncut: Option<usize>,
    target: Option<&Path>,
) -> Result<i32> {
    let file = SpectrumFile::read(input)?;
    let mut spectrum = file.to_spectrum()?;
    if let Some(n) = ncut {
        spectrum = spectrum.low_pass(n);
    }
    let trace = near_field_coefficients(&spectrum, file.k, file.radius)?;
    let per_degree = |s: &crate::harmonics::CoefficientSpectrum| -> Vec<num_complex::Complex64> {
        aggregate(s)
            .values()
            .iter()
            .map(|&v| num_complex::Complex64::new(v, 0.0))
            .collect()
    };
    let values = per_degree(&trace.values);
    let radial = per_degree(&trace.radial_derivatives);
    writeln!(
        out,
        "k={} R={} max_degree={}",
        format_real(file.k),
        format_real(file.radius),
        spectrum.max_degree()
    )?;
    for l in 0..=1 {
        writeln!(
            out,
            "norm_u_{l}={}",
            format_real(sobolev_norm(&values, l, file.radius))
        )?;
        writeln!(
            out,
            "norm_dru_{l}={}",
            format_real(sobolev_norm(&radial, l, file.radius))
        )?;
    }
    if let Some(path) = target {
        SpectrumFile::from_spectrum(file.k, file.radius, &trace.values).write(path)?;
    }
    Ok(EXIT_OK)
}

fn cmd_stability_verify(
    out: &mut dyn Write,
    size: usize,
    seed: u64,
    range: &str,
    which: Option<WhichArg>,
    detailed: bool,
) -> Result<i32> {
    let (lo, hi) = parse_range(range)?;
    let config = EnsembleConfig::new(size, seed, lo, hi);
    let estimates: Vec<Estimate> = match which {
        Some(w) => vec![w.into()],
        None => Estimate::ALL.to_vec(),
    };
    let report = verify_ensemble(&config, &estimates)?;
    out.write_all(report.render(detailed).as_bytes())?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    })
}

fn cmd_obstacle(out: &mut dyn Write, args: &ObstacleArgs) -> Result<i32> {
    let file = SpectrumFile::read(&args.input)?;
    let spectrum = file.to_spectrum()?;
    let kind = args.kind.into();
    let result = match args.direction {
        Direction::Forward => forward(
            kind,
            &BoundaryPerturbation::new(spectrum),
            file.k,
            file.radius,
        )?,
        Direction::Invert => {
            let cutoff = args.ncut.unwrap_or(spectrum.max_degree());
            invert(kind, &spectrum, file.k, file.radius, cutoff)?.spectrum
        }
    };
    let text = SpectrumFile::from_spectrum(file.k, file.radius, &result).to_json()?;
    write_or_print(out, args.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_sweep(out: &mut dyn Write, config: &Path, target: Option<&Path>) -> Result<i32> {
    let config: SweepConfig = serde_json::from_str(&std::fs::read_to_string(config)?)?;
    let rows = ksweep(&config)?;
    write_or_print(out, target, &sweep_csv(&rows))?;
    Ok(if rows.iter().all(|r| r.all_satisfied) {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    })
}

/// Apply `HELIOS_THREADS` to the global worker pool.
pub fn configure_threads() -> Result<()> {
    let Ok(text) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = text.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::Input(format!(
            "{THREADS_ENV} must be a positive integer, got '{text}'"
        ))
    })?;
    // A pool that already exists keeps its size.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Hankel { n, t, deriv } => cmd_hankel(out, *n, *t, *deriv),
        Command::BoundsCheck {
            nmax,
            tmin,
            tmax,
            points,
        } => cmd_bounds_check(
            out,
            BoundGrid {
                max_order: *nmax,
                t_min: *tmin,
                t_max: *tmax,
                points: *points,
            },
        ),
        Command::Reconstruct {
            input,
            ncut,
            out: target,
        } => cmd_reconstruct(out, input, *ncut, target.as_deref()),
        Command::StabilityVerify {
            ensemble_size,
            seed,
            kr_range,
            which,
            detailed,
        } => cmd_stability_verify(out, *ensemble_size, *seed, kr_range, *which, *detailed),
        Command::Obstacle(args) => cmd_obstacle(out, args),
        Command::Sweep {
            config,
            out: target,
        } => cmd_sweep(out, config, target.as_deref()),
    }
}

/// Parse `args`, run, report errors on stderr and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let result = configure_threads().and_then(|_| execute(&cli, &mut lock));
    let _ = lock.flush();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
