//! The `mlf` command line: `eval`, `grid` and `verify`.
//!
//! Exit codes: 0 success, 1 usage error, 2 inadmissible input, 3 numerical
//! failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::format::format_f64;
use crate::params::{
    admissible_theta, route, ContourConfig, MLParameters, ParamError, PolarComplex, Representation, ThetaInterval,
    DEFAULT_EPS1,
};
use crate::quadrature::{QuadError, Tolerances};
use crate::representations::{evaluate, suggested_eps, EvalError, EvalOptions, EvalReport, Strategy};
use crate::verify::{self, linspace, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INADMISSIBLE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mlf", version, about = "Mittag-Leffler function E_{rho,mu}(z) from integral representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate at one point and print `re im abs_err method`.
    Eval(EvalArgs),
    /// Evaluate on a polar grid and write CSV.
    Grid(GridArgs),
    /// Run the built-in accuracy checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepChoice {
    /// Representation A, independent angles
    A1,
    /// Representation A, equal angles
    A2,
    /// Representation A, delta = pi / rho
    A3,
    /// Representation B, case chosen from the angles
    B,
    /// Automatic choice with fallbacks
    Auto,
}

#[derive(Debug, Clone, Args)]
struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    rho: f64,
    #[arg(long, allow_negative_numbers = true)]
    mu_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    mu_im: f64,
}

#[derive(Debug, Clone, Args)]
struct MethodArgs {
    #[arg(long, value_enum, default_value_t = RepChoice::Auto)]
    rep: RepChoice,
    #[arg(long, allow_negative_numbers = true)]
    delta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta2: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["delta1", "delta2"])]
    delta: Option<f64>,
    /// Ray offset of representation A [default: chosen from |z| and mu]
    #[arg(long)]
    eps: Option<f64>,
    /// Detour radius of representation B
    #[arg(long, default_value_t = DEFAULT_EPS1)]
    eps1: f64,
    #[arg(long, default_value_t = Tolerances::default().rtol)]
    rtol: f64,
    #[arg(long, default_value_t = Tolerances::default().atol)]
    atol: f64,
    /// Report integral failures instead of falling back to other methods
    #[arg(long)]
    no_fallback: bool,
}

#[derive(Debug, Clone, Args)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    method: MethodArgs,
    /// Modulus |z|
    #[arg(long)]
    t: f64,
    /// Argument of z in radians
    #[arg(long, allow_negative_numbers = true, conflicts_with = "theta_pi")]
    theta: Option<f64>,
    /// Argument of z in multiples of pi
    #[arg(long, allow_negative_numbers = true)]
    theta_pi: Option<f64>,
}

#[derive(Debug, Clone, Args)]
struct GridArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    method: MethodArgs,
    #[arg(long, default_value_t = 0.01)]
    t_min: f64,
    #[arg(long, default_value_t = 7.0)]
    t_max: f64,
    #[arg(long, default_value_t = 25)]
    n_t: usize,
    /// Smallest argument in radians
    #[arg(long, allow_negative_numbers = true, required_unless_present = "theta_min_pi", conflicts_with = "theta_min_pi")]
    theta_min: Option<f64>,
    /// Smallest argument in multiples of pi
    #[arg(long, allow_negative_numbers = true)]
    theta_min_pi: Option<f64>,
    /// Largest argument in radians
    #[arg(long, allow_negative_numbers = true, required_unless_present = "theta_max_pi", conflicts_with = "theta_max_pi")]
    theta_max: Option<f64>,
    /// Largest argument in multiples of pi
    #[arg(long, allow_negative_numbers = true)]
    theta_max_pi: Option<f64>,
    #[arg(long, default_value_t = 25)]
    n_theta: usize,
    /// Write the CSV here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteChoice {
    ClosedForm,
    CrossRep,
    Independence,
    Kernels,
    Symmetry,
    All,
}

#[derive(Debug, Clone, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteChoice::All)]
    suite: SuiteChoice,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid grid: {0}")]
    Grid(&'static str),
    #[error("{0}")]
    Verify(String),
    #[error("output error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Param(_) | CliError::Grid(_) => EXIT_INADMISSIBLE,
            CliError::Eval(e) if e.is_inadmissible() => EXIT_INADMISSIBLE,
            CliError::Eval(EvalError::Quadrature(QuadError::InvalidTolerances(_))) => EXIT_INADMISSIBLE,
            CliError::Eval(_) | CliError::Verify(_) => EXIT_NUMERICAL,
        }
    }
}

/// Sampling ranges of a polar grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub n_t: usize,
    pub n_theta: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), &'static str> {
        let finite = [self.t_min, self.t_max, self.theta_min, self.theta_max].iter().all(|v| v.is_finite());
        if !finite {
            return Err("bounds must be finite");
        }
        if !(self.t_min > 0.0 && self.t_min <= self.t_max) {
            return Err("need 0 < t_min <= t_max");
        }
        if !(self.theta_min < self.theta_max) {
            return Err("need theta_min < theta_max");
        }
        if self.n_t < 1 || self.n_theta < 1 {
            return Err("counts must be at least 1");
        }
        Ok(())
    }

    /// Grid points with `t` as the outer index.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let thetas = linspace(self.theta_min, self.theta_max, self.n_theta);
        linspace(self.t_min, self.t_max, self.n_t)
            .into_iter()
            .flat_map(|t| thetas.iter().map(move |&th| (t, th)))
            .collect()
    }
}

fn parameters(p: &ParamArgs) -> Result<MLParameters, CliError> {
    Ok(MLParameters::new(p.rho, p.mu_re, p.mu_im)?)
}

fn angle(radians: Option<f64>, pi_units: Option<f64>) -> Option<f64> {
    radians.or(pi_units.map(|x| x * std::f64::consts::PI))
}

impl MethodArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances { rtol: self.rtol, atol: self.atol, ..Tolerances::default() }
    }

    /// The representation and contour without the `eps` choice, or `None`
    /// for automatic dispatch.
    fn contour(&self, params: &MLParameters) -> Result<Option<(Representation, ContourConfig)>, CliError> {
        let angles_given = self.delta1.is_some() || self.delta2.is_some() || self.delta.is_some();
        let b_max = if params.rho() > 1.0 { params.max_delta() } else { std::f64::consts::PI };
        let a_max = params.max_delta();
        let choice = match self.rep {
            RepChoice::Auto => {
                if angles_given || self.eps.is_some() {
                    return Err(CliError::Usage("contour flags need an explicit --rep".into()));
                }
                return Ok(None);
            }
            RepChoice::A1 => {
                if self.delta.is_some() {
                    return Err(CliError::Usage("--rep a1 takes --delta1 and --delta2".into()));
                }
                (Representation::A, ContourConfig::param1(self.delta1.unwrap_or(a_max), self.delta2.unwrap_or(a_max)))
            }
            RepChoice::A2 => {
                if self.delta1.is_some() || self.delta2.is_some() {
                    return Err(CliError::Usage("--rep a2 takes --delta".into()));
                }
                (Representation::A, ContourConfig::param2(self.delta.unwrap_or(a_max)))
            }
            RepChoice::A3 => {
                if angles_given {
                    return Err(CliError::Usage("--rep a3 takes no angles".into()));
                }
                (Representation::A, ContourConfig::param3())
            }
            RepChoice::B => {
                let config = match (self.delta1, self.delta2, self.delta) {
                    (None, None, Some(d)) => ContourConfig::param2(d),
                    (None, None, None) if params.rho() > 1.0 => ContourConfig::param3(),
                    (None, None, None) => ContourConfig::param2(b_max),
                    (d1, d2, _) => ContourConfig::param1(d1.unwrap_or(b_max), d2.unwrap_or(b_max)),
                };
                (Representation::B, config)
            }
        };
        if self.rep != RepChoice::B && self.eps1 != DEFAULT_EPS1 {
            return Err(CliError::Usage("--eps1 applies to --rep b only".into()));
        }
        if self.rep == RepChoice::B && self.eps.is_some() {
            return Err(CliError::Usage("--eps applies to representation A only".into()));
        }
        let (rep, config) = choice;
        let config = config.with_eps1(self.eps1);
        // validate now so a bad contour is reported once, not per point
        route(params, config, rep)?;
        Ok(Some((rep, config)))
    }

    fn options(&self, params: &MLParameters, contour: Option<(Representation, ContourConfig)>, t: f64) -> EvalOptions {
        let strategy = match contour {
            None => Strategy::Auto,
            Some((Representation::A, config)) => Strategy::Fixed {
                rep: Representation::A,
                config: config.with_eps(self.eps.unwrap_or_else(|| suggested_eps(params, t))),
            },
            Some((rep, config)) => Strategy::Fixed { rep, config },
        };
        EvalOptions { tol: self.tolerances(), strategy, fallback: !self.no_fallback, ..EvalOptions::default() }
    }
}

fn check_tolerances(tol: &Tolerances) -> Result<(), CliError> {
    tol.validate().map_err(|e| CliError::Eval(EvalError::Quadrature(e)))
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let params = parameters(&args.params)?;
    check_tolerances(&args.method.tolerances())?;
    let theta = angle(args.theta, args.theta_pi);
    let theta = match theta {
        Some(theta) => theta,
        None if args.t == 0.0 => 0.0,
        None => return Err(CliError::Usage("--theta or --theta-pi is required when t > 0".into())),
    };
    let z = PolarComplex::new(args.t, theta)?;
    let contour = args.method.contour(&params)?;
    let options = args.method.options(&params, contour, z.t());
    let report = evaluate(&params, z, &options)?;
    for w in &report.warnings {
        writeln!(err, "warning: {w}")?;
    }
    writeln!(out, "{}", result_fields(&report).join(" "))?;
    Ok(())
}

fn result_fields(r: &EvalReport) -> [String; 4] {
    [format_f64(r.value.re), format_f64(r.value.im), format_f64(r.abs_err), r.method.to_string()]
}

fn cmd_grid(args: &GridArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let params = parameters(&args.params)?;
    check_tolerances(&args.method.tolerances())?;
    let spec = GridSpec {
        t_min: args.t_min,
        t_max: args.t_max,
        theta_min: angle(args.theta_min, args.theta_min_pi).ok_or(CliError::Grid("missing theta_min"))?,
        theta_max: angle(args.theta_max, args.theta_max_pi).ok_or(CliError::Grid("missing theta_max"))?,
        n_t: args.n_t,
        n_theta: args.n_theta,
    };
    spec.validate().map_err(CliError::Grid)?;
    let contour = args.method.contour(&params)?;
    // with a fixed contour, points outside its sector go to the series
    let sector: Option<ThetaInterval> = match contour {
        Some((rep, config)) => {
            let (config, r) = route(&params, config, rep)?;
            Some(admissible_theta(&params, &config, r))
        }
        None => None,
    };

    let rows: Vec<(f64, f64, Result<EvalReport, EvalError>)> = spec
        .points()
        .into_par_iter()
        .map(|(t, theta)| {
            let result = PolarComplex::new(t, theta).map_err(EvalError::from).and_then(|z| {
                let mut options = args.method.options(&params, contour, t);
                if sector.is_some_and(|iv| !iv.contains(z.canonical_theta())) {
                    options.strategy = Strategy::Series;
                }
                evaluate(&params, z, &options)
            });
            (t, theta, result)
        })
        .collect();

    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(out)),
    };
    writeln!(sink, "t,theta,re,im,abs_err,method")?;
    let mut failed = 0usize;
    for (t, theta, result) in &rows {
        let (t, theta) = (format_f64(*t), format_f64(*theta));
        match result {
            Ok(r) => writeln!(sink, "{t},{theta},{}", result_fields(r).join(","))?,
            Err(e) => {
                failed += 1;
                writeln!(err, "point t={t} theta={theta} failed: {e}")?;
                writeln!(sink, "{t},{theta},,,,Failed")?;
            }
        }
    }
    sink.flush()?;
    if failed > 0 {
        writeln!(err, "{failed} of {} points failed", rows.len())?;
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let suites: Vec<Suite> = match args.suite {
        SuiteChoice::ClosedForm => vec![Suite::ClosedForm],
        SuiteChoice::CrossRep => vec![Suite::CrossRep],
        SuiteChoice::Independence => vec![Suite::Independence],
        SuiteChoice::Kernels => vec![Suite::Kernels],
        SuiteChoice::Symmetry => vec![Suite::Symmetry],
        SuiteChoice::All => Suite::ALL.to_vec(),
    };
    let mut failed = 0;
    for suite in suites {
        let checks = verify::run_suite(suite);
        let suite_max = checks.iter().map(|c| c.max_error / c.threshold).fold(0.0, f64::max);
        let suite_pass = checks.iter().all(|c| c.passed());
        for c in &checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            write!(
                out,
                "{:<13} {:<44} points {:>6}  max {:>9.3e}  limit {:>7.1e}  {status}",
                c.suite.name(),
                c.name,
                c.points,
                c.max_error,
                c.threshold
            )?;
            if c.failures > 0 {
                write!(out, "  ({} evaluation errors)", c.failures)?;
            }
            writeln!(out)?;
        }
        writeln!(
            out,
            "{:<13} max error / limit {:.3e}  {}",
            suite.name(),
            suite_max,
            if suite_pass { "PASS" } else { "FAIL" }
        )?;
        if !suite_pass {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(CliError::Verify(format!("{failed} suite(s) failed")));
    }
    Ok(())
}

/// Runs the command line with `args` (including the program name) and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a, out, err),
        Command::Grid(a) => cmd_grid(a, out, err),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
