use std::f64::consts::PI;

use num_complex::Complex64;

use super::{eval_representation, EvalError, EvalReport, Method};
use crate::params::{admissible_theta, route, ContourConfig, MLParameters, PolarComplex, Representation};
use crate::quadrature::Tolerances;
use crate::reference::{recip_gamma, series_eval, SeriesSettings};

/// Above this modulus the integrands oscillate too fast for the automatic
/// path, which then goes straight to the series.
pub const T_MAX_INTEGRAL: f64 = 50.0;

/// Smallest ray offset chosen by [`suggested_eps`].
pub const EPS_FLOOR: f64 = 0.1;

/// Modulus beyond which the series is flagged as cancellation-prone.
const SERIES_WARN_MODULUS: f64 = 20.0;

/// `sum |term| / |E|` above which a series result carries a warning.
const SERIES_WARN_CANCELLATION: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// Representation A on its widest contour, series outside its sector.
    Auto,
    /// A caller-chosen representation and contour.
    Fixed { rep: Representation, config: ContourConfig },
    /// The defining power series only.
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub tol: Tolerances,
    pub series: SeriesSettings,
    pub t_max_integral: f64,
    pub strategy: Strategy,
    /// Replace a failed or rounding-limited integral by a better fallback.
    pub fallback: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            series: SeriesSettings::default(),
            t_max_integral: T_MAX_INTEGRAL,
            strategy: Strategy::Auto,
            fallback: true,
        }
    }
}

impl EvalOptions {
    pub fn fixed(rep: Representation, config: ContourConfig) -> Self {
        Self { strategy: Strategy::Fixed { rep, config }, ..Self::default() }
    }
}

/// Ray offset `eps` for representation A that keeps the arc integrand small.
///
/// The arc at radius `R = 1 + eps` carries the factor
/// `(t R)^{rho (1 - mu_re)} exp((t R)^rho)`, while `E` itself can be tiny, so
/// a large arc means cancellation. For `mu_re > 1` the factor is smallest at
/// `(t R)^rho = mu_re - 1`; otherwise it grows with `R` and the floor is used.
pub fn suggested_eps(params: &MLParameters, t: f64) -> f64 {
    if params.mu_re() > 1.0 && t > 0.0 {
        let r_star = (params.mu_re() - 1.0).powf(1.0 / params.rho()) / t;
        (r_star - 1.0).max(EPS_FLOOR)
    } else {
        EPS_FLOOR
    }
}

fn series_report(params: &MLParameters, z: PolarComplex, options: &EvalOptions) -> Result<EvalReport, EvalError> {
    let s = series_eval(params, z.to_cartesian(), &options.series)?;
    let mut warnings = Vec::new();
    if z.t() > SERIES_WARN_MODULUS {
        warnings.push(format!("|z| = {} > {SERIES_WARN_MODULUS}: series subject to cancellation", z.t()));
    }
    let c = s.cancellation();
    if c > SERIES_WARN_CANCELLATION {
        warnings.push(format!("series terms exceed the result by a factor {c:.3e}"));
    }
    Ok(EvalReport { value: s.value, abs_err: s.abs_err, method: Method::Series, warnings })
}

/// Representation B on the widest contour, when its constraints allow it.
fn rep_b_report(params: &MLParameters, z: PolarComplex, options: &EvalOptions) -> Option<Result<EvalReport, EvalError>> {
    let config = if params.rho() > 1.0 { ContourConfig::param3() } else { ContourConfig::param2(PI) };
    let result = eval_representation(params, config, Representation::B, z, &options.tol);
    match result {
        Err(e) if e.is_inadmissible() => None,
        other => Some(other),
    }
}

/// Applies the fallback policy to an integral evaluation: a clean result is
/// kept, otherwise the candidates from `alternatives` and the series compete
/// and the smallest error estimate wins.
fn settle(
    integral: Result<EvalReport, EvalError>,
    alternatives: impl FnOnce() -> Option<Result<EvalReport, EvalError>>,
    params: &MLParameters,
    z: PolarComplex,
    options: &EvalOptions,
) -> Result<EvalReport, EvalError> {
    if !options.fallback {
        return integral;
    }
    let (primary, failure) = match integral {
        Ok(report) if report.warnings.is_empty() => return Ok(report),
        Ok(report) => (Some(report), None),
        Err(e) if e.is_inadmissible() => return Err(e),
        Err(e) => (None, Some(e)),
    };
    let mut notes: Vec<String> = Vec::new();
    if let Some(e) = &failure {
        notes.push(format!("integral representation failed: {e}"));
    }
    let mut candidates: Vec<EvalReport> = primary.into_iter().collect();
    match alternatives() {
        Some(Ok(r)) => candidates.push(r),
        Some(Err(e)) => notes.push(format!("alternative representation failed: {e}")),
        None => {}
    }
    if let Ok(s) = series_report(params, z, options) {
        candidates.push(s);
    }
    let Some(best) = candidates.iter().min_by(|a, b| a.abs_err.total_cmp(&b.abs_err)) else {
        return Err(failure.expect("no candidate without a failure"));
    };
    let mut best = best.clone();
    let first = candidates.first().map(|c| c.method);
    if failure.is_some() || Some(best.method) != first {
        let chosen = format!("used {} (smallest error estimate among fallbacks)", best.method);
        best.warnings.splice(0..0, notes);
        best.warnings.push(chosen);
    }
    Ok(best)
}

/// Evaluates `E_{rho,mu}(z)`.
///
/// `z = 0` gives `1 / Gamma(mu)` directly. With [`Strategy::Auto`],
/// representation A is used on the widest contour when `arg z` is inside
/// its sector and `|z| <= t_max_integral`, and the series otherwise. A
/// failed or rounding-limited integral is compared with representation B
/// and the series, and the smallest error estimate is returned.
pub fn evaluate(params: &MLParameters, z: PolarComplex, options: &EvalOptions) -> Result<EvalReport, EvalError> {
    if z.t() == 0.0 {
        let mu = params.mu();
        let mut v: Complex64 = recip_gamma(mu);
        if mu.im == 0.0 {
            // real argument, real value; drops a signed zero
            v.im = 0.0;
        }
        // 1/Gamma is exactly 0 at the poles and 1 at mu = 1, 2
        let exact = mu.im == 0.0 && mu.re.fract() == 0.0 && mu.re <= 2.0;
        let abs_err = if exact { 0.0 } else { f64::EPSILON * v.norm() };
        return Ok(EvalReport { value: v, abs_err, method: Method::ClosedForm, warnings: Vec::new() });
    }
    match options.strategy {
        Strategy::Auto => {
            let config = ContourConfig::widest(params).with_eps(suggested_eps(params, z.t()));
            let (config, r) = route(params, config, Representation::A)?;
            let interval = admissible_theta(params, &config, r);
            if interval.contains(z.canonical_theta()) && z.t() <= options.t_max_integral {
                let integral = eval_representation(params, config, Representation::A, z, &options.tol);
                let alternative = || rep_b_report(params, z, options);
                settle(integral, alternative, params, z, &EvalOptions { fallback: true, ..*options })
            } else {
                series_report(params, z, options)
            }
        }
        Strategy::Fixed { rep, config } => {
            let integral = eval_representation(params, config, rep, z, &options.tol);
            settle(integral, || None, params, z, options)
        }
        Strategy::Series => series_report(params, z, options),
    }
}
