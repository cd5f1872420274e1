//! Evaluators for `E_{rho,mu}(z)` built from the kernels and the quadrature,
//! and the dispatching front door [`evaluate`].

mod assemble;
mod dispatch;
mod rep_a;
mod rep_b;

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub use dispatch::{evaluate, suggested_eps, EvalOptions, Strategy, EPS_FLOOR, T_MAX_INTEGRAL};

use crate::kernels::KernelError;
use crate::params::{
    admissible_theta, route, ContourConfig, ContourMode, MLParameters, PolarComplex, RepBCase, Representation,
    Route, ThetaInterval,
};
use crate::quadrature::{QuadError, Tolerances};
use crate::reference::ReferenceError;

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    RepAP1,
    RepAP2,
    RepAP3,
    RepB(RepBCase),
    Series,
    ClosedForm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::RepAP1 => f.write_str("RepA_P1"),
            Method::RepAP2 => f.write_str("RepA_P2"),
            Method::RepAP3 => f.write_str("RepA_P3"),
            Method::RepB(c) => write!(f, "RepB_Case{}", c.number()),
            Method::Series => f.write_str("Series"),
            Method::ClosedForm => f.write_str("ClosedForm"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub value: Complex64,
    /// Sum of the quadrature error estimates, including truncated tails.
    pub abs_err: f64,
    pub method: Method,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Param(#[from] crate::params::ParamError),
    #[error("theta = {theta} lies outside the admissible interval {interval}")]
    InadmissibleTheta { theta: f64, interval: ThetaInterval },
    #[error("integral representations need |z| > 0")]
    ZeroModulus,
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("quadrature failed ({reason}); partial value {} +- {:.3e}", .partial.value, .partial.abs_err)]
    QuadratureFailure { partial: Box<EvalReport>, reason: String },
    #[error(transparent)]
    Series(#[from] ReferenceError),
}

impl EvalError {
    /// True for errors caused by the inputs rather than by the numerics.
    pub fn is_inadmissible(&self) -> bool {
        matches!(self, EvalError::Param(_) | EvalError::InadmissibleTheta { .. } | EvalError::ZeroModulus)
    }
}

/// Validates `config` for `rep`, checks `theta` against the admissible
/// interval and runs the matching evaluator.
pub fn eval_representation(
    params: &MLParameters,
    config: ContourConfig,
    rep: Representation,
    z: PolarComplex,
    tol: &Tolerances,
) -> Result<EvalReport, EvalError> {
    let (config, route) = route(params, config, rep)?;
    let interval = admissible_theta(params, &config, route);
    let theta = z.canonical_theta();
    if !interval.contains(theta) {
        return Err(EvalError::InadmissibleTheta { theta: z.theta(), interval });
    }
    let t = z.t();
    if t == 0.0 {
        return Err(EvalError::ZeroModulus);
    }
    match route {
        Route::A => match config.mode {
            ContourMode::Param1 { delta1, delta2 } => rep_a::p1(params, delta1, delta2, config.eps, t, theta, tol),
            ContourMode::Param2 { delta } => rep_a::p2(params, delta, config.eps, t, theta, tol),
            ContourMode::Param3 => rep_a::p3(params, config.eps, t, theta, tol),
        },
        Route::B(case) => {
            let (delta1, delta2) = config.deltas(params);
            let g = rep_b::Geometry { delta1, delta2, eps1: config.eps1, tail_sign: rep_b::DETOUR_TAIL_SIGN };
            rep_b::eval(params, case, &g, t, theta, tol)
        }
    }
}

/// Representation A with independent angles.
pub fn eval_rep_a_p1(
    params: &MLParameters,
    delta1: f64,
    delta2: f64,
    eps: f64,
    z: PolarComplex,
    tol: &Tolerances,
) -> Result<EvalReport, EvalError> {
    eval_representation(params, ContourConfig::param1(delta1, delta2).with_eps(eps), Representation::A, z, tol)
}

/// Representation A with equal angles.
pub fn eval_rep_a_p2(
    params: &MLParameters,
    delta: f64,
    eps: f64,
    z: PolarComplex,
    tol: &Tolerances,
) -> Result<EvalReport, EvalError> {
    eval_representation(params, ContourConfig::param2(delta).with_eps(eps), Representation::A, z, tol)
}

/// Representation A with `delta = pi / rho`; needs `rho >= 1`.
pub fn eval_rep_a_p3(params: &MLParameters, eps: f64, z: PolarComplex, tol: &Tolerances) -> Result<EvalReport, EvalError> {
    eval_representation(params, ContourConfig::param3().with_eps(eps), Representation::A, z, tol)
}

/// Representation B; the case follows from the configuration.
pub fn eval_rep_b(
    params: &MLParameters,
    config: ContourConfig,
    z: PolarComplex,
    tol: &Tolerances,
) -> Result<EvalReport, EvalError> {
    eval_representation(params, config, Representation::B, z, tol)
}
