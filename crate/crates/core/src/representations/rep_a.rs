//! Representation A: a ray from `1 + eps` to infinity plus an arc of radius
//! `1 + eps`.

use std::f64::consts::PI;

use super::assemble::{assemble, Piece, Range, Setup};
use super::{EvalError, EvalReport, Method};
use crate::kernels::Kernels;
use crate::params::MLParameters;
use crate::quadrature::Tolerances;

fn arc<'a>(k: &'a Kernels, radius: f64, lo: f64, hi: f64) -> Piece<'a> {
    Piece::new(1.0, Range::Finite { a: lo, b: hi }, move |phi| k.p(radius, phi))
}

/// Independent angles `(delta1, delta2)`.
pub(super) fn p1(
    params: &MLParameters,
    delta1: f64,
    delta2: f64,
    eps: f64,
    t: f64,
    theta: f64,
    tol: &Tolerances,
) -> Result<EvalReport, EvalError> {
    let k = Kernels::new(params, t, theta)?;
    let start = 1.0 + eps;
    let pieces = [
        Piece::cancelling(1.0, Range::SemiInfinite { a: start, phis: vec![-delta1, delta2] }, |r| {
            k.k_with_scale(r, -delta1, delta2)
        }),
        arc(&k, start, -delta1 - PI, delta2 - PI),
    ];
    assemble(&Setup { params: *params, t, theta }, &pieces, tol, Method::RepAP1)
}

/// Equal angles `delta`.
pub(super) fn p2(
    params: &MLParameters,
    delta: f64,
    eps: f64,
    t: f64,
    theta: f64,
    tol: &Tolerances,
) -> Result<EvalReport, EvalError> {
    let k = Kernels::new(params, t, theta)?;
    let start = 1.0 + eps;
    let pieces = [
        Piece::cancelling(1.0, Range::SemiInfinite { a: start, phis: vec![-delta, delta] }, |r| k.k_sym_with_scale(r, delta)),
        arc(&k, start, -delta - PI, delta - PI),
    ];
    assemble(&Setup { params: *params, t, theta }, &pieces, tol, Method::RepAP2)
}

/// `delta = pi / rho`, `rho >= 1`.
pub(super) fn p3(params: &MLParameters, eps: f64, t: f64, theta: f64, tol: &Tolerances) -> Result<EvalReport, EvalError> {
    let k = Kernels::new(params, t, theta)?;
    let start = 1.0 + eps;
    let delta = PI / params.rho();
    let pieces = [
        Piece::cancelling(1.0, Range::SemiInfinite { a: start, phis: vec![-delta, delta] }, |r| k.k_pirho_with_scale(r)),
        arc(&k, start, -delta - PI, delta - PI),
    ];
    assemble(&Setup { params: *params, t, theta }, &pieces, tol, Method::RepAP3)
}
