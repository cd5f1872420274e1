//! Turns a list of signed integrals into one value with a controlled error.

use std::cell::Cell;

use num_complex::Complex64;

use super::{EvalError, EvalReport, Method};
use crate::kernels::KernelError;
use crate::params::MLParameters;
use crate::quadrature::{
    integrate_endpoint_singular, integrate_finite, integrate_semi_infinite, DecaySpec, QuadError,
    QuadValue, QuadratureResult, Rounded, Termination, Tolerances,
};

/// Relative tolerance used when a second pass re-integrates every piece.
const SECOND_PASS_RTOL: f64 = 1e-14;

pub(crate) type Integrand<'a> = Box<dyn Fn(f64) -> Result<Rounded<Complex64>, KernelError> + 'a>;

/// Integration range of one piece.
#[derive(Debug, Clone)]
pub(crate) enum Range {
    Finite { a: f64, b: f64 },
    /// `[a, inf)`; the integrand decays like the envelope of `phis`.
    SemiInfinite { a: f64, phis: Vec<f64> },
    /// `[0, b]` with `f(r) ~ r^exponent` at the origin.
    FromZero { b: f64, exponent: f64 },
    /// `[0, inf)`, split at `r = 1` into the two cases above.
    FromZeroToInf { exponent: f64, phis: Vec<f64> },
}

pub(crate) struct Piece<'a> {
    pub sign: f64,
    pub range: Range,
    pub f: Integrand<'a>,
}

impl<'a> Piece<'a> {
    pub fn new(sign: f64, range: Range, f: impl Fn(f64) -> Result<Complex64, KernelError> + 'a) -> Self {
        Self { sign, range, f: Box::new(move |x| f(x).map(Rounded::exact)) }
    }

    /// A piece whose kernel is a difference of terms; `f` also returns their size.
    pub fn cancelling(
        sign: f64,
        range: Range,
        f: impl Fn(f64) -> Result<(Complex64, f64), KernelError> + 'a,
    ) -> Self {
        Self { sign, range, f: Box::new(move |x| f(x).map(|(v, s)| Rounded::new(v, s))) }
    }
}

/// Context shared by every piece of one evaluation.
pub(crate) struct Setup {
    pub params: MLParameters,
    pub t: f64,
    pub theta: f64,
}

fn merge<V: QuadValue>(a: QuadratureResult<V>, b: QuadratureResult<V>) -> QuadratureResult<V> {
    let termination = match (a.termination, b.termination) {
        (Termination::MaxSubdivisions, _) | (_, Termination::MaxSubdivisions) => Termination::MaxSubdivisions,
        (Termination::RoundoffLimited, _) | (_, Termination::RoundoffLimited) => Termination::RoundoffLimited,
        _ => Termination::Converged,
    };
    QuadratureResult {
        value: a.value + b.value,
        abs_err: a.abs_err + b.abs_err,
        subdivisions: a.subdivisions + b.subdivisions,
        converged: a.converged && b.converged,
        termination,
    }
}

fn integrate_piece(setup: &Setup, piece: &Piece<'_>, tol: &Tolerances) -> Result<QuadratureResult<Complex64>, EvalError> {
    // the quadrature sees a plain function; the first kernel error is kept
    // aside and the sample is poisoned so the integrator stops
    let failure: Cell<Option<KernelError>> = Cell::new(None);
    let f = |x: f64| match (piece.f)(x) {
        Ok(v) => v,
        Err(e) => {
            if failure.get().is_none() {
                failure.set(Some(e));
            }
            Rounded::exact(Complex64::new(f64::NAN, f64::NAN))
        }
    };
    let decay = |phis: &[f64]| DecaySpec::new(setup.params, setup.t, setup.theta, phis);
    let result = match &piece.range {
        Range::Finite { a, b } => integrate_finite(f, *a, *b, tol),
        Range::SemiInfinite { a, phis } => integrate_semi_infinite(f, *a, &decay(phis), tol),
        Range::FromZero { b, exponent } => integrate_endpoint_singular(f, *exponent, *b, tol),
        Range::FromZeroToInf { exponent, phis } => integrate_endpoint_singular(&f, *exponent, 1.0, tol)
            .and_then(|head| integrate_semi_infinite(&f, 1.0, &decay(phis), tol).map(|tail| merge(head, tail))),
    };
    match result {
        Ok(r) => Ok(QuadratureResult {
            value: r.value.value,
            abs_err: r.abs_err,
            subdivisions: r.subdivisions,
            converged: r.converged,
            termination: r.termination,
        }),
        Err(QuadError::NonFiniteEvaluation { x }) => match failure.get() {
            Some(e) => Err(EvalError::Kernel(e)),
            None => Err(EvalError::Quadrature(QuadError::NonFiniteEvaluation { x })),
        },
        Err(e) => Err(e.into()),
    }
}

fn integrate_all(
    setup: &Setup,
    pieces: &[Piece<'_>],
    tol: impl Fn(usize) -> Tolerances,
) -> Result<Vec<QuadratureResult<Complex64>>, EvalError> {
    pieces.iter().enumerate().map(|(i, p)| integrate_piece(setup, p, &tol(i))).collect()
}

fn total(pieces: &[Piece<'_>], results: &[QuadratureResult<Complex64>]) -> (Complex64, f64) {
    pieces.iter().zip(results).fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), (p, r)| {
        (v + r.value * p.sign, e + r.abs_err)
    })
}

/// Integrates every piece and sums them.
///
/// The pieces of a representation can be much larger than their sum, so a
/// per-piece relative tolerance does not bound the error of the total. When
/// the first pass misses `max(atol, rtol |E|)`, each piece is redone with an
/// equal share of that absolute budget.
pub(crate) fn assemble(setup: &Setup, pieces: &[Piece<'_>], tol: &Tolerances, method: Method) -> Result<EvalReport, EvalError> {
    let mut results = integrate_all(setup, pieces, |_| *tol)?;
    let (mut value, mut err) = total(pieces, &results);
    let target = tol.target(value.norm());
    if err > target {
        let share = Tolerances { atol: target / pieces.len() as f64, rtol: SECOND_PASS_RTOL, ..*tol };
        results = integrate_all(setup, pieces, |_| share)?;
        (value, err) = total(pieces, &results);
    }
    let report = EvalReport { value, abs_err: err, method, warnings: Vec::new() };

    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(EvalError::QuadratureFailure { partial: Box::new(report), reason: "non-finite result".into() });
    }
    let target = tol.target(value.norm());
    if err <= target {
        // the summed estimate meets the goal even if one piece ran out of
        // subdivisions before reaching its own share
        return Ok(report);
    }
    if results.iter().any(|r| r.termination == Termination::MaxSubdivisions) {
        return Err(EvalError::QuadratureFailure {
            partial: Box::new(report),
            reason: format!("subdivision limit {} reached", tol.max_subdivisions),
        });
    }
    // every piece stopped at its rounding floor: accept a loose result with a
    // warning, but not one whose error is large on the scale of the tolerance
    let loose = tol.atol.sqrt().max(tol.rtol.sqrt() * value.norm());
    if err > loose {
        return Err(EvalError::QuadratureFailure {
            partial: Box::new(report),
            reason: format!("rounding-limited error {err:.3e} exceeds {loose:.3e}"),
        });
    }
    let mut report = report;
    report.warnings.push(format!(
        "quadrature limited by rounding: error estimate {err:.3e} above requested {target:.3e}"
    ));
    Ok(report)
}
