//! Adaptive Gauss-Kronrod (G7/K15) integration with decay-aware truncation
//! of semi-infinite ranges.
//!
//! The integrators are generic over [`QuadValue`], so a complex integrand is
//! refined as one object: both parts share nodes and the error estimate is
//! the modulus of the complex G7/K15 difference.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::params::MLParameters;

/// Kronrod abscissae on `[-1, 1]`, descending; odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Error estimates below this multiple of `eps * integral(|f|)` are roundoff.
const ROUNDOFF_FACTOR: f64 = 50.0;

/// Share of the error that open panels may hold when the rest is rounding.
const PENDING_FRACTION: f64 = 0.05;

/// Safety margin added to the log-envelope budget of [`truncation_radius`].
const TRUNCATION_MARGIN: f64 = 10.0;

/// Substituted nodes closer to zero than this contribute nothing.
const ENDPOINT_UNDERFLOW: f64 = 1e-250;

/// Scalar type an integrand may return.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
    /// Size of the quantities the sample was computed from; sets the
    /// rounding floor. Differs from `magnitude` for values that are
    /// differences of larger terms.
    fn rounding_scale(&self) -> f64 {
        self.magnitude()
    }
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// A sample together with the size of the terms that produced it.
///
/// Sums add the scales, so the rounding floor of a panel follows the
/// magnitude of the cancelling terms rather than of their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rounded<V> {
    pub value: V,
    pub scale: f64,
}

impl<V: QuadValue> Rounded<V> {
    pub fn new(value: V, scale: f64) -> Self {
        Self { value, scale }
    }

    /// A sample computed without cancellation.
    pub fn exact(value: V) -> Self {
        Self { scale: value.magnitude(), value }
    }
}

impl<V: QuadValue> Add for Rounded<V> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { value: self.value + rhs.value, scale: self.scale + rhs.scale }
    }
}

impl<V: QuadValue> Sub for Rounded<V> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { value: self.value - rhs.value, scale: self.scale + rhs.scale }
    }
}

impl<V: QuadValue> Mul<f64> for Rounded<V> {
    type Output = Self;
    fn mul(self, w: f64) -> Self {
        Self { value: self.value * w, scale: self.scale * w.abs() }
    }
}

impl<V: QuadValue> QuadValue for Rounded<V> {
    fn zero() -> Self {
        Self { value: V::zero(), scale: 0.0 }
    }
    fn magnitude(&self) -> f64 {
        self.value.magnitude()
    }
    fn is_finite_value(&self) -> bool {
        self.value.is_finite_value() && self.scale.is_finite()
    }
    fn rounding_scale(&self) -> f64 {
        self.scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuadError {
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFiniteEvaluation { x: f64 },
    #[error("integrand envelope does not decay (max cosine factor {c_max} >= 0)")]
    NoDecay { c_max: f64 },
    #[error("endpoint exponent {exponent} <= -1 is not integrable")]
    NonIntegrable { exponent: f64 },
    #[error("invalid tolerances: {0}")]
    InvalidTolerances(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_subdivisions: usize,
    /// Bound on the discarded tail of a truncated semi-infinite integral.
    pub tail_atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, max_subdivisions: 2000, tail_atol: 1e-14 }
    }
}

impl Tolerances {
    /// Smallest relative tolerance accepted.
    pub const RTOL_FLOOR: f64 = 1e-14;

    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rtol >= Self::RTOL_FLOOR) {
            return Err(QuadError::InvalidTolerances("rtol must be at least 1e-14"));
        }
        if !(self.atol > 0.0) {
            return Err(QuadError::InvalidTolerances("atol must be positive"));
        }
        if !(self.tail_atol > 0.0 && self.tail_atol < 1.0) {
            return Err(QuadError::InvalidTolerances("tail_atol must lie in (0, 1)"));
        }
        if self.max_subdivisions < 1 {
            return Err(QuadError::InvalidTolerances("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    /// Acceptance threshold for an integral of magnitude `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.atol.max(self.rtol * value)
    }
}

/// Why the adaptive loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    /// Every remaining panel is at its roundoff floor; more bisection cannot help.
    RoundoffLimited,
    MaxSubdivisions,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<V = f64> {
    pub value: V,
    pub abs_err: f64,
    pub subdivisions: usize,
    pub converged: bool,
    pub termination: Termination,
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    err: f64,
    resolved: bool,
}

/// Heap entry ordered by error.
struct Pending {
    err: f64,
    idx: usize,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Pending {}
impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// One G7/K15 application: `(K15 estimate, local error, resolved)`.
fn gk15<V, F>(f: &mut F, a: f64, b: f64) -> Result<(V, f64, bool), QuadError>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<V, QuadError> {
        let v = f(x);
        if v.is_finite_value() {
            Ok(v)
        } else {
            Err(QuadError::NonFiniteEvaluation { x })
        }
    };
    let fc = eval(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = fc.rounding_scale() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        let pair = f1 + f2;
        kronrod = kronrod + pair * WGK[j];
        resabs += (f1.rounding_scale() + f2.rounding_scale()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let diff = (kronrod - gauss).magnitude() * half.abs();
    let floor = ROUNDOFF_FACTOR * f64::EPSILON * resabs * half.abs();
    // a panel too narrow to bisect meaningfully is also final
    let narrow = half.abs() <= 4.0 * f64::EPSILON * center.abs().max(f64::MIN_POSITIVE);
    let resolved = diff <= floor || narrow;
    Ok((value, diff.max(floor), resolved))
}

/// Adaptive integration over the union of consecutive panels `breaks[i]..breaks[i+1]`.
fn integrate_panels<V, F>(mut f: F, breaks: &[f64], tol: &Tolerances) -> Result<QuadratureResult<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    tol.validate()?;
    let mut panels: Vec<Panel<V>> = Vec::with_capacity(breaks.len() + 2 * tol.max_subdivisions);
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        let (value, err, resolved) = gk15(&mut f, w[0], w[1])?;
        if !resolved {
            heap.push(Pending { err, idx: panels.len() });
        }
        panels.push(Panel { a: w[0], b: w[1], value, err, resolved });
    }

    let totals = |panels: &[Panel<V>]| {
        panels.iter().fold((V::zero(), 0.0, 0.0), |(v, e, fl), p| {
            (v + p.value, e + p.err, if p.resolved { fl + p.err } else { fl })
        })
    };
    // `floor` is the part of `err` held by panels at their rounding floor
    let (mut value, mut err, mut floor) = totals(&panels);
    let mut subdivisions = 0;
    let termination = loop {
        let target = tol.target(value.magnitude());
        if err <= target {
            break Termination::Converged;
        }
        // the floor alone misses the target and the panels still open
        // could not change that
        if floor > target && err - floor <= PENDING_FRACTION * err {
            break Termination::RoundoffLimited;
        }
        let Some(Pending { idx, .. }) = heap.pop() else {
            break Termination::RoundoffLimited;
        };
        if subdivisions >= tol.max_subdivisions {
            break Termination::MaxSubdivisions;
        }
        subdivisions += 1;
        let (a, b) = (panels[idx].a, panels[idx].b);
        let mid = 0.5 * (a + b);
        let (v1, e1, r1) = gk15(&mut f, a, mid)?;
        let (v2, e2, r2) = gk15(&mut f, mid, b)?;
        value = value - panels[idx].value + v1 + v2;
        err = err - panels[idx].err + e1 + e2;
        for (e, r) in [(e1, r1), (e2, r2)] {
            if r {
                floor += e;
            }
        }
        panels[idx] = Panel { a, b: mid, value: v1, err: e1, resolved: r1 };
        if !r1 {
            heap.push(Pending { err: e1, idx });
        }
        if !r2 {
            heap.push(Pending { err: e2, idx: panels.len() });
        }
        panels.push(Panel { a: mid, b, value: v2, err: e2, resolved: r2 });
        // the running sums drift by rounding; refresh them now and then
        if subdivisions % 64 == 0 {
            (value, err, floor) = totals(&panels);
        }
    };
    let (value, err, _) = totals(&panels);
    let termination = match termination {
        Termination::Converged if err > tol.target(value.magnitude()) => Termination::RoundoffLimited,
        other => other,
    };
    Ok(QuadratureResult {
        value,
        abs_err: err,
        subdivisions,
        converged: termination == Termination::Converged,
        termination,
    })
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate_finite<V, F>(f: F, a: f64, b: f64, tol: &Tolerances) -> Result<QuadratureResult<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(QuadError::InvalidInterval { a, b });
    }
    integrate_panels(f, &[a, b], tol)
}

/// Inputs of [`truncation_radius`]: the integrand's exponential envelope is
/// `exp{(t r)^rho cos(rho(theta + phi - pi))}` for each angle in `phis`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecaySpec {
    pub params: MLParameters,
    pub t: f64,
    pub theta: f64,
    pub phis: Vec<f64>,
}

impl DecaySpec {
    pub fn new(params: MLParameters, t: f64, theta: f64, phis: &[f64]) -> Self {
        Self { params, t, theta, phis: phis.to_vec() }
    }
}

/// Radius past which every envelope term is below `tail_atol`.
pub fn truncation_radius(
    params: &MLParameters,
    t: f64,
    theta: f64,
    phis: &[f64],
    tail_atol: f64,
) -> Result<f64, QuadError> {
    let rho = params.rho();
    let c_max = phis
        .iter()
        .map(|phi| (rho * (theta + phi - PI)).cos())
        .fold(f64::NEG_INFINITY, f64::max);
    if !(c_max < 0.0) {
        return Err(QuadError::NoDecay { c_max });
    }
    let a = params.power_exponent();
    let base = -tail_atol.ln() + rho * params.mu_im().abs() * 2.0 * PI + TRUNCATION_MARGIN;
    let radius = |budget: f64| (budget / -c_max).powf(1.0 / rho) / t;
    // the power factor (t R)^a raises the budget; iterate to a fixed point
    let mut r = radius(base);
    for _ in 0..100 {
        let next = radius(base + (a * (t * r).ln()).max(0.0));
        let done = (next - r).abs() <= 1e-12 * r;
        r = next;
        if done {
            break;
        }
    }
    Ok(r)
}

/// Integrates `f` over `[a, inf)` by truncating at [`truncation_radius`].
///
/// The truncated range is seeded with panels of doubling width
/// `[a, a+1], [a+1, a+2], [a+2, a+4], ...` and the reported error includes
/// `tail_atol` for the discarded tail.
pub fn integrate_semi_infinite<V, F>(
    f: F,
    a: f64,
    decay: &DecaySpec,
    tol: &Tolerances,
) -> Result<QuadratureResult<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    if !a.is_finite() {
        return Err(QuadError::InvalidInterval { a, b: f64::INFINITY });
    }
    let r = truncation_radius(&decay.params, decay.t, decay.theta, &decay.phis, tol.tail_atol)?;
    let end = r.max(a + 1.0);
    let mut breaks = vec![a];
    let mut width = 1.0;
    let mut x = a + 1.0;
    while x < end {
        breaks.push(x);
        if breaks.len() > 2 {
            width *= 2.0;
        }
        x += width;
    }
    breaks.push(end);
    let mut res = integrate_panels(f, &breaks, tol)?;
    res.abs_err += tol.tail_atol;
    Ok(res)
}

/// Integrates `f` over `[0, b]` where `f(r) ~ r^exponent_at_zero` near zero.
///
/// For negative exponents the substitution `r = u^p`, `p = ceil(2 / (1 + e0))`,
/// makes the transformed integrand vanish at the origin.
pub fn integrate_endpoint_singular<V, F>(
    mut f: F,
    exponent_at_zero: f64,
    b: f64,
    tol: &Tolerances,
) -> Result<QuadratureResult<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    if !(exponent_at_zero > -1.0) {
        return Err(QuadError::NonIntegrable { exponent: exponent_at_zero });
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(QuadError::InvalidInterval { a: 0.0, b });
    }
    if exponent_at_zero >= 0.0 {
        return integrate_finite(f, 0.0, b, tol);
    }
    let p = (2.0 / (1.0 + exponent_at_zero)).ceil();
    let pi = p as i32;
    let upper = b.powf(1.0 / p);
    let g = move |u: f64| {
        let r = u.powi(pi);
        if r < ENDPOINT_UNDERFLOW {
            V::zero()
        } else {
            f(r) * (p * u.powi(pi - 1))
        }
    };
    integrate_finite(g, 0.0, upper, tol)
}
