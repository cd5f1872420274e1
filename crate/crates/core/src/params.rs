//! Parameter and argument domain: value types, admissibility checks and
//! the case analysis for the from-zero representation.

use std::f64::consts::{PI, TAU};
use std::fmt;

use thiserror::Error;

/// Angles closer than this are treated as equal when deciding whether a
/// contour angle sits on a bound such as `pi` or `pi / rho`.
const ANGLE_EPS: f64 = 1e-12;

fn angle_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= ANGLE_EPS * b.abs().max(1.0)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("rho must satisfy rho > 1/2, got {0}")]
    RhoOutOfRange(f64),
    #[error("parameter {name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("modulus t must be nonnegative, got {0}")]
    NegativeModulus(f64),
    #[error("{angle} = {value} outside ({lo}, {hi}{close}", close = if *.hi_inclusive { "]" } else { ")" })]
    DeltaOutOfRange {
        angle: DeltaAngle,
        value: f64,
        lo: f64,
        hi: f64,
        hi_inclusive: bool,
    },
    #[error("representation B requires Re(mu) < 1 + 1/rho = {bound}, got {mu_re}")]
    MuConstraintViolated { mu_re: f64, bound: f64 },
    #[error("parameterization 3 is not available for representation {rep} at rho = {rho}")]
    Param3NotAvailable { rep: Representation, rho: f64 },
    #[error("contour offset eps must be positive, got {0}")]
    InvalidEps(f64),
    #[error("detour radius eps1 must lie in (0, 1), got {0}")]
    InvalidEps1(f64),
}

/// Which contour angle a [`ParamError::DeltaOutOfRange`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaAngle {
    Delta1,
    Delta2,
    Delta,
}

impl fmt::Display for DeltaAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaAngle::Delta1 => "delta1",
            DeltaAngle::Delta2 => "delta2",
            DeltaAngle::Delta => "delta",
        })
    }
}

/// Argument `z = t * exp(i * theta)`.
///
/// `theta` is kept exactly as given; [`PolarComplex::canonical_theta`] maps it
/// into `[0, 2pi)` when an admissibility decision needs it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarComplex {
    t: f64,
    theta: f64,
}

impl PolarComplex {
    pub fn new(t: f64, theta: f64) -> Result<Self, ParamError> {
        if !t.is_finite() {
            return Err(ParamError::NonFinite { name: "t", value: t });
        }
        if !theta.is_finite() {
            return Err(ParamError::NonFinite { name: "theta", value: theta });
        }
        if t < 0.0 {
            return Err(ParamError::NegativeModulus(t));
        }
        Ok(Self { t, theta })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn canonical_theta(&self) -> f64 {
        let c = self.theta.rem_euclid(TAU);
        // rem_euclid can round up to exactly 2pi for tiny negative inputs
        if c >= TAU {
            0.0
        } else {
            c
        }
    }

    /// Same point with the angle mapped into `[0, 2pi)`.
    pub fn canonical(&self) -> Self {
        Self { t: self.t, theta: self.canonical_theta() }
    }

    pub fn to_cartesian(&self) -> num_complex::Complex64 {
        num_complex::Complex64::from_polar(self.t, self.theta)
    }
}

/// Function parameters `rho > 1/2` and `mu = mu_re + i mu_im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParameters {
    rho: f64,
    mu_re: f64,
    mu_im: f64,
}

impl MLParameters {
    pub fn new(rho: f64, mu_re: f64, mu_im: f64) -> Result<Self, ParamError> {
        for (name, value) in [("rho", rho), ("mu_re", mu_re), ("mu_im", mu_im)] {
            if !value.is_finite() {
                return Err(ParamError::NonFinite { name, value });
            }
        }
        if rho <= 0.5 {
            return Err(ParamError::RhoOutOfRange(rho));
        }
        Ok(Self { rho, mu_re, mu_im })
    }

    /// Real `mu`.
    pub fn real(rho: f64, mu: f64) -> Result<Self, ParamError> {
        Self::new(rho, mu, 0.0)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn mu_re(&self) -> f64 {
        self.mu_re
    }

    pub fn mu_im(&self) -> f64 {
        self.mu_im
    }

    pub fn mu(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.mu_re, self.mu_im)
    }

    /// Exponent `rho (1 - mu_re)` of the power factor `(t r)^{rho (1 - mu_re)}`.
    pub fn power_exponent(&self) -> f64 {
        self.rho * (1.0 - self.mu_re)
    }

    /// Largest contour angle allowed by the finite-offset representation,
    /// `min(pi, pi / rho)`.
    pub fn max_delta(&self) -> f64 {
        PI.min(PI / self.rho)
    }

    /// Exclusive lower bound `pi / (2 rho)` shared by every contour angle.
    pub fn min_delta(&self) -> f64 {
        PI / (2.0 * self.rho)
    }
}

/// The two families of real-variable representations.
///
/// `A` integrates a ray from `1 + eps` plus an arc at radius `1 + eps`;
/// `B` integrates rays from the origin and needs `Re(mu) < 1 + 1/rho`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    A,
    B,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::A => "A",
            Representation::B => "B",
        })
    }
}

/// Contour shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourMode {
    /// Independent angles `(delta1, delta2)`.
    Param1 { delta1: f64, delta2: f64 },
    /// Equal angles `delta1 = delta2 = delta`.
    Param2 { delta: f64 },
    /// `delta = pi / rho`.
    Param3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourConfig {
    pub mode: ContourMode,
    /// Ray start offset for representation A: the ray begins at `1 + eps`.
    pub eps: f64,
    /// Detour radius around `r = 1` for representation B cases 2-4.
    pub eps1: f64,
}

pub const DEFAULT_EPS: f64 = 0.5;
pub const DEFAULT_EPS1: f64 = 0.5;

impl ContourConfig {
    pub fn new(mode: ContourMode) -> Self {
        Self { mode, eps: DEFAULT_EPS, eps1: DEFAULT_EPS1 }
    }

    pub fn param1(delta1: f64, delta2: f64) -> Self {
        Self::new(ContourMode::Param1 { delta1, delta2 })
    }

    pub fn param2(delta: f64) -> Self {
        Self::new(ContourMode::Param2 { delta })
    }

    pub fn param3() -> Self {
        Self::new(ContourMode::Param3)
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_eps1(mut self, eps1: f64) -> Self {
        self.eps1 = eps1;
        self
    }

    /// The widest-coverage contour for representation A: `Param3` when
    /// `rho >= 1`, otherwise `Param2` with `delta = pi`.
    pub fn widest(params: &MLParameters) -> Self {
        if params.rho() >= 1.0 {
            Self::param3()
        } else {
            Self::param2(params.max_delta())
        }
    }

    /// Resolved `(delta1, delta2)` pair.
    pub fn deltas(&self, params: &MLParameters) -> (f64, f64) {
        match self.mode {
            ContourMode::Param1 { delta1, delta2 } => (delta1, delta2),
            ContourMode::Param2 { delta } => (delta, delta),
            ContourMode::Param3 => {
                let d = PI / params.rho();
                (d, d)
            }
        }
    }
}

/// Case of the from-zero representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepBCase {
    /// Both angles strictly inside their bounds, unequal.
    Case1,
    /// `delta1 = pi`, `delta2 < pi` (`rho <= 1`).
    Case2,
    /// `delta1 < pi`, `delta2 = pi` (`rho <= 1`).
    Case3,
    /// `delta1 = delta2 = pi` (`rho <= 1`).
    Case4,
    /// Equal angles below the upper bound.
    Case5,
    /// `delta = pi / rho` with `rho > 1`.
    Case6,
}

impl RepBCase {
    pub fn number(&self) -> u8 {
        match self {
            RepBCase::Case1 => 1,
            RepBCase::Case2 => 2,
            RepBCase::Case3 => 3,
            RepBCase::Case4 => 4,
            RepBCase::Case5 => 5,
            RepBCase::Case6 => 6,
        }
    }
}

/// Open interval of admissible `arg z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaInterval {
    pub lo: f64,
    pub hi: f64,
}

impl ThetaInterval {
    /// Strict containment; both endpoints are excluded.
    pub fn contains(&self, theta: f64) -> bool {
        self.lo < theta && theta < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// The interval with `margin` removed from each end.
    pub fn shrink(&self, margin: f64) -> Self {
        Self { lo: self.lo + margin, hi: self.hi - margin }
    }
}

impl fmt::Display for ThetaInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Which evaluator a validated configuration selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    A,
    B(RepBCase),
}

fn check_delta(
    angle: DeltaAngle,
    value: f64,
    lo: f64,
    hi: f64,
    hi_inclusive: bool,
) -> Result<(), ParamError> {
    let above = value > lo;
    let below = if hi_inclusive { value <= hi || angle_eq(value, hi) } else { value < hi };
    if above && below && value.is_finite() {
        Ok(())
    } else {
        Err(ParamError::DeltaOutOfRange { angle, value, lo, hi, hi_inclusive })
    }
}

fn check_radii(config: &ContourConfig) -> Result<(), ParamError> {
    if !(config.eps > 0.0 && config.eps.is_finite()) {
        return Err(ParamError::InvalidEps(config.eps));
    }
    if !(config.eps1 > 0.0 && config.eps1 < 1.0) {
        return Err(ParamError::InvalidEps1(config.eps1));
    }
    Ok(())
}

/// Checks a contour configuration against the bounds of the chosen
/// representation and returns it unchanged when admissible.
pub fn validate_config(
    params: &MLParameters,
    config: ContourConfig,
    rep: Representation,
) -> Result<ContourConfig, ParamError> {
    check_radii(&config)?;
    let rho = params.rho();
    let lo = params.min_delta();
    match rep {
        Representation::A => {
            let hi = params.max_delta();
            match config.mode {
                ContourMode::Param1 { delta1, delta2 } => {
                    check_delta(DeltaAngle::Delta1, delta1, lo, hi, true)?;
                    check_delta(DeltaAngle::Delta2, delta2, lo, hi, true)?;
                }
                ContourMode::Param2 { delta } => {
                    check_delta(DeltaAngle::Delta, delta, lo, hi, true)?;
                }
                ContourMode::Param3 => {
                    if rho < 1.0 {
                        return Err(ParamError::Param3NotAvailable { rep, rho });
                    }
                }
            }
        }
        Representation::B => {
            let bound = 1.0 + 1.0 / rho;
            if params.mu_re() >= bound {
                return Err(ParamError::MuConstraintViolated { mu_re: params.mu_re(), bound });
            }
            // rho > 1: (pi/2rho, pi/rho]; rho <= 1: (pi/2rho, pi) plus the
            // detour cases at exactly pi.
            let hi = if rho > 1.0 { PI / rho } else { PI };
            match config.mode {
                ContourMode::Param1 { delta1, delta2 } => {
                    check_delta(DeltaAngle::Delta1, delta1, lo, hi, true)?;
                    check_delta(DeltaAngle::Delta2, delta2, lo, hi, true)?;
                }
                ContourMode::Param2 { delta } => {
                    check_delta(DeltaAngle::Delta, delta, lo, hi, true)?;
                }
                ContourMode::Param3 => {
                    if rho <= 1.0 {
                        return Err(ParamError::Param3NotAvailable { rep, rho });
                    }
                }
            }
        }
    }
    Ok(config)
}

/// Maps a configuration validated for representation B onto its case.
pub fn classify_case(params: &MLParameters, config: &ContourConfig) -> RepBCase {
    let rho = params.rho();
    if let ContourMode::Param3 = config.mode {
        return RepBCase::Case6;
    }
    let (d1, d2) = config.deltas(params);
    if rho <= 1.0 {
        match (angle_eq(d1, PI), angle_eq(d2, PI)) {
            (true, true) => return RepBCase::Case4,
            (true, false) => return RepBCase::Case2,
            (false, true) => return RepBCase::Case3,
            (false, false) => {}
        }
    }
    if angle_eq(d1, d2) {
        if rho > 1.0 && angle_eq(d1, PI / rho) {
            RepBCase::Case6
        } else {
            RepBCase::Case5
        }
    } else {
        RepBCase::Case1
    }
}

/// Validates and resolves which evaluator handles the configuration.
pub fn route(
    params: &MLParameters,
    config: ContourConfig,
    rep: Representation,
) -> Result<(ContourConfig, Route), ParamError> {
    let config = validate_config(params, config, rep)?;
    let route = match rep {
        Representation::A => Route::A,
        Representation::B => Route::B(classify_case(params, &config)),
    };
    Ok((config, route))
}

/// Open interval of admissible `theta` for a validated configuration.
pub fn admissible_theta(params: &MLParameters, config: &ContourConfig, route: Route) -> ThetaInterval {
    let half = params.min_delta();
    let (d1, d2) = config.deltas(params);
    match route {
        Route::A | Route::B(RepBCase::Case1) | Route::B(RepBCase::Case5) | Route::B(RepBCase::Case6) => {
            ThetaInterval { lo: half - d2 + PI, hi: -half + d1 + PI }
        }
        Route::B(RepBCase::Case2) => ThetaInterval { lo: half - d2 + PI, hi: -half + TAU },
        Route::B(RepBCase::Case3) => ThetaInterval { lo: half, hi: -half + d1 + PI },
        Route::B(RepBCase::Case4) => ThetaInterval { lo: half, hi: -half + TAU },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rho: f64, mu: f64) -> MLParameters {
        MLParameters::real(rho, mu).unwrap()
    }

    #[test]
    fn rho_must_exceed_half() {
        assert!(matches!(MLParameters::real(0.5, 1.0), Err(ParamError::RhoOutOfRange(_))));
        assert!(MLParameters::real(0.5000001, 1.0).is_ok());
        assert!(MLParameters::new(f64::NAN, 1.0, 0.0).is_err());
    }

    #[test]
    fn polar_rejects_negative_modulus() {
        assert!(PolarComplex::new(-1.0, 0.0).is_err());
        let z = PolarComplex::new(2.0, -0.5 * PI).unwrap();
        assert_eq!(z.theta(), -0.5 * PI);
        assert!((z.canonical_theta() - 1.5 * PI).abs() < 1e-15);
        assert_eq!(PolarComplex::new(1.0, -1e-300).unwrap().canonical_theta(), 0.0);
    }

    #[test]
    fn rep_a_accepts_inclusive_upper_bound() {
        let cfg = ContourConfig::param1(PI, PI);
        assert_eq!(validate_config(&p(1.0, 0.0), cfg, Representation::A), Ok(cfg));
    }

    #[test]
    fn rep_a_rejects_lower_bound_and_above_max() {
        let err = validate_config(&p(1.0, 0.0), ContourConfig::param2(PI / 2.0), Representation::A);
        assert!(matches!(err, Err(ParamError::DeltaOutOfRange { angle: DeltaAngle::Delta, .. })));
        let err = validate_config(&p(2.0, 0.0), ContourConfig::param1(0.4 * PI, 0.6 * PI), Representation::A);
        assert!(matches!(err, Err(ParamError::DeltaOutOfRange { angle: DeltaAngle::Delta2, .. })));
    }

    #[test]
    fn rep_b_mu_constraint() {
        let err = validate_config(&p(1.0, 3.0), ContourConfig::param2(0.9 * PI), Representation::B);
        assert!(matches!(err, Err(ParamError::MuConstraintViolated { .. })));
        let err = validate_config(&p(1.0, 2.0), ContourConfig::param2(0.9 * PI), Representation::B);
        assert!(matches!(err, Err(ParamError::MuConstraintViolated { .. })));
        assert!(validate_config(&p(1.0, 1.999), ContourConfig::param2(0.9 * PI), Representation::B).is_ok());
    }

    #[test]
    fn param3_availability() {
        let a = validate_config(&p(0.9, 0.0), ContourConfig::param3(), Representation::A);
        assert!(matches!(a, Err(ParamError::Param3NotAvailable { .. })));
        assert!(validate_config(&p(1.0, 0.0), ContourConfig::param3(), Representation::A).is_ok());
        let b = validate_config(&p(1.0, 0.0), ContourConfig::param3(), Representation::B);
        assert!(matches!(b, Err(ParamError::Param3NotAvailable { .. })));
        assert!(validate_config(&p(1.2, 0.0), ContourConfig::param3(), Representation::B).is_ok());
    }

    #[test]
    fn radii_checked() {
        let cfg = ContourConfig::param2(PI).with_eps(0.0);
        assert!(matches!(validate_config(&p(1.0, 0.0), cfg, Representation::A), Err(ParamError::InvalidEps(_))));
        let cfg = ContourConfig::param2(PI).with_eps1(1.0);
        assert!(matches!(validate_config(&p(1.0, 0.0), cfg, Representation::A), Err(ParamError::InvalidEps1(_))));
    }

    #[test]
    fn classification_examples() {
        let (_, r) = route(&p(0.8, 0.0), ContourConfig::param1(PI, 0.9 * PI), Representation::B).unwrap();
        assert_eq!(r, Route::B(RepBCase::Case2));
        assert_eq!(classify_case(&p(0.9, 0.0), &ContourConfig::param1(PI, PI)), RepBCase::Case4);
        assert_eq!(classify_case(&p(1.5, 0.0), &ContourConfig::param1(PI / 1.5, PI / 1.5)), RepBCase::Case6);
        assert_eq!(classify_case(&p(0.8, 0.0), &ContourConfig::param1(0.8 * PI, PI)), RepBCase::Case3);
        assert_eq!(classify_case(&p(1.0, 1.0), &ContourConfig::param1(0.9 * PI, 0.8 * PI)), RepBCase::Case1);
        assert_eq!(classify_case(&p(1.0, 0.0), &ContourConfig::param2(11.0 * PI / 12.0)), RepBCase::Case5);
        assert_eq!(classify_case(&p(1.0, 0.0), &ContourConfig::param2(PI)), RepBCase::Case4);
    }

    #[test]
    fn theta_interval_examples() {
        let cfg = ContourConfig::param1(PI, PI);
        let i = admissible_theta(&p(1.0, 0.0), &cfg, Route::A);
        assert!((i.lo - PI / 2.0).abs() < 1e-15 && (i.hi - 1.5 * PI).abs() < 1e-15);

        let d = 35.0 * PI / 36.0;
        let i = admissible_theta(&p(1.0, 1.0), &ContourConfig::param1(d, d), Route::B(RepBCase::Case1));
        assert!((i.lo - (1.5 * PI - d)).abs() < 1e-15);
        assert!((i.hi - (0.5 * PI + d)).abs() < 1e-15);

        let i = admissible_theta(&p(2.0, 0.0), &ContourConfig::param3(), Route::B(RepBCase::Case6));
        assert!((i.lo - 0.75 * PI).abs() < 1e-15 && (i.hi - 1.25 * PI).abs() < 1e-15);

        let i = admissible_theta(&p(1.0, -1.0), &ContourConfig::param1(PI, 5.0 * PI / 6.0), Route::B(RepBCase::Case2));
        assert!((i.lo - 2.0 * PI / 3.0).abs() < 1e-15 && (i.hi - 1.5 * PI).abs() < 1e-15);

        let i = admissible_theta(&p(0.8, 0.0), &ContourConfig::param1(0.9 * PI, PI), Route::B(RepBCase::Case3));
        assert!((i.lo - PI / 1.6).abs() < 1e-15 && (i.hi - (-PI / 1.6 + 1.9 * PI)).abs() < 1e-15);
    }

    #[test]
    fn endpoints_are_excluded() {
        let i = ThetaInterval { lo: 1.0, hi: 2.0 };
        assert!(!i.contains(1.0) && !i.contains(2.0) && i.contains(1.5));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_config() -> impl Strategy<Value = (f64, f64, f64, f64, u8)> {
            (0.51f64..3.0, -3.0f64..3.0, 0.0001f64..1.0, 0.0001f64..1.0, 0u8..3)
        }

        fn build(rho: f64, u1: f64, u2: f64, kind: u8, hi: f64) -> ContourConfig {
            let lo = PI / (2.0 * rho);
            let d1 = lo + u1 * (hi - lo);
            let d2 = lo + u2 * (hi - lo);
            match kind {
                0 => ContourConfig::param1(d1, d2),
                1 => ContourConfig::param2(d1),
                _ => ContourConfig::param3(),
            }
        }

        proptest! {
            #[test]
            fn admissible_interval_is_nonempty((rho, mu, u1, u2, kind) in any_config()) {
                let params = MLParameters::real(rho, mu).unwrap();
                for rep in [Representation::A, Representation::B] {
                    let hi = if rep == Representation::A || rho > 1.0 { params.max_delta() } else { PI };
                    let cfg = build(rho, u1, u2, kind, hi);
                    if let Ok((cfg, r)) = route(&params, cfg, rep) {
                        let i = admissible_theta(&params, &cfg, r);
                        prop_assert!(i.lo < i.hi, "{:?} {:?} {:?}", cfg, r, i);
                        prop_assert!(i.lo > 0.0 && i.hi < TAU);
                        prop_assert_eq!(classify_case(&params, &cfg), classify_case(&params, &cfg));
                        if let Route::B(RepBCase::Case1) = r {
                            let (d1, d2) = cfg.deltas(&params);
                            prop_assert!(d1 < PI && d2 < PI);
                        }
                    }
                }
            }
        }
    }
}
