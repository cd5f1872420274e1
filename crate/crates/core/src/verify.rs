//! Self-checks run by `mlf verify`: closed forms at `rho = 1`, agreement
//! between representations and with the series, independence of the free
//! contour parameters, kernel identities and symmetry.
//!
//! Random points come from a fixed seed, so every run checks the same points.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::kernels::Kernels;
use crate::params::{admissible_theta, route, ContourConfig, MLParameters, PolarComplex, Representation, ThetaInterval};
use crate::quadrature::Tolerances;
use crate::reference::{closed_form_rho1, series_eval, SeriesSettings};
use crate::representations::{eval_representation, evaluate, suggested_eps, EvalOptions, EvalReport};

const SEED: u64 = 0x4d4c_4620_7665_7269;

/// Margin removed from each end of an admissible `theta` interval.
pub const THETA_MARGIN: f64 = 0.05;

/// Kernel identities are checked where `(t r)^rho` stays below this, since an
/// angle's rounding error is amplified by that factor.
pub const KERNEL_MAX_PHASE: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    ClosedForm,
    CrossRep,
    Independence,
    Kernels,
    Symmetry,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::ClosedForm, Suite::CrossRep, Suite::Independence, Suite::Kernels, Suite::Symmetry];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::ClosedForm => "closed-form",
            Suite::CrossRep => "cross-rep",
            Suite::Independence => "independence",
            Suite::Kernels => "kernels",
            Suite::Symmetry => "symmetry",
        }
    }
}

/// Outcome of one check within a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub points: usize,
    /// Points where an evaluation returned an error.
    pub failures: usize,
    pub max_error: f64,
    pub threshold: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.max_error <= self.threshold
    }
}

/// `|a - b| / max(1, |b|)`: absolute or relative error, whichever is larger.
pub fn scaled_error(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// `n` equally spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn tally(suite: Suite, name: String, threshold: f64, errors: &[Option<f64>]) -> Check {
    // a NaN error would vanish from the maximum, so it counts as a failure
    let failures = errors.iter().filter(|e| !e.is_some_and(|e| !e.is_nan())).count();
    let max_error = errors.iter().flatten().fold(0.0f64, |m, &e| m.max(e));
    Check { suite, name, points: errors.len(), failures, max_error, threshold }
}

/// Evaluates with a fixed contour; representation A uses the suggested `eps`.
fn fixed(params: &MLParameters, config: ContourConfig, rep: Representation, z: PolarComplex) -> Option<EvalReport> {
    let config = match rep {
        Representation::A => config.with_eps(suggested_eps(params, z.t())),
        Representation::B => config,
    };
    eval_representation(params, config, rep, z, &Tolerances::default()).ok()
}

fn interval(params: &MLParameters, config: ContourConfig, rep: Representation) -> ThetaInterval {
    let (config, r) = route(params, config, rep).expect("verification configurations are valid");
    admissible_theta(params, &config, r)
}

/// A grid of `n x n` points over `t in [0.01, 7]` and the shrunk interval,
/// compared against `exact`.
fn grid_check(
    suite: Suite,
    name: &str,
    params: MLParameters,
    config: ContourConfig,
    rep: Representation,
    n: usize,
    exact: impl Fn(Complex64) -> Complex64 + Sync,
) -> Check {
    let iv = interval(&params, config, rep).shrink(THETA_MARGIN);
    let points: Vec<(f64, f64)> = linspace(0.01, 7.0, n)
        .into_iter()
        .flat_map(|t| linspace(iv.lo, iv.hi, n).into_iter().map(move |th| (t, th)))
        .collect();
    let errors: Vec<Option<f64>> = points
        .par_iter()
        .map(|&(t, th)| {
            let z = PolarComplex::new(t, th).ok()?;
            let r = fixed(&params, config, rep, z)?;
            Some(scaled_error(r.value, exact(z.to_cartesian())))
        })
        .collect();
    tally(suite, name.to_owned(), 1e-8, &errors)
}

fn closed_form_suite() -> Vec<Check> {
    let s = Suite::ClosedForm;
    let real = |mu: f64| MLParameters::real(1.0, mu).expect("valid");
    let cf = |n: i32| move |z| closed_form_rho1(n, z);
    let a = Representation::A;
    let b = Representation::B;
    vec![
        grid_check(s, "repA P1 rho=1 mu=0", real(0.0), ContourConfig::param1(PI, PI), a, 25, cf(0)),
        grid_check(s, "repA P1 rho=1 mu=3", real(3.0), ContourConfig::param1(PI, PI), a, 25, cf(3)),
        grid_check(s, "repA P2 rho=1 mu=2", real(2.0), ContourConfig::param2(PI), a, 25, cf(2)),
        grid_check(s, "repA P3 rho=1 mu=4", real(4.0), ContourConfig::param3(), a, 25, cf(4)),
        grid_check(s, "repB equal 35pi/36 mu=1", real(1.0), ContourConfig::param1(35.0 * PI / 36.0, 35.0 * PI / 36.0), b, 25, cf(1)),
        grid_check(s, "repB Case1 mu=1", real(1.0), ContourConfig::param1(35.0 * PI / 36.0, 17.0 * PI / 18.0), b, 25, cf(1)),
        grid_check(s, "repB Case2 mu=-1", real(-1.0), ContourConfig::param1(PI, 5.0 * PI / 6.0), b, 25, cf(-1)),
        grid_check(s, "repB Case3 mu=1", real(1.0), ContourConfig::param1(5.0 * PI / 6.0, PI), b, 25, cf(1)),
        grid_check(s, "repB Case4 mu=-2", real(-2.0), ContourConfig::param2(PI), b, 25, cf(-2)),
        grid_check(s, "repB Case5 mu=0", real(0.0), ContourConfig::param2(11.0 * PI / 12.0), b, 25, cf(0)),
    ]
}

/// Random parameters with `rho` in `[rho_lo, rho_hi)` and complex `mu`
/// satisfying the representation B bound.
fn random_params(rng: &mut ChaCha8Rng, rho_lo: f64, rho_hi: f64) -> MLParameters {
    let rho = rng.gen_range(rho_lo..rho_hi);
    let mu_hi = (1.0 + 1.0 / rho - 0.1).min(2.0);
    let mu_re = rng.gen_range(-1.0..mu_hi);
    let mu_im = rng.gen_range(-1.0..1.0);
    MLParameters::new(rho, mu_re, mu_im).expect("valid")
}

fn intersect(ivs: &[ThetaInterval]) -> ThetaInterval {
    let lo = ivs.iter().map(|i| i.lo).fold(f64::NEG_INFINITY, f64::max);
    let hi = ivs.iter().map(|i| i.hi).fold(f64::INFINITY, f64::min);
    ThetaInterval { lo, hi }.shrink(THETA_MARGIN)
}

fn cross_rep_suite() -> Vec<Check> {
    let s = Suite::CrossRep;
    let p = MLParameters::real(1.3, 2.7).expect("valid");
    let series = move |z| series_eval(&p, z, &SeriesSettings::default()).map(|r| r.value).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    let non_integer = grid_check(s, "repA P2 rho=1.3 mu=2.7 vs series", p, ContourConfig::param2(PI / 1.3), Representation::A, 15, series);

    // complex mu: representation A, representation B and the series must
    // agree within ten times their summed error estimates
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let points: Vec<_> = (0..20)
        .map(|_| {
            let params = random_params(&mut rng, 0.6, 2.0);
            let (ca, cb) = cross_configs(&params);
            let iv = intersect(&[interval(&params, ca, Representation::A), interval(&params, cb, Representation::B)]);
            let t = rng.gen_range(0.1..3.0);
            let theta = rng.gen_range(iv.lo..iv.hi);
            (params, ca, cb, t, theta)
        })
        .collect();
    let ratios: Vec<Option<f64>> = points
        .par_iter()
        .map(|&(params, ca, cb, t, theta)| {
            let z = PolarComplex::new(t, theta).ok()?;
            let a = fixed(&params, ca, Representation::A, z)?;
            let b = fixed(&params, cb, Representation::B, z)?;
            let s = series_eval(&params, z.to_cartesian(), &SeriesSettings::default()).ok()?;
            let pairs = [
                ((a.value - b.value).norm(), a.abs_err + b.abs_err),
                ((a.value - s.value).norm(), a.abs_err + s.abs_err),
                ((b.value - s.value).norm(), b.abs_err + s.abs_err),
            ];
            Some(pairs.iter().map(|(d, e)| d / (10.0 * e)).fold(0.0, f64::max))
        })
        .collect();
    vec![non_integer, tally(s, "complex mu A/B/series (ratio to 10x error)".into(), 1.0, &ratios)]
}

/// Widest representation A contour and a matching representation B one.
pub fn cross_configs(params: &MLParameters) -> (ContourConfig, ContourConfig) {
    if params.rho() > 1.0 {
        (ContourConfig::param3(), ContourConfig::param3())
    } else {
        (ContourConfig::param2(PI), ContourConfig::param2(PI))
    }
}

fn spread(values: &[Complex64]) -> f64 {
    let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let mut worst = 0.0f64;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            worst = worst.max((a - b).norm() / scale);
        }
    }
    worst
}

fn independence_suite() -> Vec<Check> {
    let s = Suite::Independence;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let tol = Tolerances::default();
    let mut eps_err = Vec::new();
    let mut eps1_err = Vec::new();
    let mut delta_err = Vec::new();
    for i in 0..20 {
        // half the points allow the detour cases, which need rho <= 1
        let params = if i % 2 == 0 { random_params(&mut rng, 0.6, 1.0) } else { random_params(&mut rng, 1.0, 2.0) };
        let lo = params.min_delta();
        let hi = params.max_delta();
        let mut pick = || lo + rng.gen_range(0.5..1.0) * (hi - lo);
        let pairs = [(hi, hi), (pick(), hi), (hi, pick())];
        let detours = [ContourConfig::param1(PI, 0.9 * PI), ContourConfig::param1(0.9 * PI, PI), ContourConfig::param2(PI)];
        let mut ivs: Vec<ThetaInterval> =
            pairs.iter().map(|&(a, b)| interval(&params, ContourConfig::param1(a, b), Representation::A)).collect();
        let with_detours = params.rho() <= 1.0;
        if with_detours {
            ivs.extend(detours.iter().map(|&c| interval(&params, c, Representation::B)));
        }
        let iv = intersect(&ivs);
        // keep the largest arc, radius 2t, out of the cancelling regime
        let t_hi = (12.0f64.powf(1.0 / params.rho()) / 2.0).min(3.0);
        let t = rng.gen_range(0.1..t_hi);
        let theta = rng.gen_range(iv.lo..iv.hi);
        let z = match PolarComplex::new(t, theta) {
            Ok(z) => z,
            Err(_) => continue,
        };
        let eval = |config: ContourConfig, rep| eval_representation(&params, config, rep, z, &tol).ok().map(|r| r.value);

        let by_eps: Option<Vec<_>> = [0.1, 0.5, 1.0]
            .iter()
            .map(|&e| eval(ContourConfig::param1(hi, hi).with_eps(e), Representation::A))
            .collect();
        eps_err.push(by_eps.map(|v| spread(&v)));

        let by_delta: Option<Vec<_>> = pairs
            .iter()
            .map(|&(a, b)| eval(ContourConfig::param1(a, b).with_eps(suggested_eps(&params, t)), Representation::A))
            .collect();
        delta_err.push(by_delta.map(|v| spread(&v)));

        if with_detours {
            for config in detours {
                let by_eps1: Option<Vec<_>> =
                    [0.3, 0.5, 0.7].iter().map(|&e| eval(config.with_eps1(e), Representation::B)).collect();
                eps1_err.push(by_eps1.map(|v| spread(&v)));
            }
        }
    }
    vec![
        tally(s, "repA eps in {0.1, 0.5, 1.0}".into(), 1e-9, &eps_err),
        tally(s, "repB eps1 in {0.3, 0.5, 0.7}, cases 2-4".into(), 1e-9, &eps1_err),
        tally(s, "repA three (delta1, delta2) pairs".into(), 1e-9, &delta_err),
    ]
}

fn kernel_suite() -> Vec<Check> {
    let s = Suite::Kernels;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut two_sided = Vec::new();
    let mut one_sided = Vec::new();
    let mut pi_rho = Vec::new();
    for _ in 0..10_000 {
        let rho = rng.gen_range(0.55..3.0);
        let params = MLParameters::new(rho, rng.gen_range(-2.0..3.0), rng.gen_range(-1.0..1.0)).expect("valid");
        let t = rng.gen_range(0.05..5.0);
        let theta = rng.gen_range(0.0..2.0 * PI);
        let r = (rng.gen_range(-8.0..KERNEL_MAX_PHASE.ln()) / rho).exp() / t;
        let delta = rng.gen_range(params.min_delta()..=params.max_delta());
        let Ok(k) = Kernels::new(&params, t, theta) else { continue };
        if let (Ok((a, sa)), Ok((b, sb))) = (k.k_sym_with_scale(r, delta), k.k_with_scale(r, -delta, delta)) {
            two_sided.push(Some((a - b).norm() / sa.max(sb).max(f64::MIN_POSITIVE)));
        }
        if let (Ok(a), Ok(p), Ok(m)) = (k.k_sym(r, delta), k.k_prime(r, delta), k.k_prime(r, -delta)) {
            one_sided.push(Some((a - (p - m)).norm() / (p.norm() + m.norm()).max(f64::MIN_POSITIVE)));
        }
        if rho >= 1.0 {
            if let (Ok((a, sa)), Ok((b, sb))) = (k.k_pirho_with_scale(r), k.k_sym_with_scale(r, PI / rho)) {
                pi_rho.push(Some((a - b).norm() / sa.max(sb).max(f64::MIN_POSITIVE)));
            }
        }
    }
    vec![
        tally(s, "K_sym(delta) = K(-delta, delta)".into(), 1e-12, &two_sided),
        tally(s, "K_sym(delta) = K'(delta) - K'(-delta)".into(), 1e-12, &one_sided),
        tally(s, "K_pirho = K_sym(pi/rho)".into(), 1e-12, &pi_rho),
    ]
}

fn symmetry_suite() -> Vec<Check> {
    let s = Suite::Symmetry;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let points: Vec<(MLParameters, f64, f64)> = (0..100)
        .map(|_| {
            let rho = rng.gen_range(0.6..2.0);
            let params = MLParameters::real(rho, rng.gen_range(-1.0..3.0)).expect("valid");
            let t = rng.gen_range(0.05..5.0);
            // half-width of the widest representation A sector
            let half_width = params.max_delta() - params.min_delta();
            let a = rng.gen_range(0.0..half_width - THETA_MARGIN);
            (params, t, a)
        })
        .collect();
    let options = EvalOptions::default();
    let results: Vec<(Option<f64>, Option<f64>)> = points
        .par_iter()
        .map(|&(params, t, a)| {
            let at = |theta: f64| evaluate(&params, PolarComplex::new(t, theta).ok()?, &options).ok().map(|r| r.value);
            let conj = match (at(PI + a), at(PI - a)) {
                (Some(u), Some(l)) => Some((u - l.conj()).norm() / u.norm().max(1.0)),
                _ => None,
            };
            let real = at(PI).map(|v| v.im.abs() / v.re.abs().max(1.0));
            (conj, real)
        })
        .collect();
    let (conj, real): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    vec![
        tally(s, "conjugate symmetry about the negative axis".into(), 1e-10, &conj),
        tally(s, "real values on the negative axis".into(), 1e-10, &real),
    ]
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::ClosedForm => closed_form_suite(),
        Suite::CrossRep => cross_rep_suite(),
        Suite::Independence => independence_suite(),
        Suite::Kernels => kernel_suite(),
        Suite::Symmetry => symmetry_suite(),
    }
}
