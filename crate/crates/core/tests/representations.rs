use std::f64::consts::{E, PI};

use mittag_leffler::params::{ContourConfig, MLParameters, ParamError, PolarComplex, Representation};
use mittag_leffler::quadrature::Tolerances;
use mittag_leffler::reference::{closed_form_rho1, series_eval, SeriesSettings};
use mittag_leffler::representations::{
    eval_rep_a_p1, eval_rep_a_p2, eval_rep_a_p3, eval_rep_b, evaluate, EvalError, EvalOptions, EvalReport, Method,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn z(t: f64, theta: f64) -> PolarComplex {
    PolarComplex::new(t, theta).unwrap()
}

fn real(rho: f64, mu: f64) -> MLParameters {
    MLParameters::real(rho, mu).unwrap()
}

fn assert_near(got: Complex64, want: Complex64, tol: f64) {
    let err = (got - want).norm();
    assert!(err <= tol * want.norm().max(1.0), "got {got}, want {want}, err {err:e}");
}

fn series(params: &MLParameters, z: PolarComplex) -> Complex64 {
    series_eval(params, z.to_cartesian(), &SeriesSettings::default()).unwrap().value
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn rep_a_closed_form_points() {
    let e2 = (-2.0f64).exp();
    let r = eval_rep_a_p1(&real(1.0, 0.0), PI, PI, 0.5, z(2.0, PI), &tol()).unwrap();
    assert_near(r.value, c(-2.0 * e2), 1e-10);
    assert_eq!(r.method, Method::RepAP1);

    let r = eval_rep_a_p1(&real(1.0, 3.0), PI, PI, 0.5, z(2.0, PI), &tol()).unwrap();
    assert_near(r.value, c((1.0 + e2) / 4.0), 1e-10);

    let r = eval_rep_a_p2(&real(1.0, 2.0), PI, 0.5, z(2.0, PI), &tol()).unwrap();
    assert_near(r.value, c((1.0 - e2) / 2.0), 1e-10);

    let r = eval_rep_a_p3(&real(1.0, 4.0), 0.5, z(2.0, PI), &tol()).unwrap();
    assert_near(r.value, c((1.0 - e2) / 8.0), 1e-10);
    assert!((r.value.re - 0.1080831).abs() < 1e-7);
}

#[test]
fn rep_a_non_integer_parameters_match_series() {
    let p = real(1.3, 2.7);
    let r = eval_rep_a_p2(&p, PI / 1.3, 0.5, z(3.0, PI), &tol()).unwrap();
    assert_near(r.value, series(&p, z(3.0, PI)), 1e-8);

    let p = real(2.0, 1.0);
    let r = eval_rep_a_p3(&p, 0.5, z(1.0, PI), &tol()).unwrap();
    assert_near(r.value, series(&p, z(1.0, PI)), 1e-8);
}

#[test]
fn rep_a_is_independent_of_eps() {
    let p = real(1.0, 1.0);
    for t in [0.5, 2.0, 5.0] {
        let values: Vec<_> = [0.1, 0.5, 1.0]
            .iter()
            .map(|&eps| eval_rep_a_p1(&p, PI, PI, eps, z(t, PI), &tol()).unwrap().value)
            .collect();
        for v in &values {
            assert_near(*v, values[0], 1e-10);
        }
    }
}

#[test]
fn rep_a_equal_angles_match_two_angle_form() {
    let p = MLParameters::new(0.8, 0.6, 0.4).unwrap();
    let delta = 0.9 * PI;
    let a = eval_rep_a_p1(&p, delta, delta, 0.5, z(1.7, 3.3), &tol()).unwrap();
    let b = eval_rep_a_p2(&p, delta, 0.5, z(1.7, 3.3), &tol()).unwrap();
    assert_near(a.value, b.value, 1e-10);
}

#[test]
fn rep_b_closed_form_points() {
    let e2 = (-2.0f64).exp();
    let cases = [
        // equal angles select the symmetric kernel even in two-angle form
        (1.0, ContourConfig::param1(35.0 * PI / 36.0, 35.0 * PI / 36.0), e2, "RepB_Case5"),
        (1.0, ContourConfig::param1(35.0 * PI / 36.0, 17.0 * PI / 18.0), e2, "RepB_Case1"),
        (-1.0, ContourConfig::param1(PI, 5.0 * PI / 6.0), 4.0 * e2, "RepB_Case2"),
        (1.0, ContourConfig::param1(5.0 * PI / 6.0, PI), e2, "RepB_Case3"),
        (-2.0, ContourConfig::param2(PI), -8.0 * e2, "RepB_Case4"),
        (0.0, ContourConfig::param2(11.0 * PI / 12.0), -2.0 * e2, "RepB_Case5"),
    ];
    for (mu, config, want, method) in cases {
        let r = eval_rep_b(&real(1.0, mu), config, z(2.0, PI), &tol()).unwrap();
        assert_near(r.value, c(want), 1e-10);
        assert_eq!(r.method.to_string(), method);
    }
}

#[test]
fn rep_b_detour_radius_does_not_matter() {
    let p = real(1.0, -1.0);
    for (t, theta) in [(2.0, PI), (0.3, 2.5), (4.0, 4.0)] {
        let values: Vec<_> = [0.3, 0.5, 0.7]
            .iter()
            .map(|&e1| eval_rep_b(&p, ContourConfig::param1(PI, 5.0 * PI / 6.0).with_eps1(e1), z(t, theta), &tol()).unwrap().value)
            .collect();
        for v in &values {
            assert_near(*v, values[0], 1e-9);
        }
        assert_near(values[0], closed_form_rho1(-1, z(t, theta).to_cartesian()), 1e-9);
    }
}

#[test]
fn rep_b_case6_matches_erfc_identity() {
    // E_{2,1}(-x) = exp(x^2) erfc(x)
    let p = real(2.0, 1.0);
    for x in [0.5f64, 1.0, 3.0, 6.0] {
        let r = eval_rep_b(&p, ContourConfig::param3(), z(x, PI), &tol()).unwrap();
        assert_eq!(r.method, Method::RepB(mittag_leffler::params::RepBCase::Case6));
        let want = (x * x).exp() * libm::erfc(x);
        assert_near(r.value, c(want), 1e-10);
    }
}

#[test]
fn dispatcher_examples() {
    let r = evaluate(&real(1.0, 1.0), z(0.0, 0.0), &EvalOptions::default()).unwrap();
    assert_eq!((r.value, r.method), (c(1.0), Method::ClosedForm));

    let r = evaluate(&real(1.0, 1.0), z(1.0, 0.0), &EvalOptions::default()).unwrap();
    assert_eq!(r.method, Method::Series);
    assert_near(r.value, c(E), 1e-14);

    let r = evaluate(&real(1.0, 0.0), z(2.0, PI), &EvalOptions::default()).unwrap();
    assert_eq!(r.method, Method::RepAP3);
    assert_near(r.value, c(-2.0 * (-2.0f64).exp()), 1e-10);
}

#[test]
fn dispatcher_prefers_rep_b_when_the_arc_cancels() {
    // the rep A arc at radius 1.1 carries exp(6.6^2); rep B has no arc
    let r = evaluate(&real(2.0, 1.0), z(6.0, PI), &EvalOptions::default()).unwrap();
    assert!(matches!(r.method, Method::RepB(_)), "{r:?}");
    assert!(!r.warnings.is_empty());
    assert_near(r.value, c(36f64.exp() * libm::erfc(6.0)), 1e-9);
}

#[test]
fn large_modulus_falls_back_to_series_with_warning() {
    let r = evaluate(&real(1.0, 1.0), z(200.0, PI), &EvalOptions::default()).unwrap();
    assert_eq!(r.method, Method::Series);
    assert!(!r.warnings.is_empty());
}

#[test]
fn guards() {
    let too_large_mu = eval_rep_b(&real(1.0, 2.0), ContourConfig::param2(0.9 * PI), z(1.0, PI), &tol());
    assert!(matches!(too_large_mu, Err(EvalError::Param(ParamError::MuConstraintViolated { .. }))));

    let p3 = eval_rep_a_p3(&real(0.8, 1.0), 0.5, z(1.0, PI), &tol());
    assert!(matches!(p3, Err(EvalError::Param(ParamError::Param3NotAvailable { .. }))));

    // rho = 1, delta = pi: admissible theta is (pi/2, 3pi/2), endpoints excluded
    for theta in [PI / 2.0, 1.5 * PI] {
        let r = eval_rep_a_p2(&real(1.0, 1.0), PI, 0.5, z(1.0, theta), &tol());
        assert!(matches!(r, Err(EvalError::InadmissibleTheta { .. })), "{theta}");
    }
    let fixed = EvalOptions::fixed(Representation::A, ContourConfig::param2(PI));
    assert!(evaluate(&real(1.0, 1.0), z(1.0, PI / 2.0), &fixed).unwrap_err().is_inadmissible());
}

fn strict_interior(config: ContourConfig, params: &MLParameters, rep: Representation, frac: f64) -> Option<f64> {
    use mittag_leffler::params::{admissible_theta, route};
    let (config, r) = route(params, config, rep).ok()?;
    let iv = admissible_theta(params, &config, r).shrink(0.05);
    (iv.width() > 0.0).then(|| iv.lo + frac * iv.width())
}

fn ok(r: Result<EvalReport, EvalError>) -> EvalReport {
    r.unwrap_or_else(|e| panic!("{e}"))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn conjugate_symmetry(rho in 0.6f64..2.0, mu in -1.0f64..3.0, t in 0.05f64..3.0, frac in 0.0f64..0.95) {
        let p = real(rho, mu);
        let a = frac * PI / (2.0 * rho).max(1.0);
        let upper = ok(evaluate(&p, z(t, PI + a), &EvalOptions::default()));
        let lower = ok(evaluate(&p, z(t, PI - a), &EvalOptions::default()));
        prop_assert!((upper.value - lower.value.conj()).norm() <= 1e-10 * upper.value.norm().max(1.0));
    }

    #[test]
    fn real_on_negative_axis(rho in 0.6f64..2.0, mu in -1.0f64..3.0, t in 0.05f64..5.0) {
        let r = ok(evaluate(&real(rho, mu), z(t, PI), &EvalOptions::default()));
        prop_assert!(r.value.im.abs() <= 1e-10 * r.value.re.abs().max(1.0), "{:?}", r);
    }

    #[test]
    fn rep_a_angles_do_not_matter(rho in 0.6f64..1.6, mu_re in -1.0f64..3.0, mu_im in -1.0f64..1.0, t in 0.1f64..2.5, f1 in 0.1f64..1.0, f2 in 0.1f64..1.0, ft in 0.0f64..1.0) {
        let p = MLParameters::new(rho, mu_re, mu_im).unwrap();
        let lo = p.min_delta();
        let span = p.max_delta() - lo;
        let (d1, d2) = (lo + f1 * span, lo + f2 * span);
        let narrow = ContourConfig::param1(d1, d2);
        if let Some(theta) = strict_interior(narrow, &p, Representation::A, ft) {
            let a = ok(eval_rep_a_p1(&p, d1, d2, 0.5, z(t, theta), &tol()));
            let b = ok(eval_rep_a_p2(&p, p.max_delta(), 0.5, z(t, theta), &tol()));
            prop_assert!((a.value - b.value).norm() <= 1e-9 * a.value.norm().max(1.0), "{a:?} {b:?}");
        }
    }

    #[test]
    fn rep_a_and_rep_b_agree(rho in 0.6f64..2.0, mu_re in -1.0f64..1.5, mu_im in -1.0f64..1.0, t in 0.1f64..2.5, ft in 0.0f64..1.0) {
        let p = MLParameters::new(rho, mu_re, mu_im).unwrap();
        prop_assume!(mu_re < 1.0 + 1.0 / rho);
        let delta = if rho > 1.0 { PI / rho } else { 0.95 * PI };
        let config = ContourConfig::param2(delta);
        if let Some(theta) = strict_interior(config, &p, Representation::B, ft) {
            let a = ok(eval_rep_a_p2(&p, delta, 0.5, z(t, theta), &tol()));
            let b = ok(eval_rep_b(&p, config, z(t, theta), &tol()));
            let budget = 10.0 * (a.abs_err + b.abs_err) + 1e-13 * a.value.norm().max(1.0);
            prop_assert!((a.value - b.value).norm() <= budget, "{a:?} {b:?}");
        }
    }
}
