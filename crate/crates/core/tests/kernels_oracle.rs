//! Kernel values checked against an independent high-precision evaluation of
//! the complex-form integrands, plus the identities tying the kernels together.

use std::f64::consts::PI;

use mittag_leffler::kernels::Kernels;
use mittag_leffler::params::MLParameters;
use num_complex::Complex64;
use proptest::prelude::*;

type Point = (f64, f64, f64, f64, f64);

fn kernels(p: Point) -> Kernels {
    let (rho, mu_re, mu_im, t, theta) = p;
    Kernels::new(&MLParameters::new(rho, mu_re, mu_im).unwrap(), t, theta).unwrap()
}

fn assert_close(got: Complex64, want: (f64, f64), what: &str) {
    let want = Complex64::new(want.0, want.1);
    let err = (got - want).norm();
    assert!(err <= 1e-12 * want.norm().max(1e-3), "{what}: got {got}, want {want}, err {err:e}");
}

#[test]
fn ray_kernel_matches_oracle() {
    let cases: [(Point, f64, f64, f64, (f64, f64)); 5] = [
        ((1.0, 1.0, 0.0, 1.0, PI), 1.0, -PI / 2.0, PI / 2.0, (0.2199160494434455, 0.0)),
        ((1.3, 2.7, 0.0, 3.0, 3.3415926535897933), 0.7, -2.2, 2.3, (-0.0015813784348633283, 0.0013215282661117977)),
        ((0.8, 0.3, 0.2, 2.0, 3.4415926535897934), 1.6, -2.8, 2.9, (-0.08847240674546257, 0.04456502850870952)),
        ((2.0, -1.5, 0.7, 0.4, 3.041592653589793), 5.0, -1.4, 1.2, (0.8273476110852069, 0.06323621240588827)),
        ((0.6, 1.2, -0.9, 1.1, 3.5), 0.05, -3.0, 2.7, (-0.5449123642485857, -0.1877362710679003)),
    ];
    for (p, r, phi1, phi2, want) in cases {
        assert_close(kernels(p).k(r, phi1, phi2).unwrap(), want, &format!("K {p:?}"));
    }
}

#[test]
fn one_sided_ray_kernel_matches_oracle() {
    let cases: [(Point, f64, f64, (f64, f64)); 4] = [
        ((1.0, 1.0, 0.0, 1.0, PI), 1.0, PI / 2.0, (0.10995802472172275, 0.023966241978859146)),
        ((0.9, 0.4, 0.3, 2.5, 3.5415926535897935), 0.3, -PI, (0.043489224173450206, -0.01411488816949389)),
        ((1.5, 1.1, -0.6, 0.7, 2.9415926535897934), 2.2, 1.9, (0.0046968904562864, 0.0004504908185408273)),
        ((0.7, -0.8, 0.0, 1.3, 4.0), 3.0, PI, (-0.009843626631083473, -0.025031346806927108)),
    ];
    for (p, r, delta, want) in cases {
        assert_close(kernels(p).k_prime(r, delta).unwrap(), want, &format!("K' {p:?}"));
    }
}

#[test]
fn arc_kernel_matches_oracle() {
    let cases: [(Point, f64, f64, (f64, f64)); 4] = [
        ((1.0, 1.0, 0.0, 1.0, PI), 2.0, -PI, (0.7840032019520865, 0.0)),
        ((1.3, 2.7, 0.0, 3.0, 3.3415926535897933), 1.5, -3.5, (1.4975698700337172, -4.329144932693011)),
        ((0.8, 0.3, 0.2, 2.0, 3.4415926535897934), 1.1, -5.0, (-0.21468647495045706, 0.11841595651841115)),
        ((2.0, -1.5, 0.7, 0.4, 3.041592653589793), 1.5, -2.0, (0.0581694290152625, 0.02437301161333147)),
    ];
    for (p, r, phi, want) in cases {
        assert_close(kernels(p).p(r, phi).unwrap(), want, &format!("P {p:?}"));
    }
}

#[test]
fn detour_arc_kernel_matches_oracle() {
    let cases: [(Point, f64, f64, i32, (f64, f64)); 4] = [
        ((1.0, 1.0, 0.0, 1.0, PI), 0.5, -PI, 0, (0.09653235263005391, 0.0)),
        ((0.8, 0.3, 0.2, 2.0, 3.4415926535897934), 0.5, -1.2, 0, (-0.066993825992803, 0.015964955760067935)),
        ((0.9, -1.0, 0.4, 1.5, 4.2), 0.3, -4.0, -2, (-0.01602980541476469, 0.10342213475051368)),
        ((1.0, 1.0, 0.0, 2.0, 2.9415926535897934), 0.7, -0.5, 0, (0.0020607029775681655, 0.007401134103245131)),
    ];
    for (p, tau, psi, k, want) in cases {
        assert_close(kernels(p).p_prime(tau, psi, k).unwrap(), want, &format!("P' {p:?}"));
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

/// Kernel phases grow like `(t r)^rho`, and an absolute rounding error in an
/// angle is multiplied by it; the identities are checked where that product
/// stays below `1e-12`.
const MAX_PHASE: f64 = 100.0;

/// `(params, t, theta, r)` with `(t r)^rho <= MAX_PHASE`.
fn point_with(rho: std::ops::Range<f64>) -> impl Strategy<Value = (MLParameters, f64, f64, f64)> {
    (rho, -2.0f64..3.0, -1.0f64..1.0, 0.05f64..5.0, 0.0f64..(2.0 * PI), -8.0f64..MAX_PHASE.ln())
        .prop_map(|(rho, mu_re, mu_im, t, theta, ln_phase)| {
            let r = (ln_phase / rho).exp() / t;
            (MLParameters::new(rho, mu_re, mu_im).unwrap(), t, theta, r)
        })
}

fn point() -> impl Strategy<Value = (MLParameters, f64, f64, f64)> {
    point_with(0.55..3.0)
}

proptest! {
    #[test]
    fn symmetric_kernel_is_two_sided_special_case((params, t, theta, r) in point(), frac in 0.05f64..1.0) {
        let k = Kernels::new(&params, t, theta).unwrap();
        let delta = frac * PI;
        if let (Ok(a), Ok(b)) = (k.k_sym(r, delta), k.k(r, -delta, delta)) {
            prop_assert!(rel(a, b) <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn symmetric_kernel_is_difference_of_one_sided((params, t, theta, r) in point(), frac in 0.05f64..1.0) {
        let k = Kernels::new(&params, t, theta).unwrap();
        let delta = frac * PI;
        if let (Ok(a), Ok(p), Ok(m)) = (k.k_sym(r, delta), k.k_prime(r, delta), k.k_prime(r, -delta)) {
            // the difference can cancel; measure against the size of the terms
            prop_assert!((a - (p - m)).norm() <= 1e-12 * (p.norm() + m.norm()).max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn pi_rho_kernel_is_symmetric_kernel_at_pi_over_rho((params, t, theta, r) in point_with(1.0..3.0)) {
        let k = Kernels::new(&params, t, theta).unwrap();
        if let (Ok((a, sa)), Ok((b, sb))) = (k.k_pirho_with_scale(r), k.k_sym_with_scale(r, PI / params.rho())) {
            prop_assert!((a - b).norm() <= 1e-12 * sa.max(sb).max(f64::MIN_POSITIVE), "{a} vs {b}");
        }
    }
}
