//! Integrands of the integral representations.
//!
//! A [`Kernels`] value binds the parameters and the argument `z = t e^{i theta}`
//! once, so the quadrature closures only pass the integration variables.
//! Every exponential weight is assembled in log space as
//! `rho (1 - mu_re) ln(t r) + ln f` and exponentiated once, which keeps the
//! power factor and the phase function from overflowing separately when
//! their product is representable.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::params::MLParameters;

/// Largest log-weight that still exponentiates to a finite double.
const MAX_LOG_WEIGHT: f64 = 709.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum KernelError {
    #[error("kernel denominator vanishes at r = {r}, angle = {phi}")]
    SingularDenominator { r: f64, phi: f64 },
    #[error("exponential weight overflows (log weight {log_weight}) at r = {r}")]
    Overflow { r: f64, log_weight: f64 },
    #[error("radial variable must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("modulus t must be positive for kernel evaluation, got {0}")]
    InvalidModulus(f64),
    #[error("detour radius must lie in (0, 1), got {0}")]
    InvalidArcRadius(f64),
}

/// `(r, phi)` on the detour arc of radius `tau` around `zeta = 1`, on branch `k`.
pub fn arc_geometry(tau: f64, psi: f64, k: i32) -> (f64, f64) {
    let (s, c) = psi.sin_cos();
    let r = (tau * tau + 2.0 * tau * c + 1.0).sqrt();
    // tau < 1 keeps the denominator positive, so atan2 is the principal atan here
    let phi = (tau * s).atan2(tau * c + 1.0) + f64::from(k) * PI;
    (r, phi)
}

/// Integrands bound to fixed parameters and argument.
#[derive(Debug, Clone, Copy)]
pub struct Kernels {
    rho: f64,
    mu_re: f64,
    mu_im: f64,
    t: f64,
    theta: f64,
    ln_t: f64,
    /// `rho (1 - mu_re)`
    a: f64,
    /// `rho / (2 pi)`
    pre: f64,
}

impl Kernels {
    pub fn new(params: &MLParameters, t: f64, theta: f64) -> Result<Self, KernelError> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(KernelError::InvalidModulus(t));
        }
        let rho = params.rho();
        Ok(Self {
            rho,
            mu_re: params.mu_re(),
            mu_im: params.mu_im(),
            t,
            theta,
            ln_t: t.ln(),
            a: params.power_exponent(),
            pre: rho / (2.0 * PI),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn ln_tr(&self, r: f64) -> Result<f64, KernelError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(KernelError::InvalidRadius(r));
        }
        Ok(self.ln_t + r.ln())
    }

    /// `(t r)^rho`
    fn scaled_power(&self, ln_tr: f64) -> f64 {
        (self.rho * ln_tr).exp()
    }

    /// Log of the phase function `f`.
    fn ln_f(&self, ln_tr: f64, phi: f64) -> f64 {
        let arg = self.theta + phi;
        self.scaled_power(ln_tr) * (self.rho * arg).cos() + self.rho * self.mu_im * arg
    }

    fn xi(&self, ln_tr: f64, phi: f64) -> f64 {
        let arg = self.theta + phi;
        self.scaled_power(ln_tr) * (self.rho * arg).sin() + self.rho * (1.0 - self.mu_re) * arg
            - self.rho * self.mu_im * ln_tr
    }

    fn weight(&self, r: f64, log_weight: f64) -> Result<f64, KernelError> {
        if log_weight > MAX_LOG_WEIGHT {
            return Err(KernelError::Overflow { r, log_weight });
        }
        Ok(log_weight.exp())
    }

    /// `f(r, phi) = exp{(t r)^rho cos(rho(theta + phi)) + rho mu_im (theta + phi)}`.
    pub fn phase_f(&self, r: f64, phi: f64) -> Result<f64, KernelError> {
        let ln_tr = self.ln_tr(r)?;
        self.weight(r, self.ln_f(ln_tr, phi))
    }

    /// `xi(r, phi) = (t r)^rho sin(rho(theta + phi)) + rho (1 - mu_re)(theta + phi) - rho mu_im ln(t r)`.
    pub fn phase_xi(&self, r: f64, phi: f64) -> Result<f64, KernelError> {
        Ok(self.xi(self.ln_tr(r)?, phi))
    }

    /// The pair `(varrho, xi')` used by the `delta = pi / rho` kernel.
    pub fn pi_rho_phases(&self, r: f64) -> Result<(f64, f64), KernelError> {
        let ln_tr = self.ln_tr(r)?;
        let arg = self.theta - PI;
        let p = self.scaled_power(ln_tr);
        let varrho = -p * (self.rho * arg).cos() + self.rho * self.mu_im * arg;
        let xi = -p * (self.rho * arg).sin() + self.rho * (1.0 - self.mu_re) * arg
            - self.rho * self.mu_im * ln_tr;
        Ok((varrho, xi))
    }

    /// `r^2 + 2 r cos(phi) + 1` written as a sum of squares, so it stays
    /// accurate near its zero at `r = 1, phi = pi`.
    fn ray_denominator(r: f64, phi: f64) -> Result<f64, KernelError> {
        let (s, c) = phi.sin_cos();
        let d = (r + c) * (r + c) + s * s;
        Self::check_denominator(d, r, phi)
    }

    /// `r^2 - 2 r cos(phi) + 1`, zero at `r = 1, phi = 0`.
    fn arc_denominator(r: f64, phi: f64) -> Result<f64, KernelError> {
        let (s, c) = phi.sin_cos();
        let d = (r - c) * (r - c) + s * s;
        Self::check_denominator(d, r, phi)
    }

    fn check_denominator(d: f64, r: f64, phi: f64) -> Result<f64, KernelError> {
        let floor = 16.0 * f64::EPSILON * (1.0 + r);
        if d <= floor * floor {
            Err(KernelError::SingularDenominator { r, phi })
        } else {
            Ok(d)
        }
    }

    /// One ray term `w(phi - pi) / d(phi) * (S, C)` with
    /// `S = r sin xi + sin(xi + phi)` and `C = r cos xi + cos(xi + phi)`.
    fn ray_term(&self, r: f64, ln_tr: f64, phi: f64, d: f64) -> Result<(f64, f64), KernelError> {
        let shifted = phi - PI;
        let w = self.weight(r, self.a * ln_tr + self.ln_f(ln_tr, shifted))? / d;
        let x = self.xi(ln_tr, shifted);
        let s = r * x.sin() + (x + phi).sin();
        let c = r * x.cos() + (x + phi).cos();
        Ok((w * s, w * c))
    }

    /// Ray kernel `K(r, phi1, phi2)` for independent contour angles.
    pub fn k(&self, r: f64, phi1: f64, phi2: f64) -> Result<Complex64, KernelError> {
        self.k_with_scale(r, phi1, phi2).map(|(v, _)| v)
    }

    /// [`k`](Self::k) and the summed modulus of its two ray terms.
    pub fn k_with_scale(&self, r: f64, phi1: f64, phi2: f64) -> Result<(Complex64, f64), KernelError> {
        let ln_tr = self.ln_tr(r)?;
        let d1 = Self::ray_denominator(r, phi1)?;
        let d2 = Self::ray_denominator(r, phi2)?;
        let (s1, c1) = self.ray_term(r, ln_tr, phi1, d1)?;
        let (s2, c2) = self.ray_term(r, ln_tr, phi2, d2)?;
        let scale = self.pre * (s1.hypot(c1) + s2.hypot(c2));
        Ok((Complex64::new(self.pre * (s2 - s1), self.pre * (c1 - c2)), scale))
    }

    /// Equal-angle ray kernel; equals `k(r, -delta, delta)`.
    pub fn k_sym(&self, r: f64, delta: f64) -> Result<Complex64, KernelError> {
        self.k_sym_with_scale(r, delta).map(|(v, _)| v)
    }

    /// [`k_sym`](Self::k_sym) and the summed modulus of its two ray terms.
    pub fn k_sym_with_scale(&self, r: f64, delta: f64) -> Result<(Complex64, f64), KernelError> {
        let ln_tr = self.ln_tr(r)?;
        // cos is even, so both angles share one denominator
        let d = Self::ray_denominator(r, delta)?;
        let (s_plus, c_plus) = self.ray_term(r, ln_tr, delta, d)?;
        let (s_minus, c_minus) = self.ray_term(r, ln_tr, -delta, d)?;
        let scale = self.pre * (s_plus.hypot(c_plus) + s_minus.hypot(c_minus));
        Ok((Complex64::new(self.pre * (s_plus - s_minus), self.pre * (c_minus - c_plus)), scale))
    }

    /// Ray kernel for `delta = pi / rho`, written through `(varrho, xi')`.
    pub fn k_pirho(&self, r: f64) -> Result<Complex64, KernelError> {
        self.k_pirho_with_scale(r).map(|(v, _)| v)
    }

    /// [`k_pirho`](Self::k_pirho) and the summed modulus of its two ray terms.
    pub fn k_pirho_with_scale(&self, r: f64) -> Result<(Complex64, f64), KernelError> {
        let ln_tr = self.ln_tr(r)?;
        let angle = PI / self.rho;
        let d = Self::ray_denominator(r, angle)?;
        let (varrho, xi) = self.pi_rho_phases(r)?;
        let base = self.a * ln_tr + varrho;
        let w_plus = self.weight(r, base + self.mu_im * PI)? / d;
        let w_minus = self.weight(r, base - self.mu_im * PI)? / d;
        let shift = (1.0 - self.mu_re) * PI;
        let xp = xi + shift;
        let xm = xi - shift;
        let (sp, cp) = (r * xp.sin() + (xp + angle).sin(), r * xp.cos() + (xp + angle).cos());
        let (sm, cm) = (r * xm.sin() + (xm - angle).sin(), r * xm.cos() + (xm - angle).cos());
        let scale = self.pre * (w_plus * sp.hypot(cp) + w_minus * sm.hypot(cm));
        Ok((Complex64::new(self.pre * (w_plus * sp - w_minus * sm), self.pre * (w_minus * cm - w_plus * cp)), scale))
    }

    /// One-sided ray kernel `K'(r, delta)`; `k_sym(r, d) = k_prime(r, d) - k_prime(r, -d)`.
    pub fn k_prime(&self, r: f64, delta: f64) -> Result<Complex64, KernelError> {
        let ln_tr = self.ln_tr(r)?;
        let d = Self::ray_denominator(r, delta)?;
        let (s, c) = self.ray_term(r, ln_tr, delta, d)?;
        Ok(Complex64::new(self.pre * s, -self.pre * c))
    }

    /// Arc kernel `P(r, phi)` on the circle of radius `r`.
    pub fn p(&self, r: f64, phi: f64) -> Result<Complex64, KernelError> {
        let ln_tr = self.ln_tr(r)?;
        let d = Self::arc_denominator(r, phi)?;
        let w = self.pre * r * self.weight(r, self.a * ln_tr + self.ln_f(ln_tr, phi))? / d;
        let x = self.xi(ln_tr, phi);
        Ok(Complex64::new(
            w * (r * x.cos() - (x + phi).cos()),
            w * (r * x.sin() - (x + phi).sin()),
        ))
    }

    /// Detour arc kernel `P'(tau, psi, k)` around the pole at `zeta = 1`.
    pub fn p_prime(&self, tau: f64, psi: f64, k: i32) -> Result<Complex64, KernelError> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(KernelError::InvalidArcRadius(tau));
        }
        let (r, phi) = arc_geometry(tau, psi, k);
        let ln_tr = self.ln_tr(r)?;
        let d = Self::arc_denominator(r, phi)?;
        let w = self.pre * tau * self.weight(r, self.a * ln_tr + self.ln_f(ln_tr, phi))? / d;
        // the arc variant of xi carries an extra +psi
        let x = self.xi(ln_tr, phi) + psi;
        Ok(Complex64::new(
            w * (r * (x - phi).cos() - x.cos()),
            w * (r * (x - phi).sin() - x.sin()),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn kern(rho: f64, mu_re: f64, mu_im: f64, t: f64, theta: f64) -> Kernels {
        Kernels::new(&MLParameters::new(rho, mu_re, mu_im).unwrap(), t, theta).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn phase_f_examples() {
        assert!(close(kern(1.0, 1.0, 0.0, 1.0, PI).phase_f(1.0, -PI / 2.0).unwrap(), 1.0, 1e-15));
        assert!(close(kern(1.0, 1.0, 0.0, 1.0, 0.0).phase_f(1.0, 0.0).unwrap(), E, 1e-15));
        assert!(close(kern(1.0, 1.0, 0.5, 1.0, PI).phase_f(2.0, -PI).unwrap(), 7.38905609893065, 1e-14));
    }

    #[test]
    fn phase_f_overflow() {
        let k = kern(1.0, 1.0, 0.0, 1.0, 0.0);
        assert!(matches!(k.phase_f(800.0, 0.0), Err(KernelError::Overflow { .. })));
    }

    #[test]
    fn phase_xi_examples() {
        let k = kern(1.0, 1.0, 0.0, 1.0, PI);
        assert!(close(k.phase_xi(1.0, -PI / 2.0).unwrap(), 1.0, 1e-15));
        let k = kern(2.0, 0.5, 0.0, 1.0, PI / 2.0);
        assert!((k.phase_xi(2.0, 0.0).unwrap() - PI / 2.0).abs() < 1e-14);
        let k = kern(1.3, 0.2, 0.7, 1.0, 2.0);
        let lhs = k.phase_xi(1.0, 0.4).unwrap();
        let rhs = (1.3f64 * 2.4).sin() + 1.3 * 0.8 * 2.4;
        assert!(close(lhs, rhs, 1e-15));
    }

    #[test]
    fn pi_rho_phase_examples() {
        let (v, x) = kern(1.7, 0.3, 0.9, 1.0, PI).pi_rho_phases(1.0).unwrap();
        // the cosine factor is 1 at theta = pi, so varrho = -(t r)^rho = -1
        assert_eq!((v, x), (-1.0, 0.0));
        let (v, _) = kern(1.4, 0.3, 0.0, 1.5, PI).pi_rho_phases(2.0).unwrap();
        assert!(close(v, -(3.0f64).powf(1.4), 1e-15));
        let (v, x) = kern(1.0, 1.0, 0.0, 2.0, 1.5 * PI).pi_rho_phases(1.0).unwrap();
        assert!(v.abs() < 1e-15 && close(x, -2.0, 1e-15));
    }

    #[test]
    fn kernel_k_example() {
        let v = kern(1.0, 1.0, 0.0, 1.0, PI).k(1.0, -PI / 2.0, PI / 2.0).unwrap();
        assert!(close(v.re, (1f64.sin() + 1f64.cos()) / (2.0 * PI), 1e-14));
        assert!(close(v.re, 0.219916, 1e-6));
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn kernel_k_im_vanishes_symmetric() {
        for &r in &[0.1, 0.7, 1.3, 4.0] {
            for &d in &[1.7, 2.2, 2.9] {
                let v = kern(1.0, 0.4, 0.0, 1.5, PI).k(r, -d, d).unwrap();
                assert!(v.im.abs() <= 1e-15 * v.re.abs().max(1.0), "{r} {d} {v}");
            }
        }
    }

    #[test]
    fn kernel_k_finite_near_zero_when_mu_re_one() {
        let v = kern(1.2, 1.0, 0.3, 2.0, PI + 0.1).k(1e-12, -2.5, 2.6).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
    }

    #[test]
    fn kernel_p_examples() {
        let v = kern(1.0, 1.0, 0.0, 1.0, PI).p(2.0, -PI).unwrap();
        assert!(close(v.re, E * E / (3.0 * PI), 1e-14));
        assert!(close(v.re, 0.784003, 1e-6));
        assert!(v.im.abs() < 1e-14);
        let v = kern(1.0, 0.5, 0.0, 1e-12, PI).p(1.0, PI).unwrap();
        assert!(v.norm() < 1e-6);
        assert!(matches!(
            kern(1.0, 1.0, 0.0, 1.0, PI).p(1.0, 0.0),
            Err(KernelError::SingularDenominator { .. })
        ));
    }

    #[test]
    fn kernel_p_im_vanishes_on_negative_axis() {
        for &r in &[0.3, 1.5, 2.0] {
            for &t in &[0.1, 1.0, 3.0] {
                let v = kern(1.0, 0.3, 0.0, t, PI).p(r, -PI).unwrap();
                assert!(v.im.abs() <= 1e-14 * v.re.abs().max(1.0));
            }
        }
    }

    #[test]
    fn kernel_k_sym_examples() {
        let k = kern(1.0, 1.0, 0.0, 1.0, PI);
        let a = k.k_sym(1.0, PI / 2.0).unwrap();
        let b = k.k(1.0, -PI / 2.0, PI / 2.0).unwrap();
        assert!((a - b).norm() < 1e-16);
        assert!(matches!(k.k_sym(1.0, PI), Err(KernelError::SingularDenominator { .. })));
        let a = k.k_sym(0.5, 2.0 * PI / 3.0).unwrap();
        let b = k.k(0.5, -2.0 * PI / 3.0, 2.0 * PI / 3.0).unwrap();
        assert!((a - b).norm() <= 1e-15 * a.norm());
    }

    #[test]
    fn kernel_k_pirho_examples() {
        let k = kern(1.0, 1.0, 0.0, 1.0, PI);
        let a = k.k_pirho(2.0).unwrap();
        let b = k.k_sym(2.0, PI).unwrap();
        // at rho = 1 and integer mu the two ray terms cancel identically
        assert!((a - b).norm() <= 1e-15 && a.norm() <= 1e-15);
        let k = kern(2.0, 1.0, 0.0, 1.0, PI);
        let a = k.k_pirho(1.0).unwrap();
        let b = k.k_sym(1.0, PI / 2.0).unwrap();
        assert!(a.re.is_finite() && (a - b).norm() <= 1e-14 * a.norm(), "{a} {b}");
        assert!(matches!(kern(1.0, 0.0, 0.0, 1.0, PI).k_pirho(1.0), Err(KernelError::SingularDenominator { .. })));
    }

    #[test]
    fn kernel_k_prime_examples() {
        let k = kern(1.0, 1.0, 0.0, 1.0, PI);
        let v = k.k_prime(1.0, PI / 2.0).unwrap();
        assert!(close(v.re, (1f64.sin() + 1f64.cos()) / (4.0 * PI), 1e-14));
        assert!(close(v.re, 0.109958, 1e-6));
        let v = k.k_prime(1.0, 0.0).unwrap();
        assert!(v.re.abs() < 1e-16);
        assert!(matches!(k.k_prime(1.0, -PI), Err(KernelError::SingularDenominator { .. })));
    }

    #[test]
    fn arc_geometry_examples() {
        let (r, phi) = arc_geometry(0.5, -PI, 0);
        assert!(close(r, 0.5, 1e-15) && phi.abs() < 1e-15);
        assert_eq!(arc_geometry(0.5, 0.0, 0), (1.5, 0.0));
        let (r, phi) = arc_geometry(0.5, -PI, -2);
        assert!(close(r, 0.5, 1e-15) && close(phi, -2.0 * PI, 1e-15));
    }

    #[test]
    fn kernel_p_prime_examples() {
        let k = kern(1.0, 1.0, 0.0, 1.0, PI);
        let v = k.p_prime(0.5, -PI, 0).unwrap();
        // hand substitution: (1/2pi) * 0.5 * e^{-1/2} / 0.25 * (0.5 cos(-pi) - cos(-pi))
        assert!(close(v.re, (-0.5f64).exp() / (2.0 * PI), 1e-14));
        assert!(close(v.re, 0.0965323526, 1e-9));
        assert!(v.im.abs() < 1e-15);
        let v = k.p_prime(0.5, 0.0, 0).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
        assert!(matches!(k.p_prime(1.0, 0.0, 0), Err(KernelError::InvalidArcRadius(_))));
    }

    #[test]
    fn kernels_reject_bad_inputs() {
        assert!(Kernels::new(&MLParameters::real(1.0, 1.0).unwrap(), 0.0, PI).is_err());
        let k = kern(1.0, 1.0, 0.0, 1.0, PI);
        assert!(matches!(k.k(0.0, -2.0, 2.0), Err(KernelError::InvalidRadius(_))));
        assert!(matches!(k.k(f64::NAN, -2.0, 2.0), Err(KernelError::InvalidRadius(_))));
    }
}
