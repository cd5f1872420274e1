//! Oracles that do not touch the integral representations: the complex
//! reciprocal gamma function, direct summation of the defining series and
//! the elementary closed forms at `rho = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::params::MLParameters;

/// Lanczos parameter `g`.
pub const LANCZOS_G: f64 = 7.0;

/// Lanczos coefficients for `g = 7`, nine terms.
pub const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ReferenceError {
    #[error("series did not meet its stop rule within {terms} terms")]
    SeriesDivergence { terms: usize },
    #[error("series term overflowed after {terms} terms")]
    Overflow { terms: usize },
    #[error("invalid series settings: {0}")]
    InvalidSettings(&'static str),
}

fn is_nonpositive_integer(w: Complex64) -> bool {
    w.im == 0.0 && w.re <= 0.0 && w.re == w.re.round()
}

/// Lanczos `ln Gamma(w)` for `Re w >= 1/2`.
fn ln_gamma_right(w: Complex64) -> Complex64 {
    let w = w - 1.0;
    let mut x = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += *c / (w + i as f64);
    }
    let t = w + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (w + 0.5) * t.ln() - t + x.ln()
}

/// A logarithm of `Gamma(w)`, not necessarily the principal branch.
///
/// Only `exp` of the result is meaningful. Returns `None` at the poles.
pub fn ln_gamma(w: Complex64) -> Option<Complex64> {
    if is_nonpositive_integer(w) {
        return None;
    }
    if w.re >= 0.5 {
        Some(ln_gamma_right(w))
    } else {
        // Gamma(w) Gamma(1 - w) = pi / sin(pi w)
        let s = (w * PI).sin();
        Some(Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_right(1.0 - w))
    }
}

/// Complex number with a separate binary exponent, `m * 2^e`, so long
/// products neither overflow nor underflow before the final rescale.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    m: Complex64,
    e: i32,
}

impl Scaled {
    fn new(m: Complex64) -> Self {
        Self { m, e: 0 }.normalized()
    }

    fn normalized(mut self) -> Self {
        let big = self.m.re.abs().max(self.m.im.abs());
        if big == 0.0 || !big.is_finite() {
            return self;
        }
        // power-of-two rescaling is exact
        let shift = big.log2().floor() as i32;
        if shift != 0 {
            self.m = self.m * 2f64.powi(-shift);
            self.e += shift;
        }
        self
    }

    fn mul(self, f: Complex64) -> Self {
        Self { m: self.m * f, e: self.e }.normalized()
    }

    fn mul_scaled(self, o: Scaled) -> Self {
        Self { m: self.m * o.m, e: self.e + o.e }.normalized()
    }

    fn div_scaled(self, o: Scaled) -> Self {
        Self { m: self.m / o.m, e: self.e - o.e }.normalized()
    }

    fn to_complex(self) -> Complex64 {
        // split the exponent so neither factor over- or underflows alone
        let half = self.e / 2;
        self.m * 2f64.powi(half) * 2f64.powi(self.e - half)
    }
}

/// Reductions longer than this fall back to the Lanczos formula directly.
const MAX_REDUCTION: f64 = 400.0;

/// `1 / Gamma(w)` as a scaled value.
///
/// The argument is shifted by an integer into `1 <= Re < 2`, where the
/// Lanczos sum is accurate to a few ulps, and the shift is undone by an
/// explicit product. This keeps the relative error small even for terms of
/// a series whose gamma arguments are large or negative.
fn recip_gamma_scaled(w: Complex64) -> Scaled {
    if is_nonpositive_integer(w) {
        return Scaled { m: Complex64::new(0.0, 0.0), e: 0 };
    }
    if !(w.re.abs() <= MAX_REDUCTION) {
        return Scaled::new(recip_gamma_lanczos(w));
    }
    if w.re < 1.0 {
        // 1/Gamma(w) = w (w+1) ... (w+n-1) / Gamma(w+n)
        let n = (1.0 - w.re).ceil() as i32;
        let mut acc = Scaled::new(recip_gamma_lanczos(w + f64::from(n)));
        for j in 0..n {
            acc = acc.mul(w + f64::from(j));
        }
        acc
    } else {
        // 1/Gamma(w) = 1 / (Gamma(w0) w0 (w0+1) ... (w0+n-1))
        let n = (w.re - 1.0).floor() as i32;
        let w0 = w - f64::from(n);
        let mut prod = Scaled::new(Complex64::new(1.0, 0.0));
        for j in 0..n {
            prod = prod.mul(w0 + f64::from(j));
        }
        Scaled::new(recip_gamma_lanczos(w0)).div_scaled(prod)
    }
}

fn recip_gamma_lanczos(w: Complex64) -> Complex64 {
    if w.re >= 0.5 {
        (-ln_gamma_right(w)).exp()
    } else {
        (w * PI).sin() / PI * ln_gamma_right(1.0 - w).exp()
    }
}

/// `1 / Gamma(w)`; exactly zero at the non-positive integers.
pub fn recip_gamma(w: Complex64) -> Complex64 {
    recip_gamma_scaled(w).to_complex()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSettings {
    pub rel_term_tol: f64,
    pub consecutive_small: usize,
    pub max_terms: usize,
}

impl Default for SeriesSettings {
    fn default() -> Self {
        Self { rel_term_tol: 1e-16, consecutive_small: 2, max_terms: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    /// First omitted term plus rounding accumulated over all terms.
    pub abs_err: f64,
    pub terms: usize,
    /// Sum of term magnitudes; much larger than `|value|` signals cancellation.
    pub abs_sum: f64,
}

impl SeriesResult {
    /// `sum |term_k| / |value|`, the factor by which rounding is amplified.
    pub fn cancellation(&self) -> f64 {
        let v = self.value.norm();
        if v > 0.0 {
            self.abs_sum / v
        } else if self.abs_sum > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    }
}

/// Sums `E(z) = sum_k z^k / Gamma(mu + k / rho)`.
///
/// Terms carry a separate binary exponent so neither `z^k` nor `Gamma`
/// overflows on its own. The stop rule is armed only once `Re(mu) + k / rho` exceeds
/// `|z|^rho + 1`, which is past both the gamma poles and the peak term.
pub fn series_eval(params: &MLParameters, z: Complex64, settings: &SeriesSettings) -> Result<SeriesResult, ReferenceError> {
    if settings.max_terms < 1 {
        return Err(ReferenceError::InvalidSettings("max_terms must be at least 1"));
    }
    if !(settings.rel_term_tol > 0.0) || settings.consecutive_small < 1 {
        return Err(ReferenceError::InvalidSettings("rel_term_tol and consecutive_small must be positive"));
    }
    let mu = params.mu();
    let inv_rho = 1.0 / params.rho();
    let t = z.norm();
    if t == 0.0 {
        let v = recip_gamma(mu);
        return Ok(SeriesResult { value: v, abs_err: f64::EPSILON * v.norm(), terms: 1, abs_sum: v.norm() });
    }
    let term = |zk: Scaled, k: usize| zk.mul_scaled(recip_gamma_scaled(mu + k as f64 * inv_rho)).to_complex();
    let arm = t.powf(params.rho()) + 1.0;

    // z^k as a running scaled product: exact conjugate symmetry and no overflow
    let mut zk = Scaled::new(Complex64::new(1.0, 0.0));
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut small = 0;
    for k in 0..settings.max_terms {
        if k > 0 {
            zk = zk.mul(z);
        }
        let tk = term(zk, k);
        if !(tk.re.is_finite() && tk.im.is_finite()) {
            return Err(ReferenceError::Overflow { terms: k + 1 });
        }
        sum += tk;
        abs_sum += tk.norm();
        if mu.re + k as f64 * inv_rho > arm {
            if tk.norm() <= settings.rel_term_tol * sum.norm() {
                small += 1;
            } else {
                small = 0;
            }
            if small >= settings.consecutive_small {
                let omitted = term(zk.mul(z), k + 1).norm();
                return Ok(SeriesResult {
                    value: sum,
                    abs_err: omitted + f64::EPSILON * abs_sum,
                    terms: k + 1,
                    abs_sum,
                });
            }
        }
    }
    Err(ReferenceError::SeriesDivergence { terms: settings.max_terms })
}

/// `E_{1,n}(z)`: `e^z z^{1-n}` for `n <= 1`, otherwise
/// `z^{1-n} (e^z - sum_{k=0}^{n-2} z^k / k!)`.
///
/// The second form cancels for small `|z|`, so there the equivalent
/// remainder series `sum_j z^j / (j + n - 1)!` is summed instead.
pub fn closed_form_rho1(n: i32, z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return recip_gamma(Complex64::new(f64::from(n), 0.0));
    }
    if n <= 1 {
        return z.exp() * z.powi(1 - n);
    }
    if z.norm() < 1.0 {
        // term_j = z^j / (j + n - 1)!
        let mut fact = 1.0;
        for k in 2..n {
            fact *= f64::from(k);
        }
        let mut term = Complex64::new(1.0 / fact, 0.0);
        let mut sum = term;
        for j in 1..200 {
            term = term * z / f64::from(j + n - 1);
            sum += term;
            if term.norm() <= 1e-17 * sum.norm() {
                break;
            }
        }
        return sum;
    }
    let mut poly = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..=(n - 2) {
        if k > 0 {
            term = term * z / f64::from(k);
        }
        poly += term;
    }
    z.powi(1 - n) * (z.exp() - poly)
}
