//! Evaluation of the Mittag-Leffler function
//! `E_{rho,mu}(z) = sum_k z^k / Gamma(mu + k/rho)` through two real-variable
//! integral representations, with the power series as an independent oracle.
//!
//! Start with [`representations::evaluate`]; [`params`] holds the parameter
//! and contour types.

pub mod cli;
pub mod format;
pub mod kernels;
pub mod params;
pub mod quadrature;
pub mod reference;
pub mod representations;
pub mod verify;
