//! Special functions and quadrature.

mod airy;
mod bessel;
mod laguerre;
mod logcomplex;
mod quadrature;

pub use airy::{airy, airy_ai, airy_ai_log, airy_log, AiryLogPair, AiryPair, AI0, AIP0};
pub use bessel::{bessel_j, bessel_k, bessel_k_value};
pub use laguerre::{laguerre, laguerre_sequence_log};
pub use logcomplex::{LogComplex, LogSum};
pub use quadrature::{composite_gauss_legendre, gauss_legendre, make_rule, Geometry, QuadratureRule, RuleKind};

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}
