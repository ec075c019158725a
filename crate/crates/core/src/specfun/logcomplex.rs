//! Complex numbers carried as `(log |z|, arg z)`.
//!
//! Kernel prefactors such as `exp(σ⁶/6)` and Bessel/Airy tails leave the
//! range of `f64` long before the quantities they multiply do, so products
//! are formed on this representation and exponentiated once at the end.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::{Div, Mul};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_magnitude: f64,
    /// Radians, normalised to (−π, π].
    pub phase: f64,
}

fn wrap_phase(p: f64) -> f64 {
    if p > -PI && p <= PI {
        return p;
    }
    let mut q = p.rem_euclid(2.0 * PI);
    if q > PI {
        q -= 2.0 * PI;
    }
    q
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex { log_magnitude: f64::NEG_INFINITY, phase: 0.0 };
    pub const ONE: LogComplex = LogComplex { log_magnitude: 0.0, phase: 0.0 };

    pub fn new(log_magnitude: f64, phase: f64) -> Self {
        if log_magnitude == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex { log_magnitude, phase: wrap_phase(phase) }
    }

    /// `exp(w)` for complex `w`, without ever forming `e^{Re w}`.
    pub fn exp(w: Complex64) -> Self {
        Self::new(w.re, w.im)
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        let (r, theta) = z.to_polar();
        Self::new(r.ln(), theta)
    }

    /// Linear value; saturates to 0 or ∞ outside the `f64` range.
    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_magnitude.exp(), self.phase)
    }

    pub fn is_zero(self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    pub fn conj(self) -> Self {
        Self::new(self.log_magnitude, -self.phase)
    }

    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::new(0.5 * self.log_magnitude, 0.5 * self.phase)
    }

    pub fn powf(self, p: f64) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::new(p * self.log_magnitude, p * self.phase)
    }

    /// Multiply by `e^{a}` for real `a`.
    pub fn scale_exp(self, a: f64) -> Self {
        Self::new(self.log_magnitude + a, self.phase)
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_magnitude + rhs.log_magnitude, self.phase + rhs.phase)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_magnitude - rhs.log_magnitude, self.phase - rhs.phase)
    }
}

/// Running sum of `LogComplex` terms (complex log-sum-exp).
///
/// Keeps `total = e^{scale} · acc` and rescales `acc` whenever a term
/// larger than the current scale arrives.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    scale: f64,
    acc: Complex64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSum {
    pub fn new() -> Self {
        LogSum { scale: f64::NEG_INFINITY, acc: Complex64::new(0.0, 0.0) }
    }

    pub fn add(&mut self, term: LogComplex) {
        if term.is_zero() {
            return;
        }
        if term.log_magnitude > self.scale {
            if self.scale > f64::NEG_INFINITY {
                self.acc *= (self.scale - term.log_magnitude).exp();
            }
            self.scale = term.log_magnitude;
        }
        self.acc += Complex64::from_polar((term.log_magnitude - self.scale).exp(), term.phase);
    }

    /// Adds `e^{log_scale} · value`.
    pub fn add_scaled(&mut self, log_scale: f64, value: Complex64) {
        self.add(LogComplex::from_complex(value).scale_exp(log_scale));
    }

    /// Largest term magnitude seen so far (log scale).
    pub fn max_log(&self) -> f64 {
        self.scale
    }

    pub fn total(&self) -> LogComplex {
        if self.scale == f64::NEG_INFINITY {
            return LogComplex::ZERO;
        }
        LogComplex::from_complex(self.acc).scale_exp(self.scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_adds_fields() {
        let a = LogComplex::new(700.0, 3.0);
        let b = LogComplex::new(-650.0, 1.0);
        let p = a * b;
        assert!((p.log_magnitude - 50.0).abs() < 1e-12);
        assert!((p.phase - (4.0 - 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn round_trip_and_zero() {
        let z = Complex64::new(-0.3, 2.5);
        let back = LogComplex::from_complex(z).to_complex();
        assert!((back - z).norm() < 1e-15);
        assert!(LogComplex::from_complex(Complex64::new(0.0, 0.0)).is_zero());
        assert_eq!(LogComplex::ZERO.to_complex(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn phase_stays_in_half_open_interval() {
        let p = LogComplex::new(0.0, -PI);
        assert_eq!(p.phase, PI);
        let q = LogComplex::new(0.0, 7.0 * PI);
        assert!((q.phase - PI).abs() < 1e-12);
    }

    #[test]
    fn log_sum_handles_huge_spread() {
        let mut s = LogSum::new();
        s.add(LogComplex::new(-800.0, 0.0));
        s.add(LogComplex::new(900.0, 0.0));
        s.add(LogComplex::new(900.0, PI));
        s.add(LogComplex::new(900.0 + 2f64.ln(), 0.0));
        let t = s.total();
        assert!((t.log_magnitude - (900.0 + 2f64.ln())).abs() < 1e-12);
        assert!(t.phase.abs() < 1e-12);
    }
}
