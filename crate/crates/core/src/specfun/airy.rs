//! Airy function Ai and its derivative for complex argument.
//!
//! Three regimes:
//! - `|z| ≤ SERIES_RADIUS`: Taylor series about the origin.
//! - `|z| ≥ ASYMPTOTIC_RADIUS`: the exponential expansion for
//!   `|arg z| ≤ 2π/3`, the oscillatory expansion of `Ai(−w)` otherwise.
//! - the annulus in between: Taylor steps of `y'' = z y` along the ray
//!   through `z`, started from whichever end is stable for that ray. Inside
//!   `|arg z| ≤ π/3` Ai is recessive going outward, so the march runs
//!   inward from the asymptotic circle; elsewhere it runs outward from
//!   the series disc.

use super::logcomplex::LogComplex;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Ai(0) = 3^{-2/3} / Γ(2/3).
pub const AI0: f64 = 0.355_028_053_887_817_24;
/// Ai'(0) = −3^{-1/3} / Γ(1/3).
pub const AIP0: f64 = -0.258_819_403_792_806_8;

const SERIES_RADIUS: f64 = 2.5;
const ASYMPTOTIC_RADIUS: f64 = 9.0;
const MAX_STEP: f64 = 0.75;

/// Value and derivative at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryPair {
    pub ai: Complex64,
    pub aip: Complex64,
}

/// Log-form value and derivative, for arguments where Ai underflows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryLogPair {
    pub ai: LogComplex,
    pub aip: LogComplex,
}

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("Airy function of non-finite argument {z}")))
    }
}

/// Ai(z).
pub fn airy_ai(z: Complex64) -> Result<Complex64> {
    Ok(airy_ai_log(z)?.to_complex())
}

/// Ai(z) in log form; finite for arguments where the linear value underflows.
pub fn airy_ai_log(z: Complex64) -> Result<LogComplex> {
    Ok(airy_log(z)?.ai)
}

/// Ai(z) and Ai'(z) in linear form.
pub fn airy(z: Complex64) -> Result<AiryPair> {
    let p = airy_log(z)?;
    Ok(AiryPair { ai: p.ai.to_complex(), aip: p.aip.to_complex() })
}

/// Ai(z) and Ai'(z) in log form.
pub fn airy_log(z: Complex64) -> Result<AiryLogPair> {
    check_finite(z)?;
    let r = z.norm();
    if r <= SERIES_RADIUS {
        let (ai, aip) = taylor_step(Complex64::new(0.0, 0.0), AI0.into(), AIP0.into(), z);
        return Ok(linear_pair(ai, aip));
    }
    let theta = z.arg();
    if r >= ASYMPTOTIC_RADIUS {
        return Ok(asymptotic(z));
    }
    let dir = Complex64::from_polar(1.0, theta);
    if theta.abs() <= PI / 3.0 {
        let start = dir * ASYMPTOTIC_RADIUS;
        let a = asymptotic(start);
        let (ai, aip) = march(start, a.ai.to_complex(), a.aip.to_complex(), z);
        Ok(linear_pair(ai, aip))
    } else {
        let start = dir * SERIES_RADIUS;
        let (ai0, aip0) = taylor_step(Complex64::new(0.0, 0.0), AI0.into(), AIP0.into(), start);
        let (ai, aip) = march(start, ai0, aip0, z);
        Ok(linear_pair(ai, aip))
    }
}

fn linear_pair(ai: Complex64, aip: Complex64) -> AiryLogPair {
    AiryLogPair { ai: LogComplex::from_complex(ai), aip: LogComplex::from_complex(aip) }
}

/// Carries (y, y') from `from` to `to` in steps of at most `MAX_STEP`.
fn march(from: Complex64, y: Complex64, yp: Complex64, to: Complex64) -> (Complex64, Complex64) {
    let delta = to - from;
    let steps = (delta.norm() / MAX_STEP).ceil().max(1.0) as usize;
    let h = delta / steps as f64;
    let (mut y, mut yp) = (y, yp);
    let mut z0 = from;
    for _ in 0..steps {
        let next = taylor_step(z0, y, yp, h + z0);
        y = next.0;
        yp = next.1;
        z0 += h;
    }
    (y, yp)
}

/// One Taylor step of `y'' = z y` from `z0` to `z1`.
fn taylor_step(z0: Complex64, y: Complex64, yp: Complex64, z1: Complex64) -> (Complex64, Complex64) {
    let h = z1 - z0;
    // a_{k+2} = (z0 a_k + a_{k-1}) / ((k+1)(k+2)), a_{-1} = 0
    let mut a_km1 = Complex64::new(0.0, 0.0);
    let mut a_k = y;
    let mut a_kp1 = yp;
    let mut hk = Complex64::new(1.0, 0.0); // h^k
    let mut sum = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    let mut hkm1 = Complex64::new(0.0, 0.0); // h^{k-1}, unused at k = 0
    let mut quiet = 0;
    for k in 0..400usize {
        let term = a_k * hk;
        sum += term;
        if k > 0 {
            dsum += a_k * hkm1 * k as f64;
        }
        let tiny = 1e-17 * sum.norm();
        if k > 2 && term.norm() <= tiny {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        let kf = k as f64;
        let a_kp2 = (z0 * a_k + a_km1) / ((kf + 1.0) * (kf + 2.0));
        a_km1 = a_k;
        a_k = a_kp1;
        a_kp1 = a_kp2;
        hkm1 = hk;
        hk *= h;
    }
    (sum, dsum)
}

struct AsymptoticCoefficients {
    u: Vec<f64>,
    v: Vec<f64>,
}

fn coefficients() -> &'static AsymptoticCoefficients {
    static COEFFS: OnceLock<AsymptoticCoefficients> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut u = vec![1.0];
        let mut v = vec![1.0];
        for k in 1..=80usize {
            let kf = k as f64;
            let prev = u[k - 1];
            let next = prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
            u.push(next);
            v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * next);
        }
        AsymptoticCoefficients { u, v }
    })
}

/// Σ (−1)^k c_k ζ^{-k} over the index set `start, start+stride, ...`,
/// with the sign taken per retained term, truncated at the smallest term.
fn asymptotic_sum(c: &[f64], zeta: Complex64, start: usize, stride: usize) -> Complex64 {
    let inv = 1.0 / zeta;
    let inv_stride = inv.powu(stride as u32);
    let mut pow = inv.powu(start as u32);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut sign = 1.0;
    let mut k = start;
    while k < c.len() {
        let term = pow * c[k] * sign;
        let mag = term.norm();
        if mag > last {
            break;
        }
        sum += term;
        if mag <= 1e-17 * sum.norm() {
            break;
        }
        last = mag;
        pow *= inv_stride;
        sign = -sign;
        k += stride;
    }
    sum
}

fn asymptotic(z: Complex64) -> AiryLogPair {
    let coeffs = coefficients();
    if z.arg().abs() <= 2.0 * PI / 3.0 {
        // Ai(z) ~ e^{-ζ} / (2√π z^{1/4}) Σ (−1)^k u_k ζ^{-k}
        let sqrt_z = z.sqrt();
        let zeta = z * sqrt_z * (2.0 / 3.0);
        let ln_z = z.ln();
        let base = Complex64::new(-(2.0 * PI.sqrt()).ln(), 0.0) - zeta;
        let s_u = asymptotic_sum(&coeffs.u, zeta, 0, 1);
        let s_v = asymptotic_sum(&coeffs.v, zeta, 0, 1);
        let ai = LogComplex::exp(base - ln_z * 0.25) * LogComplex::from_complex(s_u);
        let aip = LogComplex::exp(base + ln_z * 0.25) * LogComplex::from_complex(-s_v);
        AiryLogPair { ai, aip }
    } else {
        // Ai(−w), |arg w| < π/3
        let w = -z;
        let sqrt_w = w.sqrt();
        let zeta = w * sqrt_w * (2.0 / 3.0);
        let w14 = sqrt_w.sqrt();
        let phase = zeta - PI / 4.0;
        let (c, s) = (phase.cos(), phase.sin());
        let p = asymptotic_sum(&coeffs.u, zeta, 0, 2);
        let q = asymptotic_sum(&coeffs.u, zeta, 1, 2);
        let r = asymptotic_sum(&coeffs.v, zeta, 0, 2);
        let t = asymptotic_sum(&coeffs.v, zeta, 1, 2);
        let rpi = PI.sqrt();
        let ai = (c * p + s * q) / (rpi * w14);
        let aip = w14 / rpi * (s * r - c * t);
        linear_pair(ai, aip)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn value_at_origin() {
        let p = airy(c(0.0, 0.0)).unwrap();
        assert!((p.ai.re - 0.355_028_053_887_817_24).abs() < 1e-16);
        assert!((p.aip.re + 0.258_819_403_792_806_8).abs() < 1e-16);
    }

    #[test]
    fn value_at_one() {
        let ai = airy_ai(c(1.0, 0.0)).unwrap();
        assert!(rel(ai, c(0.135_292_416_312_881_41, 0.0)) < 1e-13);
    }

    #[test]
    fn large_argument_matches_leading_asymptotics() {
        let z = 25.0f64;
        let lead = (-(2.0 / 3.0) * z.powf(1.5)).exp() / (2.0 * PI.sqrt() * z.powf(0.25));
        let ai = airy_ai(c(z, 0.0)).unwrap();
        assert!((ai.re / lead - 1.0).abs() < 1e-2);
    }

    #[test]
    fn log_form_survives_underflow() {
        let z = 400.0f64;
        let l = airy_ai_log(c(z, 0.0)).unwrap();
        let expected = -(2.0 / 3.0) * z.powf(1.5) - (2.0 * PI.sqrt()).ln() - 0.25 * z.ln();
        assert!(l.log_magnitude.is_finite());
        assert!((l.log_magnitude - expected).abs() < 1e-3);
        assert_eq!(airy_ai(c(z, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn non_finite_is_domain_error() {
        assert!(matches!(airy_ai(c(f64::NAN, 0.0)), Err(Error::Domain(_))));
        assert!(airy_ai(c(0.0, f64::INFINITY)).is_err());
    }

    #[test]
    fn regimes_agree_across_switch_radii() {
        for &theta in &[0.0, 0.5, 1.0, 1.2, 2.0, 2.5, 3.0] {
            for &r in &[SERIES_RADIUS, ASYMPTOTIC_RADIUS] {
                let d = Complex64::from_polar(1.0, theta);
                let a = airy(d * (r - 1e-13)).unwrap();
                let b = airy(d * (r + 1e-13)).unwrap();
                assert!(rel(a.ai, b.ai) < 1e-11, "θ={theta} r={r}");
                assert!(rel(a.aip, b.aip) < 1e-11, "θ={theta} r={r}");
            }
        }
    }

    #[test]
    fn ode_residual_is_second_order_in_step() {
        let h = 1e-3;
        for re in [-4.0, -1.5, 0.0, 2.0, 3.5] {
            for im in [-3.0, 0.0, 1.0, 2.5] {
                let z = c(re, im);
                if z.norm() > 5.0 {
                    continue;
                }
                let f = |w: Complex64| airy_ai(w).unwrap();
                let second = (f(z + h) - f(z) * 2.0 + f(z - h)) / (h * h);
                let resid = (second - z * f(z)).norm();
                let scale = f(z).norm() * (1.0 + z.norm());
                assert!(resid <= 1e-4 * scale.max(1e-3), "z={z} resid={resid}");
            }
        }
    }

    // (re z, im z, Re Ai, Im Ai, Re Ai', Im Ai') from a 30-digit reference.
    const REFERENCE: &[(f64, f64, f64, f64, f64, f64)] = &[
        (0.5, 0.5, 0.21618634477812599, -0.11483063987764813, -0.23871680908176862, 0.066157041221093555),
        (3.0, 0.0, 0.0065911393574607191, 0.0, -0.011912976705951318, 0.0),
        (5.0, 1.0, -7.9156047688697371e-5, -9.0989790582477673e-5, 0.00016204187210916429, 0.00022558084819996542),
        (7.5, -2.0, 2.044990520463574e-7, -1.8173162910598762e-7, -5.0676220062520559e-7, 5.7998517553456669e-7),
        (-3.0, 0.0, -0.37881429367765807, 0.0, 0.31458376921659881, 0.0),
        (-6.0, 0.5, -0.60632515938495309, 0.22865098324913457, 0.70353930838324028, 1.2351520074012676),
        (-8.0, 5.0, 265868.16287678801, -79542.269162920121, -452733.42037024917, -715743.91609309871),
        (-2.0, 4.0, 49.956106370726602, -92.061685538841182, -214.8331715459424, 12.752465633384972),
        (1.0, 6.0, -26.674535726631442, -14.208265169866183, 28.356352843508786, 68.287630748261365),
        (12.0, 3.0, -1.3035077828781401e-13, 2.2973280364299732e-13, 5.5516593860105248e-13, -7.5097276461250609e-13),
        (-15.0, 1.0, 6.7662533905237834, 1.3399188960692613, 4.4350111348786793, -26.341814640792098),
        (-5.75, 5.66, 137605.91899522664, -160690.09331881568, -563834.96671967779, -189346.52482626343),
        (0.0, 8.0, 435.62314214160257, 7206.3447489041297, 13311.58997252232, -15274.898369529775),
        (20.0, 0.0, 1.6916728686705403e-27, 0.0, -7.586391625748355e-27, 0.0),
        (-4.0, -7.0, 579169.30472296426, 417318.40045032661, -1829549.9484960202, 818146.40934885768),
        (30.0, 10.0, 3.6184589532014123e-48, 2.9257065097289992e-47, 6.1689373304187978e-48, -1.6586943142347625e-46),
        (2.6, 2.6, -0.0061901270514851656, 0.032920011884886914, 0.034020675627051203, -0.055666197042434532),
    ];

    #[test]
    fn matches_high_precision_reference() {
        for &(x, y, ar, ai, dr, di) in REFERENCE {
            let p = airy(c(x, y)).unwrap();
            let e = rel(p.ai, c(ar, ai));
            let ed = rel(p.aip, c(dr, di));
            let tol = if c(x, y).arg().abs() > 2.0 * PI / 3.0 - 0.05 { 1e-10 } else { 1e-12 };
            assert!(e < tol, "Ai({x},{y}) rel err {e:e}");
            assert!(ed < tol, "Ai'({x},{y}) rel err {ed:e}");
        }
    }
}
