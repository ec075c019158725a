//! Limiting kernels: the interpolating Airy kernel in its real-integral and
//! double-contour forms, the Airy kernel, the transitional sine and Bessel
//! kernels, and the erfc edge density.

use crate::error::{Error, Result};
use crate::specfun::{
    airy, airy_ai_log, bessel_j, bessel_k, composite_gauss_legendre, erfc, gauss_legendre, LogComplex, LogSum,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    RealIntegral,
    DoubleContour,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HatKernelValue {
    pub value: LogComplex,
    pub representation: Representation,
}

pub const DEFAULT_DELTA: f64 = 0.5;

/// Panel layout for `∫₀^∞` integrands of Airy type.
const T_PANEL: f64 = 0.5;
const T_ORDER: usize = 16;
/// Stop once the integrand is this far (in log) below its running maximum.
const T_DROP: f64 = 40.0;

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Upper limit for `∫₀^T e^{tσ²} |Ai(w+t)|² dt` with `w` the slowest-decaying
/// argument: the log integrand must sit `T_DROP` below its peak, which lies
/// near `t = −Re w + σ⁴/4`.
pub fn halfline_cutoff(w: Complex64, sigma: f64) -> Result<f64> {
    let s2 = sigma * sigma;
    let log_f = |t: f64| -> Result<f64> { Ok(t * s2 + 2.0 * airy_ai_log(w + t)?.log_magnitude) };
    let start = (-w.re + s2 * s2 / 4.0).max(0.0);
    let mut peak = f64::NEG_INFINITY;
    let mut t = 0.0;
    loop {
        let v = log_f(t)?;
        peak = peak.max(v);
        if t >= start && v < peak - T_DROP {
            return Ok(t + T_PANEL);
        }
        t += T_PANEL;
    }
}

/// Gauss–Legendre nodes and weights on `[0, cutoff]` with panels of `T_PANEL`.
pub fn halfline_nodes(cutoff: f64) -> (Vec<f64>, Vec<f64>) {
    let panels = (cutoff / T_PANEL).ceil().max(1.0) as usize;
    composite_gauss_legendre(0.0, panels as f64 * T_PANEL, panels, T_ORDER)
}

/// `∫₀^∞ e^{tσ²} Ai(w1+t) Ai(w2+t) dt` in log form.
pub fn airy_product_integral(w1: Complex64, w2: Complex64, sigma: f64) -> Result<LogComplex> {
    let slow = if w1.re <= w2.re { w1 } else { w2 };
    let cutoff = halfline_cutoff(Complex64::new(slow.re, w1.im.abs().max(w2.im.abs())), sigma)?;
    let (t, w) = halfline_nodes(cutoff);
    let s2 = sigma * sigma;
    let mut acc = LogSum::new();
    for (&ti, &wi) in t.iter().zip(&w) {
        let a = airy_ai_log(w1 + ti)? * airy_ai_log(w2 + ti)?;
        acc.add(a.scale_exp(ti * s2 + wi.ln()));
    }
    Ok(acc.total())
}

/// Airy kernel `∫₀^∞ Ai(x1+t) Ai(x2+t) dt` via its closed form
/// `(Ai(x1)Ai'(x2) − Ai'(x1)Ai(x2))/(x1 − x2)`, diagonal `Ai'(x)² − x Ai(x)²`.
/// Near the diagonal, where the quotient cancels, the integral is used.
pub fn kernel_airy(x1: f64, x2: f64) -> Result<f64> {
    if !(x1.is_finite() && x2.is_finite()) {
        return Err(Error::domain("Airy kernel argument is not finite"));
    }
    if x1 == x2 {
        let a = airy(Complex64::new(x1, 0.0))?;
        return Ok(a.aip.re * a.aip.re - x1 * a.ai.re * a.ai.re);
    }
    if (x1 - x2).abs() < 1e-3 {
        return kernel_airy_integral(x1, x2);
    }
    let a = airy(Complex64::new(x1, 0.0))?;
    let b = airy(Complex64::new(x2, 0.0))?;
    Ok((a.ai.re * b.aip.re - a.aip.re * b.ai.re) / (x1 - x2))
}

/// The Airy kernel by direct quadrature of its integral.
pub fn kernel_airy_integral(x1: f64, x2: f64) -> Result<f64> {
    Ok(airy_product_integral(Complex64::new(x1, 0.0), Complex64::new(x2, 0.0), 0.0)?.to_complex().re)
}

/// The interpolating Airy kernel `𝒦^A_σ(ζ1, ζ2)` for `σ ≥ 0`, from
///
/// `e^{−(η1²+η2²)/2 + σ⁶/6 + σ²(ξ1+ξ2)/2 + iσ³(η1−η2)/2}/√π
///  ∫₀^∞ e^{tσ²} Ai(ξ1+iση1+σ⁴/4+t) Ai(ξ2−iση2+σ⁴/4+t) dt`,
///
/// which at σ = 0 is `e^{−(η1²+η2²)/2} 𝒦^Airy(ξ1, ξ2)/√π`.
pub fn kernel_airy_interp(z1: Complex64, z2: Complex64, sigma: f64) -> Result<LogComplex> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("σ must be finite and ≥ 0, got {sigma}")));
    }
    if !finite(z1) || !finite(z2) {
        return Err(Error::domain("kernel argument is not finite"));
    }
    let s2 = sigma * sigma;
    let shift = s2 * s2 / 4.0;
    let w1 = Complex64::new(z1.re + shift, sigma * z1.im);
    let w2 = Complex64::new(z2.re + shift, -sigma * z2.im);
    let integral = airy_product_integral(w1, w2, sigma)?;
    let pre = LogComplex::new(
        -(z1.im * z1.im + z2.im * z2.im) / 2.0 + s2 * s2 * s2 / 6.0 + s2 * (z1.re + z2.re) / 2.0 - 0.5 * PI.ln(),
        sigma * s2 * (z1.im - z2.im) / 2.0,
    );
    Ok(pre * integral)
}

/// The rescaled kernel `(1/σ) 𝒦^A_σ(ξ1 + iη1/σ, ξ2 + iη2/σ)` from the real integral.
pub fn kernel_airy_interp_real(z1: Complex64, z2: Complex64, sigma: f64) -> Result<HatKernelValue> {
    if !(sigma > 0.0) {
        return Err(Error::domain("the rescaled kernel needs σ > 0; at σ = 0 use kernel_airy_interp"));
    }
    let value = kernel_airy_interp(Complex64::new(z1.re, z1.im / sigma), Complex64::new(z2.re, z2.im / sigma), sigma)?
        .scale_exp(-sigma.ln());
    Ok(HatKernelValue { value, representation: Representation::RealIntegral })
}

/// Nodes and weights along `ℝ + iδ` for `∫ e^{−½(σx+c)² − δx² + i x³/3 + …}`:
/// truncated where the Gaussian envelope has dropped by `e^{−42}`, with panel
/// widths shrinking like the local frequency `x² + |ξ| + σ|c|`.
fn line_rule(sigma: f64, c: f64, xi: f64, delta: f64) -> (Vec<f64>, Vec<f64>) {
    let k = 0.5 * sigma * sigma + delta;
    let centre = -sigma * c / (sigma * sigma + 2.0 * delta);
    let half = (42.0 / k).sqrt();
    let (lo, hi) = (centre - half, centre + half);
    graded_panels(lo, hi, |a| {
        let x = a.abs().max(1.0);
        x * x + xi.abs() + sigma * c.abs() + sigma * sigma * x + 1.0
    })
}

/// `𝒦^A_σ(ζ1, ζ2)` as the double integral over `(ℝ+iδ)²` of
/// `e^{−½(σu+η1)² + iu³/3 + iξ1u − ½(σv−η2)² + iv³/3 + iξ2v} / (−4π^{5/2} i(u+v))`.
pub fn kernel_airy_interp_contour_unscaled(z1: Complex64, z2: Complex64, sigma: f64, delta: f64) -> Result<LogComplex> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain(format!("contour offset δ must be positive, got {delta}")));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("σ must be finite and ≥ 0, got {sigma}")));
    }
    if !finite(z1) || !finite(z2) {
        return Err(Error::domain("kernel argument is not finite"));
    }
    let i = Complex64::new(0.0, 1.0);
    let side = |c: f64, xi: f64| -> (Vec<Complex64>, Vec<Complex64>) {
        let (x, w) = line_rule(sigma, c, xi, delta);
        x.iter()
            .zip(&w)
            .map(|(&x, &w)| {
                let u = Complex64::new(x, delta);
                let s = sigma * u + c;
                let e = -0.5 * s * s + i * u * u * u / 3.0 + i * xi * u;
                (u, e.exp() * w)
            })
            .unzip()
    };
    let (u, fu) = side(z1.im, z1.re);
    let (v, fv) = side(-z2.im, z2.re);
    let mut total = Complex64::new(0.0, 0.0);
    for (&ui, &fi) in u.iter().zip(&fu) {
        let mut row = Complex64::new(0.0, 0.0);
        for (&vj, &gj) in v.iter().zip(&fv) {
            row += gj / (ui + vj);
        }
        total += fi * row;
    }
    // Im(u+v) = 2δ > 0 fixes the sign: 1/(−i(u+v)) = ∫₀^∞ e^{is(u+v)} ds
    let value = total / (-i * 4.0 * PI.powf(2.5));
    if !finite(value) {
        return Err(Error::numerical("double-contour quadrature overflowed"));
    }
    Ok(LogComplex::from_complex(value))
}

/// The rescaled kernel from the double-contour representation.
pub fn kernel_airy_interp_contour(z1: Complex64, z2: Complex64, sigma: f64, delta: f64) -> Result<HatKernelValue> {
    if !(sigma > 0.0) {
        return Err(Error::domain("the rescaled kernel needs σ > 0; at σ = 0 use kernel_airy_interp_contour_unscaled"));
    }
    let value = kernel_airy_interp_contour_unscaled(
        Complex64::new(z1.re, z1.im / sigma),
        Complex64::new(z2.re, z2.im / sigma),
        sigma,
        delta,
    )?
    .scale_exp(-sigma.ln());
    Ok(HatKernelValue { value, representation: Representation::DoubleContour })
}

/// The rescaled kernel from the double-contour form for every pair of
/// `points`, row-major (`out[i * len + j] = 𝒦̂(points[i], points[j])`).
///
/// All points share one node set on `ℝ + iδ`, so the Cauchy sums
/// `Σ_j g_q(v_j)/(u_i + v_j)` are formed once per point.
pub fn kernel_airy_interp_contour_matrix(points: &[Complex64], sigma: f64, delta: f64) -> Result<Vec<LogComplex>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("the rescaled kernel needs finite σ > 0, got {sigma}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain(format!("contour offset δ must be positive, got {delta}")));
    }
    if points.iter().any(|&z| !finite(z)) {
        return Err(Error::domain("kernel argument is not finite"));
    }
    let c_max = points.iter().map(|z| (z.im / sigma).abs()).fold(0.0, f64::max);
    let xi_max = points.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let (lo_a, _) = line_rule(sigma, c_max, xi_max, delta);
    let (hi_a, _) = line_rule(sigma, -c_max, xi_max, delta);
    let lo = lo_a.first().copied().unwrap_or(0.0).min(hi_a.first().copied().unwrap_or(0.0));
    let hi = lo_a.last().copied().unwrap_or(0.0).max(hi_a.last().copied().unwrap_or(0.0));
    let (x, w) = graded_panels(lo - 0.5, hi + 0.5, |a| {
        let x = a.abs().max(1.0);
        x * x + xi_max + sigma * c_max + sigma * sigma * x + 1.0
    });
    let i = Complex64::new(0.0, 1.0);
    let nodes: Vec<Complex64> = x.iter().map(|&x| Complex64::new(x, delta)).collect();
    let side = |c: f64, xi: f64| -> Vec<Complex64> {
        nodes
            .iter()
            .zip(&w)
            .map(|(&u, &w)| {
                let s = sigma * u + c;
                (-0.5 * s * s + i * u * u * u / 3.0 + i * xi * u).exp() * w
            })
            .collect()
    };
    let f: Vec<Vec<Complex64>> = points.iter().map(|z| side(z.im / sigma, z.re)).collect();
    let cauchy: Vec<Vec<Complex64>> = points
        .iter()
        .map(|z| {
            let g = side(-z.im / sigma, z.re);
            nodes.iter().map(|&u| nodes.iter().zip(&g).map(|(&v, &gj)| gj / (u + v)).sum()).collect()
        })
        .collect();
    let norm = -i * 4.0 * PI.powf(2.5) * sigma;
    let mut out = Vec::with_capacity(points.len() * points.len());
    for fp in &f {
        for hq in &cauchy {
            let v: Complex64 = fp.iter().zip(hq).map(|(a, b)| a * b).sum::<Complex64>() / norm;
            if !finite(v) {
                return Err(Error::numerical("double-contour quadrature overflowed"));
            }
            out.push(LogComplex::from_complex(v));
        }
    }
    Ok(out)
}

/// Gauss–Legendre panels on `[lo, hi]` whose widths keep `freq(x) · width ≤ 10`.
fn graded_panels(lo: f64, hi: f64, freq: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(24);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut a = lo;
    while a < hi {
        let b = (a + (10.0 / freq(a)).min(1.0)).min(hi);
        for (p, q) in gx.iter().zip(&gw) {
            nodes.push(0.5 * (a + b) + 0.5 * (b - a) * p);
            weights.push(0.5 * (b - a) * q);
        }
        a = b;
    }
    (nodes, weights)
}

/// Transitional sine kernel
/// `e^{−(η1²+η2²)/(2σ̂²)}/(σ̂π^{3/2}) ∫₀¹ e^{−t²σ̂²} cos(t(ζ1 − conj ζ2)) dt`.
pub fn kernel_sine_interp(z1: Complex64, z2: Complex64, sigma_hat: f64) -> Result<Complex64> {
    if !(sigma_hat > 0.0 && sigma_hat.is_finite()) {
        return Err(Error::domain(format!("σ̂ must be positive, got {sigma_hat}")));
    }
    let d = z1 - z2.conj();
    let (t, w) = composite_gauss_legendre(0.0, 1.0, 1, 48);
    let s2 = sigma_hat * sigma_hat;
    let integral: Complex64 = t.iter().zip(&w).map(|(&t, &w)| (d * t).cos() * (w * (-t * t * s2).exp())).sum();
    let pre = (-(z1.im * z1.im + z2.im * z2.im) / (2.0 * s2)).exp() / (sigma_hat * PI.powf(1.5));
    Ok(integral * pre)
}

/// Sine kernel `sin(π(x1−x2))/(π(x1−x2))`.
pub fn kernel_sine(x1: f64, x2: f64) -> f64 {
    let d = PI * (x1 - x2);
    if d.abs() < 1e-8 {
        1.0 - d * d / 6.0
    } else {
        d.sin() / d
    }
}

/// Transitional Bessel kernel
///
/// `|ζ1ζ2|^{ν+1}/(2πσ̂² (ζ1 conj ζ2)^ν) √(K_ν(|ζ1|²/4σ̂²) K_ν(|ζ2|²/4σ̂²))
///  e^{(Re ζ1² + Re ζ2²)/(8σ̂²)} ∫₀¹ t e^{−2t²σ̂²} J_ν(tζ1) J_ν(t conj ζ2) dt`.
pub fn kernel_bessel_interp(z1: Complex64, z2: Complex64, sigma_hat: f64, nu: u32) -> Result<Complex64> {
    if !(sigma_hat > 0.0 && sigma_hat.is_finite()) {
        return Err(Error::domain(format!("σ̂ must be positive, got {sigma_hat}")));
    }
    if z1.norm() == 0.0 || z2.norm() == 0.0 {
        return Err(Error::domain("transitional Bessel kernel is singular at ζ = 0"));
    }
    let s2 = sigma_hat * sigma_hat;
    let k1 = bessel_k(nu, z1.norm_sqr() / (4.0 * s2))?;
    let k2 = bessel_k(nu, z2.norm_sqr() / (4.0 * s2))?;
    let nuf = nu as f64;
    let log_mag =
        (nuf + 1.0) * (z1.norm() * z2.norm()).ln() - nuf * (z1.norm() * z2.norm()).ln() - (2.0 * PI * s2).ln()
            + 0.5 * (k1.log_magnitude + k2.log_magnitude)
            + ((z1 * z1).re + (z2 * z2).re) / (8.0 * s2);
    let phase = -nuf * (z1.arg() - z2.arg());
    let (t, w) = composite_gauss_legendre(0.0, 1.0, 2, 32);
    let integral: Complex64 = t
        .iter()
        .zip(&w)
        .map(|(&t, &w)| bessel_j(nu, z1 * t) * bessel_j(nu, z2.conj() * t) * (w * t * (-2.0 * t * t * s2).exp()))
        .sum();
    Ok(LogComplex::new(log_mag, phase).to_complex() * integral)
}

fn bessel_j_real(nu: i64, x: f64) -> f64 {
    let v = bessel_j(nu.unsigned_abs() as u32, Complex64::new(x, 0.0)).re;
    if nu < 0 && nu % 2 != 0 {
        -v
    } else {
        v
    }
}

/// Hard-edge Bessel kernel
/// `√(x1x2) (x1 J_{ν+1}(x1) J_ν(x2) − x2 J_{ν+1}(x2) J_ν(x1))/(x1² − x2²)`,
/// with diagonal `(x/2)(J_ν(x)² − J_{ν−1}(x) J_{ν+1}(x))`.
pub fn kernel_bessel(nu: u32, x1: f64, x2: f64) -> f64 {
    let n = nu as i64;
    if (x1 - x2).abs() < 1e-4 * x1.abs().max(x2.abs()).max(1e-300) {
        let x = 0.5 * (x1 + x2);
        let j = bessel_j_real(n, x);
        let diag = 0.5 * x * (j * j - bessel_j_real(n - 1, x) * bessel_j_real(n + 1, x));
        // first-order correction in x1 − x2 vanishes by symmetry
        return diag;
    }
    let num =
        x1 * bessel_j_real(n + 1, x1) * bessel_j_real(n, x2) - x2 * bessel_j_real(n + 1, x2) * bessel_j_real(n, x1);
    (x1 * x2).abs().sqrt() * num / (x1 * x1 - x2 * x2)
}

/// `erfc(ξ)/(2π(1+τ))`.
pub fn density_erfc(xi: f64, tau: f64) -> f64 {
    erfc(xi) / (2.0 * PI * (1.0 + tau))
}

/// `σ² 𝒦̂_σ(σζ, σζ)`, real by Hermiticity.
pub fn density_interp_large_sigma(zeta: Complex64, sigma: f64) -> Result<f64> {
    if !(sigma >= 2.0) {
        return Err(Error::domain(format!("large-σ density needs σ ≥ 2, got {sigma}")));
    }
    let z = zeta * sigma;
    let k = kernel_airy_interp_real(z, z, sigma)?.value;
    Ok(k.scale_exp(2.0 * sigma.ln()).to_complex().re)
}
