//! The finite-n correlation kernel in its Laguerre-sum and double-contour
//! forms, the weight function, the edge density, and a numerical check of
//! the planar Laguerre orthogonality.

use crate::error::{Error, Result};
use crate::specfun::{
    bessel_k, composite_gauss_legendre, laguerre_sequence_log, make_rule, Geometry, LogComplex, LogSum, QuadratureRule,
    RuleKind,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub n: usize,
    pub nu: u32,
    pub tau: f64,
}

impl WeightParams {
    pub fn new(n: usize, nu: u32, tau: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be at least 1"));
        }
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::domain(format!("weight needs τ in (0, 1), got {tau}")));
        }
        Ok(WeightParams { n, nu, tau })
    }

    pub fn a(&self) -> f64 {
        2.0 * self.n as f64 / (1.0 - self.tau * self.tau)
    }

    pub fn b(&self) -> f64 {
        2.0 * self.tau * self.n as f64 / (1.0 - self.tau * self.tau)
    }

    pub fn c(&self) -> f64 {
        self.n as f64 / self.tau
    }
}

/// `ln(k!/(k+ν)!)`.
fn log_factorial_ratio(k: usize, nu: u32) -> f64 {
    -(1..=nu as usize).map(|i| ((k + i) as f64).ln()).sum::<f64>()
}

/// `w(s) = |s|^{ν+1} exp(2τn Re s/(1−τ²)) K_ν(2n|s|/(1−τ²))`, real and positive.
pub fn weight_log(s: Complex64, wp: &WeightParams) -> Result<LogComplex> {
    let r = s.norm();
    if r == 0.0 {
        return Err(Error::domain("weight is singular at s = 0"));
    }
    let one_m = 1.0 - wp.tau * wp.tau;
    let n = wp.n as f64;
    let k = bessel_k(wp.nu, 2.0 * n * r / one_m)?;
    Ok(LogComplex::new((wp.nu as f64 + 1.0) * r.ln() + 2.0 * wp.tau * n * s.re / one_m + k.log_magnitude, 0.0))
}

/// `ln(8 n^{2+ν} / (π(1−τ²))) + ½ ln w(ζ1²) + ½ ln w(ζ2²)`.
fn kernel_prefactor(z1: Complex64, z2: Complex64, wp: &WeightParams) -> Result<f64> {
    let n = wp.n as f64;
    let w1 = weight_log(z1 * z1, wp)?;
    let w2 = weight_log(z2 * z2, wp)?;
    Ok(8f64.ln() + (2.0 + wp.nu as f64) * n.ln() - PI.ln() - (1.0 - wp.tau * wp.tau).ln()
        + 0.5 * (w1.log_magnitude + w2.log_magnitude))
}

fn check_arguments(z1: Complex64, z2: Complex64) -> Result<bool> {
    for z in [z1, z2] {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::domain("kernel argument is not finite"));
        }
        if z.norm() == 0.0 {
            return Err(Error::domain("kernel is singular at ζ = 0"));
        }
    }
    Ok(z1.re > 0.0 && z2.re > 0.0)
}

/// `Σ_{k<n} τ^{2k} k!/(k+ν)! L_k^ν(x1) L_k^ν(x2)` in log form.
pub fn laguerre_sum(n: usize, nu: u32, tau: f64, x1: Complex64, x2: Complex64) -> LogComplex {
    let l1 = laguerre_sequence_log(n, nu, x1);
    let l2 = laguerre_sequence_log(n, nu, x2);
    let lt = tau.ln();
    let mut acc = LogSum::new();
    for k in 0..n {
        let coef = 2.0 * k as f64 * lt + log_factorial_ratio(k, nu);
        acc.add((l1[k] * l2[k]).scale_exp(coef));
    }
    acc.total()
}

/// The finite-n kernel; exactly zero unless both arguments lie in Re ζ > 0.
pub fn kernel_finite(z1: Complex64, z2: Complex64, wp: &WeightParams) -> Result<LogComplex> {
    if !check_arguments(z1, z2)? {
        return Ok(LogComplex::ZERO);
    }
    let c = wp.c();
    let sum = laguerre_sum(wp.n, wp.nu, wp.tau, z1 * z1 * c, z2.conj() * z2.conj() * c);
    Ok(sum.scale_exp(kernel_prefactor(z1, z2, wp)?))
}

/// Circle rules for the contour form: γ1 of radius `r1 < 1` and γ2 of
/// radius `max(1.25, 1.25 r1/τ²)`, so γ2 encloses v = 1 and the pole
/// v = u/τ² for every u on γ1.
pub fn default_contour_rules(tau: f64, points: usize) -> Result<(QuadratureRule, QuadratureRule)> {
    let r1 = 0.5;
    let r2 = (1.25f64).max(1.25 * r1 / (tau * tau));
    let origin = Complex64::new(0.0, 0.0);
    Ok((
        make_rule(RuleKind::CircleTrapezoid, points, Geometry::Circle { center: origin, radius: r1 })?,
        make_rule(RuleKind::CircleTrapezoid, points, Geometry::Circle { center: origin, radius: r2 })?,
    ))
}

/// The Laguerre sum as a double contour integral,
///
/// `τ^{2n} e^{x2} / (4π² x1^ν) ∮∮ (v(u−1)/((v−1)u))^ν (v/u)^n
///  e^{x1 u/(u−1) − x2 v/(v−1)} / ((τ²v − u)(v−1)(u−1)) du dv`,
///
/// with `x1 = nζ1²/τ`, `x2 = n conj(ζ2)²/τ`; u runs over `rule1`, v over `rule2`.
pub fn kernel_contour(
    z1: Complex64,
    z2: Complex64,
    wp: &WeightParams,
    rule1: &QuadratureRule,
    rule2: &QuadratureRule,
) -> Result<LogComplex> {
    if !check_arguments(z1, z2)? {
        return Ok(LogComplex::ZERO);
    }
    let t2 = wp.tau * wp.tau;
    let u_max = rule1.nodes.iter().map(|u| u.norm()).fold(0.0, f64::max);
    let v_min = rule2.nodes.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if rule1.is_empty() || rule2.is_empty() || !(u_max < 1.0) || !(v_min > 1.0) || !(t2 * v_min > u_max) {
        return Err(Error::config(format!(
            "contours must satisfy |u| < 1 < |v| and τ²|v| > |u| (got max|u| = {u_max}, min|v| = {v_min}, τ = {})",
            wp.tau
        )));
    }
    let n = wp.n as f64;
    let nu = wp.nu as f64;
    let c = wp.c();
    let x1 = z1 * z1 * c;
    let x2 = z2.conj() * z2.conj() * c;
    let one = Complex64::new(1.0, 0.0);
    let mut acc = LogSum::new();
    // u-dependent pieces once per node
    let upart: Vec<(Complex64, Complex64, Complex64)> = rule1
        .nodes
        .iter()
        .zip(&rule1.weights)
        .map(|(&u, &du)| {
            let log_u = (u - one).ln() - u.ln();
            let e = nu * log_u - n * u.ln() + x1 * u / (u - one) - (u - one).ln() + du.ln();
            (u, log_u, e)
        })
        .collect();
    for (&v, &dv) in rule2.nodes.iter().zip(&rule2.weights) {
        let log_v = v.ln() - (v - one).ln();
        let ev = nu * log_v + n * v.ln() - x2 * v / (v - one) - (v - one).ln() + dv.ln();
        for &(u, _, eu) in &upart {
            acc.add(LogComplex::exp(ev + eu - (v * t2 - u).ln()));
        }
    }
    let pre = LogComplex::exp(x2 - nu * x1.ln()).scale_exp(2.0 * n * wp.tau.ln() - (4.0 * PI * PI).ln());
    let sum = acc.total() * pre;
    Ok(sum.scale_exp(kernel_prefactor(z1, z2, wp)?))
}

/// Rescaled edge density `((1−τ)/(2n)) K_n(z, z)` at `z = (1+τ) + √((1−τ)/(2n)) ζ`.
pub fn density_finite(zeta: Complex64, wp: &WeightParams) -> Result<f64> {
    let n = wp.n as f64;
    let z = Complex64::new(1.0 + wp.tau, 0.0) + zeta * ((1.0 - wp.tau) / (2.0 * n)).sqrt();
    let k = kernel_finite(z, z, wp)?;
    Ok(((1.0 - wp.tau) / (2.0 * n)) * k.to_complex().re)
}

/// `h_j^ν = π(j+ν)!/(a j!) (a/b)^{2j} (2a/(a²−b²))^{ν+1}`.
pub fn orthogonality_norm(j: usize, nu: u32, a: f64, b: f64) -> f64 {
    let log = PI.ln() - log_factorial_ratio(j, nu) - a.ln()
        + 2.0 * j as f64 * (a / b).ln()
        + (nu as f64 + 1.0) * (2.0 * a / (a * a - b * b)).ln();
    log.exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub j: usize,
    pub k: usize,
    pub nu: u32,
    pub numeric_inner_product: Complex64,
    pub exact_norm: f64,
    pub residual: f64,
}

/// Polar quadrature for the planar inner product: Gauss–Legendre panels in
/// r (graded towards 0, where `K_ν` is singular) and the trapezoid rule in θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthoQuadrature {
    pub radial_order: usize,
    /// Uniform panels per unit of decay length `1/(a−b)`.
    pub panels_per_decay: f64,
    /// Extra angular points on top of the resolution the integrand needs.
    pub angular_extra: usize,
    /// Largest admissible change between the rule and its refinement, relative to h.
    pub tolerance: f64,
}

impl Default for OrthoQuadrature {
    fn default() -> Self {
        OrthoQuadrature { radial_order: 16, panels_per_decay: 0.5, angular_extra: 32, tolerance: 1e-8 }
    }
}

/// Radius beyond which `(c r)^{2J}/J!² r^{ν+1} e^{−(a−b) r}` falls below `1e-18 h_0`.
fn radial_cutoff(jmax: usize, nu: u32, a: f64, b: f64) -> f64 {
    let c = (a * a - b * b) / (2.0 * b);
    let target = (1e-18 * orthogonality_norm(0, nu, a, b)).ln();
    let lf: f64 = (1..=jmax).map(|i| (i as f64).ln()).sum();
    let bound = |r: f64| {
        2.0 * jmax as f64 * (c * r).max(1.0).ln() - 2.0 * lf
            + (nu as f64 + 1.0) * r.ln()
            + 0.5 * (PI / (2.0 * a * r)).ln()
            - (a - b) * r
            + (2.0 * PI).ln()
    };
    let mut r = (2.0 * jmax as f64 + nu as f64 + 1.0) / (a - b) + 1.0;
    while bound(r) > target {
        r *= 1.1;
    }
    r
}

fn gram_matrix(jmax: usize, nu: u32, a: f64, b: f64, q: &OrthoQuadrature, refine: usize) -> Result<Vec<Complex64>> {
    let c = (a * a - b * b) / (2.0 * b);
    let r_cut = radial_cutoff(jmax, nu, a, b);
    let decay = 1.0 / (a - b);
    let mut breaks = vec![0.0];
    let first = decay.min(1.0);
    for k in (0..30).rev() {
        breaks.push(first * 0.5f64.powi(k));
    }
    let width = decay / (q.panels_per_decay * refine as f64);
    let mut r = first;
    while r < r_cut {
        r = (r + width).min(r_cut);
        breaks.push(r);
    }
    let mut radial = Vec::new();
    for w in breaks.windows(2) {
        let (x, wt) = composite_gauss_legendre(w[0], w[1], 1, q.radial_order);
        radial.extend(x.into_iter().zip(wt));
    }
    // e^{b r cos θ} needs about b r + O(√(b r)) Fourier modes
    let modes = b * r_cut + 10.0 * (b * r_cut).sqrt() + (2 * jmax) as f64;
    let m_theta = (modes.ceil() as usize + q.angular_extra) * refine;
    let dim = jmax + 1;
    let mut gram = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut lags = vec![Complex64::new(0.0, 0.0); dim];
    let dtheta = 2.0 * PI / m_theta as f64;
    for &(r, wr) in &radial {
        let radial_log = nu as f64 * r.ln() + bessel_k(nu, a * r)?.log_magnitude + r.ln() + wr.ln() + dtheta.ln();
        for t in 0..m_theta {
            let theta = t as f64 * dtheta;
            let w = (radial_log + b * r * theta.cos()).exp();
            if w == 0.0 {
                continue;
            }
            let x = Complex64::from_polar(c * r, theta);
            let (mut p0, mut p1) = (Complex64::new(1.0, 0.0), Complex64::new(1.0 + nu as f64, 0.0) - x);
            lags[0] = p0;
            if dim > 1 {
                lags[1] = p1;
            }
            for k in 1..jmax {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0 + nu as f64 - x) * p1 - (kf + nu as f64) * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
                lags[k + 1] = p2;
            }
            for j in 0..dim {
                let lj = lags[j] * w;
                for k in 0..dim {
                    gram[j * dim + k] += lj * lags[k].conj();
                }
            }
        }
    }
    Ok(gram)
}

/// `⟨L_j^ν, L_k^ν⟩` for all `j, k ≤ jmax` against the exact `h_j^ν δ_jk`.
///
/// The quadrature is repeated with the mesh halved; if the two disagree by
/// more than the tolerance (relative to h) the result is rejected.
pub fn orthogonality_sweep(
    jmax: usize,
    nu: u32,
    a: f64,
    b: f64,
    quad: &OrthoQuadrature,
) -> Result<Vec<OrthogonalityReport>> {
    if !(a > b && b > 0.0) {
        return Err(Error::domain(format!("orthogonality needs a > b > 0, got a = {a}, b = {b}")));
    }
    let dim = jmax + 1;
    let coarse = gram_matrix(jmax, nu, a, b, quad, 1)?;
    let fine = gram_matrix(jmax, nu, a, b, quad, 2)?;
    let mut out = Vec::with_capacity(dim * dim);
    for j in 0..dim {
        for k in 0..dim {
            let hj = orthogonality_norm(j, nu, a, b);
            let hk = orthogonality_norm(k, nu, a, b);
            let scale = hj.max(hk);
            let change = (fine[j * dim + k] - coarse[j * dim + k]).norm() / scale;
            if change > quad.tolerance {
                return Err(Error::numerical(format!(
                    "orthogonality quadrature not converged at (j, k, ν) = ({j}, {k}, {nu}): refinement changed the value by {change:e} of h"
                )));
            }
            let exact = if j == k { hj } else { 0.0 };
            let numeric = fine[j * dim + k];
            out.push(OrthogonalityReport {
                j,
                k,
                nu,
                numeric_inner_product: numeric,
                exact_norm: hj,
                residual: (numeric - exact).norm() / scale,
            });
        }
    }
    Ok(out)
}

pub fn verify_orthogonality(
    j: usize,
    k: usize,
    nu: u32,
    a: f64,
    b: f64,
    quad: &OrthoQuadrature,
) -> Result<OrthogonalityReport> {
    let jmax = j.max(k);
    let all = orthogonality_sweep(jmax, nu, a, b, quad)?;
    Ok(all[j * (jmax + 1) + k])
}
