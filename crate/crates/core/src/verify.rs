//! Self-check suites: orthogonality of the Laguerre family, contour vs sum
//! forms of the finite kernel, and real-integral vs double-contour forms of
//! the interpolating Airy kernel.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ensemble::trial_rng;
use crate::exec::{try_map_indexed, Execution};
use crate::kernels_finite::{
    default_contour_rules, kernel_contour, kernel_finite, orthogonality_sweep, OrthoQuadrature, WeightParams,
};
use crate::kernels_limit::{kernel_airy_interp_contour_matrix, kernel_airy_interp_real, DEFAULT_DELTA};
use crate::specfun::LogComplex;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(label: impl Into<String>, value: f64, tolerance: f64) -> Check {
        Check { label: label.into(), value, tolerance, pass: value <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn worst(&self) -> Option<&Check> {
        self.checks.iter().max_by(|a, b| (a.value / a.tolerance).total_cmp(&(b.value / b.tolerance)))
    }
}

/// Relative distance between two log-represented values.
pub fn relative_error(a: LogComplex, b: LogComplex) -> f64 {
    let scale = a.log_magnitude.max(b.log_magnitude);
    if scale == f64::NEG_INFINITY {
        return 0.0;
    }
    let d = (a.scale_exp(-scale).to_complex() - b.scale_exp(-scale).to_complex()).norm();
    let m = a.scale_exp(-scale).to_complex().norm().max(b.scale_exp(-scale).to_complex().norm());
    d / m
}

/// Gram matrix of the Laguerre family at `(a, b)` against the closed-form
/// norms, one check per ν, plus the `⟨L_0, L_0⟩ = 2π/3` spot value at
/// `(a, b, ν) = (2, 1, 0)`.
pub fn orthogonality_suite(
    jk_max: usize,
    nu_max: u32,
    a: f64,
    b: f64,
    tolerance: f64,
    exec: Execution,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let quad = OrthoQuadrature::default();
    let sweeps = try_map_indexed(exec, nu_max as usize + 1, |nu| orthogonality_sweep(jk_max, nu as u32, a, b, &quad))?;
    let mut checks = Vec::new();
    for (nu, sweep) in sweeps.iter().enumerate() {
        let worst = sweep.iter().map(|r| r.residual).fold(0.0, f64::max);
        checks.push(Check::at_most(format!("nu={nu} j,k<={jk_max} max residual"), worst, tolerance));
    }
    if a == 2.0 && b == 1.0 {
        let l00 = sweeps[0][0].numeric_inner_product;
        let err = (l00 - Complex64::new(2.0 * PI / 3.0, 0.0)).norm() / (2.0 * PI / 3.0);
        checks.push(Check::at_most("<L0,L0> = 2pi/3 at nu=0", err, tolerance));
    }
    Ok(SuiteReport { suite: "orthogonality".into(), checks, seconds: start.elapsed().as_secs_f64() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourCheckConfig {
    pub pairs: usize,
    pub points: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for ContourCheckConfig {
    fn default() -> Self {
        ContourCheckConfig { pairs: 10, points: 384, seed: 20_240_601, tolerance: 1e-8 }
    }
}

/// Argument pairs in the edge window `1 + τ + √((1−τ)/(2n)) (u1 + i u2)`,
/// `u ∈ [−2, 2]²`, drawn from a seeded stream.
pub fn edge_pairs(n: usize, tau: f64, count: usize, seed: u64, stream: u64) -> Vec<(Complex64, Complex64)> {
    let mut rng = trial_rng(seed, stream);
    let s = ((1.0 - tau) / (2.0 * n as f64)).sqrt();
    let mut draw = || {
        let u1: f64 = rng.random_range(-2.0..=2.0);
        let u2: f64 = rng.random_range(-2.0..=2.0);
        Complex64::new(1.0 + tau + s * u1, s * u2)
    };
    (0..count).map(|_| (draw(), draw())).collect()
}

/// Contour form against the Laguerre sum, one check per `(n, ν, τ)`.
pub fn contour_suite(
    ns: &[usize],
    nu_max: u32,
    taus: &[f64],
    cfg: &ContourCheckConfig,
    exec: Execution,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut settings = Vec::new();
    for &n in ns {
        for nu in 0..=nu_max {
            for &tau in taus {
                settings.push((n, nu, tau));
            }
        }
    }
    let worst = try_map_indexed(exec, settings.len(), |i| {
        let (n, nu, tau) = settings[i];
        let wp = WeightParams::new(n, nu, tau)?;
        let (r1, r2) = default_contour_rules(tau, cfg.points)?;
        let mut worst = 0.0f64;
        for (z1, z2) in edge_pairs(n, tau, cfg.pairs, cfg.seed, i as u64) {
            let exact = kernel_finite(z1, z2, &wp)?;
            let contour = kernel_contour(z1, z2, &wp, &r1, &r2)?;
            worst = worst.max(relative_error(exact, contour));
        }
        Ok(worst)
    })?;
    let checks = settings
        .iter()
        .zip(worst)
        .map(|(&(n, nu, tau), w)| Check::at_most(format!("n={n} nu={nu} tau={tau}"), w, cfg.tolerance))
        .collect();
    Ok(SuiteReport { suite: "contour".into(), checks, seconds: start.elapsed().as_secs_f64() })
}

/// Points `ξ + iη` with `ξ, η` on `side` equispaced values in `[−half, half]`.
pub fn square_grid(side: usize, half: f64) -> Vec<Complex64> {
    let step = if side > 1 { 2.0 * half / (side - 1) as f64 } else { 0.0 };
    let axis: Vec<f64> = (0..side).map(|k| -half + step * k as f64).collect();
    axis.iter().flat_map(|&x| axis.iter().map(move |&y| Complex64::new(x, y))).collect()
}

/// Real-integral against double-contour form of the rescaled interpolating
/// kernel over all pairs of `grid`, one check per σ. Off-diagonal errors are
/// measured against `√(𝒦̂(ζ1,ζ1) 𝒦̂(ζ2,ζ2))`, which bounds `|𝒦̂(ζ1,ζ2)|`.
pub fn representation_suite(
    sigmas: &[f64],
    grid: &[Complex64],
    tolerance: f64,
    exec: Execution,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let p = grid.len();
    let worst = try_map_indexed(exec, sigmas.len(), |s| {
        let sigma = sigmas[s];
        let contour = kernel_airy_interp_contour_matrix(grid, sigma, DEFAULT_DELTA)?;
        let mut real = Vec::with_capacity(p * p);
        for &a in grid {
            for &b in grid {
                real.push(kernel_airy_interp_real(a, b, sigma)?.value);
            }
        }
        let diag: Vec<f64> = (0..p).map(|i| real[i * p + i].log_magnitude).collect();
        let mut worst = 0.0f64;
        for i in 0..p {
            for j in 0..p {
                let scale = 0.5 * (diag[i] + diag[j]);
                let d =
                    real[i * p + j].scale_exp(-scale).to_complex() - contour[i * p + j].scale_exp(-scale).to_complex();
                if !d.norm().is_finite() {
                    return Err(Error::numerical(format!("non-finite kernel comparison at σ = {sigma}")));
                }
                worst = worst.max(d.norm());
            }
        }
        Ok(worst)
    })?;
    let checks = sigmas
        .iter()
        .zip(worst)
        .map(|(&s, w)| Check::at_most(format!("sigma={s} {p}x{p} pairs"), w, tolerance))
        .collect();
    Ok(SuiteReport { suite: "representation".into(), checks, seconds: start.elapsed().as_secs_f64() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = square_grid(5, 2.0);
        assert_eq!(g.len(), 25);
        assert_eq!(g[0], Complex64::new(-2.0, -2.0));
        assert_eq!(g[24], Complex64::new(2.0, 2.0));
    }

    #[test]
    fn edge_pairs_are_seeded() {
        assert_eq!(edge_pairs(10, 0.5, 3, 7, 1), edge_pairs(10, 0.5, 3, 7, 1));
        assert_ne!(edge_pairs(10, 0.5, 3, 7, 1), edge_pairs(10, 0.5, 3, 7, 2));
    }

    #[test]
    fn small_suites_pass() {
        let r = contour_suite(&[5], 1, &[0.5], &ContourCheckConfig::default(), Execution::Serial).unwrap();
        assert!(r.pass(), "{r:?}");
        let r = representation_suite(&[1.0], &square_grid(2, 1.0), 1e-6, Execution::Serial).unwrap();
        assert!(r.pass(), "{r:?}");
    }
}
