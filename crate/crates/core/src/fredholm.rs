//! Last-particle distributions as Fredholm determinants.
//!
//! On nodes `ζ_i = ξ_i + iη_i` the interpolating Airy kernel factorises as
//! `𝒦(ζ_i, ζ_j) = Σ_q B_iq conj(B_jq)` with
//! `B_iq = pref_i √(w_q e^{t_q σ²}) Ai(ξ_i + iση_i + σ⁴/4 + t_q)`, since
//! `Ai(conj z) = conj Ai(z)`. The Nyström matrix `√(W_i W_j) 𝒦(ζ_i, ζ_j)` is
//! therefore assembled from `N × Q` Airy values and is Hermitian positive
//! semidefinite by construction.

use crate::error::{Error, Result};
use crate::exec::{try_map_indexed, Execution};
use crate::kernels_limit::{halfline_cutoff, halfline_nodes, kernel_airy};
use crate::linalg::{determinant, Matrix};
use crate::specfun::{airy_ai_log, composite_gauss_legendre, LogComplex};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FredholmConfig {
    pub m_xi: usize,
    pub m_eta: usize,
    /// ξ runs over `[t, t + l]`.
    pub l: f64,
    /// η runs over `[−h, h]`; `None` means `4√(1+σ²)`.
    pub h: Option<f64>,
}

impl Default for FredholmConfig {
    fn default() -> Self {
        FredholmConfig { m_xi: 32, m_eta: 16, l: 12.0, h: None }
    }
}

impl FredholmConfig {
    pub fn eta_cutoff(&self, sigma: f64) -> f64 {
        self.h.unwrap_or(4.0 * (1.0 + sigma * sigma).sqrt())
    }

    pub fn validate(&self, sigma: f64) -> Result<()> {
        if self.m_xi < 4 || self.m_eta < 4 {
            return Err(Error::config("m_xi and m_eta must be at least 4"));
        }
        if !(self.l >= 8.0) {
            return Err(Error::config(format!("L must be at least 8, got {}", self.l)));
        }
        let need = 4.0 * (1.0 + sigma * sigma).sqrt();
        let h = self.eta_cutoff(sigma);
        if !(h >= need - 1e-12) {
            return Err(Error::config(format!("H must be at least 4√(1+σ²) = {need}, got {h}")));
        }
        Ok(())
    }
}

/// The Nyström matrix `√(W_i W_j) 𝒦^A_σ(ζ_i, ζ_j)` on `[t, t+L] × [−H, H]`.
pub fn nystrom_matrix(sigma: f64, t: f64, cfg: &FredholmConfig) -> Result<Matrix> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("σ must be finite and ≥ 0, got {sigma}")));
    }
    if !t.is_finite() {
        return Err(Error::domain("t must be finite"));
    }
    cfg.validate(sigma)?;
    let h = cfg.eta_cutoff(sigma);
    let (xs, wx) = composite_gauss_legendre(t, t + cfg.l, 1, cfg.m_xi);
    let (es, we) = composite_gauss_legendre(-h, h, 1, cfg.m_eta);
    let s2 = sigma * sigma;
    let shift = s2 * s2 / 4.0;
    let cutoff = halfline_cutoff(Complex64::new(t + shift, sigma * h), sigma)?;
    let (tq, wq) = halfline_nodes(cutoff);
    let q = tq.len();
    let n = xs.len() * es.len();
    let mut b = Matrix::zeros(n, q);
    let mut row = 0;
    for (&x, &wxi) in xs.iter().zip(&wx) {
        for (&e, &wei) in es.iter().zip(&we) {
            let pre = LogComplex::new(
                0.5 * (wxi * wei).ln() - 0.5 * e * e + s2 * s2 * s2 / 12.0 + 0.5 * s2 * x - 0.25 * PI.ln(),
                0.5 * sigma * s2 * e,
            );
            let z = Complex64::new(x + shift, sigma * e);
            for (k, (&tk, &wk)) in tq.iter().zip(&wq).enumerate() {
                let v = pre * airy_ai_log(z + tk)?;
                b.data[row * q + k] = v.scale_exp(0.5 * (wk.ln() + tk * s2)).to_complex();
            }
            row += 1;
        }
    }
    let mut m = b.matmul(&b.adjoint());
    // enforce exact Hermiticity against rounding in the product
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (m.get(i, j) + m.get(j, i).conj());
            m.set(i, j, avg);
            m.set(j, i, avg.conj());
        }
        let d = m.get(i, i).re;
        m.set(i, i, Complex64::new(d, 0.0));
    }
    Ok(m)
}

/// `F_σ(t) = det(I − K)` on the Nyström discretisation.
pub fn last_particle_cdf(sigma: f64, t: f64, cfg: &FredholmConfig) -> Result<f64> {
    let mut a = nystrom_matrix(sigma, t, cfg)?;
    for v in a.data.iter_mut() {
        *v = -*v;
    }
    for i in 0..a.rows {
        let d = a.get(i, i) + 1.0;
        a.set(i, i, d);
    }
    let det = determinant(a)?;
    if det.im.abs() > 1e-10 {
        return Err(Error::numerical(format!("det(I − K) has imaginary part {:e}", det.im)));
    }
    if !(-1e-6..=1.0 + 1e-6).contains(&det.re) {
        return Err(Error::numerical(format!(
            "det(I − K) = {} at σ = {sigma}, t = {t} lies outside [0, 1]; refine m_xi, m_eta or enlarge L, H",
            det.re
        )));
    }
    Ok(det.re)
}

/// `det(I − K_Airy)` on `L²(t, t+L)` with `m` Gauss–Legendre nodes.
pub fn airy_determinant_1d(t: f64, m: usize, l: f64) -> Result<f64> {
    let (x, w) = composite_gauss_legendre(t, t + l, 1, m);
    let mut a = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let k = (w[i] * w[j]).sqrt() * kernel_airy(x[i], x[j])?;
            let v = if i == j { 1.0 - k } else { -k };
            a.set(i, j, Complex64::new(v, 0.0));
            a.set(j, i, Complex64::new(v, 0.0));
        }
    }
    Ok(determinant(a)?.re)
}

/// Gumbel distribution `e^{−e^{−t}}`.
pub fn gumbel_cdf(t: f64) -> f64 {
    (-(-t).exp()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfRow {
    pub t: f64,
    pub f: f64,
    /// Change against a coarser mesh (`m_xi`, `m_eta` scaled by 2/3), when requested.
    pub error_estimate: Option<f64>,
}

fn coarse(cfg: &FredholmConfig) -> FredholmConfig {
    FredholmConfig { m_xi: (cfg.m_xi * 2 / 3).max(4), m_eta: (cfg.m_eta * 2 / 3).max(4), ..*cfg }
}

/// `F_σ` on a sorted grid. Values may decrease by at most `1e-4` between
/// neighbours; larger violations mean the discretisation is too coarse.
pub fn cdf_table(
    sigma: f64,
    t_grid: &[f64],
    cfg: &FredholmConfig,
    estimate_error: bool,
    exec: Execution,
) -> Result<Vec<CdfRow>> {
    if t_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::domain("t grid must be sorted ascending"));
    }
    cfg.validate(sigma)?;
    let rows = try_map_indexed(exec, t_grid.len(), |i| {
        let t = t_grid[i];
        let f = last_particle_cdf(sigma, t, cfg)?;
        let error_estimate =
            if estimate_error { Some((f - last_particle_cdf(sigma, t, &coarse(cfg))?).abs()) } else { None };
        Ok(CdfRow { t, f, error_estimate })
    })?;
    for w in rows.windows(2) {
        if w[1].f < w[0].f - 1e-4 {
            return Err(Error::numerical(format!(
                "F decreases from {} at t = {} to {} at t = {}; refine the mesh",
                w[0].f, w[0].t, w[1].f, w[1].t
            )));
        }
    }
    Ok(rows)
}

/// Mean of a distribution on `[a, b]` from its CDF:
/// `∫ t dF = b F(b) − a F(a) − ∫_a^b F(t) dt`, with Gauss–Legendre of the given order.
pub fn mean_from_cdf(
    a: f64,
    b: f64,
    order: usize,
    exec: Execution,
    cdf: impl Fn(f64) -> Result<f64> + Sync + Send,
) -> Result<f64> {
    let (x, w) = composite_gauss_legendre(a, b, 1, order);
    let values = try_map_indexed(exec, x.len() + 2, |i| match i {
        0 => cdf(a),
        1 => cdf(b),
        k => cdf(x[k - 2]),
    })?;
    let integral: f64 = values[2..].iter().zip(&w).map(|(f, w)| f * w).sum();
    Ok(b * values[1] - a * values[0] - integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let cfg = FredholmConfig::default();
        assert!(cfg.validate(1.0).is_ok());
        assert!(FredholmConfig { m_xi: 3, ..cfg }.validate(0.0).is_err());
        assert!(FredholmConfig { l: 6.0, ..cfg }.validate(0.0).is_err());
        assert!(matches!(FredholmConfig { h: Some(4.0), ..cfg }.validate(1.0), Err(Error::Config(_))));
    }

    #[test]
    fn gumbel() {
        assert!((gumbel_cdf(0.0) - (-1f64).exp()).abs() < 1e-16);
        assert!((gumbel_cdf(50.0) - 1.0).abs() < 1e-15 && gumbel_cdf(-5.0) < 1e-60);
    }

    #[test]
    fn airy_1d_values() {
        // Tracy–Widom GUE values from an 80-node reference determinant
        assert!((airy_determinant_1d(-2.0, 48, 12.0).unwrap() - 0.413_224_142_505_116).abs() < 1e-10);
        assert!((airy_determinant_1d(0.0, 48, 12.0).unwrap() - 0.969_372_828_355_260).abs() < 1e-10);
    }

    #[test]
    fn nystrom_is_hermitian_psd_diagonal() {
        let m = nystrom_matrix(0.7, -1.0, &FredholmConfig { m_xi: 8, m_eta: 6, ..Default::default() }).unwrap();
        for i in 0..m.rows {
            assert!(m.get(i, i).re >= 0.0);
            for j in 0..m.cols {
                assert_eq!(m.get(i, j), m.get(j, i).conj());
            }
        }
    }

    #[test]
    fn zero_sigma_matches_1d() {
        let cfg = FredholmConfig { m_xi: 24, m_eta: 12, ..Default::default() };
        for &t in &[-2.0, 0.0] {
            let two = last_particle_cdf(0.0, t, &cfg).unwrap();
            let one = airy_determinant_1d(t, 48, 12.0).unwrap();
            assert!((two - one).abs() < 5e-4, "t={t}: {two} vs {one}");
        }
    }
}
