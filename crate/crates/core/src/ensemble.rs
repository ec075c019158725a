//! The Gaussian two-matrix Dirac model: sampling, eigenvalues and the edge
//! scaling constants.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub nu: u32,
    pub tau: f64,
}

impl EnsembleParams {
    pub fn new(n: usize, nu: u32, tau: f64) -> Result<Self> {
        let p = EnsembleParams { n, nu, tau };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("n must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::domain(format!("τ must lie in [0, 1], got {}", self.tau)));
        }
        Ok(())
    }

    /// Columns of P and Q.
    pub fn width(&self) -> usize {
        self.n + self.nu as usize
    }
}

/// Generator for one trial: ChaCha20 keyed by the master seed, with the
/// trial index as stream id, so trials are independent of scheduling.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone)]
pub struct DiracSample {
    pub params: EnsembleParams,
    pub seed: u64,
    pub p: Matrix,
    pub q: Matrix,
    pub phi: Matrix,
    pub psi: Matrix,
}

impl DiracSample {
    /// The full `(2n+ν)`-square Dirac matrix `[[0, Φ], [Ψ, 0]]`.
    pub fn dirac_matrix(&self) -> Matrix {
        let n = self.params.n;
        let w = self.params.width();
        Matrix::from_fn(n + w, n + w, |i, j| match (i < n, j < n) {
            (true, false) => self.phi.get(i, j - n),
            (false, true) => self.psi.get(i - n, j),
            _ => Complex64::new(0.0, 0.0),
        })
    }
}

/// Draws P, Q with iid entries `(g₁ + i g₂)/√(4n)`, so `E|P_ij|² = 1/(2n)`.
pub fn sample_dirac(params: EnsembleParams, seed: u64) -> Result<DiracSample> {
    sample_dirac_with(params, seed, &mut trial_rng(seed, 0))
}

pub fn sample_dirac_with(params: EnsembleParams, seed: u64, rng: &mut impl Rng) -> Result<DiracSample> {
    params.validate()?;
    let n = params.n;
    let w = params.width();
    let scale = 1.0 / (4.0 * n as f64).sqrt();
    let draw = |rng: &mut dyn rand::RngCore| {
        Matrix::from_fn(n, w, |_, _| {
            let g1: f64 = rng.sample(StandardNormal);
            let g2: f64 = rng.sample(StandardNormal);
            Complex64::new(g1, g2) * scale
        })
    };
    let p = draw(rng);
    let q = draw(rng);
    let s1 = (1.0 + params.tau).sqrt();
    let s2 = (1.0 - params.tau).sqrt();
    let phi = Matrix::from_fn(n, w, |i, j| p.get(i, j) * s1 + q.get(i, j) * s2);
    let psi = Matrix::from_fn(w, n, |i, j| p.get(j, i).conj() * s1 - q.get(j, i).conj() * s2);
    Ok(DiracSample { params, seed, p, q, phi, psi })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueSample {
    pub params: EnsembleParams,
    pub seed: u64,
    pub z: Vec<Complex64>,
}

/// Principal square root, with ties on the imaginary axis sent to Im ≥ 0.
fn principal_sqrt(w: Complex64) -> Complex64 {
    let mut z = w.sqrt();
    if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
        z = -z;
    }
    z
}

fn descending(a: &Complex64, b: &Complex64) -> Ordering {
    b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
}

/// `z_k = √(eig ΦΨ)`, sorted by descending real part then imaginary part.
pub fn eigenvalues(sample: &DiracSample) -> Result<EigenvalueSample> {
    let product = sample.phi.matmul(&sample.psi);
    let eig = linalg::eigenvalues(product).map_err(|e| match e {
        Error::Numerical(msg) => Error::Numerical(format!(
            "{msg}; n={}, ν={}, τ={}, seed={}",
            sample.params.n, sample.params.nu, sample.params.tau, sample.seed
        )),
        other => other,
    })?;
    let mut z: Vec<Complex64> = eig.into_iter().map(principal_sqrt).collect();
    z.sort_by(descending);
    Ok(EigenvalueSample { params: sample.params, seed: sample.seed, z })
}

/// Sample and diagonalise trial `trial` of an experiment seeded by `master_seed`.
pub fn sample_trial(params: EnsembleParams, master_seed: u64, trial: u64) -> Result<EigenvalueSample> {
    let dirac = sample_dirac_with(params, master_seed, &mut trial_rng(master_seed, trial))?;
    eigenvalues(&dirac)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Interpolating,
    Gumbel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    pub a_n: f64,
    pub b_n: f64,
    pub c_n: f64,
    pub sigma_n: f64,
    pub regime: Regime,
}

pub fn sigma_n(n: usize, tau: f64) -> f64 {
    (2.0 * n as f64).powf(1.0 / 6.0) * (1.0 - tau).sqrt()
}

/// The τ with `σ_n = σ` at size n: `τ = 1 − σ² (2n)^{−1/3}`.
pub fn tau_for_sigma(n: usize, sigma: f64) -> f64 {
    1.0 - sigma * sigma * (2.0 * n as f64).powf(-1.0 / 3.0)
}

/// Edge scalings `x̂ = (x − c_n)/a_n`, `ŷ = y/b_n`.
///
/// The Gumbel scalings contain `log σ_n` and `log(6 log σ_n)`, so that regime
/// needs `σ_n > 1`.
pub fn scaling_params(n: usize, tau: f64, regime: Option<Regime>) -> Result<ScalingParams> {
    EnsembleParams::new(n, 0, tau)?;
    let sigma = sigma_n(n, tau);
    let two_n = 2.0 * n as f64;
    let regime = regime.unwrap_or(Regime::Interpolating);
    match regime {
        Regime::Interpolating => {
            let a = two_n.powf(-2.0 / 3.0);
            Ok(ScalingParams { a_n: a, b_n: sigma * a, c_n: 1.0 + tau, sigma_n: sigma, regime })
        }
        Regime::Gumbel => {
            if sigma <= 1.0 {
                return Err(Error::domain(format!(
                    "Gumbel scaling needs σ_n > 1 (it assumes σ_n → ∞), got σ_n = {sigma}"
                )));
            }
            let th = (1.0 + tau) / 2.0;
            let ls = sigma.ln();
            let base = two_n.powf(-2.0 / 3.0);
            let a = th.sqrt() * sigma / (6.0 * ls).sqrt() * base;
            let b = th.powf(-0.25) * sigma.powf(2.5) / (6.0 * ls).powf(0.25) * base;
            let c = (1.0 + tau)
                + a * (3.0 * ls - 1.25 * (6.0 * ls).ln() - (2.0 * std::f64::consts::PI * th.powf(0.75)).ln());
            Ok(ScalingParams { a_n: a, b_n: b, c_n: c, sigma_n: sigma, regime })
        }
    }
}

pub fn rescale(eigs: &EigenvalueSample, s: &ScalingParams) -> Result<Vec<(f64, f64)>> {
    if !(s.b_n > 0.0) {
        return Err(Error::domain(
            "b_n = 0 (τ = 1): the rescaled imaginary part is undefined; use the Hermitian limit instead",
        ));
    }
    Ok(eigs.z.iter().map(|z| ((z.re - s.c_n) / s.a_n, z.im / s.b_n)).collect())
}
