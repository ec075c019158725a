//! Monte Carlo experiments: last-particle samples, KS distances, Poisson
//! count tests and edge-density histograms.

use crate::ensemble::{rescale, sample_trial, scaling_params, EigenvalueSample, EnsembleParams, Regime, ScalingParams};
use crate::error::{Error, Result};
use crate::exec::{try_map_indexed, Execution};
use crate::kernels_limit::density_erfc;
use crate::specfun::erfc;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub params: EnsembleParams,
    pub scaling: ScalingParams,
    pub trials: usize,
    pub master_seed: u64,
}

impl Experiment {
    /// Scalings are always recomputed from `params` and `regime`.
    pub fn new(params: EnsembleParams, regime: Regime, trials: usize, master_seed: u64) -> Result<Self> {
        params.validate()?;
        if trials == 0 {
            return Err(Error::domain("an experiment needs at least one trial"));
        }
        let scaling = scaling_params(params.n, params.tau, Some(regime))?;
        Ok(Experiment { params, scaling, trials, master_seed })
    }
}

/// Eigenvalues of every trial, in trial order.
pub fn run_trials(exp: &Experiment, exec: Execution) -> Result<Vec<EigenvalueSample>> {
    try_map_indexed(exec, exp.trials, |i| {
        sample_trial(exp.params, exp.master_seed, i as u64).map_err(|e| match e {
            Error::Numerical(m) => Error::Numerical(format!("trial {i}: {m}")),
            other => other,
        })
    })
}

/// Largest rescaled real part `max x̂` of each trial.
pub fn last_particles(samples: &[EigenvalueSample], scaling: &ScalingParams) -> Result<Vec<f64>> {
    samples
        .iter()
        .map(|s| Ok(rescale(s, scaling)?.into_iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)))
        .collect()
}

pub fn mc_last_particle(exp: &Experiment, exec: Execution) -> Result<Vec<f64>> {
    last_particles(&run_trials(exp, exec)?, &exp.scaling)
}

/// `sup_x |F_emp(x) − F(x)|`, taken over both sides of every jump.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::domain("KS statistic needs at least one sample"));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcdfSummary {
    pub sorted: Vec<f64>,
    pub ks_vs_reference: f64,
    pub reference: String,
}

pub fn ecdf_summary(samples: &[f64], reference: &str, cdf: impl Fn(f64) -> f64) -> Result<EcdfSummary> {
    let ks = ks_statistic(samples, cdf)?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(EcdfSummary { sorted, ks_vs_reference: ks, reference: reference.to_string() })
}

/// Piecewise-linear interpolant of a tabulated CDF, clamped to the end values.
pub fn tabulated_cdf(t: Vec<f64>, f: Vec<f64>) -> impl Fn(f64) -> f64 {
    move |x: f64| {
        if x <= t[0] {
            return f[0];
        }
        let last = t.len() - 1;
        if x >= t[last] {
            return f[last];
        }
        let k = t.partition_point(|&v| v <= x);
        let (t0, t1) = (t[k - 1], t[k]);
        f[k - 1] + (f[k] - f[k - 1]) * (x - t0) / (t1 - t0)
    }
}

/// Rectangle `[xi_lo, xi_hi] × [eta_lo, eta_hi]` in rescaled coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountBox {
    pub xi_lo: f64,
    pub xi_hi: f64,
    pub eta_lo: f64,
    pub eta_hi: f64,
}

impl CountBox {
    fn contains(&self, p: (f64, f64)) -> bool {
        p.0 >= self.xi_lo && p.0 < self.xi_hi && p.1 >= self.eta_lo && p.1 < self.eta_hi
    }

    /// `∫_B π^{−1/2} e^{−ξ−η²} dξ dη`.
    pub fn poisson_mean(&self) -> f64 {
        let xi = (-self.xi_lo).exp() - (-self.xi_hi).exp();
        let eta = 0.5 * (erfc(self.eta_lo) - erfc(self.eta_hi));
        xi * eta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxCount {
    pub region: CountBox,
    pub expected: f64,
    pub mean: f64,
    pub variance: f64,
    /// Mean over variance; 1 for a Poisson count.
    pub ratio: f64,
    pub degenerate: bool,
}

/// Per-trial counts in each box against the limiting Poisson intensity.
pub fn poisson_count_test(points: &[Vec<(f64, f64)>], boxes: &[CountBox]) -> Vec<BoxCount> {
    boxes
        .iter()
        .map(|b| {
            let counts: Vec<f64> = points.iter().map(|t| t.iter().filter(|&&p| b.contains(p)).count() as f64).collect();
            let n = counts.len() as f64;
            let mean = if counts.is_empty() { f64::NAN } else { counts.iter().sum::<f64>() / n };
            let variance = if counts.len() < 2 {
                f64::NAN
            } else {
                counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0)
            };
            let degenerate = counts.len() < 2 || !(variance > 0.0);
            BoxCount {
                region: *b,
                expected: b.poisson_mean(),
                mean,
                variance,
                ratio: if degenerate { f64::NAN } else { mean / variance },
                degenerate,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// Points per unit area per trial.
    pub density: Vec<f64>,
    /// `erfc(ξ)/(2π(1+τ))` at bin centres.
    pub erfc_prediction: Vec<f64>,
    pub total_points: usize,
}

/// Freedman–Diaconis bin count for the data on `[lo, hi]`.
pub fn freedman_diaconis_bins(data: &[f64], lo: f64, hi: f64) -> usize {
    let mut s: Vec<f64> = data.iter().copied().filter(|x| (lo..hi).contains(x)).collect();
    if s.len() < 4 {
        return 1;
    }
    s.sort_by(f64::total_cmp);
    let q = |p: f64| s[((s.len() - 1) as f64 * p).round() as usize];
    let iqr = q(0.75) - q(0.25);
    if !(iqr > 0.0) {
        return 1;
    }
    let width = 2.0 * iqr / (s.len() as f64).cbrt();
    (((hi - lo) / width).ceil() as usize).clamp(1, 1000)
}

/// Histogram in `ξ` of `ζ = (z − (1+τ))/√((1−τ)/(2n))` restricted to
/// `|Im ζ| ≤ eta_half_width`, normalised to a density per unit area and trial.
pub fn edge_density_histogram(
    samples: &[EigenvalueSample],
    xi_window: (f64, f64),
    eta_half_width: f64,
    bins: Option<usize>,
) -> Result<DensityHistogram> {
    let first = samples.first().ok_or_else(|| Error::domain("no samples"))?;
    let p = first.params;
    if !(p.tau < 1.0) {
        return Err(Error::domain("edge density scaling needs τ < 1"));
    }
    let (lo, hi) = xi_window;
    if !(hi > lo) || !(eta_half_width > 0.0) {
        return Err(Error::domain("histogram window is empty"));
    }
    let scale = ((1.0 - p.tau) / (2.0 * p.n as f64)).sqrt();
    let xi: Vec<f64> = samples
        .iter()
        .flat_map(|s| s.z.iter())
        .map(|z| ((z.re - (1.0 + p.tau)) / scale, z.im / scale))
        .filter(|&(_, e)| e.abs() <= eta_half_width)
        .map(|(x, _)| x)
        .collect();
    let nb = bins.unwrap_or_else(|| freedman_diaconis_bins(&xi, lo, hi)).max(1);
    let width = (hi - lo) / nb as f64;
    let mut counts = vec![0usize; nb];
    for &x in &xi {
        if x >= lo && x < hi {
            counts[(((x - lo) / width) as usize).min(nb - 1)] += 1;
        }
    }
    let area = width * 2.0 * eta_half_width * samples.len() as f64;
    let edges = (0..=nb).map(|k| lo + k as f64 * width).collect();
    Ok(DensityHistogram {
        density: counts.iter().map(|&c| c as f64 / area).collect(),
        erfc_prediction: (0..nb).map(|k| density_erfc(lo + (k as f64 + 0.5) * width, p.tau)).collect(),
        total_points: counts.iter().sum(),
        counts,
        edges,
    })
}

/// Expected number of points with `ξ > t0` per trial: `e^{−t0}`.
pub fn poisson_tail_mass(t0: f64) -> f64 {
    CountBox { xi_lo: t0, xi_hi: f64::INFINITY, eta_lo: f64::NEG_INFINITY, eta_hi: f64::INFINITY }.poisson_mean()
}
