use std::path::PathBuf;
use std::process::ExitCode;

use chiral_edge::ensemble::{rescale, sample_trial, EnsembleParams, Regime};
use chiral_edge::exec::{configure_threads, try_map_indexed};
use chiral_edge::fredholm::{cdf_table, gumbel_cdf, FredholmConfig};
use chiral_edge::io::{samples_table, Table};
use chiral_edge::kernels_finite::{density_finite, kernel_finite, WeightParams};
use chiral_edge::kernels_limit::{
    density_erfc, density_interp_large_sigma, kernel_airy_interp_contour, kernel_airy_interp_real, DEFAULT_DELTA,
};
use chiral_edge::specfun::{erfc, LogComplex};
use chiral_edge::stats::{
    edge_density_histogram, ks_statistic, last_particles, poisson_count_test, run_trials, tabulated_cdf, CountBox,
    Experiment,
};
use chiral_edge::verify::{
    contour_suite, orthogonality_suite, representation_suite, square_grid, ContourCheckConfig, SuiteReport,
};
use chiral_edge::{Error, Execution, VERSION};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

const OUTPUT_DIR_ENV: &str = "CHIRAL_EDGE_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "chiral-edge", version, about = "Edge statistics of the non-Hermitian chiral ensemble")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Output file; stdout when absent. Relative paths are resolved against
    /// $CHIRAL_EDGE_OUTPUT_DIR when it is set.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Eigenvalues z_k of independent Dirac matrices.
    Sample(SampleArgs),
    /// Finite-n or limiting kernel on a grid of ζ = ξ + iη.
    Kernel(KernelArgs),
    /// Last-particle distribution F_σ on a grid of t.
    Fredholm(FredholmArgs),
    /// Built-in verification suites with pass/fail per check.
    Verify(VerifyArgs),
    /// Monte Carlo experiments at the edge.
    Mc(McArgs),
    /// Edge density against the erfc profile.
    Density(DensityArgs),
}

#[derive(Args, Debug, Serialize)]
struct EnsembleOpts {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    nu: u32,
    #[arg(long)]
    tau: f64,
}

#[derive(Args, Debug, Serialize)]
struct SampleArgs {
    #[command(flatten)]
    ensemble: EnsembleOpts,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum KernelKind {
    /// ((1−τ)/2n) K_n at z = 1+τ + √((1−τ)/2n) ζ; needs --n, --tau.
    Finite,
    /// Rescaled interpolating Airy kernel, real-integral form; needs --sigma.
    Interp,
    /// Rescaled interpolating Airy kernel, double-contour form; needs --sigma.
    Contour,
}

#[derive(Args, Debug, Serialize)]
struct KernelArgs {
    #[arg(long, value_enum)]
    kind: KernelKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    nu: u32,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    /// ξ grid, `start:stop:step` or a single value.
    #[arg(long, allow_hyphen_values = true, default_value = "-2:2:0.5")]
    xi: String,
    /// η grid, `start:stop:step` or a single value.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    eta: String,
    /// Second argument ζ2 = xi2 + i·eta2; the diagonal when absent.
    #[arg(long, allow_hyphen_values = true, requires = "eta2")]
    xi2: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "xi2")]
    eta2: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct FredholmArgs {
    #[arg(long)]
    sigma: f64,
    /// t grid, `start:stop:step` or a single value.
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long, default_value_t = 32)]
    m_xi: usize,
    #[arg(long, default_value_t = 16)]
    m_eta: usize,
    #[arg(long, default_value_t = 12.0)]
    l: f64,
    /// η cutoff; 4√(1+σ²) when absent.
    #[arg(long)]
    h: Option<f64>,
    /// Also report the change against a coarser mesh.
    #[arg(long)]
    error_estimate: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Orthogonality,
    Contour,
    Representation,
    All,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[arg(long, default_value_t = 3)]
    nu_max: u32,
    #[arg(long, default_value_t = 8)]
    jk_max: usize,
    /// Matrix sizes for the contour check.
    #[arg(long, value_delimiter = ',', default_value = "1,5,10,20")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7,0.9")]
    tau: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2")]
    sigma: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum McExperiment {
    LastParticle,
    Poisson,
    Density,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum RegimeArg {
    Interpolating,
    Gumbel,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Regime {
        match r {
            RegimeArg::Interpolating => Regime::Interpolating,
            RegimeArg::Gumbel => Regime::Gumbel,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct McArgs {
    #[command(flatten)]
    ensemble: EnsembleOpts,
    #[arg(long, value_enum, default_value_t = McExperiment::LastParticle)]
    experiment: McExperiment,
    #[arg(long, value_enum, default_value_t = RegimeArg::Interpolating)]
    regime: RegimeArg,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// KS distance of the last particle against F_σn (interpolating) or the
    /// Gumbel law. The interpolating reference costs one determinant per grid point.
    #[arg(long)]
    ks: bool,
    /// Count box `xi_lo,xi_hi,eta_lo,eta_hi` for the Poisson experiment.
    #[arg(long = "box", value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1,-1,1")]
    count_box: Vec<f64>,
    /// ξ window `lo:hi` for the density histogram.
    #[arg(long, allow_hyphen_values = true, default_value = "-4:5")]
    xi_window: String,
    #[arg(long, default_value_t = 2.0)]
    eta_half_width: f64,
    /// Histogram bins; Freedman–Diaconis when absent.
    #[arg(long)]
    bins: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct DensityArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    nu: u32,
    #[arg(long)]
    tau: Option<f64>,
    /// Use the large-σ limiting kernel instead of finite n.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value = "-3:1:0.25")]
    xi: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    eta: f64,
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

type CliResult<T> = std::result::Result<T, Failure>;

/// `start:stop:step`, inclusive of `stop` within half a step, or one number.
fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| invalid(format!("bad number `{s}` in grid `{spec}`")));
    match parts.as_slice() {
        [x] => Ok(vec![num(x)?]),
        [a, b, h] => {
            let (a, b, h) = (num(a)?, num(b)?, num(h)?);
            if !(h > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
                return Err(invalid(format!("grid `{spec}` needs step > 0 and stop ≥ start")));
            }
            let count = ((b - a) / h + 0.5).floor() as usize + 1;
            if count > 1_000_000 {
                return Err(invalid(format!("grid `{spec}` has too many points")));
            }
            Ok((0..count).map(|k| a + k as f64 * h).collect())
        }
        _ => Err(invalid(format!("grid `{spec}` must be `start:stop:step` or a number"))),
    }
}

fn parse_window(spec: &str) -> CliResult<(f64, f64)> {
    let (a, b) = spec.split_once(':').ok_or_else(|| invalid(format!("window `{spec}` must be `lo:hi`")))?;
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| invalid(format!("bad number `{s}` in window `{spec}`")));
    Ok((num(a)?, num(b)?))
}

fn header(command: &Command, seed: Option<u64>) -> Value {
    let (name, config) = match serde_json::to_value(command).expect("arguments serialise") {
        Value::Object(m) => m.into_iter().next().expect("one subcommand"),
        other => ("unknown".to_string(), other),
    };
    json!({ "version": VERSION, "command": name, "config": config, "seed": seed })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(invalid("--threads must be at least 1"));
        }
        configure_threads(k);
    }
    let exec = Execution::Parallel;
    let (table, failed) = match &cli.command {
        Command::Sample(a) => (sample(&cli.command, a, exec)?, None),
        Command::Kernel(a) => (kernel(&cli.command, a, exec)?, None),
        Command::Fredholm(a) => (fredholm(&cli.command, a, exec)?, None),
        Command::Verify(a) => {
            let (t, failed) = verify(&cli.command, a, exec)?;
            (t, failed)
        }
        Command::Mc(a) => (mc(&cli.command, a, exec)?, None),
        Command::Density(a) => (density(&cli.command, a, exec)?, None),
    };
    let text = match cli.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json()?,
    };
    match &cli.output {
        Some(path) => {
            let path = match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            std::fs::write(&path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
        }
        None => print!("{text}"),
    }
    match failed {
        Some(msg) => Err(Failure::Numerical(msg)),
        None => Ok(()),
    }
}

fn sample(cmd: &Command, a: &SampleArgs, exec: Execution) -> CliResult<Table> {
    let params = EnsembleParams::new(a.ensemble.n, a.ensemble.nu, a.ensemble.tau)?;
    if a.trials == 0 {
        return Err(invalid("--trials must be at least 1"));
    }
    let samples = try_map_indexed(exec, a.trials, |k| sample_trial(params, a.seed, k as u64))?;
    let mut h = header(cmd, Some(a.seed));
    h["params"] = serde_json::to_value(params).expect("params serialise");
    Ok(samples_table(h, &samples))
}

fn kernel(cmd: &Command, a: &KernelArgs, exec: Execution) -> CliResult<Table> {
    let xi = parse_grid(&a.xi)?;
    let eta = parse_grid(&a.eta)?;
    let points: Vec<Complex64> = xi.iter().flat_map(|&x| eta.iter().map(move |&y| Complex64::new(x, y))).collect();
    let second = a.xi2.zip(a.eta2).map(|(x, y)| Complex64::new(x, y));
    let values: Vec<LogComplex> = match a.kind {
        KernelKind::Finite => {
            let (n, tau) = a.n.zip(a.tau).ok_or_else(|| invalid("--kind finite needs --n and --tau"))?;
            let wp = WeightParams::new(n, a.nu, tau)?;
            if !(tau < 1.0) {
                return Err(invalid("the edge scaling needs τ < 1"));
            }
            let s2 = (1.0 - tau) / (2.0 * n as f64);
            let z = |p: Complex64| Complex64::new(1.0 + tau, 0.0) + p * s2.sqrt();
            try_map_indexed(exec, points.len(), |i| {
                let p = points[i];
                Ok(kernel_finite(z(p), z(second.unwrap_or(p)), &wp)?.scale_exp(s2.ln()))
            })?
        }
        KernelKind::Interp | KernelKind::Contour => {
            let sigma = a.sigma.ok_or_else(|| invalid("limiting kernels need --sigma"))?;
            try_map_indexed(exec, points.len(), |i| {
                let p = points[i];
                let q = second.unwrap_or(p);
                let v = if a.kind == KernelKind::Interp {
                    kernel_airy_interp_real(p, q, sigma)?
                } else {
                    kernel_airy_interp_contour(p, q, sigma, DEFAULT_DELTA)?
                };
                Ok(v.value)
            })?
        }
    };
    let mut t = Table::new(header(cmd, None), &["xi", "eta", "log_abs", "phase"]);
    for (p, v) in points.iter().zip(values) {
        t.push(vec![p.re, p.im, v.log_magnitude, v.phase]);
    }
    Ok(t)
}

fn fredholm(cmd: &Command, a: &FredholmArgs, exec: Execution) -> CliResult<Table> {
    let grid = parse_grid(&a.t)?;
    let cfg = FredholmConfig { m_xi: a.m_xi, m_eta: a.m_eta, l: a.l, h: a.h };
    let rows = cdf_table(a.sigma, &grid, &cfg, a.error_estimate, exec)?;
    let columns: &[&str] = if a.error_estimate { &["t", "F", "error_estimate"] } else { &["t", "F"] };
    let mut t = Table::new(header(cmd, None), columns);
    for r in rows {
        let mut row = vec![r.t, r.f];
        row.extend(r.error_estimate);
        t.push(row);
    }
    Ok(t)
}

fn verify(cmd: &Command, a: &VerifyArgs, exec: Execution) -> CliResult<(Table, Option<String>)> {
    let want = |s: Suite| a.suite == Suite::All || a.suite == s;
    let mut reports: Vec<SuiteReport> = Vec::new();
    if want(Suite::Orthogonality) {
        reports.push(orthogonality_suite(a.jk_max, a.nu_max, 2.0, 1.0, 1e-6, exec)?);
    }
    if want(Suite::Contour) {
        let cfg = ContourCheckConfig { seed: a.seed, ..ContourCheckConfig::default() };
        reports.push(contour_suite(&a.n, a.nu_max, &a.tau, &cfg, exec)?);
    }
    if want(Suite::Representation) {
        reports.push(representation_suite(&a.sigma, &square_grid(5, 2.0), 1e-6, exec)?);
    }
    let pass = reports.iter().all(SuiteReport::pass);
    let mut h = header(cmd, Some(a.seed));
    // wall-clock time would break reproducibility of the file
    let mut json_reports = serde_json::to_value(&reports).expect("reports serialise");
    for r in json_reports.as_array_mut().into_iter().flatten() {
        r.as_object_mut().map(|o| o.remove("seconds"));
    }
    h["reports"] = json_reports;
    h["pass"] = json!(pass);
    let mut t = Table::new(h, &["suite", "check", "value", "tolerance", "pass"]);
    for (s, r) in reports.iter().enumerate() {
        for (c, check) in r.checks.iter().enumerate() {
            t.push(vec![s as f64, c as f64, check.value, check.tolerance, f64::from(u8::from(check.pass))]);
        }
    }
    let failed = (!pass).then(|| {
        let names: Vec<String> = reports
            .iter()
            .flat_map(|r| r.checks.iter().filter(|c| !c.pass).map(move |c| format!("{}: {}", r.suite, c.label)))
            .collect();
        format!("verification failed: {}", names.join("; "))
    });
    Ok((t, failed))
}

fn mc(cmd: &Command, a: &McArgs, exec: Execution) -> CliResult<Table> {
    let params = EnsembleParams::new(a.ensemble.n, a.ensemble.nu, a.ensemble.tau)?;
    let exp = Experiment::new(params, a.regime.into(), a.trials, a.seed)?;
    let mut h = header(cmd, Some(a.seed));
    h["scaling"] = serde_json::to_value(exp.scaling).expect("scaling serialises");
    match a.experiment {
        McExperiment::LastParticle => {
            let samples = run_trials(&exp, exec)?;
            let x = last_particles(&samples, &exp.scaling)?;
            let mean = x.iter().sum::<f64>() / x.len() as f64;
            h["mean"] = json!(mean);
            if a.ks {
                let ks = match exp.scaling.regime {
                    Regime::Gumbel => ks_statistic(&x, gumbel_cdf)?,
                    Regime::Interpolating => {
                        let grid: Vec<f64> = (0..=50).map(|k| -6.0 + 0.2 * k as f64).collect();
                        let rows = cdf_table(exp.scaling.sigma_n, &grid, &FredholmConfig::default(), false, exec)?;
                        ks_statistic(&x, tabulated_cdf(grid, rows.iter().map(|r| r.f).collect()))?
                    }
                };
                h["ks"] = json!(ks);
            }
            let mut t = Table::new(h, &["trial", "x_max"]);
            for (k, v) in x.into_iter().enumerate() {
                t.push(vec![k as f64, v]);
            }
            Ok(t)
        }
        McExperiment::Poisson => {
            let [xi_lo, xi_hi, eta_lo, eta_hi] = a.count_box[..] else {
                return Err(invalid("--box needs four numbers xi_lo,xi_hi,eta_lo,eta_hi"));
            };
            if !(xi_hi > xi_lo && eta_hi > eta_lo) {
                return Err(invalid("--box is empty"));
            }
            let samples = run_trials(&exp, exec)?;
            let points = samples.iter().map(|s| rescale(s, &exp.scaling)).collect::<chiral_edge::Result<Vec<_>>>()?;
            let report = poisson_count_test(&points, &[CountBox { xi_lo, xi_hi, eta_lo, eta_hi }]);
            let mut t = Table::new(
                h,
                &["xi_lo", "xi_hi", "eta_lo", "eta_hi", "expected", "mean", "variance", "ratio", "degenerate"],
            );
            for b in report {
                t.push(vec![
                    b.region.xi_lo,
                    b.region.xi_hi,
                    b.region.eta_lo,
                    b.region.eta_hi,
                    b.expected,
                    b.mean,
                    b.variance,
                    b.ratio,
                    f64::from(u8::from(b.degenerate)),
                ]);
            }
            Ok(t)
        }
        McExperiment::Density => {
            let window = parse_window(&a.xi_window)?;
            let samples = run_trials(&exp, exec)?;
            let hist = edge_density_histogram(&samples, window, a.eta_half_width, a.bins)?;
            h["total_points"] = json!(hist.total_points);
            let mut t = Table::new(h, &["xi_lo", "xi_hi", "count", "density", "erfc_prediction"]);
            for k in 0..hist.counts.len() {
                t.push(vec![
                    hist.edges[k],
                    hist.edges[k + 1],
                    hist.counts[k] as f64,
                    hist.density[k],
                    hist.erfc_prediction[k],
                ]);
            }
            Ok(t)
        }
    }
}

fn density(cmd: &Command, a: &DensityArgs, exec: Execution) -> CliResult<Table> {
    let xi = parse_grid(&a.xi)?;
    let mut h = header(cmd, None);
    if let Some(sigma) = a.sigma {
        let values =
            try_map_indexed(exec, xi.len(), |i| density_interp_large_sigma(Complex64::new(xi[i], a.eta), sigma))?;
        h["normalisation"] = json!("sigma^2 K(sigma zeta, sigma zeta) against erfc(xi)/(4 pi)");
        let mut t = Table::new(h, &["xi", "density", "erfc_prediction"]);
        for (x, v) in xi.iter().zip(values) {
            t.push(vec![*x, v, erfc(*x) / (4.0 * std::f64::consts::PI)]);
        }
        return Ok(t);
    }
    let (n, tau) = a.n.zip(a.tau).ok_or_else(|| invalid("density needs --n and --tau, or --sigma"))?;
    let wp = WeightParams::new(n, a.nu, tau)?;
    if !(tau < 1.0) {
        return Err(invalid("the edge scaling needs τ < 1"));
    }
    let values = try_map_indexed(exec, xi.len(), |i| density_finite(Complex64::new(xi[i], a.eta), &wp))?;
    let mut t = Table::new(h, &["xi", "density", "erfc_prediction", "scaled_difference"]);
    for (x, v) in xi.iter().zip(values) {
        let pred = density_erfc(*x, tau);
        t.push(vec![*x, v, pred, 2.0 * std::f64::consts::PI * (1.0 + tau) * v - erfc(*x)]);
    }
    Ok(t)
}
