use chiral_edge::ensemble::{eigenvalues, rescale, sample_dirac, sample_trial, scaling_params, EnsembleParams, Regime};
use chiral_edge::stats::{mc_last_particle, run_trials, Experiment};
use chiral_edge::Execution;
use nalgebra::DMatrix;
use num_complex::Complex64;

fn spectrum_of_dirac(p: EnsembleParams, seed: u64) -> (Vec<Complex64>, Vec<Complex64>) {
    let s = sample_dirac(p, seed).unwrap();
    let d = s.dirac_matrix();
    let m = DMatrix::from_row_slice(d.rows, d.cols, &d.data);
    let (_, t) = nalgebra::linalg::Schur::new(m).unpack();
    let full: Vec<Complex64> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    (full, eigenvalues(&s).unwrap().z)
}

#[test]
fn dirac_spectrum_is_paired() {
    for n in 1..=8 {
        for nu in 0..=3 {
            let p = EnsembleParams::new(n, nu, 0.6).unwrap();
            let (mut full, z) = spectrum_of_dirac(p, (n * 10 + nu as usize) as u64);
            assert_eq!(full.len(), 2 * n + nu as usize);
            let scale = z.iter().map(|w| w.norm()).fold(1.0, f64::max);
            let mut take = |target: Complex64| {
                let (k, d) = full
                    .iter()
                    .enumerate()
                    .map(|(k, w)| (k, (w - target).norm()))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap();
                assert!(d < 1e-8 * scale, "n={n} ν={nu}: {target} missing (closest {d:e})");
                full.swap_remove(k);
            };
            for &w in &z {
                take(w);
                take(-w);
            }
            // ν exact zero modes remain
            for w in &full {
                assert!(w.norm() < 1e-8 * scale, "n={n} ν={nu}: leftover {w}");
            }
        }
    }
}

#[test]
fn hermitian_point_stays_inside_the_support() {
    let p = EnsembleParams::new(200, 0, 1.0).unwrap();
    let samples: Vec<_> = (0..100).map(|k| sample_trial(p, 99, k).unwrap()).collect();
    for s in &samples {
        assert!(s.z.iter().all(|z| z.im.abs() < 1e-8 && z.re >= 0.0));
    }
    let beyond = samples.iter().filter(|s| s.z[0].re * s.z[0].re > 4.3).count();
    assert!(beyond == 0, "{beyond} of 100 samples have max z² > 4.3");
}

#[test]
fn edge_sits_at_one_plus_tau() {
    let p = EnsembleParams::new(400, 0, 0.5).unwrap();
    let samples = run_trials(&Experiment::new(p, Regime::Interpolating, 12, 5).unwrap(), Execution::Parallel).unwrap();
    let mean = samples.iter().map(|s| s.z[0].re).sum::<f64>() / samples.len() as f64;
    assert!((mean - 1.5).abs() < 0.05, "{mean}");
}

#[test]
fn serial_and_parallel_agree_bitwise() {
    let p = EnsembleParams::new(20, 1, 0.4).unwrap();
    let exp = Experiment::new(p, Regime::Interpolating, 16, 314).unwrap();
    let a = mc_last_particle(&exp, Execution::Serial).unwrap();
    let b = mc_last_particle(&exp, Execution::Parallel).unwrap();
    assert_eq!(a.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), b.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
}

#[test]
fn shifting_the_centre_shifts_the_output() {
    let p = EnsembleParams::new(30, 0, 0.5).unwrap();
    let exp = Experiment::new(p, Regime::Interpolating, 4, 8).unwrap();
    let s = exp.scaling;
    let mut moved = s;
    moved.c_n += s.a_n;
    for trial in 0..4 {
        let e = sample_trial(p, 8, trial).unwrap();
        let (a, b) = (rescale(&e, &s).unwrap(), rescale(&e, &moved).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((x.0 - 1.0 - y.0).abs() < 1e-9);
        }
    }
    assert!(scaling_params(30, 0.9, Some(Regime::Gumbel)).is_err());
}
