use chiral_edge::ensemble::{sample_trial, EnsembleParams};
use chiral_edge::kernels_finite::{kernel_finite, WeightParams};
use chiral_edge::kernels_limit::{
    kernel_airy_interp_contour, kernel_airy_interp_real, kernel_bessel_interp, kernel_sine_interp,
};
use chiral_edge::specfun::{airy_ai, bessel_k_value, laguerre};
use chiral_edge::stats::ks_statistic;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn airy_satisfies_its_ode(r in 0.0f64..5.0, theta in -PI..PI) {
        let z = Complex64::from_polar(r, theta);
        let h = 1e-3;
        let a = airy_ai(z).unwrap();
        let second = (airy_ai(z + h).unwrap() - 2.0 * a + airy_ai(z - h).unwrap()) / (h * h);
        let scale = a.norm().max(airy_ai(z + h).unwrap().norm()).max(1e-3);
        // central difference error is h²/12 |Ai''''|, roughly h² |z|² |Ai|
        prop_assert!((second - z * a).norm() <= 1e-5 * scale * (1.0 + r * r), "{z}");
    }

    #[test]
    fn bessel_k_recurrence(nu in 1u32..=6, x in 0.1f64..100.0) {
        let km = bessel_k_value(nu - 1, x).unwrap();
        let k = bessel_k_value(nu, x).unwrap();
        let kp = bessel_k_value(nu + 1, x).unwrap();
        prop_assert!((kp - km - 2.0 * nu as f64 / x * k).abs() <= 1e-9 * kp, "ν={nu} x={x}");
    }

    #[test]
    fn laguerre_recurrence(j in 0usize..=10, nu in 1u32..=3, r in 0.0f64..10.0, theta in -PI..PI) {
        let z = Complex64::from_polar(r, theta);
        let lhs = z * laguerre(j, nu + 1, z);
        let sum: Complex64 = (0..=j).map(|m| laguerre(m, nu - 1, z)).sum();
        let rhs = sum * nu as f64 - laguerre(j + 1, nu - 1, z) * (j + 1) as f64;
        let scale = lhs.norm().max((sum * nu as f64).norm()).max((laguerre(j + 1, nu - 1, z) * (j + 1) as f64).norm());
        prop_assert!((lhs - rhs).norm() <= 1e-10 * scale.max(1.0), "j={j} ν={nu} z={z}");
    }

    #[test]
    fn finite_kernel_is_hermitian(
        n in 1usize..=30, nu in 0u32..=3, tau in 0.1f64..0.95,
        a in (0.0f64..2.5, -0.5f64..0.5), b in (0.0f64..2.5, -0.5f64..0.5),
    ) {
        let wp = WeightParams::new(n, nu, tau).unwrap();
        let (z1, z2) = (c(a.0, a.1), c(b.0, b.1));
        let k12 = kernel_finite(z1, z2, &wp).unwrap().to_complex();
        let k21 = kernel_finite(z2, z1, &wp).unwrap().to_complex();
        prop_assert!((k12 - k21.conj()).norm() <= 1e-10 * k12.norm().max(1e-300));
        let d = kernel_finite(z1, z1, &wp).unwrap().to_complex();
        prop_assert!(d.re >= 0.0 && d.im.abs() <= 1e-10 * d.re.max(1e-300));
    }

    #[test]
    fn limiting_kernels_are_hermitian(
        sigma in 0.1f64..3.0, a in (-2.0f64..2.0, -2.0f64..2.0), b in (-2.0f64..2.0, -2.0f64..2.0),
    ) {
        let (z1, z2) = (c(a.0, a.1), c(b.0, b.1));
        let k12 = kernel_airy_interp_real(z1, z2, sigma).unwrap().value.to_complex();
        let k21 = kernel_airy_interp_real(z2, z1, sigma).unwrap().value.to_complex();
        prop_assert!((k12 - k21.conj()).norm() <= 1e-10 * k12.norm().max(1e-300));
        let d = kernel_airy_interp_real(z1, z1, sigma).unwrap().value.to_complex();
        prop_assert!(d.re >= 0.0 && d.im.abs() <= 1e-10 * d.re.max(1e-300));

        let s12 = kernel_sine_interp(z1, z2, sigma).unwrap();
        let s21 = kernel_sine_interp(z2, z1, sigma).unwrap();
        prop_assert!((s12 - s21.conj()).norm() <= 1e-10 * s12.norm().max(1e-300));
        prop_assert!(kernel_sine_interp(z1, z1, sigma).unwrap().re >= 0.0);

        let (w1, w2) = (c(a.0.abs() + 0.1, a.1), c(b.0.abs() + 0.1, b.1));
        let b12 = kernel_bessel_interp(w1, w2, sigma, 1).unwrap();
        let b21 = kernel_bessel_interp(w2, w1, sigma, 1).unwrap();
        prop_assert!((b12 - b21.conj()).norm() <= 1e-10 * b12.norm().max(1e-300));
        prop_assert!(kernel_bessel_interp(w1, w1, sigma, 1).unwrap().re >= 0.0);
    }

    #[test]
    fn sampling_is_deterministic(n in 1usize..=12, nu in 0u32..=3, tau in 0.0f64..=1.0, seed: u64, trial in 0u64..100) {
        let p = EnsembleParams::new(n, nu, tau).unwrap();
        let a = sample_trial(p, seed, trial).unwrap();
        let b = sample_trial(p, seed, trial).unwrap();
        prop_assert_eq!(a.z.len(), n);
        for (x, y) in a.z.iter().zip(&b.z) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn ks_is_a_probability(samples in prop::collection::vec(-5.0f64..5.0, 1..200)) {
        let d = ks_statistic(&samples, |t| 1.0 / (1.0 + (-t).exp())).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn contour_form_independent_of_offset(
        sigma in 0.5f64..2.0, delta in 0.1f64..1.0,
        a in (-1.5f64..1.5, -1.5f64..1.5), b in (-1.5f64..1.5, -1.5f64..1.5),
    ) {
        let (z1, z2) = (c(a.0, a.1), c(b.0, b.1));
        let reference = kernel_airy_interp_contour(z1, z2, sigma, 0.5).unwrap().value.to_complex();
        let shifted = kernel_airy_interp_contour(z1, z2, sigma, delta).unwrap().value.to_complex();
        let scale = (kernel_airy_interp_real(z1, z1, sigma).unwrap().value.to_complex().re
            * kernel_airy_interp_real(z2, z2, sigma).unwrap().value.to_complex().re).sqrt();
        prop_assert!((reference - shifted).norm() <= 1e-8 * scale, "δ={delta}");
    }
}
