//! Modified Bessel K_ν (integer ν, real x > 0) and Bessel J_ν (integer ν,
//! complex argument).

use super::logcomplex::LogComplex;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// `e^x K_ν(x)` for ν ∈ {0, 1} from `∫₀^∞ e^{-x(cosh s − 1)} cosh(νs) ds`.
///
/// This is the Bessel integral `½(x/2)^ν ∫ t^{-ν-1} e^{-t-x²/4t} dt` after
/// `t = (x/2) e^s`. The integrand is entire and even, so the trapezoid rule
/// converges geometrically; the step shrinks like `1/√x` to follow the
/// Gaussian core of width `1/√x`.
fn scaled_k01(x: f64) -> (f64, f64) {
    let h = (7.5 / (40.0 + 0.64 * x)).min(0.7 / x.sqrt());
    let mut s0 = 0.5;
    let mut s1 = 0.5;
    let mut k = 1usize;
    loop {
        let s = k as f64 * h;
        // cosh s − 1 = 2 sinh²(s/2), no cancellation for small s
        let sh = (0.5 * s).sinh();
        let decay = (-2.0 * x * sh * sh).exp();
        let c = s.cosh();
        s0 += decay;
        s1 += decay * c;
        if decay * c < 1e-18 * s1 {
            break;
        }
        k += 1;
    }
    (s0 * h, s1 * h)
}

/// `K_ν(x)` as a positive real in log form.
///
/// K_0 and K_1 come from the integral above; higher orders from the upward
/// recurrence `K_{ν+1} = K_{ν-1} + (2ν/x) K_ν`, which is stable for K.
pub fn bessel_k(nu: u32, x: f64) -> Result<LogComplex> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("K_ν requires finite x > 0, got {x}")));
    }
    let (k0, k1) = scaled_k01(x);
    let value = match nu {
        0 => k0,
        1 => k1,
        _ => {
            // rescale on the way up if the recurrence grows past 1e250
            let mut log_shift = 0.0;
            let (mut prev, mut cur) = (k0, k1);
            for m in 1..nu {
                let next = prev + 2.0 * m as f64 / x * cur;
                prev = cur;
                cur = next;
                if cur > 1e250 {
                    prev /= 1e250;
                    cur /= 1e250;
                    log_shift += 250.0 * std::f64::consts::LN_10;
                }
            }
            return Ok(LogComplex::new(cur.ln() + log_shift - x, 0.0));
        }
    };
    Ok(LogComplex::new(value.ln() - x, 0.0))
}

/// `K_ν(x)` in linear form (saturates to 0 for large x).
pub fn bessel_k_value(nu: u32, x: f64) -> Result<f64> {
    Ok(bessel_k(nu, x)?.to_complex().re)
}

/// `J_ν(z)` by its power series `Σ (−1)^k (z/2)^{2k+ν} / (k! (k+ν)!)`.
///
/// Adequate for the moderate arguments used by the hard-edge kernel
/// (|z| ≲ 20); the series loses about `|Im z|/ln 10` digits.
pub fn bessel_j(nu: u32, z: Complex64) -> Complex64 {
    let half = z * 0.5;
    let q = -(half * half);
    let mut term = Complex64::new(1.0, 0.0);
    for i in 1..=nu {
        term *= half / i as f64;
    }
    let mut sum = term;
    for k in 1..500usize {
        term *= q / (k as f64 * (k as f64 + nu as f64));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && k as f64 > half.norm() {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    // (ν, x, ln K_ν(x)) from a 30-digit reference.
    const K_REFERENCE: &[(u32, f64, f64)] = &[
        (0, 1e-06, 2.6341483053069884094),
        (0, 0.001, 1.9492885501921987066),
        (0, 0.1, 0.8866843666787421268),
        (0, 1.0, -0.8650643989067880968),
        (0, 2.5, -2.7750308506034038846),
        (0, 10.0, -10.93743282303833292),
        (0, 37.0, -38.583001562229189399),
        (0, 250.0, -252.53543811042727488),
        (0, 10000.0, -10004.379391332718429),
        (0, 1000000.0, -1000006.6819640513373),
        (1, 1e-06, 13.815510557957058428),
        (1, 0.001, 6.907751517131146853),
        (1, 0.1, 2.2878617121071676644),
        (1, 1.0, -0.50765194821075233095),
        (1, 2.5, -2.6051667300933749557),
        (1, 10.0, -10.889730180588070981),
        (1, 37.0, -38.569666298386161406),
        (1, 250.0, -252.5334420958400194),
        (1, 10000.0, -10004.3793413352182),
        (1, 1000000.0, -1000006.6819635513376),
        (2, 1e-06, 28.324168296488243608),
        (2, 0.001, 14.508657488524673977),
        (2, 0.1, 5.295834109025257421),
        (2, 1.0, 0.48540867156564619815),
        (2, 2.5, -2.108168590189073047),
        (2, 10.0, -10.747001122069369434),
        (2, 37.0, -38.529669625864655752),
        (2, 250.0, -252.52745408369786652),
        (2, 10000.0, -10004.379191342718012),
        (2, 1000000.0, -1000006.6819620513383),
        (5, 1e-06, 75.028195342409035104),
        (5, 0.001, 40.489418884998412665),
        (5, 0.1, 17.462943082635024389),
        (5, 1.0, 5.888768782293728388),
        (5, 2.5, 0.9994857424142556439),
        (5, 10.0, -9.7629980490662249065),
        (5, 37.0, -38.250074020706998123),
        (5, 250.0, -252.48553932656953236),
        (5, 10000.0, -10004.378141395237693),
        (5, 1000000.0, -1000006.6819515513436),
    ];

    // (ν, Re z, Im z, Re J_ν, Im J_ν)
    const J_REFERENCE: &[(u32, f64, f64, f64, f64)] = &[
        (0, 0.5, 0.2, 0.94757093284073786, -0.048695507396165068),
        (0, 3.0, -1.0, -0.46049214388225846, 0.36956500001486358),
        (0, 1.2, 0.01, 0.67114553892943918, -0.004982951492291309),
        (0, 8.0, 2.0, 0.53522631642142962, -0.8738208098768826),
        (1, 0.5, 0.2, 0.24589971874137142, 0.091236181890532207),
        (1, 3.0, -1.0, 0.43261563940523965, 0.42950578688424358),
        (1, 1.2, 0.01, 0.49830733260316119, 0.0025589474010473448),
        (1, 8.0, 2.0, 0.92107272879520357, 0.45000974925947762),
        (3, 0.5, 0.2, 0.0013729944410049224, 0.0029027752881449097),
        (3, 3.0, -1.0, 0.33851216477433239, -0.20624771882874556),
        (3, 1.2, 0.01, 0.032868922484078528, 0.0007716274250556625),
        (3, 8.0, 2.0, -0.94961436770694292, 0.01988801447286049),
    ];

    #[test]
    fn k_matches_reference() {
        for &(nu, x, lnk) in K_REFERENCE {
            let got = bessel_k(nu, x).unwrap();
            assert_eq!(got.phase, 0.0);
            assert!((got.log_magnitude - lnk).abs() < 1e-10, "K_{nu}({x}): {} vs {lnk}", got.log_magnitude);
        }
    }

    #[test]
    fn k0_at_one() {
        let v = bessel_k_value(0, 1.0).unwrap();
        assert!((v / 0.421_024_438_240_708_34 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn recurrence_identity() {
        for nu in 1..=6u32 {
            for &x in &[0.1, 0.7, 2.5, 10.0, 42.0, 100.0] {
                let k = |m: u32| bessel_k(m, x).unwrap();
                // x K_{ν+1} − x K_{ν−1} − 2ν K_ν, all relative to K_{ν+1}
                let base = k(nu + 1).log_magnitude;
                let rel = |m: u32| (k(m).log_magnitude - base).exp();
                let resid = x * 1.0 - x * rel(nu - 1) - 2.0 * nu as f64 * rel(nu);
                assert!(resid.abs() < 1e-9 * x.max(1.0), "ν={nu} x={x} resid={resid}");
            }
        }
    }

    #[test]
    fn large_argument_asymptotics() {
        let x = 50.0f64;
        let lead = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp();
        let v = bessel_k_value(2, x).unwrap();
        assert!((v / lead - 1.0).abs() < 5e-2);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(matches!(bessel_k(0, 0.0), Err(Error::Domain(_))));
        assert!(bessel_k(1, -2.0).is_err());
        assert!(bessel_k(1, f64::NAN).is_err());
    }

    #[test]
    fn j_matches_reference() {
        for &(nu, re, im, jr, ji) in J_REFERENCE {
            let got = bessel_j(nu, Complex64::new(re, im));
            let want = Complex64::new(jr, ji);
            assert!((got - want).norm() < 1e-13 * want.norm().max(1.0), "J_{nu}({re},{im})");
        }
    }
}
