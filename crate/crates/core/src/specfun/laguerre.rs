//! Generalized Laguerre polynomials `L_j^ν(z)` at complex argument.

use super::logcomplex::LogComplex;
use num_complex::Complex64;

/// `L_j^ν(z)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1+ν−z) L_k − (k+ν) L_{k−1}`.
pub fn laguerre(j: usize, nu: u32, z: Complex64) -> Complex64 {
    let nu = nu as f64;
    let mut prev = Complex64::new(1.0, 0.0);
    if j == 0 {
        return prev;
    }
    let mut cur = Complex64::new(1.0 + nu, 0.0) - z;
    for k in 1..j {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + nu - z) * cur - (kf + nu) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_0^ν(z), …, L_{count−1}^ν(z)` in log form.
///
/// For arguments of size `n` the degree-`n` values reach `e^{O(n)}`, so the
/// recurrence pair is renormalised whenever it passes `1e100` and the running
/// scale is folded into each output.
pub fn laguerre_sequence_log(count: usize, nu: u32, z: Complex64) -> Vec<LogComplex> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let nu = nu as f64;
    let mut prev = Complex64::new(1.0, 0.0);
    out.push(LogComplex::ONE);
    if count == 1 {
        return out;
    }
    let mut cur = Complex64::new(1.0 + nu, 0.0) - z;
    let mut scale = 0.0;
    out.push(LogComplex::from_complex(cur));
    for k in 1..count - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + nu - z) * cur - (kf + nu) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let m = cur.norm().max(prev.norm());
        if m > 1e100 {
            cur /= m;
            prev /= m;
            scale += m.ln();
        }
        out.push(LogComplex::from_complex(cur).scale_exp(scale));
    }
    out
}
