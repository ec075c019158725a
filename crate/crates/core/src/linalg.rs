//! Dense complex linear algebra: eigenvalues of a general square matrix and
//! LU determinants. Matrices are row-major `Vec<Complex64>`.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                for (r, &b) in row.iter_mut().zip(src) {
                    *r += a * b;
                }
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Householder reduction to upper Hessenberg form, in place.
pub fn hessenberg(a: &mut Matrix) {
    let n = a.rows;
    assert_eq!(n, a.cols);
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| a.get(i, k).norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a.get(k + 1, k);
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = a.get(i, k);
        }
        v[k + 1] -= alpha;
        let vnorm: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in &mut v[k + 1..n] {
            *vi /= vnorm;
        }
        // A ← (I − 2vv^H) A on rows k+1.., columns k..
        for j in k..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in k + 1..n {
                s += v[i].conj() * a.get(i, j);
            }
            s *= 2.0;
            for i in k + 1..n {
                let t = a.get(i, j) - v[i] * s;
                a.set(i, j, t);
            }
        }
        // A ← A (I − 2vv^H) on all rows, columns k+1..
        for i in 0..n {
            let row = &mut a.data[i * n..(i + 1) * n];
            let mut s = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                s += row[j] * v[j];
            }
            s *= 2.0;
            for j in k + 1..n {
                row[j] -= s * v[j].conj();
            }
        }
        a.set(k + 1, k, alpha);
        for i in k + 2..n {
            a.set(i, k, Complex64::new(0.0, 0.0));
        }
    }
}

fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    (mid + disc, mid - disc)
}

/// Eigenvalues of a general complex square matrix (order unspecified).
///
/// Hessenberg reduction then single-shift QR with Givens rotations, acting
/// only on the active unreduced window since no Schur vectors are kept.
/// Wilkinson shifts, with an exceptional shift every tenth stalled sweep.
pub fn eigenvalues(mut a: Matrix) -> Result<Vec<Complex64>> {
    let n = a.rows;
    if n != a.cols {
        return Err(Error::domain(format!("eigenvalues of a {}×{} matrix", a.rows, a.cols)));
    }
    if a.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    hessenberg(&mut a);
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let mut rot: Vec<(f64, Complex64)> = vec![(1.0, Complex64::new(0.0, 0.0)); n];
    let max_sweeps = 30 * n;
    let mut sweeps = 0usize;
    let mut stalled = 0usize;
    let mut hi = n - 1;
    let idx = |i: usize, j: usize| i * n + j;
    loop {
        if hi == 0 {
            eig[0] = a.data[0];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let sub = a.data[idx(l, l - 1)].norm();
            let mut scale = a.data[idx(l, l)].norm() + a.data[idx(l - 1, l - 1)].norm();
            if scale == 0.0 {
                scale = a.norm();
            }
            if sub <= f64::EPSILON * scale {
                a.data[idx(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = a.data[idx(hi, hi)];
            hi -= 1;
            stalled = 0;
            continue;
        }
        if l + 1 == hi {
            let (x, y) = eig2(a.data[idx(l, l)], a.data[idx(l, hi)], a.data[idx(hi, l)], a.data[idx(hi, hi)]);
            eig[l] = x;
            eig[hi] = y;
            if l == 0 {
                break;
            }
            hi = l - 1;
            stalled = 0;
            continue;
        }
        sweeps += 1;
        stalled += 1;
        if sweeps > max_sweeps {
            return Err(Error::numerical(format!(
                "QR iteration did not converge after {max_sweeps} sweeps ({} eigenvalues left)",
                hi + 1
            )));
        }
        let d = a.data[idx(hi, hi)];
        let mu = if stalled % 10 == 0 {
            let s = a.data[idx(hi, hi - 1)].re.abs() + a.data[idx(hi - 1, hi - 2)].re.abs();
            d + Complex64::new(0.75 * s, 0.5 * s)
        } else {
            let (x, y) = eig2(a.data[idx(hi - 1, hi - 1)], a.data[idx(hi - 1, hi)], a.data[idx(hi, hi - 1)], d);
            if (x - d).norm() < (y - d).norm() {
                x
            } else {
                y
            }
        };
        for k in l..=hi {
            a.data[idx(k, k)] -= mu;
        }
        for k in l..hi {
            let x = a.data[idx(k, k)];
            let y = a.data[idx(k + 1, k)];
            let r = x.norm().hypot(y.norm());
            let (c, s) = if r == 0.0 {
                (1.0, Complex64::new(0.0, 0.0))
            } else if x.norm() == 0.0 {
                (0.0, y.conj() / r)
            } else {
                (x.norm() / r, (x / x.norm()) * y.conj() / r)
            };
            rot[k] = (c, s);
            let (top, bottom) = a.data.split_at_mut(idx(k + 1, 0));
            let row_k = &mut top[idx(k, k)..idx(k, hi + 1)];
            let row_k1 = &mut bottom[k..=hi];
            for (p, q) in row_k.iter_mut().zip(row_k1.iter_mut()) {
                let (u, w) = (*p, *q);
                *p = c * u + s * w;
                *q = -s.conj() * u + c * w;
            }
        }
        for k in l..hi {
            let (c, s) = rot[k];
            let sc = s.conj();
            for i in l..=(k + 2).min(hi) {
                let u = a.data[idx(i, k)];
                let w = a.data[idx(i, k + 1)];
                a.data[idx(i, k)] = c * u + sc * w;
                a.data[idx(i, k + 1)] = -s * u + c * w;
            }
        }
        for k in l..=hi {
            a.data[idx(k, k)] += mu;
        }
    }
    Ok(eig)
}

/// Determinant by LU with partial pivoting.
pub fn determinant(mut a: Matrix) -> Result<Complex64> {
    let n = a.rows;
    if n != a.cols {
        return Err(Error::domain(format!("determinant of a {}×{} matrix", a.rows, a.cols)));
    }
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a.get(i, k).norm().total_cmp(&a.get(j, k).norm())).unwrap_or(k);
        let pivot = a.get(p, k);
        if pivot.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if p != k {
            for j in 0..n {
                a.data.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        det *= pivot;
        let inv = 1.0 / pivot;
        let (top, bottom) = a.data.split_at_mut((k + 1) * n);
        let pivot_row = &top[k * n + k + 1..(k + 1) * n];
        for row in bottom.chunks_exact_mut(n) {
            let f = row[k] * inv;
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for (x, &y) in row[k + 1..].iter_mut().zip(pivot_row) {
                *x -= f * y;
            }
        }
    }
    Ok(det)
}
