//! Quadrature rules: Gauss–Legendre on intervals, trapezoid on circles, and
//! truncated half-line rules built from Gauss–Legendre panels.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    GaussLegendre,
    CircleTrapezoid,
    HalflineExp,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Interval {
        a: f64,
        b: f64,
    },
    Circle {
        center: Complex64,
        radius: f64,
    },
    /// `[start, start + cutoff]` split into `panels` equal pieces.
    HalfLine {
        start: f64,
        cutoff: f64,
        panels: usize,
    },
}

/// `∫ f ≈ Σ weights[i] · f(nodes[i])`; for circles the weights carry `du`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub order: usize,
    pub nodes: Vec<Complex64>,
    pub weights: Vec<Complex64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn apply(&self, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss–Legendre nodes (increasing) and weights on [−1, 1].
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (t * p1 - p0) / (t * t - 1.0))
}

/// Real nodes and weights of `panels` order-`order` Gauss–Legendre panels on [a, b].
pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + 0.5 * h * xi);
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}

pub fn make_rule(kind: RuleKind, order: usize, geometry: Geometry) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::domain("quadrature order must be at least 1"));
    }
    let real = |v: Vec<f64>| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    match (kind, geometry) {
        (RuleKind::GaussLegendre, Geometry::Interval { a, b }) => {
            if !(a.is_finite() && b.is_finite() && b > a) {
                return Err(Error::domain(format!("degenerate interval [{a}, {b}]")));
            }
            let (nodes, weights) = composite_gauss_legendre(a, b, 1, order);
            Ok(QuadratureRule { kind, order, nodes: real(nodes), weights: real(weights) })
        }
        (RuleKind::CircleTrapezoid, Geometry::Circle { center, radius }) => {
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(Error::domain(format!("circle radius must be positive, got {radius}")));
            }
            let m = order as f64;
            let (nodes, weights) = (0..order)
                .map(|k| {
                    let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m);
                    (center + radius * e, Complex64::new(0.0, 2.0 * PI * radius / m) * e)
                })
                .unzip();
            Ok(QuadratureRule { kind, order, nodes, weights })
        }
        (RuleKind::HalflineExp, Geometry::HalfLine { start, cutoff, panels }) => {
            if !(cutoff > 0.0 && cutoff.is_finite() && start.is_finite()) || panels == 0 {
                return Err(Error::domain("half-line rule needs a positive cutoff and ≥ 1 panel"));
            }
            let (nodes, weights) = composite_gauss_legendre(start, start + cutoff, panels, order);
            Ok(QuadratureRule { kind, order, nodes: real(nodes), weights: real(weights) })
        }
        (k, g) => Err(Error::domain(format!("rule {k:?} does not accept geometry {g:?}"))),
    }
}
