//! Gauss-Legendre quadrature with adaptive panel subdivision.
//!
//! The correlation symbols integrated here are piecewise analytic with a
//! finite set of jump angles, so panels are split at those angles first and
//! then bisected until the local error estimate passes.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::OnceLock;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre polynomial, seeded with the
    /// Chebyshev angle estimate for each root.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_pair(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
            let (_, d) = legendre_pair(n, 0.0);
            weights[n / 2] = 2.0 / (d * d);
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F>(&self, a: f64, b: f64, mut f: F) -> Complex64
    where
        F: FnMut(f64) -> Complex64,
    {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(c + h * x) * *w;
        }
        acc * h
    }
}

fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// Adaptive Gauss-Legendre integration of a complex-valued function.
///
/// The error estimate on a panel is |GL16(panel) - GL16(left) - GL16(right)|;
/// panels failing `tol` scaled by their width fraction are bisected.
pub fn integrate_adaptive<F>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    fn rec<F: FnMut(f64) -> Complex64>(
        f: &mut F,
        rule: &GaussLegendre,
        lo: f64,
        hi: f64,
        coarse: Complex64,
        tol: f64,
        span: f64,
        depth: usize,
    ) -> Result<Complex64> {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(lo, mid, &mut *f);
        let right = rule.integrate(mid, hi, &mut *f);
        let fine = left + right;
        let err = (fine - coarse).norm();
        let local_tol = tol * ((hi - lo) / span).max(1e-3);
        if err < local_tol {
            return Ok(fine);
        }
        if depth >= 48 {
            if err > 100.0 * local_tol {
                return Err(Error::Accuracy(format!(
                    "adaptive quadrature stalled on [{lo}, {hi}], err {err:e}"
                )));
            }
            return Ok(fine);
        }
        Ok(rec(f, rule, lo, mid, left, tol, span, depth + 1)?
            + rec(f, rule, mid, hi, right, tol, span, depth + 1)?)
    }
    let rule = gl16();
    let whole = rule.integrate(a, b, &mut *f);
    rec(f, rule, a, b, whole, tol, b - a, 0)
}

/// Integrate over [a, b] with mandatory panel boundaries at `breaks`
/// (values outside (a, b) are ignored).
pub fn integrate_with_breaks<F>(
    f: &mut F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|x| *x > a + 1e-14 && *x < b - 1e-14)
        .collect();
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup_by(|p, q| (*p - *q).abs() < 1e-12);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut lo = a;
    for c in cuts.into_iter().chain(std::iter::once(b)) {
        if c - lo > 1e-14 {
            acc += integrate_adaptive(f, lo, c, tol)?;
        }
        lo = c;
    }
    Ok(acc)
}

/// Real-valued adaptive integration.
pub fn integrate_adaptive_real<F>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut g = |x: f64| Complex64::new(f(x), 0.0);
    Ok(integrate_adaptive(&mut g, a, b, tol)?.re)
}
