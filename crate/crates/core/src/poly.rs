//! Dense polynomial arithmetic and root finding.
//!
//! Roots come from the eigenvalues of the (balanced) companion matrix of the
//! trimmed polynomial, computed by complex single-shift Hessenberg QR, then
//! polished with a few Newton steps on the original coefficients.

use crate::error::{Error, Result};
use num_complex::Complex64;

type C64 = Complex64;

/// Coefficients in ascending powers: `p[k]` multiplies `z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<C64>);

impl Poly {
    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in self.0.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![C64::new(0.0, 0.0)]);
        }
        Poly(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * (k as f64 + 1.0))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![C64::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly(self.0.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (i, &a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, &b) in other.0.iter().enumerate() {
            out[i] += b;
        }
        Poly(out)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[C64]) -> Poly {
        let mut p = Poly(vec![C64::new(1.0, 0.0)]);
        for &r in roots {
            p = p.mul(&Poly(vec![-r, C64::new(1.0, 0.0)]));
        }
        p
    }

    pub fn coeff_norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Outcome of trimming near-zero leading/trailing coefficients.
#[derive(Debug, Clone)]
pub struct Trimmed {
    /// The polynomial after removing the trimmed ends, divided by z^low.
    pub poly: Poly,
    /// Multiplicity of the root at z = 0 removed from the low end.
    pub zeros_at_origin: usize,
    /// Degree drop at the top end ("roots at infinity").
    pub degree_drop: usize,
}

/// Drop leading/trailing coefficients below `rel_tol` times the coefficient
/// norm. Trimmed magnitudes must be genuinely negligible.
pub fn trim(p: &Poly, rel_tol: f64) -> Trimmed {
    let norm = p.coeff_norm();
    let thresh = rel_tol * norm;
    let mut lo = 0;
    while lo + 1 < p.0.len() && p.0[lo].norm() <= thresh {
        lo += 1;
    }
    let mut hi = p.0.len();
    while hi > lo + 1 && p.0[hi - 1].norm() <= thresh {
        hi -= 1;
    }
    Trimmed {
        poly: Poly(p.0[lo..hi].to_vec()),
        zeros_at_origin: lo,
        degree_drop: p.0.len() - hi,
    }
}

/// All roots of `p` (which must have nonzero leading and trailing
/// coefficients; run `trim` first). Residuals are polished by Newton.
pub fn roots(p: &Poly) -> Result<Vec<C64>> {
    let n = p.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = p.0[n];
    if lead.norm() == 0.0 {
        return Err(Error::Structure("zero leading coefficient in roots".into()));
    }
    if n == 1 {
        return Ok(vec![-p.0[0] / p.0[1]]);
    }
    if n == 2 {
        let (a, b, c) = (p.0[2], p.0[1], p.0[0]);
        let disc = (b * b - 4.0 * a * c).sqrt();
        // pick the branch avoiding cancellation
        let q = if (b + disc).norm() > (b - disc).norm() {
            -0.5 * (b + disc)
        } else {
            -0.5 * (b - disc)
        };
        return Ok(vec![q / a, c / q]);
    }

    // monic companion matrix, row-major, upper Hessenberg form
    let mut h = vec![C64::new(0.0, 0.0); n * n];
    for i in 1..n {
        h[i * n + i - 1] = C64::new(1.0, 0.0);
    }
    for i in 0..n {
        h[i * n + n - 1] = -p.0[i] / lead;
    }
    balance(&mut h, n);
    let mut vals = hessenberg_qr(&mut h, n)?;
    for z in vals.iter_mut() {
        *z = newton_polish(p, *z);
    }
    Ok(vals)
}

/// Simple two-sided diagonal balancing (powers of 2).
fn balance(h: &mut [C64], n: usize) {
    for _ in 0..8 {
        let mut done = true;
        for i in 0..n {
            let mut row = 0.0;
            let mut col = 0.0;
            for j in 0..n {
                if j != i {
                    row += h[i * n + j].norm();
                    col += h[j * n + i].norm();
                }
            }
            if row == 0.0 || col == 0.0 {
                continue;
            }
            let mut f = 1.0f64;
            let s = col + row;
            let mut c = col;
            while c < row / 2.0 {
                c *= 2.0;
                f *= 2.0;
            }
            while c > row * 2.0 {
                c /= 2.0;
                f /= 2.0;
            }
            if (col * f + row / f) < 0.95 * s {
                done = false;
                for j in 0..n {
                    h[i * n + j] /= f;
                }
                for j in 0..n {
                    h[j * n + i] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Complex single-shift QR on an upper Hessenberg matrix; eigenvalues only.
fn hessenberg_qr(h: &mut [C64], n: usize) -> Result<Vec<C64>> {
    let mut vals = Vec::with_capacity(n);
    let mut hi = n; // active block is 0..hi
    let mut iters_since_deflate = 0usize;
    let mut total_iters = 0usize;
    while hi > 0 {
        if hi == 1 {
            vals.push(h[0]);
            break;
        }
        // look for a negligible subdiagonal from the bottom
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[(lo - 1) * n + lo - 1].norm() + h[lo * n + lo].norm();
            if h[lo * n + lo - 1].norm() <= f64::EPSILON * s.max(1e-300) {
                h[lo * n + lo - 1] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            vals.push(h[(hi - 1) * n + hi - 1]);
            hi -= 1;
            iters_since_deflate = 0;
            continue;
        }
        if hi - lo == 2 {
            let (m1, m2) = eig2(
                h[lo * n + lo],
                h[lo * n + lo + 1],
                h[(lo + 1) * n + lo],
                h[(lo + 1) * n + lo + 1],
            );
            vals.push(m1);
            vals.push(m2);
            hi = lo;
            iters_since_deflate = 0;
            continue;
        }
        total_iters += 1;
        iters_since_deflate += 1;
        if total_iters > 80 * n {
            return Err(Error::Numerical("companion QR did not converge".into()));
        }
        // Wilkinson shift from the trailing 2x2, with an exceptional shift to
        // break rare stagnation cycles
        let b = h[(hi - 2) * n + hi - 1];
        let c = h[(hi - 1) * n + hi - 2];
        let d = h[(hi - 1) * n + hi - 1];
        let (mu1, mu2) = eig2(h[(hi - 2) * n + hi - 2], b, c, d);
        let mut shift = if (mu1 - d).norm() < (mu2 - d).norm() {
            mu1
        } else {
            mu2
        };
        if iters_since_deflate % 12 == 11 {
            shift = d + C64::new(1.5 * c.norm(), 0.5 * b.norm());
        }
        // explicit shifted QR step: Q^H (H - mu) = R, then H := R Q + mu
        for r in lo..hi {
            h[r * n + r] -= shift;
        }
        let mut rots = Vec::with_capacity(hi - lo - 1);
        for k in lo..hi - 1 {
            let x = h[k * n + k];
            let y = h[(k + 1) * n + k];
            let rho = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cg, sg) = if rho < 1e-300 {
                (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
            } else {
                (x / rho, y / rho)
            };
            rots.push((cg, sg));
            for j in k..hi {
                let u = h[k * n + j];
                let v = h[(k + 1) * n + j];
                h[k * n + j] = cg.conj() * u + sg.conj() * v;
                h[(k + 1) * n + j] = -sg * u + cg * v;
            }
        }
        for (k0, &(cg, sg)) in rots.iter().enumerate() {
            let k = lo + k0;
            let top = (k + 1).min(hi - 1);
            for r in lo..=top {
                let u = h[r * n + k];
                let v = h[r * n + k + 1];
                h[r * n + k] = u * cg + v * sg;
                h[r * n + k + 1] = -u * sg.conj() + v * cg.conj();
            }
        }
        for r in lo..hi {
            h[r * n + r] += shift;
        }
    }
    Ok(vals)
}

/// Eigenvalues of a 2x2 complex matrix.
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    (0.5 * (tr + disc), 0.5 * (tr - disc))
}

fn newton_polish(p: &Poly, mut z: C64) -> C64 {
    let dp = p.derivative();
    let mut best = z;
    let mut best_res = p.eval(z).norm();
    for _ in 0..12 {
        let f = p.eval(z);
        let d = dp.eval(z);
        if d.norm() < 1e-300 {
            break;
        }
        let step = f / d;
        z -= step;
        let res = p.eval(z).norm();
        if res < best_res {
            best_res = res;
            best = z;
        }
        if step.norm() < 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    best
}
