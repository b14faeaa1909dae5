//! Dense complex linear algebra: Hermitian eigenvalues and small LU solves.
//!
//! The eigensolver reduces a Hermitian matrix to a real symmetric tridiagonal
//! by Householder reflectors with real subdiagonal, then runs implicit-shift
//! QL on the tridiagonal. Eigenvalues only; this is the hot path for the
//! correlation spectra (matrices up to ~1000x1000).

use crate::error::{Error, Result};
use num_complex::Complex64;

type C64 = Complex64;

/// Eigenvalues of a Hermitian matrix given in row-major order.
/// The contents of `a` are destroyed. Returned eigenvalues are ascending.
pub fn hermitian_eigenvalues(a: &mut [C64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a[0].re]);
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![C64::ZERO; n];
    let mut w = vec![C64::ZERO; n];

    for i in 0..n - 1 {
        // Reflector zeroing a[i+2.., i] and making the subdiagonal real.
        let alpha = a[(i + 1) * n + i];
        let mut xnorm2 = 0.0;
        for k in i + 2..n {
            xnorm2 += a[k * n + i].norm_sqr();
        }
        let (beta, tau) = if xnorm2 == 0.0 && alpha.im == 0.0 {
            (alpha.re, C64::ZERO)
        } else {
            let anorm = (alpha.norm_sqr() + xnorm2).sqrt();
            let beta = if alpha.re >= 0.0 { -anorm } else { anorm };
            let tau = C64::new((beta - alpha.re) / beta, -alpha.im / beta);
            let scale = (alpha - beta).finv();
            for k in i + 2..n {
                a[k * n + i] *= scale;
            }
            (beta, tau)
        };
        e[i + 1] = beta;

        if tau != C64::ZERO {
            // v = (1, a[i+2..,i]); w = tau (A v - (tau/2)(v' A v) v) on the
            // trailing block, then rank-2 update A -= v w' + w v'.
            v[i + 1] = C64::new(1.0, 0.0);
            for k in i + 2..n {
                v[k] = a[k * n + i];
            }
            for r in i + 1..n {
                let mut acc = C64::ZERO;
                let row = &a[r * n..(r + 1) * n];
                for k in i + 1..n {
                    acc += row[k] * v[k];
                }
                w[r] = tau * acc;
            }
            let mut vhw = C64::ZERO;
            for k in i + 1..n {
                vhw += v[k].conj() * w[k];
            }
            let corr = -0.5 * tau * vhw.conj();
            for k in i + 1..n {
                w[k] += corr * v[k];
            }
            for r in i + 1..n {
                let vr = v[r];
                let wr = w[r];
                let row = &mut a[r * n..(r + 1) * n];
                for k in i + 1..n {
                    row[k] -= vr * w[k].conj() + wr * v[k].conj();
                }
            }
        }
    }
    for j in 0..n {
        d[j] = a[j * n + j].re;
    }

    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(d)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix.
/// `e[0]` is unused; `e[i]` couples rows i-1 and i.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numerical("tridiagonal QL failed to converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if i == l {
                    d[l] -= p;
                    e[l] = g;
                    e[m] = 0.0;
                }
            }
        }
    }
    Ok(())
}

/// Cyclic Jacobi eigenvalues for Hermitian matrices. Much slower than the
/// Householder path; serves as an independent recomputation for checks.
pub fn hermitian_eigenvalues_jacobi(a: &[C64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let norm: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() < 1e-14 * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.norm() < 1e-300 {
                    continue;
                }
                let phase = apq / apq.norm();
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = tau.signum() / (tau.abs() + (tau * tau + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = phase * (t * c);
                // columns
                for r in 0..n {
                    let arp = m[r * n + p];
                    let arq = m[r * n + q];
                    m[r * n + p] = arp * c - arq * s.conj();
                    m[r * n + q] = arp * s + arq * c;
                }
                // rows
                for r in 0..n {
                    let apr = m[p * n + r];
                    let aqr = m[q * n + r];
                    m[p * n + r] = apr * c - aqr * s;
                    m[q * n + r] = apr * s.conj() + aqr * c;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| m[i * n + i].re).collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    vals
}

/// Small dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![C64::ZERO; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let s = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += s * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn asymmetry(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the imaginary part (as a real symmetric matrix).
    pub fn imag_part_eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.rows;
        let mut h: Vec<C64> = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let sym = 0.5 * (self[(i, j)].im + self[(j, i)].im);
                h.push(C64::new(sym, 0.0));
            }
        }
        hermitian_eigenvalues(&mut h, n)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solve A X = B by LU with partial pivoting. A is square.
pub fn solve_lu(a: &CMat, b: &CMat) -> Result<CMat> {
    let n = a.rows;
    assert_eq!(a.cols, n);
    assert_eq!(b.rows, n);
    let mut lu = a.data.clone();
    let mut x = b.clone();
    let k = b.cols;
    for col in 0..n {
        let mut piv = col;
        let mut best = lu[col * n + col].norm();
        for r in col + 1..n {
            let v = lu[r * n + col].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-300 {
            return Err(Error::Numerical("singular matrix in LU solve".into()));
        }
        if piv != col {
            for j in 0..n {
                lu.swap(col * n + j, piv * n + j);
            }
            for j in 0..k {
                x.data.swap(col * k + j, piv * k + j);
            }
        }
        let diag = lu[col * n + col];
        for r in col + 1..n {
            let factor = lu[r * n + col] / diag;
            lu[r * n + col] = factor;
            for j in col + 1..n {
                let v = lu[col * n + j];
                lu[r * n + j] -= factor * v;
            }
            for j in 0..k {
                let v = x.data[col * k + j];
                x.data[r * k + j] -= factor * v;
            }
        }
    }
    for col in (0..n).rev() {
        let diag = lu[col * n + col];
        for j in 0..k {
            x.data[col * k + j] /= diag;
        }
        for r in 0..col {
            let factor = lu[r * n + col];
            for j in 0..k {
                let v = x.data[col * k + j];
                x.data[r * k + j] -= factor * v;
            }
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn splitmix(state: &mut u64) -> f64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }

    fn random_hermitian(n: usize, seed: u64) -> Vec<C64> {
        let mut s = seed;
        let mut a = vec![C64::ZERO; n * n];
        for i in 0..n {
            for j in i..n {
                let z = if i == j {
                    C64::new(splitmix(&mut s), 0.0)
                } else {
                    C64::new(splitmix(&mut s), splitmix(&mut s))
                };
                a[i * n + j] = z;
                a[j * n + i] = z.conj();
            }
        }
        a
    }

    #[test]
    fn householder_matches_jacobi() {
        for (n, seed) in [(5, 1u64), (17, 2), (40, 3)] {
            let a = random_hermitian(n, seed);
            let jac = hermitian_eigenvalues_jacobi(&a, n);
            let mut work = a.clone();
            let ours = hermitian_eigenvalues(&mut work, n).unwrap();
            for (x, y) in ours.iter().zip(&jac) {
                assert!((x - y).abs() < 1e-10, "n={n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn tridiagonal_toeplitz_spectrum() {
        // second-difference matrix: eigenvalues 2 - 2 cos(k pi / (n+1))
        let n = 12;
        let mut a = vec![C64::ZERO; n * n];
        for i in 0..n {
            a[i * n + i] = C64::new(2.0, 0.0);
            if i + 1 < n {
                a[i * n + i + 1] = C64::new(-1.0, 0.0);
                a[(i + 1) * n + i] = C64::new(-1.0, 0.0);
            }
        }
        let got = hermitian_eigenvalues(&mut a, n).unwrap();
        let mut expect: Vec<f64> = (1..=n)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn lu_solves_random_system() {
        let mut s = 7u64;
        let n = 6;
        let a = CMat::from_fn(n, n, |_, _| C64::new(splitmix(&mut s), splitmix(&mut s)));
        let xs = CMat::from_fn(n, 2, |_, _| C64::new(splitmix(&mut s), splitmix(&mut s)));
        let b = a.matmul(&xs);
        let got = solve_lu(&a, &b).unwrap();
        for (u, v) in got.data.iter().zip(&xs.data) {
            assert!((u - v).norm() < 1e-11);
        }
    }
}
