//! Riemann theta function with characteristics, as a truncated lattice sum
//! with an ellipsoidal tail bound.

use crate::error::{Error, Result};
use crate::linalg::CMat;
use num_complex::Complex64;
use std::f64::consts::PI;

type C64 = Complex64;

/// Half-integer characteristic pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Characteristics {
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
}

/// A truncated theta series for one period matrix and top characteristic;
/// reusable across argument values up to the stated imaginary norm.
#[derive(Debug, Clone)]
pub struct ThetaSeries {
    g: usize,
    q: Vec<f64>,
    /// Shifted lattice vectors n + p with their quadratic exponents.
    terms: Vec<(Vec<f64>, C64)>,
    max_im_s: f64,
}

impl ThetaSeries {
    /// Precompute the lattice terms needed to evaluate the series to `tol`
    /// for any argument with `|Im s| <= max_im_s`.
    pub fn build(chars: &Characteristics, pi_mat: &CMat, tol: f64, max_im_s: f64) -> Result<Self> {
        let g = pi_mat.rows;
        if chars.mu.len() != g || chars.nu.len() != g {
            return Err(Error::Domain(
                "characteristics dimension does not match the period matrix".into(),
            ));
        }
        let eigs = pi_mat.imag_part_eigenvalues()?;
        let lambda_min = eigs.first().copied().unwrap_or(0.0);
        if lambda_min <= 0.0 {
            return Err(Error::Domain(
                "imaginary part of the period matrix must be positive definite".into(),
            ));
        }
        let sigma = max_im_s.max(0.0);
        let big_l = (1.0 / tol).ln() + 12.0;
        // radius in the Euclidean metric guaranteeing the Gaussian tail bound
        let radius =
            (sigma + (2.0 * sigma * sigma + lambda_min * big_l / PI).sqrt()) / lambda_min + 1.0;
        let p_max = chars.mu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let n_box = (radius + p_max).ceil() as i64 + 1;
        let count_est = (2 * n_box + 1).pow(g as u32);
        if count_est > 40_000_000 {
            return Err(Error::Accuracy(format!(
                "theta truncation box {n_box}^{g} is unreachably large"
            )));
        }
        // keep terms whose worst-case magnitude clears the floor
        let peak = PI * sigma * sigma / lambda_min;
        let floor = tol.ln() - 6.0 * std::f64::consts::LN_10 - peak.max(0.0);
        let mut terms = Vec::new();
        let mut n = vec![-n_box; g];
        loop {
            let m: Vec<f64> = (0..g).map(|i| n[i] as f64 + chars.mu[i]).collect();
            // quadratic exponent pi i m^T Pi m
            let mut quad = C64::new(0.0, 0.0);
            for i in 0..g {
                for j in 0..g {
                    quad += pi_mat[(i, j)] * (m[i] * m[j]);
                }
            }
            let quad = C64::new(0.0, PI) * quad;
            let m_norm = m.iter().map(|v| v * v).sum::<f64>().sqrt();
            if quad.re + 2.0 * PI * sigma * m_norm > floor {
                terms.push((m, quad));
            }
            // odometer increment
            let mut i = 0;
            loop {
                if i == g {
                    break;
                }
                n[i] += 1;
                if n[i] <= n_box {
                    break;
                }
                n[i] = -n_box;
                i += 1;
            }
            if i == g {
                break;
            }
        }
        Ok(ThetaSeries {
            g,
            q: chars.nu.clone(),
            terms,
            max_im_s,
        })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn value(&self, s: &[C64]) -> Result<C64> {
        Ok(self.value_and_gradient_impl(s, false)?.0)
    }

    /// Value and the gradient with respect to the components of `s`.
    pub fn value_and_gradient(&self, s: &[C64]) -> Result<(C64, Vec<C64>)> {
        self.value_and_gradient_impl(s, true)
    }

    fn value_and_gradient_impl(&self, s: &[C64], want_grad: bool) -> Result<(C64, Vec<C64>)> {
        if s.len() != self.g {
            return Err(Error::Domain("argument dimension mismatch".into()));
        }
        let im_norm = s.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
        if im_norm > self.max_im_s + 1e-9 {
            return Err(Error::Accuracy(format!(
                "theta series was truncated for |Im s| <= {}, got {im_norm}",
                self.max_im_s
            )));
        }
        let sq: Vec<C64> = s
            .iter()
            .zip(&self.q)
            .map(|(si, qi)| si + C64::new(*qi, 0.0))
            .collect();
        let mut total = C64::new(0.0, 0.0);
        let mut grad = vec![C64::new(0.0, 0.0); if want_grad { self.g } else { 0 }];
        for (m, quad) in &self.terms {
            let mut lin = C64::new(0.0, 0.0);
            for (mi, sqi) in m.iter().zip(&sq) {
                lin += sqi * *mi;
            }
            let term = (quad + C64::new(0.0, 2.0 * PI) * lin).exp();
            total += term;
            if want_grad {
                for (gi, mi) in grad.iter_mut().zip(m) {
                    *gi += term * C64::new(0.0, 2.0 * PI * mi);
                }
            }
        }
        Ok((total, grad))
    }
}

/// One-shot evaluation of the theta function with characteristics.
pub fn theta_with_char(chars: &Characteristics, s: &[C64], pi_mat: &CMat, tol: f64) -> Result<C64> {
    let im_norm = s.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
    let series = ThetaSeries::build(chars, pi_mat, tol, im_norm)?;
    series.value(s)
}

/// Normalized theta: value divided by the value at the origin.
pub fn normalized_theta(
    chars: &Characteristics,
    s: &[C64],
    pi_mat: &CMat,
    tol: f64,
) -> Result<C64> {
    let im_norm = s.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
    let series = ThetaSeries::build(chars, pi_mat, tol, im_norm)?;
    let zero = vec![C64::new(0.0, 0.0); pi_mat.rows];
    let at_zero = series.value(&zero)?;
    if at_zero.norm() < 1e-12 {
        return Err(Error::ThetaNull(at_zero.norm()));
    }
    Ok(series.value(s)? / at_zero)
}
