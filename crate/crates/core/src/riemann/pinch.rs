//! Degeneration limits: entropy divergence at unit-circle pinchings, the
//! log growth of the transposed period matrix, and the two-term theta limit
//! for merging branch points away from the circle.

use super::curve::HyperellipticCurve;
use super::entropy::{entropy_contour, modular_swap};
use super::theta::{theta_with_char, Characteristics};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use num_complex::Complex64;
use std::f64::consts::PI;

type C64 = Complex64;

/// Outcome of a divergence fit along a degenerating family.
#[derive(Debug, Clone)]
pub struct PinchFit {
    pub gaps: Vec<f64>,
    pub values: Vec<f64>,
    /// Successive-difference slopes against -log(gap).
    pub slopes: Vec<f64>,
    /// Linear extrapolation of the slope sequence to zero gap.
    pub extrapolated_slope: f64,
}

fn fit_against_log_gap(gaps: &[f64], values: &[f64]) -> Result<PinchFit> {
    if gaps.len() != values.len() || gaps.len() < 3 {
        return Err(Error::Fit(
            "need at least three family members for a slope fit".into(),
        ));
    }
    for w in gaps.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::Fit("gaps must decrease along the family".into()));
        }
    }
    let mut slopes = Vec::new();
    for k in 0..gaps.len() - 1 {
        let ds = values[k + 1] - values[k];
        let dl = gaps[k].ln() - gaps[k + 1].ln();
        slopes.push(ds / dl);
    }
    let n = slopes.len();
    let extrapolated_slope = if n >= 2 {
        // leading corrections are linear in the gap; one Richardson step
        let ratio = gaps[n - 1] / gaps[n - 2];
        (slopes[n - 1] - ratio * slopes[n - 2]) / (1.0 - ratio)
    } else {
        slopes[n - 1]
    };
    Ok(PinchFit {
        gaps: gaps.to_vec(),
        values: values.to_vec(),
        slopes,
        extrapolated_slope,
    })
}

/// Entropy divergence along a family of gapped curves whose oriented pair
/// approaches the unit circle: fits the coefficient of `-log(gap)`. The
/// entropy is evaluated through the transposed basis, which stays
/// conditioned arbitrarily close to the degeneration.
pub fn unit_pinch_divergence(
    family: &[HyperellipticCurve],
    alpha: f64,
    x_size: usize,
) -> Result<PinchFit> {
    let mut gaps = Vec::new();
    let mut entropies = Vec::new();
    for curve in family {
        let oriented = curve.orient_for_pinch()?;
        gaps.push(oriented.pinch_gap());
        // the transposed basis is perfectly conditioned near the
        // degeneration; where its gauge cannot be resolved (complex
        // approaching pairs) the standard basis still works, since its
        // imaginary part only collapses logarithmically with the gap
        let s = match modular_swap(&oriented)
            .and_then(|sw| sw.determinant_factor())
            .and_then(|f| entropy_contour(&f, alpha, x_size))
        {
            Ok(s) => s,
            Err(_) => {
                let factor = super::entropy::DeterminantFactor::from_curve(curve)?;
                entropy_contour(&factor, alpha, x_size)?
            }
        };
        entropies.push(s);
    }
    fit_against_log_gap(&gaps, &entropies)
}

/// Log-divergence of the transposed period matrix entry that tracks the
/// pinching: fits `Im Pi'_{LL}` against `-log(gap)/pi`.
pub fn pinch_period_divergence(family: &[HyperellipticCurve]) -> Result<PinchFit> {
    let mut gaps = Vec::new();
    let mut values = Vec::new();
    for curve in family {
        let oriented = curve.orient_for_pinch()?;
        let swapped = modular_swap(&oriented)?;
        let l = oriented.range;
        gaps.push(oriented.pinch_gap());
        values.push(swapped.pi_prime[(l - 1, l - 1)].im);
    }
    fit_against_log_gap(&gaps, &values)
}

/// Entropies along a family whose roots merge away from the unit circle,
/// against the entropy of the reduced-range curve they converge to.
pub fn outside_degeneration_report(
    family: &[HyperellipticCurve],
    reduced: &HyperellipticCurve,
    alpha: f64,
    x_size: usize,
) -> Result<(Vec<f64>, f64)> {
    let mut entropies = Vec::new();
    for curve in family {
        let factor = super::entropy::DeterminantFactor::from_curve(curve)?;
        entropies.push(entropy_contour(&factor, alpha, x_size)?);
    }
    let reduced_factor = super::entropy::DeterminantFactor::from_curve(reduced)?;
    let reduced_entropy = entropy_contour(&reduced_factor, alpha, x_size)?;
    Ok((entropies, reduced_entropy))
}

/// Both sides of the two-term limit of the theta function when the branch
/// points across cut `r_hat` (one-based cycle index) merge with the same
/// character: the left side is `theta * exp(-pi i Pi_{rr}/4)`, the right the
/// surviving pair of reduced-genus terms.
pub fn outside_merge_theta_limit(
    chars: &Characteristics,
    s: &[C64],
    pi_mat: &CMat,
    r_hat: usize,
    tol: f64,
) -> Result<(C64, C64)> {
    let g = pi_mat.rows;
    if r_hat == 0 || r_hat > g {
        return Err(Error::Domain("cycle index out of range".into()));
    }
    let r = r_hat - 1;
    let mu_r = chars.mu[r];
    if (mu_r.abs() - 0.5).abs() > 1e-12 {
        return Err(Error::Domain(
            "two-term limit requires a same-character pair (mu = +-1/2)".into(),
        ));
    }
    let lhs =
        theta_with_char(chars, s, pi_mat, tol)? * (C64::new(0.0, -PI / 4.0) * pi_mat[(r, r)]).exp();

    // reduced data: drop row/column r
    let keep: Vec<usize> = (0..g).filter(|&i| i != r).collect();
    let pi_red = CMat::from_fn(g - 1, g - 1, |i, j| pi_mat[(keep[i], keep[j])]);
    let chars_red = Characteristics {
        mu: keep.iter().map(|&i| chars.mu[i]).collect(),
        nu: keep.iter().map(|&i| chars.nu[i]).collect(),
    };
    let delta: Vec<C64> = keep.iter().map(|&i| pi_mat[(i, r)]).collect();
    let phase = C64::new(0.0, 2.0 * PI) * (s[r] + chars.nu[r]) * mu_r;
    let mut rhs = C64::new(0.0, 0.0);
    for sign in [1.0, -1.0] {
        let arg: Vec<C64> = keep
            .iter()
            .enumerate()
            .map(|(idx, &i)| s[i] + sign * mu_r * delta[idx])
            .collect();
        rhs += (sign * phase).exp() * theta_with_char(&chars_red, &arg, &pi_red, tol)?;
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::CouplingSet;
    use crate::riemann::entropy::DeterminantFactor;

    /// Nearest-neighbour family approaching the critical line from above.
    fn xy_pinch_family(gamma: f64, ts: &[f64]) -> Vec<HyperellipticCurve> {
        ts.iter()
            .map(|&t| {
                HyperellipticCurve::from_chain(&CouplingSet::xy_dm(gamma, 0.0, 2.0 + t)).unwrap()
            })
            .collect()
    }

    #[test]
    fn swap_identity_is_exact_genus_one() {
        // far from degeneration the transposed representation must agree
        // exactly with the standard one
        let curve = HyperellipticCurve::from_chain(&CouplingSet::xy_dm(0.5, 0.0, 3.0))
            .unwrap()
            .orient_for_pinch()
            .unwrap();
        let std_factor = DeterminantFactor::from_curve(&curve).unwrap();
        let swapped = modular_swap(&curve).unwrap().determinant_factor().unwrap();
        for beta in [
            C64::new(0.1, 0.0),
            C64::new(0.2, 0.3),
            C64::new(-0.35, 0.12),
        ] {
            let a = std_factor.log_pair(beta).unwrap();
            let b = swapped.log_pair(beta).unwrap();
            assert!(
                (a - b).norm() < 1e-8 * (1.0 + a.norm()),
                "beta {beta}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn swap_identity_is_exact_genus_three() {
        let zeros = [
            C64::new(0.2, 0.0),
            C64::new(0.5, 0.0),
            C64::new(2.2, 0.0),
            C64::new(4.0, 0.0),
        ];
        let chain = CouplingSet::from_pc_plus_factor(&zeros).unwrap();
        let curve = HyperellipticCurve::from_chain(&chain)
            .unwrap()
            .orient_for_pinch()
            .unwrap();
        let std_factor = DeterminantFactor::from_curve(&curve).unwrap();
        let swapped = modular_swap(&curve).unwrap().determinant_factor().unwrap();
        for beta in [C64::new(0.15, 0.0), C64::new(0.1, 0.25)] {
            let a = std_factor.log_pair(beta).unwrap();
            let b = swapped.log_pair(beta).unwrap();
            assert!(
                (a - b).norm() < 1e-7 * (1.0 + a.norm()),
                "beta {beta}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn transposed_period_entry_diverges_logarithmically() {
        let family = xy_pinch_family(0.5, &[0.08, 0.04, 0.02, 0.01, 0.005]);
        let fit = pinch_period_divergence(&family).unwrap();
        // Im Pi'_{LL} ~ -log(gap)/pi
        let expect = 1.0 / PI;
        assert!(
            (fit.extrapolated_slope - expect).abs() < 0.02 * expect,
            "slope {} vs {expect}",
            fit.extrapolated_slope
        );
    }

    #[test]
    fn swap_characteristic_vanishes_for_opposite_characters() {
        let curve = HyperellipticCurve::from_chain(&CouplingSet::xy_dm(0.5, 0.0, 2.1))
            .unwrap()
            .orient_for_pinch()
            .unwrap();
        let l = curve.range;
        // approaching pair must carry opposite characters
        assert_eq!(curve.eps[2 * l - 1], -curve.eps[2 * l + 1]);
        let swapped = modular_swap(&curve).unwrap();
        assert_eq!(swapped.mu_prime[l - 1], 0.0);
    }

    #[test]
    fn two_term_limit_on_synthetic_matrices() {
        // symmetric base matrix with a growing diagonal entry
        let g = 3;
        let base = CMat::from_fn(g, g, |i, j| {
            let re = 0.1 * ((i * 3 + j + 2) as f64).sin();
            let im = if i == j {
                1.0
            } else {
                0.18 * ((i + j) as f64).cos()
            };
            C64::new(0.5 * (re + 0.1 * ((j * 3 + i + 2) as f64).sin()), im)
        });
        let base = {
            let mut m = base.clone();
            for i in 0..g {
                for j in 0..g {
                    let avg = 0.5 * (base[(i, j)] + base[(j, i)]);
                    m[(i, j)] = avg;
                }
            }
            m
        };
        let chars = Characteristics {
            mu: vec![0.5, 0.0, -0.5],
            nu: vec![0.0, 0.5, 0.25],
        };
        let s = [
            C64::new(0.1, 0.05),
            C64::new(-0.2, 0.1),
            C64::new(0.15, -0.08),
        ];
        let mut prev = f64::INFINITY;
        for boost in [2.0, 4.0, 8.0] {
            let mut pi_mat = base.clone();
            pi_mat[(0, 0)] += C64::new(0.0, boost);
            let (lhs, rhs) = outside_merge_theta_limit(&chars, &s, &pi_mat, 1, 1e-13).unwrap();
            let err = (lhs - rhs).norm() / rhs.norm();
            assert!(err < prev, "two-term limit must improve: {err:e}");
            prev = err;
        }
        assert!(prev < 1e-8, "residual {prev:e}");
    }
}
