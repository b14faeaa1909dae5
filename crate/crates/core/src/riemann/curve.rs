//! Hyperelliptic curve data for parity- and charge-symmetric gapped chains:
//! ordered branch points, zero/pole indices of the squared symbol factor,
//! cut system and theta characteristics.

use crate::chain::CouplingSet;
use crate::error::{Error, Result};
use crate::mobius::MobiusMap;
use crate::poly::{self, Poly};
use num_complex::Complex64;

type C64 = Complex64;

/// Minimal relative distance between branch points before the curve is
/// treated as degenerate.
const SIMPLE_ROOT_TOL: f64 = 1e-9;

/// Branch data of `w^2 = P(z)` with `P = f_plus f_minus`, the two factors of
/// the spectral polynomial of a real-coupling chain.
#[derive(Debug, Clone)]
pub struct HyperellipticCurve {
    /// Branch points ordered with the first `2L` inside the unit circle and
    /// the rest outside; cut `rho` joins positions `2 rho` and `2 rho + 1`
    /// (zero-based).
    pub roots: Vec<C64>,
    /// `+1` where the squared symbol factor has a zero, `-1` at a pole.
    pub eps: Vec<i8>,
    /// Coupling range; the genus is `2L - 1`.
    pub range: usize,
    /// Boost applied to regularize a degree-deficient spectral polynomial
    /// (branch points at the origin and infinity), if any.
    pub regularizing_boost: Option<f64>,
}

impl HyperellipticCurve {
    pub fn genus(&self) -> usize {
        2 * self.range - 1
    }

    /// Build the curve of a gapped chain with real couplings. Chains whose
    /// spectral polynomial drops degree (branch points at zero and infinity)
    /// are first moved by a small admissible boost, which leaves the period
    /// matrix and theta data unchanged.
    pub fn from_chain(chain: &CouplingSet) -> Result<Self> {
        if !chain.is_parity_symmetric() || !chain.is_pc_symmetric() {
            return Err(Error::Unsupported(
                "theta machinery requires real hopping and pairing amplitudes".into(),
            ));
        }
        match Self::from_chain_direct(chain, None) {
            Ok(c) => Ok(c),
            Err(Error::Structure(_)) | Err(Error::Domain(_)) => {
                for zeta in [0.02, -0.02, 0.05, -0.05, 0.11, -0.11] {
                    let m = MobiusMap::boost(zeta);
                    if let Ok(moved) = m.transform_couplings(chain) {
                        if let Ok(c) = Self::from_chain_direct(&moved, Some(zeta)) {
                            return Ok(c);
                        }
                    }
                }
                Err(Error::Structure(
                    "could not regularize the degree-deficient spectral polynomial".into(),
                ))
            }
            Err(e) => Err(e),
        }
    }

    fn from_chain_direct(chain: &CouplingSet, boost: Option<f64>) -> Result<Self> {
        let range = chain.range();
        let fp = chain.plus_factor();
        let fm = chain.minus_factor();
        let mut zeros = factor_roots(&fp, 2 * range)?;
        let poles = factor_roots(&fm, 2 * range)?;
        let mut eps: Vec<i8> = vec![1; zeros.len()];
        zeros.extend(poles.iter().copied());
        eps.extend(std::iter::repeat_n(-1, poles.len()));
        let mut curve = Self::from_tagged_roots(zeros, eps, range)?;
        curve.regularizing_boost = boost;
        Ok(curve)
    }

    /// Build from explicit zero and pole sets of the squared symbol factor.
    /// The pole set must consist of the inverses of the zero set (the
    /// structure every real chain produces).
    pub fn from_factor_roots(zeros: &[C64], range: usize) -> Result<Self> {
        if zeros.len() != 2 * range {
            return Err(Error::Domain(format!(
                "need {} zeros for coupling range {range}",
                2 * range
            )));
        }
        let mut roots: Vec<C64> = zeros.to_vec();
        let mut eps: Vec<i8> = vec![1; roots.len()];
        for z in zeros {
            if z.norm() < 1e-12 {
                return Err(Error::Domain("zero at the origin is degenerate".into()));
            }
            roots.push(z.finv());
            eps.push(-1);
        }
        Self::from_tagged_roots(roots, eps, range)
    }

    /// Order tagged branch points canonically and validate the curve.
    pub fn from_tagged_roots(roots: Vec<C64>, eps: Vec<i8>, range: usize) -> Result<Self> {
        if roots.len() != 4 * range {
            return Err(Error::Structure(format!(
                "expected {} branch points, found {}",
                4 * range,
                roots.len()
            )));
        }
        let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
        // simple roots only
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if (roots[i] - roots[j]).norm() < SIMPLE_ROOT_TOL * scale {
                    return Err(Error::Degenerate(format!(
                        "branch points {} and {} coincide at tolerance",
                        roots[i], roots[j]
                    )));
                }
            }
        }
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        for (i, z) in roots.iter().enumerate() {
            let r = z.norm();
            if (r - 1.0).abs() < 1e-8 {
                return Err(Error::Degenerate(format!(
                    "branch point {z} sits on the unit circle: critical chain"
                )));
            }
            if r < 1.0 {
                inside.push(i);
            } else {
                outside.push(i);
            }
        }
        if inside.len() != 2 * range {
            return Err(Error::Structure(format!(
                "{} branch points inside the unit circle, expected {}",
                inside.len(),
                2 * range
            )));
        }
        let ordered_in = order_side(&roots, &inside)?;
        let ordered_out = order_side(&roots, &outside)?;
        let mut ord_roots = Vec::with_capacity(roots.len());
        let mut ord_eps = Vec::with_capacity(roots.len());
        for &i in ordered_in.iter().chain(&ordered_out) {
            ord_roots.push(roots[i]);
            ord_eps.push(eps[i]);
        }
        let curve = HyperellipticCurve {
            roots: ord_roots,
            eps: ord_eps,
            range,
            regularizing_boost: None,
        };
        curve.validate()?;
        Ok(curve)
    }

    /// Raw constructor keeping the caller's ordering (used by the modular
    /// swap and the pinching families, which need specific positions).
    pub fn with_ordering(roots: Vec<C64>, eps: Vec<i8>, range: usize) -> Result<Self> {
        if roots.len() != 4 * range || eps.len() != 4 * range {
            return Err(Error::Structure("branch point count mismatch".into()));
        }
        Ok(HyperellipticCurve {
            roots,
            eps,
            range,
            regularizing_boost: None,
        })
    }

    fn validate(&self) -> Result<()> {
        // inversion partners carry opposite character
        for (i, z) in self.roots.iter().enumerate() {
            let target = z.finv();
            let found = self.roots.iter().enumerate().any(|(j, w)| {
                crate::chain::rel_dist(*w, target) < 1e-6 && self.eps[j] == -self.eps[i]
            });
            if !found {
                return Err(Error::Structure(format!(
                    "no opposite-character inversion partner for branch point {z}"
                )));
            }
        }
        // cuts join same-side pairs: a realization avoiding the unit circle
        // then always exists, and nothing downstream integrates along the
        // cut path itself
        for rho in 0..2 * self.range {
            let p = self.roots[2 * rho];
            let q = self.roots[2 * rho + 1];
            let inside_p = p.norm() < 1.0;
            let inside_q = q.norm() < 1.0;
            if inside_p != inside_q {
                return Err(Error::Structure(format!(
                    "cut {rho} joins branch points on opposite sides of the circle"
                )));
            }
        }
        Ok(())
    }

    /// Characteristics of the theta function attached to this ordering.
    pub fn characteristics(&self) -> (Vec<f64>, Vec<f64>) {
        let g = self.genus();
        let mut mu = Vec::with_capacity(g);
        let mut nu = Vec::with_capacity(g);
        for r in 1..=g {
            mu.push((self.eps[2 * r] as f64 + self.eps[2 * r + 1] as f64) / 4.0);
            let mut acc = 0.0;
            for j in 1..=2 * r {
                acc += self.eps[j] as f64;
            }
            nu.push(acc / 4.0);
        }
        (mu, nu)
    }

    /// Direction vector multiplying `beta(lambda)` in the determinant
    /// asymptotics: zeros then ones, the ones on the last `L` entries.
    pub fn e_vector(&self) -> Vec<f64> {
        let g = self.genus();
        let mut e = vec![0.0; g];
        for item in e.iter_mut().skip(self.range - 1) {
            *item = 1.0;
        }
        e
    }

    /// Monic polynomial value `prod (z - z_j)`; the square of the branch
    /// function up to a constant that cancels in normalized periods.
    pub fn p_at(&self, z: C64) -> C64 {
        let mut acc = C64::new(1.0, 0.0);
        for &r in &self.roots {
            acc *= z - r;
        }
        acc
    }

    /// Reorder so that the inside branch point closest to the unit circle
    /// sits at position `2L` and its inversion partner at `2L + 2`, the
    /// arrangement the modular swap expects. For a complex approaching pair
    /// the conjugates are placed at `2L - 1` and `2L + 1`.
    pub fn orient_for_pinch(&self) -> Result<HyperellipticCurve> {
        let l = self.range;
        let inside: Vec<usize> = (0..2 * l).collect();
        let i_star = *inside
            .iter()
            .max_by(|&&a, &&b| {
                self.roots[a]
                    .norm()
                    .partial_cmp(&self.roots[b].norm())
                    .unwrap()
            })
            .ok_or_else(|| Error::Structure("empty curve".into()))?;
        let target = self.roots[i_star].conj().finv();
        let j_star = (2 * l..4 * l)
            .find(|&j| crate::chain::rel_dist(self.roots[j], target) < 1e-5)
            .ok_or_else(|| {
                Error::Ordering(format!(
                    "no inversion partner for the approaching root {}",
                    self.roots[i_star]
                ))
            })?;
        let is_complex = self.roots[i_star].im.abs() > 1e-9 * (1.0 + self.roots[i_star].norm());
        let mut inside_order: Vec<usize> = Vec::new();
        let mut tail_inside: Vec<usize> = Vec::new();
        if is_complex {
            let conj_target = self.roots[i_star].conj();
            let c_star = inside
                .iter()
                .copied()
                .find(|&i| i != i_star && crate::chain::rel_dist(self.roots[i], conj_target) < 1e-5)
                .ok_or_else(|| Error::Ordering("conjugate of approaching root missing".into()))?;
            tail_inside.push(c_star);
            tail_inside.push(i_star);
        } else {
            tail_inside.push(i_star);
        }
        for i in inside {
            if !tail_inside.contains(&i) {
                inside_order.push(i);
            }
        }
        inside_order.extend(&tail_inside);

        let mut outside_head: Vec<usize> = Vec::new();
        if is_complex {
            // z_{2L+1} must be the conjugate of z_{2L+2}
            let conj_partner = self.roots[j_star].conj();
            let cj = (2 * l..4 * l)
                .find(|&j| {
                    j != j_star && crate::chain::rel_dist(self.roots[j], conj_partner) < 1e-5
                })
                .ok_or_else(|| {
                    Error::Ordering("conjugate of the outside partner missing".into())
                })?;
            outside_head.push(cj);
            outside_head.push(j_star);
        } else {
            // one outside root precedes the partner
            let first = (2 * l..4 * l)
                .find(|&j| j != j_star)
                .ok_or_else(|| Error::Structure("need at least two outside roots".into()))?;
            outside_head.push(first);
            outside_head.push(j_star);
        }
        let mut outside_order = outside_head.clone();
        for j in 2 * l..4 * l {
            if !outside_order.contains(&j) {
                outside_order.push(j);
            }
        }
        let mut roots = Vec::with_capacity(4 * l);
        let mut eps = Vec::with_capacity(4 * l);
        for &i in inside_order.iter().chain(&outside_order) {
            roots.push(self.roots[i]);
            eps.push(self.eps[i]);
        }
        Ok(HyperellipticCurve {
            roots,
            eps,
            range: l,
            regularizing_boost: self.regularizing_boost,
        })
    }

    /// Gap between the approaching pair at positions 2L and 2L+2.
    pub fn pinch_gap(&self) -> f64 {
        (self.roots[2 * self.range + 1] - self.roots[2 * self.range - 1]).norm()
    }

    /// Swap the branch points at (one-based) positions `2L` and `2L + 1`,
    /// producing the ordering whose cuts enclose a degenerating pair.
    pub fn transposed_for_pinch(&self) -> Result<HyperellipticCurve> {
        let l = self.range;
        let i = 2 * l - 1; // zero-based position of z_{2L}
        let j = 2 * l; // zero-based position of z_{2L+1}
        let pair = self.roots[2 * l + 1]; // z_{2L+2}
        let target = self.roots[i].conj().finv();
        if crate::chain::rel_dist(pair, target) > 1e-6 {
            return Err(Error::Ordering(format!(
                "positions 2L and 2L+2 must hold an inversion pair; found {} and {}",
                self.roots[i], pair
            )));
        }
        let mut roots = self.roots.clone();
        let mut eps = self.eps.clone();
        roots.swap(i, j);
        eps.swap(i, j);
        Ok(HyperellipticCurve {
            roots,
            eps,
            range: self.range,
            regularizing_boost: self.regularizing_boost,
        })
    }
}

/// Roots of a symbol factor, which must have full degree and no root at the
/// origin (otherwise the caller regularizes with a boost).
fn factor_roots(f: &Poly, degree: usize) -> Result<Vec<C64>> {
    let trimmed = poly::trim(f, 1e-13);
    if trimmed.zeros_at_origin > 0 || trimmed.degree_drop > 0 || trimmed.poly.degree() != degree {
        return Err(Error::Structure(format!(
            "symbol factor is degree deficient (degree {} of {degree})",
            trimmed.poly.degree()
        )));
    }
    poly::roots(&trimmed.poly)
}

/// Order one side of the circle: conjugate pairs become adjacent units,
/// real roots pair up in ascending order, units sorted by real part.
fn order_side(roots: &[C64], side: &[usize]) -> Result<Vec<usize>> {
    let mut reals: Vec<usize> = Vec::new();
    let mut complexes: Vec<usize> = Vec::new();
    for &i in side {
        if roots[i].im.abs() < 1e-9 * (1.0 + roots[i].norm()) {
            reals.push(i);
        } else {
            complexes.push(i);
        }
    }
    if !reals.len().is_multiple_of(2) {
        return Err(Error::Structure(
            "odd number of real branch points on one side".into(),
        ));
    }
    reals.sort_by(|&p, &q| roots[p].re.partial_cmp(&roots[q].re).unwrap());
    // conjugate pairing
    let mut used = vec![false; complexes.len()];
    let mut units: Vec<(f64, Vec<usize>)> = Vec::new();
    for k in 0..complexes.len() {
        if used[k] {
            continue;
        }
        let i = complexes[k];
        let target = roots[i].conj();
        let mut best = usize::MAX;
        let mut bd = f64::INFINITY;
        for (m, &j) in complexes.iter().enumerate() {
            if m == k || used[m] {
                continue;
            }
            let d = (roots[j] - target).norm();
            if d < bd {
                bd = d;
                best = m;
            }
        }
        if best == usize::MAX || bd > 1e-6 * (1.0 + target.norm()) {
            return Err(Error::Structure(format!(
                "complex branch point {} lacks a conjugate partner",
                roots[i]
            )));
        }
        used[k] = true;
        used[best] = true;
        let j = complexes[best];
        let (lo, hi) = if roots[i].im < roots[j].im {
            (i, j)
        } else {
            (j, i)
        };
        units.push((roots[i].re, vec![lo, hi]));
    }
    for pair in reals.chunks(2) {
        units.push((roots[pair[0]].re, pair.to_vec()));
    }
    units.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(units.into_iter().flat_map(|(_, v)| v).collect())
}
