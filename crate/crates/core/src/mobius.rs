//! Mobius maps on the Riemann sphere, the circle-preserving SO(1,1)
//! subgroup, their action on chain couplings, and the Jacobian bookkeeping
//! behind the entropy transformation laws.

use crate::chain::{CouplingSet, CriticalityReport, SpectralCurve, TOL_CIRCLE};
use crate::error::{Error, Result};
use crate::poly::Poly;
use num_complex::Complex64;

type C64 = Complex64;

const DET_TOL: f64 = 1e-12;

/// A fractional linear map `z -> (a z + b) / (c z + d)` with unit
/// determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl MobiusMap {
    /// Normalizes the determinant to one.
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() < 1e-150 {
            return Err(Error::Domain("Mobius matrix is singular".into()));
        }
        let s = det.sqrt();
        Ok(MobiusMap {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        MobiusMap {
            a: C64::new(1.0, 0.0),
            b: C64::new(0.0, 0.0),
            c: C64::new(0.0, 0.0),
            d: C64::new(1.0, 0.0),
        }
    }

    /// Hyperbolic element of the circle-preserving subgroup with fixed
    /// points at plus and minus one.
    pub fn boost(zeta: f64) -> Self {
        MobiusMap {
            a: C64::new(zeta.cosh(), 0.0),
            b: C64::new(zeta.sinh(), 0.0),
            c: C64::new(zeta.sinh(), 0.0),
            d: C64::new(zeta.cosh(), 0.0),
        }
    }

    /// Rotation of the unit circle by angle `phi`.
    pub fn rotation(phi: f64) -> Self {
        let half = C64::new(0.0, 0.5 * phi).exp();
        MobiusMap {
            a: half,
            b: C64::new(0.0, 0.0),
            c: C64::new(0.0, 0.0),
            d: half.finv(),
        }
    }

    pub fn determinant(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// True when the entries form `(cosh z, sinh z; sinh z, cosh z)`.
    pub fn is_so11(&self) -> bool {
        let tol = 1e-10;
        let real = self.a.im.abs() < tol
            && self.b.im.abs() < tol
            && self.c.im.abs() < tol
            && self.d.im.abs() < tol;
        real && (self.a - self.d).norm() < tol
            && (self.b - self.c).norm() < tol
            && (self.a.re * self.a.re - self.b.re * self.b.re - 1.0).abs() < 1e-9
            && self.a.re > 0.0
    }

    /// Rapidity of an SO(1,1) element.
    pub fn zeta(&self) -> Option<f64> {
        if self.is_so11() {
            Some((self.a.re + self.b.re).ln())
        } else {
            None
        }
    }

    /// True for maps of the form `(a, b; conj b, conj a)` (up to overall
    /// sign), which preserve the unit circle.
    pub fn preserves_circle(&self) -> bool {
        let tol = 1e-10;
        let direct = (self.d - self.a.conj()).norm() < tol && (self.c - self.b.conj()).norm() < tol;
        let negated =
            (self.d + self.a.conj()).norm() < tol && (self.c + self.b.conj()).norm() < tol;
        direct || negated
    }

    /// Image of `z` and the complex Jacobian `dz'/dz = (c z + d)^{-2}`.
    pub fn map_point(&self, z: C64) -> Result<(C64, C64)> {
        let den = self.c * z + self.d;
        if den.norm() < 1e-14 * (1.0 + z.norm()) {
            return Err(Error::Pole { z });
        }
        let zp = (self.a * z + self.b) / den;
        let jac = (den * den).finv();
        Ok((zp, jac))
    }

    /// Image of the point at infinity.
    pub fn map_infinity(&self) -> Option<C64> {
        if self.c.norm() < 1e-14 {
            None // fixed at infinity
        } else {
            Some(self.a / self.c)
        }
    }

    /// Arc-length stretching `d theta'/d theta` at a unit-modulus point,
    /// for circle-preserving maps. Real and positive.
    pub fn unit_circle_jacobian(&self, u: C64) -> f64 {
        (self.c * u + self.d).norm_sqr().recip()
    }

    /// Whether the map keeps each root of the curve on its side of the unit
    /// circle and preserves the quartet structure of the image multiset.
    pub fn is_admissible(&self, curve: &SpectralCurve, tol: f64) -> AdmissibilityReport {
        let tol = tol.max(1e-9);
        let circle_ok = self.preserves_circle();
        let mut moved_roots = Vec::new();
        let mut side_preserved = true;
        let mut indeterminate = false;

        // finite roots, with the origin standing in for its orbit partner at
        // infinity when the spectral polynomial is degree deficient
        let mut sides: Vec<i8> = Vec::new(); // -1 inside, 0 circle, +1 outside
        let mut images: Vec<C64> = Vec::new();
        let mut mults: Vec<usize> = Vec::new();
        for &(z, m) in &curve.finite_roots {
            let side = side_of(z);
            match self.map_point(z) {
                Ok((zp, _)) => {
                    images.push(zp);
                    sides.push(side);
                    mults.push(m);
                }
                Err(_) => {
                    // root sent to infinity: counts as outside
                    images.push(C64::new(f64::INFINITY, 0.0));
                    sides.push(side);
                    mults.push(m);
                }
            }
        }
        if curve.infinity_multiplicity > 0 {
            let img = self.map_infinity().unwrap_or(C64::new(f64::INFINITY, 0.0));
            images.push(img);
            sides.push(1);
            mults.push(curve.infinity_multiplicity);
        }

        for (img, side) in images.iter().zip(&sides) {
            moved_roots.push(*img);
            if !img.re.is_finite() {
                if *side != 1 {
                    side_preserved = false;
                }
                continue;
            }
            let new_side = side_of(*img);
            match (*side, new_side) {
                (0, 0) => {
                    if !circle_ok {
                        indeterminate = true;
                    }
                }
                (0, _) | (_, 0) => {
                    indeterminate = true;
                }
                (s, n) if s == n => {}
                _ => side_preserved = false,
            }
        }

        // quartet closure of the image multiset
        let mut quartet_preserved = true;
        'outer: for (i, img) in images.iter().enumerate() {
            if !img.re.is_finite() {
                continue;
            }
            for target in [img.conj(), safe_inv(*img)] {
                let mut found = false;
                for (j, other) in images.iter().enumerate() {
                    let hit = if other.re.is_finite() {
                        crate::chain::rel_dist(*other, target) < tol.max(1e-7)
                    } else {
                        !target.re.is_finite() || target.norm() > 1e12
                    };
                    if hit && mults[j] == mults[i] {
                        found = true;
                        break;
                    }
                }
                if !found {
                    quartet_preserved = false;
                    break 'outer;
                }
            }
        }

        AdmissibilityReport {
            admissible: side_preserved && quartet_preserved && !indeterminate,
            moved_roots,
            side_preserved,
            quartet_preserved,
            indeterminate,
        }
    }

    /// Action on the coupling set through the degree-2L symmetric power of
    /// the map applied to both symbol factors, so that the new spectral
    /// polynomial satisfies `P'(z') = (c z + d)^{-4L} P(z)`.
    pub fn transform_couplings(&self, chain: &CouplingSet) -> Result<CouplingSet> {
        if !self.preserves_circle() {
            return Err(Error::Unsupported(
                "coupling transport is only defined for circle-preserving maps".into(),
            ));
        }
        let curve = chain.spectral_curve(1e-9)?;
        let report = self.is_admissible(&curve, curve.pairing_tol);
        if !report.admissible {
            let bad = report
                .moved_roots
                .first()
                .copied()
                .unwrap_or(C64::new(0.0, 0.0));
            return Err(Error::Admissibility { root: bad });
        }
        let range = chain.range();
        let fp = binary_form_action(self, &chain.plus_factor(), 2 * range);
        let fm = binary_form_action(self, &chain.minus_factor(), 2 * range);
        let n = 2 * range + 1;
        let mut a = vec![C64::new(0.0, 0.0); n];
        let mut b = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            a[k] = 0.5 * (fp.0[k] + fm.0[k]);
            b[k] = 0.5 * (fp.0[k] - fm.0[k]);
        }
        CouplingSet::from_full(range, a, b).map_err(|_| Error::Admissibility {
            root: report
                .moved_roots
                .first()
                .copied()
                .unwrap_or(C64::new(0.0, 0.0)),
        })
    }
}

fn side_of(z: C64) -> i8 {
    let r = z.norm();
    if (r - 1.0).abs() < TOL_CIRCLE {
        0
    } else if r < 1.0 {
        -1
    } else {
        1
    }
}

fn safe_inv(z: C64) -> C64 {
    if z.norm() < 1e-150 {
        C64::new(f64::INFINITY, 0.0)
    } else {
        z.finv()
    }
}

/// `p'(w) = (a - c w)^{n} p((d w - b)/(a - c w))` for a coefficient vector
/// of nominal degree `n`; the image of the factor under the symmetric-power
/// representation.
fn binary_form_action(m: &MobiusMap, p: &Poly, n: usize) -> Poly {
    let mut coeffs = p.0.clone();
    coeffs.resize(n + 1, C64::new(0.0, 0.0));
    // powers of (d w - b) and (a - c w)
    let lin1 = Poly(vec![-m.b, m.d]);
    let lin2 = Poly(vec![m.a, -m.c]);
    let mut pow1: Vec<Poly> = vec![Poly(vec![C64::new(1.0, 0.0)])];
    let mut pow2: Vec<Poly> = vec![Poly(vec![C64::new(1.0, 0.0)])];
    for j in 1..=n {
        pow1.push(pow1[j - 1].mul(&lin1));
        pow2.push(pow2[j - 1].mul(&lin2));
    }
    let mut out = Poly(vec![C64::new(0.0, 0.0); n + 1]);
    for (j, &cj) in coeffs.iter().enumerate() {
        if cj.norm() == 0.0 {
            continue;
        }
        let term = pow1[j].mul(&pow2[n - j]).scale(cj);
        out = out.add(&term);
    }
    out.0.truncate(n + 1);
    Poly(out.0)
}

/// Verdict of the root-side and quartet checks for a map on a curve.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub moved_roots: Vec<C64>,
    pub side_preserved: bool,
    pub quartet_preserved: bool,
    /// Roots too close to the unit circle to classify under a map that does
    /// not preserve the circle.
    pub indeterminate: bool,
}

/// Closed-form flow of the nearest-neighbour couplings under a boost.
pub fn transform_xydm(zeta: f64, gamma: f64, s: f64, h: f64) -> Result<(f64, f64, f64)> {
    let c2 = (2.0 * zeta).cosh();
    let s2 = (2.0 * zeta).sinh();
    let den = 0.5 * h * s2 + c2;
    if den.abs() < 1e-12 {
        return Err(Error::Domain(format!(
            "coupling flow singular at zeta = {zeta}, h = {h}"
        )));
    }
    let gamma_p = gamma / den;
    let s_p = s / den;
    let h_p = 2.0 * (0.5 * h * c2 + s2) / den;
    Ok((gamma_p, s_p, h_p))
}

/// Predicted change of the partition function and entropy under an
/// admissible map, from the Jacobians at the pinchings and insertions.
#[derive(Debug, Clone, Copy)]
pub struct PredictedShift {
    /// Product of Jacobian powers multiplying the partition function.
    pub z_factor: C64,
    /// Entropy shift `(1 - alpha)^{-1} log z_factor`, evaluated through the
    /// alpha-family formula that stays finite at alpha = 1.
    pub entropy_shift: f64,
    /// Whether the factor was real and positive within tolerance.
    pub real_within_tol: bool,
}

/// Transformation-law prediction for `p_intervals` disjoint intervals:
/// pinchings carry weight `2 P Delta_alpha`, Fermi insertions
/// `P Delta_alpha`, with `Delta_alpha = (1/alpha - alpha)/24`.
pub fn predicted_shift(
    alpha: f64,
    m: &MobiusMap,
    report: &CriticalityReport,
    p_intervals: usize,
) -> Result<PredictedShift> {
    if alpha <= 0.0 {
        return Err(Error::Domain("alpha must be positive".into()));
    }
    let circle = m.preserves_circle();
    let mut log_sum_u = C64::new(0.0, 0.0);
    for &u in &report.pinchings {
        log_sum_u += log_jacobian(m, u, circle)?;
    }
    let mut log_sum_v = C64::new(0.0, 0.0);
    for &v in &report.insertions {
        log_sum_v += log_jacobian(m, v, circle)?;
    }
    let delta = (1.0 / alpha - alpha) / 24.0;
    let p = p_intervals as f64;
    let log_factor = (2.0 * p * delta) * log_sum_u + (p * delta) * log_sum_v;
    let z_factor = log_factor.exp();
    // (1 - alpha)^{-1} Delta_alpha = (alpha + 1)/(24 alpha), finite at 1
    let coeff = (alpha + 1.0) / (24.0 * alpha);
    let combined = 2.0 * p * log_sum_u + p * log_sum_v;
    let entropy_shift = coeff * combined.re;
    let real_within_tol = combined.im.abs() < 1e-10 * (1.0 + combined.norm());
    if m.is_so11() && !real_within_tol {
        return Err(Error::Numerical(format!(
            "SO(1,1) Jacobian product has imaginary residue {:e}",
            combined.im
        )));
    }
    Ok(PredictedShift {
        z_factor,
        entropy_shift,
        real_within_tol,
    })
}

fn log_jacobian(m: &MobiusMap, point: C64, circle_preserving: bool) -> Result<C64> {
    if circle_preserving && (point.norm() - 1.0).abs() < 1e-8 {
        // arc-length Jacobian: real and positive on the circle
        return Ok(C64::new(m.unit_circle_jacobian(point).ln(), 0.0));
    }
    let (_, jac) = m.map_point(point)?;
    Ok(jac.ln())
}

/// Determinant residual check used by the type invariant.
pub fn determinant_residual(m: &MobiusMap) -> f64 {
    (m.determinant() - C64::new(1.0, 0.0)).norm()
}

pub fn assert_unit_determinant(m: &MobiusMap) -> Result<()> {
    let r = determinant_residual(m);
    if r > DET_TOL {
        return Err(Error::Numerical(format!("determinant residual {r:e}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn splitmix(state: &mut u64) -> f64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }

    #[test]
    fn boost_basics() {
        let id = MobiusMap::boost(0.0);
        assert!((id.a - 1.0).norm() < 1e-15 && id.b.norm() < 1e-15);
        let m = MobiusMap::boost(0.3);
        assert!(m.is_so11());
        assert!((m.zeta().unwrap() - 0.3).abs() < 1e-12);
        assert!(determinant_residual(&m) < 1e-12);
        // composition adds rapidities
        let m2 = MobiusMap::boost(0.45);
        let prod = m.compose(&m2);
        assert!((prod.zeta().unwrap() - 0.75).abs() < 1e-12);
        // fixed points
        for z in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0)] {
            let (zp, _) = m.map_point(z).unwrap();
            assert!((zp - z).norm() < 1e-14);
        }
    }

    #[test]
    fn boost_preserves_circle() {
        let mut st = 11u64;
        for _ in 0..100 {
            let zeta = 2.0 * splitmix(&mut st);
            let theta = 2.0 * PI * splitmix(&mut st);
            let m = MobiusMap::boost(zeta);
            let (zp, _) = m.map_point(C64::new(0.0, theta).exp()).unwrap();
            assert!((zp.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let m = MobiusMap::boost(0.25);
        let z = C64::new(0.0, 1.0);
        let (_, jac) = m.map_point(z).unwrap();
        let h = 1e-6;
        let (zp1, _) = m.map_point(z + h).unwrap();
        let (zm1, _) = m.map_point(z - h).unwrap();
        let fd = (zp1 - zm1) / (2.0 * h);
        assert!((fd - jac).norm() < 1e-8);
        // along the imaginary direction too (analyticity)
        let (zp2, _) = m.map_point(z + C64::new(0.0, h)).unwrap();
        let (zm2, _) = m.map_point(z - C64::new(0.0, h)).unwrap();
        let fd2 = (zp2 - zm2) / C64::new(0.0, 2.0 * h);
        assert!((fd2 - jac).norm() < 1e-8);
    }

    #[test]
    fn group_law_and_cocycle() {
        let mut st = 23u64;
        for _ in 0..50 {
            let m1 = MobiusMap::new(
                C64::new(1.0 + splitmix(&mut st), splitmix(&mut st)),
                C64::new(splitmix(&mut st), splitmix(&mut st)),
                C64::new(splitmix(&mut st), splitmix(&mut st)),
                C64::new(1.0 + splitmix(&mut st), splitmix(&mut st)),
            )
            .unwrap();
            let m2 = MobiusMap::new(
                C64::new(1.0 + splitmix(&mut st), splitmix(&mut st)),
                C64::new(splitmix(&mut st), splitmix(&mut st)),
                C64::new(splitmix(&mut st), splitmix(&mut st)),
                C64::new(1.0 + splitmix(&mut st), splitmix(&mut st)),
            )
            .unwrap();
            let z = C64::new(splitmix(&mut st), splitmix(&mut st));
            let (z2, j2) = match m2.map_point(z) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let (z12, j1) = match m1.map_point(z2) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let prod = m1.compose(&m2);
            let (zp, jp) = match prod.map_point(z) {
                Ok(v) => v,
                Err(_) => continue,
            };
            assert!((zp - z12).norm() < 1e-10 * (1.0 + z12.norm()));
            assert!((jp - j1 * j2).norm() < 1e-10 * (1.0 + jp.norm()));
        }
    }

    #[test]
    fn so11_circle_jacobian_real_positive() {
        let m = MobiusMap::boost(0.4);
        for k in 0..32 {
            let theta = -PI + 2.0 * PI * (k as f64 + 0.5) / 32.0;
            let u = C64::new(0.0, theta).exp();
            let j = m.unit_circle_jacobian(u);
            assert!(j > 0.0);
            // of the closed form 1/(cosh 2z + sinh 2z cos t)
            let expect = 1.0 / ((0.8f64).cosh() + (0.8f64).sinh() * theta.cos());
            assert!((j - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn transform_couplings_identity_and_xy_flow() {
        let chain = CouplingSet::xy_dm(0.7, 0.0, 3.0);
        let id = MobiusMap::identity();
        let same = id.transform_couplings(&chain).unwrap();
        assert_eq!(same, chain);

        let zeta = 0.2;
        let m = MobiusMap::boost(zeta);
        let moved = m.transform_couplings(&chain).unwrap();
        let (gp, sp, hp) = transform_xydm(zeta, 0.7, 0.0, 3.0).unwrap();
        assert!(sp.abs() < 1e-14);
        // the flow reproduces the closed-form couplings up to a positive
        // scale; normalize by the nearest-neighbour hopping
        let scale = moved.a_at(1).re;
        assert!(scale > 0.0);
        assert!((moved.a_at(0).re / scale - (-hp)).abs() < 1e-10);
        assert!((moved.b_at(1).re / scale - gp).abs() < 1e-10);
        assert!(moved.a_at(1).im.abs() < 1e-12);
    }

    #[test]
    fn transform_couplings_moves_curve_roots() {
        let zeros = [
            C64::new(0.2, 0.0),
            C64::new(0.5, 0.0),
            C64::new(2.2, 0.0),
            C64::new(4.0, 0.0),
        ];
        let chain = CouplingSet::from_pc_plus_factor(&zeros).unwrap();
        let m = MobiusMap::boost(0.1);
        let moved = m.transform_couplings(&chain).unwrap();
        let curve0 = chain.spectral_curve(1e-9).unwrap();
        let curve1 = moved.spectral_curve(1e-9).unwrap();
        for &(z, _) in &curve0.finite_roots {
            let (img, _) = m.map_point(z).unwrap();
            let ok = curve1
                .finite_roots
                .iter()
                .any(|&(w, _)| (w - img).norm() < 1e-8 * (1.0 + img.norm()));
            assert!(ok, "image {img} of {z} not a root of the moved curve");
        }
    }

    #[test]
    fn transformed_chain_satisfies_invariants_and_symbol_match() {
        // drifted complex chain under a boost: constraints must survive and
        // the symbol must transport as M'(z') = M(z)
        let chain = CouplingSet::xy_dm(0.4, 0.3, 3.2);
        let m = MobiusMap::boost(0.15);
        let moved = m.transform_couplings(&chain).unwrap();
        let lau0 = chain.laurent();
        let lau1 = moved.laurent();
        for k in 0..8 {
            let theta = -PI + 2.0 * PI * (k as f64 + 0.5) / 8.0;
            let z = C64::new(0.0, theta).exp();
            let (zp, _) = m.map_point(z).unwrap();
            // ratio of plus parts to pairing part is scale free
            let r0 = lau0.theta_plus_at(z) / lau0.xi_at(z);
            let r1 = lau1.theta_plus_at(zp) / lau1.xi_at(zp);
            assert!((r0 - r1).norm() < 1e-8 * (1.0 + r0.norm()));
        }
    }

    #[test]
    fn admissibility_verdicts() {
        // complex-quartet gapped chain
        let zeros = [
            C64::new(0.3, 0.35),
            C64::new(0.3, -0.35),
            C64::new(2.0, 1.1),
            C64::new(2.0, -1.1),
        ];
        let chain = CouplingSet::from_pc_plus_factor(&zeros).unwrap();
        let curve = chain.spectral_curve(1e-9).unwrap();

        let id = MobiusMap::identity().is_admissible(&curve, 1e-9);
        assert!(id.admissible);

        let boost = MobiusMap::boost(0.3).is_admissible(&curve, 1e-9);
        assert!(boost.admissible, "SO(1,1) must be admissible: {boost:?}");

        let rot = MobiusMap::rotation(0.7).is_admissible(&curve, 1e-9);
        assert!(!rot.quartet_preserved);
        assert!(!rot.admissible);
    }

    #[test]
    fn xydm_flow_closed_forms() {
        let (g, s, h) = transform_xydm(0.0, 0.9, 0.4, 1.7).unwrap();
        assert!((g - 0.9).abs() < 1e-14 && (s - 0.4).abs() < 1e-14 && (h - 1.7).abs() < 1e-14);

        // h = 0 specialization
        let zeta = 0.31;
        let (g, s, h) = transform_xydm(zeta, 0.8, 0.2, 0.0).unwrap();
        let c2 = (2.0 * zeta).cosh();
        assert!((g - 0.8 / c2).abs() < 1e-14);
        assert!((s - 0.2 / c2).abs() < 1e-14);
        assert!((h - 2.0 * (2.0 * zeta).tanh()).abs() < 1e-14);

        // flow along the critical line lands on (gamma_target, h = 2)
        let gamma_target: f64 = 0.5;
        let zeta = -0.5 * gamma_target.ln();
        let (g, _, h) = transform_xydm(zeta, 1.0, 0.0, 2.0).unwrap();
        assert!((g - gamma_target).abs() < 1e-12);
        assert!((h - 2.0).abs() < 1e-12);
    }

    #[test]
    fn predicted_shift_cases() {
        // gapped: no insertions, no shift
        let gapped = CouplingSet::xy_dm(1.0, 0.0, 4.0).classify(1e-9).unwrap();
        let m = MobiusMap::boost(0.3);
        let shift = predicted_shift(2.0, &m, &gapped, 1).unwrap();
        assert!(shift.entropy_shift.abs() < 1e-14);
        assert!((shift.z_factor - 1.0).norm() < 1e-14);

        // two pinchings at alpha = 2: (1/8) sum log du'
        let xx = CouplingSet::xy_dm(0.0, 0.0, 0.0).classify(1e-9).unwrap();
        assert_eq!(xx.r, 2);
        let shift = predicted_shift(2.0, &m, &xx, 1).unwrap();
        let expect: f64 = xx
            .pinchings
            .iter()
            .map(|&u| m.unit_circle_jacobian(u).ln())
            .sum::<f64>()
            / 8.0;
        assert!((shift.entropy_shift - expect).abs() < 1e-12);
        assert!(shift.real_within_tol);

        // alpha = 1 limit stays finite with z_factor = 1
        let shift = predicted_shift(1.0, &m, &xx, 1).unwrap();
        assert!((shift.z_factor - 1.0).norm() < 1e-12);
        assert!(shift.entropy_shift.abs() > 0.0);
    }

    #[test]
    fn drift_jacobian_product_identity() {
        // product of the four insertion Jacobians for the drift chain equals
        // ((s^2+1)/(s'^2+1) * (s'^2-(h'/2)^2+1)/(s^2-(h/2)^2+1))^2
        let (s, h) = (1.0, 1.0);
        let zeta = 0.17;
        let m = MobiusMap::boost(zeta);
        let report = CouplingSet::xy_dm(0.0, s, h).classify(1e-9).unwrap();
        assert_eq!((report.r, report.q), (0, 4));
        let prod: f64 = report
            .insertions
            .iter()
            .map(|&v| m.unit_circle_jacobian(v))
            .product();
        let den = 0.5 * h * (2.0 * zeta).sinh() + (2.0 * zeta).cosh();
        let first_form = ((s * s + 1.0) / (s * s + den * den)).powi(2);
        assert!((prod - first_form).abs() < 1e-10 * prod.abs());
        let (_, sp, hp) = transform_xydm(zeta, 0.0, s, h).unwrap();
        let second_form = ((s * s + 1.0) / (sp * sp + 1.0) * (sp * sp - 0.25 * hp * hp + 1.0)
            / (s * s - 0.25 * h * h + 1.0))
            .powi(2);
        assert!((prod - second_form).abs() < 1e-10 * prod.abs());
    }
}
