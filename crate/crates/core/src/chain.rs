//! Coupling data of the fermionic chain, its dispersion relation, the
//! spectral polynomial P(z), and criticality classification.

use crate::error::{Error, Result};
use crate::poly::{self, Poly};
use num_complex::Complex64;
use std::f64::consts::PI;

type C64 = Complex64;

const REALNESS_TOL: f64 = 1e-10;
const TRIM_REL_TOL: f64 = 1e-13;
pub const TOL_CIRCLE: f64 = 1e-8;
pub const TOL_CLUSTER: f64 = 1e-6;
pub const TOL_ZERO: f64 = 1e-9;

/// Hopping and pairing amplitudes of the chain Hamiltonian.
///
/// `a[l + L]` is the hopping amplitude at distance `l` and `b[l + L]` the
/// pairing amplitude, for `l` in `-L..=L`. Hermiticity forces
/// `a[-l] = conj(a[l])` and the pairing can be taken antisymmetric,
/// `b[-l] = -b[l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSet {
    range: usize,
    a: Vec<C64>,
    b: Vec<C64>,
}

impl CouplingSet {
    /// Build from the full coefficient vectors indexed `-L..=L`.
    pub fn from_full(range: usize, a: Vec<C64>, b: Vec<C64>) -> Result<Self> {
        let n = 2 * range + 1;
        if a.len() != n || b.len() != n {
            return Err(Error::Domain(format!(
                "coefficient vectors must have length {n}"
            )));
        }
        let c = CouplingSet { range, a, b };
        c.validate()?;
        Ok(c)
    }

    /// Build from the coefficients at `l = 0..=L`; negative indices follow
    /// from the symmetry relations.
    pub fn from_upper(range: usize, a_upper: &[C64], b_upper: &[C64]) -> Result<Self> {
        if a_upper.len() != range + 1 || b_upper.len() != range + 1 {
            return Err(Error::Domain(format!(
                "upper coefficient slices must have length {}",
                range + 1
            )));
        }
        let n = 2 * range + 1;
        let mut a = vec![C64::new(0.0, 0.0); n];
        let mut b = vec![C64::new(0.0, 0.0); n];
        for l in 0..=range {
            a[range + l] = a_upper[l];
            a[range - l] = a_upper[l].conj();
            b[range + l] = b_upper[l];
            b[range - l] = -b_upper[l];
        }
        CouplingSet::from_full(range, a, b)
    }

    /// Nearest-neighbour chain with anisotropy `gamma`, drift `s` and
    /// transverse field `h`. The dispersion is
    /// `sqrt((h - 2 cos t)^2 + 4 gamma^2 sin^2 t) + 2 s sin t`.
    pub fn xy_dm(gamma: f64, s: f64, h: f64) -> Self {
        CouplingSet::from_full(
            1,
            vec![C64::new(1.0, s), C64::new(-h, 0.0), C64::new(1.0, -s)],
            vec![
                C64::new(-gamma, 0.0),
                C64::new(0.0, 0.0),
                C64::new(gamma, 0.0),
            ],
        )
        .expect("nearest-neighbour couplings always satisfy the constraints")
    }

    /// Parity- and charge-symmetric chain whose plus symbol factor
    /// `z^L (Theta + Xi)` is the monic polynomial with the given zeros.
    /// The zero multiset must be closed under conjugation.
    pub fn from_pc_plus_factor(zeros: &[C64]) -> Result<Self> {
        if !zeros.len().is_multiple_of(2) {
            return Err(Error::Domain("plus factor must have even degree".into()));
        }
        let range = zeros.len() / 2;
        let f_plus = Poly::from_roots(zeros);
        for c in &f_plus.0 {
            if c.im.abs() > 1e-9 * f_plus.coeff_norm().max(1.0) {
                return Err(Error::Domain(
                    "plus factor zeros must be closed under conjugation".into(),
                ));
            }
        }
        let n = 2 * range + 1;
        let mut a = vec![C64::new(0.0, 0.0); n];
        let mut b = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let fp = f_plus.0[k].re;
            let fm = f_plus.0[n - 1 - k].re; // z^{2L} f_plus(1/z)
            a[k] = C64::new(0.5 * (fp + fm), 0.0);
            b[k] = C64::new(0.5 * (fp - fm), 0.0);
        }
        CouplingSet::from_full(range, a, b)
    }

    fn validate(&self) -> Result<()> {
        let scale = self
            .a
            .iter()
            .chain(&self.b)
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(1.0);
        for l in 0..=self.range as i64 {
            if (self.a_at(-l) - self.a_at(l).conj()).norm() > REALNESS_TOL * scale {
                return Err(Error::Constraint {
                    what: "hopping must satisfy a[-l] = conj(a[l])".into(),
                    index: l,
                });
            }
            if (self.b_at(-l) + self.b_at(l)).norm() > REALNESS_TOL * scale {
                return Err(Error::Constraint {
                    what: "pairing must satisfy b[-l] = -b[l]".into(),
                    index: l,
                });
            }
        }
        Ok(())
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn a_at(&self, l: i64) -> C64 {
        self.a[(l + self.range as i64) as usize]
    }

    pub fn b_at(&self, l: i64) -> C64 {
        self.b[(l + self.range as i64) as usize]
    }

    /// All hopping amplitudes real: the Hamiltonian is parity invariant.
    pub fn is_parity_symmetric(&self) -> bool {
        self.a.iter().all(|z| z.im.abs() < REALNESS_TOL)
    }

    /// All pairing amplitudes real: parity times charge conjugation holds.
    pub fn is_pc_symmetric(&self) -> bool {
        self.b.iter().all(|z| z.im.abs() < REALNESS_TOL)
    }

    /// Laurent coefficient data of the symbol.
    pub fn laurent(&self) -> LaurentData {
        let n = 2 * self.range + 1;
        let mut theta_plus = vec![C64::new(0.0, 0.0); n];
        let mut theta_minus = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let fwd = self.a[k];
            let rev = self.a[n - 1 - k];
            theta_plus[k] = 0.5 * (fwd + rev);
            theta_minus[k] = 0.5 * (fwd - rev);
        }
        LaurentData {
            range: self.range,
            theta: self.a.clone(),
            xi: self.b.clone(),
            theta_plus,
            theta_minus,
        }
    }

    /// Symmetric part of the hopping symbol on the unit circle (real).
    pub fn theta_plus_angle(&self, theta: f64) -> f64 {
        let mut acc = self.a_at(0).re;
        for l in 1..=self.range as i64 {
            acc += 2.0 * self.a_at(l).re * (l as f64 * theta).cos();
        }
        acc
    }

    /// Antisymmetric part of the hopping symbol on the unit circle (real).
    pub fn theta_minus_angle(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for l in 1..=self.range as i64 {
            acc -= 2.0 * self.a_at(l).im * (l as f64 * theta).sin();
        }
        acc
    }

    /// Pairing symbol on the unit circle.
    pub fn xi_angle(&self, theta: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for l in 1..=self.range as i64 {
            acc += self.b_at(l) * C64::new(0.0, 2.0 * (l as f64 * theta).sin());
        }
        acc
    }

    /// The positive branch `sqrt(theta_plus^2 + |xi|^2)`.
    pub fn lambda0(&self, theta: f64) -> f64 {
        let tp = self.theta_plus_angle(theta);
        let xi = self.xi_angle(theta);
        (tp * tp + xi.norm_sqr()).sqrt()
    }

    /// Dispersion relation at angle `theta`.
    pub fn dispersion(&self, theta: f64) -> f64 {
        self.lambda0(theta) + self.theta_minus_angle(theta)
    }

    /// Mode-by-mode diagonalization data for a finite chain of `n` sites.
    pub fn diagonalize(&self, n: usize) -> Result<GroundStateSpec> {
        if n <= 2 * self.range {
            return Err(Error::Domain(format!(
                "chain length {n} must exceed twice the coupling range {}",
                self.range
            )));
        }
        let mut lambda = Vec::with_capacity(n);
        let mut dirac_sea = Vec::new();
        let mut shift = C64::new(0.0, 0.0);
        for k in 0..n {
            let theta = 2.0 * PI * k as f64 / n as f64;
            let lam = self.dispersion(wrap_angle(theta));
            if lam < 0.0 {
                dirac_sea.push(k);
            }
            lambda.push(lam);
            let z = C64::new(0.0, theta).exp();
            let mut th = C64::new(0.0, 0.0);
            for l in -(self.range as i64)..=self.range as i64 {
                th += self.a_at(l) * z.powi(l as i32);
            }
            shift += 0.5 * th;
        }
        if shift.im.abs() > REALNESS_TOL * (shift.norm() + n as f64) {
            return Err(Error::Numerical(format!(
                "energy shift has imaginary residue {:e}",
                shift.im
            )));
        }
        let energy_shift = shift.re;
        let ground_energy = energy_shift - 0.5 * lambda.iter().map(|l| l.abs()).sum::<f64>();
        Ok(GroundStateSpec {
            n,
            lambda,
            dirac_sea,
            energy_shift,
            ground_energy,
        })
    }

    /// Polynomial factor `z^L (Theta + Xi)` of the spectral polynomial.
    pub fn plus_factor(&self) -> Poly {
        Poly(
            (0..2 * self.range + 1)
                .map(|k| self.a[k] + self.b[k])
                .collect(),
        )
    }

    /// Polynomial factor `z^L (Theta - Xi)`.
    pub fn minus_factor(&self) -> Poly {
        Poly(
            (0..2 * self.range + 1)
                .map(|k| self.a[k] - self.b[k])
                .collect(),
        )
    }

    /// Real coefficients of the spectral polynomial
    /// `P(z) = z^{2L} (theta_plus(z)^2 - Xi(z) conj(Xi(conj z)))`,
    /// ascending powers, length `4L + 1`.
    pub fn spectral_coeffs(&self) -> Result<Vec<f64>> {
        let n = 2 * self.range + 1;
        let lau = self.laurent();
        let tp = Poly(lau.theta_plus.clone());
        let xi = Poly(self.b.clone());
        let xi_cc = Poly(self.b.iter().map(|c| c.conj()).collect());
        let prod = tp.mul(&tp);
        let cross = xi.mul(&xi_cc);
        let mut coeffs = vec![0.0; 2 * n - 1];
        let scale = prod.coeff_norm().max(cross.coeff_norm()).max(1.0);
        for k in 0..2 * n - 1 {
            let c = prod.0[k] - cross.0[k];
            if c.im.abs() > 1e-12 * scale {
                return Err(Error::Numerical(format!(
                    "spectral polynomial coefficient {k} has imaginary residue {:e}",
                    c.im
                )));
            }
            coeffs[k] = c.re;
        }
        Ok(coeffs)
    }

    /// Spectral curve data: trimmed polynomial, roots, orbit pairing and the
    /// inside/outside partition.
    pub fn spectral_curve(&self, tol: f64) -> Result<SpectralCurve> {
        let coeffs = self.spectral_coeffs()?;
        SpectralCurve::from_coeffs(self.range, coeffs, tol)
    }

    /// Classify the chain per the gapped / parity-preserving critical /
    /// Dirac-sea trichotomy.
    pub fn classify(&self, tol: f64) -> Result<CriticalityReport> {
        let curve = self.spectral_curve(tol)?;

        // Pinching candidates: degenerate roots on the unit circle. A root
        // buried in a Dirac-sea arc (dispersion away from zero there) is not
        // a symbol discontinuity and does not count as a pinching.
        let mut pinchings = Vec::new();
        for &idx in &curve.on_circle {
            let (z, mult) = curve.finite_roots[idx];
            if mult % 2 != 0 {
                return Err(Error::Structure(format!(
                    "root {z} on the unit circle has odd multiplicity {mult}"
                )));
            }
            let ang = z.arg();
            let lam_scale = self.scale();
            if self.dispersion(ang).abs() < 1e-4 * lam_scale
                && self.dispersion(-ang).abs() < 1e-4 * lam_scale
            {
                pinchings.push(z / z.norm());
            }
        }

        // Fermi points: simple sign changes of the dispersion on a fine grid.
        let grid = 4096usize;
        let mut fermi_angles = Vec::new();
        let mut dirac_intervals = Vec::new();
        let mut min_lambda = f64::INFINITY;
        let mut prev_theta = -PI;
        let mut prev_lam = self.dispersion(prev_theta);
        let mut open_arc: Option<f64> = None;
        if prev_lam < 0.0 {
            open_arc = Some(-PI);
        }
        min_lambda = min_lambda.min(prev_lam);
        for k in 1..=grid {
            let theta = -PI + 2.0 * PI * k as f64 / grid as f64;
            let lam = self.dispersion(theta);
            min_lambda = min_lambda.min(lam);
            if (lam < 0.0) != (prev_lam < 0.0) {
                let root = bisect_zero(|t| self.dispersion(t), prev_theta, theta);
                fermi_angles.push(root);
                if lam < 0.0 {
                    open_arc = Some(root);
                } else if let Some(start) = open_arc.take() {
                    dirac_intervals.push((start, root));
                }
            }
            prev_theta = theta;
            prev_lam = lam;
        }
        if let Some(start) = open_arc.take() {
            dirac_intervals.push((start, PI));
        }

        let mut insertions = Vec::new();
        for &t in &fermi_angles {
            insertions.push(C64::new(0.0, t).exp());
            insertions.push(C64::new(0.0, -t).exp());
        }
        sort_by_angle(&mut pinchings);
        sort_by_angle(&mut insertions);

        let class = if !dirac_intervals.is_empty() {
            CriticalClass::CriticalDiracSea
        } else if !pinchings.is_empty() {
            CriticalClass::CriticalParityPreservingVacuum
        } else {
            if min_lambda <= 0.0 {
                return Err(Error::Structure(format!(
                    "dispersion minimum {min_lambda:e} is non-positive but no circle \
                     degeneracy was resolved at this tolerance"
                )));
            }
            CriticalClass::Gapped
        };
        let r = pinchings.len();
        let q = insertions.len();
        Ok(CriticalityReport {
            class,
            pinchings,
            insertions,
            dirac_intervals,
            r,
            q,
        })
    }

    fn scale(&self) -> f64 {
        self.a
            .iter()
            .chain(&self.b)
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(1e-300)
    }
}

fn wrap_angle(mut t: f64) -> f64 {
    while t > PI {
        t -= 2.0 * PI;
    }
    while t <= -PI {
        t += 2.0 * PI;
    }
    t
}

fn bisect_zero(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn sort_by_angle(zs: &mut [C64]) {
    zs.sort_by(|p, q| {
        let ap = p.arg().rem_euclid(2.0 * PI);
        let aq = q.arg().rem_euclid(2.0 * PI);
        ap.partial_cmp(&aq).unwrap()
    });
}

/// Laurent polynomial coefficients of the symbol and its split parts,
/// all indexed `-L..=L` via offset `L`.
#[derive(Debug, Clone)]
pub struct LaurentData {
    pub range: usize,
    pub theta: Vec<C64>,
    pub xi: Vec<C64>,
    pub theta_plus: Vec<C64>,
    pub theta_minus: Vec<C64>,
}

impl LaurentData {
    fn eval(coeffs: &[C64], range: usize, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (k, c) in coeffs.iter().enumerate() {
            acc += c * z.powi(k as i32 - range as i32);
        }
        acc
    }

    pub fn theta_at(&self, z: C64) -> C64 {
        Self::eval(&self.theta, self.range, z)
    }

    pub fn xi_at(&self, z: C64) -> C64 {
        Self::eval(&self.xi, self.range, z)
    }

    pub fn theta_plus_at(&self, z: C64) -> C64 {
        Self::eval(&self.theta_plus, self.range, z)
    }

    pub fn theta_minus_at(&self, z: C64) -> C64 {
        Self::eval(&self.theta_minus, self.range, z)
    }
}

/// Finite-chain diagonalization summary.
#[derive(Debug, Clone)]
pub struct GroundStateSpec {
    pub n: usize,
    /// Dispersion sampled at the mode angles `2 pi k / n`.
    pub lambda: Vec<f64>,
    /// Modes with negative single-particle energy, filled in the ground state.
    pub dirac_sea: Vec<usize>,
    pub energy_shift: f64,
    pub ground_energy: f64,
}

/// Classification of the chain per the three ground-state scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalClass {
    Gapped,
    CriticalParityPreservingVacuum,
    CriticalDiracSea,
}

/// Criticality data: pinching points, Fermi-type insertions, Dirac arcs.
#[derive(Debug, Clone)]
pub struct CriticalityReport {
    pub class: CriticalClass,
    /// Unit-modulus degeneracy points of the spectral polynomial where the
    /// dispersion vanishes, anticlockwise.
    pub pinchings: Vec<C64>,
    /// Unit-modulus points where the symbol jumps between the mixing branch
    /// and plus/minus identity (Fermi points and their opposites).
    pub insertions: Vec<C64>,
    /// Angular intervals with negative dispersion.
    pub dirac_intervals: Vec<(f64, f64)>,
    pub r: usize,
    pub q: usize,
}

/// The spectral polynomial and its root data.
#[derive(Debug, Clone)]
pub struct SpectralCurve {
    pub range: usize,
    /// Real coefficients of P, ascending, length 4L+1.
    pub coeffs: Vec<f64>,
    /// Roots at the origin removed by trimming (equals the degree drop).
    pub origin_multiplicity: usize,
    /// Branch points at infinity (top-degree deficiency).
    pub infinity_multiplicity: usize,
    /// Finite roots with multiplicities (multiplicity > 1 only resolved on
    /// the unit circle, where degeneracy is structural).
    pub finite_roots: Vec<(C64, usize)>,
    /// Index sets partitioning `finite_roots`.
    pub inside: Vec<usize>,
    pub outside: Vec<usize>,
    pub on_circle: Vec<usize>,
    /// Orbits of root indices under conjugation and inversion; the orbit of
    /// an origin root implicitly includes the branch point at infinity.
    pub orbits: Vec<Vec<usize>>,
    pub pairing_tol: f64,
}

impl SpectralCurve {
    pub fn from_coeffs(range: usize, coeffs: Vec<f64>, tol: f64) -> Result<Self> {
        let full = Poly::from_real(&coeffs);
        let norm = full.coeff_norm();
        if norm == 0.0 {
            return Err(Error::Structure("spectral polynomial is zero".into()));
        }
        // palindrome check: c[m] = c[4L - m]
        let deg = coeffs.len() - 1;
        for m in 0..coeffs.len() {
            if (coeffs[m] - coeffs[deg - m]).abs() > 1e-9 * norm {
                return Err(Error::Structure(format!(
                    "spectral polynomial is not palindromic at coefficient {m}"
                )));
            }
        }
        let trimmed = poly::trim(&full, TRIM_REL_TOL);
        if trimmed.zeros_at_origin != trimmed.degree_drop {
            return Err(Error::Structure(
                "trimming is inconsistent with the palindrome symmetry".into(),
            ));
        }
        // a pure monomial is legitimate: every branch point sits at the
        // origin or at infinity
        let raw_roots = if trimmed.poly.degree() == 0 {
            Vec::new()
        } else {
            poly::roots(&trimmed.poly)?
        };
        // residual check
        let res_tol = tol.max(1e-10);
        for &z in &raw_roots {
            let res = trimmed.poly.eval(z).norm();
            let scale =
                trimmed.poly.coeff_norm() * (1.0 + z.norm()).powi(trimmed.poly.degree() as i32);
            if res > res_tol.max(1e-7) * scale {
                return Err(Error::Numerical(format!(
                    "root residual {res:e} too large at {z}"
                )));
            }
        }

        // cluster nearby roots first; a split double root straddles any
        // radial test, while its cluster center is accurate
        let mut finite_roots: Vec<(C64, usize)> = Vec::new();
        if trimmed.zeros_at_origin > 0 {
            finite_roots.push((C64::new(0.0, 0.0), trimmed.zeros_at_origin));
        }
        let n_raw = raw_roots.len();
        let mut parent: Vec<usize> = (0..n_raw).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for i in 0..n_raw {
            for j in i + 1..n_raw {
                if (raw_roots[i] - raw_roots[j]).norm() < TOL_CLUSTER {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let mut clusters = std::collections::BTreeMap::<usize, Vec<C64>>::new();
        for i in 0..n_raw {
            let r = find(&mut parent, i);
            clusters.entry(r).or_default().push(raw_roots[i]);
        }
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        let mut on_circle = Vec::new();
        for members in clusters.values() {
            let m = members.len();
            let center = members.iter().sum::<C64>() / m as f64;
            let circle_tol = if m > 1 {
                (10.0 * TOL_CIRCLE).max(tol)
            } else {
                TOL_CIRCLE.max(tol)
            };
            let idx = finite_roots.len();
            if (center.norm() - 1.0).abs() < circle_tol {
                finite_roots.push((center / center.norm(), m));
                on_circle.push(idx);
            } else {
                finite_roots.push((center, m));
                if center.norm() < 1.0 {
                    inside.push(idx);
                } else {
                    outside.push(idx);
                }
            }
        }
        if trimmed.zeros_at_origin > 0 {
            inside.push(0);
        }

        let orbits = pair_orbits(&finite_roots, tol)?;

        Ok(SpectralCurve {
            range,
            coeffs,
            origin_multiplicity: trimmed.zeros_at_origin,
            infinity_multiplicity: trimmed.degree_drop,
            finite_roots,
            inside,
            outside,
            on_circle,
            orbits,
            pairing_tol: tol,
        })
    }

    /// Number of roots (with multiplicity) strictly inside the unit circle.
    pub fn inside_count(&self) -> usize {
        self.inside.iter().map(|&i| self.finite_roots[i].1).sum()
    }
}

pub(crate) fn rel_dist(p: C64, q: C64) -> f64 {
    (p - q).norm() / (1.0 + p.norm().max(q.norm()))
}

fn pair_orbits(roots: &[(C64, usize)], tol: f64) -> Result<Vec<Vec<usize>>> {
    let tol = tol.max(1e-7);
    let n = roots.len();
    let find_match = |target: C64, mult: usize| -> Result<usize> {
        let mut best = usize::MAX;
        let mut bd = f64::INFINITY;
        for (j, &(z, m)) in roots.iter().enumerate() {
            let d = rel_dist(z, target);
            if d < bd {
                bd = d;
                best = j;
            }
            let _ = m;
        }
        if bd > tol {
            return Err(Error::Structure(format!(
                "quartet pairing failed: no root within {tol:e} of {target} (closest {bd:e})"
            )));
        }
        if roots[best].1 != mult {
            return Err(Error::Structure(format!(
                "quartet pairing failed: multiplicity mismatch at {target}"
            )));
        }
        Ok(best)
    };
    let mut parent: Vec<usize> = (0..n).collect();
    fn root_of(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, &(z, mult)) in roots.iter().enumerate() {
        let jc = find_match(z.conj(), mult)?;
        let ri = root_of(&mut parent, i);
        let rj = root_of(&mut parent, jc);
        parent[ri.max(rj)] = ri.min(rj);
        if z.norm() > 1e-12 {
            let ji = find_match(z.finv(), mult)?;
            let ri = root_of(&mut parent, i);
            let rj = root_of(&mut parent, ji);
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut orbit_map = std::collections::BTreeMap::<usize, Vec<usize>>::new();
    for i in 0..n {
        let r = root_of(&mut parent, i);
        orbit_map.entry(r).or_default().push(i);
    }
    Ok(orbit_map.into_values().collect())
}

/// Fermi angles of the nearest-neighbour chain with drift, by the closed
/// form for the zeros of the dispersion. Valid in the gapless region with a
/// Dirac sea, `s^2 > gamma^2` and `(h/2)^2 - s^2 + gamma^2 < 1`.
pub fn fermi_points_xydm(gamma: f64, s: f64, h: f64) -> Result<(f64, f64)> {
    let d = s * s - gamma * gamma;
    if d <= 0.0 {
        return Err(Error::Domain(format!(
            "s^2 - gamma^2 = {d:e} must be positive"
        )));
    }
    let rad = d + 1.0 - 0.25 * h * h;
    if rad <= 0.0 {
        return Err(Error::Domain(format!(
            "s^2 - gamma^2 + 1 - (h/2)^2 = {rad:e} must be positive"
        )));
    }
    let den = d + 1.0;
    let s_rad = (d * rad).sqrt();
    let x1 = (0.5 * h + s_rad) / den;
    let x2 = (0.5 * h - s_rad) / den;
    for x in [x1, x2] {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("cosine solution {x} out of range")));
        }
    }
    // zeros sit where s sin(theta) < 0
    let (t1, t2) = if s > 0.0 {
        (-x1.acos(), -x2.acos())
    } else {
        (x1.acos(), x2.acos())
    };
    let c = CouplingSet::xy_dm(gamma, s, h);
    for t in [t1, t2] {
        let lam = c.dispersion(t);
        if lam.abs() > 1e-9 * c.scale().max(1.0) {
            return Err(Error::Numerical(format!(
                "closed-form Fermi angle {t} misses the dispersion zero ({lam:e})"
            )));
        }
    }
    Ok((t1, t2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xy_laurent_matches_standard_parametrization() {
        let c = CouplingSet::xy_dm(0.7, 0.0, 1.3);
        let lau = c.laurent();
        // Theta(z) = z + 1/z - h, Xi(z) = gamma (z - 1/z)
        for z in [C64::new(0.3, 0.4), C64::new(1.2, -0.7)] {
            let theta = lau.theta_at(z);
            let expect = z + z.finv() - 1.3;
            assert!((theta - expect).norm() < 1e-12);
            let xi = lau.xi_at(z);
            assert!((xi - 0.7 * (z - z.finv())).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_symbol_laurent() {
        let c = CouplingSet::from_upper(
            1,
            &[C64::new(-2.0, 0.0), C64::new(0.0, 0.0)],
            &[C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        )
        .unwrap();
        let lau = c.laurent();
        assert!((lau.theta_plus_at(C64::new(0.5, 0.5)) + 2.0).norm() < 1e-14);
        assert!(lau.theta_minus_at(C64::new(0.5, 0.5)).norm() < 1e-14);
        assert!(lau.xi_at(C64::new(0.5, 0.5)).norm() < 1e-14);
        for t in [0.3, 1.1, -2.0] {
            assert!((c.dispersion(t) - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn laurent_split_parts_cross_check_direct_sums() {
        // drift chain: theta_minus boundary value must be real and match
        // the direct Laurent sums at sampled angles
        let s = 0.6;
        let c = CouplingSet::xy_dm(0.0, s, 0.8);
        let lau = c.laurent();
        for k in 0..64 {
            let t = -PI + 2.0 * PI * (k as f64 + 0.5) / 64.0;
            let z = C64::new(0.0, t).exp();
            let direct_minus = 0.5 * (lau.theta_at(z) - lau.theta_at(z.finv()));
            let part = lau.theta_minus_at(z);
            assert!((direct_minus - part).norm() < 1e-12);
            assert!(part.im.abs() < 1e-12, "boundary value must be real");
            assert!((part.re - 2.0 * s * t.sin()).abs() < 1e-12);
            // coefficient identities: plus part symmetric, minus antisymmetric
            let zp = C64::new(0.37, 0.11);
            assert!((lau.theta_plus_at(zp.finv()) - lau.theta_plus_at(zp)).norm() < 1e-12);
            assert!((lau.theta_minus_at(zp.finv()) + lau.theta_minus_at(zp)).norm() < 1e-12);
            assert!((lau.xi_at(zp.finv()) + lau.xi_at(zp)).norm() < 1e-12);
        }
    }

    #[test]
    fn dispersion_matches_xydm_formula() {
        let (gamma, s, h) = (0.8, 0.35, 1.4);
        let c = CouplingSet::xy_dm(gamma, s, h);
        for k in 0..64 {
            let t = -PI + 2.0 * PI * (k as f64 + 0.5) / 64.0;
            let expect = ((h - 2.0 * t.cos()).powi(2) + 4.0 * gamma * gamma * t.sin().powi(2))
                .sqrt()
                + 2.0 * s * t.sin();
            assert!((c.dispersion(t) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn dispersion_zeros_at_half_drift() {
        // gamma=0, h=0, s=1/2: zeros where |cos t| = -sin(t)/2·2 ... i.e.
        // tan t = +-2 in (-pi, 0), cos t = +-1/sqrt(5)
        let c = CouplingSet::xy_dm(0.0, 0.5, 0.0);
        let mut zeros = Vec::new();
        let grid = 2000;
        let mut prev = c.dispersion(-PI + 1e-9);
        for k in 1..=grid {
            let t = -PI + PI * k as f64 / grid as f64; // scan (-pi, 0)
            let lam = c.dispersion(t);
            if (lam < 0.0) != (prev < 0.0) {
                zeros.push(bisect_zero(|x| c.dispersion(x), t - PI / grid as f64, t));
            }
            prev = lam;
        }
        assert_eq!(zeros.len(), 2);
        let inv_sqrt5 = 1.0 / 5.0f64.sqrt();
        let mut cosines: Vec<f64> = zeros.iter().map(|t| t.cos()).collect();
        cosines.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((cosines[0] + inv_sqrt5).abs() < 1e-9);
        assert!((cosines[1] - inv_sqrt5).abs() < 1e-9);
    }

    #[test]
    fn diagonalize_gapped_has_empty_sea() {
        let c = CouplingSet::xy_dm(1.0, 0.0, 4.0);
        let gs = c.diagonalize(64).unwrap();
        assert!(gs.dirac_sea.is_empty());
        assert!(
            (gs.ground_energy
                - (gs.energy_shift - 0.5 * gs.lambda.iter().map(|l| l.abs()).sum::<f64>()))
            .abs()
                < 1e-12
        );
        // energy shift equals N A_0 / 2 for N > L
        assert!((gs.energy_shift - 64.0 * (-4.0) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn diagonalize_drift_sea_is_contiguous_arc() {
        let c = CouplingSet::xy_dm(0.0, 1.0, 0.0);
        let n = 256;
        let gs = c.diagonalize(n).unwrap();
        // the grid hits the Fermi points exactly at this n; modes with
        // dispersion at rounding distance of zero are excluded from the
        // sign comparison
        for k in 0..n {
            let t = 2.0 * PI * k as f64 / n as f64;
            let lam = 2.0 * t.cos().abs() + 2.0 * t.sin();
            if lam.abs() < 1e-9 {
                continue;
            }
            assert_eq!(gs.dirac_sea.contains(&k), lam < 0.0, "mode {k}");
        }
        assert!(!gs.dirac_sea.is_empty());
        // contiguous arc of modes, all with angles in (-pi, 0)
        for w in gs.dirac_sea.windows(2) {
            assert!(w[1] == w[0] + 1);
        }
        for &k in &gs.dirac_sea {
            let t = wrap_angle(2.0 * PI * k as f64 / n as f64);
            assert!(t < 0.0 && t > -PI);
        }
    }

    #[test]
    fn diagonalize_rejects_short_chain() {
        let c = CouplingSet::xy_dm(1.0, 0.0, 4.0);
        assert!(matches!(c.diagonalize(2), Err(Error::Domain(_))));
    }

    #[test]
    fn spectral_polynomial_xy_expansion() {
        // gamma=1, h=4: P(z) = z^2 ((z + 1/z - 4)^2 - (z - 1/z)^2)
        //              = -8z + 20 z^2 - 8 z^3
        let c = CouplingSet::xy_dm(1.0, 0.0, 4.0);
        let coeffs = c.spectral_coeffs().unwrap();
        let expect = [0.0, -8.0, 20.0, -8.0, 0.0];
        for (a, b) in coeffs.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-12, "{coeffs:?}");
        }
        let curve = c.spectral_curve(1e-9).unwrap();
        assert_eq!(curve.origin_multiplicity, 1);
        assert_eq!(curve.infinity_multiplicity, 1);
        assert_eq!(curve.inside_count(), 2);
        // inside roots 0 and 1/2, outside 2
        let mut finite: Vec<f64> = curve.finite_roots.iter().map(|(z, _)| z.re).collect();
        finite.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((finite[0] - 0.0).abs() < 1e-10);
        assert!((finite[1] - 0.5).abs() < 1e-10);
        assert!((finite[2] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn spectral_polynomial_critical_xx() {
        let c = CouplingSet::xy_dm(0.0, 0.0, 0.0);
        let coeffs = c.spectral_coeffs().unwrap();
        // (z^2+1)^2
        let expect = [1.0, 0.0, 2.0, 0.0, 1.0];
        for (a, b) in coeffs.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        let curve = c.spectral_curve(1e-9).unwrap();
        assert_eq!(curve.on_circle.len(), 2);
        for &i in &curve.on_circle {
            let (z, m) = curve.finite_roots[i];
            assert_eq!(m, 2);
            assert!((z.norm() - 1.0).abs() < 1e-10);
            assert!((z.re).abs() < 1e-8);
        }

        // |h| < 2: double roots at h/2 +- i sqrt(1 - (h/2)^2)
        let h = 1.0;
        let c = CouplingSet::xy_dm(0.0, 0.0, h);
        let curve = c.spectral_curve(1e-9).unwrap();
        assert_eq!(curve.on_circle.len(), 2);
        for &i in &curve.on_circle {
            let (z, m) = curve.finite_roots[i];
            assert_eq!(m, 2);
            assert!((z.re - 0.5).abs() < 1e-7);
            assert!((z.im.abs() - 0.75f64.sqrt()).abs() < 1e-7);
        }
    }

    #[test]
    fn palindrome_and_quartet_invariants() {
        let c = CouplingSet::xy_dm(0.6, 0.2, 2.8);
        let coeffs = c.spectral_coeffs().unwrap();
        let deg = coeffs.len() - 1;
        for m in 0..coeffs.len() {
            assert!((coeffs[m] - coeffs[deg - m]).abs() < 1e-12);
        }
        let curve = c.spectral_curve(1e-9).unwrap();
        // applying inversion + conjugation permutes the root multiset
        for &(z, _) in &curve.finite_roots {
            if z.norm() < 1e-12 {
                continue;
            }
            let target = z.finv().conj();
            let ok = curve
                .finite_roots
                .iter()
                .any(|&(w, _)| rel_dist(w, target) < 1e-7);
            assert!(ok, "inversion+conjugation image of {z} missing");
        }
        // criticality identity (Lambda(t) + Lambda(-t))^2 = 4 |P(e^{it})|
        let p = Poly::from_real(&coeffs);
        for k in 0..128 {
            let t = -PI + 2.0 * PI * (k as f64 + 0.5) / 128.0;
            let lhs = (c.dispersion(t) + c.dispersion(-t)).powi(2);
            let rhs = 4.0 * p.eval(C64::new(0.0, t).exp()).norm();
            assert!(
                (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()).max(1.0),
                "identity fails at {t}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn classify_three_phases() {
        let gapped = CouplingSet::xy_dm(1.0, 0.0, 4.0).classify(1e-9).unwrap();
        assert_eq!(gapped.class, CriticalClass::Gapped);
        assert_eq!((gapped.r, gapped.q), (0, 0));

        let xx = CouplingSet::xy_dm(0.0, 0.0, 0.0).classify(1e-9).unwrap();
        assert_eq!(xx.class, CriticalClass::CriticalParityPreservingVacuum);
        assert_eq!((xx.r, xx.q), (2, 0));
        for u in &xx.pinchings {
            assert!(u.re.abs() < 1e-7 && (u.im.abs() - 1.0).abs() < 1e-7);
        }

        let sea = CouplingSet::xy_dm(0.0, 1.0, 0.0).classify(1e-9).unwrap();
        assert_eq!(sea.class, CriticalClass::CriticalDiracSea);
        // the circle degeneracies at +-i sit inside the sea arcs: r = 0
        assert_eq!((sea.r, sea.q), (0, 4));
        let half = 0.5f64.sqrt();
        for v in &sea.insertions {
            assert!((v.re.abs() - half).abs() < 1e-6);
            assert!((v.im.abs() - half).abs() < 1e-6);
        }
        assert_eq!(sea.dirac_intervals.len(), 1);
    }

    #[test]
    fn classify_stable_under_tolerance_halving() {
        for c in [
            CouplingSet::xy_dm(1.0, 0.0, 4.0),
            CouplingSet::xy_dm(0.0, 1.0, 0.5),
            CouplingSet::xy_dm(0.3, 0.0, 2.0),
        ] {
            let r1 = c.classify(1e-8).unwrap();
            let r2 = c.classify(5e-9).unwrap();
            assert_eq!(r1.class, r2.class);
            assert_eq!((r1.r, r1.q), (r2.r, r2.q));
        }
    }

    #[test]
    fn fermi_points_closed_form() {
        let (t1, t2) = fermi_points_xydm(0.0, 1.0, 0.0).unwrap();
        let half = 0.5f64.sqrt();
        let mut cs = [t1.cos(), t2.cos()];
        cs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((cs[0] + half).abs() < 1e-12);
        assert!((cs[1] - half).abs() < 1e-12);
        assert!(t1 <= 0.0 && t1 > -PI && t2 <= 0.0 && t2 > -PI);

        // dominant-drift direction: cosines approach +-1
        let (t1, t2) = fermi_points_xydm(0.0, 40.0, 0.0).unwrap();
        assert!(t1.cos().abs() > 0.999 && t2.cos().abs() > 0.999);

        assert!(fermi_points_xydm(1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn fermi_points_match_spectrum_with_field() {
        let (gamma, s, h) = (0.3, 1.1, 0.9);
        let (t1, t2) = fermi_points_xydm(gamma, s, h).unwrap();
        let c = CouplingSet::xy_dm(gamma, s, h);
        assert!(c.dispersion(t1).abs() < 1e-10);
        assert!(c.dispersion(t2).abs() < 1e-10);
        let report = c.classify(1e-9).unwrap();
        assert_eq!(report.class, CriticalClass::CriticalDiracSea);
        assert_eq!(report.q, 4);
        let mut found = 0;
        for v in &report.insertions {
            for t in [t1, t2, -t1, -t2] {
                if (v - C64::new(0.0, t).exp()).norm() < 1e-6 {
                    found += 1;
                    break;
                }
            }
        }
        assert_eq!(found, 4);
    }

    #[test]
    fn pc_factor_roundtrip() {
        let zeros = [
            C64::new(0.2, 0.0),
            C64::new(0.5, 0.0),
            C64::new(2.2, 0.0),
            C64::new(4.0, 0.0),
        ];
        let c = CouplingSet::from_pc_plus_factor(&zeros).unwrap();
        assert!(c.is_pc_symmetric() && c.is_parity_symmetric());
        // plus factor reproduces the requested zeros
        let fp = c.plus_factor();
        for z in zeros {
            assert!(fp.eval(z).norm() < 1e-10 * fp.coeff_norm());
        }
        // minus factor carries the inverses
        let fm = c.minus_factor();
        for z in zeros {
            assert!(fm.eval(z.finv()).norm() < 1e-10 * fm.coeff_norm());
        }
        let report = c.classify(1e-9).unwrap();
        assert_eq!(report.class, CriticalClass::Gapped);
    }

    #[test]
    fn invalid_couplings_rejected() {
        // break hermiticity
        let bad = CouplingSet::from_full(
            1,
            vec![C64::new(1.0, 0.3), C64::new(-1.0, 0.0), C64::new(1.0, 0.3)],
            vec![C64::new(0.0, 0.0); 3],
        );
        assert!(matches!(bad, Err(Error::Constraint { .. })));
        // break pairing antisymmetry
        let bad = CouplingSet::from_full(
            1,
            vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(1.0, 0.0)],
            vec![C64::new(0.5, 0.0), C64::new(0.0, 0.0), C64::new(0.5, 0.0)],
        );
        assert!(matches!(bad, Err(Error::Constraint { .. })));
    }
}
