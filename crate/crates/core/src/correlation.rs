//! Ground-state symbol, correlation matrices of (multi-)interval
//! subsystems, entanglement spectra and Renyi entropies.

use crate::chain::{CouplingSet, TOL_ZERO};
use crate::error::{Error, Result};
use crate::linalg;
use crate::mobius::{self, MobiusMap};
use crate::quad;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

type C64 = Complex64;
type Block = [[C64; 2]; 2];

/// Branch of the ground-state symbol at a given angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    /// Dirac-sea mode at `theta`: the symbol is the identity.
    PlusIdentity,
    /// Both `theta` and `-theta` are above the sea: mixing matrix.
    Mixing,
    /// Dirac-sea mode at `-theta`: minus the identity.
    MinusIdentity,
}

/// The 2x2 symbol sample at one angle.
#[derive(Debug, Clone, Copy)]
pub struct SymbolSample {
    pub theta: f64,
    pub g: Block,
    pub kind: SymbolKind,
}

/// Ground-state symbol at angle `theta`.
///
/// Errors when `theta` sits at a discontinuity: either the mixing matrix is
/// singular there (pinching) or the angle is squeezed between sea branches.
pub fn symbol(chain: &CouplingSet, theta: f64) -> Result<SymbolSample> {
    let scale = chain_scale(chain);
    let lam = chain.dispersion(theta);
    let lam_opp = chain.dispersion(-theta);
    if lam < -TOL_ZERO * scale {
        return Ok(SymbolSample {
            theta,
            g: [
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            ],
            kind: SymbolKind::PlusIdentity,
        });
    }
    if lam_opp < -TOL_ZERO * scale {
        return Ok(SymbolSample {
            theta,
            g: [
                [C64::new(-1.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
            ],
            kind: SymbolKind::MinusIdentity,
        });
    }
    let tp = chain.theta_plus_angle(theta);
    let xi = chain.xi_angle(theta);
    let norm = (tp * tp + xi.norm_sqr()).sqrt();
    if norm < TOL_ZERO * scale {
        return Err(Error::Numerical(format!(
            "symbol discontinuity at theta = {theta}: mixing matrix degenerate"
        )));
    }
    let g = [
        [C64::new(tp / norm, 0.0), xi / norm],
        [xi.conj() / norm, C64::new(-tp / norm, 0.0)],
    ];
    Ok(SymbolSample {
        theta,
        g,
        kind: SymbolKind::Mixing,
    })
}

fn chain_scale(chain: &CouplingSet) -> f64 {
    let mut s = 0.0f64;
    for l in 0..=chain.range() as i64 {
        s = s.max(chain.a_at(l).norm()).max(chain.b_at(l).norm());
    }
    s.max(1e-300)
}

/// A union of disjoint integer site intervals, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemSpec {
    intervals: Vec<(i64, i64)>,
}

impl SubsystemSpec {
    pub fn new(intervals: Vec<(i64, i64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Domain("subsystem must be nonempty".into()));
        }
        for &(a, b) in &intervals {
            if b < a {
                return Err(Error::Domain(format!("interval {a}:{b} is empty")));
            }
        }
        for w in intervals.windows(2) {
            if w[1].0 <= w[0].1 {
                return Err(Error::Domain(
                    "intervals must be disjoint and ascending".into(),
                ));
            }
        }
        Ok(SubsystemSpec { intervals })
    }

    pub fn single(len: usize) -> Self {
        SubsystemSpec {
            intervals: vec![(1, len as i64)],
        }
    }

    pub fn intervals(&self) -> &[(i64, i64)] {
        &self.intervals
    }

    pub fn interval_count(&self) -> usize {
        self.intervals.len()
    }

    pub fn sites(&self) -> Vec<i64> {
        self.intervals.iter().flat_map(|&(a, b)| a..=b).collect()
    }

    pub fn len(&self) -> usize {
        self.intervals
            .iter()
            .map(|&(a, b)| (b - a + 1) as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// How the Fourier blocks are produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CorrelationMode {
    /// Mode sum over a periodic chain of the given length.
    FiniteChain(usize),
    /// Thermodynamic-limit integral with the given per-coefficient target.
    Thermodynamic { tol: f64 },
}

impl CorrelationMode {
    pub fn thermodynamic() -> Self {
        CorrelationMode::Thermodynamic { tol: 1e-10 }
    }
}

/// Two-point correlation matrix restricted to a subsystem; dimension twice
/// the number of sites, Hermitian with plus/minus paired spectrum.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub dim: usize,
    pub data: Vec<C64>,
    pub mode: CorrelationMode,
    pub subsystem_size: usize,
    pub interval_count: usize,
}

impl CorrelationMatrix {
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }
}

/// Assemble the correlation matrix of `sub` for the ground state of `chain`.
pub fn build_correlation(
    chain: &CouplingSet,
    sub: &SubsystemSpec,
    mode: CorrelationMode,
) -> Result<CorrelationMatrix> {
    let sites = sub.sites();
    let max_idx = sites.iter().map(|s| s.unsigned_abs()).max().unwrap();
    let span = (sites[sites.len() - 1] - sites[0]) as usize;
    let blocks: Vec<Block> = match mode {
        CorrelationMode::FiniteChain(n) => {
            if n <= 2 * max_idx as usize {
                return Err(Error::Domain(format!(
                    "finite chain length {n} must exceed twice the largest site index {max_idx}"
                )));
            }
            finite_blocks(chain, n, span)?
        }
        CorrelationMode::Thermodynamic { tol } => thermodynamic_blocks(chain, span, tol)?,
    };
    let m = sites.len();
    let dim = 2 * m;
    let mut data = vec![C64::new(0.0, 0.0); dim * dim];
    for (i, &si) in sites.iter().enumerate() {
        for (j, &sj) in sites.iter().enumerate() {
            let d = si - sj;
            let blk = if d >= 0 {
                blocks[d as usize]
            } else {
                conj_transpose(blocks[(-d) as usize])
            };
            for a in 0..2 {
                for b in 0..2 {
                    data[(2 * i + a) * dim + (2 * j + b)] = blk[a][b];
                }
            }
        }
    }
    let v = CorrelationMatrix {
        dim,
        data,
        mode,
        subsystem_size: m,
        interval_count: sub.interval_count(),
    };
    let herm = v.hermiticity_residual();
    if herm > 1e-10 {
        return Err(Error::Numerical(format!(
            "correlation matrix hermiticity residual {herm:e}"
        )));
    }
    Ok(v)
}

fn conj_transpose(b: Block) -> Block {
    [
        [b[0][0].conj(), b[1][0].conj()],
        [b[0][1].conj(), b[1][1].conj()],
    ]
}

fn finite_blocks(chain: &CouplingSet, n: usize, span: usize) -> Result<Vec<Block>> {
    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let theta = 2.0 * PI * k as f64 / n as f64;
        let theta = if theta > PI { theta - 2.0 * PI } else { theta };
        samples.push(symbol(chain, theta)?);
    }
    let mut blocks = Vec::with_capacity(span + 1);
    for d in 0..=span {
        let mut acc = [[C64::new(0.0, 0.0); 2]; 2];
        for s in &samples {
            let phase = C64::new(0.0, s.theta * d as f64).exp();
            for a in 0..2 {
                for b in 0..2 {
                    acc[a][b] += s.g[a][b] * phase;
                }
            }
        }
        for row in acc.iter_mut() {
            for e in row.iter_mut() {
                *e /= n as f64;
            }
        }
        blocks.push(acc);
    }
    Ok(blocks)
}

/// Angles where the symbol is allowed to jump: pinchings and Fermi points
/// plus their opposites.
fn discontinuity_angles(chain: &CouplingSet) -> Result<Vec<f64>> {
    let report = chain.classify(1e-9)?;
    let mut angles = Vec::new();
    for z in report.pinchings.iter().chain(report.insertions.iter()) {
        angles.push(z.arg());
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok(angles)
}

fn thermodynamic_blocks(chain: &CouplingSet, span: usize, tol: f64) -> Result<Vec<Block>> {
    let breaks = discontinuity_angles(chain)?;
    let indices: Vec<usize> = (0..=span).collect();
    let results: Vec<Result<Block>> = indices
        .par_iter()
        .map(|&d| fourier_block(chain, d as i64, &breaks, tol))
        .collect();
    results.into_iter().collect()
}

fn fourier_block(chain: &CouplingSet, d: i64, breaks: &[f64], tol: f64) -> Result<Block> {
    // panel boundaries: symbol discontinuities, then oscillation-limited
    // subdivision so the error estimator sees the wave
    let mut cuts: Vec<f64> = vec![-PI];
    cuts.extend(breaks.iter().copied());
    cuts.push(PI);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let mut acc = [[C64::new(0.0, 0.0); 2]; 2];
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo < 1e-13 {
            continue;
        }
        let waves = (hi - lo) * d.unsigned_abs() as f64 / (2.0 * PI);
        let pieces = (waves / 3.0).ceil().max(1.0) as usize;
        for p in 0..pieces {
            let a = lo + (hi - lo) * p as f64 / pieces as f64;
            let b = lo + (hi - lo) * (p + 1) as f64 / pieces as f64;
            let blk = integrate_block(chain, d, a, b, tol)?;
            for (ra, rb) in acc.iter_mut().zip(blk.iter()) {
                for (ea, eb) in ra.iter_mut().zip(rb.iter()) {
                    *ea += *eb;
                }
            }
        }
    }
    for row in acc.iter_mut() {
        for e in row.iter_mut() {
            *e /= 2.0 * PI;
        }
    }
    Ok(acc)
}

fn integrate_block(chain: &CouplingSet, d: i64, a: f64, b: f64, tol: f64) -> Result<Block> {
    use std::cell::RefCell;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    // integrate entry by entry; the symbol evaluation is cheap enough that
    // clarity wins over caching across entries
    for i in 0..2 {
        for j in 0..2 {
            let mut f = |theta: f64| -> C64 {
                match symbol(chain, theta) {
                    Ok(s) => s.g[i][j] * C64::new(0.0, theta * d as f64).exp(),
                    Err(e) => {
                        *failure.borrow_mut() = Some(e);
                        C64::new(0.0, 0.0)
                    }
                }
            };
            out[i][j] = quad::integrate_adaptive(&mut f, a, b, tol).map_err(|_| {
                Error::Accuracy(format!(
                    "correlation coefficient quadrature failed at separation {d}"
                ))
            })?;
        }
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(out)
}

/// Half spectrum of a correlation matrix: values in [0, 1], descending, one
/// per plus/minus pair.
pub fn entanglement_spectrum(v: &CorrelationMatrix) -> Result<Vec<f64>> {
    let n = v.dim;
    let mut work = v.data.clone();
    let vals = linalg::hermitian_eigenvalues(&mut work, n)?;
    spectrum_from_eigenvalues(&vals)
}

/// Same reduction from raw eigenvalues; exposed for oracle recomputations.
pub fn spectrum_from_eigenvalues(vals: &[f64]) -> Result<Vec<f64>> {
    let n = vals.len();
    if !n.is_multiple_of(2) {
        return Err(Error::Numerical("odd correlation dimension".into()));
    }
    let half = n / 2;
    for &v in vals {
        if v.abs() > 1.0 + 1e-8 {
            return Err(Error::Numerical(format!(
                "correlation eigenvalue {v} outside [-1, 1]"
            )));
        }
    }
    // plus/minus pairing: ascending vals must mirror around zero
    let mut spectrum = Vec::with_capacity(half);
    for l in 0..half {
        let neg = vals[l];
        let pos = vals[n - 1 - l];
        if (neg + pos).abs() > 1e-8 {
            return Err(Error::Numerical(format!(
                "spectrum pairing residual {:e} at level {l}",
                (neg + pos).abs()
            )));
        }
        spectrum.push((0.5 * (pos - neg)).clamp(0.0, 1.0));
    }
    // descending
    spectrum.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(spectrum)
}

/// `F_alpha(x) = ((1+x)/2)^alpha + ((1-x)/2)^alpha` on the real interval.
pub fn f_alpha_real(x: f64, alpha: f64) -> f64 {
    let p = 0.5 * (1.0 + x);
    let q = 0.5 * (1.0 - x);
    let pa = if p > 0.0 { p.powf(alpha) } else { 0.0 };
    let qa = if q > 0.0 { q.powf(alpha) } else { 0.0 };
    pa + qa
}

fn binary_entropy(p: f64) -> f64 {
    let mut acc = 0.0;
    for v in [p, 1.0 - p] {
        if v > 0.0 {
            acc -= v * v.ln();
        }
    }
    acc
}

/// Renyi entropy and partition function from a half spectrum.
#[derive(Debug, Clone)]
pub struct EntropyResult {
    pub alpha: f64,
    pub subsystem_size: usize,
    pub spectrum: Vec<f64>,
    pub z_alpha: f64,
    pub s_alpha: f64,
}

pub fn renyi_from_spectrum(spectrum: &[f64], alpha: f64) -> Result<EntropyResult> {
    if alpha <= 0.0 {
        return Err(Error::Domain("Renyi index must be positive".into()));
    }
    let s_alpha: f64 = if (alpha - 1.0).abs() < 1e-12 {
        spectrum
            .iter()
            .map(|&nu| binary_entropy(0.5 * (1.0 + nu)))
            .sum()
    } else {
        spectrum
            .iter()
            .map(|&nu| f_alpha_real(nu, alpha).ln() / (1.0 - alpha))
            .sum()
    };
    let z_alpha = ((1.0 - alpha) * s_alpha).exp();
    Ok(EntropyResult {
        alpha,
        subsystem_size: spectrum.len(),
        spectrum: spectrum.to_vec(),
        z_alpha,
        s_alpha,
    })
}

/// One-call entropy of a subsystem.
pub fn subsystem_entropy(
    chain: &CouplingSet,
    sub: &SubsystemSpec,
    alpha: f64,
    mode: CorrelationMode,
) -> Result<EntropyResult> {
    let v = build_correlation(chain, sub, mode)?;
    let spec = entanglement_spectrum(&v)?;
    renyi_from_spectrum(&spec, alpha)
}

/// One row of a boost-flow scan.
#[derive(Debug, Clone)]
pub struct EntropyFlowRow {
    pub zeta: f64,
    pub chain: CouplingSet,
    pub s_numeric: f64,
    pub s_predicted: f64,
}

/// Recompute the entropy along a boost grid and set the conjectured value
/// next to it. The prediction uses the Jacobians at the base chain's
/// pinchings and insertions.
pub fn entropy_flow_scan(
    chain: &CouplingSet,
    zetas: &[f64],
    alpha: f64,
    sub: &SubsystemSpec,
    mode: CorrelationMode,
) -> Result<Vec<EntropyFlowRow>> {
    let base_report = chain.classify(1e-9)?;
    let base = subsystem_entropy(chain, sub, alpha, mode)?;
    let p = sub.interval_count();
    let rows: Vec<Result<EntropyFlowRow>> = zetas
        .par_iter()
        .map(|&zeta| {
            let m = MobiusMap::boost(zeta);
            let moved = m.transform_couplings(chain)?;
            let s_numeric = subsystem_entropy(&moved, sub, alpha, mode)?.s_alpha;
            let shift = mobius::predicted_shift(alpha, &m, &base_report, p)?;
            Ok(EntropyFlowRow {
                zeta,
                chain: moved,
                s_numeric,
                s_predicted: base.s_alpha + shift.entropy_shift,
            })
        })
        .collect();
    rows.into_iter().collect()
}
