//! Period matrix of the hyperelliptic curve by numerical contour
//! integration.
//!
//! Cycles are realized as closed polygons (stadium contours around cut
//! segments and around chains of branch points), with winding numbers
//! verified against the homology targets. The square root of P is continued
//! along every path with a step bound that caps the possible phase change,
//! and all cycles share one sheet via straight connectors from a common base
//! point.

use super::curve::HyperellipticCurve;
use crate::error::{Error, Result};
use crate::linalg::{solve_lu, CMat};
use crate::quad;
use num_complex::Complex64;
use std::f64::consts::PI;

type C64 = Complex64;

/// Upper bound on the phase change of P along a segment: the sum over
/// branch points of (segment length / distance to the point).
fn phase_budget(roots: &[C64], a: C64, b: C64) -> f64 {
    let len = (b - a).norm();
    let mut acc = 0.0;
    for &r in roots {
        let d = point_segment_distance(r, a, b);
        if d <= 0.0 {
            return f64::INFINITY;
        }
        acc += len / d;
    }
    acc
}

fn point_segment_distance(p: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let denom = ab.norm_sqr();
    if denom == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / denom;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn eval_p(roots: &[C64], z: C64) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for &r in roots {
        acc *= z - r;
    }
    acc
}

/// Continue w = sqrt(P) from `(za, wa)` to `zb` along the straight segment.
fn continue_w(roots: &[C64], za: C64, wa: C64, zb: C64) -> Result<C64> {
    let mut z = za;
    let mut w = wa;
    let mut remaining = vec![zb];
    let mut steps = 0usize;
    while let Some(target) = remaining.pop() {
        steps += 1;
        if steps > 200_000 {
            return Err(Error::Integration(
                "branch continuation did not terminate".into(),
            ));
        }
        if phase_budget(roots, z, target) < 0.5 * PI {
            let ratio = eval_p(roots, target) / eval_p(roots, z);
            w *= ratio.sqrt();
            z = target;
        } else {
            let mid = 0.5 * (z + target);
            if (mid - z).norm() < 1e-14 * (1.0 + z.norm()) {
                return Err(Error::Integration(format!(
                    "branch continuation stalled near {z} (path touches a branch point)"
                )));
            }
            remaining.push(target);
            remaining.push(mid);
        }
    }
    Ok(w)
}

/// Integrate the vector of forms z^{k-1}/w, k = 1..=g, along the segment,
/// starting from the tracked value `wa` at `za`. Returns the integrals and
/// the continued w at the end point.
fn integrate_edge(
    roots: &[C64],
    za: C64,
    wa: C64,
    zb: C64,
    g: usize,
    tol: f64,
) -> Result<(Vec<C64>, C64)> {
    fn gl_on(roots: &[C64], za: C64, wa: C64, zb: C64, g: usize) -> Vec<C64> {
        let rule = quad::gl16();
        let mut acc = vec![C64::new(0.0, 0.0); g];
        let pa = eval_p(roots, za);
        let half = 0.5 * (zb - za);
        let mid = 0.5 * (za + zb);
        for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
            let z = mid + half * *x;
            let w = wa * (eval_p(roots, z) / pa).sqrt();
            let mut mono = C64::new(1.0, 0.0);
            let base = *wt * half / w;
            for entry in acc.iter_mut().take(g) {
                *entry += base * mono;
                mono *= z;
            }
        }
        acc
    }

    fn rec(
        roots: &[C64],
        za: C64,
        wa: C64,
        zb: C64,
        g: usize,
        tol: f64,
        coarse: &[C64],
        depth: usize,
        out: &mut Vec<C64>,
    ) -> Result<C64> {
        let mid = 0.5 * (za + zb);
        let wmid = continue_w(roots, za, wa, mid)?;
        let left = gl_on(roots, za, wa, mid, g);
        let right = gl_on(roots, mid, wmid, zb, g);
        let mut err = 0.0f64;
        for k in 0..g {
            err = err.max((left[k] + right[k] - coarse[k]).norm());
        }
        // panels must also respect the branch-tracking budget
        let safe = phase_budget(roots, za, zb) < 0.5 * PI;
        if (err < tol && safe) || depth >= 52 {
            if depth >= 52 && err > 1e3 * tol {
                return Err(Error::Integration(format!(
                    "edge refinement stalled near {za}, err {err:e}"
                )));
            }
            for k in 0..g {
                out[k] += left[k] + right[k];
            }
            return continue_w(roots, mid, wmid, zb);
        }
        let w1 = rec(roots, za, wa, mid, g, tol, &left, depth + 1, out)?;
        rec(roots, mid, w1, zb, g, tol, &right, depth + 1, out)
    }

    let mut out = vec![C64::new(0.0, 0.0); g];
    let coarse = gl_on(roots, za, wa, zb, g);
    let wend = rec(roots, za, wa, zb, g, tol, &coarse, 0, &mut out)?;
    Ok((out, wend))
}

/// Integrate the form vector around a closed polygon; checks that the
/// branch returns to its starting value.
fn cycle_periods(
    roots: &[C64],
    polygon: &[C64],
    w_start: C64,
    g: usize,
    tol: f64,
) -> Result<Vec<C64>> {
    let mut acc = vec![C64::new(0.0, 0.0); g];
    let mut w = w_start;
    let n = polygon.len();
    for i in 0..n {
        let za = polygon[i];
        let zb = polygon[(i + 1) % n];
        let (vals, wend) = integrate_edge(roots, za, w, zb, g, tol)?;
        for k in 0..g {
            acc[k] += vals[k];
        }
        w = wend;
    }
    if (w - w_start).norm() > 1e-6 * w_start.norm() {
        return Err(Error::Integration(format!(
            "branch did not return around a cycle: {w} vs {w_start}"
        )));
    }
    Ok(acc)
}

/// Stadium polygon at distance `margin` around the polyline `spine`,
/// oriented anticlockwise.
fn stadium(spine: &[C64], margin: f64) -> Vec<C64> {
    let cap_segments = 12usize;
    let m = spine.len();
    let mut pts = Vec::new();
    let normal = |a: C64, b: C64| -> C64 {
        let d = b - a;
        C64::new(0.0, 1.0) * d / d.norm()
    };
    // left side forward
    for i in 0..m - 1 {
        let n = normal(spine[i], spine[i + 1]);
        pts.push(spine[i] + margin * n);
        pts.push(spine[i + 1] + margin * n);
    }
    // cap around the last point: rotate from +left normal to -left normal
    let n_last = normal(spine[m - 2], spine[m - 1]);
    let phi0 = n_last.arg();
    for k in 1..cap_segments {
        let phi = phi0 - PI * k as f64 / cap_segments as f64;
        pts.push(spine[m - 1] + margin * C64::new(0.0, phi).exp());
    }
    // right side backward
    for i in (0..m - 1).rev() {
        let n = normal(spine[i], spine[i + 1]);
        pts.push(spine[i + 1] - margin * n);
        pts.push(spine[i] - margin * n);
    }
    // cap around the first point
    let n_first = normal(spine[0], spine[1]);
    let phi0 = (-n_first).arg();
    for k in 1..cap_segments {
        let phi = phi0 - PI * k as f64 / cap_segments as f64;
        pts.push(spine[0] + margin * C64::new(0.0, phi).exp());
    }
    pts
}

fn winding_number(polygon: &[C64], p: C64) -> i32 {
    let mut total = 0.0;
    let n = polygon.len();
    for i in 0..n {
        let a = polygon[i] - p;
        let b = polygon[(i + 1) % n] - p;
        total += (b / a).arg();
    }
    (total / (2.0 * PI)).round() as i32
}

/// A contour with a traversal weight, so a cycle can be realized as a
/// signed combination of simple loops.
type WeightedPolygon = (Vec<C64>, f64);

/// Spine variants for the stadium contour: the straight polyline through
/// the enclosed points, plus versions where segments passing too close to
/// an excluded root detour through a lifted midpoint.
fn candidate_spines(roots: &[C64], enclosed: &[usize]) -> Vec<Vec<C64>> {
    let pts: Vec<C64> = enclosed.iter().map(|&i| roots[i]).collect();
    if pts.len() == 1 {
        return vec![vec![pts[0], pts[0] + C64::new(1e-3, 0.0)]];
    }
    // two traversal orders: monotone in the plane, and an angular tour
    // around the centroid (fewer reversals for comb-like arrangements)
    let mut by_position = pts.clone();
    by_position.sort_by(|p, q| {
        (p.re, p.im)
            .partial_cmp(&(q.re, q.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let centroid = pts.iter().sum::<C64>() / pts.len() as f64;
    let mut by_angle = pts.clone();
    by_angle.sort_by(|p, q| {
        (p - centroid)
            .arg()
            .partial_cmp(&(q - centroid).arg())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let excluded: Vec<C64> = (0..roots.len())
        .filter(|i| !enclosed.contains(i))
        .map(|i| roots[i])
        .collect();
    let mut spines = vec![by_position.clone(), by_angle];
    for lift in [0.6, -0.6, 0.3, -0.3] {
        let base = &by_position;
        let mut detoured = Vec::with_capacity(2 * base.len());
        let mut changed = false;
        for w in 0..base.len() - 1 {
            let (p, q) = (base[w], base[w + 1]);
            detoured.push(p);
            let len = (q - p).norm();
            let near = excluded
                .iter()
                .any(|&r| point_segment_distance(r, p, q) < 0.15 * len);
            if near {
                let normal = C64::new(0.0, 1.0) * (q - p) / len;
                detoured.push(0.5 * (p + q) + lift * len * normal);
                changed = true;
            }
        }
        detoured.push(base[base.len() - 1]);
        if changed {
            spines.push(detoured);
        }
    }
    spines
}

/// Circle enclosing the given points with clearance from all others; only
/// usable when such a separating radius exists.
fn try_circle_cycle(roots: &[C64], enclosed: &[usize]) -> Option<Vec<C64>> {
    let pts: Vec<C64> = enclosed.iter().map(|&i| roots[i]).collect();
    let centroid = pts.iter().sum::<C64>() / pts.len() as f64;
    let r_in = pts
        .iter()
        .map(|z| (z - centroid).norm())
        .fold(0.0, f64::max);
    let r_out = (0..roots.len())
        .filter(|i| !enclosed.contains(i))
        .map(|i| (roots[i] - centroid).norm())
        .fold(f64::INFINITY, f64::min);
    if r_out <= 1.3 * r_in {
        return None;
    }
    let radius = (r_in * r_out.min(3.0 * r_in)).sqrt().max(1.15 * r_in);
    let n = 64;
    let poly: Vec<C64> = (0..n)
        .map(|k| centroid + radius * C64::new(0.0, 2.0 * PI * k as f64 / n as f64).exp())
        .collect();
    for (i, &r) in roots.iter().enumerate() {
        let target = i32::from(enclosed.contains(&i));
        if winding_number(&poly, r) != target {
            return None;
        }
    }
    Some(poly)
}

fn try_stadium_cycle(roots: &[C64], enclosed: &[usize]) -> Option<Vec<C64>> {
    if let Some(poly) = try_circle_cycle(roots, enclosed) {
        return Some(poly);
    }
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for spine in candidate_spines(roots, enclosed) {
        let mut min_excluded = f64::INFINITY;
        for (i, &r) in roots.iter().enumerate() {
            if enclosed.contains(&i) {
                continue;
            }
            for w in spine.windows(2) {
                min_excluded = min_excluded.min(point_segment_distance(r, w[0], w[1]));
            }
        }
        if min_excluded <= 0.0 {
            continue;
        }
        for frac in [0.45, 0.3, 0.18, 0.09, 0.045, 0.02] {
            let margin = if min_excluded.is_finite() {
                frac * min_excluded
            } else {
                frac * scale
            };
            if margin < 1e-11 * scale {
                break;
            }
            let mut poly = stadium(&spine, margin);
            // orientation: anticlockwise around the spine
            let w0 = winding_number(&poly, spine[0]);
            if w0 == -1 {
                poly.reverse();
            } else if w0 != 1 {
                continue;
            }
            let mut ok = true;
            for (i, &r) in roots.iter().enumerate() {
                let target = i32::from(enclosed.contains(&i));
                if winding_number(&poly, r) != target {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Some(poly);
            }
        }
    }
    None
}

/// Realize the homology class winding once around the given branch points:
/// directly as a stadium contour, or as the difference of the all-point
/// loop and the complement loop (valid because anchored loops with equal
/// winding vectors have equal periods).
fn build_cycle(roots: &[C64], enclosed: &[usize]) -> Result<Vec<WeightedPolygon>> {
    if let Some(poly) = try_stadium_cycle(roots, enclosed) {
        return Ok(vec![(poly, 1.0)]);
    }
    let complement: Vec<usize> = (0..roots.len()).filter(|i| !enclosed.contains(i)).collect();
    let all: Vec<usize> = (0..roots.len()).collect();
    if let (Some(outer), Some(inner)) = (
        try_stadium_cycle(roots, &all),
        try_stadium_cycle(roots, &complement),
    ) {
        return Ok(vec![(outer, 1.0), (inner, -1.0)]);
    }
    Err(Error::Integration(format!(
        "no contour realizes the winding targets around {enclosed:?}"
    )))
}

/// Pick a base point whose straight connectors to all cycle starts stay
/// clear of every branch point.
fn base_point(roots: &[C64], starts: &[C64]) -> Result<C64> {
    let re_max = roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let candidates = [
        C64::new(re_max + 1.5 * scale, 0.0),
        C64::new(re_max + 1.5 * scale, 0.617 * scale),
        C64::new(re_max + 1.2 * scale, -0.37 * scale),
        C64::new(re_max + 2.3 * scale, 1.13 * scale),
        C64::new(re_max + 1.9 * scale, -0.71 * scale),
    ];
    for clearance in [1e-3, 1e-5, 1e-7, 1e-10, 1e-12] {
        'cand: for &z0 in &candidates {
            for &s in starts {
                for &r in roots {
                    if point_segment_distance(r, z0, s) < clearance * scale {
                        continue 'cand;
                    }
                }
            }
            return Ok(z0);
        }
    }
    Err(Error::Integration(
        "no clear base point for sheet anchoring".into(),
    ))
}

/// Data produced by the cycle integration.
#[derive(Debug, Clone)]
pub struct PeriodData {
    /// Raw a-cycle integrals of the monomial forms, rows by cycle.
    pub a_periods: CMat,
    /// Raw b-cycle integrals.
    pub b_periods: CMat,
    /// Normalized period matrix, symmetric with positive-definite
    /// imaginary part.
    pub pi: CMat,
    /// Whether all b-cycles were flipped to fix the sign of Im.
    pub orientation_flipped: bool,
}

/// Period matrix of the curve in the homology basis tied to the root
/// ordering: a_r circles cut r, b_r winds around branch points 2..=2r+1.
pub fn period_matrix(curve: &HyperellipticCurve) -> Result<PeriodData> {
    period_matrix_of_ordering(&curve.roots, curve.genus())
}

pub fn period_matrix_of_ordering(roots: &[C64], g: usize) -> Result<PeriodData> {
    let tol = 1e-11;
    let mut cycles: Vec<Vec<usize>> = Vec::with_capacity(2 * g);
    for r in 1..=g {
        cycles.push(vec![2 * r, 2 * r + 1]); // a_r around cut r
    }
    for r in 1..=g {
        cycles.push((1..=2 * r).collect()); // b_r around z_2..z_{2r+1}
    }
    let realizations: Vec<Vec<WeightedPolygon>> = cycles
        .iter()
        .map(|c| build_cycle(roots, c))
        .collect::<Result<_>>()?;
    let starts: Vec<C64> = realizations
        .iter()
        .flat_map(|r| r.iter().map(|(p, _)| p[0]))
        .collect();
    let z0 = base_point(roots, &starts)?;
    let w0 = eval_p(roots, z0).sqrt();

    let mut a_mat = CMat::zeros(g, g);
    let mut b_mat = CMat::zeros(g, g);
    for (idx, pieces) in realizations.iter().enumerate() {
        let mut vals = vec![C64::new(0.0, 0.0); g];
        for (poly, weight) in pieces {
            let w_start = continue_w(roots, z0, w0, poly[0])?;
            let part = cycle_periods(roots, poly, w_start, g, tol)?;
            for k in 0..g {
                vals[k] += *weight * part[k];
            }
        }
        for k in 0..g {
            if idx < g {
                a_mat[(idx, k)] = vals[k];
            } else {
                b_mat[(idx - g, k)] = vals[k];
            }
        }
    }

    // Pi = B A^{-1}; solve A^T X = B^T, Pi = X^T
    let x = solve_lu(&a_mat.transpose(), &b_mat.transpose())?;
    let mut pi = x.transpose();

    // The continuation anchors each lifted cycle on a definite sheet, but a
    // b-cycle can come out with intersection -1 against its a-partner; the
    // symptom is a sign-flipped row. Recover the symplectic signs from the
    // transpose ratios, then demand symmetry and a definite imaginary part.
    let flips = repair_row_signs(&mut pi)?;
    for (r, &s) in flips.iter().enumerate() {
        if s < 0.0 {
            for k in 0..g {
                b_mat[(r, k)] = -b_mat[(r, k)];
            }
        }
    }
    let asym = pi.asymmetry();
    let scale = pi.data.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if asym > 1e-8 * scale.max(1.0) {
        return Err(Error::Integration(format!(
            "period matrix asymmetry {asym:e}; homology basis inconsistent"
        )));
    }
    for i in 0..g {
        for j in i + 1..g {
            let avg = 0.5 * (pi[(i, j)] + pi[(j, i)]);
            pi[(i, j)] = avg;
            pi[(j, i)] = avg;
        }
    }
    let eigs = pi.imag_part_eigenvalues()?;
    let mut flipped = false;
    let min = eigs.first().copied().unwrap_or(0.0);
    let max = eigs.last().copied().unwrap_or(0.0);
    if max < 0.0 {
        for v in pi.data.iter_mut() {
            *v = -*v;
        }
        for v in b_mat.data.iter_mut() {
            *v = -*v;
        }
        flipped = true;
    } else if min <= 0.0 {
        return Err(Error::Integration(format!(
            "imaginary part of the period matrix is not definite: eigenvalues {eigs:?}"
        )));
    }
    Ok(PeriodData {
        a_periods: a_mat,
        b_periods: b_mat,
        pi,
        orientation_flipped: flipped,
    })
}

/// Determine per-row signs making the matrix symmetric (the transpose
/// ratios of a sign-flipped symmetric matrix are plus or minus one) and
/// apply them. Returns the sign vector.
fn repair_row_signs(m: &mut CMat) -> Result<Vec<f64>> {
    let g = m.rows;
    let scale = m.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut sign = vec![0.0f64; g];
    sign[0] = 1.0;
    // propagate relative signs over well-conditioned pairs
    let mut changed = true;
    while changed {
        changed = false;
        for r in 0..g {
            for s in 0..g {
                if r == s || sign[r] == 0.0 || sign[s] != 0.0 {
                    continue;
                }
                let num = m[(s, r)];
                let den = m[(r, s)];
                if den.norm() < 1e-6 * scale {
                    continue;
                }
                let ratio = (num / den).re;
                if (ratio.abs() - 1.0).abs() > 0.2 {
                    continue;
                }
                sign[s] = sign[r] * ratio.signum();
                changed = true;
            }
        }
    }
    for s in sign.iter_mut() {
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    // consistency: flipping rows must symmetrize
    for r in 0..g {
        if sign[r] < 0.0 {
            for k in 0..g {
                m[(r, k)] = -m[(r, k)];
            }
        }
    }
    Ok(sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::CouplingSet;
    use crate::mobius::MobiusMap;

    /// Complete elliptic integral of the first kind by the arithmetic-
    /// geometric mean.
    fn elliptic_k(k: f64) -> f64 {
        let mut a = 1.0f64;
        let mut b = (1.0 - k * k).sqrt();
        for _ in 0..60 {
            if (a - b).abs() < 1e-16 * a {
                break;
            }
            let (a1, b1) = (0.5 * (a + b), (a * b).sqrt());
            a = a1;
            b = b1;
        }
        PI / (2.0 * a)
    }

    /// Modulus from the branch-point cross ratio: with the four points moved
    /// to (-1/k, -1, 1, 1/k), the cross ratio ((z1-z3)(z2-z4))/((z1-z4)(z2-z3))
    /// equals (1+k)^2/(4k). Contracting the cycles onto the Legendre
    /// segments gives a full period over (-1, 1) against a quarter-type
    /// period over (1, 1/k), so the ratio is 2 K(k)/K(k'); the descending
    /// Landen modulus kappa = (1-k)/(1+k) turns that into K'(kappa)/K(kappa).
    fn landen_modulus_from_roots(z: &[C64]) -> f64 {
        let cr = ((z[0] - z[2]) * (z[1] - z[3])) / ((z[0] - z[3]) * (z[1] - z[2]));
        let rho = cr.re;
        assert!(cr.im.abs() < 1e-9, "cross ratio must be real: {cr}");
        assert!(rho >= 1.0);
        let k = (2.0 * rho - 1.0) - 2.0 * (rho * (rho - 1.0)).sqrt();
        (1.0 - k) / (1.0 + k)
    }

    #[test]
    fn genus_one_period_matches_elliptic_integral() {
        let chain = CouplingSet::xy_dm(0.5, 0.0, 3.0);
        let curve = HyperellipticCurve::from_chain(&chain).unwrap();
        let data = period_matrix(&curve).unwrap();
        let pi_val = data.pi[(0, 0)];
        let kappa = landen_modulus_from_roots(&curve.roots);
        let kp = (1.0 - kappa * kappa).sqrt();
        let expect = C64::new(0.0, elliptic_k(kp) / elliptic_k(kappa));
        assert!(
            (pi_val - expect).norm() < 1e-8,
            "Pi = {pi_val}, elliptic value {expect}"
        );
    }

    #[test]
    fn period_matrix_invariant_under_boost() {
        let chain = CouplingSet::xy_dm(0.5, 0.0, 3.0);
        let curve = HyperellipticCurve::from_chain(&chain).unwrap();
        let pi0 = period_matrix(&curve).unwrap().pi;
        for zeta in [0.15, -0.1] {
            let moved = MobiusMap::boost(zeta).transform_couplings(&chain).unwrap();
            let curve1 = HyperellipticCurve::from_chain(&moved).unwrap();
            let pi1 = period_matrix(&curve1).unwrap().pi;
            assert!(
                (pi0[(0, 0)] - pi1[(0, 0)]).norm() < 1e-6,
                "zeta {zeta}: {} vs {}",
                pi0[(0, 0)],
                pi1[(0, 0)]
            );
        }
    }

    #[test]
    fn genus_three_riemann_matrix() {
        let zeros = [
            C64::new(0.2, 0.0),
            C64::new(0.5, 0.0),
            C64::new(2.2, 0.0),
            C64::new(4.0, 0.0),
        ];
        let chain = CouplingSet::from_pc_plus_factor(&zeros).unwrap();
        let curve = HyperellipticCurve::from_chain(&chain).unwrap();
        let data = period_matrix(&curve).unwrap();
        assert_eq!(data.pi.rows, 3);
        assert!(data.pi.asymmetry() < 1e-8);
        let eigs = data.pi.imag_part_eigenvalues().unwrap();
        assert!(eigs[0] > 0.0, "Im Pi eigenvalues {eigs:?}");
    }

    #[test]
    fn genus_three_complex_quartet_riemann_matrix() {
        let zeros = [
            C64::new(0.3, 0.35),
            C64::new(0.3, -0.35),
            C64::new(2.0, 1.1),
            C64::new(2.0, -1.1),
        ];
        let chain = CouplingSet::from_pc_plus_factor(&zeros).unwrap();
        let curve = HyperellipticCurve::from_chain(&chain).unwrap();
        let data = period_matrix(&curve).unwrap();
        assert!(data.pi.asymmetry() < 1e-8);
        let eigs = data.pi.imag_part_eigenvalues().unwrap();
        assert!(eigs[0] > 0.0, "Im Pi eigenvalues {eigs:?}");
    }

    #[test]
    fn degenerate_request_errors() {
        let zeros = [
            C64::new(0.2, 0.0),
            C64::new(0.2000000001, 0.0),
            C64::new(2.2, 0.0),
            C64::new(4.0, 0.0),
        ];
        assert!(HyperellipticCurve::from_factor_roots(&zeros, 2).is_err());
    }
}
