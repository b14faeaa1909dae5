//! Degeneration families beyond the acceptance gate: the complex pinching
//! (conjugate quartet reaching the unit circle), the two-term theta limit
//! along a genuine curve family, and the von Neumann value on the
//! zero-field line.

use chain_entropy::asymptotics::{closed_form, ClosedFormModel};
use chain_entropy::chain::CouplingSet;
use chain_entropy::correlation::{subsystem_entropy, CorrelationMode, SubsystemSpec};
use chain_entropy::riemann::pinch::{outside_merge_theta_limit, unit_pinch_divergence};
use chain_entropy::riemann::theta::Characteristics;
use chain_entropy::riemann::{period_matrix, HyperellipticCurve};
use num_complex::Complex64;
use std::f64::consts::PI;

type C64 = Complex64;

#[test]
fn complex_pinching_doubles_the_divergence() {
    // conjugate quartet collapsing onto exp(+-i pi/3): the entropy grows
    // with twice the real-pinching coefficient
    let u = C64::new(0.0, PI / 3.0).exp();
    let family: Vec<_> = [1e-2, 1e-3, 1e-4, 1e-5]
        .iter()
        .map(|&t| {
            let zeros = [
                u * (1.0 + t),
                u.conj() * (1.0 + t),
                C64::new(0.3, 0.0),
                C64::new(3.2, 0.0),
            ];
            HyperellipticCurve::from_factor_roots(&zeros, 2).unwrap()
        })
        .collect();
    let alpha = 2.0;
    let fit = unit_pinch_divergence(&family, alpha, 60).unwrap();
    let target = (alpha + 1.0) / (6.0 * alpha); // c = 1
    let rel = (fit.extrapolated_slope - target).abs() / target;
    assert!(
        rel < 0.02,
        "complex pinching slope {} vs {target} ({:.2}% off)",
        fit.extrapolated_slope,
        100.0 * rel
    );
}

#[test]
fn same_character_merge_matches_two_term_limit_on_curves() {
    // both an inside pair (poles) and an outside pair (zeros) of the
    // squared symbol factor merge; the truncated theta identity holds at
    // the cycle of either pair
    let mut prev = [f64::INFINITY; 2];
    for &t in &[1e-3, 1e-5, 1e-7] {
        let zeros = [
            C64::new(3.0 - t, 0.0),
            C64::new(3.0 + t, 0.0),
            C64::new(3.8, 0.0),
            C64::new(1.0 / 4.5, 0.0),
        ];
        let curve = HyperellipticCurve::from_factor_roots(&zeros, 2).unwrap();
        // merging pairs must be cut partners with equal characters
        assert_eq!(curve.eps[2], curve.eps[3]);
        assert_eq!(curve.eps[4], curve.eps[5]);
        let data = period_matrix(&curve).unwrap();
        let (mu, nu) = curve.characteristics();
        let chars = Characteristics { mu, nu };
        let s = [
            C64::new(0.12, 0.03),
            C64::new(-0.08, 0.05),
            C64::new(0.21, -0.02),
        ];
        for (slot, r_hat) in [1usize, 2].into_iter().enumerate() {
            let (lhs, rhs) = outside_merge_theta_limit(&chars, &s, &data.pi, r_hat, 1e-13).unwrap();
            let rel = (lhs - rhs).norm() / rhs.norm();
            assert!(
                rel < prev[slot] * 1.5,
                "cycle {r_hat}: residual {rel:e} did not shrink from {:e}",
                prev[slot]
            );
            prev[slot] = rel;
        }
    }
    assert!(prev[0] < 1e-6 && prev[1] < 1e-6, "final residuals {prev:?}");
}

#[test]
fn zero_field_von_neumann_value() {
    // entanglement spectrum route at the von Neumann point against the
    // closed form
    let chain = CouplingSet::xy_dm(0.0, 0.0, 0.0);
    let s_num = subsystem_entropy(
        &chain,
        &SubsystemSpec::single(100),
        1.0,
        CorrelationMode::thermodynamic(),
    )
    .unwrap()
    .s_alpha;
    let s_formula = closed_form(ClosedFormModel::CriticalXx { h: 0.0 }, 100.0, 1.0).unwrap();
    assert!(
        (s_num - s_formula).abs() < 1e-2,
        "S_1: numeric {s_num} vs formula {s_formula}"
    );
    // away from half filling the angle dependence enters through the
    // chord length between the degeneracy points
    let h = 1.2;
    let s_num = subsystem_entropy(
        &CouplingSet::xy_dm(0.0, 0.0, h),
        &SubsystemSpec::single(100),
        1.0,
        CorrelationMode::thermodynamic(),
    )
    .unwrap()
    .s_alpha;
    let s_formula = closed_form(ClosedFormModel::CriticalXx { h }, 100.0, 1.0).unwrap();
    assert!((s_num - s_formula).abs() < 1e-2);
}

#[test]
fn genus_five_pipeline_holds() {
    // three zeros inside, three outside: a range-3 chain with a 5x5 period
    // matrix; the determinant asymptotics must still beat the direct
    // diagonalization at moderate sizes
    use chain_entropy::correlation::build_correlation;
    use chain_entropy::linalg;
    use chain_entropy::riemann::entropy::{dx_lambda, DeterminantFactor};
    use chain_entropy::riemann::period_matrix;

    let zeros = [
        C64::new(0.15, 0.0),
        C64::new(0.3, 0.0),
        C64::new(0.45, 0.0),
        C64::new(2.5, 0.0),
        C64::new(3.5, 0.0),
        C64::new(5.0, 0.0),
    ];
    let chain = CouplingSet::from_pc_plus_factor(&zeros).unwrap();
    let curve = HyperellipticCurve::from_chain(&chain).unwrap();
    assert_eq!(curve.genus(), 5);
    let data = period_matrix(&curve).unwrap();
    assert!(data.pi.asymmetry() < 1e-8);
    let eigs = data.pi.imag_part_eigenvalues().unwrap();
    assert!(eigs[0] > 0.0, "Im eigenvalues {eigs:?}");

    let factor = DeterminantFactor::from_curve(&curve).unwrap();
    let lambda = C64::new(0.0, 2.0);
    let x = 24;
    let asym = dx_lambda(&factor, lambda, x).unwrap();
    let v = build_correlation(
        &chain,
        &SubsystemSpec::single(x),
        CorrelationMode::thermodynamic(),
    )
    .unwrap();
    let mut work = v.data.clone();
    let vals = linalg::hermitian_eigenvalues(&mut work, v.dim).unwrap();
    let n = vals.len();
    let mut direct = C64::new(0.0, 0.0);
    for l in 0..n / 2 {
        let nu = 0.5 * (vals[n - 1 - l] - vals[l]);
        direct += (lambda * lambda - nu * nu).ln();
    }
    let rel = (asym - direct).norm() / direct.norm();
    assert!(rel < 1e-4, "genus-5 determinant oracle off by {rel:e}");
}
