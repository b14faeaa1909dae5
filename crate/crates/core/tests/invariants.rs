//! Cross-module invariants: cut-choice independence of the theta factor,
//! invariance of the period data under admissible boosts, and the
//! transformation identities of the closed-form asymptotics.

use chain_entropy::asymptotics::{self, ClosedFormModel};
use chain_entropy::chain::CouplingSet;
use chain_entropy::correlation::{entropy_flow_scan, CorrelationMode, SubsystemSpec};
use chain_entropy::mobius::{self, MobiusMap};
use chain_entropy::models;
use chain_entropy::riemann::entropy::DeterminantFactor;
use chain_entropy::riemann::{period_matrix, HyperellipticCurve};
use num_complex::Complex64;
use std::f64::consts::PI;

type C64 = Complex64;

fn genus_three_chain() -> CouplingSet {
    CouplingSet::from_pc_plus_factor(&[
        C64::new(0.2, 0.0),
        C64::new(0.5, 0.0),
        C64::new(2.2, 0.0),
        C64::new(4.0, 0.0),
    ])
    .unwrap()
}

#[test]
fn theta_factor_independent_of_cut_choice() {
    let curve = HyperellipticCurve::from_chain(&genus_three_chain()).unwrap();
    // alternative valid ordering: swap the two inside cuts and the two
    // outside cuts as blocks
    let reorder = |v: &[usize]| -> (Vec<C64>, Vec<i8>) {
        let roots = v.iter().map(|&i| curve.roots[i]).collect();
        let eps = v.iter().map(|&i| curve.eps[i]).collect();
        (roots, eps)
    };
    let (roots, eps) = reorder(&[2, 3, 0, 1, 6, 7, 4, 5]);
    let alt = HyperellipticCurve::with_ordering(roots, eps, 2).unwrap();
    let f1 = DeterminantFactor::from_curve(&curve).unwrap();
    let f2 = DeterminantFactor::from_curve(&alt).unwrap();
    for beta in [C64::new(0.1, 0.0), C64::new(0.2, 0.25), C64::new(-0.3, 0.1)] {
        let a = f1.log_pair(beta).unwrap();
        let b = f2.log_pair(beta).unwrap();
        assert!(
            (a - b).norm() < 1e-6 * (1.0 + a.norm()),
            "cut systems disagree at beta {beta}: {a} vs {b}"
        );
    }
}

#[test]
fn period_data_invariant_under_boost_genus_three() {
    let chain = genus_three_chain();
    let curve = HyperellipticCurve::from_chain(&chain).unwrap();
    let pi0 = period_matrix(&curve).unwrap().pi;
    let (mu0, nu0) = curve.characteristics();
    let e0 = curve.e_vector();
    for zeta in [0.1, 0.25] {
        let moved = MobiusMap::boost(zeta).transform_couplings(&chain).unwrap();
        let curve1 = HyperellipticCurve::from_chain(&moved).unwrap();
        let pi1 = period_matrix(&curve1).unwrap().pi;
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((pi0[(i, j)] - pi1[(i, j)]).norm());
            }
        }
        assert!(
            worst < 1e-6,
            "period matrix moved by {worst:e} under boost {zeta}"
        );
        let (mu1, nu1) = curve1.characteristics();
        assert_eq!(mu0, mu1);
        assert_eq!(nu0, nu1);
        assert_eq!(e0, curve1.e_vector());
    }
}

#[test]
fn aef_entropy_transforms_like_the_conjecture() {
    // boosting the pinching pair shifts the explicit formula by exactly the
    // Jacobian sum with weight (alpha+1)/(12 alpha)
    let x = 250.0;
    for alpha in [0.5, 1.0 + 1e-7, 2.0, 3.0] {
        for (theta, zeta) in [(2.0, 0.3), (1.1, 0.45), (2.7, -0.2)] {
            let m = MobiusMap::boost(zeta);
            let u = [C64::new(0.0, theta).exp(), C64::new(0.0, -theta).exp()];
            let moved: Vec<C64> = u.iter().map(|&p| m.map_point(p).unwrap().0).collect();
            let s0 = asymptotics::entropy_aef(&u, x, alpha).unwrap();
            let s1 = asymptotics::entropy_aef(&moved, x, alpha).unwrap();
            let jac_sum: f64 = u.iter().map(|&p| m.unit_circle_jacobian(p).ln()).sum();
            let expect = (alpha + 1.0) / (12.0 * alpha) * jac_sum;
            assert!(
                (s1 - s0 - expect).abs() < 1e-10,
                "alpha {alpha}, theta {theta}: {s1} - {s0} vs {expect}"
            );
        }
    }
    // relabeling the pair by a cyclic shift by two leaves the value fixed
    let u = [
        C64::new(0.0, 0.8).exp(),
        C64::new(0.0, -0.8).exp(),
        C64::new(0.0, 2.1).exp(),
        C64::new(0.0, -2.1).exp(),
    ];
    let shifted = [u[2], u[3], u[0], u[1]];
    let a = asymptotics::entropy_aef(&u, x, 2.0).unwrap();
    let b = asymptotics::entropy_aef(&shifted, x, 2.0).unwrap();
    assert!((a - b).abs() < 1e-10);
}

#[test]
fn drift_closed_form_covariant_under_flow() {
    // evaluating the drift closed form on flowed couplings shifts it by the
    // predicted insertion factor
    let x = 400.0;
    for alpha in [0.5, 2.0, 5.0] {
        for (s, h, zeta) in [(1.0, 0.0, 0.2), (1.2, 0.8, 0.35)] {
            let chain = CouplingSet::xy_dm(0.0, s, h);
            let report = chain.classify(1e-9).unwrap();
            assert_eq!((report.r, report.q), (0, 4));
            let m = MobiusMap::boost(zeta);
            let (_, sp, hp) = mobius::transform_xydm(zeta, 0.0, s, h).unwrap();
            let s0 = asymptotics::closed_form(ClosedFormModel::XxDm { s, h }, x, alpha).unwrap();
            let s1 =
                asymptotics::closed_form(ClosedFormModel::XxDm { s: sp, h: hp }, x, alpha).unwrap();
            let shift = mobius::predicted_shift(alpha, &m, &report, 1).unwrap();
            assert!(
                (s1 - s0 - shift.entropy_shift).abs() < 1e-10,
                "alpha {alpha}: {} vs {}",
                s1 - s0,
                shift.entropy_shift
            );
        }
    }
}

#[test]
fn shift_conventions_consistent_across_alpha_grid() {
    // the partition-function factor and the entropy shift agree through
    // (1 - alpha)^{-1} log, including close to alpha = 1
    let report = models::dirac_sea_chain().classify(1e-9).unwrap();
    let m = MobiusMap::boost(0.27);
    for alpha in [0.5, 1.0 - 1e-6, 1.0 + 1e-6, 2.0, 3.0, 10.0] {
        let p = mobius::predicted_shift(alpha, &m, &report, 1).unwrap();
        if (alpha - 1.0).abs() > 1e-9 {
            let via_z = p.z_factor.ln().re / (1.0 - alpha);
            assert!(
                (via_z - p.entropy_shift).abs() < 1e-9 * (1.0 + via_z.abs()),
                "alpha {alpha}: {via_z} vs {}",
                p.entropy_shift
            );
        } else {
            assert!((p.z_factor - 1.0).norm() < 1e-9);
        }
    }
}

#[test]
fn flow_scan_matches_direct_recomputation() {
    // gapped chain: the scan column is flat; critical chain: the scan
    // tracks the conjectured prediction
    let zetas = [0.0, 0.15, 0.3];
    let sub = SubsystemSpec::single(60);
    let gapped = CouplingSet::xy_dm(1.0, 0.0, 4.0);
    let rows =
        entropy_flow_scan(&gapped, &zetas, 2.0, &sub, CorrelationMode::thermodynamic()).unwrap();
    let s0 = rows[0].s_numeric;
    for row in &rows {
        assert!((row.s_numeric - s0).abs() < 1e-8);
        assert!((row.s_predicted - s0).abs() < 1e-12);
    }

    let critical = models::critical_pinch_chain(3.0 * PI / 4.0);
    let rows = entropy_flow_scan(
        &critical,
        &zetas,
        2.0,
        &sub,
        CorrelationMode::thermodynamic(),
    )
    .unwrap();
    for row in &rows {
        assert!(
            (row.s_numeric - row.s_predicted).abs() < 5e-2,
            "zeta {}: numeric {} vs predicted {}",
            row.zeta,
            row.s_numeric,
            row.s_predicted
        );
    }
}
