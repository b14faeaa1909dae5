//! Ready-made chains used by the scan protocols: a range-2 critical chain
//! with a pinching pair at prescribed angles, and a range-2 hopping chain
//! whose ground state fills a Dirac sea.

use crate::chain::CouplingSet;
use num_complex::Complex64;

type C64 = Complex64;

/// Range-2 chain with real couplings, gapless with a parity-preserving
/// ground state: the spectral polynomial degenerates on the unit circle at
/// `exp(+-i theta_f)` and the remaining branch points sit at 0.4 and 3
/// (with their inverses).
pub fn critical_pinch_chain(theta_f: f64) -> CouplingSet {
    let u = C64::new(0.0, theta_f).exp();
    CouplingSet::from_pc_plus_factor(&[u, u.conj(), C64::new(0.4, 0.0), C64::new(3.0, 0.0)])
        .expect("conjugation-closed zero set")
}

/// Range-2 pure hopping chain (no pairing) with a drift strong enough to
/// fill one Dirac arc: no pinchings, four Fermi-type insertions.
pub fn dirac_sea_chain() -> CouplingSet {
    CouplingSet::from_upper(
        2,
        &[C64::new(2.6, 0.0), C64::new(1.0, 2.2), C64::new(0.3, 0.4)],
        &[C64::new(0.0, 0.0); 3],
    )
    .expect("hermitian hopping amplitudes")
}
