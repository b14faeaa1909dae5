//! Closed-form and conjectured asymptotics: the universal constant integral,
//! homogeneous-field dimensions, pinching-point entropy formulas, the
//! multi-interval product law, and combined transformation predictions.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

type C64 = Complex64;

/// Lanczos approximation of the complex log-gamma, valid for Re z >= 0.5
/// (reflection handles the rest).
pub fn ln_gamma(z: C64) -> C64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if z.re < 0.5 {
        // reflection: ln Gamma(z) = ln(pi / sin(pi z)) - ln Gamma(1 - z)
        let pi = std::f64::consts::PI;
        let s = (C64::new(pi, 0.0) * z).sin();
        return C64::new(pi, 0.0).ln() - s.ln() - ln_gamma(C64::new(1.0, 0.0) - z);
    }
    let zm = z - 1.0;
    let mut x = C64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (zm + i as f64);
    }
    let t = zm + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (zm + 0.5) * t.ln() - t + x.ln()
}

/// Scaling dimension of the pinching insertions, `(1/alpha - alpha)/24`.
pub fn delta_alpha(alpha: f64) -> f64 {
    (1.0 / alpha - alpha) / 24.0
}

/// `log F_alpha / (1 - alpha)` continued to complex arguments with
/// principal branches, with the entropy-weight limit at alpha = 1.
pub fn f_alpha_complex(z: C64, alpha: f64) -> C64 {
    let p = 0.5 * (C64::new(1.0, 0.0) + z);
    let q = 0.5 * (C64::new(1.0, 0.0) - z);
    if (alpha - 1.0).abs() < 1e-12 {
        let mut acc = C64::new(0.0, 0.0);
        for v in [p, q] {
            if v.norm() > 0.0 {
                acc -= v * v.ln();
            }
        }
        return acc;
    }
    let f = (alpha * p.ln()).exp() + (alpha * q.ln()).exp();
    f.ln() / (1.0 - alpha)
}

/// Weight of the derivative of `log F_alpha` after the `lambda = tanh t`
/// substitution, combined with the Jacobian: finite and exponentially
/// decaying for every positive alpha.
fn log_f_weight(t: f64, alpha: f64) -> f64 {
    let e2 = (-2.0 * t).exp();
    if (alpha - 1.0).abs() < 1e-9 {
        return -4.0 * t * e2 / ((1.0 + e2) * (1.0 + e2));
    }
    let e2a = (-2.0 * alpha * t).exp();
    2.0 * alpha / (1.0 - alpha) * (e2 - e2a) / ((1.0 + e2a) * (1.0 + e2))
}

fn i_alpha_compute(alpha: f64) -> Result<f64> {
    let pi = std::f64::consts::PI;
    let t_max = (45.0 / alpha.min(1.0)).max(45.0);
    let mut f = |t: f64| {
        let w = log_f_weight(t, alpha);
        let arg = ln_gamma(C64::new(0.5, -t / pi)).im;
        -(1.0 / pi) * w * arg
    };
    // even integrand, integrate the half line
    let val = crate::quad::integrate_adaptive_real(&mut f, 0.0, t_max, 1e-12)?;
    Ok(2.0 * val)
}

/// The universal constant `I_alpha` entering every critical closed form.
/// Memoized; the integral converges for all positive alpha.
pub fn i_alpha(alpha: f64) -> Result<f64> {
    if alpha <= 0.0 {
        return Err(Error::Domain("Renyi index must be positive".into()));
    }
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = alpha.to_bits();
    if let Some(&v) = cache.lock().unwrap().get(&key) {
        return Ok(v);
    }
    let v = i_alpha_compute(alpha)?;
    cache.lock().unwrap().insert(key, v);
    Ok(v)
}

/// Large-interval entropy of a chain whose symbol flips sign at the given
/// unit-modulus points (anticlockwise, conjugation-closed):
/// a logarithmic term, the pair-separation sum, and `R I_alpha`.
pub fn entropy_aef(points: &[C64], x_size: f64, alpha: f64) -> Result<f64> {
    let r = points.len();
    if r == 0 || !r.is_multiple_of(2) {
        return Err(Error::Domain(
            "pinching points must come in inversion pairs".into(),
        ));
    }
    for (i, u) in points.iter().enumerate() {
        if (u.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!(
                "pinching point {u} is not unit modulus"
            )));
        }
        for v in points.iter().skip(i + 1) {
            if (u - v).norm() < 1e-9 {
                return Err(Error::Degenerate(format!(
                    "coincident pinching points at {u}"
                )));
            }
        }
    }
    let coeff = (alpha + 1.0) / (12.0 * alpha);
    let mut pair_sum = C64::new(0.0, 0.0);
    for (k, u) in points.iter().enumerate() {
        for (l, v) in points.iter().enumerate() {
            if k == l {
                continue;
            }
            let sign = if (k + l) % 2 == 0 { 1.0 } else { -1.0 };
            pair_sum += sign * (u - v).ln();
        }
    }
    if pair_sum.im.abs() > 1e-10 * (1.0 + pair_sum.norm()) {
        return Err(Error::Numerical(format!(
            "pair sum has imaginary residue {:e}; insertion list is not \
             conjugation symmetric",
            pair_sum.im
        )));
    }
    Ok(coeff * r as f64 * x_size.ln() - coeff * pair_sum.re + r as f64 * i_alpha(alpha)?)
}

/// Critical chains with fully explicit asymptotics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormModel {
    /// Zero-anisotropy chain in transverse field `h`, `|h| < 2`.
    CriticalXx { h: f64 },
    /// Critical line `h = 2` at anisotropy `gamma > 0`.
    IsingLine { gamma: f64 },
    /// Zero-anisotropy chain with drift `s` and field `h` in the gapless
    /// sea region `s^2 - (h/2)^2 + 1 > 0`.
    XxDm { s: f64, h: f64 },
}

/// Printed closed forms for the Renyi entropy of a single interval of
/// `x_size` sites, large-size asymptotics.
pub fn closed_form(model: ClosedFormModel, x_size: f64, alpha: f64) -> Result<f64> {
    let c6 = (alpha + 1.0) / (6.0 * alpha);
    let c12 = (alpha + 1.0) / (12.0 * alpha);
    match model {
        ClosedFormModel::CriticalXx { h } => {
            if h.abs() >= 2.0 {
                return Err(Error::Domain(format!(
                    "field {h} is outside the gapless line"
                )));
            }
            let sep2 = 4.0 * (1.0 - 0.25 * h * h); // |u1 - u2|^2
            Ok(c6 * x_size.ln() + c12 * sep2.ln() + 2.0 * i_alpha(alpha)?)
        }
        ClosedFormModel::IsingLine { gamma } => {
            if gamma <= 0.0 {
                return Err(Error::Domain(format!(
                    "anisotropy {gamma} must be positive on the critical line"
                )));
            }
            Ok(c12 * (4.0 * gamma * x_size).ln() + i_alpha(alpha)?)
        }
        ClosedFormModel::XxDm { s, h } => {
            let reach = s * s - 0.25 * h * h + 1.0;
            if reach <= 0.0 {
                return Err(Error::Domain(format!(
                    "parameters (s = {s}, h = {h}) are outside the gapless region"
                )));
            }
            let arg = 4.0 * reach / (s * s + 1.0);
            Ok(c6 * x_size.ln() + c12 * arg.ln() + 2.0 * i_alpha(alpha)?)
        }
    }
}

/// Signature of endpoint `tau` (1-based) in the product law.
fn endpoint_sign(tau: usize) -> f64 {
    if tau.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Multi-interval partition function from the single-interval one:
/// `log Z(x) = sum_{tau < tau'} (-sigma_tau sigma_tau') log Z(x_tau, x_tau')`.
/// Returns the combined log. Endpoints ascending, one pair per interval.
pub fn multiinterval_log_z(
    single_log_z: impl Fn(f64, f64) -> f64,
    endpoints: &[f64],
) -> Result<f64> {
    let n = endpoints.len();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::Domain("endpoint list must pair up".into()));
    }
    for w in endpoints.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Domain("endpoints must be strictly ascending".into()));
        }
    }
    let p = (n / 2) as f64;
    let mut sign_sum = 0.0;
    let mut acc = 0.0;
    for tau in 1..=n {
        for tau2 in tau + 1..=n {
            let ss = endpoint_sign(tau) * endpoint_sign(tau2);
            sign_sum += ss;
            acc += -ss * single_log_z(endpoints[tau - 1], endpoints[tau2 - 1]);
        }
    }
    if (sign_sum + p).abs() > 1e-12 {
        return Err(Error::Numerical(format!(
            "sign identity violated: sum sigma sigma' = {sign_sum}, expected {}",
            -p
        )));
    }
    Ok(acc)
}

/// Entropy version of the product law: `S` is additive with the same signs.
pub fn multiinterval_entropy(single_s: impl Fn(f64) -> f64, endpoints: &[f64]) -> Result<f64> {
    multiinterval_log_z(|a, b| single_s(b - a), endpoints)
}

/// Insertion content of a critical multi-interval configuration.
#[derive(Debug, Clone)]
pub struct InsertionData {
    /// Pinching points (unit modulus).
    pub pinchings: Vec<C64>,
    /// Fermi-type insertions (unit modulus).
    pub insertions: Vec<C64>,
    /// Interval endpoints, strictly ascending, two per interval.
    pub endpoints: Vec<f64>,
}

impl InsertionData {
    pub fn interval_count(&self) -> usize {
        self.endpoints.len() / 2
    }

    pub fn validate(&self) -> Result<()> {
        if !self.endpoints.len().is_multiple_of(2) || self.endpoints.is_empty() {
            return Err(Error::Domain("endpoints must pair up".into()));
        }
        for w in self.endpoints.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Domain("endpoints must be ascending".into()));
            }
        }
        for z in self.pinchings.iter().chain(&self.insertions) {
            if (z.norm() - 1.0).abs() > 1e-10 {
                return Err(Error::Domain(format!("insertion {z} is not unit modulus")));
            }
        }
        Ok(())
    }
}

/// Which transformation law to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformLawKind {
    /// Coupling-space map only: pinchings weigh `2 P Delta`, insertions `P Delta`.
    MobiusFlow,
    /// Real-space conformal map only: each endpoint weighs `2 C Delta` with
    /// `C = R/2 + Q/4`.
    Conformal,
    /// Direct product of both: mixed Jacobians at `(u, x)` and `(v, x)`.
    Unified,
}

/// Jacobians of the transformed coordinates, one per insertion point.
#[derive(Debug, Clone)]
pub struct TransformJacobians {
    pub du: Vec<C64>,
    pub dv: Vec<C64>,
    pub dx: Vec<f64>,
}

/// Multiplicative factor picked up by the partition function.
pub fn transform_prediction(
    kind: TransformLawKind,
    data: &InsertionData,
    jac: &TransformJacobians,
    alpha: f64,
) -> Result<C64> {
    data.validate()?;
    let r = data.pinchings.len();
    let q = data.insertions.len();
    let p = data.interval_count();
    if jac.du.len() != r || jac.dv.len() != q {
        return Err(Error::Domain(
            "Jacobian count does not match the insertion data".into(),
        ));
    }
    let delta = delta_alpha(alpha);
    let mut log_factor = C64::new(0.0, 0.0);
    match kind {
        TransformLawKind::MobiusFlow => {
            for j in &jac.du {
                log_factor += 2.0 * p as f64 * delta * j.ln();
            }
            for j in &jac.dv {
                log_factor += p as f64 * delta * j.ln();
            }
        }
        TransformLawKind::Conformal => {
            if jac.dx.len() != 2 * p {
                return Err(Error::Domain(
                    "need one endpoint Jacobian per interval edge".into(),
                ));
            }
            let central = r as f64 / 2.0 + q as f64 / 4.0;
            for &j in &jac.dx {
                log_factor += 2.0 * central * delta * C64::new(j, 0.0).ln();
            }
        }
        TransformLawKind::Unified => {
            if jac.dx.len() != 2 * p {
                return Err(Error::Domain(
                    "need one endpoint Jacobian per interval edge".into(),
                ));
            }
            for ju in &jac.du {
                for &jx in &jac.dx {
                    log_factor += delta * (ju * jx).ln();
                }
            }
            for jv in &jac.dv {
                for &jx in &jac.dx {
                    log_factor += 0.5 * delta * (jv * jx).ln();
                }
            }
        }
    }
    Ok(log_factor.exp())
}
