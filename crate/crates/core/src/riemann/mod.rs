//! Hyperelliptic-curve machinery behind the block Toeplitz determinant
//! asymptotics: branch data, period matrices, theta functions, the
//! asymptotic characteristic polynomial and its pinching limits.

pub mod curve;
pub mod entropy;
pub mod periods;
pub mod pinch;
pub mod theta;

pub use curve::HyperellipticCurve;
pub use periods::{period_matrix, PeriodData};
