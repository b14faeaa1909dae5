//! Ground-state Renyi entanglement entropies of translation-invariant free
//! fermionic chains, the Mobius/SO(1,1) flows acting on their couplings, and
//! the Riemann-theta asymptotics of the associated block Toeplitz
//! determinants.

// index loops mirror the matrix formulas; keep them literal
#![allow(clippy::needless_range_loop)]
#![allow(clippy::too_many_arguments)]

pub mod asymptotics;
pub mod chain;
pub mod cli;
pub mod correlation;
pub mod error;
pub mod io;
pub mod linalg;
pub mod mobius;
pub mod models;
pub mod poly;
pub mod quad;
pub mod riemann;

pub use error::{Error, Result};
