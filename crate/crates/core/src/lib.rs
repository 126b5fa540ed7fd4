//! Pseudo-spectral simulation of the semi-dissipative and ideal Boussinesq
//! systems on the periodic box `[0, 2π)^n`, n = 2, 3, together with the
//! diagnostics harness (operator identities, energy balances, truncation
//! convergence, commutator probes, blow-up monitors) that the `bsq` CLI
//! drives.
//!
//! The unbounded domain of the underlying model is replaced by the torus;
//! spectral truncation to the closed ball |k| ≤ R plays the role of the
//! Fourier cutoff, and all Sobolev-type norms are exact lattice sums.

pub mod analysis;
pub mod config;
pub mod driver;
pub mod dynamics;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod norms;
pub mod output;
pub mod snapshot;
pub mod spectral;
pub mod util;

pub use error::{Error, Result};
pub use field::{SpectralField, VectorField};
pub use grid::GridSpec;
pub use spectral::TruncationRadius;
