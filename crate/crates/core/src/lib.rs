//! # sicinfo
//!
//! Classical information extractable from quantum ensembles and by quantum
//! measurements, for finite-dimensional Hilbert spaces.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`hilbert`] | Hermitian operators, pure states, spectral calculus |
//! | [`states`] | Ensembles, POVMs, support restriction, pretty-good maps, JSON files |
//! | [`sic`] | Qubit/qutrit SIC constructions, Weyl–Heisenberg orbits, SIC certificates |
//! | [`infotheory`] | Born-rule joint distributions, entropies, closed-form bounds |
//! | [`optimize`] | Haar sampling, multi-start descent over pure states, Scrooge estimates |
//! | [`cli`] | The `sicinfo` command-line front end |
//!
//! All informational quantities are in bits.
//!
//! ```
//! use sicinfo::{infotheory, sic};
//!
//! let povm = sic::tetrahedral_povm();
//! let ensemble = sic::antitetrahedral_ensemble();
//! let joint = infotheory::joint_distribution(&ensemble, &povm).unwrap();
//! let info = infotheory::mutual_information(&joint);
//! assert!((info - (4.0f64 / 3.0).log2()).abs() < 1e-12);
//! ```

#![forbid(unsafe_code)]

pub mod cli;
pub mod hilbert;
pub mod infotheory;
pub mod optimize;
pub mod sic;
pub mod states;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operator is not Hermitian (max deviation {0:e})")]
    InvalidOperator(f64),

    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("invalid pure state: {0}")]
    InvalidState(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("elements do not form a SIC set: {0}")]
    NotSic(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid dimension {0} (need d >= 2)")]
    InvalidDimension(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
