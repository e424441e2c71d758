//! Error taxonomy shared across the crate.
//!
//! The CLI maps these onto its exit-code contract: configuration errors
//! exit with 2, numerical failures (including root bracketing and mode
//! truncation) with 3. A theorem check that runs fine but fails is not an
//! error; it is a report with `pass = false` and exits with 1.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates a documented precondition (negative length,
    /// epsilon out of range, zero multiplicity, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A run configuration is missing fields, inconsistent, or violates a
    /// stated experiment hypothesis.
    #[error("configuration error: {0}")]
    Config(String),

    /// A solve failed for numerical reasons (singular interior block,
    /// non-finite values, ...).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Shooting found no sign change even after widening the bracket.
    #[error("no root in bracket [{lo:.6e}, {hi:.6e}] after {widenings} widenings")]
    RootNotFound { lo: f64, hi: f64, widenings: usize },

    /// The truncation guard of spectrum assembly failed: modes beyond the
    /// largest solved index could still contribute below the requested count.
    #[error(
        "insufficient modes: sigma_(j,1) at j_max = {j_max} is {last_sigma:.6e}, \
         not above the requested eigenvalue {cutoff:.6e}; solve more modes"
    )]
    InsufficientModes { j_max: usize, last_sigma: f64, cutoff: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
