//! Steklov eigenvalues of warped products by 1D mode reduction.
//!
//! For a metric dt^2 + h(t)^2 g_Sigma on [0, L] x Sigma (dim Sigma = 2),
//! separation of variables turns the Steklov problem into one ODE per
//! Laplace eigenvalue lambda_j of the cross-section:
//!
//! ```text
//! (h^2 a')' = lambda_j a,   p(0) = -sigma h(0)^2 a(0),   p(L) = sigma h(L)^2 a(L)
//! ```
//!
//! with p = h^2 a'. Each mode contributes two eigenvalues (one for
//! revolution metrics on the 3-ball, where the interval closes at a pole
//! with h(L) = 0, h'(L) = -1 and a(L) = 0 for j >= 1); the global Steklov
//! spectrum is the merged, multiplicity-expanded union. The crate provides
//!
//! - cross-section spectra ([`cross_section`]),
//! - the warping profile families and meshes ([`profile`], [`grid`]),
//! - two independent per-mode engines: FEM with a Schur-complement
//!   reduction to the boundary ([`fem`]) and adaptive Runge-Kutta shooting
//!   ([`shooting`]), both behind [`mode::solve_mode`],
//! - spectrum assembly with gaps ([`spectrum`]),
//! - executable checks of the sharp bounds, extremal families, and gap
//!   estimates ([`theorems`]),
//! - a batch front-end with CSV/JSON output ([`cli`]).
//!
//! Start with the examples directory: each file exercises one capability
//! end to end (`cargo run --example cylinder_closed_forms`, ...).

pub mod cross_section;
pub mod error;
pub mod fem;
pub mod grid;
pub mod linalg;
pub mod mode;
pub mod profile;
pub mod shooting;
pub mod spectrum;
pub mod theorems;

pub use error::{Error, Result};
