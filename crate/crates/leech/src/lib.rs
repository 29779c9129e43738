//! Stable rational matrix solutions of the Leech problem.
//!
//! Given stable rational matrix functions `G` (size `m x p`) and `K`
//! (size `m x q`) presented through a joint state-space realization
//!
//! ```text
//! [G(z) K(z)] = [D1 D2] + z C (I - zA)^{-1} [B1 B2],
//! ```
//!
//! the crate computes a stable rational `X` with `G(z) X(z) = K(z)` on the
//! unit disc and `sup |z|<=1 ||X(z)|| <= 1`, whenever such a solution
//! exists. The construction is entirely state-space based: the symbol
//! `R = G G^* - K K^*` is spectrally factored through the stabilizing
//! solution of a discrete algebraic Riccati equation, a two-sided inner
//! function and a left spectral factor `F` are built from the factor data,
//! and the solution realization is read off a partial isometry.
//!
//! Module map:
//!
//! * [`matrix`] - dense complex kernels (pseudoinverse, PSD square root,
//!   Hermitian eigenvalues, spectral radius).
//! * [`realization`] - state-space realizations, Stein-equation Gramians,
//!   minimality diagnostics, circle-grid H-infinity norms.
//! * [`spectral`] - the symbol `R`, the Riccati iteration, and the
//!   invertible outer spectral factor.
//! * [`solver`] - the inner function, the left factor `F`, the partial
//!   isometry, and the end-to-end [`solver::solve`] pipeline.
//! * [`toeplitz`] - independent finite-section oracles (block Toeplitz and
//!   Hankel sections, Pick kernels, positivity certificates) used to
//!   cross-validate every stage.
//!
//! ```
//! use leech::{LeechData, solver::{solve, SolveOptions}};
//!
//! let data = LeechData::example();
//! let solution = solve(&data, &SolveOptions::default()).unwrap();
//! assert!(solution.diagnostics.leech_residual < 1e-9);
//! assert!(solution.x.hinf_norm_grid(1024) <= 1.0 + 1e-9);
//! ```

pub mod error;
pub mod matrix;
pub mod realization;
pub mod solver;
pub mod spectral;
pub mod toeplitz;

pub use error::{Error, Result};
pub use matrix::CMatrix;
pub use realization::{ctrl_gramian, obs_gramian, LeechData, MinimalityReport, Realization};
pub use solver::{solve, Branch, LeechSolution, SolveOptions};
pub use spectral::{build_symbol, outer_factor, riccati_stabilizing, SpectralFactor, SymbolR};
