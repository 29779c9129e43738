use std::fmt;

use num_complex::Complex64;

/// Errors reported by the solver pipeline and its numeric kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix dimensions are inconsistent for the requested construction.
    ShapeMismatch { context: &'static str },
    /// A matrix entry is NaN or infinite.
    NonFinite { context: &'static str },
    /// A matrix required to be Hermitian is not, within tolerance.
    NotHermitian { defect: f64 },
    /// A matrix required to be positive semidefinite has a negative eigenvalue.
    NotPsd { min_eig: f64 },
    /// The state matrix has spectral radius at or above one.
    UnstableA { spectral_radius: f64 },
    /// I - zA is singular at the requested evaluation point.
    SingularResolvent { z: Complex64 },
    /// The Riccati iteration did not produce a stabilizing solution. This is
    /// the numeric signal that the symbol R is not strictly positive on the
    /// unit circle.
    NoStabilizingSolution { iterations: usize, min_eig: f64 },
    /// The matrix passed as a stabilizing Riccati solution fails one of the
    /// stabilizing-solution conditions.
    NotStabilizing { defect: f64 },
    /// The kernel used for the inner-function completion does not have the
    /// expected dimension; the inputs are inconsistent or degenerate.
    DegenerateKernel { expected: usize, found: usize },
    /// The problem data admits no contractive solution.
    NotSolvable { margin: f64 },
    /// R is neither identically zero nor strictly positive on the circle;
    /// this intermediate (semidefinite) case is not supported.
    SemidefiniteUnsupported { circle_min_eig: f64 },
    /// A finite Toeplitz section that must be positive definite is not.
    SectionNotPositive { blocks: usize },
    /// A kernel evaluation point lies on or outside the unit circle.
    PointOnBoundary { modulus: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch { context } => {
                write!(f, "inconsistent matrix dimensions in {context}")
            }
            Error::NonFinite { context } => {
                write!(f, "non-finite matrix entry in {context}")
            }
            Error::NotHermitian { defect } => {
                write!(f, "matrix is not Hermitian (defect {defect:.3e})")
            }
            Error::NotPsd { min_eig } => write!(
                f,
                "matrix is not positive semidefinite (minimum eigenvalue {min_eig:.3e})"
            ),
            Error::UnstableA { spectral_radius } => write!(
                f,
                "state matrix is not stable (spectral radius {spectral_radius:.6})"
            ),
            Error::SingularResolvent { z } => {
                write!(f, "I - zA is singular at z = {z}")
            }
            Error::NoStabilizingSolution { iterations, min_eig } => write!(
                f,
                "no stabilizing Riccati solution found after {iterations} iterations \
                 (innovation minimum eigenvalue {min_eig:.3e})"
            ),
            Error::NotStabilizing { defect } => write!(
                f,
                "matrix is not a stabilizing Riccati solution (defect {defect:.3e})"
            ),
            Error::DegenerateKernel { expected, found } => write!(
                f,
                "inner-function kernel has dimension {found}, expected {expected}"
            ),
            Error::NotSolvable { margin } => write!(
                f,
                "Leech problem is not solvable (positivity margin {margin:.3e})"
            ),
            Error::SemidefiniteUnsupported { circle_min_eig } => write!(
                f,
                "R is positive semidefinite but singular on the unit circle \
                 (minimum eigenvalue on circle {circle_min_eig:.3e}); only strictly \
                 positive or identically zero R is supported"
            ),
            Error::SectionNotPositive { blocks } => write!(
                f,
                "Toeplitz section with {blocks} blocks is not positive definite"
            ),
            Error::PointOnBoundary { modulus } => write!(
                f,
                "evaluation point has modulus {modulus} >= 1; kernels require points \
                 inside the open unit disc"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
