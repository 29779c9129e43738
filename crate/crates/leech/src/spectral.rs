//! The symbol `R`, its stabilizing Riccati solution, and the invertible
//! outer spectral factor.
//!
//! For Leech data the symbol is `R(z) = G(z) G^*(z) - K(z) K^*(z)` with
//! `Omega^*(z) = Omega(1/conj(z))^*`; on the circle this is the pointwise
//! Hermitian matrix `G G^* - K K^*`. It carries the two-sided realization
//!
//! ```text
//! R(z) = z C (I - zA)^{-1} Gamma + R0 + Gamma^* (zI - A^*)^{-1} C^*,
//! ```
//!
//! whose data `(A, C, Gamma, R0)` follows from the controllability
//! Gramians of the Leech realization. When `R` is strictly positive on the
//! circle, the discrete algebraic Riccati equation
//!
//! ```text
//! Q = A^* Q A + (C - Gamma^* Q A)^* (R0 - Gamma^* Q Gamma)^{-1} (C - Gamma^* Q A)
//! ```
//!
//! has a unique stabilizing solution, and the invertible outer factor of
//! `R` is read off `Q` in closed form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{
    hermitian_defect, hpd_solve, is_finite, min_hermitian_eig, psd_sqrt, spectral_radius,
    symmetrize, CMatrix, EPS_STAB,
};
use crate::realization::{ctrl_gramian, solve_stein, LeechData, Realization};

/// Two-sided realization data of the Hermitian symbol `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolR {
    a: CMatrix,
    c: CMatrix,
    gamma: CMatrix,
    r0: CMatrix,
}

impl SymbolR {
    /// Validates and symmetrizes the symbol data. `R0` asymmetry beyond
    /// `1e-9` relative is rejected as inconsistent input.
    pub fn new(a: CMatrix, c: CMatrix, gamma: CMatrix, r0: CMatrix) -> Result<Self> {
        let n = a.nrows();
        let m = c.nrows();
        if a.ncols() != n || c.ncols() != n || gamma.nrows() != n || gamma.ncols() != m {
            return Err(Error::ShapeMismatch { context: "symbol state dimensions" });
        }
        if r0.nrows() != m || r0.ncols() != m {
            return Err(Error::ShapeMismatch { context: "symbol constant term" });
        }
        for (mat, context) in [(&a, "A"), (&c, "C"), (&gamma, "Gamma"), (&r0, "R0")] {
            if !is_finite(mat) {
                return Err(Error::NonFinite { context });
            }
        }
        let rho = spectral_radius(&a);
        if rho >= 1.0 - EPS_STAB {
            return Err(Error::UnstableA { spectral_radius: rho });
        }
        let defect = hermitian_defect(&r0);
        if defect > 1e-9 * (1.0 + r0.norm()) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(SymbolR { a, c, gamma, r0: symmetrize(&r0) })
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn c(&self) -> &CMatrix {
        &self.c
    }

    pub fn gamma(&self) -> &CMatrix {
        &self.gamma
    }

    pub fn r0(&self) -> &CMatrix {
        &self.r0
    }

    /// State dimension.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Symbol size (`R` is `m x m`).
    pub fn m(&self) -> usize {
        self.c.nrows()
    }

    /// Evaluates the two-sided realization. Meaningful on and near the unit
    /// circle, where both resolvents exist; `z = 0` is a genuine pole of
    /// the anti-analytic part whenever `A` is singular.
    pub fn eval(&self, z: Complex64) -> Result<CMatrix> {
        let n = self.n();
        if n == 0 {
            return Ok(self.r0.clone());
        }
        let identity = CMatrix::identity(n, n);
        let analytic = (&identity - &self.a * z)
            .lu()
            .solve(&self.gamma)
            .ok_or(Error::SingularResolvent { z })?;
        let anti = (&identity * z - self.a.adjoint())
            .lu()
            .solve(&self.c.adjoint())
            .ok_or(Error::SingularResolvent { z })?;
        Ok((&self.c * analytic) * z + &self.r0 + self.gamma.adjoint() * anti)
    }

    /// Minimum Hermitian eigenvalue of `R` over the uniform circle grid.
    pub fn circle_min_eig(&self, grid_points: usize) -> f64 {
        assert!(grid_points >= 16, "circle_min_eig needs at least 16 points");
        let mut min = f64::INFINITY;
        for k in 0..grid_points {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / grid_points as f64;
            let z = Complex64::new(theta.cos(), theta.sin());
            let value = self
                .eval(z)
                .map(|r| min_hermitian_eig(&r))
                .unwrap_or(f64::NEG_INFINITY);
            min = min.min(value);
        }
        min
    }
}

/// Builds the symbol `R = G G^* - K K^*` from Leech data:
/// `R0 = D1 D1* - D2 D2* + C (P1 - P2) C*` and
/// `Gamma = B1 D1* - B2 D2* + A (P1 - P2) C*`, with `P1`, `P2` the
/// controllability Gramians of `{A, B1}` and `{A, B2}`.
pub fn build_symbol(data: &LeechData) -> Result<SymbolR> {
    let p1 = ctrl_gramian(data.a(), data.b1())?;
    let p2 = ctrl_gramian(data.a(), data.b2())?;
    build_symbol_from_gramians(data, &p1, &p2)
}

/// Same as [`build_symbol`] with the Gramians already at hand.
pub fn build_symbol_from_gramians(data: &LeechData, p1: &CMatrix, p2: &CMatrix) -> Result<SymbolR> {
    let diff = p1 - p2;
    let r0 = data.d1() * data.d1().adjoint() - data.d2() * data.d2().adjoint()
        + data.c() * &diff * data.c().adjoint();
    let gamma = data.b1() * data.d1().adjoint() - data.b2() * data.d2().adjoint()
        + data.a() * &diff * data.c().adjoint();
    SymbolR::new(data.a().clone(), data.c().clone(), gamma, r0)
}

/// One step of the Riccati fixed-point map
/// `Q -> A* Q A + (C - Gamma* Q A)* (R0 - Gamma* Q Gamma)^{-1} (C - Gamma* Q A)`.
///
/// Fails when the innovation matrix `R0 - Gamma* Q Gamma` is not positive
/// definite at tolerance `tol`.
pub fn riccati_step(sym: &SymbolR, q: &CMatrix, tol: f64) -> Result<CMatrix> {
    let innovation = symmetrize(&(sym.r0() - sym.gamma().adjoint() * q * sym.gamma()));
    let min_eig = min_hermitian_eig(&innovation);
    if min_eig.is_nan() || min_eig <= tol {
        return Err(Error::NoStabilizingSolution { iterations: 0, min_eig });
    }
    let loop_gain = sym.c() - sym.gamma().adjoint() * q * sym.a();
    let solved = hpd_solve(&innovation, &loop_gain)
        .ok_or(Error::NoStabilizingSolution { iterations: 0, min_eig })?;
    Ok(symmetrize(
        &(sym.a().adjoint() * q * sym.a() + loop_gain.adjoint() * solved),
    ))
}

/// Frobenius residual of the Riccati equation at `q`, or infinity when the
/// innovation matrix is singular.
pub fn riccati_residual(sym: &SymbolR, q: &CMatrix) -> f64 {
    match riccati_step(sym, q, 0.0) {
        Ok(next) => (next - q).norm(),
        Err(_) => f64::INFINITY,
    }
}

/// Closed-loop matrix `A - Gamma (R0 - Gamma* Q Gamma)^{-1} (C - Gamma* Q A)`.
fn closed_loop(sym: &SymbolR, q: &CMatrix) -> Option<CMatrix> {
    let innovation = symmetrize(&(sym.r0() - sym.gamma().adjoint() * q * sym.gamma()));
    let loop_gain = sym.c() - sym.gamma().adjoint() * q * sym.a();
    let solved = hpd_solve(&innovation, &loop_gain)?;
    Some(sym.a() - sym.gamma() * solved)
}

/// Computes the stabilizing solution of the Riccati equation: fixed-point
/// iteration from `Q = 0`, then Newton defect corrections down to rounding
/// level.
///
/// On this problem class the fixed-point iterates are Hermitian PSD and
/// nondecreasing, and the derivative of the Riccati map at `Q` is
/// `delta -> A_cross* delta A_cross`, so each correction solves a Stein
/// equation in the closed-loop matrix and squares the remaining error.
/// Success certifies that `R` is strictly positive on the unit circle; the
/// returned `Q` has residual below `tol (1 + ||Q||)`, a positive definite
/// innovation matrix, and a stable closed-loop matrix.
pub fn riccati_stabilizing(sym: &SymbolR, tol: f64, max_iter: usize) -> Result<CMatrix> {
    assert!(tol > 0.0, "riccati_stabilizing needs a positive tolerance");
    let n = sym.n();
    let mut q = CMatrix::zeros(n, n);
    let mut converged = false;
    let mut iterations = 0;
    for k in 0..max_iter {
        let next = riccati_step(sym, &q, tol).map_err(|e| match e {
            Error::NoStabilizingSolution { min_eig, .. } => {
                Error::NoStabilizingSolution { iterations: k, min_eig }
            }
            other => other,
        })?;
        let step = (&next - &q).norm();
        q = next;
        iterations = k + 1;
        if step <= tol * (1.0 + q.norm()) {
            converged = true;
            break;
        }
    }
    let innovation = symmetrize(&(sym.r0() - sym.gamma().adjoint() * &q * sym.gamma()));
    let min_eig = min_hermitian_eig(&innovation);
    if !converged {
        return Err(Error::NoStabilizingSolution { iterations, min_eig });
    }
    if n > 0 {
        let a_cross = closed_loop(sym, &q)
            .ok_or(Error::NoStabilizingSolution { iterations, min_eig })?;
        let rho = spectral_radius(&a_cross);
        if rho >= 1.0 - EPS_STAB {
            return Err(Error::NoStabilizingSolution { iterations, min_eig });
        }
        for _ in 0..3 {
            let defect = symmetrize(&(riccati_step(sym, &q, tol)? - &q));
            if defect.norm() <= 1e-15 * (1.0 + q.norm()) {
                break;
            }
            let a_cross = closed_loop(sym, &q)
                .ok_or(Error::NoStabilizingSolution { iterations, min_eig })?;
            let correction = solve_stein(&a_cross.adjoint(), &defect)?;
            q = symmetrize(&(&q + correction));
        }
    }
    Ok(q)
}

/// The invertible outer spectral factor of a strictly positive symbol,
/// together with the Riccati solution it came from.
///
/// `phi` realizes `Phi(z) = Phi(0) + z C_Phi (I - zA)^{-1} Gamma` with
/// `Phi^*(z) Phi(z) = R(z)`; `phi_inv` realizes its inverse on the
/// closed-loop state matrix. `Phi(0)` is normalized to the Hermitian PSD
/// square root of `R0 - Gamma* Q Gamma`, which removes the left-unitary
/// freedom of the factor.
#[derive(Debug, Clone)]
pub struct SpectralFactor {
    q: CMatrix,
    phi0: CMatrix,
    c_phi: CMatrix,
    phi: Realization,
    phi_inv: Realization,
}

impl SpectralFactor {
    /// Stabilizing Riccati solution; equals the observability Gramian of
    /// the pair `{C_Phi, A}`.
    pub fn q(&self) -> &CMatrix {
        &self.q
    }

    /// `Phi(0)`, Hermitian positive definite.
    pub fn phi0(&self) -> &CMatrix {
        &self.phi0
    }

    /// Output map of the factor realization.
    pub fn c_phi(&self) -> &CMatrix {
        &self.c_phi
    }

    /// Realization of `Phi`.
    pub fn phi(&self) -> &Realization {
        &self.phi
    }

    /// Realization of `Phi^{-1}`; its state matrix is the closed-loop
    /// matrix, so stability of this realization is exactly outerness.
    pub fn phi_inv(&self) -> &Realization {
        &self.phi_inv
    }

    /// `Gamma` of the underlying symbol (the input map of `phi`).
    pub fn gamma(&self) -> &CMatrix {
        self.phi.b()
    }
}

/// Defect tolerance accepted by [`outer_factor`] when re-verifying that `q`
/// is stabilizing.
const STABILIZING_RESIDUAL_TOL: f64 = 1e-8;

/// Builds the invertible outer factor from the stabilizing Riccati
/// solution. The preconditions (Riccati residual, positive innovation,
/// stable closed loop) are re-verified and yield [`Error::NotStabilizing`]
/// when violated.
pub fn outer_factor(sym: &SymbolR, q: &CMatrix) -> Result<SpectralFactor> {
    let n = sym.n();
    let m = sym.m();
    if q.nrows() != n || q.ncols() != n {
        return Err(Error::ShapeMismatch { context: "riccati solution" });
    }
    let residual = riccati_residual(sym, q);
    if residual > STABILIZING_RESIDUAL_TOL * (1.0 + q.norm()) {
        return Err(Error::NotStabilizing { defect: residual });
    }
    let innovation = symmetrize(&(sym.r0() - sym.gamma().adjoint() * q * sym.gamma()));
    let min_eig = min_hermitian_eig(&innovation);
    if min_eig <= 0.0 && m > 0 {
        return Err(Error::NotStabilizing { defect: min_eig });
    }
    let loop_gain = sym.c() - sym.gamma().adjoint() * q * sym.a();
    let solved_gain = hpd_solve(&innovation, &loop_gain)
        .ok_or(Error::NotStabilizing { defect: min_eig })?;
    let a_cross = sym.a() - sym.gamma() * &solved_gain;
    let rho_cross = spectral_radius(&a_cross);
    if n > 0 && rho_cross >= 1.0 - EPS_STAB {
        return Err(Error::NotStabilizing { defect: rho_cross });
    }

    let phi0 = psd_sqrt(&innovation, 1e-9 * (1.0 + innovation.norm()))?;
    let c_phi = &phi0 * &solved_gain;
    let phi = Realization::new_stable(
        sym.a().clone(),
        sym.gamma().clone(),
        c_phi.clone(),
        phi0.clone(),
    )?;
    let phi0_inv = hpd_solve(&phi0, &CMatrix::identity(m, m))
        .ok_or(Error::NotStabilizing { defect: min_eig })?;
    let phi_inv = Realization::new_stable(
        a_cross,
        sym.gamma() * &phi0_inv,
        -(&phi0_inv * &c_phi),
        phi0_inv,
    )?;
    Ok(SpectralFactor { q: q.clone(), phi0, c_phi, phi, phi_inv })
}
