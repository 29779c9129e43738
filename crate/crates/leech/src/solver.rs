//! The constructive core: inner-function completion, left spectral factor
//! `F`, partial isometry, and the end-to-end [`solve`] pipeline.
//!
//! In the strictly positive case the two-sided inner function
//! `Theta(z) = D_Theta + z C_Phi (I - zA)^{-1} B_Theta` is fixed by the
//! embedding identities
//!
//! ```text
//! A* Q B_Theta + C_Phi* D_Theta = 0,
//! B_Theta* Q B_Theta + D_Theta* D_Theta = I_r,
//! ```
//!
//! i.e. the columns of `[B_Theta; D_Theta]` form a basis of the kernel of
//! `[A* Q  C_Phi*]`, orthonormal in the inner product weighted by
//! `diag(Q, I_r)`. The left factor is `F = Phi^* Theta`, realized on the
//! same `(A, C)`; the solution `X` and its companion `Psi` are blocks of
//! the partial isometry that intertwines the data kernels.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{
    hcat, hermitian_eigen, min_hermitian_eig, pinv, psd_sqrt, symmetrize, vcat, CMatrix,
};
use crate::realization::{
    ctrl_gramian, minimality_report, obs_gramian, LeechData, MinimalityReport, Realization,
};
use crate::spectral::{
    build_symbol_from_gramians, outer_factor, riccati_residual, riccati_stabilizing,
    SpectralFactor,
};

/// Riccati convergence tolerance used by [`solve`].
const RICCATI_TOL: f64 = 1e-12;

/// Relative eigenvalue threshold of the minimality diagnostic.
const MINIMALITY_TOL: f64 = 1e-10;

/// Relative threshold of the `R == 0` branch test.
const R_ZERO_TOL: f64 = 1e-10;

/// Inner-function data: `Theta(z) = D_Theta + z C_Phi (I - zA)^{-1} B_Theta`.
///
/// `B_Theta` is `n x r`, `D_Theta` is `r x r`; in the strictly positive
/// case `r` equals the symbol size `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaFactor {
    b_theta: CMatrix,
    d_theta: CMatrix,
}

impl ThetaFactor {
    pub fn new(b_theta: CMatrix, d_theta: CMatrix) -> Result<Self> {
        if d_theta.nrows() != d_theta.ncols() || b_theta.ncols() != d_theta.ncols() {
            return Err(Error::ShapeMismatch { context: "inner-function data" });
        }
        Ok(ThetaFactor { b_theta, d_theta })
    }

    pub fn b_theta(&self) -> &CMatrix {
        &self.b_theta
    }

    pub fn d_theta(&self) -> &CMatrix {
        &self.d_theta
    }

    /// Inner size `r`.
    pub fn r(&self) -> usize {
        self.d_theta.ncols()
    }

    /// The inner function as a realization on the factor's output map.
    pub fn realization(&self, a: &CMatrix, c_phi: &CMatrix) -> Result<Realization> {
        Realization::new_stable(a.clone(), self.b_theta.clone(), c_phi.clone(), self.d_theta.clone())
    }
}

/// Applies the weight `diag(Q, I_r)` to a stacked vector.
fn apply_weight(q: &CMatrix, v: &CMatrix) -> CMatrix {
    let n = q.nrows();
    let r = v.nrows() - n;
    let top = v.view((0, 0), (n, 1)).into_owned();
    let bottom = v.view((n, 0), (r, 1)).into_owned();
    vcat(&[&(q * top), &bottom])
}

/// Builds the inner-function completion `(B_Theta, D_Theta)` for the pair
/// `{C_Phi, A}` with observability Gramian `Q`.
///
/// The kernel of `[A* Q  C_Phi*]` is computed from the orthogonal
/// complement of the row space (via SVD), then orthonormalized in the
/// `diag(Q, I_r)` inner product. The basis is deterministic: kernel vectors
/// ordered as produced by the projector eigendecomposition, Gram-Schmidt in
/// the weighted inner product, and each column rotated so its largest entry
/// is real positive. Any such choice differs from any other by a right
/// unitary factor, which cancels in the extracted solution.
pub fn inner_theta(a: &CMatrix, c_phi: &CMatrix, q: &CMatrix) -> Result<ThetaFactor> {
    let n = a.nrows();
    let r = c_phi.nrows();
    if a.ncols() != n || c_phi.ncols() != n || q.nrows() != n || q.ncols() != n {
        return Err(Error::ShapeMismatch { context: "inner-function completion" });
    }
    if n == 0 {
        return ThetaFactor::new(CMatrix::zeros(0, r), CMatrix::identity(r, r));
    }

    // Kernel of the n x (n+r) matrix [A* Q  C_Phi*].
    let t = hcat(&[&(a.adjoint() * q), &c_phi.adjoint()]);
    let svd = t.adjoint().svd(true, false);
    let u = svd.u.expect("svd with u requested");
    let sigma_max = svd.singular_values.max();
    let threshold = sigma_max * (n + r) as f64 * f64::EPSILON;
    let rank = svd.singular_values.iter().filter(|&&s| s > threshold).count();
    let row_space = u.columns(0, rank).into_owned();
    let projector = CMatrix::identity(n + r, n + r) - &row_space * row_space.adjoint();
    let (values, vectors) = hermitian_eigen(&projector);
    let found = values.iter().filter(|&&l| l > 0.5).count();
    if found != r {
        return Err(Error::DegenerateKernel { expected: r, found });
    }
    let mut basis: Vec<CMatrix> = (0..r)
        .map(|j| {
            let col = vectors.column(n + r - found + j);
            CMatrix::from_fn(n + r, 1, |i, _| col[i])
        })
        .collect();

    // Gram-Schmidt in the diag(Q, I_r) inner product, two passes.
    let mut orthonormal: Vec<CMatrix> = Vec::with_capacity(r);
    for v in basis.drain(..) {
        let mut v = v;
        for _ in 0..2 {
            for u_prev in &orthonormal {
                let coeff = (apply_weight(q, &v).adjoint() * u_prev)[(0, 0)].conj();
                v -= u_prev * coeff;
            }
        }
        let norm_sq = (v.adjoint() * apply_weight(q, &v))[(0, 0)].re;
        if !norm_sq.is_finite() || norm_sq <= 1e-24 {
            return Err(Error::DegenerateKernel { expected: r, found: orthonormal.len() });
        }
        v /= Complex64::new(norm_sq.sqrt(), 0.0);
        orthonormal.push(v);
    }

    // Fix the column phases: largest-modulus entry real positive.
    for v in &mut orthonormal {
        let lead = v
            .iter()
            .copied()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap_or_else(|| Complex64::new(1.0, 0.0));
        if lead.norm() > 0.0 {
            *v *= lead.conj() / lead.norm();
        }
    }

    let stacked = hcat(&orthonormal.iter().collect::<Vec<_>>());
    let b_theta = stacked.view((0, 0), (n, r)).into_owned();
    let d_theta = stacked.view((n, 0), (r, r)).into_owned();
    ThetaFactor::new(b_theta, d_theta)
}

/// Realizes the left spectral factor `F = Phi^* Theta` on the data's
/// `(A, C)`: `F(z) = D3 + z C (I - zA)^{-1} B_Theta` with
/// `D3 = Phi(0)^* D_Theta + Gamma^* Q B_Theta`.
pub fn build_f(sf: &SpectralFactor, theta: &ThetaFactor, data: &LeechData) -> Result<Realization> {
    let d3 =
        sf.phi0().adjoint() * theta.d_theta() + sf.gamma().adjoint() * sf.q() * theta.b_theta();
    Realization::new_stable(data.a().clone(), theta.b_theta().clone(), data.c().clone(), d3)
}

/// Solvability verdict: the problem has a contractive solution exactly when
/// `P3 + P2 - P1` is positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub solvable: bool,
    /// Minimum Hermitian eigenvalue of `P3 + P2 - P1` (`+inf` for zero
    /// states).
    pub margin: f64,
}

/// Checks nonnegativity of `P3 + P2 - P1` at tolerance `tol`.
pub fn solvability_check(p1: &CMatrix, p2: &CMatrix, p3: &CMatrix, tol: f64) -> Verdict {
    let margin = min_hermitian_eig(&symmetrize(&(p3 + p2 - p1)));
    Verdict { solvable: margin >= -tol, margin }
}

/// The intertwining partial isometry of two function kernels sharing an
/// observability Gramian `Y`:
/// `U = (D_M* D_M + B_M* Y B_M)^+ (D_M* D_N + B_M* Y B_N)`.
///
/// When the kernels agree (`M(w) M(z)* = N(w) N(z)*` on the disc), `U`
/// is a partial isometry with `M(z) U = N(z)`.
///
/// Computed in factored form: with `S_M = [D_M; Y^{1/2} B_M]` and
/// `S_N = [D_N; Y^{1/2} B_N]`, the Penrose identity `(S* S)^+ S* = S^+`
/// gives `U = S_M^+ S_N`. This avoids squaring the conditioning of the
/// kernel data, which the explicit Gram form would.
pub fn partial_isometry(
    dm: &CMatrix,
    bm: &CMatrix,
    dn: &CMatrix,
    bn: &CMatrix,
    y: &CMatrix,
) -> CMatrix {
    // PSD square root of Y with negative rounding clamped, no error path.
    let (values, vectors) = hermitian_eigen(&symmetrize(y));
    let sqrt_diag = CMatrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            Complex64::new(values[i].max(0.0).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let y_sqrt = &vectors * sqrt_diag * vectors.adjoint();
    let sm = vcat(&[dm, &(&y_sqrt * bm)]);
    let sn = vcat(&[dn, &(&y_sqrt * bn)]);
    pinv(&sm, 0.0) * sn
}

/// Output of the isometry step: the partial isometry and the solution
/// realizations read off its blocks.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub u: CMatrix,
    pub x: Realization,
    pub psi: Realization,
}

/// Assembles the kernel data
/// `M(z) = [z Lambda(z)  G(z)]`, `N(z) = [Lambda(z)  K(z)  F(z)]` with
/// `Lambda(z) = C (I - zA)^{-1} Upsilon`, forms the partial isometry, and
/// partitions it into the realizations of `X` (first `q` input columns) and
/// `Psi` (last `r`).
pub fn extract_solution(
    data: &LeechData,
    f: &Realization,
    upsilon: &CMatrix,
    y: &CMatrix,
) -> Result<Extraction> {
    let (n, m, p, q) = (data.n(), data.m(), data.p(), data.q());
    let r = f.input_dim();
    if f.state_dim() != n || f.output_dim() != m {
        return Err(Error::ShapeMismatch { context: "left factor dimensions" });
    }
    if upsilon.nrows() != n || upsilon.ncols() != n || y.nrows() != n || y.ncols() != n {
        return Err(Error::ShapeMismatch { context: "isometry weights" });
    }
    let dm = hcat(&[&CMatrix::zeros(m, n), data.d1()]);
    let bm = hcat(&[upsilon, data.b1()]);
    let dn = hcat(&[&(data.c() * upsilon), data.d2(), f.d()]);
    let bn = hcat(&[&(data.a() * upsilon), data.b2(), f.b()]);
    let u = partial_isometry(&dm, &bm, &dn, &bn, y);

    let alpha = u.view((0, 0), (n, n)).into_owned();
    let beta1 = u.view((0, n), (n, q)).into_owned();
    let beta2 = u.view((0, n + q), (n, r)).into_owned();
    let gamma = u.view((n, 0), (p, n)).into_owned();
    let delta1 = u.view((n, n), (p, q)).into_owned();
    let delta2 = u.view((n, n + q), (p, r)).into_owned();

    // alpha is a block of a contraction, so its spectral radius cannot
    // exceed one; the constructor records the computed stability flag
    // without enforcing strict stability.
    let x = Realization::new(alpha.clone(), beta1, gamma.clone(), delta1)?;
    let psi = Realization::new(alpha, beta2, gamma, delta2)?;
    Ok(Extraction { u, x, psi })
}

/// Which branch of the construction produced the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `R` strictly positive on the circle: full Riccati/outer/inner chain.
    StrictlyPositive,
    /// `R` identically zero: `F` is empty (`r = 0`) and
    /// `Upsilon = (P2 - P1)^{1/2}`.
    RIdenticallyZero,
}

/// Residual scalars recorded by [`solve`].
#[derive(Debug, Clone, Copy)]
pub struct Diagnostics {
    /// `max` over the circle grid of `||G X - K||_F`.
    pub leech_residual: f64,
    /// `max` over the circle grid of `||G Psi - F||_F`.
    pub psi_residual: f64,
    /// `1 - ||[X Psi]||` on the circle grid; nonnegative up to rounding.
    pub contraction_margin: f64,
    /// Minimum eigenvalue of `P3 + P2 - P1`.
    pub solvability_margin: f64,
    /// Riccati residual of `Q` (zero on the `R == 0` branch).
    pub riccati_residual: f64,
    /// `||U U* U - U||_F`.
    pub partial_isometry_residual: f64,
    /// Spectral radius of the shared state matrix of `X` and `Psi`.
    pub state_spectral_radius: f64,
    /// Gramian-rank diagnostic of the input realization.
    pub minimality: MinimalityReport,
}

/// A solved Leech problem: the solution `X`, the companion `Psi` with
/// `G Psi = F`, the left factor `F`, the partial isometry, and every
/// intermediate matrix of the construction.
#[derive(Debug, Clone)]
pub struct LeechSolution {
    pub x: Realization,
    pub psi: Realization,
    pub f: Realization,
    pub u: CMatrix,
    pub upsilon: CMatrix,
    pub q: CMatrix,
    pub y: CMatrix,
    pub p1: CMatrix,
    pub p2: CMatrix,
    pub p3: CMatrix,
    pub branch: Branch,
    pub diagnostics: Diagnostics,
}

impl LeechSolution {
    /// The joint function `[X Psi]` on the shared state space; contractive
    /// in the H-infinity norm.
    pub fn joint(&self) -> Realization {
        Realization::new(
            self.x.a().clone(),
            hcat(&[self.x.b(), self.psi.b()]),
            self.x.c().clone(),
            hcat(&[self.x.d(), self.psi.d()]),
        )
        .expect("blocks share dimensions")
    }
}

/// Options for [`solve`].
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Solvability-margin tolerance.
    pub tol: f64,
    /// Circle-grid size for residual diagnostics.
    pub grid: usize,
    /// Riccati iteration budget.
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-9, grid: 4096, max_iter: 50_000 }
    }
}

/// Computes a stable rational contractive solution of `G X = K`.
///
/// Pipeline: build the symbol `R`; branch on `R == 0` versus strictly
/// positive (the semidefinite middle ground is rejected); build `F` and
/// `P3`; check nonnegativity of `P3 + P2 - P1`; extract `X` and `Psi` from
/// the partial isometry; record diagnostics.
///
/// Errors: [`Error::NotSolvable`] when the positivity condition fails
/// (including a symbol that is negative somewhere on the circle), and
/// [`Error::SemidefiniteUnsupported`] when `R` is nonnegative but singular
/// on the circle, which this implementation does not handle.
pub fn solve(data: &LeechData, opts: &SolveOptions) -> Result<LeechSolution> {
    let (n, m) = (data.n(), data.m());
    let minimality = minimality_report(data, MINIMALITY_TOL);
    let p1 = ctrl_gramian(data.a(), data.b1())?;
    let p2 = ctrl_gramian(data.a(), data.b2())?;
    let sym = build_symbol_from_gramians(data, &p1, &p2)?;

    let zero_scale = 1.0
        + data.d1().norm_squared()
        + data.d2().norm_squared()
        + data.c().norm() * (p1.norm() + p2.norm());
    let r_is_zero = sym.r0().norm() + sym.gamma().norm() < R_ZERO_TOL * zero_scale;

    let (branch, q, f, p3, riccati_res) = if r_is_zero {
        let f = Realization::new_stable(
            data.a().clone(),
            CMatrix::zeros(n, 0),
            data.c().clone(),
            CMatrix::zeros(m, 0),
        )?;
        (Branch::RIdenticallyZero, CMatrix::zeros(n, n), f, CMatrix::zeros(n, n), 0.0)
    } else {
        let q = match riccati_stabilizing(&sym, RICCATI_TOL, opts.max_iter) {
            Ok(q) => q,
            Err(Error::NoStabilizingSolution { .. }) => {
                // R is not strictly positive. Distinguish "negative
                // somewhere" (not solvable at all) from "nonnegative but
                // singular" (out of scope) on the circle grid.
                let circle_min = sym.circle_min_eig(opts.grid.max(256));
                let neg_tol = opts.tol * (1.0 + sym.r0().norm());
                return if circle_min < -neg_tol {
                    Err(Error::NotSolvable { margin: circle_min })
                } else {
                    Err(Error::SemidefiniteUnsupported { circle_min_eig: circle_min })
                };
            }
            Err(other) => return Err(other),
        };
        let sf = outer_factor(&sym, &q)?;
        let theta = inner_theta(data.a(), sf.c_phi(), &q)?;
        let f = build_f(&sf, &theta, data)?;
        // P3 is the controllability Gramian of {A, B_Theta}; for minimal
        // data it coincides with Q^{-1}.
        let p3 = ctrl_gramian(data.a(), theta.b_theta())?;
        let res = riccati_residual(&sym, &q);
        (Branch::StrictlyPositive, q, f, p3, res)
    };

    let verdict = solvability_check(&p1, &p2, &p3, opts.tol);
    if !verdict.solvable {
        return Err(Error::NotSolvable { margin: verdict.margin });
    }
    let upsilon = psd_sqrt(&symmetrize(&(&p3 + &p2 - &p1)), opts.tol)?;
    let y = obs_gramian(data.a(), data.c())?;
    let ext = extract_solution(data, &f, &upsilon, &y)?;

    let diagnostics = Diagnostics {
        leech_residual: grid_residual(&data.g(), &ext.x, &data.k(), opts.grid),
        psi_residual: grid_residual(&data.g(), &ext.psi, &f, opts.grid),
        contraction_margin: 1.0 - joint_norm(&ext, opts.grid),
        solvability_margin: verdict.margin,
        riccati_residual: riccati_res,
        partial_isometry_residual: (&ext.u * ext.u.adjoint() * &ext.u - &ext.u).norm(),
        state_spectral_radius: crate::matrix::spectral_radius(ext.x.a()),
        minimality,
    };
    Ok(LeechSolution {
        x: ext.x,
        psi: ext.psi,
        f,
        u: ext.u,
        upsilon,
        q,
        y,
        p1,
        p2,
        p3,
        branch,
        diagnostics,
    })
}

/// `max` over the circle grid of `||G(z) X(z) - T(z)||_F`.
fn grid_residual(g: &Realization, x: &Realization, target: &Realization, grid: usize) -> f64 {
    let mut max = 0.0f64;
    for k in 0..grid.max(16) {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / grid.max(16) as f64;
        let z = Complex64::new(theta.cos(), theta.sin());
        let value = match (g.eval(z), x.eval(z), target.eval(z)) {
            (Ok(gv), Ok(xv), Ok(tv)) => (gv * xv - tv).norm(),
            _ => f64::INFINITY,
        };
        max = max.max(value);
    }
    max
}

fn joint_norm(ext: &Extraction, grid: usize) -> f64 {
    let joint = Realization::new(
        ext.x.a().clone(),
        hcat(&[ext.x.b(), ext.psi.b()]),
        ext.x.c().clone(),
        hcat(&[ext.x.d(), ext.psi.d()]),
    )
    .expect("blocks share dimensions");
    joint.hinf_norm_grid(grid.max(16))
}
