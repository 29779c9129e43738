//! State-space realizations `Omega(z) = D + z C (I - zA)^{-1} B`, their
//! Gramians, and circle-grid norms.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{
    self, hcat, is_finite, min_hermitian_eig, psd_rank, spectral_radius, symmetrize, CMatrix,
    EPS_STAB,
};

/// State dimension above which the Stein solver switches from the exact
/// vectorized solve to fixed-point iteration.
const STEIN_DIRECT_LIMIT: usize = 60;

/// A realization `Omega(z) = D + z C (I - zA)^{-1} B`.
///
/// `A` is `n x n`, `B` is `n x p`, `C` is `m x n`, `D` is `m x p`; the
/// function maps `p` inputs to `m` outputs. `n = 0` represents the constant
/// function `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    a: CMatrix,
    b: CMatrix,
    c: CMatrix,
    d: CMatrix,
    stable: bool,
}

impl Realization {
    /// Builds a realization, validating dimensions and finiteness. The
    /// stability flag is computed, not required; use [`Realization::new_stable`]
    /// when the function must be stable.
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || b.nrows() != n || c.ncols() != n {
            return Err(Error::ShapeMismatch { context: "realization state dimensions" });
        }
        if d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return Err(Error::ShapeMismatch { context: "realization input/output dimensions" });
        }
        for (m, context) in [(&a, "A"), (&b, "B"), (&c, "C"), (&d, "D")] {
            if !is_finite(m) {
                return Err(Error::NonFinite { context });
            }
        }
        let stable = spectral_radius(&a) < 1.0 - EPS_STAB;
        Ok(Realization { a, b, c, d, stable })
    }

    /// Builds a realization of a stable function; errors when the state
    /// matrix has spectral radius at or above `1 - EPS_STAB`.
    pub fn new_stable(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self> {
        let r = Self::new(a, b, c, d)?;
        if !r.stable {
            return Err(Error::UnstableA { spectral_radius: spectral_radius(&r.a) });
        }
        Ok(r)
    }

    /// The constant function `D` (zero states).
    pub fn constant(d: CMatrix) -> Self {
        let (m, p) = (d.nrows(), d.ncols());
        Realization {
            a: CMatrix::zeros(0, 0),
            b: CMatrix::zeros(0, p),
            c: CMatrix::zeros(m, 0),
            d,
            stable: true,
        }
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn c(&self) -> &CMatrix {
        &self.c
    }

    pub fn d(&self) -> &CMatrix {
        &self.d
    }

    /// Number of states `n`.
    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    /// Number of output rows `m`.
    pub fn output_dim(&self) -> usize {
        self.c.nrows()
    }

    /// Number of input columns `p`.
    pub fn input_dim(&self) -> usize {
        self.b.ncols()
    }

    pub fn is_stable(&self) -> bool {
        self.stable
    }

    /// Evaluates `D + z C (I - zA)^{-1} B`.
    pub fn eval(&self, z: Complex64) -> Result<CMatrix> {
        let n = self.state_dim();
        if n == 0 {
            return Ok(self.d.clone());
        }
        let resolvent = CMatrix::identity(n, n) - &self.a * z;
        let x = resolvent
            .lu()
            .solve(&self.b)
            .ok_or(Error::SingularResolvent { z })?;
        Ok(&self.d + (&self.c * x) * z)
    }

    /// Largest singular value of the function over the uniform circle grid
    /// `exp(2 pi i k / grid_points)`. A lower bound for the H-infinity norm;
    /// exact for the rational functions handled here up to grid resolution.
    pub fn hinf_norm_grid(&self, grid_points: usize) -> f64 {
        assert!(grid_points >= 16, "hinf_norm_grid needs at least 16 points");
        if self.output_dim() == 0 || self.input_dim() == 0 {
            return 0.0;
        }
        let mut max = 0.0f64;
        for k in 0..grid_points {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / grid_points as f64;
            let z = Complex64::new(theta.cos(), theta.sin());
            let value = match self.eval(z) {
                Ok(v) => v.singular_values().max(),
                Err(_) => f64::INFINITY,
            };
            max = max.max(value);
        }
        max
    }
}

/// Pointwise product `(G X)(z) = G(z) X(z)` as a realization on the stacked
/// state space.
pub fn product(g: &Realization, x: &Realization) -> Result<Realization> {
    if g.input_dim() != x.output_dim() {
        return Err(Error::ShapeMismatch { context: "realization product" });
    }
    let (ng, nx) = (g.state_dim(), x.state_dim());
    let n = ng + nx;
    let mut a = CMatrix::zeros(n, n);
    a.view_mut((0, 0), (ng, ng)).copy_from(&g.a);
    a.view_mut((0, ng), (ng, nx)).copy_from(&(&g.b * &x.c));
    a.view_mut((ng, ng), (nx, nx)).copy_from(&x.a);
    let mut b = CMatrix::zeros(n, x.input_dim());
    b.view_mut((0, 0), (ng, x.input_dim())).copy_from(&(&g.b * &x.d));
    b.view_mut((ng, 0), (nx, x.input_dim())).copy_from(&x.b);
    let mut c = CMatrix::zeros(g.output_dim(), n);
    c.view_mut((0, 0), (g.output_dim(), ng)).copy_from(&g.c);
    c.view_mut((0, ng), (g.output_dim(), nx)).copy_from(&(&g.d * &x.c));
    let d = &g.d * &x.d;
    Realization::new(a, b, c, d)
}

/// Solves the Stein equation `P = A P A* + V` for Hermitian `V`.
///
/// Small systems go through the exact vectorized linear solve; larger ones
/// use the doubling recursion `P <- P + A^{2^k} P (A^{2^k})*`, which sums
/// the series with quadratically growing coverage. The result is
/// symmetrized.
pub fn solve_stein(a: &CMatrix, v: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    if a.ncols() != n || v.nrows() != n || v.ncols() != n {
        return Err(Error::ShapeMismatch { context: "stein equation" });
    }
    let rho = spectral_radius(a);
    if rho >= 1.0 - EPS_STAB {
        return Err(Error::UnstableA { spectral_radius: rho });
    }
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    if n <= STEIN_DIRECT_LIMIT {
        // vec(A P A*) = (conj(A) (x) A) vec(P) in column-major stacking.
        let system = DMatrix::<Complex64>::identity(n * n, n * n) - a.conjugate().kronecker(a);
        let rhs = CMatrix::from_column_slice(n * n, 1, v.as_slice());
        let sol = system
            .lu()
            .solve(&rhs)
            .ok_or(Error::UnstableA { spectral_radius: rho })?;
        let p = CMatrix::from_column_slice(n, n, sol.as_slice());
        Ok(symmetrize(&p))
    } else {
        // Accumulated doubling: after step k the sum covers powers < 2^k.
        let mut p = v.clone();
        let mut a_pow = a.clone();
        for _ in 0..200 {
            let update = &a_pow * &p * a_pow.adjoint();
            p += &update;
            if update.norm() <= 1e-16 * (1.0 + p.norm()) {
                break;
            }
            a_pow = &a_pow * &a_pow;
        }
        Ok(symmetrize(&p))
    }
}

/// Controllability Gramian: the Stein solution of `P = A P A* + B B*`.
pub fn ctrl_gramian(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if b.nrows() != a.nrows() {
        return Err(Error::ShapeMismatch { context: "ctrl_gramian" });
    }
    solve_stein(a, &(b * b.adjoint()))
}

/// Solves the Stein equation `Y = A* Y A + C* C` (observability Gramian).
pub fn obs_gramian(a: &CMatrix, c: &CMatrix) -> Result<CMatrix> {
    if a.nrows() != a.ncols() || c.ncols() != a.nrows() {
        return Err(Error::ShapeMismatch { context: "obs_gramian" });
    }
    ctrl_gramian(&a.adjoint(), &c.adjoint())
}

/// Joint realization `[G(z) K(z)] = [D1 D2] + z C (I - zA)^{-1} [B1 B2]`
/// of the Leech problem data. `A` must be stable.
#[derive(Debug, Clone, PartialEq)]
pub struct LeechData {
    a: CMatrix,
    b1: CMatrix,
    b2: CMatrix,
    c: CMatrix,
    d1: CMatrix,
    d2: CMatrix,
}

impl LeechData {
    pub fn new(
        a: CMatrix,
        b1: CMatrix,
        b2: CMatrix,
        c: CMatrix,
        d1: CMatrix,
        d2: CMatrix,
    ) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || b1.nrows() != n || b2.nrows() != n || c.ncols() != n {
            return Err(Error::ShapeMismatch { context: "joint realization state dimensions" });
        }
        let m = c.nrows();
        if d1.nrows() != m || d2.nrows() != m {
            return Err(Error::ShapeMismatch { context: "joint realization output dimensions" });
        }
        if d1.ncols() != b1.ncols() || d2.ncols() != b2.ncols() {
            return Err(Error::ShapeMismatch { context: "joint realization input dimensions" });
        }
        for (mat, context) in [
            (&a, "A"),
            (&b1, "B1"),
            (&b2, "B2"),
            (&c, "C"),
            (&d1, "D1"),
            (&d2, "D2"),
        ] {
            if !is_finite(mat) {
                return Err(Error::NonFinite { context });
            }
        }
        let rho = spectral_radius(&a);
        if rho >= 1.0 - EPS_STAB {
            return Err(Error::UnstableA { spectral_radius: rho });
        }
        Ok(LeechData { a, b1, b2, c, d1, d2 })
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b1(&self) -> &CMatrix {
        &self.b1
    }

    pub fn b2(&self) -> &CMatrix {
        &self.b2
    }

    pub fn c(&self) -> &CMatrix {
        &self.c
    }

    pub fn d1(&self) -> &CMatrix {
        &self.d1
    }

    pub fn d2(&self) -> &CMatrix {
        &self.d2
    }

    /// Number of states.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Number of output rows of `G` and `K`.
    pub fn m(&self) -> usize {
        self.c.nrows()
    }

    /// Number of columns of `G`.
    pub fn p(&self) -> usize {
        self.b1.ncols()
    }

    /// Number of columns of `K`.
    pub fn q(&self) -> usize {
        self.b2.ncols()
    }

    /// The function `G` as a standalone realization.
    pub fn g(&self) -> Realization {
        Realization::new(self.a.clone(), self.b1.clone(), self.c.clone(), self.d1.clone())
            .expect("validated on construction")
    }

    /// The function `K` as a standalone realization.
    pub fn k(&self) -> Realization {
        Realization::new(self.a.clone(), self.b2.clone(), self.c.clone(), self.d2.clone())
            .expect("validated on construction")
    }

    /// Built-in example problem: `G = (1, 1)/sqrt(2)` constant, `K(z) = z/2`.
    ///
    /// Small enough to solve by hand; the pipeline produces the solution
    /// `X(z) = z/(2 sqrt(2)) (1, 1)^T`. Also shipped by the CLI `example`
    /// subcommand.
    pub fn example() -> Self {
        let inv_sqrt2 = 1.0 / 2f64.sqrt();
        LeechData::new(
            CMatrix::zeros(1, 1),
            CMatrix::zeros(1, 2),
            CMatrix::from_row_slice(1, 1, &[Complex64::new(0.5, 0.0)]),
            CMatrix::identity(1, 1),
            CMatrix::from_row_slice(1, 2, &[
                Complex64::new(inv_sqrt2, 0.0),
                Complex64::new(inv_sqrt2, 0.0),
            ]),
            CMatrix::zeros(1, 1),
        )
        .expect("example data is valid")
    }
}

/// Observability/controllability verdict for a joint realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinimalityReport {
    pub observable: bool,
    pub controllable: bool,
    pub obs_rank: usize,
    pub ctrl_rank: usize,
}

impl MinimalityReport {
    pub fn is_minimal(&self) -> bool {
        self.observable && self.controllable
    }
}

/// Ranks the Gramians of the joint realization at the relative eigenvalue
/// threshold `tol`. Non-minimal data is reported, not rejected; downstream
/// formulas stay evaluable, though the theory assumes minimality.
pub fn minimality_report(data: &LeechData, tol: f64) -> MinimalityReport {
    let n = data.n();
    let y = obs_gramian(data.a(), data.c()).expect("stable by construction");
    let b12 = hcat(&[data.b1(), data.b2()]);
    let p = ctrl_gramian(data.a(), &b12).expect("stable by construction");
    let obs_rank = psd_rank(&y, tol);
    let ctrl_rank = psd_rank(&p, tol);
    MinimalityReport {
        observable: obs_rank == n,
        controllable: ctrl_rank == n,
        obs_rank,
        ctrl_rank,
    }
}

/// Frobenius residual `||P - A P A* - B B*||` of a Stein solution.
pub fn stein_residual(a: &CMatrix, b: &CMatrix, p: &CMatrix) -> f64 {
    (p - a * p * a.adjoint() - b * b.adjoint()).norm()
}

/// Verifies the Gramian contracts used throughout: Hermitian within 1e-12,
/// PSD within -1e-10, Stein residual below `1e-12 (1 + ||P||)`.
pub fn gramian_contract_defect(a: &CMatrix, b: &CMatrix, p: &CMatrix) -> f64 {
    let hermitian = matrix::hermitian_defect(p) / 1e-12;
    let psd = (-min_hermitian_eig(p).min(0.0)) / 1e-10;
    let stein = stein_residual(a, b, p) / (1e-12 * (1.0 + p.norm()));
    hermitian.max(psd).max(stein)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn random_stable(rng: &mut ChaCha8Rng, n: usize, target_rho: f64) -> CMatrix {
        let a = random_matrix(rng, n, n);
        let rho = spectral_radius(&a);
        a * c(target_rho / rho.max(1e-6), 0.0)
    }

    #[test]
    fn eval_of_example_g_is_constant() {
        let data = LeechData::example();
        let g = data.g();
        let value = g.eval(c(0.3, 0.0)).unwrap();
        let inv_sqrt2 = 1.0 / 2f64.sqrt();
        assert!((value[(0, 0)].re - inv_sqrt2).abs() < 1e-15);
        assert!((value[(0, 1)].re - inv_sqrt2).abs() < 1e-15);
    }

    #[test]
    fn eval_at_zero_is_d() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = Realization::new(
            random_stable(&mut rng, 3, 0.5),
            random_matrix(&mut rng, 3, 2),
            random_matrix(&mut rng, 2, 3),
            random_matrix(&mut rng, 2, 2),
        )
        .unwrap();
        let value = r.eval(c(0.0, 0.0)).unwrap();
        assert_eq!(value, *r.d());
    }

    #[test]
    fn eval_matches_power_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = Realization::new(
            random_stable(&mut rng, 4, 0.6),
            random_matrix(&mut rng, 4, 2),
            random_matrix(&mut rng, 3, 4),
            random_matrix(&mut rng, 3, 2),
        )
        .unwrap();
        for _ in 0..10 {
            let z = c(rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7));
            // Truncated series D + sum_k z^k C A^{k-1} B.
            let mut series = r.d().clone();
            let mut a_pow = CMatrix::identity(4, 4);
            let mut z_pow = z;
            for _ in 1..=200 {
                series += (r.c() * &a_pow * r.b()) * z_pow;
                a_pow = &a_pow * r.a();
                z_pow *= z;
            }
            assert!((r.eval(z).unwrap() - series).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_state_realization_evaluates_to_d() {
        let d = CMatrix::from_row_slice(1, 2, &[c(1.0, 0.0), c(2.0, 0.0)]);
        let r = Realization::constant(d.clone());
        assert_eq!(r.eval(c(0.7, 0.2)).unwrap(), d);
        assert!(r.is_stable());
        assert_eq!(ctrl_gramian(r.a(), r.b()).unwrap().nrows(), 0);
    }

    #[test]
    fn ctrl_gramian_small_cases() {
        let p = ctrl_gramian(
            &CMatrix::zeros(1, 1),
            &CMatrix::from_row_slice(1, 1, &[c(0.5, 0.0)]),
        )
        .unwrap();
        assert!((p[(0, 0)].re - 0.25).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b = random_matrix(&mut rng, 3, 2);
        let p = ctrl_gramian(&CMatrix::zeros(3, 3), &b).unwrap();
        assert!((p - &b * b.adjoint()).norm() < 1e-14);
    }

    #[test]
    fn ctrl_gramian_matches_series_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_stable(&mut rng, 4, 0.7);
        let b = random_matrix(&mut rng, 4, 2);
        let p = ctrl_gramian(&a, &b).unwrap();
        let mut series = CMatrix::zeros(4, 4);
        let mut a_pow = CMatrix::identity(4, 4);
        for _ in 0..=500 {
            series += &a_pow * &b * b.adjoint() * a_pow.adjoint();
            a_pow = &a_pow * &a;
        }
        assert!((p - series).norm() < 1e-10);
    }

    #[test]
    fn gramian_contracts_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let n = rng.random_range(1..6);
            let rho = rng.random_range(0.2..0.85);
            let cols = rng.random_range(1..4);
            let a = random_stable(&mut rng, n, rho);
            let b = random_matrix(&mut rng, n, cols);
            let p = ctrl_gramian(&a, &b).unwrap();
            assert!(gramian_contract_defect(&a, &b, &p) <= 1.0);
        }
    }

    #[test]
    fn obs_gramian_small_cases() {
        let y = obs_gramian(&CMatrix::zeros(1, 1), &CMatrix::identity(1, 1)).unwrap();
        assert!((y[(0, 0)].re - 1.0).abs() < 1e-15);
        let y = obs_gramian(&CMatrix::zeros(2, 2), &CMatrix::zeros(1, 2)).unwrap();
        assert_eq!(y.norm(), 0.0);
    }

    #[test]
    fn obs_gramian_matches_series_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let a = random_stable(&mut rng, 3, 0.6);
        let cm = random_matrix(&mut rng, 2, 3);
        let y = obs_gramian(&a, &cm).unwrap();
        let mut series = CMatrix::zeros(3, 3);
        let mut a_pow = CMatrix::identity(3, 3);
        for _ in 0..=500 {
            series += a_pow.adjoint() * cm.adjoint() * &cm * &a_pow;
            a_pow = &a_pow * &a;
        }
        assert!((y - series).norm() < 1e-10);
    }

    #[test]
    fn gramian_rejects_unstable_state_matrix() {
        let a = CMatrix::identity(2, 2);
        let b = CMatrix::zeros(2, 1);
        assert!(matches!(ctrl_gramian(&a, &b), Err(Error::UnstableA { .. })));
    }

    #[test]
    fn minimality_of_example_data() {
        let report = minimality_report(&LeechData::example(), 1e-10);
        assert!(report.observable);
        assert!(report.controllable);
        assert_eq!(report.obs_rank, 1);
        assert_eq!(report.ctrl_rank, 1);
    }

    #[test]
    fn minimality_detects_degenerate_data() {
        let data = LeechData::new(
            CMatrix::zeros(2, 2),
            CMatrix::zeros(2, 1),
            CMatrix::zeros(2, 1),
            CMatrix::from_row_slice(1, 2, &[c(1.0, 0.0), c(0.0, 0.0)]),
            CMatrix::zeros(1, 1),
            CMatrix::zeros(1, 1),
        )
        .unwrap();
        let report = minimality_report(&data, 1e-10);
        assert!(!report.observable);
        assert!(!report.controllable);
    }

    #[test]
    fn minimality_of_generic_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let data = LeechData::new(
            random_stable(&mut rng, 3, 0.6),
            random_matrix(&mut rng, 3, 2),
            random_matrix(&mut rng, 3, 1),
            random_matrix(&mut rng, 2, 3),
            random_matrix(&mut rng, 2, 2),
            random_matrix(&mut rng, 2, 1),
        )
        .unwrap();
        let report = minimality_report(&data, 1e-10);
        assert!(report.observable && report.controllable);
    }

    #[test]
    fn hinf_norm_of_constant_function() {
        let d = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        let r = Realization::constant(d);
        assert!((r.hinf_norm_grid(64) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hinf_norm_of_example_solution_is_one_half() {
        // X(z) = z/(2 sqrt(2)) (1, 1)^T.
        let s = 1.0 / (2.0 * 2f64.sqrt());
        let x = Realization::new(
            CMatrix::zeros(1, 1),
            CMatrix::identity(1, 1),
            CMatrix::from_row_slice(2, 1, &[c(s, 0.0), c(s, 0.0)]),
            CMatrix::zeros(2, 1),
        )
        .unwrap();
        assert!((x.hinf_norm_grid(128) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hinf_norm_grid_refinement_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let r = Realization::new(
            random_stable(&mut rng, 3, 0.6),
            random_matrix(&mut rng, 3, 1),
            random_matrix(&mut rng, 1, 3),
            random_matrix(&mut rng, 1, 1),
        )
        .unwrap();
        // At the default grid density the quadratic interpolation error of
        // the circle maximum is below the contract tolerance.
        let coarse = r.hinf_norm_grid(4096);
        let fine = r.hinf_norm_grid(4096 * 16);
        assert!((coarse - fine).abs() < 1e-6);
    }

    #[test]
    fn product_matches_pointwise_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let g = Realization::new(
            random_stable(&mut rng, 2, 0.5),
            random_matrix(&mut rng, 2, 3),
            random_matrix(&mut rng, 2, 2),
            random_matrix(&mut rng, 2, 3),
        )
        .unwrap();
        let x = Realization::new(
            random_stable(&mut rng, 3, 0.6),
            random_matrix(&mut rng, 3, 1),
            random_matrix(&mut rng, 3, 3),
            random_matrix(&mut rng, 3, 1),
        )
        .unwrap();
        let gx = product(&g, &x).unwrap();
        for _ in 0..8 {
            let z = c(rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9));
            let direct = g.eval(z).unwrap() * x.eval(z).unwrap();
            assert!((gx.eval(z).unwrap() - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn constructor_rejects_bad_shapes_and_nan() {
        assert!(matches!(
            Realization::new(
                CMatrix::zeros(2, 3),
                CMatrix::zeros(2, 1),
                CMatrix::zeros(1, 2),
                CMatrix::zeros(1, 1)
            ),
            Err(Error::ShapeMismatch { .. })
        ));
        let mut d = CMatrix::zeros(1, 1);
        d[(0, 0)] = c(f64::NAN, 0.0);
        assert!(matches!(
            Realization::new(CMatrix::zeros(0, 0), CMatrix::zeros(0, 1), CMatrix::zeros(1, 0), d),
            Err(Error::NonFinite { .. })
        ));
    }
}
