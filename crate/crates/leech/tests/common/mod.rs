#![allow(dead_code)] // each integration-test binary uses a different subset

//! Shared test fixtures: seeded generators for solvable Leech instances.
//!
//! Instances are built as `K = G X0` with a planted contraction
//! `||X0|| <= 0.9` and a `G` whose constant term has full row rank, so
//! solvability is guaranteed by construction and the symbol
//! `R = G (I - X0 X0^*) G^*` is strictly positive on the circle whenever
//! `G` keeps full row rank there. The generator verifies minimality and
//! circle-rank numerically and walks the seed forward until both hold.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use leech::matrix::{spectral_radius, CMatrix};
use leech::realization::{minimality_report, product, LeechData, Realization};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn circle_point(k: usize, total: usize) -> Complex64 {
    let theta = 2.0 * std::f64::consts::PI * k as f64 / total as f64;
    Complex64::new(theta.cos(), theta.sin())
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_stable(rng: &mut ChaCha8Rng, n: usize, target_rho: f64) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let a = random_matrix(rng, n, n);
    let rho = spectral_radius(&a);
    a * c(target_rho / rho.max(1e-9), 0.0)
}

/// Random unitary matrix from the QR factorization of a random complex
/// matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let m = random_matrix(rng, n, n) + CMatrix::identity(n, n) * c(0.1, 0.0);
    let qr = m.qr();
    qr.q()
}

/// A generated problem together with the planted contraction.
pub struct Instance {
    pub data: LeechData,
    pub x0: Realization,
}

/// Generates a solvable instance with at most 6 joint states and at most 3
/// output rows. The planted `X0` has H-infinity norm at most `0.9`.
pub fn solvable_instance(seed: u64) -> Instance {
    let mut attempt = 0u64;
    loop {
        if let Some(instance) = try_instance(seed.wrapping_mul(1000).wrapping_add(attempt)) {
            return instance;
        }
        attempt += 1;
        assert!(attempt < 64, "no valid instance near seed {seed}");
    }
}

fn try_instance(seed: u64) -> Option<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(1..=3usize);
    let p = rng.random_range(m..=m + 1);
    let q = rng.random_range(1..=2usize);
    let n_g = rng.random_range(1..=3usize);
    let n_x = rng.random_range(1..=3usize);

    // G with a dominating full-row-rank constant term, kept near unit
    // scale so absolute tolerance contracts stay meaningful.
    let rho_g = rng.random_range(0.3..0.65);
    let a_g = random_stable(&mut rng, n_g, rho_g);
    let b_g = random_matrix(&mut rng, n_g, p) * c(0.4, 0.0);
    let c_g = random_matrix(&mut rng, m, n_g) * c(0.4, 0.0);
    let mut d1 = random_matrix(&mut rng, m, p) * c(0.15, 0.0);
    for i in 0..m {
        d1[(i, i)] += c(1.0, 0.0);
    }
    let g = Realization::new(a_g.clone(), b_g.clone(), c_g.clone(), d1.clone()).unwrap();

    // Planted contraction X0, scaled to a target norm below 0.9.
    let rho_x = rng.random_range(0.3..0.65);
    let a_x = random_stable(&mut rng, n_x, rho_x);
    let b_x = random_matrix(&mut rng, n_x, q);
    let c_x = random_matrix(&mut rng, p, n_x);
    let d_x = random_matrix(&mut rng, p, q);
    let raw = Realization::new(a_x.clone(), b_x.clone(), c_x.clone(), d_x.clone()).unwrap();
    let norm = raw.hinf_norm_grid(1024);
    let scale = c(rng.random_range(0.3..0.9) * 0.9 / norm.max(1e-9), 0.0);
    let c_x = c_x * scale;
    let d_x = d_x * scale;
    let x0 = Realization::new(a_x.clone(), b_x.clone(), c_x.clone(), d_x.clone()).unwrap();

    // Joint realization of [G K] with K = G X0 on the stacked state space.
    let k_check = product(&g, &x0).unwrap();
    let n = n_g + n_x;
    let mut a = CMatrix::zeros(n, n);
    a.view_mut((0, 0), (n_g, n_g)).copy_from(&a_g);
    a.view_mut((0, n_g), (n_g, n_x)).copy_from(&(&b_g * &c_x));
    a.view_mut((n_g, n_g), (n_x, n_x)).copy_from(&a_x);
    let mut b1 = CMatrix::zeros(n, p);
    b1.view_mut((0, 0), (n_g, p)).copy_from(&b_g);
    let mut b2 = CMatrix::zeros(n, q);
    b2.view_mut((0, 0), (n_g, q)).copy_from(&(&b_g * &d_x));
    b2.view_mut((n_g, 0), (n_x, q)).copy_from(&b_x);
    let mut c_joint = CMatrix::zeros(m, n);
    c_joint.view_mut((0, 0), (m, n_g)).copy_from(&c_g);
    c_joint.view_mut((0, n_g), (m, n_x)).copy_from(&(&d1 * &c_x));
    let d2 = &d1 * &d_x;
    let data = LeechData::new(a, b1, b2, c_joint, d1, d2).ok()?;

    // The joint realization must agree with the cascade realization of
    // G X0; require minimality and full row rank of G on the circle so the
    // symbol is strictly positive.
    for i in 0..8 {
        let z = circle_point(i, 8) * c(0.7, 0.0);
        let direct = k_check.eval(z).ok()?;
        let joint = data.k().eval(z).ok()?;
        assert!((direct - joint).norm() < 1e-11, "joint realization mismatch");
    }
    let report = minimality_report(&data, 1e-8);
    if !report.is_minimal() {
        return None;
    }
    let mut min_sigma = f64::INFINITY;
    for i in 0..128 {
        let z = circle_point(i, 128);
        let gv = data.g().eval(z).ok()?;
        min_sigma = min_sigma.min(gv.singular_values().min());
    }
    if min_sigma < 0.4 {
        return None;
    }
    Some(Instance { data, x0 })
}
