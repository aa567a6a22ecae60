//! Independent dense reference implementations used as test oracles.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_bigint::BigUint;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riemann_sampling::coherent::SpinState;
use riemann_sampling::numerics::TwiceSpin;

pub type C = Complex64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<C> {
    (0..n)
        .map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn normalize(v: &mut [C]) {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
}

pub fn random_state(rng: &mut ChaCha8Rng, two_s: u32) -> SpinState {
    let mut v = random_vec(rng, two_s as usize + 1);
    normalize(&mut v);
    SpinState::new(TwiceSpin::new(two_s).unwrap(), v).unwrap()
}

/// Uniform point in the disk of the given radius.
pub fn random_point(rng: &mut ChaCha8Rng, radius: f64) -> C {
    let r = radius * rng.random_range(0.0f64..1.0).sqrt();
    C::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn exact_binom(n: u32, k: u32) -> BigUint {
    let mut c = BigUint::from(1u32);
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

pub fn oracle_binom(n: u32, k: u32) -> f64 {
    exact_binom(n, k).to_string().parse().unwrap()
}

/// `<z | s, n - s>` straight from the definition.
pub fn oracle_component(two_s: u32, n: usize, z: C) -> C {
    let s = f64::from(two_s) / 2.0;
    oracle_binom(two_s, n as u32).sqrt() * z.conj().powu(n as u32) / (1.0 + z.norm_sqr()).powf(s)
}

pub fn dense_frame(two_s: u32, points: &[C]) -> DMatrix<C> {
    DMatrix::from_fn(points.len(), two_s as usize + 1, |k, n| {
        oracle_component(two_s, n, points[k])
    })
}

pub fn roots(n: usize) -> Vec<C> {
    (0..n)
        .map(|k| C::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
        .collect()
}

/// Unitary DFT matrix with entries `N^{-1/2} e^{2 pi i n m / N}`, `M` columns.
pub fn dense_rfm(n: usize, m: usize) -> DMatrix<C> {
    DMatrix::from_fn(n, m, |r, c| {
        C::from_polar(1.0, std::f64::consts::TAU * (r * c) as f64 / n as f64) / (n as f64).sqrt()
    })
}

/// Minimum-norm least-squares solution of `a x = b` for full row rank `a`,
/// through a Householder QR factorisation of `a^dagger`.
pub fn dense_min_norm(a: &DMatrix<C>, b: &[C]) -> DVector<C> {
    let qr = a.adjoint().qr();
    let r = qr.r();
    let y = r
        .adjoint()
        .solve_lower_triangular(&DVector::from_column_slice(b))
        .expect("full row rank");
    qr.q() * y
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigs(m: &DMatrix<C>) -> Vec<f64> {
    let mut e: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(|a, b| a.total_cmp(b));
    e
}

pub fn max_abs(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_f(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Dense Gram matrix `<z_k | z_l>` for single-spin coherent states.
pub fn dense_overlap(two_s: u32, points: &[C]) -> DMatrix<C> {
    let t = dense_frame(two_s, points);
    &t * t.adjoint()
}

/// Dense Gram matrix of band-limited coherent states, from the spin blocks.
pub fn dense_multi_overlap(j_max: u32, points: &[C]) -> DMatrix<C> {
    let mut acc = DMatrix::zeros(points.len(), points.len());
    for s in 0..=j_max {
        acc += dense_overlap(2 * s, points);
    }
    acc / C::new(f64::from(j_max) + 1.0, 0.0)
}

fn factorial(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Wigner small-d element `d^j_{m0}(theta)` from the explicit factorial sum.
pub fn oracle_wigner_d_m0(j: i64, m: i64, theta: f64) -> f64 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let pref = (factorial(j + m) * factorial(j - m) * factorial(j) * factorial(j)).sqrt();
    let mut acc = 0.0;
    for k in 0..=2 * j {
        if j - k < 0 || j - k - m < 0 || k + m < 0 {
            continue;
        }
        let sign = if (k + m) % 2 == 0 { 1.0 } else { -1.0 };
        let den = factorial(j - k) * factorial(k) * factorial(j - k - m) * factorial(k + m);
        acc += sign * pref / den * c.powi((2 * j - m - 2 * k) as i32) * s.powi((2 * k + m) as i32);
    }
    acc
}

/// `sum_m <theta, phi | j, m> <j, m | z>` term by term.
pub fn oracle_bargmann(j: u32, theta: f64, phi: f64, z: C) -> C {
    let ji = i64::from(j);
    (-ji..=ji)
        .map(|m| {
            let euler = C::from_polar(1.0, m as f64 * phi) * oracle_wigner_d_m0(ji, m, theta);
            euler * oracle_component(2 * j, (m + ji) as usize, z).conj()
        })
        .sum()
}
