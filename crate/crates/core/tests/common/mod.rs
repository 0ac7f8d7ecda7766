//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use faer::{c64, Mat, Side};
use std::f64::consts::PI;

/// -sum p_n ln p_n over the thermal distribution p_n = (1 - zeta) zeta^n, n <= 200.
pub fn thermal_sum_entropy(zeta: f64) -> f64 {
    (0..=200)
        .map(|n| (1.0 - zeta) * zeta.powi(n))
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// Symplectic eigenvalue lambda whose mode has thermal ratio zeta.
pub fn lambda_for_zeta(zeta: f64) -> f64 {
    let nu = 0.5 * (1.0 + zeta) / (1.0 - zeta);
    nu * nu
}

/// (1/pi) int_0^inf exp(-b k^2) cos(k x) dk
pub fn gaussian_cos(b: f64, x: f64) -> f64 {
    (-x * x / (4.0 * b)).exp() / (2.0 * (PI * b).sqrt())
}

/// (1/2pi) int_0^inf k exp(-b k^2) J0(k r) dk
pub fn gaussian_hankel(b: f64, r: f64) -> f64 {
    (-r * r / (4.0 * b)).exp() / (4.0 * PI * b)
}

/// (1/pi) int_0^inf k exp(-b k^2) sin(k x) dk
pub fn gaussian_sin_k(b: f64, x: f64) -> f64 {
    x * (-x * x / (4.0 * b)).exp() / (4.0 * b * (PI * b).sqrt())
}

/// Annihilation operators of `modes` fermions on the 2^modes Fock space
/// (Jordan-Wigner, mode 0 is the most significant bit).
fn annihilators(modes: usize) -> Vec<Mat<c64>> {
    let dim = 1usize << modes;
    (0..modes)
        .map(|m| {
            let bit = 1usize << (modes - 1 - m);
            Mat::from_fn(dim, dim, |row, col| {
                // <row| c_m |col>: col has mode m occupied, row = col without it
                if col & bit != 0 && row == col & !bit {
                    let higher = (col >> (modes - m)).count_ones();
                    c64::new(if higher % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
                } else {
                    c64::new(0.0, 0.0)
                }
            })
        })
        .collect()
}

fn dagger(m: &Mat<c64>) -> Mat<c64> {
    Mat::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

/// Entropy of the Gaussian state with <c_i^dag c_j> = C_ij, built as the
/// full many-body density matrix rho = exp(-H)/Z on 2^n states.
/// Returns (S, max |tr(rho c_i^dag c_j) - C_ij|).
pub fn brute_force_fermion_entropy(c: &Mat<c64>) -> (f64, f64) {
    let n = c.nrows();
    // single-particle h with <c^dag c> = (e^{h^T} + 1)^{-1}
    let ct = Mat::from_fn(n, n, |i, j| c[(j, i)]);
    let eig = ct.self_adjoint_eigen(Side::Lower).unwrap();
    let u = eig.U();
    let occ = eig.S().column_vector();
    let h = Mat::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| {
                let v = occ[k].re;
                u[(i, k)] * ((1.0 - v) / v).ln() * u[(j, k)].conj()
            })
            .sum::<c64>()
    });
    let ops = annihilators(n);
    let dim = 1usize << n;
    let mut big = Mat::<c64>::zeros(dim, dim);
    for i in 0..n {
        for j in 0..n {
            let term: Mat<c64> = dagger(&ops[i]) * &ops[j];
            for r in 0..dim {
                for q in 0..dim {
                    big[(r, q)] += h[(i, j)] * term[(r, q)];
                }
            }
        }
    }
    let e = big.self_adjoint_eigen(Side::Lower).unwrap();
    let w = e.U();
    let en = e.S().column_vector();
    let weights: Vec<f64> = (0..dim).map(|k| (-en[k].re).exp()).collect();
    let z: f64 = weights.iter().sum();
    let p: Vec<f64> = weights.iter().map(|v| v / z).collect();
    let rho = Mat::from_fn(dim, dim, |r, q| (0..dim).map(|k| w[(r, k)] * p[k] * w[(q, k)].conj()).sum::<c64>());
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let op: Mat<c64> = dagger(&ops[i]) * &ops[j];
            let prod: Mat<c64> = &rho * &op;
            let tr: c64 = (0..dim).map(|k| prod[(k, k)]).sum();
            worst = worst.max((tr - c[(i, j)]).norm());
        }
    }
    let s = p.iter().filter(|&&v| v > 0.0).map(|v| -v * v.ln()).sum();
    (s, worst)
}

/// Random Hermitian n x n matrix with spectrum `occ` (each in (0, 1)),
/// rotated by a unitary built from `angles` (Givens rotations with phases).
pub fn hermitian_with_spectrum(occ: &[f64], angles: &[f64]) -> Mat<c64> {
    let n = occ.len();
    let mut u = Mat::<c64>::identity(n, n);
    let mut k = 0;
    for p in 0..n {
        for q in p + 1..n {
            let (t, ph) = (angles[k % angles.len()], angles[(k + 1) % angles.len()]);
            k += 2;
            let g = Mat::from_fn(n, n, |i, j| {
                if (i, j) == (p, p) || (i, j) == (q, q) {
                    c64::new(t.cos(), 0.0)
                } else if (i, j) == (p, q) {
                    -c64::from_polar(t.sin(), ph)
                } else if (i, j) == (q, p) {
                    c64::from_polar(t.sin(), -ph)
                } else if i == j {
                    c64::new(1.0, 0.0)
                } else {
                    c64::new(0.0, 0.0)
                }
            });
            u = &u * &g;
        }
    }
    Mat::from_fn(n, n, |i, j| (0..n).map(|k| u[(i, k)] * occ[k] * u[(j, k)].conj()).sum::<c64>())
}

/// Symmetric positive definite B B^T + shift I, B filled row-major from `entries`.
pub fn spd(n: usize, entries: &[f64], shift: f64) -> Mat<f64> {
    let b = Mat::from_fn(n, n, |i, j| entries[(i * n + j) % entries.len()]);
    let bbt: Mat<f64> = &b * b.transpose();
    Mat::from_fn(n, n, |i, j| bbt[(i, j)] + if i == j { shift } else { 0.0 })
}
