//! Independent reference computations for the integration tests. Nothing
//! here calls into the closed-form or bit-sliced paths it is used to check.

#![allow(dead_code)]

use mqdimer_core::{CMatrix, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `exp(A)` by scaling and squaring a truncated Taylor series.
pub fn expm(a: &CMatrix) -> CMatrix {
    let norm: f64 = a.as_slice().iter().map(|z| z.norm()).sum();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let small = a.scale(c(scale, 0.0));
    let n = a.dim();
    let mut term = CMatrix::identity(n);
    let mut sum = CMatrix::identity(n);
    for k in 1..=24 {
        term = term.matmul(&small).scale(c(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

/// `exp(−i·H·τ)` for the unit-coupling dimer Hamiltonian built from scratch.
pub fn dense_propagator(tau: f64) -> CMatrix {
    let mut h = CMatrix::zeros(4);
    h[(0, 3)] = c(-0.5, 0.0);
    h[(3, 0)] = c(-0.5, 0.0);
    expm(&h.scale(c(0.0, -tau)))
}

/// Six-term expansion of the evolved purified 4-qubit state, indexed by the
/// kets |q1 q2 q3 q4⟩ read as binary numbers.
pub fn six_term_state(theta: f64, tau: f64) -> Vec<C64> {
    let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let (ct, st) = ((tau / 2.0).cos(), (tau / 2.0).sin());
    let mut psi = vec![c(0.0, 0.0); 16];
    psi[0b0000] = c(ct * ch * ch, 0.0);
    psi[0b0011] = c(0.5 * theta.sin(), 0.0);
    psi[0b0110] = c(0.0, st * ch * ch);
    psi[0b1001] = c(0.0, st * sh * sh);
    psi[0b1100] = c(0.5 * theta.sin(), 0.0);
    psi[0b1111] = c(ct * sh * sh, 0.0);
    psi
}

/// Reduced matrix on `keep` (1-based, qubit 1 = leftmost ket label) of a
/// pure state, by decoding every pair of basis labels digit by digit.
pub fn brute_reduced(psi: &[C64], n: usize, keep: &[usize]) -> CMatrix {
    let digits = |idx: usize| -> Vec<usize> { (0..n).map(|j| (idx >> (n - 1 - j)) & 1).collect() };
    let k = keep.len();
    let mut out = CMatrix::zeros(1 << k);
    for r in 0..psi.len() {
        for col in 0..psi.len() {
            let (dr, dc) = (digits(r), digits(col));
            let traced_equal = (1..=n)
                .filter(|q| !keep.contains(q))
                .all(|q| dr[q - 1] == dc[q - 1]);
            if !traced_equal {
                continue;
            }
            let ri = keep.iter().fold(0, |a, &q| (a << 1) | dr[q - 1]);
            let ci = keep.iter().fold(0, |a, &q| (a << 1) | dc[q - 1]);
            out[(ri, ci)] += psi[r] * psi[col].conj();
        }
    }
    out
}

/// Evenly spaced grid on [a, b] with both ends.
pub fn grid(a: f64, b: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
        .collect()
}
