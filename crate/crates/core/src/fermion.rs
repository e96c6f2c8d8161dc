//! Brute-force many-body fermion operators via the Jordan-Wigner
//! representation on the `2^n`-dimensional Fock space.
//!
//! Basis state `s` has mode `j` occupied iff bit `j` of `s` is set.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::scalars::Real64;

fn dim(n: usize) -> usize {
    1 << n
}

/// Applies `c_j^dagger` to a state vector.
pub fn create(n: usize, j: usize, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; dim(n)];
    for (s, &x) in v.iter().enumerate() {
        if x == 0.0 || s & (1 << j) != 0 {
            continue;
        }
        let below = (s & ((1 << j) - 1)).count_ones();
        let sign = if below % 2 == 1 { -1.0 } else { 1.0 };
        out[s | (1 << j)] += sign * x;
    }
    out
}

/// Applies `c_j` to a state vector.
pub fn annihilate(n: usize, j: usize, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; dim(n)];
    for (s, &x) in v.iter().enumerate() {
        if x == 0.0 || s & (1 << j) == 0 {
            continue;
        }
        let below = (s & ((1 << j) - 1)).count_ones();
        let sign = if below % 2 == 1 { -1.0 } else { 1.0 };
        out[s & !(1 << j)] += sign * x;
    }
    out
}

pub fn vacuum(n: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim(n)];
    v[0] = 1.0;
    v
}

/// `(c_{order[0]}^dagger)^{occ[0]} ... (c_{order[n-1]}^dagger)^{occ[n-1]} |0>`.
pub fn ket(n: usize, order: &[usize], occ: &[bool]) -> Vec<f64> {
    let mut v = vacuum(n);
    for k in (0..order.len()).rev() {
        if occ[k] {
            v = create(n, order[k], &v);
        }
    }
    v
}

/// The operator `sum_{s,s'} A(s, s') |s><s'|` where `|s>` creates modes in
/// the listed order and `<s'|` is its adjoint, so annihilators appear in
/// reverse order. `coeff` receives out- and in-occupations indexed by
/// position in `order`.
pub fn operator(n: usize, order: &[usize], coeff: impl Fn(&[bool], &[bool]) -> f64) -> Matrix<f64> {
    let d = dim(n);
    let occs: Vec<Vec<bool>> = (0..d).map(|s| (0..n).map(|k| s & (1 << (n - 1 - k)) != 0).collect()).collect();
    let kets: Vec<Vec<f64>> = occs.iter().map(|o| ket(n, order, o)).collect();
    let mut m = Matrix::zeros(&Real64, d, d);
    for (a, oa) in occs.iter().enumerate() {
        for (b, ob) in occs.iter().enumerate() {
            let c = coeff(oa, ob);
            if c == 0.0 {
                continue;
            }
            for r in 0..d {
                if kets[a][r] == 0.0 {
                    continue;
                }
                for col in 0..d {
                    let v = m.get(r, col) + c * kets[a][r] * kets[b][col];
                    m.set(r, col, v);
                }
            }
        }
    }
    m
}

/// `<alpha| prod_{i in beta} (sum_j U_ij c_j^dagger) |0>` with both mode
/// lists in increasing order; `U` is `n x n`.
pub fn single_particle_amplitude(u: &Matrix<f64>, alpha: &[usize], beta: &[usize]) -> f64 {
    let n = u.rows();
    let mut v = vacuum(n);
    for &i in beta.iter().rev() {
        let mut next = vec![0.0; dim(n)];
        for j in 0..n {
            let w = u.get(i, j);
            if w == 0.0 {
                continue;
            }
            for (x, y) in next.iter_mut().zip(create(n, j, &v)) {
                *x += w * y;
            }
        }
        v = next;
    }
    let mut occ = vec![false; n];
    for &a in alpha {
        occ[a] = true;
    }
    let order: Vec<usize> = (0..n).collect();
    let bra = ket(n, &order, &occ);
    bra.iter().zip(&v).map(|(a, b)| a * b).sum()
}
