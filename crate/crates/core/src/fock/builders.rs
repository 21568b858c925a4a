//! Matrix representation of `a_i`, `a†_i`, `N_i`, `Q_i` on the truncated basis.
//!
//! Modes are 1-based. The amplitude of `a_i` on `|..., n_i, ...>` is
//! `sqrt(q^(n_{i+1} + ... + n_n) [n_i])`.

use num_complex::Complex64;

use super::matrix::{OperatorMatrix, StateVector};
use super::space::{FockSpace, MultiIndex};
use crate::error::Result;
use crate::qcore::{q_factorial, QParam};

fn amplitude(qp: &QParam, tail: usize, n: usize) -> f64 {
    (qp.pow(tail) * qp.int(n)).sqrt()
}

/// `n_from + ... + n_n` of basis vector `index`.
fn tail_from(space: &FockSpace, index: usize, from: usize) -> usize {
    (from..=space.n_modes())
        .map(|k| space.occupation(index, k))
        .sum()
}

fn tail_after(space: &FockSpace, index: usize, mode: usize) -> usize {
    tail_from(space, index, mode + 1)
}

pub fn build_annihilator(space: &FockSpace, qp: &QParam, mode: usize) -> Result<OperatorMatrix> {
    space.check_mode(mode)?;
    let stride = space.stride(mode);
    let entries = (0..space.dim())
        .filter_map(|col| {
            let n = space.occupation(col, mode);
            (n >= 1).then(|| {
                let v = amplitude(qp, tail_after(space, col, mode), n);
                (col - stride, col, Complex64::new(v, 0.0))
            })
        })
        .collect();
    Ok(OperatorMatrix::from_triplets(space.dim(), entries))
}

/// Raising transitions past the cutoff are dropped.
pub fn build_creator(space: &FockSpace, qp: &QParam, mode: usize) -> Result<OperatorMatrix> {
    space.check_mode(mode)?;
    let stride = space.stride(mode);
    let entries = (0..space.dim())
        .filter_map(|col| {
            let n = space.occupation(col, mode);
            (n < space.cutoff()).then(|| {
                let v = amplitude(qp, tail_after(space, col, mode), n + 1);
                (col + stride, col, Complex64::new(v, 0.0))
            })
        })
        .collect();
    Ok(OperatorMatrix::from_triplets(space.dim(), entries))
}

pub fn build_number(space: &FockSpace, mode: usize) -> Result<OperatorMatrix> {
    space.check_mode(mode)?;
    let diag: Vec<f64> = (0..space.dim())
        .map(|k| space.occupation(k, mode) as f64)
        .collect();
    Ok(OperatorMatrix::real_diagonal(&diag))
}

/// `Q_i = q^{N_i}`
pub fn build_scale(space: &FockSpace, qp: &QParam, mode: usize) -> Result<OperatorMatrix> {
    space.check_mode(mode)?;
    let diag: Vec<f64> = (0..space.dim())
        .map(|k| qp.pow(space.occupation(k, mode)))
        .collect();
    Ok(OperatorMatrix::real_diagonal(&diag))
}

/// `Q_i Q_{i+1} ... Q_n`; `mode = n + 1` gives the identity.
pub fn build_scale_product(space: &FockSpace, qp: &QParam, mode: usize) -> Result<OperatorMatrix> {
    if mode != space.n_modes() + 1 {
        space.check_mode(mode)?;
    }
    let diag: Vec<f64> = (0..space.dim())
        .map(|k| qp.pow(tail_from(space, k, mode)))
        .collect();
    Ok(OperatorMatrix::real_diagonal(&diag))
}

/// `(a†_n)^{n_n} ... (a†_1)^{n_1} |0> / sqrt([n_1]! ... [n_n]!)`, with
/// `a†_1` applied first.
pub fn build_fock_state(nu: &MultiIndex, space: &FockSpace, qp: &QParam) -> Result<StateVector> {
    space.encode(nu)?;
    let mut state = StateVector::basis(space.dim(), 0);
    let mut norm = 1.0;
    for mode in 1..=space.n_modes() {
        let n = nu.get(mode);
        if n == 0 {
            continue;
        }
        let creator = build_creator(space, qp, mode)?;
        for _ in 0..n {
            state = state.apply(&creator);
        }
        norm *= q_factorial(n, qp);
    }
    Ok(state.scale(Complex64::new(1.0 / norm.sqrt(), 0.0)))
}
