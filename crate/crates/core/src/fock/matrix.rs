use num_complex::Complex64;

use crate::error::{QoscError, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Anything that maps a coefficient vector of the truncated basis to another.
pub trait LinearMap {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64>;
}

/// Sparse square complex matrix in compressed-row form.
///
/// Entries are kept row-major with ascending columns, exact zeros removed, so
/// `==` compares matrices structurally and bitwise. A compressed-column copy
/// is kept for products with sparse vectors.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
    col_ptr: Vec<usize>,
    rows_by_col: Vec<usize>,
    vals_by_col: Vec<Complex64>,
}

impl PartialEq for OperatorMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.row_ptr == other.row_ptr
            && self.cols == other.cols
            && self.vals == other.vals
    }
}

impl OperatorMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Self {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "entry ({r},{c}) outside dimension {dim}");
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| e.2 != ZERO);
        Self::from_sorted(dim, merged)
    }

    fn from_sorted(dim: usize, entries: Vec<(usize, usize, Complex64)>) -> Self {
        let mut row_ptr = vec![0; dim + 1];
        let mut col_count = vec![0; dim + 1];
        for &(r, c, _) in &entries {
            row_ptr[r + 1] += 1;
            col_count[c + 1] += 1;
        }
        for k in 0..dim {
            row_ptr[k + 1] += row_ptr[k];
            col_count[k + 1] += col_count[k];
        }
        let col_ptr = col_count.clone();
        let mut fill = col_count;
        let mut rows_by_col = vec![0; entries.len()];
        let mut vals_by_col = vec![ZERO; entries.len()];
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            cols.push(c);
            vals.push(v);
            rows_by_col[fill[c]] = r;
            vals_by_col[fill[c]] = v;
            fill[c] += 1;
        }
        OperatorMatrix {
            dim,
            row_ptr,
            cols,
            vals,
            col_ptr,
            rows_by_col,
            vals_by_col,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_sorted(dim, Vec::new())
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![Complex64::new(1.0, 0.0); dim])
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != ZERO)
            .map(|(k, &v)| (k, k, v))
            .collect();
        Self::from_sorted(values.len(), entries)
    }

    pub fn real_diagonal(values: &[f64]) -> Self {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diagonal(&v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Row-major iteration over stored entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k]))
        })
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.col_ptr[c]..self.col_ptr[c + 1]).map(move |k| (self.rows_by_col[k], self.vals_by_col[k]))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let span = &self.cols[self.row_ptr[r]..self.row_ptr[r + 1]];
        match span.binary_search(&c) {
            Ok(k) => self.vals[self.row_ptr[r] + k],
            Err(_) => ZERO,
        }
    }

    pub fn diagonal_values(&self) -> Vec<Complex64> {
        (0..self.dim).map(|k| self.get(k, k)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(r, c, _)| r == c)
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> Self {
        let entries = self.entries().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.dim, entries)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let entries = self.entries().map(|(r, col, v)| (r, col, v * c)).collect();
        Self::from_triplets(self.dim, entries)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(QoscError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// `self + c * other`
    pub fn add_scaled(&self, other: &Self, c: Complex64) -> Result<Self> {
        self.check_dim(other)?;
        let mut entries: Vec<_> = self.entries().collect();
        entries.extend(other.entries().map(|(r, col, v)| (r, col, v * c)));
        Ok(Self::from_triplets(self.dim, entries))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut acc = vec![ZERO; n];
        let mut touched = vec![false; n];
        let mut cols: Vec<usize> = Vec::new();
        let mut entries = Vec::new();
        for r in 0..n {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !touched[c] {
                        touched[c] = true;
                        cols.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            cols.sort_unstable();
            for &c in &cols {
                if acc[c] != ZERO {
                    entries.push((r, c, acc[c]));
                }
                acc[c] = ZERO;
                touched[c] = false;
            }
            cols.clear();
        }
        Ok(Self::from_sorted(n, entries))
    }

    /// `self^k`, with `self^0` the identity.
    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.dim);
        for _ in 0..k {
            out = out.mul(self).expect("same dimension");
        }
        out
    }

    /// `self * other - other * self`
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }
}

impl LinearMap for OperatorMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim, "vector length does not match operator");
        let mut y = vec![ZERO; self.dim];
        for (c, &xc) in x.iter().enumerate() {
            if xc == ZERO {
                continue;
            }
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                y[self.rows_by_col[k]] += self.vals_by_col[k] * xc;
            }
        }
        y
    }
}

/// Ordered product `F_1 F_2 ... F_k` applied right to left without forming it.
pub struct OpProduct<'a> {
    factors: Vec<&'a OperatorMatrix>,
}

impl<'a> OpProduct<'a> {
    pub fn new(factors: Vec<&'a OperatorMatrix>) -> Self {
        assert!(!factors.is_empty(), "empty operator product");
        assert!(factors.iter().all(|f| f.dim == factors[0].dim));
        OpProduct { factors }
    }
}

impl LinearMap for OpProduct<'_> {
    fn dim(&self) -> usize {
        self.factors[0].dim
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut v = x.to_vec();
        for f in self.factors.iter().rev() {
            v = f.apply(&v);
        }
        v
    }
}

/// Coefficient vector over the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        StateVector { amplitudes }
    }

    pub fn zeros(dim: usize) -> Self {
        StateVector {
            amplitudes: vec![ZERO; dim],
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.amplitudes[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> StateVector {
        StateVector::new(self.amplitudes.iter().map(|a| a * c).collect())
    }

    pub fn apply(&self, op: &dyn LinearMap) -> StateVector {
        StateVector::new(op.apply(&self.amplitudes))
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
