//! Exact linear algebra over rational-like fields: elimination, kernels,
//! linear solves, fraction-free integer determinants, and the inertia of
//! exact Hermitian matrices via symmetric pivoting with 2x2 blocks.

use crate::scalar::{CRat, Rat};
use num::bigint::BigInt;
use num::traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Minimal exact-field bound for elimination routines.
pub trait Field:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Field for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
{
}

/// Dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut F {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, other.rows);
        let mut out: Mat<F> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k).clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.clone() * other.at(k, j).clone();
                    let cur = out.at(i, j).clone();
                    *out.at_mut(i, j) = cur + t;
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(row * self.cols + j, p * self.cols + j);
            }
            let inv = F::one() / self.at(row, col).clone();
            for j in col..self.cols {
                let v = self.at(row, j).clone() * inv.clone();
                *self.at_mut(row, j) = v;
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let f = self.at(r, col).clone();
                    for j in col..self.cols {
                        let v = self.at(r, j).clone() - f.clone() * self.at(row, j).clone();
                        *self.at_mut(r, j) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.at(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * x = b`; `None` if inconsistent. Returns one solution.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(r, self.cols).clone();
        }
        Some(x)
    }

    /// Exact inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Mat<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = F::one();
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(k, &c)| k != c) {
            return None;
        }
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                *out.at_mut(i, j) = aug.at(i, n + j).clone();
            }
        }
        Some(out)
    }
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(m.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Inertia (n_plus, n_minus, n_zero) of an exact Hermitian matrix.
///
/// Symmetric Gaussian elimination with 1x1 pivots on nonzero diagonal
/// entries and 2x2 pivots `[[0, a], [conj(a), 0]]` when the working
/// diagonal vanishes. Congruence transformations preserve inertia, so the
/// count of positive, negative and null pivots is the signature.
pub fn hermitian_inertia(m: &Mat<CRat>) -> (usize, usize, usize) {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    for i in 0..n {
        for j in 0..n {
            assert_eq!(
                m.at(i, j).clone(),
                m.at(j, i).conj(),
                "matrix is not Hermitian"
            );
        }
    }
    let mut act: Vec<usize> = (0..n).collect();
    let mut a = m.clone();
    let mut n_plus = 0usize;
    let mut n_minus = 0usize;
    let mut n_zero = 0usize;

    while !act.is_empty() {
        // 1x1 pivot on any nonzero diagonal entry.
        if let Some(pos) = act.iter().position(|&i| !a.at(i, i).is_zero()) {
            let p = act[pos];
            let d = a.at(p, p).clone();
            assert!(d.im.is_zero(), "Hermitian diagonal must be real");
            if d.re > Rat::zero() {
                n_plus += 1;
            } else {
                n_minus += 1;
            }
            act.remove(pos);
            let dinv = CRat::new(Rat::one(), Rat::zero()) / d;
            for &i in &act {
                let li = a.at(i, p).clone();
                if li.is_zero() {
                    continue;
                }
                for &j in &act {
                    let adj = li.clone() * dinv.clone() * a.at(p, j).clone();
                    let cur = a.at(i, j).clone();
                    *a.at_mut(i, j) = cur - adj;
                }
            }
            continue;
        }
        // All diagonal entries zero: find any nonzero off-diagonal pair.
        let mut found = None;
        'outer: for (pi, &i) in act.iter().enumerate() {
            for (pj, &j) in act.iter().enumerate().skip(pi + 1) {
                if !a.at(i, j).is_zero() {
                    found = Some((pi, pj));
                    break 'outer;
                }
            }
        }
        let Some((pi, pj)) = found else {
            // Remaining block is identically zero.
            n_zero += act.len();
            break;
        };
        let (i, j) = (act[pi], act[pj]);
        // Block [[0, b], [conj(b), 0]] has eigenvalues +|b|, -|b|.
        n_plus += 1;
        n_minus += 1;
        act.remove(pj);
        act.remove(pi);
        let b = a.at(i, j).clone();
        let binv = CRat::new(Rat::one(), Rat::zero()) / b.clone();
        let bbar_inv = CRat::new(Rat::one(), Rat::zero()) / b.conj();
        // Schur complement w.r.t. the 2x2 block: inverse is [[0, 1/conj(b)], [1/b, 0]].
        for &r in &act {
            let ri = a.at(r, i).clone();
            let rj = a.at(r, j).clone();
            if ri.is_zero() && rj.is_zero() {
                continue;
            }
            for &c in &act {
                let ic = a.at(i, c).clone();
                let jc = a.at(j, c).clone();
                let adj = ri.clone() * bbar_inv.clone() * jc + rj.clone() * binv.clone() * ic;
                let cur = a.at(r, c).clone();
                *a.at_mut(r, c) = cur - adj;
            }
        }
    }
    (n_plus, n_minus, n_zero)
}
