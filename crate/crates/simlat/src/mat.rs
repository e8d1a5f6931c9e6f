//! Exact integer and rational matrices.
//!
//! Everything here is sized for lattice work in dimension at most a few
//! dozen: dense storage, arbitrary-precision entries, no floating point
//! anywhere. `ZMat` holds integers and provides the lattice plumbing
//! (Hermite normal form, kernels, fraction-free determinants); `QMat`
//! holds rationals and provides Gram-matrix arithmetic (inverses,
//! definiteness tests, LLL reduction of a Gram matrix).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n/d`.
pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest integer to `x`, ties rounded away from zero.
pub fn round_to_int(x: &BigRational) -> BigInt {
    x.round().to_integer()
}

/// Dense matrix over the integers, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl ZMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ZMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Fraction-free Bareiss determinant. Panics if the matrix is not square.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[idx(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[idx(i, k)].is_zero());
                match swap {
                    None => return BigInt::zero(),
                    Some(i) => {
                        for j in 0..n {
                            a.swap(idx(k, j), idx(i, j));
                        }
                        sign = -sign;
                    }
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[idx(k, k)] * &a[idx(i, j)] - &a[idx(i, k)] * &a[idx(k, j)];
                    a[idx(i, j)] = num
                        .checked_div(&prev)
                        .expect("Bareiss division must be exact");
                }
                a[idx(i, k)] = BigInt::zero();
            }
            prev = a[idx(k, k)].clone();
        }
        sign * a[idx(n - 1, n - 1)].clone()
    }

    pub fn to_rational(&self) -> QMat {
        let mut m = QMat::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, BigRational::from_integer(self.at(i, j).clone()));
            }
        }
        m
    }

    /// Row Hermite normal form together with a unimodular `U` such that
    /// `U * self == hnf`. Zero rows sink to the bottom; pivots are positive
    /// and entries above each pivot are reduced to `[0, pivot)`.
    pub fn row_hnf_with_transform(&self) -> (Self, Self) {
        let mut h = self.clone();
        let mut u = Self::identity(self.rows);
        let (rows, cols) = (self.rows, self.cols);
        let mut pivot_row = 0usize;
        for col in 0..cols {
            if pivot_row == rows {
                break;
            }
            // Clear column `col` below `pivot_row` with unimodular row pairs.
            loop {
                let mut nonzero: Vec<usize> = (pivot_row..rows)
                    .filter(|&i| !h.at(i, col).is_zero())
                    .collect();
                if nonzero.is_empty() {
                    break;
                }
                if nonzero.len() == 1 {
                    let i = nonzero[0];
                    if i != pivot_row {
                        h.swap_rows(i, pivot_row);
                        u.swap_rows(i, pivot_row);
                    }
                    break;
                }
                // Combine the two smallest-magnitude entries.
                nonzero.sort_by_key(|&i| h.at(i, col).magnitude().clone());
                let (i, j) = (nonzero[0], nonzero[1]);
                let a = h.at(i, col).clone();
                let b = h.at(j, col).clone();
                let q = rounded_div(&b, &a);
                h.row_sub_mul(j, i, &q);
                u.row_sub_mul(j, i, &q);
            }
            let has_pivot = pivot_row < rows && !h.at(pivot_row, col).is_zero();
            if !has_pivot {
                continue;
            }
            if h.at(pivot_row, col).is_negative() {
                h.negate_row(pivot_row);
                u.negate_row(pivot_row);
            }
            let pivot = h.at(pivot_row, col).clone();
            for i in 0..pivot_row {
                let q = h.at(i, col).div_floor(&pivot);
                if !q.is_zero() {
                    h.row_sub_mul(i, pivot_row, &q);
                    u.row_sub_mul(i, pivot_row, &q);
                }
            }
            pivot_row += 1;
        }
        (h, u)
    }

    pub fn row_hnf(&self) -> Self {
        self.row_hnf_with_transform().0
    }

    /// Column Hermite normal form: a lower-triangular matrix `H` with
    /// positive diagonal whose columns span the same column lattice.
    pub fn col_hnf(&self) -> Self {
        self.transpose().row_hnf().transpose()
    }

    /// Basis of the left kernel `{ u : u * self = 0 }`, one row per basis
    /// vector. The result spans the full integer kernel (it is saturated).
    pub fn left_kernel(&self) -> Self {
        let (h, u) = self.row_hnf_with_transform();
        let mut rows = Vec::new();
        for i in 0..h.rows {
            if h.row(i).iter().all(|v| v.is_zero()) {
                rows.push(u.row(i).to_vec());
            }
        }
        Self::from_big_rows(rows)
    }

    /// Drops all-zero rows.
    pub fn nonzero_rows(&self) -> Self {
        let rows: Vec<Vec<BigInt>> = (0..self.rows)
            .filter(|&i| self.row(i).iter().any(|v| !v.is_zero()))
            .map(|i| self.row(i).to_vec())
            .collect();
        Self::from_big_rows(rows)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.at(i, c).clone();
            self.set(i, c, v);
        }
    }

    /// `row_i -= q * row_j`.
    fn row_sub_mul(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = self.at(i, c) - q * self.at(j, c);
            self.set(i, c, v);
        }
    }
}

/// Quotient of `b` by `a` rounded so that `b - q a` has magnitude at most
/// `|a|/2`.
fn rounded_div(b: &BigInt, a: &BigInt) -> BigInt {
    let (q, r) = b.div_mod_floor(a);
    // Floor division leaves a remainder with the sign of `a`; stepping the
    // quotient once more flips it to the other half-open interval.
    if r.magnitude() * 2u32 > a.magnitude().clone() {
        q + 1
    } else {
        q
    }
}

/// Dense matrix over the rationals, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        ZMat::from_rows(rows).to_rational()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = &*v * s;
        }
        out
    }

    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut det = BigRational::one();
        for k in 0..n {
            if a[idx(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[idx(i, k)].is_zero());
                match swap {
                    None => return BigRational::zero(),
                    Some(i) => {
                        for j in 0..n {
                            a.swap(idx(k, j), idx(i, j));
                        }
                        det = -det;
                    }
                }
            }
            let pivot = a[idx(k, k)].clone();
            det *= &pivot;
            for i in k + 1..n {
                if a[idx(i, k)].is_zero() {
                    continue;
                }
                let f = &a[idx(i, k)] / &pivot;
                for j in k..n {
                    let v = &a[idx(i, j)] - &f * &a[idx(k, j)];
                    a[idx(i, j)] = v;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let pivot_row = (k..n).find(|&i| !a.at(i, k).is_zero())?;
            if pivot_row != k {
                for j in 0..n {
                    let tmp = a.at(k, j).clone();
                    a.set(k, j, a.at(pivot_row, j).clone());
                    a.set(pivot_row, j, tmp);
                    let tmp = inv.at(k, j).clone();
                    inv.set(k, j, inv.at(pivot_row, j).clone());
                    inv.set(pivot_row, j, tmp);
                }
            }
            let p = a.at(k, k).clone();
            for j in 0..n {
                let v = a.at(k, j) / &p;
                a.set(k, j, v);
                let v = inv.at(k, j) / &p;
                inv.set(k, j, v);
            }
            for i in 0..n {
                if i == k || a.at(i, k).is_zero() {
                    continue;
                }
                let f = a.at(i, k).clone();
                for j in 0..n {
                    let v = a.at(i, j) - &f * a.at(k, j);
                    a.set(i, j, v);
                    let v = inv.at(i, j) - &f * inv.at(k, j);
                    inv.set(i, j, v);
                }
            }
        }
        Some(inv)
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Sylvester criterion via elimination: all pivots positive.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let n = self.rows;
        let mut a = self.clone();
        for k in 0..n {
            if !a.at(k, k).is_positive() {
                return false;
            }
            let p = a.at(k, k).clone();
            for i in k + 1..n {
                if a.at(i, k).is_zero() {
                    continue;
                }
                let f = a.at(i, k) / &p;
                for j in k..n {
                    let v = a.at(i, j) - &f * a.at(k, j);
                    a.set(i, j, v);
                }
            }
        }
        true
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    pub fn to_integer(&self) -> Option<ZMat> {
        if !self.is_integral() {
            return None;
        }
        let mut m = ZMat::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).to_integer());
            }
        }
        Some(m)
    }
}

/// LLL-reduces a positive definite Gram matrix (`delta = 3/4`), returning
/// the reduced Gram matrix together with the unimodular transform `U`
/// satisfying `reduced = U * gram * U^T`. Operates on the Gram matrix
/// alone, so it applies to lattices given without an ambient embedding.
pub fn lll_gram(gram: &QMat) -> (QMat, ZMat) {
    let n = gram.rows();
    assert!(gram.is_symmetric(), "LLL needs a symmetric Gram matrix");
    let mut g = gram.clone();
    let mut u = ZMat::identity(n);
    if n <= 1 {
        return (g, u);
    }
    let delta = rat_frac(3, 4);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut bstar = vec![BigRational::zero(); n];

    // Gram-Schmidt data for row k from the current Gram matrix.
    let gso_row = |g: &QMat, mu: &mut Vec<Vec<BigRational>>, bstar: &mut Vec<BigRational>, k: usize| {
        for j in 0..k {
            let mut v = g.at(k, j).clone();
            for i in 0..j {
                v -= &mu[k][i] * &mu[j][i] * &bstar[i];
            }
            mu[k][j] = v / &bstar[j];
        }
        let mut v = g.at(k, k).clone();
        for j in 0..k {
            v -= &mu[k][j] * &mu[k][j] * &bstar[j];
        }
        assert!(v.is_positive(), "LLL needs a positive definite Gram matrix");
        bstar[k] = v;
    };
    for k in 0..n {
        gso_row(&g, &mut mu, &mut bstar, k);
    }

    let mut k = 1usize;
    while k < n {
        for j in (0..k).rev() {
            let q = round_to_int(&mu[k][j]);
            if q.is_zero() {
                continue;
            }
            let qr = BigRational::from_integer(q.clone());
            // Row and column update g <- E g E^T for b_k -= q b_j.
            for c in 0..n {
                let v = g.at(k, c) - &qr * g.at(j, c);
                g.set(k, c, v);
            }
            for r in 0..n {
                let v = g.at(r, k) - &qr * g.at(r, j);
                g.set(r, k, v);
            }
            u.row_sub_mul(k, j, &q);
            for i in 0..j {
                let v = &mu[k][i] - &qr * &mu[j][i];
                mu[k][i] = v;
            }
            mu[k][j] = &mu[k][j] - &qr;
        }
        let lhs = bstar[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            for c in 0..n {
                let tmp = g.at(k, c).clone();
                g.set(k, c, g.at(k - 1, c).clone());
                g.set(k - 1, c, tmp);
            }
            for r in 0..n {
                let tmp = g.at(r, k).clone();
                g.set(r, k, g.at(r, k - 1).clone());
                g.set(r, k - 1, tmp);
            }
            u.swap_rows(k, k - 1);
            for row in (k - 1)..n {
                gso_row(&g, &mut mu, &mut bstar, row);
            }
            k = k.max(2) - 1;
        }
    }
    (g, u)
}
