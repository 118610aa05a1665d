//! Dense integer matrices with exact normal-form algorithms.
//!
//! All arithmetic is checked; an overflow panics rather than wrapping.  The
//! matrices handled by this crate are small (at most a few dozen rows), so the
//! quadratic normal-form algorithms below are more than fast enough.  The
//! Smith form runs on arbitrary-precision integers internally, because even
//! tiny inputs can blow up intermediate entries past any fixed width.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Euclid, One, Signed, ToPrimitive, Zero};

/// A dense matrix over the integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

fn mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b)
        .expect("integer overflow in matrix arithmetic")
}

fn add(a: i64, b: i64) -> i64 {
    a.checked_add(b)
        .expect("integer overflow in matrix arithmetic")
}

impl IntMatrix {
    /// The zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// The identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from explicit rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.set(i, j, add(out.get(i, j), mul(a, other.get(k, j))));
                }
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols, "shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0i64, |acc, j| add(acc, mul(self.get(i, j), x[j]))))
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[i] += c * row[k]`.
    pub fn row_axpy(&mut self, i: usize, k: usize, c: i64) {
        assert_ne!(i, k);
        for j in 0..self.cols {
            let v = add(self.get(i, j), mul(c, self.get(k, j)));
            self.set(i, j, v);
        }
    }

    /// `col[j] += c * col[k]`.
    pub fn col_axpy(&mut self, j: usize, k: usize, c: i64) {
        assert_ne!(j, k);
        for i in 0..self.rows {
            let v = add(self.get(i, j), mul(c, self.get(i, k)));
            self.set(i, j, v);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self.set(i, j, -self.get(i, j));
        }
    }

    /// Keeps only the first `n` rows.
    pub fn truncate_rows(&mut self, n: usize) {
        assert!(n <= self.rows);
        self.data.truncate(n * self.cols);
        self.rows = n;
    }

    /// Stacks `other` below `self`; the column counts must agree.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "shape mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Determinant of a square matrix by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[idx(k, k)] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[idx(i, k)] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    a.swap(idx(k, j), idx(p, j));
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[idx(k, k)]
                        .checked_mul(a[idx(i, j)])
                        .and_then(|x| {
                            a[idx(i, k)]
                                .checked_mul(a[idx(k, j)])
                                .and_then(|y| x.checked_sub(y))
                        })
                        .expect("integer overflow in determinant");
                    a[idx(i, j)] = num / prev;
                }
                a[idx(i, k)] = 0;
            }
            prev = a[idx(k, k)];
        }
        let d = sign * a[idx(n - 1, n - 1)];
        i64::try_from(d).expect("determinant exceeds i64")
    }

    /// A basis of the integer kernel `{x : self * x = 0}`, as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<i64>> {
        let snf = smith_normal_form(self);
        (snf.rank..self.cols)
            .map(|j| {
                (0..self.cols)
                    .map(|i| {
                        snf.v
                            .get(i, j)
                            .to_i64()
                            .expect("kernel vector fits 64 bits")
                    })
                    .collect()
            })
            .collect()
    }

    /// An integer solution `x` of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(b.len(), self.rows, "shape mismatch");
        let snf = smith_normal_form(self);
        let y = snf.u.apply(b);
        let mut z = vec![BigInt::zero(); self.cols];
        for (i, yi) in y.iter().enumerate() {
            let d = if i < self.rows.min(self.cols) {
                snf.d.get(i, i)
            } else {
                0
            };
            if d == 0 {
                if !yi.is_zero() {
                    return None;
                }
            } else {
                let d = BigInt::from(d);
                if !(yi % &d).is_zero() {
                    return None;
                }
                z[i] = yi / &d;
            }
        }
        let x = snf.v.apply_big(&z);
        Some(
            x.iter()
                .map(|c| c.to_i64().expect("solution fits 64 bits"))
                .collect(),
        )
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// The Smith normal form `u * m * v = d` of a matrix `m`, with `u`, `v`
/// unimodular and `d` diagonal satisfying `d[0,0] | d[1,1] | ...`.
///
/// The diagonal entries are small (they divide the gcds of the minors), but
/// the transforms can be astronomically large even for small inputs, so they
/// are kept in arbitrary precision.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: BigMatrix,
    pub d: IntMatrix,
    pub v: BigMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// The diagonal entries, including trailing zeros.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i))
            .collect()
    }
}

/// A dense matrix over arbitrary-precision integers.
///
/// Normal-form transforms live here: even for tiny inputs their entries can
/// exceed any fixed width, while the normal form itself stays small.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl BigMatrix {
    /// Lifts a 64-bit matrix.
    pub fn from_int(m: &IntMatrix) -> Self {
        BigMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        BigMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    /// Matrix-vector product over 64-bit input coordinates.
    pub fn apply(&self, x: &[i64]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// Matrix-vector product.
    pub fn apply_big(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
            .collect()
    }

    /// Matrix product.
    pub fn matmul(&self, other: &BigMatrix) -> BigMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                data.push(
                    (0..self.cols)
                        .map(|k| self.get(i, k) * other.get(k, j))
                        .sum(),
                );
            }
        }
        BigMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// Exact determinant by integer-preserving elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut det = BigInt::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return BigInt::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                sign = -sign;
            }
            for r in c + 1..n {
                while !m.get(r, c).is_zero() {
                    let q = -(m.get(c, c) / m.get(r, c));
                    m.row_axpy(c, r, &q);
                    m.swap_rows(r, c);
                    sign = -sign;
                }
            }
            det *= m.get(c, c);
        }
        det * sign
    }

    /// The matrix as 64-bit integers, if every entry fits.
    pub fn to_int(&self) -> Option<IntMatrix> {
        let data: Option<Vec<i64>> = self.data.iter().map(|x| x.to_i64()).collect();
        Some(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: data?,
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[i] += c * row[k]`.
    fn row_axpy(&mut self, i: usize, k: usize, c: &BigInt) {
        for j in 0..self.cols {
            let delta = c * self.get(k, j);
            self.data[i * self.cols + j] += delta;
        }
    }

    /// `col[j] += c * col[k]`.
    fn col_axpy(&mut self, j: usize, k: usize, c: &BigInt) {
        for i in 0..self.rows {
            let delta = c * self.get(i, k);
            self.data[i * self.cols + j] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -self.get(i, j).clone();
            self.data[i * self.cols + j] = x;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = -self.get(i, j).clone();
            self.data[i * self.cols + j] = x;
        }
    }

    fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Replaces rows `i`, `j` by the unimodular combination
    /// `(m00*row_i + m01*row_j, m10*row_i + m11*row_j)`.
    fn row_transform2(
        &mut self,
        i: usize,
        j: usize,
        m00: &BigInt,
        m01: &BigInt,
        m10: &BigInt,
        m11: &BigInt,
    ) {
        for c in 0..self.cols {
            let a = self.get(i, c).clone();
            let b = self.get(j, c).clone();
            self.data[i * self.cols + c] = m00 * &a + m01 * &b;
            self.data[j * self.cols + c] = m10 * &a + m11 * &b;
        }
    }

    fn into_int(self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| x.to_i64().expect("normal form exceeds 64-bit range"))
                .collect(),
        }
    }
}

/// Quotient `q` with minimal remainder: `|a - q*p| <= |p|/2`.
fn balanced_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    let q = a.div_euclid(p);
    let r = a - &q * p;
    if BigInt::from(2) * r > p.abs() {
        q + p.signum()
    } else {
        q
    }
}

/// One row-Hermite pass: clears below each pivot and reduces the entries
/// above it, keeping all magnitudes near the pivot sizes.
fn row_reduce(d: &mut BigMatrix, u: &mut BigMatrix) {
    let (rows, cols) = (d.rows, d.cols);
    let mut prow = 0;
    for col in 0..cols {
        if prow >= rows {
            break;
        }
        loop {
            let best = (prow..rows)
                .filter(|&i| !d.get(i, col).is_zero())
                .min_by_key(|&i| d.get(i, col).abs());
            let Some(best) = best else { break };
            d.swap_rows(prow, best);
            u.swap_rows(prow, best);
            let mut cleared = true;
            for i in prow + 1..rows {
                if d.get(i, col).is_zero() {
                    continue;
                }
                let q = -balanced_quotient(d.get(i, col), d.get(prow, col));
                d.row_axpy(i, prow, &q);
                u.row_axpy(i, prow, &q);
                if !d.get(i, col).is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if d.get(prow, col).is_zero() {
            continue;
        }
        if d.get(prow, col).is_negative() {
            d.negate_row(prow);
            u.negate_row(prow);
        }
        for i in 0..prow {
            if d.get(i, col).is_zero() {
                continue;
            }
            let q = -balanced_quotient(d.get(i, col), d.get(prow, col));
            if !q.is_zero() {
                d.row_axpy(i, prow, &q);
                u.row_axpy(i, prow, &q);
            }
        }
        prow += 1;
    }
}

/// Column mirror of [`row_reduce`].
fn col_reduce(d: &mut BigMatrix, v: &mut BigMatrix) {
    let (rows, cols) = (d.rows, d.cols);
    let mut pcol = 0;
    for row in 0..rows {
        if pcol >= cols {
            break;
        }
        loop {
            let best = (pcol..cols)
                .filter(|&j| !d.get(row, j).is_zero())
                .min_by_key(|&j| d.get(row, j).abs());
            let Some(best) = best else { break };
            d.swap_cols(pcol, best);
            v.swap_cols(pcol, best);
            let mut cleared = true;
            for j in pcol + 1..cols {
                if d.get(row, j).is_zero() {
                    continue;
                }
                let q = -balanced_quotient(d.get(row, j), d.get(row, pcol));
                d.col_axpy(j, pcol, &q);
                v.col_axpy(j, pcol, &q);
                if !d.get(row, j).is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if d.get(row, pcol).is_zero() {
            continue;
        }
        if d.get(row, pcol).is_negative() {
            d.negate_col(pcol);
            v.negate_col(pcol);
        }
        for j in 0..pcol {
            if d.get(row, j).is_zero() {
                continue;
            }
            let q = -balanced_quotient(d.get(row, j), d.get(row, pcol));
            if !q.is_zero() {
                d.col_axpy(j, pcol, &q);
                v.col_axpy(j, pcol, &q);
            }
        }
        pcol += 1;
    }
}

/// Computes the Smith normal form of `m`.
///
/// Alternates row and column Hermite passes until the matrix is diagonal —
/// the per-pass entry reduction keeps intermediate values small — then
/// repairs the divisibility chain with local 2x2 Bezout transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = BigMatrix::from_int(m);
    let mut u = BigMatrix::identity(rows);
    let mut v = BigMatrix::identity(cols);
    let mut rounds = 0usize;
    while !d.is_diagonal() {
        row_reduce(&mut d, &mut u);
        if d.is_diagonal() {
            break;
        }
        col_reduce(&mut d, &mut v);
        rounds += 1;
        assert!(rounds < 10_000, "diagonalization does not converge");
    }

    // Compact the nonzero diagonal entries to the front and make them
    // non-negative.
    let dim = rows.min(cols);
    let mut next = 0;
    for i in 0..dim {
        if !d.get(i, i).is_zero() {
            if i != next {
                d.swap_rows(i, next);
                u.swap_rows(i, next);
                d.swap_cols(i, next);
                v.swap_cols(i, next);
            }
            next += 1;
        }
    }
    for i in 0..dim {
        if d.get(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }

    // Enforce d[i] | d[i+1] by replacing each offending adjacent pair (a, b)
    // with (gcd(a, b), a*b/gcd(a, b)).
    loop {
        let mut dirty = false;
        for i in 0..dim.saturating_sub(1) {
            let a = d.get(i, i).clone();
            let b = d.get(i + 1, i + 1).clone();
            if a.is_zero() || b.is_zero() || (&b % &a).is_zero() {
                continue;
            }
            let one = BigInt::one();
            d.col_axpy(i, i + 1, &one);
            v.col_axpy(i, i + 1, &one);
            let eg = a.extended_gcd(&b);
            let m10 = -(&b / &eg.gcd);
            let m11 = &a / &eg.gcd;
            d.row_transform2(i, i + 1, &eg.x, &eg.y, &m10, &m11);
            u.row_transform2(i, i + 1, &eg.x, &eg.y, &m10, &m11);
            let q = -(d.get(i, i + 1) / &eg.gcd);
            if !q.is_zero() {
                d.col_axpy(i + 1, i, &q);
                v.col_axpy(i + 1, i, &q);
            }
            if d.get(i + 1, i + 1).is_negative() {
                d.negate_row(i + 1);
                u.negate_row(i + 1);
            }
            dirty = true;
        }
        if !dirty {
            break;
        }
    }
    let rank = (0..dim).take_while(|&i| !d.get(i, i).is_zero()).count();
    SmithForm {
        u,
        d: d.into_int(),
        v,
        rank,
    }
}

/// The row-style Hermite normal form of `m`: a canonical basis of the lattice
/// spanned by the rows.  Zero rows are dropped, pivots are positive, and every
/// entry above a pivot is reduced into `[0, pivot)`.
pub fn row_hermite_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let rows = a.rows();
    let cols = a.cols();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                let val = a.get(i, col);
                if val != 0 && best.is_none_or(|b| val.abs() < a.get(b, col).abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(pivot_row, b);
            let p = a.get(pivot_row, col);
            let mut done = true;
            for i in pivot_row + 1..rows {
                let val = a.get(i, col);
                if val != 0 {
                    a.row_axpy(i, pivot_row, -val.div_euclid(p));
                    if a.get(i, col) != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a.get(pivot_row, col) != 0 {
            if a.get(pivot_row, col) < 0 {
                a.negate_row(pivot_row);
            }
            let p = a.get(pivot_row, col);
            for i in 0..pivot_row {
                let q = a.get(i, col).div_euclid(p);
                if q != 0 {
                    a.row_axpy(i, pivot_row, -q);
                }
            }
            pivot_row += 1;
        }
    }
    a.truncate_rows(pivot_row);
    a
}
