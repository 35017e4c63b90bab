//! Exact integer linear algebra: dense matrices over `BigInt`, Smith normal
//! form with transformation matrices, saturated integer kernels in Hermite
//! normal form, and exact rational linear solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense matrix with arbitrary-precision integer entries, row-major storage.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers.
    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.into_iter().flatten().collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Returns the rows as `i64` values, or `None` if any entry overflows.
    pub fn rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| i64::try_from(x).ok())
                    .collect::<Option<Vec<i64>>>()
            })
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.get(k, j);
                    out.data[i * other.cols + j] += prod;
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
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

    /// row[a] += k * row[b]
    fn add_row_multiple(&mut self, a: usize, b: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = k * self.get(b, j);
            self.data[a * self.cols + j] += delta;
        }
    }

    /// col[a] += k * col[b]
    fn add_col_multiple(&mut self, a: usize, b: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = k * self.get(i, b);
            self.data[i * self.cols + a] += delta;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j).clone();
            self.data[a * self.cols + j] = v;
        }
    }

    /// Rank over the rationals, via fraction-free Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut col = 0;
        while rank < m.rows && col < m.cols {
            let pivot = (rank..m.rows).find(|&i| !m.get(i, col).is_zero());
            let Some(p) = pivot else {
                col += 1;
                continue;
            };
            m.swap_rows(rank, p);
            for i in rank + 1..m.rows {
                if m.get(i, col).is_zero() {
                    continue;
                }
                let a = m.get(rank, col).clone();
                let b = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = &a * m.get(i, j) - &b * m.get(rank, j);
                    m.set(i, j, v);
                }
            }
            rank += 1;
            col += 1;
        }
        rank
    }

    /// Determinant of a square matrix, via the Bareiss algorithm.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(k, k) * m.get(i, j) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            for i in k + 1..n {
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `U * A * V = S` with `U`, `V` unimodular and `S` diagonal
/// with each invariant factor dividing the next.
pub struct SnfResult {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries of `S` up to `min(rows, cols)`, including zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.nrows().min(self.s.ncols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }

    /// Nonzero invariant factors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }
}

/// Computes the Smith normal form of `a`.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.nrows());
    let mut v = IntMatrix::identity(a.ncols());
    let n = a.nrows().min(a.ncols());

    for t in 0..n {
        loop {
            // Find a pivot: the entry of minimal absolute value in the
            // remaining block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..s.nrows() {
                for j in t..s.ncols() {
                    if s.get(i, j).is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s.get(i, j).abs() < s.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // Remaining block is zero; done.
                return SnfResult { s, u, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            // Reduce column t and row t by the pivot.
            let mut clean = true;
            for i in t + 1..s.nrows() {
                let q = div_nearest(s.get(i, t), s.get(t, t));
                s.add_row_multiple(i, t, &-&q);
                u.add_row_multiple(i, t, &-&q);
                if !s.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..s.ncols() {
                let q = div_nearest(s.get(t, j), s.get(t, t));
                s.add_col_multiple(j, t, &-&q);
                v.add_col_multiple(j, t, &-&q);
                if !s.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // Enforce divisibility: the pivot must divide every entry of the
            // trailing block.
            let mut offender = None;
            'outer: for i in t + 1..s.nrows() {
                for j in t + 1..s.ncols() {
                    if !(s.get(i, j) % s.get(t, t)).is_zero() {
                        offender = Some(i);
                        break 'outer;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // Fold the offending row into row t and iterate again.
                    s.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { s, u, v }
}

/// Rounded division: the quotient nearest to a/b.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) != (b.is_negative()) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Basis for the left kernel `{ x : x * A = 0 }` as rows of the returned
/// matrix. The basis generates the full (saturated) kernel lattice and is
/// normalized to row Hermite normal form with positive pivots, so the result
/// is deterministic.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.invariant_factors().len();
    // x * A = 0  <=>  (x * U^{-1}) * S = 0 since V is invertible; the kernel of
    // right-multiplication by S is spanned by the unit vectors past the rank,
    // so the last rows of U span the kernel of A.
    let rows: Vec<Vec<BigInt>> = (rank..a.nrows()).map(|i| snf.u.row(i).to_vec()).collect();
    hermite_rows(rows, a.nrows())
}

/// Row Hermite normal form of a spanning set: pivots positive, entries above
/// each pivot reduced to lie in `[0, pivot)`, zero rows dropped.
fn hermite_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::from_rows(rows);
    if m.nrows() == 0 {
        return IntMatrix::zero(0, cols);
    }
    let mut pivot_row = 0;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..cols {
        if pivot_row >= m.nrows() {
            break;
        }
        // Euclidean elimination within the column.
        loop {
            let nonzero: Vec<usize> =
                (pivot_row..m.nrows()).filter(|&i| !m.get(i, col).is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                m.swap_rows(pivot_row, nonzero[0]);
                break;
            }
            // Reduce all entries by the one of minimal absolute value.
            let &min_i = nonzero
                .iter()
                .min_by_key(|&&i| m.get(i, col).abs())
                .expect("nonempty");
            m.swap_rows(pivot_row, min_i);
            for i in pivot_row + 1..m.nrows() {
                if m.get(i, col).is_zero() {
                    continue;
                }
                let q = div_nearest(m.get(i, col), m.get(pivot_row, col));
                m.add_row_multiple(i, pivot_row, &-q);
            }
        }
        if m.get(pivot_row, col).is_zero() {
            continue;
        }
        if m.get(pivot_row, col).is_negative() {
            m.negate_row(pivot_row);
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }
    // Reduce entries above each pivot.
    for &(r, c) in pivots.iter() {
        for i in 0..r {
            let q = m.get(i, c).div_floor(m.get(r, c));
            m.add_row_multiple(i, r, &-q);
        }
    }
    IntMatrix::from_rows((0..pivot_row).map(|i| m.row(i).to_vec()).collect())
}

/// Solves `A x = b` exactly over the rationals. Returns `None` when the
/// system is inconsistent. When the solution space is positive-dimensional the
/// free variables are set to zero, yielding a deterministic particular
/// solution.
pub fn solve_rational(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigRational>> {
    assert_eq!(a.nrows(), b.len(), "dimension mismatch in solve_rational");
    let rows = a.nrows();
    let cols = a.ncols();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = a
                .row(i)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            row.push(BigRational::from_integer(b[i].clone()));
            row
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in c..=cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let d = &f * &m[r][j];
                    m[i][j] = &m[i][j] - d;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistent if any zero row has nonzero right-hand side.
    for row in m.iter().skip(r) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// A right inverse `X` with `A * X = I`, valid when the Smith normal form of
/// `A` has all invariant factors equal to 1 (surjective as a map of lattices).
/// Returns `None` otherwise.
pub fn right_inverse(a: &IntMatrix) -> Option<IntMatrix> {
    let snf = smith_normal_form(a);
    let r = a.nrows();
    let factors = snf.invariant_factors();
    if factors.len() != r || factors.iter().any(|f| !f.is_one()) {
        return None;
    }
    // U A V = [I | 0]  =>  A * (V [I; 0] U) = I.
    let mut lift = IntMatrix::zero(a.ncols(), r);
    for i in 0..r {
        lift.set(i, i, BigInt::one());
    }
    Some(snf.v.mul(&lift).mul(&snf.u))
}
