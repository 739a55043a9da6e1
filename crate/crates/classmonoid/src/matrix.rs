//! Exact integer matrices and the unimodular machinery behind
//! `GL_n(Z)`-conjugation: fraction-free determinants, characteristic
//! polynomial verification, rational kernel vectors, and extension of a
//! primitive vector to a basis of `Z^n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::roots::RootConfig;
use crate::Result;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

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
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        IntMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
        .expect("caller supplies rectangular data")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a * &other[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<BigInt>()
            })
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `diag(d) * self`.
    pub fn scale_rows(&self, diag: &[BigInt]) -> IntMatrix {
        assert_eq!(diag.len(), self.rows);
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = &diag[i] * &self[(i, j)];
            }
        }
        out
    }

    pub fn is_upper_triangular(&self) -> bool {
        for i in 0..self.rows {
            for j in 0..i.min(self.cols) {
                if !self[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                match (k + 1..n).find(|&r| !m[r * n + k].is_zero()) {
                    Some(r) => {
                        for j in 0..n {
                            m.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[i * n + j] = q;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = m[k * n + k].clone();
        }
        sign * m.pop().expect("non-empty")
    }

    /// Whether the characteristic polynomial equals
    /// `chi(x) = (x - a_1)...(x - a_n)` for the given roots.
    ///
    /// Both sides are monic of degree `n`, so agreement at `n + 1` points
    /// decides equality: we evaluate `det(tI - A)` at every root (where
    /// `chi` vanishes) and at one extra point.
    pub fn char_poly_matches(&self, cfg: &RootConfig) -> bool {
        if !self.is_square() || self.rows != cfg.n() {
            return false;
        }
        let n = self.rows;
        let eval = |t: &BigInt| -> BigInt {
            let mut shifted = IntMatrix::zero(n, n);
            for i in 0..n {
                for j in 0..n {
                    shifted[(i, j)] = if i == j {
                        t - &self[(i, j)]
                    } else {
                        -&self[(i, j)]
                    };
                }
            }
            shifted.determinant()
        };
        for a in cfg.roots() {
            if !eval(a).is_zero() {
                return false;
            }
        }
        let extra = cfg.root(n - 1) + BigInt::one();
        let chi_extra: BigInt = cfg.roots().iter().map(|a| &extra - a).product();
        eval(&extra) == chi_extra
    }

    /// One nonzero rational vector in the right kernel, or `None` for an
    /// invertible matrix.
    pub fn right_kernel_vector(&self) -> Option<Vec<BigRational>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(self[(i, j)].clone()))
                    .collect()
            })
            .collect();
        // reduced row echelon form, tracking pivot columns
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
        let mut rank = 0usize;
        for col in 0..n {
            let Some(pr) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pr);
            let p = m[rank][col].clone();
            for j in col..n {
                m[rank][j] = &m[rank][j] / &p;
            }
            for r in 0..n {
                if r != rank && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for j in col..n {
                        m[r][j] = &m[r][j] - &f * &m[rank][j];
                    }
                }
            }
            pivot_of_col[col] = Some(rank);
            rank += 1;
        }
        let free_col = (0..n).find(|&c| pivot_of_col[c].is_none())?;
        let mut v = vec![BigRational::zero(); n];
        v[free_col] = BigRational::one();
        for c in 0..n {
            if let Some(r) = pivot_of_col[c] {
                v[c] = -m[r][free_col].clone();
            }
        }
        Some(v)
    }

    /// Primitive integer kernel vector with positive first nonzero entry.
    pub fn primitive_right_kernel(&self) -> Option<Vec<BigInt>> {
        let v = self.right_kernel_vector()?;
        Some(primitive_from_rational(&v))
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Scale a rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
pub fn primitive_from_rational(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|x| {
            let scaled = x * BigRational::from_integer(lcm.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();
    let mut content = BigInt::zero();
    for x in &ints {
        content = content.gcd(x);
    }
    if !content.is_zero() && !content.is_one() {
        for x in ints.iter_mut() {
            *x = &*x / &content;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    ints
}

/// A unimodular matrix together with its inverse, maintained in lockstep
/// so no general matrix inversion is ever needed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unimodular {
    mat: IntMatrix,
    inv: IntMatrix,
}

impl Unimodular {
    pub fn identity(n: usize) -> Self {
        Unimodular {
            mat: IntMatrix::identity(n),
            inv: IntMatrix::identity(n),
        }
    }

    pub fn from_parts(mat: IntMatrix, inv: IntMatrix) -> Result<Self> {
        let n = mat.n();
        if mat.mul(&inv) != IntMatrix::identity(n) {
            return Err(Error::InvalidInput(
                "matrices are not mutually inverse".into(),
            ));
        }
        Ok(Unimodular { mat, inv })
    }

    /// Diagonal sign matrix; its own inverse.
    pub fn from_signs(signs: &[i8]) -> Self {
        let n = signs.len();
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            debug_assert!(signs[i] == 1 || signs[i] == -1);
            m[(i, i)] = BigInt::from(signs[i]);
        }
        Unimodular {
            mat: m.clone(),
            inv: m,
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.mat
    }

    pub fn inverse(&self) -> &IntMatrix {
        &self.inv
    }

    pub fn n(&self) -> usize {
        self.mat.n()
    }

    /// `self` applied first, then `next`: the composite `next * self`.
    pub fn then(&self, next: &Unimodular) -> Unimodular {
        Unimodular {
            mat: next.mat.mul(&self.mat),
            inv: self.inv.mul(&next.inv),
        }
    }

    /// Conjugate: `U A U^{-1}`.
    pub fn conjugate(&self, a: &IntMatrix) -> IntMatrix {
        self.mat.mul(a).mul(&self.inv)
    }

    // Row operations applied to `mat`, with the matching column
    // operation on `inv` so the pair stays mutually inverse.

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        let n = self.mat.n();
        for c in 0..n {
            let tmp = self.mat[(i, c)].clone();
            self.mat[(i, c)] = self.mat[(j, c)].clone();
            self.mat[(j, c)] = tmp;
        }
        for r in 0..n {
            let tmp = self.inv[(r, i)].clone();
            self.inv[(r, i)] = self.inv[(r, j)].clone();
            self.inv[(r, j)] = tmp;
        }
    }

    /// `row[target] += t * row[source]` on `mat`,
    /// `col[source] -= t * col[target]` on `inv`.
    pub fn add_multiple_of_row(&mut self, target: usize, source: usize, t: &BigInt) {
        debug_assert_ne!(target, source);
        let n = self.mat.n();
        for c in 0..n {
            let term = t * &self.mat[(source, c)];
            self.mat[(target, c)] += term;
        }
        for r in 0..n {
            let term = t * &self.inv[(r, target)];
            self.inv[(r, source)] -= term;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        let n = self.mat.n();
        for c in 0..n {
            let v = -&self.mat[(i, c)];
            self.mat[(i, c)] = v;
        }
        for r in 0..n {
            let v = -&self.inv[(r, i)];
            self.inv[(r, i)] = v;
        }
    }
}

/// Extends a primitive vector to a basis of `Z^n`: returns a unimodular
/// matrix whose first column is `v`.
pub fn primitive_extend(v: &[BigInt]) -> Result<Unimodular> {
    let n = v.len();
    if n == 0 || v.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidInput("cannot extend the zero vector".into()));
    }
    let mut content = BigInt::zero();
    for x in v {
        content = content.gcd(x);
    }
    if !content.is_one() {
        return Err(Error::InvalidInput(format!(
            "vector is not primitive: content = {content}"
        )));
    }
    // Row-reduce v to e_1 with tracked operations; the accumulated
    // inverse then has v as its first column.
    let mut work: Vec<BigInt> = v.to_vec();
    let mut ops = Unimodular::identity(n);
    loop {
        let mut pivot: Option<usize> = None;
        for (i, x) in work.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match pivot {
                Some(p) if work[p].abs() <= x.abs() => {}
                _ => pivot = Some(i),
            }
        }
        let p = pivot.expect("nonzero vector");
        let mut done = true;
        for i in 0..n {
            if i == p || work[i].is_zero() {
                continue;
            }
            let q = work[i].div_floor(&work[p]);
            let term = &q * &work[p];
            work[i] -= term;
            ops.add_multiple_of_row(i, p, &-q);
            if !work[i].is_zero() {
                done = false;
            }
        }
        if done {
            if p != 0 {
                work.swap(0, p);
                ops.swap_rows(0, p);
            }
            if work[0].is_negative() {
                work[0] = -&work[0];
                ops.negate_row(0);
            }
            debug_assert!(work[0].is_one(), "gcd 1 reduces to 1");
            break;
        }
    }
    // ops.mat * v = e_1, so ops.inv has v as first column.
    Ok(Unimodular {
        mat: ops.inv,
        inv: ops.mat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.determinant(), bi(-2));
        let m = IntMatrix::from_i64_rows(&[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]]);
        assert_eq!(m.determinant(), bi(5));
        assert_eq!(IntMatrix::identity(4).determinant(), bi(1));
        let m = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.determinant(), bi(0));
    }

    #[test]
    fn determinant_needs_pivot_swap() {
        let m = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant(), bi(-1));
        let m = IntMatrix::from_i64_rows(&[&[0, 2, 1], &[0, 0, 3], &[5, 1, 1]]);
        assert_eq!(m.determinant(), bi(30));
    }

    #[test]
    fn char_poly_check_accepts_and_rejects() {
        let cfg = RootConfig::from_i64(&[0, 3]).unwrap();
        // companion matrix of x(x-3) = x^2 - 3x
        let companion = IntMatrix::from_i64_rows(&[&[0, 0], &[1, 3]]);
        assert!(companion.char_poly_matches(&cfg));
        let diag = IntMatrix::from_i64_rows(&[&[0, 0], &[0, 3]]);
        assert!(diag.char_poly_matches(&cfg));
        let wrong = IntMatrix::from_i64_rows(&[&[0, 0], &[0, 4]]);
        assert!(!wrong.char_poly_matches(&cfg));
    }

    #[test]
    fn char_poly_check_rejects_repeated_eigenvalues() {
        // The minimal polynomial divides chi and trace and determinant
        // both agree with chi, yet the characteristic polynomial differs:
        // point evaluation must reject this matrix.
        let cfg = RootConfig::from_i64(&[-2, -1, 0, 1, 2]).unwrap();
        let m = IntMatrix::from_i64_rows(&[
            &[-1, 0, 0, 0, 0],
            &[0, -1, 0, 0, 0],
            &[0, 0, 0, 0, 0],
            &[0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 1],
        ]);
        assert!(!m.char_poly_matches(&cfg));
    }

    #[test]
    fn kernel_of_singular_matrix() {
        let m = IntMatrix::from_i64_rows(&[&[2, 4], &[1, 2]]);
        let v = m.primitive_right_kernel().unwrap();
        assert_eq!(m.mul_vec(&v), vec![bi(0), bi(0)]);
        assert_eq!(v, vec![bi(2), bi(-1)]);
        assert!(IntMatrix::identity(3).primitive_right_kernel().is_none());
    }

    #[test]
    fn primitive_extend_examples() {
        let e1 = [bi(1), bi(0), bi(0)];
        let u = primitive_extend(&e1).unwrap();
        assert_eq!(*u.matrix(), IntMatrix::identity(3));

        for v in [vec![bi(2), bi(3)], vec![bi(6), bi(10), bi(15)]] {
            let u = primitive_extend(&v).unwrap();
            let n = v.len();
            assert_eq!(u.matrix().column(0), v, "first column is v");
            let det = u.matrix().determinant();
            assert!(det.is_one() || (-&det).is_one(), "unimodular");
            assert_eq!(
                u.matrix().mul(u.inverse()),
                IntMatrix::identity(n),
                "tracked inverse is correct"
            );
        }
    }

    #[test]
    fn primitive_extend_rejects_bad_input() {
        assert!(primitive_extend(&[bi(0), bi(0)]).is_err());
        assert!(primitive_extend(&[bi(2), bi(4)]).is_err());
    }

    #[test]
    fn unimodular_ops_stay_inverse() {
        let mut u = Unimodular::identity(3);
        u.add_multiple_of_row(0, 2, &bi(5));
        u.swap_rows(1, 2);
        u.negate_row(0);
        u.add_multiple_of_row(2, 0, &bi(-3));
        assert_eq!(u.matrix().mul(u.inverse()), IntMatrix::identity(3));
    }

    #[test]
    fn primitive_from_rational_normalizes() {
        let v = vec![
            BigRational::new(bi(-2), bi(4)),
            BigRational::new(bi(1), bi(3)),
        ];
        // (-1/2, 1/3) -> (-3, 2) -> sign-normalized (3, -2)
        assert_eq!(primitive_from_rational(&v), vec![bi(3), bi(-2)]);
    }
}
