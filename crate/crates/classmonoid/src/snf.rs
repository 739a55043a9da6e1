//! Smith normal form over the integers, with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::IntMatrix;

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal satisfying
/// the divisibility chain `d_1 | d_2 | ...` with nonnegative entries.
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithNormalForm {
    /// Diagonal entries, including zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

/// Computes the Smith normal form of an arbitrary rectangular integer
/// matrix by alternating row and column reduction, with the classical
/// divisibility fix-up (add an offending row back into the pivot row and
/// re-reduce).
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let swap_rows = |d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize| {
        for j in 0..d.cols() {
            let tmp = d[(a, j)].clone();
            d[(a, j)] = d[(b, j)].clone();
            d[(b, j)] = tmp;
        }
        for j in 0..u.cols() {
            let tmp = u[(a, j)].clone();
            u[(a, j)] = u[(b, j)].clone();
            u[(b, j)] = tmp;
        }
    };
    let swap_cols = |d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize| {
        for i in 0..d.rows() {
            let tmp = d[(i, a)].clone();
            d[(i, a)] = d[(i, b)].clone();
            d[(i, b)] = tmp;
        }
        for i in 0..v.rows() {
            let tmp = v[(i, a)].clone();
            v[(i, a)] = v[(i, b)].clone();
            v[(i, b)] = tmp;
        }
    };
    // d.row[a] -= q * d.row[b], tracked in u
    let row_op = |d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize, q: &BigInt| {
        for j in 0..d.cols() {
            let term = q * &d[(b, j)];
            d[(a, j)] -= term;
        }
        for j in 0..u.cols() {
            let term = q * &u[(b, j)];
            u[(a, j)] -= term;
        }
    };
    // d.col[a] -= q * d.col[b], tracked in v
    let col_op = |d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize, q: &BigInt| {
        for i in 0..d.rows() {
            let term = q * &d[(i, b)];
            d[(i, a)] -= term;
        }
        for i in 0..v.rows() {
            let term = q * &v[(i, b)];
            v[(i, a)] -= term;
        }
    };

    let k = rows.min(cols);
    for t in 0..k {
        'pivot: loop {
            // locate a pivot: smallest nonzero entry in the submatrix
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    match pivot {
                        Some((pi, pj)) if d[(pi, pj)].abs() <= d[(i, j)].abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break 'pivot; // submatrix is zero; done
            };
            if pi != t {
                swap_rows(&mut d, &mut u, t, pi);
            }
            if pj != t {
                swap_cols(&mut d, &mut v, t, pj);
            }
            // clear the pivot column and row
            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                row_op(&mut d, &mut u, i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                col_op(&mut d, &mut v, j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue 'pivot; // remainders became new, smaller pivots
            }
            // enforce divisibility: the pivot must divide the rest
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // fold the offending row into the pivot row; the next
                    // sweep strictly shrinks the pivot
                    let minus_one = BigInt::from(-1);
                    row_op(&mut d, &mut u, t, i, &minus_one);
                }
                None => break 'pivot,
            }
        }
        if d[(t, t)].is_negative() {
            for j in 0..cols {
                let x = -&d[(t, j)];
                d[(t, j)] = x;
            }
            for j in 0..rows {
                let x = -&u[(t, j)];
                u[(t, j)] = x;
            }
        }
    }
    SmithNormalForm { u, d, v }
}

/// Positive invariant factors greater than 1 of the cokernel
/// `Z^rows / M Z^cols` (zeros are returned too, as trailing zeros, when
/// the matrix has deficient row rank).
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let snf = smith_normal_form(m);
    snf.diagonal()
}
