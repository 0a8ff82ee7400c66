//! Small dense exact linear algebra shared by the form and stabilizer code.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::FieldScalar;

pub type Matrix<T> = Vec<Vec<T>>;

/// Exact field elements usable in the routines below.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_exact(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
    /// Float magnitude used only to rank pivot candidates.
    fn magnitude(&self) -> f64;
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_exact(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::MAX)
    }
}

impl Scalar for FieldScalar {
    fn zero_like(&self) -> Self {
        FieldScalar::zero(self.field())
    }
    fn one_like(&self) -> Self {
        FieldScalar::one(self.field())
    }
    fn is_zero_exact(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

pub fn identity<T: Scalar>(n: usize, proto: &T) -> Matrix<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { proto.one_like() } else { proto.zero_like() }).collect())
        .collect()
}

pub fn transpose<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = row[0].zero_like();
                    for k in 0..inner {
                        if !row[k].is_zero_exact() && !b[k][j].is_zero_exact() {
                            acc = acc.plus(&row[k].times(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<T: Scalar>(a: &Matrix<T>, v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(v[0].zero_like(), |acc, (x, y)| acc.plus(&x.times(y)))
        })
        .collect()
}

/// `bᵀ · a · b`.
pub fn congruence<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    mat_mul(&transpose(b), &mat_mul(a, b))
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn determinant<T: Scalar>(m: &Matrix<T>, proto: &T) -> T {
    let n = m.len();
    if n == 0 {
        return proto.one_like();
    }
    let mut a = m.clone();
    let mut prev = proto.one_like();
    let mut negate = false;
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero_exact())
            .max_by(|&i, &j| a[i][k].magnitude().total_cmp(&a[j][k].magnitude()));
        let Some(p) = pivot else {
            return proto.zero_like();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let prev_inv = prev.inverse().expect("Bareiss divisor is nonzero");
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].times(&a[k][k]).minus(&a[i][k].times(&a[k][j]));
                a[i][j] = v.times(&prev_inv);
            }
            a[i][k] = proto.zero_like();
        }
        prev = a[k][k].clone();
    }
    if negate {
        prev.negated()
    } else {
        prev
    }
}

/// Reduced row echelon form in place, pivoting only in the first `ncols`
/// columns (row operations span the whole row); returns the pivot columns.
pub fn rref<T: Scalar>(a: &mut Matrix<T>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= a.len() {
            break;
        }
        let pivot = (row..a.len())
            .filter(|&i| !a[i][col].is_zero_exact())
            .max_by(|&i, &j| a[i][col].magnitude().total_cmp(&a[j][col].magnitude()));
        let Some(p) = pivot else { continue };
        a.swap(p, row);
        let inv = a[row][col].inverse().expect("nonzero pivot");
        let width = a[row].len();
        for j in col..width {
            a[row][j] = a[row][j].times(&inv);
        }
        for i in 0..a.len() {
            if i != row && !a[i][col].is_zero_exact() {
                let f = a[i][col].clone();
                for j in col..width {
                    let v = a[i][j].minus(&f.times(&a[row][j]));
                    a[i][j] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of `{x : A x = 0}` for an `m × ncols` system.
pub fn nullspace<T: Scalar>(a: &Matrix<T>, ncols: usize, proto: &T) -> Vec<Vec<T>> {
    let mut r = a.clone();
    let pivots = rref(&mut r, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![proto.zero_like(); ncols];
            v[f] = proto.one_like();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = r[row][f].negated();
            }
            v
        })
        .collect()
}

pub fn rank<T: Scalar>(a: &Matrix<T>, ncols: usize) -> usize {
    let mut r = a.clone();
    rref(&mut r, ncols).len()
}

pub fn inverse<T: Scalar>(m: &Matrix<T>, proto: &T) -> Option<Matrix<T>> {
    let n = m.len();
    let mut aug: Matrix<T> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { proto.one_like() } else { proto.zero_like() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn to_f64_matrix(m: &Matrix<FieldScalar>) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![vec![q(2), q(-1), q(0)], vec![q(-1), q(2), q(-1)], vec![q(0), q(-1), q(2)]];
        assert_eq!(determinant(&m, &q(0)), q(4));
        let s = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(determinant(&s, &q(0)), q(-1));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = vec![vec![q(1), q(2), q(3)]];
        let ns = nullspace(&a, 3, &q(0));
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(mat_vec(&a, &v)[0], q(0));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = vec![vec![q(1), q(2)], vec![q(3), q(4)]];
        let inv = inverse(&m, &q(0)).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2, &q(0)));
        assert!(inverse(&vec![vec![q(1), q(2)], vec![q(2), q(4)]], &q(0)).is_none());
    }
}
