//! Quadratic and linear forms invariant under a set of matrices.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{FieldScalar, NumberField};
use crate::forms::{LinearForm, QuadraticForm};
use crate::linalg::{self, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvarianceMode {
    /// `hᵀ·A·h = A` for every generator `h`.
    Group,
    /// `Xᵀ·A + A·X = 0` for every generator `X`.
    Algebra,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn check_dims(d: usize, gens: &[Matrix<BigRational>]) -> Result<()> {
    for g in gens {
        if g.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: g.len() });
        }
        if let Some(row) = g.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: row.len() });
        }
    }
    Ok(())
}

/// Basis of the symmetric `A` (as quadratic forms over Q) invariant under
/// every generator.
pub fn invariant_quadratic_forms(
    d: usize,
    gens: &[Matrix<BigRational>],
    mode: InvarianceMode,
) -> Result<Vec<QuadraticForm>> {
    check_dims(d, gens)?;
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
    let zero = BigRational::zero();
    let sym = |&(i, j): &(usize, usize)| -> Matrix<BigRational> {
        let mut e = vec![vec![zero.clone(); d]; d];
        e[i][j] = BigRational::one();
        e[j][i] = BigRational::one();
        e
    };
    let basis: Vec<Matrix<BigRational>> = pairs.iter().map(sym).collect();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for g in gens {
        let images: Vec<Matrix<BigRational>> = basis
            .iter()
            .map(|e| match mode {
                InvarianceMode::Group => {
                    let c = linalg::congruence(e, g);
                    sub(&c, e)
                }
                InvarianceMode::Algebra => {
                    let left = linalg::mat_mul(&linalg::transpose(g), e);
                    let right = linalg::mat_mul(e, g);
                    add(&left, &right)
                }
            })
            .collect();
        for &(i, j) in &pairs {
            rows.push(images.iter().map(|m| m[i][j].clone()).collect());
        }
    }
    let sols = if rows.is_empty() {
        linalg::identity(pairs.len(), &zero)
    } else {
        linalg::nullspace(&rows, pairs.len(), &zero)
    };
    let f = NumberField::rational();
    Ok(sols
        .into_iter()
        .map(|x| {
            let mut a = vec![vec![FieldScalar::zero(&f); d]; d];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                a[i][j] = FieldScalar::from_rational(&f, x[k].clone());
                a[j][i] = a[i][j].clone();
            }
            QuadraticForm::from_gram(&f, a).expect("symmetric by construction")
        })
        .collect())
}

/// Basis of the linear forms `w` with `w(h·x) = w(x)` for every generator.
pub fn fixed_dual_vectors(d: usize, gens: &[Matrix<BigRational>]) -> Result<Vec<LinearForm>> {
    check_dims(d, gens)?;
    let zero = BigRational::zero();
    for (i, g) in gens.iter().enumerate() {
        if linalg::determinant(g, &zero).is_zero() {
            return Err(Error::SingularGenerator(i));
        }
    }
    let mut rows = Vec::new();
    for g in gens {
        let gt = linalg::transpose(g);
        for (i, row) in gt.into_iter().enumerate() {
            let mut r = row;
            r[i] -= BigRational::one();
            rows.push(r);
        }
    }
    let sols = if rows.is_empty() { linalg::identity(d, &zero) } else { linalg::nullspace(&rows, d, &zero) };
    let f = NumberField::rational();
    Ok(sols
        .into_iter()
        .map(|w| LinearForm::new(&f, w.into_iter().map(|c| FieldScalar::from_rational(&f, c)).collect()).unwrap())
        .collect())
}

fn sub(a: &Matrix<BigRational>, b: &Matrix<BigRational>) -> Matrix<BigRational> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect()).collect()
}

fn add(a: &Matrix<BigRational>, b: &Matrix<BigRational>) -> Matrix<BigRational> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u + v).collect()).collect()
}

fn embed(entries: &[((usize, usize), BigRational)], identity_rest: bool) -> Matrix<BigRational> {
    let mut m = if identity_rest {
        linalg::identity(4, &BigRational::zero())
    } else {
        vec![vec![BigRational::zero(); 4]; 4]
    };
    for ((i, j), v) in entries {
        m[*i][*j] = v.clone();
    }
    m
}

/// `so(2,1)` for `x1² + x2² − x3²` acting on the first three coordinates of
/// four: the rotation `E12 − E21` and the boosts `E13 + E31`, `E23 + E32`.
pub fn so21_algebra_generators() -> Vec<Matrix<BigRational>> {
    vec![
        embed(&[((0, 1), q(1, 1)), ((1, 0), q(-1, 1))], false),
        embed(&[((0, 2), q(1, 1)), ((2, 0), q(1, 1))], false),
        embed(&[((1, 2), q(1, 1)), ((2, 1), q(1, 1))], false),
    ]
}

/// Rational elements of `SO(2,1) × 1`: the rotation with
/// `(cos, sin) = (3/5, 4/5)` and boosts with `(cosh, sinh) = (5/4, 3/4)` in
/// the planes `(x1, x3)` and `(x2, x3)`.
pub fn so21_group_generators() -> Vec<Matrix<BigRational>> {
    let boost = |a: usize| {
        embed(&[((a, a), q(5, 4)), ((a, 2), q(3, 4)), ((2, a), q(3, 4)), ((2, 2), q(5, 4))], true)
    };
    vec![
        embed(&[((0, 0), q(3, 5)), ((0, 1), q(-4, 5)), ((1, 0), q(4, 5)), ((1, 1), q(3, 5))], true),
        boost(0),
        boost(1),
    ]
}

/// The unipotent element `h(a, b)` fixing `x1x4 − x2x3` and `x4`:
/// rows `(1, a, b, ab)`, `(0, 1, 0, b)`, `(0, 0, 1, a)`, `(0, 0, 0, 1)`.
pub fn unipotent_generator(a: &BigRational, b: &BigRational) -> Matrix<BigRational> {
    embed(&[((0, 1), a.clone()), ((0, 2), b.clone()), ((0, 3), a * b), ((1, 3), b.clone()), ((2, 3), a.clone())], true)
}
