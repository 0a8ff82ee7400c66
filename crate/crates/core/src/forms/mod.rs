//! Quadratic and linear forms over a number field: Gram matrices, evaluation,
//! restriction to subspaces, signatures and determinants.

mod kernel;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

pub use kernel::{column_hnf, integer_kernel_basis};

use crate::error::{Error, Result};
use crate::exact::{FieldScalar, NumberField};
use crate::linalg::{self, Matrix};

/// Inertia indices of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_indefinite(&self) -> bool {
        self.pos >= 1 && self.neg >= 1
    }

    /// Positive or negative definite (and nondegenerate).
    pub fn is_definite(&self) -> bool {
        self.zero == 0 && (self.pos == 0 || self.neg == 0)
    }

    pub fn flipped(&self) -> Signature {
        Signature { pos: self.neg, neg: self.pos, zero: self.zero }
    }
}

/// `Q(x) = xᵀ·gram·x` with an exactly symmetric Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    field: Arc<NumberField>,
    gram: Matrix<FieldScalar>,
}

impl QuadraticForm {
    pub fn from_gram(field: &Arc<NumberField>, gram: Matrix<FieldScalar>) -> Result<QuadraticForm> {
        let d = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: row.len() });
            }
            for (j, x) in row.iter().enumerate() {
                x.same_field(&FieldScalar::zero(field))?;
                if gram[j][i] != *x {
                    return Err(Error::PreconditionViolated("Gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(QuadraticForm { field: field.clone(), gram })
    }

    /// Builds `Σ_{i≤j} c_ij x_i x_j` from (0-based) coefficient entries;
    /// repeated entries are summed.
    pub fn from_coefficients(
        field: &Arc<NumberField>,
        dim: usize,
        coeffs: &[((usize, usize), FieldScalar)],
    ) -> Result<QuadraticForm> {
        let mut gram = vec![vec![FieldScalar::zero(field); dim]; dim];
        let half = FieldScalar::from_ratio(field, 1, 2);
        for ((i, j), c) in coeffs {
            let (i, j) = if i <= j { (*i, *j) } else { (*j, *i) };
            if j >= dim {
                return Err(Error::DimensionMismatch { expected: dim, got: j + 1 });
            }
            c.same_field(&half)?;
            if i == j {
                gram[i][i] = &gram[i][i] + c;
            } else {
                let h = c * &half;
                gram[i][j] = &gram[i][j] + &h;
                gram[j][i] = gram[i][j].clone();
            }
        }
        Ok(QuadraticForm { field: field.clone(), gram })
    }

    pub fn diagonal(field: &Arc<NumberField>, entries: &[FieldScalar]) -> QuadraticForm {
        let d = entries.len();
        let mut gram = vec![vec![FieldScalar::zero(field); d]; d];
        for (i, e) in entries.iter().enumerate() {
            gram[i][i] = e.clone();
        }
        QuadraticForm { field: field.clone(), gram }
    }

    /// Diagonal form with small integer entries.
    pub fn diagonal_ints(field: &Arc<NumberField>, entries: &[i64]) -> QuadraticForm {
        let e: Vec<FieldScalar> = entries.iter().map(|&c| FieldScalar::from_int(field, c)).collect();
        Self::diagonal(field, &e)
    }

    /// `L²`, with Gram matrix `c·cᵀ`.
    pub fn square_of(l: &LinearForm) -> QuadraticForm {
        let gram = l
            .coeffs
            .iter()
            .map(|a| l.coeffs.iter().map(|b| a * b).collect())
            .collect();
        QuadraticForm { field: l.field.clone(), gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn gram(&self) -> &Matrix<FieldScalar> {
        &self.gram
    }

    /// Polynomial coefficient of `x_i x_j` (`i ≤ j`).
    pub fn coefficient(&self, i: usize, j: usize) -> FieldScalar {
        if i == j {
            self.gram[i][i].clone()
        } else {
            &self.gram[i][j] + &self.gram[i][j]
        }
    }

    /// Gram entries on and above the diagonal, row by row.
    pub fn upper_entries(&self) -> Vec<FieldScalar> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * (d + 1) / 2);
        for i in 0..d {
            for j in i..d {
                out.push(self.gram[i][j].clone());
            }
        }
        out
    }

    pub fn is_rational(&self) -> bool {
        self.gram.iter().flatten().all(|x| x.is_rational().is_some())
    }

    pub fn evaluate(&self, x: &[BigRational]) -> Result<FieldScalar> {
        self.bilinear(x, x)
    }

    pub fn evaluate_field(&self, x: &[FieldScalar]) -> Result<FieldScalar> {
        self.bilinear_field(x, x)
    }

    /// Polar form `xᵀ·gram·y`.
    pub fn bilinear(&self, x: &[BigRational], y: &[BigRational]) -> Result<FieldScalar> {
        let xs = to_field(&self.field, x);
        let ys = to_field(&self.field, y);
        self.bilinear_field(&xs, &ys)
    }

    pub fn bilinear_field(&self, x: &[FieldScalar], y: &[FieldScalar]) -> Result<FieldScalar> {
        let d = self.dim();
        for v in [x, y] {
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: v.len() });
            }
        }
        let mut acc = FieldScalar::zero(&self.field);
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() || self.gram[i][j].is_zero() {
                    continue;
                }
                acc = &acc + &(&(&x[i] * &self.gram[i][j]) * &y[j]);
            }
        }
        Ok(acc)
    }

    /// Sylvester signature by exact congruence diagonalization.
    pub fn signature(&self) -> Signature {
        let (diag, _) = diagonalize(&self.gram, &self.field);
        let mut sig = Signature { pos: 0, neg: 0, zero: 0 };
        for e in &diag {
            match e.sign() {
                1 => sig.pos += 1,
                -1 => sig.neg += 1,
                _ => sig.zero += 1,
            }
        }
        sig
    }

    pub fn determinant(&self) -> FieldScalar {
        linalg::determinant(&self.gram, &FieldScalar::zero(&self.field))
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    /// Gram matrix `gᵀ·gram·g` of `x ↦ Q(g·x)`.
    pub fn pullback(&self, g: &Matrix<FieldScalar>) -> QuadraticForm {
        QuadraticForm { field: self.field.clone(), gram: linalg::congruence(&self.gram, g) }
    }

    /// Restriction to the span of `basis` (Gram entries `Q(b_i, b_j)`).
    pub fn restrict(&self, basis: &[Vec<FieldScalar>]) -> QuadraticForm {
        let gram = basis
            .iter()
            .map(|bi| basis.iter().map(|bj| self.bilinear_field(bi, bj).expect("basis dimension")).collect())
            .collect();
        QuadraticForm { field: self.field.clone(), gram }
    }

    pub fn scaled(&self, c: &FieldScalar) -> QuadraticForm {
        let gram = self.gram.iter().map(|r| r.iter().map(|x| x * c).collect()).collect();
        QuadraticForm { field: self.field.clone(), gram }
    }

    pub fn plus(&self, other: &QuadraticForm) -> QuadraticForm {
        let gram = self
            .gram
            .iter()
            .zip(&other.gram)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        QuadraticForm { field: self.field.clone(), gram }
    }
}

/// `L(x) = Σ coeffs[i]·x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    field: Arc<NumberField>,
    coeffs: Vec<FieldScalar>,
}

impl LinearForm {
    pub fn new(field: &Arc<NumberField>, coeffs: Vec<FieldScalar>) -> Result<LinearForm> {
        let z = FieldScalar::zero(field);
        for c in &coeffs {
            c.same_field(&z)?;
        }
        Ok(LinearForm { field: field.clone(), coeffs })
    }

    pub fn from_ints(field: &Arc<NumberField>, coeffs: &[i64]) -> LinearForm {
        LinearForm { field: field.clone(), coeffs: coeffs.iter().map(|&c| FieldScalar::from_int(field, c)).collect() }
    }

    /// The coordinate form `x_i` (0-based) in dimension `dim`.
    pub fn coordinate(field: &Arc<NumberField>, dim: usize, i: usize) -> LinearForm {
        let mut c = vec![0; dim];
        c[i] = 1;
        Self::from_ints(field, &c)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficients as rationals, when all of them are rational.
    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs.iter().map(|c| c.is_rational()).collect()
    }

    pub fn evaluate(&self, x: &[BigRational]) -> Result<FieldScalar> {
        self.evaluate_field(&to_field(&self.field, x))
    }

    pub fn evaluate_field(&self, x: &[FieldScalar]) -> Result<FieldScalar> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(x)
            .fold(FieldScalar::zero(&self.field), |acc, (c, v)| &acc + &(c * v)))
    }

    /// Coefficients `gᵀ·c` of `x ↦ L(g·x)`.
    pub fn pullback(&self, g: &Matrix<FieldScalar>) -> LinearForm {
        let coeffs = linalg::mat_vec(&linalg::transpose(g), &self.coeffs);
        LinearForm { field: self.field.clone(), coeffs }
    }

    pub fn restrict(&self, basis: &[Vec<FieldScalar>]) -> LinearForm {
        let coeffs = basis.iter().map(|b| self.evaluate_field(b).expect("basis dimension")).collect();
        LinearForm { field: self.field.clone(), coeffs }
    }

    pub fn scaled(&self, c: &FieldScalar) -> LinearForm {
        LinearForm { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }
}

/// The pair `(Q, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairQL {
    pub q: QuadraticForm,
    pub l: LinearForm,
    /// Entries were given as decimals standing in for real numbers; only
    /// heuristic rationality checks are meaningful.
    pub float_input: bool,
}

impl PairQL {
    pub fn new(q: QuadraticForm, l: LinearForm) -> Result<PairQL> {
        if q.dim() != l.dim() {
            return Err(Error::DimensionMismatch { expected: q.dim(), got: l.dim() });
        }
        if *q.field() != *l.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(PairQL { q, l, float_input: false })
    }

    pub fn with_float_input(mut self, float_input: bool) -> PairQL {
        self.float_input = float_input;
        self
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.q.field()
    }

    /// The pair `x ↦ (λ·Q(g·x), μ·L(g·x))`.
    pub fn transformed(&self, g: &Matrix<FieldScalar>, lambda: &FieldScalar, mu: &FieldScalar) -> PairQL {
        PairQL {
            q: self.q.pullback(g).scaled(lambda),
            l: self.l.pullback(g).scaled(mu),
            float_input: self.float_input,
        }
    }
}

/// `(Q(x), L(x))` computed exactly.
pub fn evaluate_pair(p: &PairQL, x: &[BigRational]) -> Result<(FieldScalar, FieldScalar)> {
    Ok((p.q.evaluate(x)?, p.l.evaluate(x)?))
}

pub(crate) fn to_field(field: &Arc<NumberField>, x: &[BigRational]) -> Vec<FieldScalar> {
    x.iter().map(|v| FieldScalar::from_rational(field, v.clone())).collect()
}

pub(crate) fn int_vector(field: &Arc<NumberField>, x: &[BigInt]) -> Vec<FieldScalar> {
    x.iter().map(|v| FieldScalar::from_rational(field, BigRational::from_integer(v.clone()))).collect()
}

/// Exact congruence diagonalization: returns `(diag, s)` with
/// `sᵀ·gram·s = diag(diag)`.
pub fn diagonalize(gram: &Matrix<FieldScalar>, field: &Arc<NumberField>) -> (Vec<FieldScalar>, Matrix<FieldScalar>) {
    let n = gram.len();
    let mut a = gram.clone();
    let mut s = linalg::identity(n, &FieldScalar::zero(field));
    diagonalize_leading(&mut a, &mut s, n, field);
    let diag = (0..n).map(|i| a[i][i].clone()).collect();
    (diag, s)
}

/// Diagonalizes the leading `m × m` block of `a` in place, using only basis
/// changes among the first `m` basis vectors (recorded as column operations
/// on `s`).
///
/// Pivots are the nonzero diagonal entries of largest float magnitude (first
/// one on ties). When the remaining block has zero diagonal but a nonzero
/// entry `a_ij`, `e_i` is replaced by `e_i + e_j`, whose diagonal entry
/// `2·a_ij` is nonzero; the hyperbolic plane then contributes one positive
/// and one negative entry.
pub(crate) fn diagonalize_leading(
    a: &mut Matrix<FieldScalar>,
    s: &mut Matrix<FieldScalar>,
    m: usize,
    field: &Arc<NumberField>,
) {
    let one = FieldScalar::one(field);
    let mut k = 0;
    while k < m {
        let p = match argmax_first((k..m).filter(|&i| !a[i][i].is_zero()), |i| a[i][i].to_f64().abs()) {
            Some(p) => p,
            None => {
                let pairs = (k..m).flat_map(|i| (i + 1..m).map(move |j| (i, j)));
                let Some((i, j)) = argmax_first(pairs.filter(|&(i, j)| !a[i][j].is_zero()), |(i, j)| {
                    a[i][j].to_f64().abs()
                }) else {
                    break;
                };
                add_basis_vector(a, s, i, j, &one);
                i
            }
        };
        swap_basis(a, s, p, k);
        let inv = a[k][k].checked_inv().expect("nonzero pivot");
        for r in k + 1..m {
            if a[r][k].is_zero() {
                continue;
            }
            let f = -(&a[r][k] * &inv);
            add_basis_vector(a, s, r, k, &f);
        }
        k += 1;
    }
}

/// First item with the largest key.
pub(crate) fn argmax_first<T: Copy>(items: impl Iterator<Item = T>, key: impl Fn(T) -> f64) -> Option<T> {
    let mut best: Option<(T, f64)> = None;
    for it in items {
        let k = key(it);
        if best.as_ref().is_none_or(|&(_, bk)| k > bk) {
            best = Some((it, k));
        }
    }
    best.map(|(it, _)| it)
}

/// Basis change `e_i ← f·e_i`.
pub(crate) fn scale_basis(a: &mut Matrix<FieldScalar>, s: &mut Matrix<FieldScalar>, i: usize, f: &FieldScalar) {
    for row in a.iter_mut() {
        row[i] = &row[i] * f;
    }
    for c in 0..a.len() {
        a[i][c] = &a[i][c] * f;
    }
    for row in s.iter_mut() {
        row[i] = &row[i] * f;
    }
}

/// Basis change `e_i ← e_i + f·e_j` applied to the Gram matrix and recorded in `s`.
pub(crate) fn add_basis_vector(
    a: &mut Matrix<FieldScalar>,
    s: &mut Matrix<FieldScalar>,
    i: usize,
    j: usize,
    f: &FieldScalar,
) {
    let n = a.len();
    for r in 0..n {
        let v = &a[r][i] + &(f * &a[r][j]);
        a[r][i] = v;
    }
    for c in 0..n {
        let v = &a[i][c] + &(f * &a[j][c]);
        a[i][c] = v;
    }
    for row in s.iter_mut() {
        let v = &row[i] + &(f * &row[j]);
        row[i] = v;
    }
}

pub(crate) fn swap_basis(a: &mut Matrix<FieldScalar>, s: &mut Matrix<FieldScalar>, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    for row in s.iter_mut() {
        row.swap(i, j);
    }
}

/// Result of restricting a pair to the kernel of a linear form.
#[derive(Debug, Clone)]
pub struct Restriction {
    /// Basis vectors of `{ell = 0}` (each of length `d`).
    pub basis: Vec<Vec<FieldScalar>>,
    /// The same basis as integer vectors when `ell` is rational; it is then a
    /// basis of the integer points of the hyperplane.
    pub integer_basis: Option<Vec<Vec<BigInt>>>,
    pub pair: PairQL,
}

/// Restricts `(Q, L)` to `{ell = 0}` in an explicit basis.
pub fn restrict_to_kernel(p: &PairQL, ell: &LinearForm) -> Result<Restriction> {
    let d = p.dim();
    if ell.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: ell.dim() });
    }
    if ell.is_zero() {
        return Err(Error::ZeroForm);
    }
    let field = p.field();
    let (basis, integer_basis) = match ell.rational_coeffs() {
        Some(r) => {
            let ints = clear_denominators(&r);
            let ib = integer_kernel_basis(&ints);
            (ib.iter().map(|v| int_vector(field, v)).collect(), Some(ib))
        }
        None => (field_kernel_basis(ell), None),
    };
    let pair = PairQL {
        q: p.q.restrict(&basis),
        l: p.l.restrict(&basis),
        float_input: p.float_input,
    };
    Ok(Restriction { basis, integer_basis, pair })
}

/// Basis `e_i − (ℓ_i/ℓ_k)·e_k` (i ≠ k) of the kernel of a nonzero form.
pub(crate) fn field_kernel_basis(ell: &LinearForm) -> Vec<Vec<FieldScalar>> {
    let field = ell.field();
    let c = ell.coeffs();
    let d = c.len();
    let k = argmax_first((0..d).filter(|&i| !c[i].is_zero()), |i| c[i].to_f64().abs()).expect("nonzero form");
    let inv = c[k].checked_inv().expect("nonzero pivot");
    (0..d)
        .filter(|&i| i != k)
        .map(|i| {
            let mut v = vec![FieldScalar::zero(field); d];
            v[i] = FieldScalar::one(field);
            v[k] = -(&c[i] * &inv);
            v
        })
        .collect()
}

/// Smallest integer multiple of a rational vector, with gcd 1.
pub fn clear_denominators(r: &[BigRational]) -> Vec<BigInt> {
    let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = r.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// `gcd(x) = 1`.
pub fn is_primitive(x: &[i64]) -> Result<bool> {
    if x.iter().all(|&v| v == 0) {
        return Err(Error::ZeroVector);
    }
    Ok(x.iter().fold(0i64, |g, &v| g.gcd(&v)) == 1)
}
