//! Canonical forms of pairs under `(Q, L) ~ (λ·Q∘g, μ·L∘g)` with `g ∈ SL(d)`.
//!
//! Type I pairs are equivalent to `(x_1² + … + x_s² − x_{s+1}² − … − x_d², x_d)`
//! with `1 ≤ s ≤ d`; type II pairs to
//! `(x_1² + … + x_s² − x_{s+1}² − … − x_{d−2}² + x_{d−1}x_d, x_d)` with
//! `0 ≤ s ≤ (d−2)/2`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rational_nth_root, FieldScalar, NumberField};
use crate::forms::{
    add_basis_vector, argmax_first, diagonalize_leading, restrict_to_kernel, scale_basis, LinearForm, PairQL,
    QuadraticForm, Signature,
};
use crate::linalg::{self, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairKind {
    TypeI,
    TypeII,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalLabel {
    pub kind: PairKind,
    pub s: usize,
    pub dim: usize,
}

impl fmt::Display for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            PairKind::TypeI => "TypeI",
            PairKind::TypeII => "TypeII",
        };
        write!(f, "{k} s={}", self.s)
    }
}

impl CanonicalLabel {
    /// Gram matrix of the canonical quadratic form.
    pub fn canonical_gram(&self, field: &Arc<NumberField>) -> Matrix<FieldScalar> {
        let d = self.dim;
        let mut g = linalg::identity(d, &FieldScalar::zero(field));
        let squares = match self.kind {
            PairKind::TypeI => d,
            PairKind::TypeII => d - 2,
        };
        for (i, row) in g.iter_mut().enumerate().take(squares).skip(self.s) {
            row[i] = FieldScalar::from_int(field, -1);
        }
        if self.kind == PairKind::TypeII {
            let half = FieldScalar::from_ratio(field, 1, 2);
            g[d - 2][d - 2] = FieldScalar::zero(field);
            g[d - 1][d - 1] = FieldScalar::zero(field);
            g[d - 2][d - 1] = half.clone();
            g[d - 1][d - 2] = half;
        }
        g
    }

    pub fn canonical_pair(&self, field: &Arc<NumberField>) -> PairQL {
        let q = QuadraticForm::from_gram(field, self.canonical_gram(field)).expect("symmetric");
        let l = LinearForm::coordinate(field, self.dim, self.dim - 1);
        PairQL::new(q, l).expect("matching dimensions")
    }
}

/// `(g, λ, μ)` with `Q(x) = λ·Q_c(g·x)` and `L(x) = μ·L_c(g·x)`.
#[derive(Debug, Clone)]
pub enum Transformation {
    Exact { g: Matrix<FieldScalar>, lambda: FieldScalar, mu: FieldScalar },
    /// Used when a needed square root or `d`-th root lies outside the field.
    Float { g: Vec<Vec<f64>>, lambda: f64, mu: f64 },
}

impl Transformation {
    pub fn is_exact(&self) -> bool {
        matches!(self, Transformation::Exact { .. })
    }

    pub fn g_f64(&self) -> Vec<Vec<f64>> {
        match self {
            Transformation::Exact { g, .. } => linalg::to_f64_matrix(g),
            Transformation::Float { g, .. } => g.clone(),
        }
    }

    pub fn lambda_f64(&self) -> f64 {
        match self {
            Transformation::Exact { lambda, .. } => lambda.to_f64(),
            Transformation::Float { lambda, .. } => *lambda,
        }
    }

    pub fn mu_f64(&self) -> f64 {
        match self {
            Transformation::Exact { mu, .. } => mu.to_f64(),
            Transformation::Float { mu, .. } => *mu,
        }
    }

    pub fn det_f64(&self) -> f64 {
        det_f64(&self.g_f64())
    }

    /// Exact check of the witness identity; `None` for float witnesses.
    pub fn holds_exactly(&self, p: &PairQL, label: &CanonicalLabel) -> Option<bool> {
        let Transformation::Exact { g, lambda, mu } = self else { return None };
        let c = label.canonical_pair(p.field());
        let q_ok = c.q.pullback(g).scaled(lambda).gram() == p.q.gram();
        let l_ok = c.l.pullback(g).scaled(mu).coeffs() == p.l.coeffs();
        let det_ok = linalg::determinant(g, &FieldScalar::zero(p.field())).is_one();
        Some(q_ok && l_ok && det_ok)
    }

    /// Largest entry of `Gram(Q) − λ·gᵀ·Gram(Q_c)·g` and `c − μ·gᵀ·e_d`,
    /// relative to the largest input entry (at least 1).
    pub fn residual(&self, p: &PairQL, label: &CanonicalLabel) -> f64 {
        let g = self.g_f64();
        let (lambda, mu) = (self.lambda_f64(), self.mu_f64());
        let d = p.dim();
        let qc = linalg::to_f64_matrix(&label.canonical_gram(&NumberField::rational()));
        let a = linalg::to_f64_matrix(p.q.gram());
        let c: Vec<f64> = p.l.coeffs().iter().map(|x| x.to_f64()).collect();
        let mut scale = 1.0f64;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut v = 0.0;
                for k in 0..d {
                    for l in 0..d {
                        v += g[k][i] * qc[k][l] * g[l][j];
                    }
                }
                scale = scale.max(a[i][j].abs());
                worst = worst.max((a[i][j] - lambda * v).abs());
            }
            scale = scale.max(c[i].abs());
            worst = worst.max((c[i] - mu * g[d - 1][i]).abs());
        }
        worst / scale
    }
}

fn check_pair(p: &PairQL) -> Result<()> {
    if p.l.is_zero() {
        return Err(Error::ZeroL);
    }
    if !p.q.is_nondegenerate() {
        return Err(Error::DegenerateQ);
    }
    Ok(())
}

/// Signatures of `Q` and of `Q|_{L=0}`.
pub fn signature_invariants(p: &PairQL) -> Result<(Signature, Signature)> {
    check_pair(p)?;
    let r = restrict_to_kernel(p, &p.l)?;
    Ok((p.q.signature(), r.pair.q.signature()))
}

/// Type and normalized parameter, from determinants and signatures only.
pub fn classify_type(p: &PairQL) -> Result<CanonicalLabel> {
    let (sq, sr) = signature_invariants(p)?;
    label_from_signatures(p.dim(), sq, sr)
}

fn label_from_signatures(d: usize, sq: Signature, sr: Signature) -> Result<CanonicalLabel> {
    if sr.zero == 0 {
        // the direction complementing {L = 0} is negative exactly when the
        // positive indices agree
        let s = if sq.pos == sr.pos {
            if sq.pos >= 1 {
                sq.pos
            } else {
                d
            }
        } else if sq.neg == 0 {
            d
        } else {
            sq.neg
        };
        Ok(CanonicalLabel { kind: PairKind::TypeI, s, dim: d })
    } else if sr.zero == 1 {
        Ok(CanonicalLabel { kind: PairKind::TypeII, s: sr.pos.min(sr.neg), dim: d })
    } else {
        Err(Error::DegenerateQ)
    }
}

/// Label plus witness transformation.
///
/// Coordinates are chosen so that `L` becomes the last coordinate, the
/// complement is diagonalized, mixed terms with the last coordinate are
/// sheared away, and a surviving mixed term (type II) is normalized to
/// `x_{d−1}x_d`. Diagonal entries are rescaled to `±1` and the determinant
/// is normalized to 1.
pub fn canonicalize(p: &PairQL) -> Result<(CanonicalLabel, Transformation)> {
    check_pair(p)?;
    let d = p.dim();
    let field = p.field();
    let zero = FieldScalar::zero(field);
    let c = p.l.coeffs();
    let last = d - 1;

    let k = argmax_first((0..d).filter(|&i| !c[i].is_zero()), |i| c[i].to_f64().abs()).expect("nonzero L");
    let mut m: Matrix<FieldScalar> = (0..d)
        .filter(|&i| i != k)
        .map(|i| {
            let mut row = vec![zero.clone(); d];
            row[i] = FieldScalar::one(field);
            row
        })
        .collect();
    m.push(c.to_vec());
    let m_inv = linalg::inverse(&m, &zero).expect("rows complete a basis");
    let mut a = linalg::congruence(p.q.gram(), &m_inv);
    let mut s = linalg::identity(d, &zero);

    diagonalize_leading(&mut a, &mut s, last, field);
    for i in 0..last {
        if !a[i][i].is_zero() && !a[i][last].is_zero() {
            let f = -(a[i][last].checked_div(&a[i][i])?);
            add_basis_vector(&mut a, &mut s, last, i, &f);
        }
    }
    let zeros: Vec<usize> = (0..last).filter(|&i| a[i][i].is_zero()).collect();

    let (label, eps, hyperbolic) = match zeros.as_slice() {
        [] => {
            if a[last][last].is_zero() {
                return Err(Error::DegenerateQ);
            }
            let rest: Vec<usize> = (0..last).collect();
            let (pos, neg) = (count_signs(&a, &rest, 1), count_signs(&a, &rest, -1));
            let (eps, s_label) = if a[last][last].sign() < 0 {
                if pos >= 1 {
                    (1, pos)
                } else {
                    (-1, d)
                }
            } else if neg == 0 {
                (1, d)
            } else {
                (-1, neg)
            };
            (CanonicalLabel { kind: PairKind::TypeI, s: s_label, dim: d }, eps, None)
        }
        [j] => {
            let j = *j;
            let h = a[j][last].clone();
            if h.is_zero() {
                return Err(Error::DegenerateQ);
            }
            let two_h = &h + &h;
            if !a[last][last].is_zero() {
                let f = -(a[last][last].checked_div(&two_h)?);
                add_basis_vector(&mut a, &mut s, last, j, &f);
            }
            let rest: Vec<usize> = (0..last).filter(|&i| i != j).collect();
            let (pos, neg) = (count_signs(&a, &rest, 1), count_signs(&a, &rest, -1));
            let eps: i64 = if pos > neg { -1 } else { 1 };
            let f = FieldScalar::from_int(field, eps).checked_div(&two_h)?;
            scale_basis(&mut a, &mut s, j, &f);
            (CanonicalLabel { kind: PairKind::TypeII, s: pos.min(neg), dim: d }, eps, Some(j))
        }
        _ => return Err(Error::DegenerateQ),
    };

    // canonical coordinate order and the squared coordinates' scale factors
    let squares: Vec<usize> = match hyperbolic {
        None => (0..last).collect(),
        Some(j) => (0..last).filter(|&i| i != j).collect(),
    };
    let positive = |i: &usize| a[*i][*i].sign() * eps as i8 > 0;
    let mut order: Vec<usize> = squares.iter().copied().filter(positive).collect();
    order.extend(squares.iter().copied().filter(|i| !positive(i)));
    if let Some(j) = hyperbolic {
        order.push(j);
    }
    order.push(last);
    let scaled: Vec<bool> = (0..d).map(|i| hyperbolic.is_none() || squares.contains(&i)).collect();

    let s_inv = linalg::inverse(&s, &zero).expect("basis change is invertible");
    let t = linalg::mat_mul(&s_inv, &m);
    let det_t = linalg::determinant(&t, &zero);
    let perm_sign = permutation_sign(&order);
    let negative_det = det_t.sign() * perm_sign < 0;
    let odd = d % 2 == 1;
    let flip_lambda = negative_det && !odd && hyperbolic.is_some() && d == 2;

    let abs_diag: Vec<FieldScalar> = (0..d).map(|i| a[i][i].abs()).collect();
    let exact_roots: Option<Vec<FieldScalar>> = (0..d)
        .map(|i| if scaled[i] { abs_diag[i].sqrt_exact() } else { Some(FieldScalar::one(field)) })
        .collect();

    if let Some(roots) = exact_roots {
        let mut g: Matrix<FieldScalar> = order.iter().map(|&i| t[i].iter().map(|x| x * &roots[i]).collect()).collect();
        let mut lambda = FieldScalar::from_int(field, eps);
        let mut mu = match hyperbolic {
            None => roots[last].checked_inv()?,
            Some(_) => FieldScalar::one(field),
        };
        if negative_det {
            apply_orientation_fix(&mut g, &mut mu, odd, |row| row.iter_mut().for_each(|x| *x = -&*x), |m| -&*m);
            if flip_lambda {
                lambda = -&lambda;
            }
        }
        let det = linalg::determinant(&g, &zero);
        if let Some(root) = det.is_rational().and_then(|q| rational_nth_root(&q, d as u32)) {
            let tq = FieldScalar::from_rational(field, root);
            let t_inv = tq.checked_inv()?;
            for row in g.iter_mut() {
                for x in row.iter_mut() {
                    *x = &*x * &t_inv;
                }
            }
            lambda = &lambda * &(&tq * &tq);
            mu = &mu * &tq;
            return Ok((label, Transformation::Exact { g, lambda, mu }));
        }
    }

    // float witness from the exact pieces
    let roots: Vec<f64> = (0..d).map(|i| if scaled[i] { abs_diag[i].to_f64().sqrt() } else { 1.0 }).collect();
    let t_f = linalg::to_f64_matrix(&t);
    let mut g: Vec<Vec<f64>> = order.iter().map(|&i| t_f[i].iter().map(|x| x * roots[i]).collect()).collect();
    let mut lambda = eps as f64;
    let mut mu = if hyperbolic.is_none() { 1.0 / roots[last] } else { 1.0 };
    if negative_det {
        apply_orientation_fix(&mut g, &mut mu, odd, |row| row.iter_mut().for_each(|x| *x = -*x), |m| -*m);
        if flip_lambda {
            lambda = -lambda;
        }
    }
    let det_abs = det_t.to_f64().abs() * order.iter().map(|&i| roots[i]).product::<f64>();
    let tf = det_abs.powf(1.0 / d as f64);
    for row in g.iter_mut() {
        for x in row.iter_mut() {
            *x /= tf;
        }
    }
    Ok((label, Transformation::Float { g, lambda: lambda * tf * tf, mu: mu * tf }))
}

fn count_signs(a: &Matrix<FieldScalar>, idx: &[usize], sign: i8) -> usize {
    idx.iter().filter(|&&i| a[i][i].sign() == sign).count()
}

/// Restores `det g > 0` using a symmetry of the canonical pair: `g → −g`
/// (which negates `L_c`) in odd dimension, otherwise `x_1 → −x_1`.
fn apply_orientation_fix<T>(
    g: &mut [Vec<T>],
    mu: &mut T,
    odd: bool,
    negate_row: impl Fn(&mut Vec<T>),
    negate: impl Fn(&T) -> T,
) {
    if odd {
        for row in g.iter_mut() {
            negate_row(row);
        }
        *mu = negate(mu);
    } else {
        negate_row(&mut g[0]);
    }
}

fn permutation_sign(order: &[usize]) -> i8 {
    let mut sign = 1;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn det_f64(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap_or(k);
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    det
}

/// Solves `m·x = b` by partial pivoting; `None` if singular.
pub(crate) fn solve_f64(m: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.iter().zip(b).map(|(r, &v)| r.iter().copied().chain([v]).collect()).collect();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k] == 0.0 {
            return None;
        }
        a.swap(p, k);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..=n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (a[k][n] - s) / a[k][k];
    }
    Some(x)
}

/// Whether two pairs are equivalent.
///
/// Labels are compared; the signature bookkeeping (signatures of `Q` and of
/// `Q|_{L=0}`, matched up to one simultaneous sign flip) is computed as well
/// and must agree with the labels.
pub fn equivalent(p1: &PairQL, p2: &PairQL) -> Result<bool> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch { expected: p1.dim(), got: p2.dim() });
    }
    let (q1, r1) = signature_invariants(p1)?;
    let (q2, r2) = signature_invariants(p2)?;
    let labels = label_from_signatures(p1.dim(), q1, r1)? == label_from_signatures(p2.dim(), q2, r2)?;
    let bookkeeping = (q1, r1) == (q2, r2) || (q1, r1) == (q2.flipped(), r2.flipped());
    debug_assert_eq!(labels, bookkeeping, "label and signature criteria disagree");
    Ok(labels)
}

/// A real vector with `(Q(x), L(x)) ≈ target`, relative residuals ≤ 1e−9.
pub fn solve_real(p: &PairQL, target: (f64, f64)) -> Result<Vec<f64>> {
    let (_, sr) = signature_invariants(p)?;
    if !sr.is_indefinite() {
        return Err(Error::RestrictionNotIndefinite);
    }
    let (label, w) = canonicalize(p)?;
    let d = p.dim();
    let (a, b) = target;
    let xd = b / w.mu_f64();
    let big_a = a / w.lambda_f64();
    let mut xc = vec![0.0; d];
    xc[d - 1] = xd;
    let rem = match label.kind {
        PairKind::TypeI => big_a + xd * xd,
        PairKind::TypeII => big_a,
    };
    // one positive (index 0) and one negative (index s) canonical square
    let tt = (-rem).max(0.0) + 1.0;
    xc[0] = (rem + tt).sqrt();
    xc[label.s] = tt.sqrt();
    let x0 = solve_f64(&w.g_f64(), &xc).ok_or(Error::DegenerateQ)?;
    Ok(newton_refine(p, x0, target))
}

fn newton_refine(p: &PairQL, mut x: Vec<f64>, (a, b): (f64, f64)) -> Vec<f64> {
    let g = linalg::to_f64_matrix(p.q.gram());
    let c: Vec<f64> = p.l.coeffs().iter().map(|v| v.to_f64()).collect();
    let d = x.len();
    let eval = |x: &[f64]| -> (f64, f64, Vec<f64>) {
        let gx: Vec<f64> = g.iter().map(|row| row.iter().zip(x).map(|(u, v)| u * v).sum()).collect();
        let q: f64 = gx.iter().zip(x).map(|(u, v)| u * v).sum();
        let l: f64 = c.iter().zip(x).map(|(u, v)| u * v).sum();
        (q, l, gx)
    };
    let ok = |q: f64, l: f64| (q - a).abs() <= 1e-10 * a.abs().max(1.0) && (l - b).abs() <= 1e-10 * b.abs().max(1.0);
    for _ in 0..8 {
        let (q, l, gx) = eval(&x);
        if ok(q, l) {
            break;
        }
        // minimum-norm Newton step for the 2 × d system
        let j0: Vec<f64> = gx.iter().map(|v| 2.0 * v).collect();
        let (f0, f1) = (q - a, l - b);
        let m00: f64 = j0.iter().map(|v| v * v).sum();
        let m01: f64 = j0.iter().zip(&c).map(|(u, v)| u * v).sum();
        let m11: f64 = c.iter().map(|v| v * v).sum();
        let det = m00 * m11 - m01 * m01;
        if det.abs() <= 1e-300 {
            break;
        }
        let y0 = (m11 * f0 - m01 * f1) / det;
        let y1 = (m00 * f1 - m01 * f0) / det;
        for i in 0..d {
            x[i] -= j0[i] * y0 + c[i] * y1;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn rat() -> Arc<NumberField> {
        NumberField::rational()
    }

    #[test]
    fn labels_of_standard_pairs() {
        let l = classify_type(&catalog::type_one_canonical()).unwrap();
        assert_eq!((l.kind, l.s), (PairKind::TypeI, 2));
        let l = classify_type(&catalog::type_two_canonical()).unwrap();
        assert_eq!((l.kind, l.s), (PairKind::TypeII, 1));
        let l = classify_type(&catalog::definite_pencil_pair()).unwrap();
        assert_eq!((l.kind, l.s), (PairKind::TypeI, 3));
    }

    #[test]
    fn canonical_input_gives_identity() {
        let p = catalog::type_one_canonical();
        let (label, w) = canonicalize(&p).unwrap();
        assert_eq!((label.kind, label.s), (PairKind::TypeI, 2));
        let Transformation::Exact { g, lambda, mu } = &w else { panic!("expected exact witness") };
        assert_eq!(*g, linalg::identity(4, &FieldScalar::zero(p.field())));
        assert!(lambda.is_one() && mu.is_one());
    }

    #[test]
    fn hyperbolic_plane() {
        let f = rat();
        let q = QuadraticForm::diagonal_ints(&f, &[1, -1]);
        let p = PairQL::new(q, LinearForm::from_ints(&f, &[1, 1])).unwrap();
        let (label, w) = canonicalize(&p).unwrap();
        assert_eq!((label.kind, label.s), (PairKind::TypeII, 0));
        assert!(w.residual(&p, &label) < 1e-12);
        assert!((w.det_f64() - 1.0).abs() < 1e-12);
        // x1² − x2² = 2·((x1 − x2)/√2)·((x1 + x2)/√2)
        let (lambda, mu) = (w.lambda_f64(), w.mu_f64());
        assert!((lambda.abs() - 2.0).abs() < 1e-12, "{lambda}");
        assert!((mu.abs() - 2f64.sqrt()).abs() < 1e-12, "{mu}");
    }

    #[test]
    fn type_two_witness() {
        let p = catalog::type_two_canonical();
        let (label, w) = canonicalize(&p).unwrap();
        assert_eq!((label.kind, label.s), (PairKind::TypeII, 1));
        assert!(w.residual(&p, &label) <= 1e-9);
        if let Some(ok) = w.holds_exactly(&p, &label) {
            assert!(ok);
        }
    }

    #[test]
    fn witness_over_number_field() {
        let p = catalog::e1();
        let (label, w) = canonicalize(&p).unwrap();
        assert_eq!(label, classify_type(&p).unwrap());
        assert!(w.residual(&p, &label) <= 1e-9);
        assert!((w.det_f64() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn exact_witness_with_rational_roots() {
        // 4x1² + 4x2² − 4x3² with L = x3: det 8 has the rational cube root 2
        let f = rat();
        let p = PairQL::new(QuadraticForm::diagonal_ints(&f, &[4, 4, -4]), LinearForm::from_ints(&f, &[0, 0, 1])).unwrap();
        let (label, w) = canonicalize(&p).unwrap();
        assert!(w.is_exact());
        assert_eq!(w.holds_exactly(&p, &label), Some(true));
        assert_eq!((w.lambda_f64(), w.mu_f64()), (4.0, 1.0));
    }

    #[test]
    fn degenerate_inputs() {
        let f = rat();
        let p = PairQL::new(QuadraticForm::diagonal_ints(&f, &[1, 0, -1]), LinearForm::coordinate(&f, 3, 2)).unwrap();
        assert_eq!(classify_type(&p).unwrap_err(), Error::DegenerateQ);
        let p = PairQL::new(QuadraticForm::diagonal_ints(&f, &[1, 1, -1]), LinearForm::from_ints(&f, &[0, 0, 0])).unwrap();
        assert_eq!(canonicalize(&p).unwrap_err(), Error::ZeroL);
    }

    #[test]
    fn equivalence_examples() {
        let f = rat();
        assert!(!equivalent(&catalog::type_one_canonical(), &catalog::type_two_canonical()).unwrap());
        let neg = PairQL::new(QuadraticForm::diagonal_ints(&f, &[-1, -1, -1, -1]), LinearForm::coordinate(&f, 4, 3)).unwrap();
        let pos = PairQL::new(QuadraticForm::diagonal_ints(&f, &[1, 1, 1, 1]), LinearForm::coordinate(&f, 4, 3)).unwrap();
        assert!(equivalent(&neg, &pos).unwrap());
        // s = 1 and s = 3 in d = 4 are distinct
        let s1 = PairQL::new(QuadraticForm::diagonal_ints(&f, &[1, -1, -1, -1]), LinearForm::coordinate(&f, 4, 3)).unwrap();
        let s3 = PairQL::new(QuadraticForm::diagonal_ints(&f, &[1, 1, 1, -1]), LinearForm::coordinate(&f, 4, 3)).unwrap();
        assert!(!equivalent(&s1, &s3).unwrap());
    }

    #[test]
    fn solve_real_examples() {
        let p = catalog::type_one_canonical();
        for target in [(5.0, 2.0), (-7.0, 0.0), (0.0, 0.0), (1e3, -40.0)] {
            let x = solve_real(&p, target).unwrap();
            let (q, l) = eval_f64(&p, &x);
            assert!((q - target.0).abs() <= 1e-9 * target.0.abs().max(1.0), "{target:?} {q}");
            assert!((l - target.1).abs() <= 1e-9 * target.1.abs().max(1.0), "{target:?} {l}");
        }
        let x = solve_real(&catalog::e1(), (0.0, 0.0)).unwrap();
        assert!(x.iter().any(|v| v.abs() > 0.5));
        assert_eq!(
            solve_real(&catalog::definite_pencil_pair(), (1.0, 1.0)).unwrap_err(),
            Error::RestrictionNotIndefinite
        );
    }

    fn eval_f64(p: &PairQL, x: &[f64]) -> (f64, f64) {
        let g = linalg::to_f64_matrix(p.q.gram());
        let mut q = 0.0;
        for i in 0..x.len() {
            for j in 0..x.len() {
                q += x[i] * g[i][j] * x[j];
            }
        }
        let l = p.l.coeffs().iter().zip(x).map(|(c, v)| c.to_f64() * v).sum();
        (q, l)
    }
}
