use num_rational::BigRational;
use num_traits::Zero;

use super::scalar::FieldScalar;
use crate::linalg;

/// A pair `(α, β)` with `α·u + β·v = r` rational and nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanWitness {
    pub alpha: FieldScalar,
    pub beta: FieldScalar,
    pub rational: Vec<BigRational>,
}

/// Searches the field for `(α, β) ≠ (0, 0)` such that `α·u + β·v` is a
/// nonzero rational vector.
///
/// Any real solution lies in the field generated by the entries, so the
/// search over the declared field is complete. Writing `α = Σ a_k θ^k` and
/// `β = Σ b_k θ^k`, the requirement that every θ^j-coordinate (j ≥ 1) of
/// every entry vanishes is a homogeneous rational system in `(a, b)`; the
/// witness is any nullspace vector whose constant coordinates are not all
/// zero.
pub fn rational_span_witness(u: &[FieldScalar], v: &[FieldScalar]) -> Option<SpanWitness> {
    assert_eq!(u.len(), v.len(), "entry vectors must have equal length");
    let proto = u.first().or(v.first())?;
    let field = proto.field().clone();
    if u.iter().chain(v).all(|x| x.is_zero()) {
        return None;
    }
    let zero = FieldScalar::zero(&field);
    let one = FieldScalar::one(&field);
    let rational_nonzero = |w: &[FieldScalar]| -> Option<Vec<BigRational>> {
        let r: Option<Vec<BigRational>> = w.iter().map(|x| x.is_rational()).collect();
        r.filter(|r| r.iter().any(|x| !x.is_zero()))
    };
    if let Some(r) = rational_nonzero(u) {
        return Some(SpanWitness { alpha: one, beta: zero, rational: r });
    }
    if let Some(r) = rational_nonzero(v) {
        return Some(SpanWitness { alpha: zero, beta: one, rational: r });
    }

    let n = field.degree();
    let theta = FieldScalar::generator(&field);
    let powers: Vec<FieldScalar> = (0..n).map(|k| theta.pow(k as u32)).collect();
    // columns: a_0..a_{n-1}, b_0..b_{n-1}; entry coordinates of θ^k·u_i, θ^k·v_i
    let contrib: Vec<Vec<Vec<BigRational>>> = u
        .iter()
        .zip(v)
        .map(|(ui, vi)| {
            let mut cols = Vec::with_capacity(2 * n);
            for p in &powers {
                cols.push((p * ui).coeffs().to_vec());
            }
            for p in &powers {
                cols.push((p * vi).coeffs().to_vec());
            }
            cols
        })
        .collect();
    let mut rows = Vec::new();
    for cols in &contrib {
        for j in 1..n {
            rows.push(cols.iter().map(|c| c[j].clone()).collect::<Vec<_>>());
        }
    }
    let basis = if rows.is_empty() {
        linalg::identity(2 * n, &BigRational::zero())
    } else {
        linalg::nullspace(&rows, 2 * n, &BigRational::zero())
    };
    for w in basis {
        let r: Vec<BigRational> = contrib
            .iter()
            .map(|cols| {
                cols.iter()
                    .zip(&w)
                    .fold(BigRational::zero(), |acc, (c, x)| acc + &c[0] * x)
            })
            .collect();
        if r.iter().all(|x| x.is_zero()) {
            continue;
        }
        let alpha = FieldScalar::new(&field, w[..n].to_vec());
        let beta = FieldScalar::new(&field, w[n..].to_vec());
        return Some(SpanWitness { alpha, beta, rational: r });
    }
    None
}
