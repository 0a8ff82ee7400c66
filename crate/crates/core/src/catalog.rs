//! Named example pairs used by tests, benchmarks and the CLI documentation.

use std::sync::Arc;

use rand::Rng;

use crate::exact::{FieldScalar, NumberField};
use crate::forms::{LinearForm, PairQL, QuadraticForm};
use crate::linalg::{self, Matrix};

fn sqrt2() -> Arc<NumberField> {
    NumberField::quadratic("t", 2).expect("x^2 - 2 is irreducible")
}

/// `(x1² + x2² − x3² − x4², x4)`.
pub fn type_one_canonical() -> PairQL {
    let f = NumberField::rational();
    PairQL::new(QuadraticForm::diagonal_ints(&f, &[1, 1, -1, -1]), LinearForm::coordinate(&f, 4, 3)).unwrap()
}

/// `(x1x4 − x2x3, x4)`.
pub fn type_two_canonical() -> PairQL {
    let f = NumberField::rational();
    let q = QuadraticForm::from_coefficients(
        &f,
        4,
        &[((0, 3), FieldScalar::from_int(&f, 1)), ((1, 2), FieldScalar::from_int(&f, -1))],
    )
    .unwrap();
    PairQL::new(q, LinearForm::coordinate(&f, 4, 3)).unwrap()
}

/// `(x1² + x2² + x3² − x4², x4)`: `Q + 2L²` is positive definite.
pub fn definite_pencil_pair() -> PairQL {
    let f = NumberField::rational();
    PairQL::new(QuadraticForm::diagonal_ints(&f, &[1, 1, 1, -1]), LinearForm::coordinate(&f, 4, 3)).unwrap()
}

/// `(x1² + x2² − x3² + x4² + … + x_{d−1}² − √2·x_d², x_{d−1} + √2·x_d)` in
/// dimension `d ≥ 4`, over `Q(√2)` with generator `t`.
pub fn sqrt2_family(d: usize) -> PairQL {
    assert!(d >= 4, "family starts in dimension 4");
    let f = sqrt2();
    let t = FieldScalar::generator(&f);
    let one = FieldScalar::one(&f);
    let zero = FieldScalar::zero(&f);
    let mut diag = vec![zero.clone(); d];
    diag[0] = one.clone();
    diag[1] = one.clone();
    diag[2] = -&one;
    for x in diag.iter_mut().take(d - 1).skip(3) {
        *x = one.clone();
    }
    diag[d - 1] = -&t;
    let mut l = vec![zero; d];
    l[d - 2] = one;
    l[d - 1] = t;
    PairQL::new(QuadraticForm::diagonal(&f, &diag), LinearForm::new(&f, l).unwrap()).unwrap()
}

/// `(x1² + x2² − x3² − √2·x4², x3 + √2·x4)`.
pub fn e1() -> PairQL {
    sqrt2_family(4)
}

/// `(x1² + x2² − x3² + x4² − √2·x5², x4 + √2·x5)`.
pub fn e5() -> PairQL {
    sqrt2_family(5)
}

/// `(x1² + x2² − x3² + x4² + x5² − √2·x6², x5 + √2·x6)`.
pub fn e6() -> PairQL {
    sqrt2_family(6)
}

/// `(x1² + x2² − x3² − x4², x3 + √2·x4)`: `Q` itself is rational.
pub fn rational_q_irrational_l() -> PairQL {
    let f = sqrt2();
    let t = FieldScalar::generator(&f);
    let q = QuadraticForm::diagonal_ints(&f, &[1, 1, -1, -1]);
    let z = FieldScalar::zero(&f);
    let l = LinearForm::new(&f, vec![z.clone(), z, FieldScalar::one(&f), t]).unwrap();
    PairQL::new(q, l).unwrap()
}

/// A five-dimensional pair `(ℓ1² + ℓ2² + ℓ3² + ℓ4·ℓ5, ℓ5)` over `Q(2^(1/5))`
/// with `ℓ_k = x_{k+1} − θ·x_k` for `k = 1, 2, 3`, `ℓ5 = x5 − θ·x4` and
/// `ℓ4 = x1`.
///
/// The forms `ℓ1, ℓ2, ℓ3, ℓ5` all vanish at `(1, θ, θ², θ³, θ⁴)`, so their
/// span contains no nonzero rational form. Every rational hyperplane section
/// is then of type I with a definite restriction, and no reduction step can
/// keep the density hypotheses.
pub fn adversarial_d5() -> PairQL {
    let f = NumberField::new("t", &[-2, 0, 0, 0, 0, 1], 2f64.powf(0.2), None).expect("x^5 - 2 is irreducible");
    let th = FieldScalar::generator(&f);
    let one = FieldScalar::one(&f);
    let zero = FieldScalar::zero(&f);
    let shifted = |k: usize| {
        let mut v = vec![zero.clone(); 5];
        v[k + 1] = one.clone();
        v[k] = -&th;
        LinearForm::new(&f, v).unwrap()
    };
    let (l1, l2, l3, l5) = (shifted(0), shifted(1), shifted(2), shifted(3));
    let l4 = LinearForm::coordinate(&f, 5, 0);
    let mut q = QuadraticForm::square_of(&l1)
        .plus(&QuadraticForm::square_of(&l2))
        .plus(&QuadraticForm::square_of(&l3));
    // ℓ4·ℓ5 has Gram (a·bᵀ + b·aᵀ)/2
    let half = FieldScalar::from_ratio(&f, 1, 2);
    let gram = (0..5)
        .map(|i| {
            (0..5)
                .map(|j| {
                    let v = &(&l4.coeffs()[i] * &l5.coeffs()[j]) + &(&l5.coeffs()[i] * &l4.coeffs()[j]);
                    &v * &half
                })
                .collect()
        })
        .collect();
    q = q.plus(&QuadraticForm::from_gram(&f, gram).unwrap());
    PairQL::new(q, l5).unwrap()
}

/// Random pair over Q with integer polynomial coefficients in `[−r, r]`,
/// nondegenerate `Q` and nonzero `L`.
pub fn random_rational_pair<R: Rng>(rng: &mut R, d: usize, r: i64) -> PairQL {
    let f = NumberField::rational();
    loop {
        let mut coeffs = Vec::new();
        for i in 0..d {
            for j in i..d {
                coeffs.push(((i, j), FieldScalar::from_int(&f, rng.gen_range(-r..=r))));
            }
        }
        let q = QuadraticForm::from_coefficients(&f, d, &coeffs).expect("indices in range");
        let l: Vec<i64> = (0..d).map(|_| rng.gen_range(-r..=r)).collect();
        if !q.is_nondegenerate() || l.iter().all(|&c| c == 0) {
            continue;
        }
        return PairQL::new(q, LinearForm::from_ints(&f, &l)).expect("matching dimensions");
    }
}

/// Random matrix in `SL_d(Z)`: a product of elementary shears with entries
/// in `[−2, 2]`.
pub fn random_unimodular<R: Rng>(rng: &mut R, d: usize, field: &Arc<NumberField>) -> Matrix<FieldScalar> {
    let zero = FieldScalar::zero(field);
    let mut g = linalg::identity(d, &zero);
    if d < 2 {
        return g;
    }
    for _ in 0..3 * d {
        let i = rng.gen_range(0..d);
        let j = (i + rng.gen_range(1..d)) % d;
        let c = FieldScalar::from_int(field, rng.gen_range(-2..=2));
        let mut e = linalg::identity(d, &zero);
        e[i][j] = c;
        g = linalg::mat_mul(&g, &e);
    }
    g
}
