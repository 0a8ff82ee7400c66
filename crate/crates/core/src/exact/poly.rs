//! Dense univariate polynomials over the rationals, lowest degree first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type Poly = Vec<BigRational>;

pub(crate) fn from_ints(c: &[BigInt]) -> Poly {
    let mut p: Poly = c.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    trim(&mut p);
    p
}

pub(crate) fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree of a trimmed polynomial; `None` for the zero polynomial.
pub(crate) fn degree(p: &Poly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub(crate) fn eval(p: &Poly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub(crate) fn derivative(p: &Poly) -> Poly {
    let mut d: Poly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
        .collect();
    trim(&mut d);
    d
}

pub(crate) fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.get(k).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(k).cloned().unwrap_or_else(BigRational::zero);
        out.push(x - y);
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Euclidean division; panics if `b` is zero.
pub(crate) fn div_rem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] / &lead;
        let shift = dr - db;
        for (k, c) in b.iter().enumerate() {
            r[shift + k] -= &f * c;
        }
        q[shift] = f;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &Poly, b: &Poly) -> Poly {
    div_rem(a, b).1
}

fn monic(mut p: Poly) -> Poly {
    if let Some(d) = degree(&p) {
        let lead = p[d].clone();
        for c in p.iter_mut() {
            *c = &*c / &lead;
        }
    }
    p
}

pub(crate) fn gcd(a: &Poly, b: &Poly) -> Poly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

/// Returns `(g, s)` with `s·a ≡ g (mod m)` and `g = gcd(a, m)` monic.
pub(crate) fn gcd_ext(a: &Poly, m: &Poly) -> (Poly, Poly) {
    let mut r0 = m.clone();
    let mut r1 = a.clone();
    trim(&mut r1);
    let mut s0: Poly = Vec::new();
    let mut s1: Poly = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    let d = degree(&r0).unwrap_or(0);
    let lead = r0[d].clone();
    let g = monic(r0);
    let s = s0.into_iter().map(|c| c / &lead).collect();
    (g, s)
}

/// Sign of a rational: -1, 0 or 1.
pub(crate) fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm sequence of a squarefree polynomial.
pub(crate) fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let s = sign(&eval(p, x));
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the half-open interval `(lo, hi]`.
pub(crate) fn count_roots(seq: &[Poly], lo: &BigRational, hi: &BigRational) -> usize {
    sign_changes(seq, lo) - sign_changes(seq, hi)
}

/// Cauchy bound: every real root lies in `(-bound, bound)`.
pub(crate) fn root_bound(p: &Poly) -> BigRational {
    let d = degree(p).expect("nonzero polynomial");
    let lead = p[d].abs();
    let mut m = BigRational::zero();
    for c in &p[..d] {
        let r = c.abs() / &lead;
        if r > m {
            m = r;
        }
    }
    m + BigRational::one()
}
