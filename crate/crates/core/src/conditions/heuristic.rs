//! Float-mode test for a rational vector in `span(u, v)` by lattice
//! reduction on high-precision approximations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::lll::lll_reduce;

pub(crate) struct Hit {
    pub r: Vec<BigInt>,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub residual: f64,
}

fn pow10(e: u32) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(10), e as usize))
}

fn max_abs(x: &[BigRational]) -> BigRational {
    x.iter().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero)
}

/// Looks for a primitive integer `r` with `‖r‖∞ ≤ max_height` and
/// `α·u + β·v = r` up to `10^(−digits/2)` relative error.
///
/// Each entry outside two pivot entries is a fixed real combination of the
/// pivot entries on the span; those linear relations, scaled by
/// `10^(3·digits/4)` and rounded, are appended to the identity lattice and
/// small reduced vectors become candidates.
pub(crate) fn detect(u: &[BigRational], v: &[BigRational], digits: u32, max_height: &BigInt) -> Option<Hit> {
    let m = u.len();
    let su = max_abs(u);
    if su.is_zero() {
        return None;
    }
    let sv = max_abs(v);
    let uu: Vec<BigRational> = u.iter().map(|x| x / &su).collect();
    let vv: Vec<BigRational> = if sv.is_zero() { v.to_vec() } else { v.iter().map(|x| x / &sv).collect() };
    let tol = pow10(digits / 2).recip();

    // coefficient rows: r_k = Σ_p coef[k][p]·r_{pivot p}
    let mut best = (BigRational::zero(), 0, 0);
    for i in 0..m {
        for j in i + 1..m {
            let minor = (&uu[i] * &vv[j] - &uu[j] * &vv[i]).abs();
            if minor > best.0 {
                best = (minor, i, j);
            }
        }
    }
    let (pivots, coef): (Vec<usize>, Vec<Vec<BigRational>>) = if best.0 <= tol {
        let i = (0..m).max_by(|&a, &b| uu[a].abs().cmp(&uu[b].abs())).expect("nonempty");
        (vec![i], (0..m).map(|k| vec![&uu[k] / &uu[i]]).collect())
    } else {
        let (_, i, j) = best;
        let det = &uu[i] * &vv[j] - &uu[j] * &vv[i];
        let rows = (0..m)
            .map(|k| {
                vec![
                    (&uu[k] * &vv[j] - &vv[k] * &uu[j]) / &det,
                    (&vv[k] * &uu[i] - &uu[k] * &vv[i]) / &det,
                ]
            })
            .collect();
        (vec![i, j], rows)
    };
    let others: Vec<usize> = (0..m).filter(|k| !pivots.contains(k)).collect();
    if others.is_empty() {
        return None;
    }

    let scale = pow10(digits * 3 / 4);
    let basis: Vec<Vec<BigInt>> = (0..m)
        .map(|t| {
            let mut row: Vec<BigInt> = (0..m).map(|c| if c == t { BigInt::one() } else { BigInt::zero() }).collect();
            for &k in &others {
                let w = if t == k {
                    BigRational::one()
                } else if let Some(pi) = pivots.iter().position(|&p| p == t) {
                    -coef[k][pi].clone()
                } else {
                    BigRational::zero()
                };
                row.push((&w * &scale).round().to_integer());
            }
            row
        })
        .collect();

    for row in lll_reduce(basis) {
        let mut r: Vec<BigInt> = row[..m].to_vec();
        if r.iter().all(|x| x.is_zero()) {
            continue;
        }
        let h = r.iter().map(|x| x.abs()).max().expect("nonempty");
        if &h > max_height {
            continue;
        }
        if let Some(first) = r.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                r.iter_mut().for_each(|x| *x = -&*x);
            }
        }
        let rq: Vec<BigRational> = r.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let hq = BigRational::from_integer(h);
        let mut worst = BigRational::zero();
        for &k in &others {
            let pred = pivots.iter().enumerate().fold(BigRational::zero(), |acc, (pi, &p)| acc + &coef[k][pi] * &rq[p]);
            worst = worst.max((&rq[k] - pred).abs() / &hq);
        }
        if worst > tol {
            continue;
        }
        let (alpha_n, beta_n) = if pivots.len() == 1 {
            (&rq[pivots[0]] / &uu[pivots[0]], BigRational::zero())
        } else {
            let (i, j) = (pivots[0], pivots[1]);
            let det = &uu[i] * &vv[j] - &uu[j] * &vv[i];
            (
                (&vv[j] * &rq[i] - &vv[i] * &rq[j]) / &det,
                (&uu[i] * &rq[j] - &uu[j] * &rq[i]) / &det,
            )
        };
        let beta = if sv.is_zero() { BigRational::zero() } else { beta_n / &sv };
        return Some(Hit { r, alpha: alpha_n / &su, beta, residual: worst.to_f64().unwrap_or(0.0) });
    }
    None
}
