use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// LLL reduction (δ = 3/4) of linearly independent integer row vectors,
/// with exact rational Gram–Schmidt data updated incrementally.
pub(crate) fn lll_reduce(mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let to_q = |x: &[BigInt]| -> Vec<BigRational> { x.iter().map(|v| BigRational::from_integer(v.clone())).collect() };
    let qdot = |x: &[BigRational], y: &[BigRational]| -> BigRational {
        x.iter().zip(y).fold(BigRational::zero(), |acc, (a, c)| acc + a * c)
    };

    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut bb = vec![BigRational::zero(); n];
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for i in 0..n {
        let bi = to_q(&b[i]);
        let mut v = bi.clone();
        for j in 0..i {
            mu[i][j] = qdot(&bi, &star[j]) / &bb[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * s;
            }
        }
        bb[i] = qdot(&v, &v);
        star.push(v);
    }
    drop(star);

    let half = BigRational::new(1.into(), 2.into());
    let delta = BigRational::new(3.into(), 4.into());
    let reduce = |b: &mut Vec<Vec<BigInt>>, mu: &mut Vec<Vec<BigRational>>, k: usize, l: usize| {
        if mu[k][l].abs() <= half {
            return;
        }
        let q = mu[k][l].round().to_integer();
        let (head, tail) = b.split_at_mut(k);
        for (x, y) in tail[0].iter_mut().zip(&head[l]) {
            *x -= &q * y;
        }
        let qq = BigRational::from_integer(q);
        mu[k][l] -= &qq;
        for i in 0..l {
            let v = &qq * &mu[l][i];
            mu[k][i] -= v;
        }
    };

    let mut k = 1;
    while k < n {
        reduce(&mut b, &mut mu, k, k - 1);
        let m = mu[k][k - 1].clone();
        if bb[k] < (&delta - &m * &m) * &bb[k - 1] {
            b.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = t;
            }
            let b_new = &bb[k] + &m * &m * &bb[k - 1];
            mu[k][k - 1] = &m * &bb[k - 1] / &b_new;
            bb[k] = &bb[k - 1] * &bb[k] / &b_new;
            bb[k - 1] = b_new;
            for i in k + 1..n {
                let t = mu[i][k].clone();
                mu[i][k] = &mu[i][k - 1] - &m * &t;
                mu[i][k - 1] = t + &mu[k][k - 1] * &mu[i][k];
            }
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                reduce(&mut b, &mut mu, k, l);
            }
            k += 1;
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn reduces_textbook_example() {
        let b = lll_reduce(rows(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]));
        // reduced bases of this lattice have a first vector of squared length 2
        let n0: BigInt = b[0].iter().map(|x| x * x).sum();
        assert!(n0 <= BigInt::from(2));
    }

    #[test]
    fn finds_integer_relation() {
        // 3·a − 2·b = 0 with a = 2·10^6, b = 3·10^6 scaled into the last column
        let k = 1_000_000i64;
        let b = lll_reduce(rows(&[&[1, 0, 2 * k], &[0, 1, 3 * k]]));
        let r = &b[0];
        assert!(r[2].is_zero());
        assert_eq!(r[0].abs(), BigInt::from(3));
        assert_eq!(r[1].abs(), BigInt::from(2));
    }
}
