//! Integer evaluation of a pair over the power basis of the field.
//!
//! `D_Q·Q(x) = Σ_k θ^k·q_k(x)` and `D_L·L(x) = Σ_k θ^k·l_k(x)` with integer
//! forms `q_k`, `l_k`, so every value is exact in `i128` and its double
//! approximation depends only on `x`, never on the visiting order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::enumerate::Slab;
use crate::error::{Error, Result};
use crate::exact::FieldScalar;
use crate::forms::PairQL;

pub(crate) struct Engine {
    d: usize,
    n: usize,
    /// `qc[k][i][j]`, `i ≤ j`: coefficient of `θ^k·x_i·x_j`.
    qc: Vec<Vec<Vec<i128>>>,
    lc: Vec<Vec<i128>>,
    dq: i128,
    dl: i128,
    pows: Vec<f64>,
    pair: PairQL,
}

/// Values of one representative `x`; the class member `−x` has
/// `(q, −l)`.
pub(crate) struct Values<'a> {
    pub q: &'a [i128],
    pub l: &'a [i128],
    pub qf: f64,
    pub lf: f64,
}

fn padded(s: &FieldScalar, n: usize) -> Vec<BigRational> {
    let mut c = s.coeffs().to_vec();
    c.resize(n, BigRational::zero());
    c
}

fn common_denominator(entries: &[Vec<BigRational>]) -> BigInt {
    entries.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or_else(|| Error::Overflow("coefficient exceeds 128 bits".into()))
}

impl Engine {
    pub fn new(p: &PairQL, bound: i64) -> Result<Engine> {
        let d = p.dim();
        let field = p.field().clone();
        let n = field.degree();
        let mut qraw = Vec::new();
        for i in 0..d {
            for j in i..d {
                qraw.push(padded(&p.q.coefficient(i, j), n));
            }
        }
        let lraw: Vec<Vec<BigRational>> = p.l.coeffs().iter().map(|c| padded(c, n)).collect();
        let dq = common_denominator(&qraw);
        let dl = common_denominator(&lraw);
        let scale = |c: &BigRational, den: &BigInt| to_i128(&(c * BigRational::from_integer(den.clone())).to_integer());

        let mut qc = vec![vec![vec![0i128; d]; d]; n];
        let mut idx = 0;
        for i in 0..d {
            for j in i..d {
                for k in 0..n {
                    qc[k][i][j] = scale(&qraw[idx][k], &dq)?;
                }
                idx += 1;
            }
        }
        let mut lc = vec![vec![0i128; d]; n];
        for (i, row) in lraw.iter().enumerate() {
            for k in 0..n {
                lc[k][i] = scale(&row[k], &dl)?;
            }
        }

        // |q_k(x)| ≤ Σ|c|·N², kept well inside i128
        let b = bound as f64;
        let qmax = qc.iter().flatten().flatten().map(|v| v.unsigned_abs() as f64).sum::<f64>() * b * b;
        let lmax = lc.iter().flatten().map(|v| v.unsigned_abs() as f64).sum::<f64>() * b;
        if !(qmax < 1e36 && lmax < 1e36) {
            return Err(Error::Overflow("search box too large for exact integer evaluation".into()));
        }
        Ok(Engine {
            d,
            n,
            qc,
            lc,
            dq: to_i128(&dq)?,
            dl: to_i128(&dl)?,
            pows: field.theta_powers_f64().to_vec(),
            pair: p.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn to_float(&self, v: &[i128], den: i128) -> f64 {
        let mut s = 0.0;
        for (c, p) in v.iter().zip(&self.pows) {
            s += *c as f64 * p;
        }
        s / den as f64
    }

    /// Bound on the magnitude of the terms summed by the float evaluation;
    /// the rounding error of `qf` is a small multiple of `ε·mag`.
    pub fn magnitude(&self, v: &Values) -> f64 {
        let m = |c: &[i128], den: i128| {
            c.iter().zip(&self.pows).map(|(c, p)| (*c as f64).abs() * p.abs()).sum::<f64>() / den as f64
        };
        m(v.q, self.dq).max(m(v.l, self.dl))
    }

    pub fn exact(&self, v: &Values) -> (FieldScalar, FieldScalar) {
        let f = self.pair.field();
        let mk = |c: &[i128], den: i128| {
            let den = BigInt::from(den);
            FieldScalar::new(f, c.iter().map(|x| BigRational::new(BigInt::from(*x), den.clone())).collect())
        };
        (mk(v.q, self.dq), mk(v.l, self.dl))
    }

    /// Calls `visit` on every primitive representative of the slab, in
    /// enumeration order.
    pub fn run_slab(&self, slab: Slab, bound: i64, mut visit: impl FnMut(&[i64], &Values)) {
        let (d, n) = (self.d, self.n);
        let mut x = vec![0i64; d];
        x[slab.lead] = slab.value;
        let mut q = vec![0i128; n];
        let mut l = vec![0i128; n];
        if slab.lead == d - 1 {
            if slab.value == 1 {
                self.eval_full(&x, &mut q, &mut l);
                let v = Values { q: &q, l: &l, qf: self.to_float(&q, self.dq), lf: self.to_float(&l, self.dl) };
                visit(&x, &v);
            }
            return;
        }
        let inner = d - 1;
        // the middle coordinates lead+1 .. d-2 run through an odometer
        for m in slab.lead + 1..inner {
            x[m] = -bound;
        }
        let mut a = vec![0i128; n];
        let mut bcoef = vec![0i128; n];
        let mut l0 = vec![0i128; n];
        loop {
            x[inner] = 0;
            self.eval_full(&x, &mut a, &mut l0);
            for k in 0..n {
                let mut s = 0i128;
                for (i, &xi) in x.iter().enumerate().take(inner) {
                    s += self.qc[k][i][inner] * xi as i128;
                }
                bcoef[k] = s;
            }
            let g0 = x[..inner].iter().fold(0i64, |g, &v| g.gcd(&v));
            for t in -bound..=bound {
                if g0.gcd(&t) != 1 {
                    continue;
                }
                let tt = t as i128;
                for k in 0..n {
                    q[k] = a[k] + tt * (bcoef[k] + self.qc[k][inner][inner] * tt);
                    l[k] = l0[k] + self.lc[k][inner] * tt;
                }
                x[inner] = t;
                let v = Values { q: &q, l: &l, qf: self.to_float(&q, self.dq), lf: self.to_float(&l, self.dl) };
                visit(&x, &v);
            }
            let mut i = inner;
            loop {
                if i == slab.lead + 1 {
                    return;
                }
                i -= 1;
                if x[i] < bound {
                    x[i] += 1;
                    break;
                }
                x[i] = -bound;
            }
        }
    }

    fn eval_full(&self, x: &[i64], q: &mut [i128], l: &mut [i128]) {
        for k in 0..self.n {
            let mut s = 0i128;
            for i in 0..self.d {
                if x[i] == 0 {
                    continue;
                }
                let xi = x[i] as i128;
                for j in i..self.d {
                    s += self.qc[k][i][j] * xi * x[j] as i128;
                }
            }
            q[k] = s;
            l[k] = (0..self.d).map(|i| self.lc[k][i] * x[i] as i128).sum();
        }
    }
}

/// Strict preference between two vectors with equal objective: smaller
/// `‖x‖∞`, then smaller `‖x‖₁`, then lexicographically larger.
pub(crate) fn preferred(a: &[i64], b: &[i64]) -> bool {
    let inf = |x: &[i64]| x.iter().map(|v| v.abs()).max().unwrap_or(0);
    let one = |x: &[i64]| x.iter().map(|v| v.abs()).sum::<i64>();
    (inf(a), one(a)).cmp(&(inf(b), one(b))).then_with(|| b.cmp(a)) == std::cmp::Ordering::Less
}
