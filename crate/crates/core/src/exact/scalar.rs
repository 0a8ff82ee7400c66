use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::NumberField;
use crate::error::{Error, Result};

/// Exact element of a [`NumberField`], stored in the power basis of θ.
#[derive(Clone)]
pub struct FieldScalar {
    field: Arc<NumberField>,
    coeffs: Vec<BigRational>,
    shadow: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldScalar {
    pub fn new(field: &Arc<NumberField>, coeffs: Vec<BigRational>) -> FieldScalar {
        let coeffs = field.reduce(coeffs);
        let shadow = field.eval_f64(&coeffs);
        FieldScalar { field: field.clone(), coeffs, shadow }
    }

    pub fn zero(field: &Arc<NumberField>) -> FieldScalar {
        Self::from_rational(field, BigRational::zero())
    }

    pub fn one(field: &Arc<NumberField>) -> FieldScalar {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> FieldScalar {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(field: &Arc<NumberField>, num: i64, den: i64) -> FieldScalar {
        Self::from_rational(field, BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> FieldScalar {
        Self::new(field, vec![q])
    }

    /// The generator θ itself.
    pub fn generator(field: &Arc<NumberField>) -> FieldScalar {
        Self::new(field, vec![BigRational::zero(), BigRational::one()])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Double-precision shadow of the exact value.
    pub fn to_f64(&self) -> f64 {
        self.shadow
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// `Some(q)` when the element is the rational `q`.
    pub fn is_rational(&self) -> Option<BigRational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }

    /// Exact sign at the distinguished real root.
    pub fn sign(&self) -> i8 {
        if self.field.degree() == 1 {
            return match self.coeffs[0].cmp(&BigRational::zero()) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            };
        }
        self.field.sign_at_root(&self.coeffs)
    }

    pub fn abs(&self) -> FieldScalar {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn exact_cmp(&self, other: &FieldScalar) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn checked_inv(&self) -> Result<FieldScalar> {
        let c = self.field.invert(&self.coeffs).ok_or(Error::DivisionByZero)?;
        Ok(FieldScalar::new(&self.field, c))
    }

    pub fn checked_div(&self, other: &FieldScalar) -> Result<FieldScalar> {
        self.same_field(other)?;
        Ok(self * &other.checked_inv()?)
    }

    pub fn same_field(&self, other: &FieldScalar) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Rational approximation within `2^-bits` of the exact value.
    pub fn approx_rational(&self, bits: u32) -> BigRational {
        self.field.approximate(&self.coeffs, bits)
    }

    /// Square root inside the field, found when the element is the square
    /// of a rational.
    pub fn sqrt_exact(&self) -> Option<FieldScalar> {
        let q = self.is_rational()?;
        let r = rational_nth_root(&q, 2)?;
        Some(FieldScalar::from_rational(&self.field, r))
    }

    pub fn pow(&self, e: u32) -> FieldScalar {
        let mut acc = FieldScalar::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn combine(&self, other: &FieldScalar, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> FieldScalar {
        assert!(self.same_field(other).is_ok(), "field mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect();
        FieldScalar::new(&self.field, coeffs)
    }
}

/// Exact `n`-th root of a nonnegative rational, when it is rational.
pub fn rational_nth_root(q: &BigRational, n: u32) -> Option<BigRational> {
    if q.is_negative() && n % 2 == 0 {
        return None;
    }
    let root = |x: &BigInt| -> Option<BigInt> {
        let r = x.abs().nth_root(n);
        (num_traits::pow(r.clone(), n as usize) == x.abs()).then(|| if x.is_negative() { -r } else { r })
    };
    Some(BigRational::new(root(q.numer())?, root(q.denom())?))
}

/// Exact arithmetic on two field scalars.
pub fn scalar_arith(a: &FieldScalar, b: &FieldScalar, op: ArithOp) -> Result<FieldScalar> {
    a.same_field(b)?;
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl PartialEq for FieldScalar {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other).is_ok() && self.coeffs == other.coeffs
    }
}

impl Eq for FieldScalar {}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (~{})", self, self.shadow)
    }
}

impl fmt::Display for FieldScalar {
    /// Renders `c0 + c1*t + c2*t^2 ...` with the generator's name; the output
    /// parses back with the spec-file expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.field.generator_name();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "{name}")?;
                    } else {
                        write!(f, "{name}^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: &FieldScalar) -> FieldScalar {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for &FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: &FieldScalar) -> FieldScalar {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Mul for &FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: &FieldScalar) -> FieldScalar {
        assert!(self.same_field(rhs).is_ok(), "field mismatch");
        let n = self.coeffs.len();
        if n == 1 {
            return FieldScalar::new(&self.field, vec![&self.coeffs[0] * &rhs.coeffs[0]]);
        }
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        FieldScalar::new(&self.field, prod)
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            shadow: -self.shadow,
        }
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> Arc<NumberField> {
        NumberField::quadratic("t", 2).unwrap()
    }

    fn sqrt2_plus_sqrt3() -> Arc<NumberField> {
        NumberField::new("t", &[1, 0, -10, 0, 1], 3.146, None).unwrap()
    }

    #[test]
    fn defining_relation() {
        let f = sqrt2();
        let t = FieldScalar::generator(&f);
        assert_eq!(&t * &t, FieldScalar::from_int(&f, 2));
        let z = &(&t * &t) - &FieldScalar::from_int(&f, 2);
        assert_eq!(z.is_rational(), Some(BigRational::zero()));
    }

    #[test]
    fn quartic_square_matches_float() {
        let f = sqrt2_plus_sqrt3();
        let t = FieldScalar::generator(&f);
        let sq = &t * &t;
        assert_eq!(sq.coeffs()[2], BigRational::one());
        let expected = 5.0 + 2.0 * 6f64.sqrt();
        assert!((sq.to_f64() - expected).abs() < 1e-12);
        assert!((sq.to_f64() - t.to_f64() * t.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn signs() {
        let f = sqrt2();
        let t = FieldScalar::generator(&f);
        assert_eq!((&FieldScalar::from_int(&f, 2) - &t).sign(), 1);
        assert_eq!(FieldScalar::zero(&f).sign(), 0);
        let g = sqrt2_plus_sqrt3();
        let u = FieldScalar::generator(&g);
        assert_eq!((&FieldScalar::from_int(&g, 3) - &(&u * &u)).sign(), -1);
    }

    #[test]
    fn sign_needs_refinement_for_tiny_values() {
        // 665857/470832 - sqrt(2) ~ 1.6e-12
        let f = sqrt2();
        let q = FieldScalar::from_ratio(&f, 665857, 470832);
        let t = FieldScalar::generator(&f);
        assert_eq!((&q - &t).sign(), 1);
        assert_eq!(f.sign_at_root((&q - &t).coeffs()), 1);
        assert_eq!((&t - &q).sign(), -1);
    }

    #[test]
    fn division_and_errors() {
        let f = sqrt2();
        let t = FieldScalar::generator(&f);
        let a = &t + &FieldScalar::from_int(&f, 1);
        let inv = a.checked_inv().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(scalar_arith(&a, &FieldScalar::zero(&f), ArithOp::Div), Err(Error::DivisionByZero));
        let g = NumberField::quadratic("s", 3).unwrap();
        assert_eq!(scalar_arith(&a, &FieldScalar::one(&g), ArithOp::Add), Err(Error::FieldMismatch));
    }

    #[test]
    fn display_round_shape() {
        let f = sqrt2();
        let t = FieldScalar::generator(&f);
        let x = &FieldScalar::from_ratio(&f, -3, 2) - &(&t * &FieldScalar::from_int(&f, 2));
        assert_eq!(x.to_string(), "-3/2 - 2*t");
        assert_eq!(FieldScalar::zero(&f).to_string(), "0");
        assert_eq!((-&t).to_string(), "-t");
    }

    #[test]
    fn nth_roots() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(rational_nth_root(&q(9, 4), 2), Some(q(3, 2)));
        assert_eq!(rational_nth_root(&q(-8, 27), 3), Some(q(-2, 3)));
        assert_eq!(rational_nth_root(&q(2, 1), 2), None);
    }
}
