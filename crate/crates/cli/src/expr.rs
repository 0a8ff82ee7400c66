//! Scalar expressions: sums of terms `c`, `c*t^k`, `c t^k`, `t^k` with
//! rational `c` (`p/q`, or decimals in float mode) and `t` the generator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::CliError;

pub struct Grammar<'a> {
    /// Generator name; `None` in rational mode.
    pub generator: Option<&'a str>,
    /// Number of power-basis coefficients (field degree, 1 over Q).
    pub degree: usize,
    pub allow_decimal: bool,
}

struct Lexer<'s> {
    src: &'s str,
    pos: usize,
}

impl<'s> Lexer<'s> {
    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'s str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }
}

fn err(src: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("in expression {src:?}: {msg}"))
}

fn parse_number(lx: &mut Lexer, g: &Grammar) -> Result<BigRational, CliError> {
    let int = lx.take_while(|c| c.is_ascii_digit());
    let mut value = BigRational::from_integer(int.parse::<BigInt>().map_err(|e| err(lx.src, e))?);
    if lx.peek() == Some('.') {
        if !g.allow_decimal {
            return Err(err(lx.src, "decimal literals are only allowed in float mode"));
        }
        lx.pos += 1;
        let frac = lx.take_while(|c| c.is_ascii_digit());
        if !frac.is_empty() {
            let num: BigInt = frac.parse().map_err(|e| err(lx.src, e))?;
            let den = num_traits::pow(BigInt::from(10), frac.len());
            value += BigRational::new(num, den);
        }
    }
    lx.skip_ws();
    if lx.peek() == Some('/') {
        let save = lx.pos;
        lx.pos += 1;
        lx.skip_ws();
        let den = lx.take_while(|c| c.is_ascii_digit());
        if den.is_empty() {
            lx.pos = save;
            return Err(err(lx.src, "expected a denominator after '/'"));
        }
        let den: BigInt = den.parse().map_err(|e| err(lx.src, e))?;
        if den.is_zero() {
            return Err(err(lx.src, "zero denominator"));
        }
        value /= BigRational::from_integer(den);
    }
    Ok(value)
}

/// One factor: a number or a generator power.
enum Factor {
    Num(BigRational),
    Gen(usize),
}

fn parse_factor(lx: &mut Lexer, g: &Grammar) -> Result<Option<Factor>, CliError> {
    lx.skip_ws();
    match lx.peek() {
        Some(c) if c.is_ascii_digit() || c == '.' => Ok(Some(Factor::Num(parse_number(lx, g)?))),
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            let name = lx.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
            if g.generator != Some(name) {
                return Err(err(lx.src, format!("unknown symbol {name:?}")));
            }
            let mut k = 1;
            if lx.eat('^') {
                lx.skip_ws();
                let e = lx.take_while(|c| c.is_ascii_digit());
                k = e.parse().map_err(|_| err(lx.src, "expected an exponent after '^'"))?;
            }
            Ok(Some(Factor::Gen(k)))
        }
        _ => Ok(None),
    }
}

/// Power-basis coefficients of an expression.
pub fn parse_scalar(src: &str, g: &Grammar) -> Result<Vec<BigRational>, CliError> {
    let mut lx = Lexer { src, pos: 0 };
    let mut out = vec![BigRational::zero(); g.degree];
    let mut first = true;
    loop {
        lx.skip_ws();
        if lx.peek().is_none() {
            if first {
                return Err(err(src, "empty expression"));
            }
            return Ok(out);
        }
        let mut sign = BigRational::one();
        let mut had_sign = false;
        loop {
            if lx.eat('+') {
                had_sign = true;
            } else if lx.eat('-') {
                sign = -sign;
                had_sign = true;
            } else {
                break;
            }
        }
        if !first && !had_sign {
            return Err(err(src, format!("expected '+' or '-' at offset {}", lx.pos)));
        }
        let mut coef = sign;
        let mut power = 0usize;
        let mut factors = 0;
        let mut after_star = false;
        loop {
            match parse_factor(&mut lx, g)? {
                Some(Factor::Num(v)) => coef *= v,
                Some(Factor::Gen(k)) => power += k,
                None if after_star => return Err(err(src, "expected a factor after '*'")),
                None => break,
            }
            factors += 1;
            after_star = lx.eat('*');
            if after_star {
                continue;
            }
            lx.skip_ws();
            // implicit product as in `3 t`
            if !lx.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
                break;
            }
        }
        if factors == 0 {
            return Err(err(src, format!("expected a term at offset {}", lx.pos)));
        }
        if power >= g.degree {
            return Err(err(src, format!("power {power} is not below the field degree {}", g.degree)));
        }
        out[power] += coef;
        first = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    const QUAD: Grammar = Grammar { generator: Some("t"), degree: 2, allow_decimal: false };
    const RAT: Grammar = Grammar { generator: None, degree: 1, allow_decimal: false };

    #[test]
    fn terms() {
        assert_eq!(parse_scalar("-3/2", &RAT).unwrap(), vec![q(-3, 2)]);
        assert_eq!(parse_scalar("1 - 2*t", &QUAD).unwrap(), vec![q(1, 1), q(-2, 1)]);
        assert_eq!(parse_scalar("-t + 1/2 + 3 t", &QUAD).unwrap(), vec![q(1, 2), q(2, 1)]);
        assert_eq!(parse_scalar("13 - 9*t", &QUAD).unwrap(), vec![q(13, 1), q(-9, 1)]);
        assert_eq!(parse_scalar("--2", &RAT).unwrap(), vec![q(2, 1)]);
    }

    #[test]
    fn rejections() {
        for bad in ["", "t", "1 2", "1/0", "1.5", "x", "3 +", "2*"] {
            assert!(parse_scalar(bad, &RAT).is_err(), "{bad:?}");
        }
        assert!(parse_scalar("t^2", &QUAD).is_err());
        assert!(parse_scalar("t*t", &QUAD).is_err());
    }

    #[test]
    fn decimals() {
        let g = Grammar { generator: None, degree: 1, allow_decimal: true };
        assert_eq!(parse_scalar("1.25", &g).unwrap(), vec![q(5, 4)]);
        assert_eq!(parse_scalar("-0.1/2", &g).unwrap(), vec![q(-1, 20)]);
    }
}
