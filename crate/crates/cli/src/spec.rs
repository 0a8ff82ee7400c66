//! JSON pair files.
//!
//! ```json
//! {
//!   "dimension": 4,
//!   "field": { "generator": "t", "min_poly": [-2, 0, 1], "approx_root": 1.4142 },
//!   "Q": { "1,1": "1", "2,2": "1", "3,3": "-1", "4,4": "-t" },
//!   "L": ["0", "0", "1", "t"]
//! }
//! ```
//!
//! `Q` maps `"i,j"` (1-based, `i ≤ j`) to the coefficient of `x_i·x_j`;
//! absent entries are zero. `min_poly` lists coefficients from the constant
//! term up. Without a field block all entries are rational. A `"float"`
//! block instead of `"field"` admits decimal literals, which are read as
//! exact rationals and restrict the pair to heuristic checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use qlpair_core::exact::{FieldScalar, NumberField};
use qlpair_core::forms::{LinearForm, PairQL, QuadraticForm};

use crate::error::CliError;
use crate::expr::{parse_scalar, Grammar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBlock {
    pub generator: String,
    pub min_poly: Vec<i64>,
    pub approx_root: f64,
    /// Rational endpoints `[lo, hi]` isolating the chosen root.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isolation: Option<[String; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FloatBlock {
    /// Working precision for heuristic checks, in decimal digits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Text(String),
    Int(i64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpecFile {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub float: Option<FloatBlock>,
    #[serde(rename = "Q")]
    pub q: BTreeMap<String, ScalarText>,
    #[serde(rename = "L")]
    pub l: Vec<ScalarText>,
}

/// A parsed pair together with file-level options.
#[derive(Debug, Clone)]
pub struct LoadedPair {
    pub pair: PairQL,
    pub float_digits: Option<u32>,
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn rational_literal(s: &str) -> Result<BigRational, CliError> {
    let g = Grammar { generator: None, degree: 1, allow_decimal: true };
    Ok(parse_scalar(s, &g)?.remove(0))
}

fn build_field(block: &FieldBlock) -> Result<Arc<NumberField>, CliError> {
    let isolation = match &block.isolation {
        Some([lo, hi]) => Some((rational_literal(lo)?, rational_literal(hi)?)),
        None => None,
    };
    let poly: Vec<BigInt> = block.min_poly.iter().map(|&c| BigInt::from(c)).collect();
    Ok(NumberField::from_big(&block.generator, poly, block.approx_root, isolation)?)
}

fn index_pair(key: &str, d: usize) -> Result<(usize, usize), CliError> {
    let bad = || parse_err(format!("Q key {key:?} must be \"i,j\" with 1 <= i <= j <= {d}"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if i == 0 || i > j || j > d {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

impl PairSpecFile {
    pub fn from_json(text: &str) -> Result<PairSpecFile, CliError> {
        serde_json::from_str(text).map_err(|e| parse_err(format!("invalid pair file: {e}")))
    }

    pub fn to_pair(&self) -> Result<LoadedPair, CliError> {
        let d = self.dimension;
        if d == 0 {
            return Err(parse_err("dimension must be at least 1"));
        }
        if self.field.is_some() && self.float.is_some() {
            return Err(parse_err("a pair file has either a field block or a float block, not both"));
        }
        let field = match &self.field {
            Some(b) => build_field(b)?,
            None => NumberField::rational(),
        };
        let gen_name = field.generator_name().to_string();
        let grammar = Grammar {
            generator: self.field.as_ref().map(|_| gen_name.as_str()),
            degree: field.degree(),
            allow_decimal: self.float.is_some(),
        };
        let scalar = |s: &ScalarText| -> Result<FieldScalar, CliError> {
            match s {
                ScalarText::Int(n) => Ok(FieldScalar::from_int(&field, *n)),
                ScalarText::Text(t) => Ok(FieldScalar::new(&field, parse_scalar(t, &grammar)?)),
            }
        };
        let mut coeffs = Vec::new();
        for (key, v) in &self.q {
            coeffs.push((index_pair(key, d)?, scalar(v)?));
        }
        let q = QuadraticForm::from_coefficients(&field, d, &coeffs)?;
        if self.l.len() != d {
            return Err(parse_err(format!("L has {} entries, expected {d}", self.l.len())));
        }
        let l = LinearForm::new(&field, self.l.iter().map(scalar).collect::<Result<_, _>>()?)?;
        let pair = PairQL::new(q, l)?.with_float_input(self.float.is_some());
        Ok(LoadedPair { pair, float_digits: self.float.as_ref().and_then(|f| f.digits) })
    }

    /// The file describing `p`; parsing it back gives an equal pair.
    pub fn from_pair(p: &PairQL, float_digits: Option<u32>) -> Result<PairSpecFile, CliError> {
        let d = p.dim();
        let f = p.field();
        let field = if f.degree() > 1 {
            let min_poly = f
                .min_poly()
                .iter()
                .map(|c| c.to_i64().ok_or_else(|| parse_err("minimal polynomial coefficient exceeds 64 bits")))
                .collect::<Result<Vec<i64>, _>>()?;
            let (lo, hi) = f.root_isolation();
            Some(FieldBlock {
                generator: f.generator_name().to_string(),
                min_poly,
                approx_root: f.root_f64(),
                isolation: Some([lo.to_string(), hi.to_string()]),
            })
        } else {
            None
        };
        let mut q = BTreeMap::new();
        for i in 0..d {
            for j in i..d {
                let c = p.q.coefficient(i, j);
                if !c.is_zero() {
                    q.insert(format!("{},{}", i + 1, j + 1), ScalarText::Text(c.to_string()));
                }
            }
        }
        let l = p.l.coeffs().iter().map(|c| ScalarText::Text(c.to_string())).collect();
        let float = p.float_input.then(|| FloatBlock { digits: float_digits });
        Ok(PairSpecFile { dimension: d, field, float, q, l })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

pub fn load_pair(text: &str) -> Result<LoadedPair, CliError> {
    PairSpecFile::from_json(text)?.to_pair()
}

pub fn emit_pair(p: &PairQL, float_digits: Option<u32>) -> Result<String, CliError> {
    Ok(PairSpecFile::from_pair(p, float_digits)?.to_json())
}

/// Exact equality of two pairs: same field, Gram matrix and linear form.
pub fn pairs_equal(a: &PairQL, b: &PairQL) -> bool {
    a.dim() == b.dim()
        && a.field() == b.field()
        && a.q.gram() == b.q.gram()
        && a.l.coeffs() == b.l.coeffs()
        && a.float_input == b.float_input
}

#[cfg(test)]
mod tests {
    use super::*;
    use qlpair_core::catalog;

    #[test]
    fn catalog_round_trips() {
        for p in [
            catalog::e1(),
            catalog::e5(),
            catalog::type_two_canonical(),
            catalog::adversarial_d5(),
            catalog::rational_q_irrational_l(),
        ] {
            let text = emit_pair(&p, None).unwrap();
            let back = load_pair(&text).unwrap().pair;
            assert!(pairs_equal(&p, &back), "{text}");
        }
    }

    #[test]
    fn hand_written_file() {
        let text = r#"{
            "dimension": 4,
            "field": { "generator": "t", "min_poly": [-2, 0, 1], "approx_root": 1.41 },
            "Q": { "1,1": 1, "2,2": "1", "3,3": "-1", "4,4": "-t" },
            "L": ["0", 0, "1", "t"]
        }"#;
        assert!(pairs_equal(&load_pair(text).unwrap().pair, &catalog::e1()));
    }

    #[test]
    fn errors() {
        let base = |q: &str, l: &str| format!(r#"{{"dimension": 2, "Q": {q}, "L": {l}}}"#);
        assert!(load_pair(&base(r#"{"1,1": "1", "2,2": "-1"}"#, r#"["1", "0"]"#)).is_ok());
        for (q, l) in [
            (r#"{"2,1": "1"}"#, r#"["1", "0"]"#),
            (r#"{"1,3": "1"}"#, r#"["1", "0"]"#),
            (r#"{"1,1": "t"}"#, r#"["1", "0"]"#),
            (r#"{"1,1": "1"}"#, r#"["1"]"#),
            (r#"{"1,1": "0.5"}"#, r#"["1", "0"]"#),
        ] {
            assert!(matches!(load_pair(&base(q, l)), Err(CliError::Parse(_))), "{q} {l}");
        }
        assert!(matches!(load_pair("{"), Err(CliError::Parse(_))));
        let float = r#"{"dimension": 1, "float": {}, "Q": {"1,1": "0.5"}, "L": ["1.25"]}"#;
        let p = load_pair(float).unwrap().pair;
        assert!(p.float_input);
        assert!(pairs_equal(&p, &load_pair(&emit_pair(&p, None).unwrap()).unwrap().pair));
    }
}
