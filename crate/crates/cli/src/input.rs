//! Semigroup descriptions: inline `--gens`/`--nums` forms and JSON documents.

use betti_core::{BigInt, Elem, Matrix, Scalar};
use serde_json::Value;

use crate::CliError;

/// Generators as columns, or a list of positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemigroupInput {
    Generators(Vec<Vec<BigInt>>),
    Numbers(Vec<BigInt>),
}

fn parse_int(s: &str) -> Result<BigInt, CliError> {
    BigInt::parse_decimal(s.trim()).ok_or_else(|| CliError::Parse(format!("not an integer: {s:?}")))
}

/// Splits on commas and whitespace.
pub fn parse_list(s: &str) -> Result<Vec<BigInt>, CliError> {
    let items: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
    if items.is_empty() {
        return Err(CliError::Parse("empty list".into()));
    }
    items.into_iter().map(parse_int).collect()
}

fn json_int(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_int(&n.to_string()),
        Value::String(s) => parse_int(s),
        other => Err(CliError::Parse(format!("expected an integer, found {other}"))),
    }
}

pub fn json_int_list(v: &Value) -> Result<Vec<BigInt>, CliError> {
    match v {
        Value::Array(items) => items.iter().map(json_int).collect(),
        other => Err(CliError::Parse(format!("expected a list of integers, found {other}"))),
    }
}

impl SemigroupInput {
    /// Rows of `A` separated by semicolons, entries by spaces or commas.
    pub fn from_gens(s: &str) -> Result<Self, CliError> {
        let rows: Vec<Vec<BigInt>> = s.split(';').map(parse_list).collect::<Result<_, _>>()?;
        let p = rows[0].len();
        if rows.iter().any(|r| r.len() != p) {
            return Err(CliError::Parse("rows of --gens have different lengths".into()));
        }
        Ok(Self::Generators((0..p).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()))
    }

    pub fn from_nums(s: &str) -> Result<Self, CliError> {
        Ok(Self::Numbers(parse_list(s)?))
    }

    /// `{"generators": [[...], ...]}` (one list per generator) or
    /// `{"numbers": [...]}`. Integers may be JSON numbers or decimal strings.
    pub fn from_json(v: &Value) -> Result<Self, CliError> {
        let obj = v.as_object().ok_or_else(|| CliError::Parse("input must be a JSON object".into()))?;
        match (obj.get("generators"), obj.get("numbers")) {
            (Some(g), None) => {
                let cols = g.as_array().ok_or_else(|| CliError::Parse("\"generators\" must be a list".into()))?;
                Ok(Self::Generators(cols.iter().map(json_int_list).collect::<Result<_, _>>()?))
            }
            (None, Some(n)) => Ok(Self::Numbers(json_int_list(n)?)),
            _ => Err(CliError::Parse("expected exactly one of \"generators\" or \"numbers\"".into())),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(s).map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))?;
        Self::from_json(&v)
    }

    /// Numerical inputs must have gcd 1.
    pub fn matrix(&self) -> Result<Matrix, CliError> {
        match self {
            Self::Generators(cols) => Ok(Matrix::from_columns(cols.clone())?),
            Self::Numbers(n) => {
                let g = n.iter().fold(BigInt::from(0), |g, x| num_integer::Integer::gcd(&g, x));
                if g != BigInt::from(1) {
                    return Err(CliError::Parse(format!("numbers must have gcd 1, found gcd {g}")));
                }
                Ok(Matrix::numerical(n.clone())?)
            }
        }
    }
}

/// An element given as a list of integers, e.g. `"2 2"`, `"2,2"` or `"210"`.
pub fn parse_element(s: &str, a: &Matrix) -> Result<Elem, CliError> {
    let coords = parse_list(s)?;
    if coords.len() != a.rows() {
        return Err(CliError::Parse(format!(
            "element has {} coordinates, the semigroup lives in dimension {}",
            coords.len(),
            a.rows()
        )));
    }
    Ok(Elem::new(coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn inline_forms() {
        let g = SemigroupInput::from_gens("2 0 1; 0 2 1").unwrap();
        assert_eq!(g, SemigroupInput::Generators(vec![ints(&[2, 0]), ints(&[0, 2]), ints(&[1, 1])]));
        assert_eq!(SemigroupInput::from_nums("30,42, 70 105").unwrap(), SemigroupInput::Numbers(ints(&[30, 42, 70, 105])));
        assert!(SemigroupInput::from_gens("2 0; 0").is_err());
        assert!(SemigroupInput::from_nums("3,x").is_err());
    }

    #[test]
    fn json_forms() {
        let a = SemigroupInput::from_json_str(r#"{"generators": [[2,0],[0,2],["1","1"]]}"#).unwrap();
        assert_eq!(a, SemigroupInput::from_gens("2 0 1; 0 2 1").unwrap());
        let n = SemigroupInput::from_json_str(r#"{"numbers": [2, 3]}"#).unwrap();
        assert_eq!(n.matrix().unwrap().numbers().unwrap(), ints(&[2, 3]));
        assert!(SemigroupInput::from_json_str(r#"{"numbers": [4, 6]}"#).unwrap().matrix().is_err());
        assert!(SemigroupInput::from_json_str(r#"{"numbers": [1.5]}"#).is_err());
        assert!(SemigroupInput::from_json_str(r#"[1]"#).is_err());
    }

    #[test]
    fn elements() {
        let a = SemigroupInput::from_gens("2 0 1; 0 2 1").unwrap().matrix().unwrap();
        assert_eq!(parse_element("2,2", &a).unwrap(), Elem::from_i64s(&[2, 2]));
        assert!(parse_element("2", &a).is_err());
    }
}
