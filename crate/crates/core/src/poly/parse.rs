use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPoly;
use crate::error::Error;

impl FromStr for IntPoly {
    type Err = Error;

    /// Accepts `"x^2-x-1"`-style text (variable `x`, `X`, `z` or `Y`) or a
    /// JSON array of decimal strings in descending degree.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t.starts_with('[') {
            parse_json(t).map_err(|reason| Error::Parse { input: s.to_string(), reason })
        } else {
            parse_human(t).map_err(|reason| Error::Parse { input: s.to_string(), reason })
        }
    }
}

fn parse_json(t: &str) -> Result<IntPoly, String> {
    let values: Vec<serde_json::Value> =
        serde_json::from_str(t).map_err(|e| format!("invalid JSON array: {e}"))?;
    if values.is_empty() {
        return Err("empty coefficient array".into());
    }
    let mut coeffs = Vec::with_capacity(values.len());
    for v in values.iter().rev() {
        let c = match v {
            serde_json::Value::String(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|_| format!("coefficient {s:?} is not a decimal integer"))?,
            serde_json::Value::Number(n) if n.is_i64() => BigInt::from(n.as_i64().unwrap()),
            other => return Err(format!("coefficient {other} is not a decimal string")),
        };
        coeffs.push(c);
    }
    Ok(IntPoly::new(coeffs))
}

fn is_var(c: char) -> bool {
    matches!(c, 'x' | 'X' | 'z' | 'Y')
}

fn parse_human(t: &str) -> Result<IntPoly, String> {
    let chars: Vec<char> = t.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err("empty input".into());
    }
    let mut var: Option<char> = None;
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let mut sign = BigInt::one();
        if chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(format!("expected '+' or '-' at position {i}"));
        }
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let mag: Option<BigInt> = if i > start {
            Some(chars[start..i].iter().collect::<String>().parse().unwrap())
        } else {
            None
        };
        if i < chars.len() && chars[i] == '*' {
            if mag.is_none() {
                return Err(format!("dangling '*' at position {i}"));
            }
            i += 1;
        }
        let mut exp = 0usize;
        if i < chars.len() && is_var(chars[i]) {
            match var {
                Some(v) if v != chars[i] => {
                    return Err(format!("mixed variables '{v}' and '{}'", chars[i]))
                }
                _ => var = Some(chars[i]),
            }
            i += 1;
            exp = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let es = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if es == i {
                    return Err(format!("missing exponent at position {es}"));
                }
                exp = chars[es..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| "exponent too large".to_string())?;
            }
        } else if mag.is_none() {
            return Err(format!("expected a term at position {start}"));
        }
        let c = sign * mag.unwrap_or_else(BigInt::one);
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigInt::zero());
        }
        coeffs[exp] += c;
        if i < chars.len() && chars[i] != '+' && chars[i] != '-' {
            return Err(format!("unexpected character '{}' at position {i}", chars[i]));
        }
    }
    Ok(IntPoly::new(coeffs))
}
