//! Text and JSON renderings of Laurent polynomials.
//!
//! Text: terms in descending lexicographic order of exponent vectors, joined
//! sign-aware (`" + "` / `" - "`). A purely rational coefficient prints bare
//! (`-2/3*z1^2`), a mixed one in parentheses (`(1 - 1w)*z1^-1*z2^2`), and a
//! coefficient of exactly 1 is omitted when a monomial follows. Exponent 1
//! prints without `^1`; variables with exponent 0 are omitted. The zero
//! polynomial prints `0`. Both renderings parse back bit-exactly.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{LaurentPoly, Monomial, VarSet};
use crate::cyclofield::Cyclo;
use crate::error::CoreError;

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (exps, coeff)) in self.terms.iter().rev().enumerate() {
            let (negative, body) = render_term(self.vars.names(), exps, coeff);
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {:?}", self.vars)
    }
}

/// One term as (sign to hoist into the separator, unsigned body).
fn render_term(names: &[String], exps: &[i32], coeff: &Cyclo) -> (bool, String) {
    let mono = render_monomial(names, exps);
    if coeff.is_rational() {
        let r = coeff.a();
        let negative = r.is_negative();
        let abs = r.abs();
        let body = match mono {
            None => abs.to_string(),
            Some(m) if abs == num_traits::One::one() => m,
            Some(m) => format!("{abs}*{m}"),
        };
        (negative, body)
    } else {
        let body = match mono {
            None => format!("({coeff})"),
            Some(m) => format!("({coeff})*{m}"),
        };
        (false, body)
    }
}

fn render_monomial(names: &[String], exps: &[i32]) -> Option<String> {
    let factors: Vec<String> = names
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e != 0)
        .map(|(n, &e)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if factors.is_empty() {
        None
    } else {
        Some(factors.join("*"))
    }
}

impl LaurentPoly {
    /// Parse the text rendering back over a known variable set.
    pub fn parse(text: &str, vars: &VarSet) -> Result<Self, CoreError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(CoreError::Parse("empty polynomial text".into()));
        }
        if text == "0" {
            return Ok(Self::zero(vars));
        }
        let mut terms: Vec<(Monomial, Cyclo)> = Vec::new();
        for (sign, segment) in split_terms(text)? {
            let (exps, coeff) = parse_term(segment, vars)?;
            let coeff = if sign < 0 { -&coeff } else { coeff };
            terms.push((exps, coeff));
        }
        Self::from_terms(vars, terms)
    }
}

/// Split on top-level `" + "` / `" - "`, honouring parentheses; yields
/// `(sign, body)` pairs.
fn split_terms(text: &str) -> Result<Vec<(i32, &str)>, CoreError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut sign = 1i32;
    let mut start = 0usize;
    // A leading minus binds to the first term.
    if bytes[0] == b'-' {
        sign = -1;
        start = 1;
    }
    let mut i = start;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(CoreError::Parse(format!("unbalanced ')' in {text:?}")));
                }
            }
            b' ' if depth == 0 && i + 2 < bytes.len() => {
                let next_sign = match bytes[i + 1] {
                    b'+' => Some(1),
                    b'-' => Some(-1),
                    _ => None,
                };
                if let (Some(s), b' ') = (next_sign, bytes[i + 2]) {
                    out.push((sign, text[start..i].trim()));
                    sign = s;
                    start = i + 3;
                    i += 3;
                    continue;
                }
            }
            _ => {}
        }
        i += 1;
    }
    if depth != 0 {
        return Err(CoreError::Parse(format!("unbalanced '(' in {text:?}")));
    }
    out.push((sign, text[start..].trim()));
    if out.iter().any(|(_, s)| s.is_empty()) {
        return Err(CoreError::Parse(format!("empty term in {text:?}")));
    }
    Ok(out)
}

fn parse_term(segment: &str, vars: &VarSet) -> Result<(Monomial, Cyclo), CoreError> {
    let mut coeff = Cyclo::one();
    let mut exps = vec![0i32; vars.len()];
    for factor in split_factors(segment)? {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(CoreError::Parse(format!("empty factor in {segment:?}")));
        }
        if let Some(inner) = factor.strip_prefix('(').and_then(|f| f.strip_suffix(')')) {
            let c = Cyclo::from_str(inner)?;
            coeff = &coeff * &c;
        } else if factor.starts_with(|c: char| c.is_ascii_digit()) {
            let r = crate::cyclofield::parse_rational(factor)?;
            coeff = &coeff * &Cyclo::from_rational(r);
        } else {
            let (name, exp) = match factor.split_once('^') {
                None => (factor, 1i32),
                Some((n, e)) => (
                    n,
                    e.parse::<i32>().map_err(|_| {
                        CoreError::Parse(format!("bad exponent {e:?} in {segment:?}"))
                    })?,
                ),
            };
            let idx = vars.index_of(name)?;
            exps[idx] += exp;
        }
    }
    Ok((exps, coeff))
}

/// Split a term on top-level `*`.
fn split_factors(segment: &str) -> Result<Vec<&str>, CoreError> {
    let bytes = segment.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'*' if depth == 0 => {
                out.push(&segment[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&segment[start..]);
    Ok(out)
}

/// Serde-facing form: variable names plus a list of terms, each an exponent
/// vector aligned with `vars` and an exact coefficient.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<i32>,
    pub coeff: Cyclo,
}

impl LaurentPoly {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.vars.names().to_vec(),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| TermJson { exponents: e.clone(), coeff: c.clone() })
                .collect(),
        }
    }

    pub fn from_json(json: &PolyJson) -> Result<Self, CoreError> {
        let vars = VarSet(Arc::new(json.vars.clone()));
        for (i, n) in json.vars.iter().enumerate() {
            if json.vars[..i].contains(n) {
                return Err(CoreError::DuplicateVariable(n.clone()));
            }
        }
        Self::from_terms(
            &vars,
            json.terms
                .iter()
                .map(|t| (t.exponents.clone(), t.coeff.clone())),
        )
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = PolyJson::deserialize(deserializer)?;
        LaurentPoly::from_json(&json).map_err(serde::de::Error::custom)
    }
}
