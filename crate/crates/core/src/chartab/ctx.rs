//! CTX v1, a plain-text exchange format for character tables.
//!
//! ```text
//! %CTX 1
//! group <label>
//! order <|G|>
//! nclasses <k>
//! conductor <N>
//! class <i> order=<m> size=<c> pow<p>=<j> ...
//! irr
//! <k lines of k values>
//! ```
//!
//! Class indices are 1-based. A value is `[e:a/b,...]` over ℚ(ζ_N), a bare
//! rational, or `0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{CharacterTable, ClassMeta, Provenance};
use crate::cyclotomic::Cyclotomic;
use crate::error::CharTableError;

pub(super) fn render(t: &CharacterTable) -> String {
    let n = t.conductor();
    let mut out = String::new();
    out.push_str("%CTX 1\n");
    out.push_str(&format!("group {}\n", t.label));
    out.push_str(&format!("order {}\n", t.order));
    out.push_str(&format!("nclasses {}\n", t.len()));
    out.push_str(&format!("conductor {n}\n"));
    for (i, c) in t.classes.iter().enumerate() {
        out.push_str(&format!("class {} order={} size={}", i + 1, c.order, c.size));
        for (p, j) in &c.powers {
            out.push_str(&format!(" pow{p}={}", j + 1));
        }
        out.push('\n');
    }
    out.push_str("irr\n");
    for row in &t.irr {
        let vals: Vec<String> = row.iter().map(|v| v.to_ctx_string(n)).collect();
        out.push_str(&vals.join(" "));
        out.push('\n');
    }
    out
}

pub(crate) struct Lines<'a> {
    pub(crate) lines: Vec<&'a str>,
    pub(crate) pos: usize,
}

pub(crate) fn syntax(line: usize, message: impl Into<String>) -> CharTableError {
    CharTableError::Syntax {
        line,
        message: message.into(),
    }
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Self {
            lines: text.strip_suffix('\n').unwrap_or(text).split('\n').collect(),
            pos: 0,
        }
    }


    pub(crate) fn next(&mut self, what: &str) -> Result<(usize, &'a str), CharTableError> {
        let line = self.pos + 1;
        let text = self
            .lines
            .get(self.pos)
            .ok_or_else(|| syntax(line, format!("unexpected end of file, expected {what}")))?;
        self.pos += 1;
        Ok((line, text))
    }

    pub(crate) fn keyword(&mut self, key: &str) -> Result<(usize, &'a str), CharTableError> {
        let (line, text) = self.next(key)?;
        let rest = text
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix(' '))
            .ok_or_else(|| syntax(line, format!("expected `{key} ...`")))?;
        Ok((line, rest))
    }
}

pub(crate) fn parse_int<T: std::str::FromStr>(line: usize, text: &str, what: &str) -> Result<T, CharTableError> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(line, format!("{what} must be a non-negative integer, found {text:?}")));
    }
    text.parse().map_err(|_| syntax(line, format!("{what} out of range: {text}")))
}

fn parse_rational(line: usize, text: &str) -> Result<BigRational, CharTableError> {
    let bad = || syntax(line, format!("malformed rational {text:?}"));
    let int = |s: &str| -> Result<BigInt, CharTableError> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse().map_err(|_| bad())
    };
    match text.split_once('/') {
        None => Ok(BigRational::from_integer(int(text)?)),
        Some((a, b)) => {
            let (a, b) = (int(a)?, int(b)?);
            if !b.is_positive() || b == BigInt::from(1) {
                return Err(syntax(line, format!("denominator of {text:?} must exceed 1")));
            }
            let r = BigRational::new(a.clone(), b.clone());
            if r.numer() != &a || r.denom() != &b {
                return Err(syntax(line, format!("rational {text:?} is not reduced")));
            }
            Ok(r)
        }
    }
}

pub(crate) fn parse_value(line: usize, text: &str, n: u64) -> Result<Cyclotomic, CharTableError> {
    let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) else {
        let r = parse_rational(line, text)?;
        return Ok(Cyclotomic::from_rational(r));
    };
    let mut terms = Vec::new();
    let mut last: Option<u64> = None;
    for part in inner.split(',') {
        let (e, c) = part
            .split_once(':')
            .ok_or_else(|| syntax(line, format!("malformed term {part:?}")))?;
        let e: u64 = parse_int(line, e, "exponent")?;
        if e >= n {
            return Err(syntax(line, format!("exponent {e} is not below the conductor {n}")));
        }
        if last.is_some_and(|l| e <= l) {
            return Err(syntax(line, format!("exponents in {text:?} are not strictly ascending")));
        }
        last = Some(e);
        let c = parse_rational(line, c)?;
        if c.is_zero() {
            return Err(syntax(line, format!("zero coefficient in {text:?}")));
        }
        terms.push((e, c));
    }
    Ok(Cyclotomic::from_terms(n, terms))
}

pub(super) fn parse(text: &str) -> Result<CharacterTable, CharTableError> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next("header")?;
    if header != "%CTX 1" {
        return Err(syntax(line, "expected header `%CTX 1`"));
    }
    let (_, label) = lines.keyword("group")?;
    let (line, order) = lines.keyword("order")?;
    let order: u128 = parse_int(line, order, "order")?;
    let (line, k) = lines.keyword("nclasses")?;
    let k: usize = parse_int(line, k, "nclasses")?;
    let (line, n) = lines.keyword("conductor")?;
    let n: u64 = parse_int(line, n, "conductor")?;
    if n == 0 {
        return Err(syntax(line, "conductor must be positive"));
    }
    let mut classes = Vec::with_capacity(k);
    for i in 0..k {
        let (line, rest) = lines.keyword("class")?;
        let mut fields = rest.split(' ');
        let idx: usize = parse_int(line, fields.next().unwrap_or(""), "class index")?;
        if idx != i + 1 {
            return Err(syntax(line, format!("expected class {}, found {idx}", i + 1)));
        }
        let mut field = |key: &str| -> Result<&str, CharTableError> {
            fields
                .next()
                .and_then(|f| f.strip_prefix(key))
                .ok_or_else(|| syntax(line, format!("expected `{key}<value>`")))
        };
        let order: u64 = parse_int(line, field("order=")?, "element order")?;
        let size: u128 = parse_int(line, field("size=")?, "class size")?;
        let mut powers = Vec::new();
        for f in fields {
            let (p, j) = f
                .strip_prefix("pow")
                .and_then(|f| f.split_once('='))
                .ok_or_else(|| syntax(line, format!("malformed power map field {f:?}")))?;
            let p: u64 = parse_int(line, p, "prime")?;
            let j: usize = parse_int(line, j, "class index")?;
            if j == 0 || j > k {
                return Err(syntax(line, format!("power map target {j} outside 1..={k}")));
            }
            powers.push((p, j - 1));
        }
        classes.push(ClassMeta { order, size, powers });
    }
    let (line, irr_kw) = lines.next("irr")?;
    if irr_kw != "irr" {
        return Err(syntax(line, "expected `irr`"));
    }
    let mut irr = Vec::with_capacity(k);
    for _ in 0..k {
        let (line, row) = lines.next("a character")?;
        let vals = row
            .split(' ')
            .map(|v| parse_value(line, v, n))
            .collect::<Result<Vec<_>, _>>()?;
        if vals.len() != k {
            return Err(syntax(line, format!("expected {k} values, found {}", vals.len())));
        }
        irr.push(vals);
    }
    if lines.pos < lines.lines.len() {
        return Err(syntax(lines.pos + 1, "trailing content after the last character"));
    }
    CharacterTable::new(label, order, classes, irr, Provenance::Ingested)
}
