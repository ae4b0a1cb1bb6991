//! `kind(name=value, ...)` spec strings.

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::real::Real;

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

struct Param {
    name: String,
    value: f64,
    position: usize,
}

/// Parses a distribution spec such as `exp(lambda=2)`, `uniform(a=3)`,
/// `power(k=2)`, `normal` or a catalog alias `table1:rowN`.
///
/// A bare kind uses its default parameters; an empty parameter list
/// (`exp()`) is rejected.
pub fn parse_spec<T: Real>(text: &str) -> Result<Distribution<T>> {
    let trimmed_start = text.len() - text.trim_start().len();
    let body = text.trim();
    if body.is_empty() {
        return Err(err(0, "empty distribution spec"));
    }
    let (kind, params) = match body.find('(') {
        None => (body, None),
        Some(open) => {
            if !body.ends_with(')') {
                return Err(err(trimmed_start + body.len(), "expected ')' at end of spec"));
            }
            let inner = &body[open + 1..body.len() - 1];
            let params = parse_params(inner, trimmed_start + open + 1)?;
            (body[..open].trim_end(), Some(params))
        }
    };
    if let Some(bad) = kind.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == ':')) {
        return Err(err(trimmed_start + bad, format!("unexpected character {:?}", &kind[bad..bad + 1])));
    }
    let kind_lower = kind.to_ascii_lowercase();

    if let Some(row) = kind_lower.strip_prefix("table1:row") {
        if params.is_some() {
            return Err(err(trimmed_start + kind.len(), "catalog rows take no parameters"));
        }
        let row: usize = row
            .parse()
            .map_err(|_| err(trimmed_start + 10, format!("bad table row {row:?}")))?;
        return Distribution::table1_row(row).map_err(|_| err(trimmed_start + 10, "table row must be 1..=6"));
    }

    let allowed: &[(&str, f64)] = match kind_lower.as_str() {
        "exp" => &[("lambda", 1.0)],
        "uniform" => &[("a", 1.0)],
        "power" => &[("k", 2.0)],
        "normal" => &[],
        _ => return Err(err(trimmed_start, format!("unknown distribution kind {kind:?}"))),
    };
    let mut values: Vec<f64> = allowed.iter().map(|(_, d)| *d).collect();
    if let Some(params) = &params {
        if params.is_empty() {
            return Err(err(trimmed_start + kind.len() + 1, "empty parameter list"));
        }
        let mut seen = vec![false; allowed.len()];
        for p in params {
            let Some(idx) = allowed.iter().position(|(n, _)| *n == p.name) else {
                return Err(err(p.position, format!("unknown parameter {:?} for {kind_lower}", p.name)));
            };
            if seen[idx] {
                return Err(err(p.position, format!("duplicate parameter {:?}", p.name)));
            }
            seen[idx] = true;
            values[idx] = p.value;
        }
    }
    let invalid = |e: Error| match e {
        Error::InvalidParameter { message, .. } => err(trimmed_start, message),
        other => other,
    };
    match kind_lower.as_str() {
        "exp" => Distribution::exponential(T::lit(values[0])).map_err(invalid),
        "uniform" => Distribution::uniform(T::lit(values[0])).map_err(invalid),
        "power" => Distribution::power(T::lit(values[0])).map_err(invalid),
        _ => Ok(Distribution::standard_normal()),
    }
}

fn parse_params(inner: &str, offset: usize) -> Result<Vec<Param>> {
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut start = 0;
    for piece in inner.split(',') {
        let position = offset + start;
        start += piece.len() + 1;
        let Some((name, value)) = piece.split_once('=') else {
            return Err(err(position, format!("expected name=value, got {:?}", piece.trim())));
        };
        let name = name.trim();
        if name.is_empty() {
            return Err(err(position, "missing parameter name"));
        }
        let value_text = value.trim();
        let value: f64 = value_text
            .parse()
            .map_err(|_| err(position + name.len() + 1, format!("invalid number {value_text:?}")))?;
        if !value.is_finite() {
            return Err(err(position + name.len() + 1, "parameter must be finite"));
        }
        out.push(Param {
            name: name.to_string(),
            value,
            position,
        });
    }
    Ok(out)
}
