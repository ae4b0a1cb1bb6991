use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Significant digits kept in emitted numbers.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::Usage(format!("unknown format {s:?}; expected json or csv"))),
        }
    }
}

impl Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Json => "json",
            Self::Csv => "csv",
        })
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Shortest form of the rounded value; exponent notation for very small
/// or very large magnitudes.
pub fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    let a = r.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Tabular CSV body used instead of the key/value listing.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<BTreeMap<String, f64>>,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            ..Self::default()
        }
    }

    pub fn input(&mut self, key: &str, value: impl Display) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    /// Stores a rounded result; non-finite values become a warning since
    /// JSON has no representation for them.
    pub fn put(&mut self, key: &str, value: f64) {
        if value.is_finite() {
            self.results.insert(key.to_string(), round_sig(value));
        } else {
            self.warnings.push(format!("{key} is not finite ({value})"));
        }
    }

    pub fn set_deltas(&mut self, deltas: BTreeMap<String, f64>) {
        self.deltas = Some(deltas.into_iter().map(|(k, v)| (k, round_sig(v))).collect());
    }

    pub fn success(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record is serializable")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.table {
            Some(t) => {
                out.push_str(&t.header.join(","));
                out.push('\n');
                for row in &t.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
            }
            None => {
                out.push_str("key,value\n");
                for (k, v) in &self.results {
                    out.push_str(&format!("{k},{}\n", fmt_num(*v)));
                }
                if let Some(d) = &self.deltas {
                    for (k, v) in d {
                        out.push_str(&format!("delta.{k},{}\n", fmt_num(*v)));
                    }
                }
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("# warning: {w}\n"));
        }
        for e in &self.errors {
            out.push_str(&format!("# error: {e}\n"));
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = self.to_json();
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(2.0f64 / 7.0), 0.285714285714);
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(-2.5e-20), -2.5e-20);
        assert_eq!(fmt_num(0.25), "0.25");
        assert_eq!(fmt_num(1.663114090891e-13), "1.66311409089e-13");
        assert_eq!(fmt_num(1e-10), "1e-10");
    }

    #[test]
    fn json_round_trip() {
        let mut r = OutputRecord::new("entropy");
        r.input("distribution", "exp(lambda=1)");
        r.put("cre", 1.0000000000001);
        r.put("ce", std::f64::consts::PI.powi(2) / 6.0 - 1.0);
        r.put("upper", f64::INFINITY);
        r.set_deltas([("cre".to_string(), 1e-13)].into_iter().collect());
        let back: OutputRecord = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.results["cre"], 1.0);
    }

    #[test]
    fn schema_fields() {
        let r = OutputRecord::new("harter");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["command", "inputs", "results", "warnings"]);
    }

    #[test]
    fn csv_listing() {
        let mut r = OutputRecord::new("series");
        r.put("lower", 0.5);
        r.warnings.push("w".into());
        assert_eq!(r.to_csv(), "key,value\nlower,0.5\n# warning: w\n");
    }
}
