use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::sum::compensated_sum;

/// A sorted non-negative sample backing an empirical distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalSample<T> {
    sorted: Vec<T>,
}

impl<T: Real> EmpiricalSample<T> {
    pub fn new(mut data: Vec<T>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Ingestion {
                line: 0,
                message: "sample is empty".into(),
            });
        }
        if let Some((i, v)) = data.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < T::zero()) {
            return Err(Error::Ingestion {
                line: i + 1,
                message: format!("value {v} is not a finite non-negative number"),
            });
        }
        data.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(Self { sorted: data })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    pub fn max(&self) -> T {
        *self.sorted.last().expect("non-empty")
    }

    fn count_le(&self, x: T) -> usize {
        self.sorted.partition_point(|v| *v <= x)
    }

    pub fn cdf(&self, x: T) -> T {
        T::from_usize_lossy(self.count_le(x)) / T::from_usize_lossy(self.len())
    }

    pub fn sf(&self, x: T) -> T {
        T::from_usize_lossy(self.len() - self.count_le(x)) / T::from_usize_lossy(self.len())
    }

    /// Generalized inverse `inf { x : F(x) >= p }`.
    pub fn quantile(&self, p: T) -> T {
        let n = T::from_usize_lossy(self.len());
        let rank = (n * p).ceil().to_usize().unwrap_or(1).clamp(1, self.len());
        self.sorted[rank - 1]
    }

    pub fn raw_moment(&self, order: u32) -> T {
        let n = T::from_usize_lossy(self.len());
        compensated_sum(self.sorted.iter().map(|v| v.powi(order as i32))) / n
    }

    /// Piecewise-constant pieces of the step cdf between consecutive
    /// distinct values: `(left, right, F on [left, right))`. The region
    /// below the minimum (F = 0) and above the maximum (F = 1) is omitted.
    pub fn gaps(&self) -> Vec<(T, T, T)> {
        let n = T::from_usize_lossy(self.len());
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.sorted.len() {
            let left = self.sorted[i];
            let mut j = i;
            while j < self.sorted.len() && self.sorted[j] == left {
                j += 1;
            }
            if j < self.sorted.len() {
                out.push((left, self.sorted[j], T::from_usize_lossy(j) / n));
            }
            i = j;
        }
        out
    }

    pub fn distinct_values(&self) -> usize {
        self.gaps().len() + 1
    }
}

/// Parses the plain-text sample format: one non-negative decimal per line,
/// `#` comment lines and blank lines ignored.
pub fn parse_samples<T: Real, R: BufRead>(reader: R) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let value: f64 = text.parse().map_err(|_| Error::Ingestion {
            line: i + 1,
            message: format!("not a decimal number: {text:?}"),
        })?;
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Ingestion {
                line: i + 1,
                message: format!("value {value} is not a finite non-negative number"),
            });
        }
        out.push(T::lit(value));
    }
    if out.is_empty() {
        return Err(Error::Ingestion {
            line: 0,
            message: "no sample values found".into(),
        });
    }
    Ok(out)
}

pub fn read_sample_file<T: Real, P: AsRef<Path>>(path: P) -> Result<Vec<T>> {
    let file = std::fs::File::open(path)?;
    parse_samples(std::io::BufReader::new(file))
}
