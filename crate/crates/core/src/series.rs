//! Truncated series over extreme order-statistic moments with certified
//! brackets.
//!
//! Each kind sums `moment(n+1) / (n(n+1))` for `n = 1..=m`. The dropped
//! terms are non-negative, which fixes one side of the bracket; the other
//! side adds a closed-form majorant of the dropped tail.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{hdg_tail_integral, range_tail_integral};
use crate::distributions::{Distribution, MomentPair};
use crate::entropies::EntropyKind;
use crate::error::{Error, Result};
use crate::order_stats::{Extreme, ExtremeMoments};
use crate::quadrature::Tolerance;
use crate::real::Real;
use crate::sum::CompensatedSum;

/// Default truncation cap for [`converge`].
pub const DEFAULT_M_MAX: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Cre,
    Ce,
    Wcre,
    Wce,
    /// CRE + CE through the range series.
    Sum,
}

impl SeriesKind {
    pub const ALL: [SeriesKind; 5] = [Self::Cre, Self::Ce, Self::Wcre, Self::Wce, Self::Sum];

    pub fn name(self) -> &'static str {
        match self {
            Self::Cre => "cre",
            Self::Ce => "ce",
            Self::Wcre => "wcre",
            Self::Wce => "wce",
            Self::Sum => "sum",
        }
    }

    /// The entropy the series converges to; `None` for the sum.
    pub fn entropy_kind(self) -> Option<EntropyKind> {
        match self {
            Self::Cre => Some(EntropyKind::Cre),
            Self::Ce => Some(EntropyKind::Ce),
            Self::Wcre => Some(EntropyKind::Wcre),
            Self::Wce => Some(EntropyKind::Wce),
            Self::Sum => None,
        }
    }

    fn order(self) -> u32 {
        match self {
            Self::Wcre | Self::Wce => 2,
            _ => 1,
        }
    }

    /// Partial sums bound the value from below (else from above).
    fn partial_is_lower(self) -> bool {
        matches!(self, Self::Cre | Self::Wcre | Self::Sum)
    }
}

impl From<EntropyKind> for SeriesKind {
    fn from(k: EntropyKind) -> Self {
        match k {
            EntropyKind::Cre => Self::Cre,
            EntropyKind::Ce => Self::Ce,
            EntropyKind::Wcre => Self::Wcre,
            EntropyKind::Wce => Self::Wce,
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Usage(format!("unknown series kind {s:?}; expected cre, ce, wcre, wce or sum")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesTerm<T> {
    pub n: usize,
    /// 1/(n(n+1)).
    pub weight: T,
    /// Moment of the extreme of a sample of size n+1 (the range for the sum).
    pub moment: T,
    pub contribution: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesApproximation<T> {
    pub kind: SeriesKind,
    pub m: usize,
    pub terms: Vec<SeriesTerm<T>>,
    pub partial_sum: T,
    pub point_estimate: T,
    pub lower: T,
    pub upper: T,
    /// False when no tail majorant was available; `upper` is then `+inf`.
    pub upper_certified: bool,
    /// σ = 0: every field is zero.
    pub degenerate: bool,
    /// Whether the requested width was reached (always true for a fixed m).
    pub converged: bool,
}

impl<T: Real> SeriesApproximation<T> {
    pub fn width(&self) -> T {
        self.upper - self.lower
    }

    pub fn contains(&self, x: T) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Second-moment majorants for the WCRE tail.
struct WcreTail<T> {
    /// √(E X⁴ − (E X²)²), when E X⁴ is finite.
    sigma_sq: Option<T>,
    /// Upper end of a bounded support.
    bound: Option<T>,
}

struct Engine<'a, T> {
    kind: SeriesKind,
    moments: ExtremeMoments<'a, T>,
    pair: MomentPair<T>,
    sigma: T,
    wcre: WcreTail<T>,
}

fn weight<T: Real>(n: usize) -> T {
    let n = T::from_usize_lossy(n);
    T::one() / (n * (n + T::one()))
}

impl<'a, T: Real> Engine<'a, T> {
    fn new(dist: &'a Distribution<T>, kind: SeriesKind, tol: &Tolerance<T>) -> Result<Self> {
        if !dist.has_nonnegative_support() {
            return Err(Error::NegativeSupport(dist.to_string()));
        }
        let pair = dist.moments()?;
        let wcre = if kind == SeriesKind::Wcre {
            let sigma_sq = dist
                .raw_moment(4)
                .ok()
                .filter(|m4| m4.is_finite())
                .map(|m4| (m4 - pair.second_moment * pair.second_moment).max(T::zero()).sqrt());
            let upper = dist.support().upper;
            WcreTail {
                sigma_sq,
                bound: upper.is_finite().then_some(upper),
            }
        } else {
            WcreTail {
                sigma_sq: None,
                bound: None,
            }
        };
        Ok(Self {
            kind,
            moments: ExtremeMoments::new(dist, *tol),
            pair,
            sigma: pair.std_dev(),
            wcre,
        })
    }

    fn degenerate(&self) -> bool {
        self.pair.variance <= T::lit(64.0) * T::epsilon() * self.pair.second_moment
    }

    /// Moments feeding terms `first..first+count`, i.e. sample sizes n+1.
    fn term_moments(&self, first: usize, count: usize) -> Result<Vec<T>> {
        let sizes: Vec<usize> = (first + 1..first + 1 + count).collect();
        let order = self.kind.order();
        match self.kind {
            SeriesKind::Cre | SeriesKind::Wcre => self.moments.moments_for(Extreme::Largest, &sizes, order),
            SeriesKind::Ce | SeriesKind::Wce => self.moments.moments_for(Extreme::Smallest, &sizes, order),
            SeriesKind::Sum => {
                let top = self.moments.moments_for(Extreme::Largest, &sizes, 1)?;
                let bottom = self.moments.moments_for(Extreme::Smallest, &sizes, 1)?;
                Ok(top.into_iter().zip(bottom).map(|(a, b)| a - b).collect())
            }
        }
    }

    /// HDG-based majorant of Σ_{n>m} E(Y_{n+1:n+1})/(n(n+1)).
    fn hdg_tail(m: usize, mean: T, sigma: T) -> T {
        let mf = T::from_usize_lossy(m);
        sigma * T::lit(hdg_tail_integral(m as f64)) + mean / (mf + T::one())
    }

    /// Majorant of the dropped tail of the raw sum, or `None`.
    /// `next` is the moment feeding term m+1.
    fn tail(&self, m: usize, next: T) -> Option<T> {
        let mf = T::from_usize_lossy(m);
        match self.kind {
            SeriesKind::Cre => Some(Self::hdg_tail(m, self.pair.mean, self.sigma)),
            // minimum moments are nonincreasing in the sample size
            SeriesKind::Ce | SeriesKind::Wce => Some(next / (mf + T::one())),
            SeriesKind::Wcre => {
                let via_square = self.wcre.sigma_sq.map(|s| Self::hdg_tail(m, self.pair.second_moment, s));
                // X² ≤ bX on [0, b]
                let via_bound = self.wcre.bound.map(|b| b * Self::hdg_tail(m, self.pair.mean, self.sigma));
                match (via_square, via_bound) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                }
            }
            SeriesKind::Sum => Some(self.sigma * T::SQRT_2() * T::lit(range_tail_integral(m as f64))),
        }
    }

    /// (point, lower, upper, upper_certified) from a partial sum.
    fn assemble(&self, m: usize, partial: T, next: T) -> (T, T, T, bool) {
        let half = T::lit(0.5);
        let tail = self.tail(m, next);
        let (point, scale) = match self.kind {
            SeriesKind::Cre => (partial - self.pair.mean, T::one()),
            SeriesKind::Ce => (self.pair.mean - partial, T::one()),
            SeriesKind::Wcre => (half * (partial - self.pair.second_moment), half),
            SeriesKind::Wce => (half * (self.pair.second_moment - partial), half),
            SeriesKind::Sum => (partial, T::one()),
        };
        if self.kind.partial_is_lower() {
            match tail {
                Some(t) => (point, point, point + scale * t, true),
                None => (point, point, T::infinity(), false),
            }
        } else {
            let t = tail.expect("minimum-side tails always exist");
            (point, point - scale * t, point, true)
        }
    }

    fn needs_next(&self) -> bool {
        matches!(self.kind, SeriesKind::Ce | SeriesKind::Wce)
    }

    fn zero(&self, m: usize) -> SeriesApproximation<T> {
        SeriesApproximation {
            kind: self.kind,
            m,
            terms: Vec::new(),
            partial_sum: T::zero(),
            point_estimate: T::zero(),
            lower: T::zero(),
            upper: T::zero(),
            upper_certified: true,
            degenerate: true,
            converged: true,
        }
    }

    fn build(&self, moments: &[T], m: usize, partial: T, converged: bool) -> SeriesApproximation<T> {
        let next = if self.needs_next() { moments[m] } else { T::zero() };
        let (point_estimate, lower, upper, upper_certified) = self.assemble(m, partial, next);
        let terms = moments[..m]
            .iter()
            .enumerate()
            .map(|(i, &moment)| {
                let w = weight::<T>(i + 1);
                SeriesTerm {
                    n: i + 1,
                    weight: w,
                    moment,
                    contribution: w * moment,
                }
            })
            .collect();
        SeriesApproximation {
            kind: self.kind,
            m,
            terms,
            partial_sum: partial,
            point_estimate,
            lower,
            upper,
            upper_certified,
            degenerate: false,
            converged,
        }
    }
}

/// Series of `kind` truncated after `m` terms.
pub fn series<T: Real>(dist: &Distribution<T>, kind: SeriesKind, m: usize, tol: &Tolerance<T>) -> Result<SeriesApproximation<T>> {
    if m == 0 {
        return Err(Error::Usage("truncation m must be >= 1".into()));
    }
    let engine = Engine::new(dist, kind, tol)?;
    if engine.degenerate() {
        return Ok(engine.zero(m));
    }
    let count = if engine.needs_next() { m + 1 } else { m };
    let moments = engine.term_moments(1, count)?;
    let partial = moments[..m]
        .iter()
        .enumerate()
        .map(|(i, &mu)| weight::<T>(i + 1) * mu)
        .collect::<CompensatedSum<T>>()
        .value();
    Ok(engine.build(&moments, m, partial, true))
}

pub fn cre_series<T: Real>(dist: &Distribution<T>, m: usize, tol: &Tolerance<T>) -> Result<SeriesApproximation<T>> {
    series(dist, SeriesKind::Cre, m, tol)
}

pub fn ce_series<T: Real>(dist: &Distribution<T>, m: usize, tol: &Tolerance<T>) -> Result<SeriesApproximation<T>> {
    series(dist, SeriesKind::Ce, m, tol)
}

pub fn wcre_series<T: Real>(dist: &Distribution<T>, m: usize, tol: &Tolerance<T>) -> Result<SeriesApproximation<T>> {
    series(dist, SeriesKind::Wcre, m, tol)
}

pub fn wce_series<T: Real>(dist: &Distribution<T>, m: usize, tol: &Tolerance<T>) -> Result<SeriesApproximation<T>> {
    series(dist, SeriesKind::Wce, m, tol)
}

pub fn sum_identity<T: Real>(dist: &Distribution<T>, m: usize, tol: &Tolerance<T>) -> Result<SeriesApproximation<T>> {
    series(dist, SeriesKind::Sum, m, tol)
}

/// Partial sums in the product form Σ μ/(n(n+1)) and the difference form
/// Σ (1/n − 1/(n+1)) μ.
pub fn partial_sum_forms<T: Real>(dist: &Distribution<T>, kind: SeriesKind, m: usize, tol: &Tolerance<T>) -> Result<(T, T)> {
    if m == 0 {
        return Err(Error::Usage("truncation m must be >= 1".into()));
    }
    let engine = Engine::new(dist, kind, tol)?;
    let moments = engine.term_moments(1, m)?;
    let mut product = CompensatedSum::new();
    let mut difference = CompensatedSum::new();
    for (i, &mu) in moments.iter().enumerate() {
        let n = T::from_usize_lossy(i + 1);
        product.add(mu / (n * (n + T::one())));
        difference.add((n.recip() - (n + T::one()).recip()) * mu);
    }
    Ok((product.value(), difference.value()))
}

/// Smallest `m <= m_max` whose bracket is at most `target_width` wide;
/// otherwise the `m_max` result with `converged = false`.
pub fn converge<T: Real>(
    dist: &Distribution<T>,
    kind: SeriesKind,
    target_width: T,
    m_max: usize,
    tol: &Tolerance<T>,
) -> Result<SeriesApproximation<T>> {
    if target_width.is_nan() || target_width <= T::zero() {
        return Err(Error::Usage("target width must be > 0".into()));
    }
    if m_max == 0 {
        return Err(Error::Usage("m_max must be >= 1".into()));
    }
    let engine = Engine::new(dist, kind, tol)?;
    if engine.degenerate() {
        return Ok(engine.zero(1));
    }
    let extra = usize::from(engine.needs_next());
    let mut moments: Vec<T> = Vec::new();
    let mut block = 64usize;
    let mut acc = CompensatedSum::new();
    for m in 1..=m_max {
        if moments.len() < m + extra {
            let have = moments.len();
            let want = (have + block).min(m_max + extra).max(m + extra);
            moments.extend(engine.term_moments(have + 1, want - have)?);
            block = (block * 2).min(1 << 16);
        }
        acc.add(weight::<T>(m) * moments[m - 1]);
        let next = if extra == 1 { moments[m] } else { T::zero() };
        let (_, lower, upper, _) = engine.assemble(m, acc.value(), next);
        if upper - lower <= target_width {
            return Ok(engine.build(&moments, m, acc.value(), true));
        }
    }
    Ok(engine.build(&moments, m_max, acc.value(), false))
}
