//! Parent distributions: the builtin catalog, a textual spec language and
//! empirical laws ingested from sample files.

mod empirical;
mod parse;

use std::fmt;
use std::sync::Arc;

pub use empirical::{parse_samples, read_sample_file, EmpiricalSample};
pub use parse::parse_spec;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_over_support, Tolerance};
use crate::real::Real;

/// Closed interval `[lower, upper]` carrying the probability mass; `upper`
/// may be `+inf` and, for the normal law only, `lower` may be `-inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Support<T> {
    pub lower: T,
    pub upper: T,
}

/// First two raw moments and the variance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentPair<T> {
    pub mean: T,
    pub second_moment: T,
    pub variance: T,
}

impl<T: Real> MomentPair<T> {
    pub fn new(mean: T, second_moment: T) -> Self {
        // rounding can leave a tiny negative variance for near-degenerate laws
        let variance = (second_moment - mean * mean).max(T::zero());
        Self {
            mean,
            second_moment,
            variance,
        }
    }

    pub fn std_dev(&self) -> T {
        self.variance.sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family<T> {
    /// `1 - exp(-rate x)` on `x > 0`.
    Exponential { rate: T },
    /// `x / width` on `(0, width)`.
    Uniform { width: T },
    /// `x^exponent` on `(0, 1)`.
    Power { exponent: T },
    /// `x^-2 exp(2 (1 - 1/x))` on `(0, 1)`.
    ReciprocalExponential,
    /// `1 - (x + 1)^-3` on `x > 0` (Lomax with shape 3).
    Lomax3,
    /// `exp(-1 / (e^x - 1))` on `x > 0`.
    ExpReciprocalExpm1,
    StandardNormal,
    Empirical(Arc<EmpiricalSample<T>>),
}

/// An immutable parent distribution with the metadata the bound theorems
/// gate on.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<T> {
    family: Family<T>,
    support: Support<T>,
    symmetric_about: Option<T>,
    dfr: Option<bool>,
    bounded_support: bool,
}

fn positive<T: Real>(kind: &'static str, name: &str, v: T) -> Result<T> {
    if v.is_finite() && v > T::zero() {
        Ok(v)
    } else {
        Err(Error::InvalidParameter {
            kind,
            message: format!("{name} must be finite and > 0, got {v}"),
        })
    }
}

impl<T: Real> Distribution<T> {
    pub fn exponential(rate: T) -> Result<Self> {
        let rate = positive("exp", "lambda", rate)?;
        Ok(Self {
            family: Family::Exponential { rate },
            support: Support {
                lower: T::zero(),
                upper: T::infinity(),
            },
            symmetric_about: None,
            dfr: Some(true),
            bounded_support: false,
        })
    }

    pub fn uniform(width: T) -> Result<Self> {
        let width = positive("uniform", "a", width)?;
        Ok(Self {
            family: Family::Uniform { width },
            support: Support {
                lower: T::zero(),
                upper: width,
            },
            symmetric_about: Some(width / T::lit(2.0)),
            dfr: Some(false),
            bounded_support: true,
        })
    }

    pub fn power(exponent: T) -> Result<Self> {
        let exponent = positive("power", "k", exponent)?;
        Ok(Self {
            family: Family::Power { exponent },
            support: Support {
                lower: T::zero(),
                upper: T::one(),
            },
            symmetric_about: None,
            dfr: Some(false),
            bounded_support: true,
        })
    }

    pub fn reciprocal_exponential() -> Self {
        Self {
            family: Family::ReciprocalExponential,
            support: Support {
                lower: T::zero(),
                upper: T::one(),
            },
            symmetric_about: None,
            dfr: None,
            bounded_support: true,
        }
    }

    pub fn lomax3() -> Self {
        Self {
            family: Family::Lomax3,
            support: Support {
                lower: T::zero(),
                upper: T::infinity(),
            },
            symmetric_about: None,
            dfr: Some(true),
            bounded_support: false,
        }
    }

    pub fn exp_reciprocal_expm1() -> Self {
        Self {
            family: Family::ExpReciprocalExpm1,
            support: Support {
                lower: T::zero(),
                upper: T::infinity(),
            },
            symmetric_about: None,
            dfr: None,
            bounded_support: false,
        }
    }

    /// Standard normal. Only order-statistic moments accept it; the
    /// entropy routines reject its negative support.
    pub fn standard_normal() -> Self {
        Self {
            family: Family::StandardNormal,
            support: Support {
                lower: T::neg_infinity(),
                upper: T::infinity(),
            },
            symmetric_about: None,
            dfr: None,
            bounded_support: false,
        }
    }

    /// Right-continuous empirical law of a non-negative sample.
    pub fn empirical(data: Vec<T>) -> Result<Self> {
        let sample = EmpiricalSample::new(data)?;
        Ok(Self::from_sample(Arc::new(sample)))
    }

    pub fn from_sample(sample: Arc<EmpiricalSample<T>>) -> Self {
        let support = Support {
            lower: T::zero(),
            upper: sample.max(),
        };
        Self {
            family: Family::Empirical(sample),
            support,
            symmetric_about: None,
            dfr: None,
            bounded_support: true,
        }
    }

    /// Row `1..=6` of the reliability table: exp(1), uniform(0,1), the
    /// reciprocal-exponential law, Lomax(3), x² on (0,1), exp(-1/(eˣ-1)).
    pub fn table1_row(row: usize) -> Result<Self> {
        match row {
            1 => Self::exponential(T::one()),
            2 => Self::uniform(T::one()),
            3 => Ok(Self::reciprocal_exponential()),
            4 => Ok(Self::lomax3()),
            5 => Self::power(T::lit(2.0)),
            6 => Ok(Self::exp_reciprocal_expm1()),
            _ => Err(Error::InvalidParameter {
                kind: "table1",
                message: format!("row must be in 1..=6, got {row}"),
            }),
        }
    }

    pub fn family(&self) -> &Family<T> {
        &self.family
    }

    pub fn kind_id(&self) -> &'static str {
        match self.family {
            Family::Exponential { .. } => "exp",
            Family::Uniform { .. } => "uniform",
            Family::Power { .. } => "power",
            Family::ReciprocalExponential => "table1:row3",
            Family::Lomax3 => "table1:row4",
            Family::ExpReciprocalExpm1 => "table1:row6",
            Family::StandardNormal => "normal",
            Family::Empirical(_) => "empirical",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, T)> {
        match &self.family {
            Family::Exponential { rate } => vec![("lambda", *rate)],
            Family::Uniform { width } => vec![("a", *width)],
            Family::Power { exponent } => vec![("k", *exponent)],
            Family::Empirical(s) => vec![("n", T::from_usize_lossy(s.len()))],
            _ => Vec::new(),
        }
    }

    pub fn support(&self) -> Support<T> {
        self.support
    }

    pub fn symmetric_about(&self) -> Option<T> {
        self.symmetric_about
    }

    pub fn dfr(&self) -> Option<bool> {
        self.dfr
    }

    pub fn bounded_support(&self) -> bool {
        self.bounded_support
    }

    pub fn is_empirical(&self) -> bool {
        matches!(self.family, Family::Empirical(_))
    }

    pub fn empirical_sample(&self) -> Option<&EmpiricalSample<T>> {
        match &self.family {
            Family::Empirical(s) => Some(s),
            _ => None,
        }
    }

    pub fn has_nonnegative_support(&self) -> bool {
        self.support.lower >= T::zero()
    }

    pub fn cdf(&self, x: T) -> T {
        if x.is_nan() {
            return x;
        }
        let zero = T::zero();
        let one = T::one();
        match &self.family {
            Family::Exponential { rate } => {
                if x <= zero {
                    zero
                } else {
                    -(-*rate * x).exp_m1()
                }
            }
            Family::Uniform { width } => (x / *width).max(zero).min(one),
            Family::Power { exponent } => {
                if x <= zero {
                    zero
                } else if x >= one {
                    one
                } else {
                    x.powf(*exponent)
                }
            }
            Family::ReciprocalExponential => {
                if x <= zero {
                    zero
                } else if x >= one {
                    one
                } else {
                    reciprocal_exponential_log_cdf(x).exp()
                }
            }
            Family::Lomax3 => {
                if x <= zero {
                    zero
                } else {
                    -(T::lit(-3.0) * x.ln_1p()).exp_m1()
                }
            }
            Family::ExpReciprocalExpm1 => {
                if x <= zero {
                    zero
                } else {
                    (-x.exp_m1().recip()).exp()
                }
            }
            Family::StandardNormal => T::lit(0.5) * (-x / T::SQRT_2()).erfc(),
            Family::Empirical(s) => s.cdf(x),
        }
    }

    /// Survival function `1 - F(x)`, evaluated without cancellation.
    pub fn sf(&self, x: T) -> T {
        if x.is_nan() {
            return x;
        }
        let zero = T::zero();
        let one = T::one();
        match &self.family {
            Family::Exponential { rate } => {
                if x <= zero {
                    one
                } else {
                    (-*rate * x).exp()
                }
            }
            Family::Uniform { width } => (one - x / *width).max(zero).min(one),
            Family::Power { exponent } => {
                if x <= zero {
                    one
                } else if x >= one {
                    zero
                } else {
                    -(*exponent * x.ln()).exp_m1()
                }
            }
            Family::ReciprocalExponential => {
                if x <= zero {
                    one
                } else if x >= one {
                    zero
                } else {
                    -reciprocal_exponential_log_cdf(x).exp_m1()
                }
            }
            Family::Lomax3 => {
                if x <= zero {
                    one
                } else {
                    (T::lit(-3.0) * x.ln_1p()).exp()
                }
            }
            Family::ExpReciprocalExpm1 => {
                if x <= zero {
                    one
                } else {
                    -(-x.exp_m1().recip()).exp_m1()
                }
            }
            Family::StandardNormal => T::lit(0.5) * (x / T::SQRT_2()).erfc(),
            Family::Empirical(s) => s.sf(x),
        }
    }

    /// Density. Empirical laws have none and return a capability error.
    pub fn pdf(&self, x: T) -> Result<T> {
        let zero = T::zero();
        let one = T::one();
        let outside = x < self.support.lower || x > self.support.upper;
        Ok(match &self.family {
            Family::Empirical(_) => return Err(Error::Capability("density")),
            _ if outside => zero,
            Family::Exponential { rate } => *rate * (-*rate * x).exp(),
            Family::Uniform { width } => width.recip(),
            Family::Power { exponent } => {
                if x == zero {
                    if *exponent < one {
                        T::infinity()
                    } else if *exponent == one {
                        one
                    } else {
                        zero
                    }
                } else {
                    *exponent * x.powf(*exponent - one)
                }
            }
            Family::ReciprocalExponential => {
                if x == zero {
                    zero
                } else {
                    self.cdf(x) * T::lit(2.0) * (one - x) / (x * x)
                }
            }
            Family::Lomax3 => T::lit(3.0) * (T::lit(-4.0) * x.ln_1p()).exp(),
            Family::ExpReciprocalExpm1 => {
                if x == zero {
                    zero
                } else {
                    // e^x / (e^x - 1)² = e^-x / (1 - e^-x)²
                    let t = (-x).exp();
                    let d = -(-x).exp_m1();
                    self.cdf(x) * t / (d * d)
                }
            }
            Family::StandardNormal => (T::lit(-0.5) * x * x).exp() / (T::lit(2.0) * T::PI()).sqrt(),
        })
    }

    /// Inverse cdf on the open unit interval.
    pub fn quantile(&self, p: T) -> Result<T> {
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::Domain {
                what: "quantile probability",
                value: p.to_f64_lossy(),
            });
        }
        let one = T::one();
        Ok(match &self.family {
            Family::Exponential { rate } => -(-p).ln_1p() / *rate,
            Family::Uniform { width } => p * *width,
            Family::Power { exponent } => p.powf(exponent.recip()),
            Family::ReciprocalExponential => self.bisect_quantile(p, T::zero(), one),
            Family::Lomax3 => ((-p).ln_1p() / T::lit(-3.0)).exp_m1(),
            Family::ExpReciprocalExpm1 => (-p.ln().recip()).ln_1p(),
            Family::StandardNormal => {
                let span = T::lit(40.0);
                self.bisect_quantile(p, -span, span)
            }
            Family::Empirical(s) => s.quantile(p),
        })
    }

    fn bisect_quantile(&self, p: T, mut lo: T, mut hi: T) -> T {
        let half = T::lit(0.5);
        let abs_floor = T::lit(1e-12);
        for _ in 0..300 {
            let mid = half * (lo + hi);
            let resolution = abs_floor.max(T::lit(4.0) * T::epsilon() * mid.abs());
            if hi - lo <= resolution || mid == lo || mid == hi {
                break;
            }
            // compare on the smaller tail to keep resolution near p = 1
            let below = if p > half {
                self.sf(mid) > T::one() - p
            } else {
                self.cdf(mid) < p
            };
            if below {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        half * (lo + hi)
    }

    /// Raw moment `E(X^order)`; closed forms where the catalog has them,
    /// otherwise `∫ order x^(order-1) F̄(x) dx`.
    pub fn raw_moment(&self, order: u32) -> Result<T> {
        if order == 0 {
            return Ok(T::one());
        }
        let k = T::from_u32(order).expect("small integer");
        let factorial = |j: u32| (1..=j).fold(T::one(), |acc, i| acc * T::from_u32(i).unwrap());
        match &self.family {
            Family::Exponential { rate } => Ok(factorial(order) / rate.powi(order as i32)),
            Family::Uniform { width } => Ok(width.powi(order as i32) / (k + T::one())),
            Family::Power { exponent } => Ok(*exponent / (*exponent + k)),
            Family::Lomax3 => match order {
                1 => Ok(T::lit(0.5)),
                2 => Ok(T::one()),
                _ => Err(Error::MomentUndefined {
                    kind: self.to_string(),
                    order,
                }),
            },
            Family::StandardNormal => Ok(if order % 2 == 1 {
                T::zero()
            } else {
                // (order - 1)!!
                (1..order).step_by(2).fold(T::one(), |acc, i| acc * T::from_u32(i).unwrap())
            }),
            Family::Empirical(s) => Ok(s.raw_moment(order)),
            Family::ReciprocalExponential | Family::ExpReciprocalExpm1 => {
                let tol = Tolerance::default();
                let r = integrate_over_support(
                    self,
                    |x| {
                        let s = self.sf(x);
                        if s == T::zero() {
                            T::zero()
                        } else {
                            k * x.powi(order as i32 - 1) * s
                        }
                    },
                    &tol,
                )?;
                if !r.converged {
                    return Err(Error::MomentUndefined {
                        kind: self.to_string(),
                        order,
                    });
                }
                Ok(r.value)
            }
        }
    }

    /// Mean, second moment and variance.
    pub fn moments(&self) -> Result<MomentPair<T>> {
        Ok(MomentPair::new(self.raw_moment(1)?, self.raw_moment(2)?))
    }

    /// Median, used as the mapping scale for infinite-range quadrature.
    pub fn characteristic_scale(&self) -> T {
        match self.quantile(T::lit(0.5)) {
            Ok(m) if m > T::zero() && m.is_finite() => m,
            _ => T::one(),
        }
    }
}

/// log F for the reciprocal-exponential row: 2 - 2/x - 2 log x.
fn reciprocal_exponential_log_cdf<T: Real>(x: T) -> T {
    let two = T::lit(2.0);
    two - two / x - two * x.ln()
}

impl<T: Real> fmt::Display for Distribution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() || self.is_empirical() {
            if let Family::Empirical(s) = &self.family {
                return write!(f, "empirical(n={})", s.len());
            }
            return write!(f, "{}", self.kind_id());
        }
        write!(f, "{}(", self.kind_id())?;
        for (i, (name, value)) in params.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{name}={value}")?;
        }
        write!(f, ")")
    }
}
