//! Cumulative residual entropy, cumulative entropy and their weighted
//! variants for non-negative laws.
//!
//! Two independent routes are provided: adaptive quadrature of the
//! defining integrals ([`entropies`]) and truncated series over moments of
//! extreme order statistics with certified brackets ([`series`]). The
//! [`bounds`] module evaluates moment-based upper and lower bounds.
//!
//! Numerics are generic over [`Real`] (`f32`, `f64`); the aliases below fix
//! the scalar to `f64` or `f32`.
//!
//! ```
//! use cumentropy::{cre, Distribution64, Tolerance64};
//!
//! let d = Distribution64::exponential(2.0).unwrap();
//! let v = cre(&d, &Tolerance64::default()).unwrap();
//! assert!((v.value - 0.5).abs() < 1e-9);
//! ```

pub mod bounds;
pub mod commands;
pub mod distributions;
pub mod entropies;
pub mod error;
pub mod exact;
pub mod order_stats;
pub mod quadrature;
pub mod real;
pub mod series;
pub mod sum;

pub use bounds::{check_all, BoundEntry, BoundReport};
pub use distributions::{parse_spec, Distribution, MomentPair, Support};
pub use entropies::{ce, cre, entropy, wce, wcre, EntropyKind, EntropyValue, Method};
pub use error::{Error, Result};
pub use order_stats::{Extreme, ExtremeMoments, MomentRecord};
pub use quadrature::{IntegralResult, Tolerance};
pub use real::Real;
pub use series::{converge, SeriesApproximation, SeriesKind};

pub type Distribution64 = Distribution<f64>;
pub type Distribution32 = Distribution<f32>;
pub type Tolerance64 = Tolerance<f64>;
pub type Tolerance32 = Tolerance<f32>;
pub type EntropyValue64 = EntropyValue<f64>;
pub type SeriesApproximation64 = SeriesApproximation<f64>;
pub type BoundReport64 = BoundReport<f64>;
pub type IntegralResult64 = IntegralResult<f64>;
