//! Extreme-value moment bounds and the entropy bounds built on them.
//!
//! The raw bound functions compute regardless of applicability; gating by
//! symmetry, DFR and bounded-support metadata happens in [`check_all`].

mod constants;
pub mod special;

use std::fmt;

use serde::Serialize;

pub use constants::{
    hdg_constant, range_constant, symmetric_bounded_constant, symmetric_constant,
    CertifiedConstant, CONSTANT_ACCURACY,
};
pub(crate) use constants::{hdg_tail_integral, range_tail_integral};
pub use special::complete_beta;

use crate::distributions::Distribution;
use crate::entropies::{ce, cre};
use crate::error::{Error, Result};
use crate::quadrature::Tolerance;
use crate::real::Real;
use crate::series::{ce_series, cre_series};
use crate::sum::CompensatedSum;

/// Absolute slack absorbed when comparing a measured value with a bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// Truncation used by the finite-series entries of the report.
pub const REPORT_SERIES_TERMS: usize = 10;

/// Hartley–David–Gumbel: μ_{n:n} ≤ σ(n−1)/√(2n−1) + μ.
pub fn hdg_extreme_bound<T: Real>(n: usize, mu: T, sigma: T) -> T {
    assert!(n >= 1, "sample size must be >= 1");
    let nf = T::from_usize_lossy(n);
    sigma * (nf - T::one()) / (T::lit(2.0) * nf - T::one()).sqrt() + mu
}

pub fn cre_upper_hdg<T: Real>(sigma: T) -> T {
    sigma * T::lit(hdg_constant().value)
}

/// Lower bound on CE for DFR laws: μ − √(E X²)/√2 · (2 − π²/6).
pub fn ce_lower_dfr<T: Real>(mean: T, second_moment: T) -> T {
    let k = T::lit(2.0) - T::PI() * T::PI() / T::lit(6.0);
    mean - second_moment.sqrt() / T::SQRT_2() * k
}

pub fn c_of_n<T: Real>(n: usize) -> T {
    T::lit(constants::c_of_n(n))
}

/// μ_{n:n} ≤ ½ σ n c(n) + μ for symmetric laws with bounded support.
pub fn dn_extreme_bound<T: Real>(n: usize, mu: T, sigma: T) -> T {
    sigma * T::from_usize_lossy(n) * c_of_n::<T>(n) / T::lit(2.0) + mu
}

pub fn cre_upper_symmetric_bounded<T: Real>(sigma: T) -> T {
    sigma * T::lit(symmetric_bounded_constant().value)
}

/// μ_{n:n} ≤ σ n/√2 · √(1/(2n−1) − B(n,n)) + μ for symmetric laws.
pub fn ab_extreme_bound<T: Real>(n: usize, mu: T, sigma: T) -> T {
    assert!(n >= 1, "sample size must be >= 1");
    let nf = T::from_usize_lossy(n);
    let inner = (T::one() / (T::lit(2.0) * nf - T::one()) - complete_beta::<T>(n)).max(T::zero());
    sigma * nf / T::SQRT_2() * inner.sqrt() + mu
}

/// Symmetric-law range bound: μ_{n:n} − μ_{1:n} ≤ σ n√2 · √(1/(2n−1) − B(n,n)).
pub fn ab_range_bound<T: Real>(n: usize, sigma: T) -> T {
    T::lit(2.0) * (ab_extreme_bound(n, T::zero(), sigma))
}

pub fn cre_upper_symmetric<T: Real>(sigma: T) -> T {
    sigma * T::lit(symmetric_constant().value)
}

/// (1/√2) Σ_{n=1}^m (1/n)√(1/(2n+1) − B(n+1,n+1)).
pub fn ab_symmetric_partial<T: Real>(m: usize) -> T {
    let s: CompensatedSum<T> = (1..=m).map(|n| T::lit(constants::symmetric_term(n))).collect();
    s.value() / T::SQRT_2()
}

/// μ_{n+1:n+1} − μ_{1:n+1} ≤ σ√(2(n+1)).
pub fn range_bound<T: Real>(n_plus_1: usize, sigma: T) -> T {
    sigma * (T::lit(2.0) * T::from_usize_lossy(n_plus_1)).sqrt()
}

pub fn sum_upper<T: Real>(sigma: T) -> T {
    sigma * T::lit(range_constant().value)
}

pub fn sum_upper_symmetric<T: Real>(sigma: T) -> T {
    T::lit(2.0) * cre_upper_symmetric(sigma)
}

/// δ_j = Σ_{k=1}^j 1/(n+1−k).
pub fn rychlik_delta<T: Real>(j: usize, n: usize) -> T {
    assert!(1 <= j && j <= n, "need 1 <= j <= n");
    (1..=j).map(|k| T::one() / T::from_usize_lossy(n + 1 - k)).collect::<CompensatedSum<T>>().value()
}

/// Whether the δ_j ≤ 2 condition holds.
pub fn rychlik_condition(j: usize, n: usize) -> bool {
    rychlik_delta::<f64>(j, n) <= 2.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundDirection {
    Upper,
    Lower,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundEntry<T> {
    pub name: &'static str,
    pub direction: BoundDirection,
    pub applicable: bool,
    pub reason: String,
    pub bound_value: T,
    pub measured_value: T,
    /// Comparison outcome with [`BOUND_SLACK`]; computed even when the
    /// entry is not applicable.
    pub satisfied: bool,
    /// bound − measured for upper bounds, measured − bound for lower ones.
    pub slack: T,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport<T> {
    pub distribution: String,
    pub mean: T,
    pub sigma: T,
    pub cre: Option<T>,
    pub ce: Option<T>,
    pub entries: Vec<BoundEntry<T>>,
}

impl<T: Real> BoundReport<T> {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry<T>> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// True when every applicable entry evaluated and holds.
    pub fn all_applicable_satisfied(&self) -> bool {
        self.entries
            .iter()
            .filter(|e| e.applicable)
            .all(|e| e.error.is_none() && e.satisfied)
    }
}

impl<T: Real> fmt::Display for BoundReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (mean {}, sigma {})", self.distribution, self.mean, self.sigma)?;
        for e in &self.entries {
            let status = match (&e.error, e.applicable, e.satisfied) {
                (Some(err), _, _) => format!("error: {err}"),
                (None, false, _) => format!("n/a ({})", e.reason),
                (None, true, true) => "ok".to_string(),
                (None, true, false) => "VIOLATED".to_string(),
            };
            writeln!(
                f,
                "  {:<32} bound {:>12.6} measured {:>12.6}  {status}",
                e.name,
                e.bound_value.to_f64_lossy(),
                e.measured_value.to_f64_lossy()
            )?;
        }
        Ok(())
    }
}

fn compare<T: Real>(direction: BoundDirection, bound: T, measured: T) -> (bool, T) {
    let slack = match direction {
        BoundDirection::Upper => bound - measured,
        BoundDirection::Lower => measured - bound,
    };
    (slack >= -T::lit(BOUND_SLACK), slack)
}

struct Gate {
    applicable: bool,
    reason: String,
}

impl Gate {
    fn always(reason: &str) -> Self {
        Gate {
            applicable: true,
            reason: reason.to_string(),
        }
    }
}

fn entry<T: Real>(
    name: &'static str,
    direction: BoundDirection,
    gate: Gate,
    bound: Result<T>,
    measured: &Result<T>,
) -> BoundEntry<T> {
    match (bound, measured) {
        (Ok(b), Ok(m)) => {
            let (satisfied, slack) = compare(direction, b, *m);
            BoundEntry {
                name,
                direction,
                applicable: gate.applicable,
                reason: gate.reason,
                bound_value: b,
                measured_value: *m,
                satisfied,
                slack,
                error: None,
            }
        }
        (b, m) => {
            let err = b.as_ref().err().or(m.as_ref().err()).map(|e| e.to_string());
            BoundEntry {
                name,
                direction,
                applicable: gate.applicable,
                reason: gate.reason,
                bound_value: b.unwrap_or(T::nan()),
                measured_value: *m.as_ref().unwrap_or(&T::nan()),
                satisfied: false,
                slack: T::nan(),
                error: err,
            }
        }
    }
}

/// Evaluates CRE, CE and CRE + CE by quadrature and compares them with
/// every bound, gating each on the law's metadata. Per-entry failures are
/// recorded in the entry instead of aborting the report.
pub fn check_all<T: Real>(dist: &Distribution<T>, tol: &Tolerance<T>) -> Result<BoundReport<T>> {
    if !dist.has_nonnegative_support() {
        return Err(Error::NegativeSupport(dist.to_string()));
    }
    let pair = dist.moments()?;
    let (mean, sigma) = (pair.mean, pair.std_dev());

    let cre_v: Result<T> = cre(dist, tol).map(|v| v.value);
    let ce_v: Result<T> = ce(dist, tol).map(|v| v.value);
    let sum_v: Result<T> = match (&cre_v, &ce_v) {
        (Ok(a), Ok(b)) => Ok(*a + *b),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };

    let symmetric = dist.symmetric_about().is_some();
    let sym_gate = || Gate {
        applicable: symmetric,
        reason: if symmetric {
            "symmetric law".into()
        } else {
            "law is not flagged symmetric".into()
        },
    };
    let sym_bounded_gate = Gate {
        applicable: symmetric && dist.bounded_support(),
        reason: match (symmetric, dist.bounded_support()) {
            (true, true) => "symmetric law with bounded support".into(),
            (false, _) => "law is not flagged symmetric".into(),
            (true, false) => "support is unbounded".into(),
        },
    };
    let dfr_gate = Gate {
        applicable: dist.dfr() == Some(true),
        reason: match dist.dfr() {
            Some(true) => "DFR law".into(),
            Some(false) => "law is not DFR".into(),
            None => "DFR flag unset".into(),
        },
    };

    let m = REPORT_SERIES_TERMS;
    let entries = vec![
        entry(
            "hdg_cre_upper",
            BoundDirection::Upper,
            Gate::always("finite variance"),
            Ok(cre_upper_hdg(sigma)),
            &cre_v,
        ),
        entry(
            "finite_series_cre_lower",
            BoundDirection::Lower,
            Gate::always("non-negative series terms"),
            cre_series(dist, m, tol).map(|s| s.point_estimate),
            &cre_v,
        ),
        entry(
            "finite_series_ce_upper",
            BoundDirection::Upper,
            Gate::always("non-negative series terms"),
            ce_series(dist, m, tol).map(|s| s.point_estimate),
            &ce_v,
        ),
        entry(
            "dfr_ce_lower",
            BoundDirection::Lower,
            dfr_gate,
            Ok(ce_lower_dfr(mean, pair.second_moment)),
            &ce_v,
        ),
        entry(
            "dn_symmetric_bounded_cre_upper",
            BoundDirection::Upper,
            sym_bounded_gate,
            Ok(cre_upper_symmetric_bounded(sigma)),
            &cre_v,
        ),
        entry(
            "ab_symmetric_cre_upper",
            BoundDirection::Upper,
            sym_gate(),
            Ok(cre_upper_symmetric(sigma)),
            &cre_v,
        ),
        entry(
            "range_sum_upper",
            BoundDirection::Upper,
            Gate::always("finite variance"),
            Ok(sum_upper(sigma)),
            &sum_v,
        ),
        entry(
            "ab_symmetric_sum_upper",
            BoundDirection::Upper,
            sym_gate(),
            Ok(sum_upper_symmetric(sigma)),
            &sum_v,
        ),
    ];

    Ok(BoundReport {
        distribution: dist.to_string(),
        mean,
        sigma,
        cre: cre_v.ok(),
        ce: ce_v.ok(),
        entries,
    })
}
