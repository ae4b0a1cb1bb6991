//! Moments of the smallest and largest order statistics of an arbitrary
//! parent law, the standardized maximum, and a Monte Carlo oracle.

mod monte_carlo;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use monte_carlo::{mc_extreme_moment, sample_draws, MonteCarloEstimate};

use crate::bounds::ab_symmetric_partial;
use crate::bounds::special::{harmonic, harmonic2};
use crate::distributions::{Distribution, Family};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_scaled, Tolerance};
use crate::real::Real;
use crate::sum::CompensatedSum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extreme {
    Smallest,
    Largest,
}

impl fmt::Display for Extreme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Extreme::Smallest => "smallest",
            Extreme::Largest => "largest",
        })
    }
}

impl FromStr for Extreme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "smallest" | "min" => Ok(Extreme::Smallest),
            "largest" | "max" => Ok(Extreme::Largest),
            other => Err(Error::Usage(format!("unknown extreme {other:?} (expected smallest or largest)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ClosedForm,
    Quadrature,
    /// Exact sum over the pieces of an empirical step cdf.
    StepSum,
    MonteCarlo,
}

/// `E(X_{k:n}^order)` for `k ∈ {1, n}` and `order ∈ {1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentRecord<T> {
    pub which: Extreme,
    pub n: usize,
    pub order: u32,
    pub value: T,
    pub method: MomentMethod,
}

impl<T> MomentRecord<T> {
    /// Rank of the order statistic.
    pub fn k(&self) -> usize {
        match self.which {
            Extreme::Smallest => 1,
            Extreme::Largest => self.n,
        }
    }
}

/// `E(Z_{n:n})` for the standardized parent `Z = (X - μ)/σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandardizedMoment<T> {
    pub n: usize,
    pub value: T,
}

type CacheKey = (Extreme, usize, u32);

/// Extreme-order-statistic moments of one parent law, memoized.
///
/// The cache only stores values that the uncached path would recompute
/// identically, so enabling it never changes a result.
pub struct ExtremeMoments<'a, T> {
    dist: &'a Distribution<T>,
    tol: Tolerance<T>,
    cache: Option<RwLock<HashMap<CacheKey, MomentRecord<T>>>>,
}

impl<'a, T: Real> ExtremeMoments<'a, T> {
    pub fn new(dist: &'a Distribution<T>, tol: Tolerance<T>) -> Self {
        Self {
            dist,
            tol,
            cache: Some(RwLock::new(HashMap::new())),
        }
    }

    pub fn uncached(dist: &'a Distribution<T>, tol: Tolerance<T>) -> Self {
        Self { dist, tol, cache: None }
    }

    pub fn distribution(&self) -> &Distribution<T> {
        self.dist
    }

    pub fn tolerance(&self) -> &Tolerance<T> {
        &self.tol
    }

    pub fn moment(&self, which: Extreme, n: usize, order: u32) -> Result<MomentRecord<T>> {
        if n == 0 {
            return Err(Error::Usage("sample size n must be >= 1".into()));
        }
        if !(1..=2).contains(&order) {
            return Err(Error::Usage(format!("moment order must be 1 or 2, got {order}")));
        }
        if let Some(value) = closed_form(self.dist, which, n, order) {
            return Ok(MomentRecord {
                which,
                n,
                order,
                value,
                method: MomentMethod::ClosedForm,
            });
        }
        let key = (which, n, order);
        if let Some(cache) = &self.cache {
            if let Some(hit) = cache.read().expect("cache lock").get(&key) {
                return Ok(*hit);
            }
        }
        let record = self.compute(which, n, order)?;
        if let Some(cache) = &self.cache {
            cache.write().expect("cache lock").insert(key, record);
        }
        Ok(record)
    }

    pub fn mean_largest(&self, n: usize) -> Result<T> {
        Ok(self.moment(Extreme::Largest, n, 1)?.value)
    }

    pub fn mean_smallest(&self, n: usize) -> Result<T> {
        Ok(self.moment(Extreme::Smallest, n, 1)?.value)
    }

    /// Moments for every `n` in `sizes`, evaluated in parallel and returned
    /// in input order.
    pub fn moments_for(&self, which: Extreme, sizes: &[usize], order: u32) -> Result<Vec<T>> {
        if closed_form(self.dist, which, 1, order).is_some() {
            return sizes.iter().map(|&n| Ok(self.moment(which, n, order)?.value)).collect();
        }
        sizes
            .par_iter()
            .map(|&n| Ok(self.moment(which, n, order)?.value))
            .collect()
    }

    fn compute(&self, which: Extreme, n: usize, order: u32) -> Result<MomentRecord<T>> {
        let dist = self.dist;
        if n == 1 {
            let method = match dist.family() {
                Family::ReciprocalExponential | Family::ExpReciprocalExpm1 => MomentMethod::Quadrature,
                Family::Empirical(_) => MomentMethod::StepSum,
                _ => MomentMethod::ClosedForm,
            };
            return Ok(MomentRecord {
                which,
                n,
                order,
                value: dist.raw_moment(order)?,
                method,
            });
        }
        if let Some(sample) = dist.empirical_sample() {
            return Ok(MomentRecord {
                which,
                n,
                order,
                value: step_sum(sample, which, n, order),
                method: MomentMethod::StepSum,
            });
        }
        let value = survival_quadrature(dist, which, n, order, &self.tol)?;
        Ok(MomentRecord {
            which,
            n,
            order,
            value,
            method: MomentMethod::Quadrature,
        })
    }
}

fn closed_form<T: Real>(dist: &Distribution<T>, which: Extreme, n: usize, order: u32) -> Option<T> {
    let nn = T::from_usize_lossy(n);
    let one = T::one();
    let two = T::lit(2.0);
    match (dist.family(), which, order) {
        (Family::Exponential { rate }, Extreme::Largest, 1) => Some(harmonic::<T>(n) / *rate),
        (Family::Exponential { rate }, Extreme::Largest, 2) => {
            let h = harmonic::<T>(n);
            Some((h * h + harmonic2::<T>(n)) / (*rate * *rate))
        }
        // the minimum of n exponentials is exponential with rate n λ
        (Family::Exponential { rate }, Extreme::Smallest, 1) => Some(one / (nn * *rate)),
        (Family::Exponential { rate }, Extreme::Smallest, 2) => Some(two / (nn * *rate).powi(2)),
        (Family::Uniform { width }, Extreme::Largest, 1) => Some(*width * nn / (nn + one)),
        (Family::Uniform { width }, Extreme::Largest, 2) => Some(*width * *width * nn / (nn + two)),
        (Family::Uniform { width }, Extreme::Smallest, 1) => Some(*width / (nn + one)),
        (Family::Uniform { width }, Extreme::Smallest, 2) => Some(two * *width * *width / ((nn + one) * (nn + two))),
        _ => None,
    }
}

/// ln F (or ln F̄) without cancellation when the argument is near 1.
fn ln_split<T: Real>(p: T, q: T) -> T {
    if p > T::lit(0.5) {
        (-q).ln_1p()
    } else {
        p.ln()
    }
}

/// P(Y > x) and P(Y <= x) for Y the extreme order statistic.
fn extreme_tails<T: Real>(dist: &Distribution<T>, which: Extreme, n: T, x: T) -> (T, T) {
    let (f, s) = (dist.cdf(x), dist.sf(x));
    match which {
        Extreme::Largest => {
            if f <= T::zero() {
                return (T::one(), T::zero());
            }
            let ln_fn = n * ln_split(f, s);
            (-ln_fn.exp_m1(), ln_fn.exp())
        }
        Extreme::Smallest => {
            if s <= T::zero() {
                return (T::zero(), T::one());
            }
            let ln_sn = n * ln_split(s, f);
            (ln_sn.exp(), -ln_sn.exp_m1())
        }
    }
}

/// `E(Y^r) = ∫₀^∞ r x^(r-1) P(Y > x) dx − ∫_{-∞}^0 r x^(r-1) P(Y <= x) dx`.
fn survival_quadrature<T: Real>(
    dist: &Distribution<T>,
    which: Extreme,
    n: usize,
    order: u32,
    tol: &Tolerance<T>,
) -> Result<T> {
    let support = dist.support();
    let nn = T::from_usize_lossy(n);
    let r = T::from_u32(order).unwrap();
    let weight = |x: T| if order == 1 { r } else { r * x.powi(order as i32 - 1) };

    // median of the order statistic, used as the mapping scale
    let half = T::lit(0.5);
    let p_med = match which {
        Extreme::Largest => half.powf(nn.recip()),
        Extreme::Smallest => T::one() - half.powf(nn.recip()),
    };
    let scale = match dist.quantile(p_med) {
        Ok(q) if q > T::zero() && q.is_finite() => q,
        _ => dist.characteristic_scale(),
    };

    let mut total = CompensatedSum::new();
    let mut error = T::zero();
    let mut converged = true;
    let lower_pos = support.lower.max(T::zero());
    if support.upper > lower_pos {
        let r = integrate_scaled(
            |x| {
                let (upper_tail, _) = extreme_tails(dist, which, nn, x);
                if upper_tail == T::zero() {
                    T::zero()
                } else {
                    weight(x) * upper_tail
                }
            },
            lower_pos,
            support.upper,
            scale,
            tol,
        )?;
        total.add(r.value);
        error = error + r.abs_error_estimate;
        converged &= r.converged;
    }
    if support.lower < T::zero() {
        let r = integrate_scaled(
            |x| {
                let (_, lower_tail) = extreme_tails(dist, which, nn, x);
                if lower_tail == T::zero() {
                    T::zero()
                } else {
                    weight(x) * lower_tail
                }
            },
            support.lower,
            T::zero().min(support.upper),
            scale,
            tol,
        )?;
        total.add(-r.value);
        error = error + r.abs_error_estimate;
        converged &= r.converged;
    }
    let value = total.value();
    if !converged {
        return Err(Error::NotConverged {
            what: format!("E(X_{{{}:{n}}}^{order}) of {dist}", if which == Extreme::Largest { n } else { 1 }),
            best_estimate: value.to_f64_lossy(),
            error_estimate: error.to_f64_lossy(),
        });
    }
    Ok(value)
}

fn step_sum<T: Real>(sample: &crate::distributions::EmpiricalSample<T>, which: Extreme, n: usize, order: u32) -> T {
    let pow = |x: T| x.powi(order as i32);
    let n = n as i32;
    let mut acc = CompensatedSum::new();
    // below the sample minimum F = 0, so both extremes exceed x surely
    acc.add(pow(sample.sorted()[0]));
    for (left, right, f) in sample.gaps() {
        let above = match which {
            Extreme::Largest => T::one() - f.powi(n),
            Extreme::Smallest => (T::one() - f).powi(n),
        };
        acc.add(above * (pow(right) - pow(left)));
    }
    acc.value()
}

pub fn mean_largest<T: Real>(dist: &Distribution<T>, n: usize) -> Result<T> {
    ExtremeMoments::uncached(dist, Tolerance::default()).mean_largest(n)
}

pub fn mean_smallest<T: Real>(dist: &Distribution<T>, n: usize) -> Result<T> {
    ExtremeMoments::uncached(dist, Tolerance::default()).mean_smallest(n)
}

pub fn second_moment_extreme<T: Real>(dist: &Distribution<T>, which: Extreme, n: usize) -> Result<T> {
    Ok(ExtremeMoments::uncached(dist, Tolerance::default())
        .moment(which, n, 2)?
        .value)
}

/// `(μ_{n:n} − μ) / σ`.
pub fn standardized_mean_largest<T: Real>(dist: &Distribution<T>, n: usize) -> Result<StandardizedMoment<T>> {
    let m = dist.moments()?;
    let sigma = m.std_dev();
    if sigma <= T::zero() {
        return Err(Error::Degenerate(format!("{dist} has zero variance")));
    }
    let value = (mean_largest(dist, n)? - m.mean) / sigma;
    Ok(StandardizedMoment { n, value })
}

/// Normal-parent comparison of the truncated CRE series with the truncated
/// symmetric-law bound series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarterComparison<T> {
    pub m: usize,
    /// Σ_{n=1}^m μ_{n+1:n+1} / (n(n+1)) for the standard normal.
    pub series_sum: T,
    /// (1/√2) Σ_{n=1}^m (1/n) √(1/(2n+1) − B(n+1,n+1)).
    pub bound_sum: T,
    pub series_below_bound: bool,
}

pub fn harter_comparison<T: Real>(m: usize, tol: Tolerance<T>) -> Result<HarterComparison<T>> {
    if m == 0 {
        return Err(Error::Usage("m must be >= 1".into()));
    }
    let normal = Distribution::<T>::standard_normal();
    let engine = ExtremeMoments::new(&normal, tol);
    let sizes: Vec<usize> = (2..=m + 1).collect();
    let means = engine.moments_for(Extreme::Largest, &sizes, 1)?;
    let series_sum = means
        .iter()
        .enumerate()
        .map(|(i, &mu)| {
            let n = T::from_usize_lossy(i + 1);
            mu / (n * (n + T::one()))
        })
        .collect::<CompensatedSum<T>>()
        .value();
    let bound_sum = ab_symmetric_partial::<T>(m);
    Ok(HarterComparison {
        m,
        series_sum,
        bound_sum,
        series_below_bound: series_sum < bound_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Vec<Distribution<f64>> {
        (1..=6).map(|r| Distribution::table1_row(r).unwrap()).collect()
    }

    #[test]
    fn closed_form_examples() {
        let e = Distribution::exponential(1.0f64).unwrap();
        assert!((mean_largest(&e, 3).unwrap() - 11.0 / 6.0).abs() < 1e-15);
        assert!((mean_smallest(&e, 5).unwrap() - 0.2).abs() < 1e-15);
        assert!((second_moment_extreme(&e, Extreme::Smallest, 4).unwrap() - 0.125).abs() < 1e-15);
        let u = Distribution::uniform(1.0f64).unwrap();
        assert!((mean_largest(&u, 4).unwrap() - 0.8).abs() < 1e-15);
        assert!((mean_smallest(&u, 3).unwrap() - 0.25).abs() < 1e-15);
        assert!((second_moment_extreme(&u, Extreme::Largest, 3).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn sample_of_one_is_the_parent() {
        for d in catalog() {
            let m = d.moments().unwrap();
            for which in [Extreme::Smallest, Extreme::Largest] {
                let e = ExtremeMoments::uncached(&d, Tolerance::default());
                assert!((e.moment(which, 1, 1).unwrap().value - m.mean).abs() < 1e-12);
                assert!((e.moment(which, 1, 2).unwrap().value - m.second_moment).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let tol = Tolerance::default();
        for d in [Distribution::exponential(1.0f64).unwrap(), Distribution::uniform(2.0).unwrap()] {
            for which in [Extreme::Smallest, Extreme::Largest] {
                for n in [2usize, 7, 40] {
                    for order in [1, 2] {
                        let exact = closed_form(&d, which, n, order).unwrap();
                        let quad = survival_quadrature(&d, which, n, order, &tol).unwrap();
                        assert!((exact - quad).abs() < 1e-9 * exact.max(1.0), "{d} {which} n={n} r={order}");
                    }
                }
            }
        }
        // power law maxima are again power laws: E X_{n:n} = kn/(kn+1)
        let p = Distribution::power(2.0f64).unwrap();
        for n in [2usize, 5, 30] {
            let k = 2.0 * n as f64;
            assert!((mean_largest(&p, n).unwrap() - k / (k + 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn standardized_examples() {
        let e = Distribution::exponential(1.0f64).unwrap();
        assert_eq!(standardized_mean_largest(&e, 1).unwrap().value, 0.0);
        assert!((standardized_mean_largest(&e, 2).unwrap().value - 0.5).abs() < 1e-15);
        let u = Distribution::uniform(1.0f64).unwrap();
        assert!((standardized_mean_largest(&u, 2).unwrap().value - 3f64.sqrt() / 3.0).abs() < 1e-14);
        let point = Distribution::empirical(vec![2.0f64, 2.0]).unwrap();
        assert!(matches!(standardized_mean_largest(&point, 2), Err(Error::Degenerate(_))));
    }

    #[test]
    fn empirical_step_sums() {
        let d = Distribution::empirical(vec![1.0f64, 2.0, 3.0, 4.0]).unwrap();
        assert!((mean_smallest(&d, 1).unwrap() - 2.5).abs() < 1e-15);
        // n = 2: max of two draws with replacement from {1,2,3,4}
        let brute: f64 = (1..=4)
            .flat_map(|a| (1..=4).map(move |b| f64::from(a.max(b))))
            .sum::<f64>()
            / 16.0;
        assert!((mean_largest(&d, 2).unwrap() - brute).abs() < 1e-14);
        let brute_min2: f64 = (1..=4)
            .flat_map(|a| (1..=4).map(move |b| f64::from(a.min(b)).powi(2)))
            .sum::<f64>()
            / 16.0;
        assert!((second_moment_extreme(&d, Extreme::Smallest, 2).unwrap() - brute_min2).abs() < 1e-14);
    }

    #[test]
    fn normal_extremes() {
        let n = Distribution::<f64>::standard_normal();
        // μ_{2:2} = 1/√π
        assert!((mean_largest(&n, 2).unwrap() - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-10);
        assert!((mean_smallest(&n, 2).unwrap() + 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-10);
        // μ_{3:3} = 3/(2√π)
        assert!((mean_largest(&n, 3).unwrap() - 1.5 / std::f64::consts::PI.sqrt()).abs() < 1e-10);
        // E X_{2:2}² = 1 by symmetry of the pair
        assert!((second_moment_extreme(&n, Extreme::Largest, 2).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cache_has_no_semantic_effect() {
        let d = Distribution::<f64>::lomax3();
        let cached = ExtremeMoments::new(&d, Tolerance::default());
        let plain = ExtremeMoments::uncached(&d, Tolerance::default());
        for n in [1usize, 2, 9, 50] {
            for which in [Extreme::Smallest, Extreme::Largest] {
                let a = cached.moment(which, n, 1).unwrap();
                let b = cached.moment(which, n, 1).unwrap();
                let c = plain.moment(which, n, 1).unwrap();
                assert_eq!(a, b);
                assert_eq!(a, c);
            }
        }
    }

    #[test]
    fn argument_validation() {
        let d = Distribution::exponential(1.0f64).unwrap();
        let e = ExtremeMoments::new(&d, Tolerance::default());
        assert!(e.moment(Extreme::Largest, 0, 1).is_err());
        assert!(e.moment(Extreme::Largest, 3, 3).is_err());
        assert_eq!("max".parse::<Extreme>().unwrap(), Extreme::Largest);
    }

    #[test]
    fn harter_small_m() {
        let h = harter_comparison::<f64>(1, Tolerance::default()).unwrap();
        assert!((h.series_sum - 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-10);
        assert!((h.bound_sum - (1.0f64 / 6.0).sqrt() / 2f64.sqrt()).abs() < 1e-14);
        assert!(h.series_below_bound);
        assert!(harter_comparison::<f64>(0, Tolerance::default()).is_err());
    }
}
