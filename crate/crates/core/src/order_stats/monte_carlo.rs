use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Extreme;
use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::sum::CompensatedSum;

/// Samples per independent generator stream. Fixed so the partition of the
/// work, and hence the result, does not depend on the thread count.
const CHUNK: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate<T> {
    pub value: T,
    pub std_error: T,
    pub samples: usize,
    pub seed: u64,
}

/// Uniform on the open interval (0, 1) from the top 53 bits.
#[inline]
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Monte Carlo estimate of `E(X_{k:n}^order)`, `k ∈ {1, n}`, by inverse
/// transform sampling.
///
/// The extreme of `n` uniforms is mapped through the quantile function
/// once per replicate. Chunk `i` draws from ChaCha8 stream `i` of `seed`
/// and chunk sums are reduced in index order.
pub fn mc_extreme_moment<T: Real>(
    dist: &Distribution<T>,
    which: Extreme,
    n: usize,
    order: u32,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate<T>> {
    if samples == 0 {
        return Err(Error::Usage("samples must be >= 1".into()));
    }
    if n == 0 {
        return Err(Error::Usage("sample size n must be >= 1".into()));
    }
    if order == 0 {
        return Err(Error::Usage("moment order must be >= 1".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let lo = T::min_positive_value();
    let hi = T::one() - T::epsilon();
    let partials: Vec<Result<(T, T)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut sum = CompensatedSum::new();
            let mut sum_sq = CompensatedSum::new();
            for _ in 0..count {
                let mut u = open_unit(&mut rng);
                for _ in 1..n {
                    let v = open_unit(&mut rng);
                    u = match which {
                        Extreme::Largest => u.max(v),
                        Extreme::Smallest => u.min(v),
                    };
                }
                let p = T::lit(u).max(lo).min(hi);
                let x = dist.quantile(p)?.powi(order as i32);
                sum.add(x);
                sum_sq.add(x * x);
            }
            Ok((sum.value(), sum_sq.value()))
        })
        .collect();

    let mut sum = CompensatedSum::new();
    let mut sum_sq = CompensatedSum::new();
    for p in partials {
        let (s, q) = p?;
        sum.add(s);
        sum_sq.add(q);
    }
    let count = T::from_usize_lossy(samples);
    let mean = sum.value() / count;
    let std_error = if samples > 1 {
        let var = ((sum_sq.value() - count * mean * mean) / (count - T::one())).max(T::zero());
        (var / count).sqrt()
    } else {
        T::infinity()
    };
    Ok(MonteCarloEstimate {
        value: mean,
        std_error,
        samples,
        seed,
    })
}

/// `count` draws from `dist` using the same chunked streams as
/// [`mc_extreme_moment`] with `n = 1`.
pub fn sample_draws<T: Real>(dist: &Distribution<T>, count: usize, seed: u64) -> Result<Vec<T>> {
    let lo = T::min_positive_value();
    let hi = T::one() - T::epsilon();
    let chunks: Vec<Result<Vec<T>>> = (0..count.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            (0..CHUNK.min(count - c * CHUNK))
                .map(|_| dist.quantile(T::lit(open_unit(&mut rng)).max(lo).min(hi)))
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(count);
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let d = Distribution::exponential(1.0f64).unwrap();
        let a = mc_extreme_moment(&d, Extreme::Largest, 3, 1, 50_000, 11).unwrap();
        let b = mc_extreme_moment(&d, Extreme::Largest, 3, 1, 50_000, 11).unwrap();
        assert_eq!(a, b);
        let c = mc_extreme_moment(&d, Extreme::Largest, 3, 1, 50_000, 12).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn n_one_is_the_sample_mean() {
        let d = Distribution::uniform(1.0f64).unwrap();
        let e = mc_extreme_moment(&d, Extreme::Smallest, 1, 1, 200_000, 3).unwrap();
        assert!((e.value - 0.5).abs() < 4.0 * e.std_error);
        // standard error of a uniform mean: sqrt(1/12 / N)
        assert!((e.std_error / (1.0 / 12.0 / 200_000.0f64).sqrt() - 1.0).abs() < 0.02);
    }

    #[test]
    fn usage_errors() {
        let d = Distribution::uniform(1.0f64).unwrap();
        assert!(mc_extreme_moment(&d, Extreme::Largest, 2, 1, 0, 1).is_err());
        assert!(mc_extreme_moment(&d, Extreme::Largest, 0, 1, 10, 1).is_err());
    }

    #[test]
    fn single_precision_sampling() {
        let d = Distribution::exponential(1.0f32).unwrap();
        let e = mc_extreme_moment(&d, Extreme::Smallest, 3, 1, 100_000, 7).unwrap();
        assert!((e.value - 1.0 / 3.0).abs() < 4.0 * e.std_error + 1e-4);
    }
}
