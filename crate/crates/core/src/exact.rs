//! Exact rational partial sums for the standard exponential and uniform
//! laws, whose extreme moments are rational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::series::SeriesKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactLaw {
    /// Exponential with rate 1.
    Exponential,
    /// Uniform on (0, 1).
    Uniform,
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio(p: usize, q: usize) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn harmonic(n: usize) -> BigRational {
    (1..=n).fold(BigRational::zero(), |acc, k| acc + ratio(1, k))
}

pub fn harmonic2(n: usize) -> BigRational {
    (1..=n).fold(BigRational::zero(), |acc, k| acc + ratio(1, k * k))
}

impl ExactLaw {
    pub fn mean(self) -> BigRational {
        match self {
            Self::Exponential => BigRational::one(),
            Self::Uniform => ratio(1, 2),
        }
    }

    pub fn second_moment(self) -> BigRational {
        match self {
            Self::Exponential => int(2),
            Self::Uniform => ratio(1, 3),
        }
    }

    pub fn largest(self, n: usize, order: u32) -> BigRational {
        match (self, order) {
            (Self::Exponential, 1) => harmonic(n),
            (Self::Exponential, 2) => {
                let h = harmonic(n);
                &h * &h + harmonic2(n)
            }
            (Self::Uniform, 1) => ratio(n, n + 1),
            (Self::Uniform, 2) => ratio(n, n + 2),
            _ => panic!("moment order must be 1 or 2"),
        }
    }

    pub fn smallest(self, n: usize, order: u32) -> BigRational {
        match (self, order) {
            (Self::Exponential, 1) => ratio(1, n),
            (Self::Exponential, 2) => ratio(2, n * n),
            (Self::Uniform, 1) => ratio(1, n + 1),
            (Self::Uniform, 2) => ratio(2, (n + 1) * (n + 2)),
            _ => panic!("moment order must be 1 or 2"),
        }
    }

    fn term_moment(self, kind: SeriesKind, n: usize) -> BigRational {
        match kind {
            SeriesKind::Cre => self.largest(n + 1, 1),
            SeriesKind::Ce => self.smallest(n + 1, 1),
            SeriesKind::Wcre => self.largest(n + 1, 2),
            SeriesKind::Wce => self.smallest(n + 1, 2),
            SeriesKind::Sum => self.largest(n + 1, 1) - self.smallest(n + 1, 1),
        }
    }

    /// Σ_{n=1}^m moment/(n(n+1)).
    pub fn partial_sum(self, kind: SeriesKind, m: usize) -> BigRational {
        (1..=m).fold(BigRational::zero(), |acc, n| acc + self.term_moment(kind, n) * ratio(1, n * (n + 1)))
    }

    /// Σ_{n=1}^m (1/n − 1/(n+1)) moment.
    pub fn partial_sum_difference_form(self, kind: SeriesKind, m: usize) -> BigRational {
        (1..=m).fold(BigRational::zero(), |acc, n| {
            acc + self.term_moment(kind, n) * (ratio(1, n) - ratio(1, n + 1))
        })
    }

    /// The truncated estimate of the entropy (or of CRE + CE).
    pub fn point_estimate(self, kind: SeriesKind, m: usize) -> BigRational {
        let s = self.partial_sum(kind, m);
        let half = ratio(1, 2);
        match kind {
            SeriesKind::Cre => s - self.mean(),
            SeriesKind::Ce => self.mean() - s,
            SeriesKind::Wcre => half * (s - self.second_moment()),
            SeriesKind::Wce => half * (self.second_moment() - s),
            SeriesKind::Sum => s,
        }
    }
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_truncations() {
        assert_eq!(ExactLaw::Exponential.point_estimate(SeriesKind::Cre, 3), ratio(11, 48));
        assert_eq!(ExactLaw::Exponential.point_estimate(SeriesKind::Ce, 2), ratio(25, 36));
        assert_eq!(ExactLaw::Exponential.point_estimate(SeriesKind::Wce, 3), ratio(1471, 1728));
        assert_eq!(
            ExactLaw::Uniform.point_estimate(SeriesKind::Wcre, 1),
            -ratio(1, 24)
        );
    }

    #[test]
    fn forms_are_identical() {
        for law in [ExactLaw::Exponential, ExactLaw::Uniform] {
            for kind in SeriesKind::ALL {
                for m in [1, 2, 7, 30] {
                    assert_eq!(law.partial_sum(kind, m), law.partial_sum_difference_form(kind, m));
                }
            }
        }
    }

    #[test]
    fn uniform_cre_partial_sum_closed_form() {
        // Σ_{n≤m} 1/(n(n+2)) - 1/2 = 1/4 - (2m+3)/(2(m+1)(m+2))
        for m in [1usize, 5, 40] {
            let expected = ratio(1, 4) - ratio(2 * m + 3, 2 * (m + 1) * (m + 2));
            assert_eq!(ExactLaw::Uniform.point_estimate(SeriesKind::Cre, m), expected);
        }
    }

    #[test]
    fn uniform_symmetry_identity() {
        for n in 1..=20 {
            let law = ExactLaw::Uniform;
            assert_eq!(law.largest(n, 1) - law.mean(), law.mean() - law.smallest(n, 1));
        }
    }
}
