//! Randomized invariants.

use proptest::prelude::*;

use cumentropy::bounds::{
    ab_symmetric_partial, check_all, cre_upper_hdg, hdg_extreme_bound, range_bound, sum_upper, sum_upper_symmetric,
    cre_upper_symmetric, BOUND_SLACK,
};
use cumentropy::order_stats::{standardized_mean_largest, ExtremeMoments};
use cumentropy::series::{series, SeriesKind};
use cumentropy::{entropy, parse_spec, Distribution, Distribution64, EntropyKind, Tolerance64};

fn tol() -> Tolerance64 {
    Tolerance64::default()
}

fn catalog() -> Vec<Distribution64> {
    let mut v: Vec<_> = (1..=6).map(|r| Distribution64::table1_row(r).unwrap()).collect();
    v.push(Distribution64::exponential(3.5).unwrap());
    v.push(Distribution64::uniform(3.0).unwrap());
    v.push(Distribution64::power(0.5).unwrap());
    v
}

#[test]
fn entropies_are_non_negative_on_catalog() {
    for d in catalog() {
        for kind in EntropyKind::ALL {
            let v = entropy(&d, kind, &tol()).unwrap();
            assert!(v.value >= 0.0, "{d} {kind}: {}", v.value);
        }
    }
}

#[test]
fn symmetric_laws_have_equal_cre_and_ce() {
    for a in [1.0, 3.0] {
        let d = Distribution64::uniform(a).unwrap();
        let cre = entropy(&d, EntropyKind::Cre, &tol()).unwrap().value;
        let ce = entropy(&d, EntropyKind::Ce, &tol()).unwrap().value;
        assert!((cre - ce).abs() < 1e-8);
    }
}

#[test]
fn hdg_holds_for_standardized_maxima() {
    for d in catalog() {
        for n in 1..=20 {
            let z = standardized_mean_largest(&d, n).unwrap().value;
            let nf = n as f64;
            assert!(z >= -1e-12, "{d} n={n}");
            assert!(z <= (nf - 1.0) / (2.0 * nf - 1.0).sqrt() + 1e-10, "{d} n={n}: {z}");
        }
    }
}

#[test]
fn extreme_range_bound_holds() {
    for d in catalog() {
        let m = d.moments().unwrap();
        let e = ExtremeMoments::new(&d, tol());
        for n in 1..=20 {
            let range = e.mean_largest(n).unwrap() - e.mean_smallest(n).unwrap();
            assert!(range <= range_bound(n, m.std_dev()) + 1e-10, "{d} n={n}");
            assert!(e.mean_largest(n).unwrap() <= hdg_extreme_bound(n, m.mean, m.std_dev()) + 1e-10);
        }
    }
}

#[test]
fn caching_has_no_semantic_effect() {
    let d = Distribution64::table1_row(6).unwrap();
    let cached = ExtremeMoments::new(&d, tol());
    let plain = ExtremeMoments::uncached(&d, tol());
    for n in [1, 2, 7, 30] {
        for which in [cumentropy::Extreme::Largest, cumentropy::Extreme::Smallest] {
            let a = cached.moment(which, n, 1).unwrap().value;
            let again = cached.moment(which, n, 1).unwrap().value;
            let b = plain.moment(which, n, 1).unwrap().value;
            assert_eq!(a.to_bits(), b.to_bits());
            assert_eq!(a.to_bits(), again.to_bits());
        }
    }
}

#[test]
fn bound_reports_hold_on_catalog() {
    for d in catalog() {
        let r = check_all(&d, &tol()).unwrap();
        assert_eq!(r.entries.len(), 8);
        for e in r.entries.iter().filter(|e| e.applicable) {
            assert!(e.error.is_none() && e.slack >= -BOUND_SLACK, "{d} {}: {:e}", e.name, e.slack);
        }
    }
}

#[test]
fn f32_agrees_with_f64() {
    let d32 = Distribution::<f32>::exponential(1.0).unwrap();
    let v = entropy(&d32, EntropyKind::Cre, &cumentropy::Tolerance32::default()).unwrap().value;
    assert!((v - 1.0).abs() < 1e-4);
    let s = series(&Distribution::<f32>::uniform(1.0).unwrap(), SeriesKind::Ce, 50, &Default::default()).unwrap();
    assert!(s.contains(0.25));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scale_covariance(scale in prop_oneof![Just(0.5), Just(2.0), 0.1f64..10.0], rate in 0.2f64..5.0) {
        let base = Distribution64::exponential(rate).unwrap();
        let scaled = Distribution64::exponential(rate / scale).unwrap();
        for kind in EntropyKind::ALL {
            let a = entropy(&base, kind, &tol()).unwrap().value;
            let b = entropy(&scaled, kind, &tol()).unwrap().value;
            let power = if kind.is_weighted() { 2 } else { 1 };
            prop_assert!((b - scale.powi(power) * a).abs() <= 1e-7 * b.abs().max(1.0));
        }
        let u = Distribution64::uniform(1.0).unwrap();
        let us = Distribution64::uniform(scale).unwrap();
        let a = entropy(&u, EntropyKind::Wcre, &tol()).unwrap().value;
        let b = entropy(&us, EntropyKind::Wcre, &tol()).unwrap().value;
        prop_assert!((b - scale * scale * a).abs() <= 1e-7 * b.max(1.0));
    }

    #[test]
    fn brackets_contain_quadrature(rate in 0.25f64..4.0, m in 1usize..60, kind_index in 0usize..4) {
        let d = Distribution64::exponential(rate).unwrap();
        let kind = EntropyKind::ALL[kind_index];
        let q = entropy(&d, kind, &tol()).unwrap().value;
        let s = series(&d, kind.into(), m, &tol()).unwrap();
        prop_assert!(s.lower - 1e-9 <= q && q <= s.upper + 1e-9);
        let next = series(&d, kind.into(), m + 1, &tol()).unwrap();
        prop_assert!(next.lower >= s.lower - 1e-12 && next.upper <= s.upper + 1e-12);
    }

    #[test]
    fn bound_constants_scale_linearly(sigma in 0.0f64..50.0) {
        prop_assert!((cre_upper_hdg(sigma) - sigma * cre_upper_hdg(1.0)).abs() <= 1e-12 * sigma.max(1.0));
        prop_assert!((sum_upper(sigma) - sigma * sum_upper(1.0)).abs() <= 1e-12 * sigma.max(1.0));
        prop_assert_eq!(sum_upper_symmetric(sigma), 2.0 * cre_upper_symmetric(sigma));
    }

    #[test]
    fn symmetric_partial_sums_increase(m in 1usize..2000) {
        prop_assert!(ab_symmetric_partial::<f64>(m + 1) > ab_symmetric_partial::<f64>(m));
        prop_assert!(ab_symmetric_partial::<f64>(m) < cre_upper_symmetric(1.0));
    }

    #[test]
    fn quantile_round_trip(row in 1usize..=6, p in 0.001f64..0.999) {
        let d = Distribution64::table1_row(row).unwrap();
        let x = d.quantile(p).unwrap();
        prop_assert!((d.cdf(x) - p).abs() < 1e-9);
    }

    #[test]
    fn spec_round_trip(rate in 0.01f64..100.0, width in 0.01f64..100.0, k in 0.1f64..10.0) {
        for d in [
            Distribution64::exponential(rate).unwrap(),
            Distribution64::uniform(width).unwrap(),
            Distribution64::power(k).unwrap(),
        ] {
            let back: Distribution64 = parse_spec(&d.to_string()).unwrap();
            prop_assert_eq!(back.params(), d.params());
            prop_assert_eq!(back.kind_id(), d.kind_id());
        }
    }

    #[test]
    fn cdf_is_monotone(row in 1usize..=6, a in 0.0f64..5.0, b in 0.0f64..5.0) {
        let d = Distribution64::table1_row(row).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(d.cdf(lo) <= d.cdf(hi));
        prop_assert!((d.cdf(lo) + d.sf(lo) - 1.0).abs() < 1e-15);
    }
}
