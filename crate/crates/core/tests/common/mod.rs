#![allow(dead_code)]

use proptest::prelude::*;
use skewjs_core::{DiscreteDensity, NaturalParam, SkewProfile};

/// Density with `d` bins; roughly a third of the bins are zero.
pub fn density(d: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = DiscreteDensity> {
    d.prop_flat_map(|d| prop::collection::vec(prop_oneof![1 => Just(0.0), 2 => 0.001f64..1.0], d))
        .prop_filter_map("zero mass", |mut bins| {
            if bins.iter().all(|&b| b == 0.0) {
                bins[0] = 1.0;
            }
            let total: f64 = bins.iter().sum();
            DiscreteDensity::new(bins.iter().map(|b| b / total).collect()).ok()
        })
}

/// Density with every bin at least 1e-3 before normalization.
pub fn interior(d: usize) -> impl Strategy<Value = DiscreteDensity> {
    prop::collection::vec(0.001f64..1.0, d).prop_map(|bins| {
        let total: f64 = bins.iter().sum();
        DiscreteDensity::new(bins.iter().map(|b| b / total).collect()).unwrap()
    })
}

pub fn pair(d: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (DiscreteDensity, DiscreteDensity)> {
    d.prop_flat_map(|d| (density(d..=d), density(d..=d)))
}

pub fn interior_pair(d: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (DiscreteDensity, DiscreteDensity)> {
    d.prop_flat_map(|d| (interior(d), interior(d)))
}

/// Profile with up to `k` skews in `[0, 1]` and interior mean skew.
pub fn profile(k: usize) -> impl Strategy<Value = SkewProfile> {
    (1..=k)
        .prop_flat_map(|k| {
            (
                prop::collection::vec(prop_oneof![Just(0.0), Just(1.0), 0.0f64..=1.0], k),
                prop::collection::vec(0.05f64..1.0, k),
            )
        })
        .prop_filter_map("degenerate mean skew", |(alpha, w)| {
            let total: f64 = w.iter().sum();
            SkewProfile::new(alpha, w.iter().map(|x| x / total).collect())
                .ok()
                .filter(|p| {
                    let a = p.alpha_bar();
                    a > 1e-3 && a < 1.0 - 1e-3
                })
        })
}

pub fn natural(d: usize) -> impl Strategy<Value = NaturalParam> {
    interior(d + 1).prop_map(|p| skewjs_core::mixture::to_natural(&p).unwrap())
}

pub fn dd(bins: &[f64]) -> DiscreteDensity {
    DiscreteDensity::new(bins.to_vec()).unwrap()
}

pub fn np(theta: &[f64]) -> NaturalParam {
    NaturalParam::new(theta.to_vec()).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Fixed-seed proptest settings without the source-tree regression files.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed_0f15),
        ..ProptestConfig::default()
    }
}
