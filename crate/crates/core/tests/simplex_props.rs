mod common;

use common::*;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use skewjs_core::simplex::{mix, normalize};
use skewjs_core::{DiscreteDensity, PositiveDensity};

fn quad(d: usize) -> impl Strategy<Value = [DiscreteDensity; 4]> {
    (density(d..=d), density(d..=d), density(d..=d), density(d..=d)).prop_map(|(a, b, c, e)| [a, b, c, e])
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn mix_is_affine((p, q) in pair(2..=16), a in 0.0f64..=1.0) {
        let m = mix(&p, &q, a).unwrap();
        for ((&x, &y), &z) in p.bins().iter().zip(q.bins()).zip(m.bins()) {
            prop_assert_eq!(z, (1.0 - a) * x + a * y);
        }
    }

    #[test]
    fn mix_reverses((p, q) in pair(2..=16), a in 0.0f64..=1.0) {
        let left = mix(&p, &q, a).unwrap();
        let right = mix(&q, &p, 1.0 - a).unwrap();
        // 1 - (1 - a) need not round back to a
        for ((&x, &y), (&l, &r)) in p.bins().iter().zip(q.bins()).zip(left.bins().iter().zip(right.bins())) {
            prop_assert!((l - r).abs() <= 4.0 * f64::EPSILON * x.max(y));
        }
    }

    #[test]
    fn mix_of_a_density_with_itself(q in density(2..=16), a in 0.0f64..=1.0) {
        let m = mix(&q, &q, a).unwrap();
        for (&x, &y) in m.bins().iter().zip(q.bins()) {
            prop_assert!((x - y).abs() <= 2.0 * f64::EPSILON * y);
        }
    }

    #[test]
    fn composition_law(
        [p1, p2, q1, q2] in (2usize..=12).prop_flat_map(quad),
        lambda in 0.0f64..=1.0,
        a in 0.0f64..=1.0,
    ) {
        let left = mix(&mix(&p1, &p2, lambda).unwrap(), &mix(&q1, &q2, lambda).unwrap(), a).unwrap();
        let right = mix(&mix(&p1, &q1, a).unwrap(), &mix(&p2, &q2, a).unwrap(), lambda).unwrap();
        prop_assert!(max_abs_diff(left.bins(), right.bins()) <= 1e-15);
    }

    #[test]
    fn normalize_is_idempotent(p in density(1..=32)) {
        let again = normalize(&p.to_positive()).unwrap();
        prop_assert!(max_abs_diff(again.bins(), p.bins()) <= 1e-15);
    }
}

#[test]
fn composition_law_fixed_parameters() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..100 {
        let [p1, p2, q1, q2] = quad(8).new_tree(&mut runner).unwrap().current();
        let (lambda, a) = (0.3, 0.7);
        let left = mix(&mix(&p1, &p2, lambda).unwrap(), &mix(&q1, &q2, lambda).unwrap(), a).unwrap();
        let right = mix(&mix(&p1, &q1, a).unwrap(), &mix(&p2, &q2, a).unwrap(), lambda).unwrap();
        assert!(max_abs_diff(left.bins(), right.bins()) <= 1e-15);
    }
}

#[test]
fn extreme_normalization() {
    let p = normalize(&PositiveDensity::new(vec![1e-300, 1e-300]).unwrap()).unwrap();
    assert_eq!(p.bins(), &[0.5, 0.5]);
    assert!(DiscreteDensity::new(vec![0.5, 0.5 + 2e-9]).is_err());
    let p = DiscreteDensity::new(vec![0.5, 0.5 + 5e-10]).unwrap();
    assert!((p.bins().iter().sum::<f64>() - 1.0).abs() <= f64::EPSILON);
}
