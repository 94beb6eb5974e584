use intdea::interval::{slack_decompose, Interval, SlackPair};
use proptest::prelude::*;

const EPS: f64 = 1e-9;

fn interval() -> impl Strategy<Value = Interval> {
    (-1e3..1e3_f64, 0.0..1e3_f64).prop_map(|(lo, w)| Interval::new(lo, lo + w).unwrap())
}

fn nonneg() -> impl Strategy<Value = Interval> {
    (0.0..1e3_f64, 0.0..1e3_f64).prop_map(|(lo, w)| Interval::new(lo, lo + w).unwrap())
}

/// An ordered pair `a ⪯ b`.
fn ordered() -> impl Strategy<Value = (Interval, Interval)> {
    (interval(), 0.0..1e3_f64, 0.0..1e3_f64).prop_map(|(a, dl, dh)| {
        let (lo, hi) = (a.lo() + dl, (a.hi() + dh).max(a.lo() + dl));
        (a, Interval::new(lo, hi).unwrap())
    })
}

fn contains(outer: &Interval, inner: &Interval) -> bool {
    outer.lo() <= inner.lo() + EPS && inner.hi() <= outer.hi() + EPS
}

proptest! {
    #[test]
    fn gh_difference_with_itself_is_zero(a in interval()) {
        prop_assert!(a.gh_diff(&a).is_zero(0.0));
    }

    #[test]
    fn gh_difference_inside_plain_difference(a in interval(), b in interval()) {
        prop_assert!(contains(&(a - b), &a.gh_diff(&b)));
    }

    #[test]
    fn gh_difference_undoes_addition(a in interval(), b in interval()) {
        prop_assert!((a + b).gh_diff(&b).approx_eq(&a, 1e-9));
    }

    #[test]
    fn decomposition_closes_the_gap((a, b) in ordered()) {
        let SlackPair { sl, su } = slack_decompose(&a, &b).unwrap();
        prop_assert!(sl.lo() >= 0.0 && su.lo() >= 0.0);
        prop_assert!(sl.is_zero(0.0) || su.is_zero(0.0));
        prop_assert!((a + sl).approx_eq(&(b - su), 1e-9), "{a} + {sl} vs {b} - {su}");
    }

    #[test]
    fn decomposition_rejects_unordered(a in interval(), b in interval()) {
        prop_assert_eq!(slack_decompose(&a, &b).is_ok(), a.leq(&b));
    }

    #[test]
    fn slacks_imply_order(a in interval(), sl in nonneg(), su in nonneg(), upper in any::<bool>()) {
        // One slack side active; b is defined so that a + sl = b - su.
        let (sl, su) = if upper { (Interval::ZERO, su) } else { (sl, Interval::ZERO) };
        let lhs = a + sl;
        let b = Interval::new(lhs.lo() + su.hi(), lhs.hi() + su.lo()).ok();
        if let Some(b) = b {
            prop_assert!((b - su).approx_eq(&lhs, 1e-9));
            prop_assert!(a.leq_tol(&b, 1e-9));
        }
    }

    #[test]
    fn order_is_a_partial_order(a in interval(), b in interval(), c in interval()) {
        prop_assert!(a.leq(&a));
        if a.leq(&b) && b.leq(&a) {
            prop_assert_eq!(a, b);
        }
        if a.leq(&b) && b.leq(&c) {
            prop_assert!(a.leq(&c));
        }
        prop_assert_eq!(a.lneq(&b), a.leq(&b) && a != b);
        if a.lt(&b) {
            prop_assert!(a.lneq(&b));
        }
    }

    #[test]
    fn degenerate_inputs_give_degenerate_slacks(x in -1e3..1e3_f64, d in 0.0..1e3_f64) {
        let pair = slack_decompose(&Interval::degenerate(x), &Interval::degenerate(x + d)).unwrap();
        prop_assert!(pair.sl.is_degenerate() && pair.su.is_degenerate());
    }
}
