//! Closed bounded real intervals `[lo, hi]`.
//!
//! Addition, subtraction, scaling and the general product follow the usual
//! set-image definitions. Subtraction is not an inverse of addition
//! (`A - A != [0, 0]` unless `A` is degenerate), which is why the
//! generalized Hukuhara difference [`Interval::gh_diff`] exists: it always
//! exists, satisfies `A ⊖ A = [0, 0]`, and is contained in `A - B`.
//!
//! Intervals are compared with the lower/upper (LU) partial order: `A ⪯ B`
//! iff both endpoints of `A` are at most those of `B`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tol::TAU;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("reversed endpoints: lower bound {lo} exceeds upper bound {hi}")]
    Reversed { lo: f64, hi: f64 },
    #[error("non-finite endpoint in [{lo}, {hi}]")]
    NonFinite { lo: f64, hi: f64 },
    #[error("slack decomposition requires {a} ⪯ {b}")]
    PrecedenceViolation { a: Interval, b: Interval },
    #[error("slack pair is not complementary: sl = {sl}, su = {su}")]
    NotComplementary { sl: Interval, su: Interval },
    #[error("slack {0} is not a nonnegative interval")]
    NegativeSlack(Interval),
}

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::NonFinite { lo, hi });
        }
        if lo > hi {
            return Err(IntervalError::Reversed { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// The crisp number `value` seen as `[value, value]`.
    ///
    /// # Panics
    ///
    /// Panics if `value` is not finite.
    pub fn degenerate(value: f64) -> Self {
        assert!(
            value.is_finite(),
            "degenerate interval from non-finite {value}"
        );
        Interval {
            lo: value,
            hi: value,
        }
    }

    /// Builds an interval from two endpoints given in either order.
    pub fn spanning(a: f64, b: f64) -> Result<Self, IntervalError> {
        Interval::new(a.min(b), a.max(b))
    }

    /// Endpoints read back from a solver assignment, where `lo <= hi` only
    /// holds up to the feasibility tolerance. A crossed lower endpoint is
    /// snapped onto the upper one.
    pub(crate) fn from_solver(lo: f64, hi: f64) -> Self {
        debug_assert!(lo.is_finite() && hi.is_finite());
        Interval { lo: lo.min(hi), hi }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Sum of both endpoints; the normalizing denominator of the slack measures.
    pub fn endpoint_sum(&self) -> f64 {
        self.lo + self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    /// Membership in the nonnegative family, i.e. `lo >= 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.lo >= 0.0
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.lo.abs() <= tol && self.hi.abs() <= tol
    }

    pub fn approx_eq(&self, other: &Interval, tol: f64) -> bool {
        (self.lo - other.lo).abs() <= tol && (self.hi - other.hi).abs() <= tol
    }

    /// `k · A`; the endpoints swap when `k < 0`.
    pub fn scale(&self, k: f64) -> Interval {
        if k >= 0.0 {
            Interval {
                lo: k * self.lo,
                hi: k * self.hi,
            }
        } else {
            Interval {
                lo: k * self.hi,
                hi: k * self.lo,
            }
        }
    }

    /// Generalized Hukuhara difference `self ⊖ other`.
    pub fn gh_diff(&self, other: &Interval) -> Interval {
        let d_lo = self.lo - other.lo;
        let d_hi = self.hi - other.hi;
        Interval {
            lo: d_lo.min(d_hi),
            hi: d_lo.max(d_hi),
        }
    }

    /// `self ⪯ other`.
    pub fn leq(&self, other: &Interval) -> bool {
        self.lo <= other.lo && self.hi <= other.hi
    }

    /// `self ≺ other`: both endpoints strictly smaller.
    pub fn lt(&self, other: &Interval) -> bool {
        self.lo < other.lo && self.hi < other.hi
    }

    /// `self ⪯ other` with at least one strict endpoint inequality.
    pub fn lneq(&self, other: &Interval) -> bool {
        self.leq(other) && (self.lo < other.lo || self.hi < other.hi)
    }

    pub fn geq(&self, other: &Interval) -> bool {
        other.leq(self)
    }

    /// `self ⪯ other` allowing each endpoint to exceed by `tol`.
    pub fn leq_tol(&self, other: &Interval, tol: f64) -> bool {
        self.lo <= other.lo + tol && self.hi <= other.hi + tol
    }
}

impl Default for Interval {
    fn default() -> Self {
        Interval::ZERO
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "[{:.*}, {:.*}]", p, self.lo, p, self.hi),
            None => write!(f, "[{}, {}]", self.lo, self.hi),
        }
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = IntervalError;

    fn try_from([lo, hi]: [f64; 2]) -> Result<Self, Self::Error> {
        Interval::new(lo, hi)
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;

    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo - rhs.hi,
            hi: self.hi - rhs.lo,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        let products = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = products.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl Mul<Interval> for f64 {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        rhs.scale(self)
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |acc, x| acc + x)
    }
}

/// Lower and upper slack intervals closing the gap between two ordered
/// intervals, `a + sl = b - su`, with at most one of the two nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SlackPair {
    pub sl: Interval,
    pub su: Interval,
}

impl SlackPair {
    pub const ZERO: SlackPair = SlackPair {
        sl: Interval::ZERO,
        su: Interval::ZERO,
    };

    /// Checks nonnegativity and complementarity (within `TAU`).
    pub fn new(sl: Interval, su: Interval) -> Result<Self, IntervalError> {
        for s in [sl, su] {
            if s.lo < -TAU {
                return Err(IntervalError::NegativeSlack(s));
            }
        }
        if !sl.is_zero(TAU) && !su.is_zero(TAU) {
            return Err(IntervalError::NotComplementary { sl, su });
        }
        Ok(SlackPair { sl, su })
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.sl.is_zero(tol) && self.su.is_zero(tol)
    }

    /// Sum of all four endpoints, the numerator of a slack-measure term.
    pub fn endpoint_total(&self) -> f64 {
        self.sl.endpoint_sum() + self.su.endpoint_sum()
    }
}

/// Splits the gap between `a ⪯ b` into complementary slacks.
///
/// The gH-difference `c = b ⊖ a` always lies in the nonnegative family when
/// `a ⪯ b`. If the lower gap is the smaller one, `b = a + c` and the gap is
/// a lower slack; otherwise `a = b - c` and it is an upper slack.
pub fn slack_decompose(a: &Interval, b: &Interval) -> Result<SlackPair, IntervalError> {
    if !a.leq(b) {
        return Err(IntervalError::PrecedenceViolation { a: *a, b: *b });
    }
    let gap = b.gh_diff(a);
    if b.lo - a.lo <= b.hi - a.hi {
        Ok(SlackPair {
            sl: gap,
            su: Interval::ZERO,
        })
    } else {
        Ok(SlackPair {
            sl: Interval::ZERO,
            su: gap,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn addition() {
        assert_eq!(iv(2.0, 3.0) + iv(2.0, 5.0), iv(4.0, 8.0));
        assert_eq!(iv(0.0, 0.0) + iv(1.0, 4.0), iv(1.0, 4.0));
        assert_eq!(iv(1.5, 1.5) + iv(2.5, 2.5), iv(4.0, 4.0));
    }

    #[test]
    fn subtraction() {
        assert_eq!(iv(2.0, 3.0) - iv(2.0, 5.0), iv(-3.0, 1.0));
        assert_eq!(iv(2.0, 3.0) - iv(2.0, 3.0), iv(-1.0, 1.0));
        assert_eq!(iv(5.0, 7.0) - Interval::ZERO, iv(5.0, 7.0));
    }

    #[test]
    fn scaling() {
        assert_eq!(iv(2.0, 4.0).scale(0.5), iv(1.0, 2.0));
        assert_eq!(iv(2.0, 3.0).scale(-1.0), iv(-3.0, -2.0));
        assert_eq!(-iv(2.0, 3.0), iv(-3.0, -2.0));
        assert_eq!(iv(7.0, 9.0).scale(0.0), iv(0.0, 0.0));
        assert_eq!(2.0 * iv(1.0, 2.0), iv(2.0, 4.0));
    }

    #[test]
    fn product() {
        assert_eq!(iv(-1.0, 2.0) * iv(3.0, 4.0), iv(-4.0, 8.0));
        assert_eq!(iv(-2.0, -1.0) * iv(-3.0, 5.0), iv(-10.0, 6.0));
    }

    #[test]
    fn gh_difference() {
        assert_eq!(iv(2.0, 3.0).gh_diff(&iv(2.0, 3.0)), Interval::ZERO);
        assert_eq!(iv(2.0, 5.0).gh_diff(&iv(2.0, 3.0)), iv(0.0, 2.0));
        assert_eq!(iv(5.0, 7.0).gh_diff(&iv(2.0, 6.0)), iv(1.0, 3.0));
    }

    #[test]
    fn partial_orders() {
        assert!(iv(2.0, 3.0).leq(&iv(2.0, 5.0)));
        assert!(!iv(2.0, 3.0).lt(&iv(2.0, 5.0)));
        assert!(iv(2.0, 3.0).lneq(&iv(2.0, 5.0)));
        assert!(iv(2.0, 6.0).leq(&iv(5.0, 7.0)));
        assert!(iv(2.0, 6.0).lt(&iv(5.0, 7.0)));
        assert!(!iv(1.0, 9.0).leq(&iv(2.0, 5.0)));
        assert!(!iv(2.0, 5.0).leq(&iv(1.0, 9.0)));
        assert!(!iv(4.0, 4.0).lneq(&iv(4.0, 4.0)));
    }

    #[test]
    fn decomposition() {
        let p = slack_decompose(&iv(2.0, 3.0), &iv(2.0, 5.0)).unwrap();
        assert_eq!(p.sl, iv(0.0, 2.0));
        assert_eq!(p.su, Interval::ZERO);

        let p = slack_decompose(&iv(2.0, 6.0), &iv(5.0, 7.0)).unwrap();
        assert_eq!(p.sl, Interval::ZERO);
        assert_eq!(p.su, iv(1.0, 3.0));

        let p = slack_decompose(&iv(4.0, 4.0), &iv(4.0, 4.0)).unwrap();
        assert_eq!(p, SlackPair::ZERO);

        assert!(matches!(
            slack_decompose(&iv(1.0, 9.0), &iv(2.0, 5.0)),
            Err(IntervalError::PrecedenceViolation { .. })
        ));
    }

    #[test]
    fn construction_rejects_reversed_and_nan() {
        assert!(matches!(
            Interval::new(3.0, 2.0),
            Err(IntervalError::Reversed { .. })
        ));
        assert!(matches!(
            Interval::new(f64::NAN, 2.0),
            Err(IntervalError::NonFinite { .. })
        ));
        assert_eq!(Interval::spanning(3.0, 2.0).unwrap(), iv(2.0, 3.0));
    }

    #[test]
    fn slack_pair_checks_complementarity() {
        assert!(SlackPair::new(iv(0.0, 1.0), iv(0.0, 1.0)).is_err());
        assert!(SlackPair::new(iv(0.0, 1.0), Interval::ZERO).is_ok());
        assert!(SlackPair::new(iv(-1.0, 1.0), Interval::ZERO).is_err());
    }

    #[test]
    fn serde_as_pair() {
        let s = serde_json::to_string(&iv(1.5, 2.0)).unwrap();
        assert_eq!(s, "[1.5,2.0]");
        let back: Interval = serde_json::from_str(&s).unwrap();
        assert_eq!(back, iv(1.5, 2.0));
        assert!(serde_json::from_str::<Interval>("[2.0,1.0]").is_err());
    }
}
