use std::fmt;
use std::ops::{Add, Mul};

use super::ScheduleError;

/// An integer or one of the two infinities.
///
/// Variant order gives the natural total order `NegInf < Finite(_) < PosInf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Bound {
    fn negate(self) -> Bound {
        match self {
            Bound::NegInf => Bound::PosInf,
            Bound::Finite(v) => Bound::Finite(-v),
            Bound::PosInf => Bound::NegInf,
        }
    }

    fn scale_nonneg(self, c: i64) -> Bound {
        debug_assert!(c > 0);
        match self {
            Bound::Finite(v) => Bound::Finite(v * c),
            inf => inf,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::PosInf => f.write_str("inf"),
        }
    }
}

/// Closed integer interval `[lo, hi]`, possibly unbounded on either side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntervalInt {
    lo: Bound,
    hi: Bound,
}

impl IntervalInt {
    pub fn new(lo: Bound, hi: Bound) -> Result<Self, ScheduleError> {
        if lo == Bound::PosInf || hi == Bound::NegInf || lo > hi {
            return Err(ScheduleError::Invalid(format!("empty interval [{lo},{hi}]")));
        }
        Ok(IntervalInt { lo, hi })
    }

    pub fn point(v: i64) -> Self {
        IntervalInt {
            lo: Bound::Finite(v),
            hi: Bound::Finite(v),
        }
    }

    pub fn finite(lo: i64, hi: i64) -> Result<Self, ScheduleError> {
        Self::new(Bound::Finite(lo), Bound::Finite(hi))
    }

    /// `[lo, +inf]`
    pub fn at_least(lo: i64) -> Self {
        IntervalInt {
            lo: Bound::Finite(lo),
            hi: Bound::PosInf,
        }
    }

    /// `[-inf, +inf]`
    pub fn any() -> Self {
        IntervalInt {
            lo: Bound::NegInf,
            hi: Bound::PosInf,
        }
    }

    pub fn lo(&self) -> Bound {
        self.lo
    }

    pub fn hi(&self) -> Bound {
        self.hi
    }

    pub fn as_point(&self) -> Option<i64> {
        match (self.lo, self.hi) {
            (Bound::Finite(a), Bound::Finite(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo <= Bound::Finite(v) && Bound::Finite(v) <= self.hi
    }

    /// True when every value in the interval is `>= 0`.
    pub fn nonnegative(&self) -> bool {
        self.lo >= Bound::Finite(0)
    }
}

impl Mul<IntervalInt> for i64 {
    type Output = IntervalInt;

    /// Scalar multiple. A zero coefficient yields `[0, 0]` even for an
    /// unbounded interval: the term drops out of the sum.
    fn mul(self, x: IntervalInt) -> IntervalInt {
        match self {
            0 => IntervalInt::point(0),
            c if c > 0 => IntervalInt {
                lo: x.lo.scale_nonneg(c),
                hi: x.hi.scale_nonneg(c),
            },
            c => IntervalInt {
                lo: x.hi.scale_nonneg(-c).negate(),
                hi: x.lo.scale_nonneg(-c).negate(),
            },
        }
    }
}

impl Add for IntervalInt {
    type Output = IntervalInt;

    fn add(self, other: IntervalInt) -> IntervalInt {
        // lo is never +inf and hi never -inf, so no inf - inf case arises.
        let lo = match (self.lo, other.lo) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a + b),
            _ => Bound::NegInf,
        };
        let hi = match (self.hi, other.hi) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a + b),
            _ => Bound::PosInf,
        };
        IntervalInt { lo, hi }
    }
}

impl fmt::Display for IntervalInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_point() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "[{},{}]", self.lo, self.hi),
        }
    }
}
