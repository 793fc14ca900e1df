//! Exact angular positions on the unit circumference.
//!
//! Angles are rational numbers of *turns* in `[0, 1)`: one full turn of the
//! circumference is `1`, so a half turn is `1/2`. All geometric predicates
//! downstream compare exact rationals; floating point appears only at the
//! rendering boundary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// A point on the circumference, stored as a rational in `[0, 1)`.
///
/// The counterclockwise direction is the direction of increasing angle.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(BigRational);

/// `r mod 1`, normalized into `[0, 1)` (works for negative inputs).
fn normalize(r: BigRational) -> BigRational {
    let floor = r.floor();
    r - floor
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn half() -> BigRational {
    rational(1, 2)
}

impl Angle {
    pub fn new(turns: BigRational) -> Self {
        Angle(normalize(turns))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Angle::new(rational(num, den))
    }

    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    /// The representative in `[0, 1)`.
    pub fn turns(&self) -> &BigRational {
        &self.0
    }

    /// Counterclockwise offset from `self` to `other`, in `[0, 1)`.
    pub fn ccw_to(&self, other: &Angle) -> BigRational {
        normalize(&other.0 - &self.0)
    }

    /// Shortest separation along the circumference, in `[0, 1/2]`.
    pub fn distance(&self, other: &Angle) -> BigRational {
        let fwd = self.ccw_to(other);
        let bwd = BigRational::one() - &fwd;
        if fwd.is_zero() {
            fwd
        } else {
            fwd.min(bwd)
        }
    }

    /// Is `q` within the closed half turn counterclockwise of `self`?
    ///
    /// The antipodal point (offset exactly 1/2) lies in both halves.
    pub fn in_right_half(&self, q: &Angle) -> bool {
        self.ccw_to(q) <= half()
    }

    /// Is `q` within the closed half turn clockwise of `self`?
    pub fn in_left_half(&self, q: &Angle) -> bool {
        let off = self.ccw_to(q);
        off.is_zero() || off >= half()
    }

    pub fn shifted(&self, by: &BigRational) -> Angle {
        Angle::new(&self.0 + by)
    }

    pub fn to_turns_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    pub fn to_radians_f64(&self) -> f64 {
        self.to_turns_f64() * std::f64::consts::TAU
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// True when `value` lies in `[0, 1)`.
pub fn is_normalized(value: &BigRational) -> bool {
    !value.is_negative() && value < &BigRational::one()
}
