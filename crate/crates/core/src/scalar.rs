//! Coefficient rings.
//!
//! Everything that touches (co)chains is generic over [`Ring`]; elimination
//! and linear programming additionally need [`Field`] and [`LpScalar`]. The
//! exact instantiations are [`Int`](crate::Int) and [`Rat`](crate::Rat);
//! `f64` implements the field traits too and is only ever used to guess a
//! simplex basis that is then re-derived exactly.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Int, Rat};

/// Which coefficient ring a serialized (co)chain carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingTag {
    Int,
    Rat,
}

impl Display for RingTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingTag::Int => f.write_str("int"),
            RingTag::Rat => f.write_str("rat"),
        }
    }
}

pub trait Ring: Clone + Debug + PartialEq + Num + Signed + Send + Sync + 'static {
    const TAG: RingTag;

    fn from_int(v: &Int) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_int(&Int::from(v))
    }

    fn to_rat(&self) -> Rat;

    /// Inverse of [`to_rat`](Ring::to_rat); `None` when the value does not
    /// belong to the ring (a fraction for `Int`).
    fn try_from_rat(v: &Rat) -> Option<Self>;
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {}

impl Ring for BigInt {
    const TAG: RingTag = RingTag::Int;

    fn from_int(v: &Int) -> Self {
        v.clone()
    }

    fn to_rat(&self) -> Rat {
        Rat::from_integer(self.clone())
    }

    fn try_from_rat(v: &Rat) -> Option<Self> {
        v.is_integer().then(|| v.to_integer())
    }
}

impl Ring for BigRational {
    const TAG: RingTag = RingTag::Rat;

    fn from_int(v: &Int) -> Self {
        Rat::from_integer(v.clone())
    }

    fn to_rat(&self) -> Rat {
        self.clone()
    }

    fn try_from_rat(v: &Rat) -> Option<Self> {
        Some(v.clone())
    }
}

impl Field for BigRational {}

impl Ring for f64 {
    const TAG: RingTag = RingTag::Rat;

    fn from_int(v: &Int) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn to_rat(&self) -> Rat {
        Rat::from_f64(*self).unwrap_or_else(Rat::zero)
    }

    fn try_from_rat(v: &Rat) -> Option<Self> {
        v.to_f64()
    }
}

impl Field for f64 {}

/// Sign tests used by the simplex method. Exact for rationals, toleranced
/// for floats.
pub trait LpScalar: Field + PartialOrd {
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_negligible(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
}

impl LpScalar for BigRational {
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

const F64_EPS: f64 = 1e-9;

impl LpScalar for f64 {
    fn is_pos(&self) -> bool {
        *self > F64_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -F64_EPS
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

/// `floor(num / den)` for integers, den > 0.
pub fn floor_div(num: &Int, den: &Int) -> Int {
    num.div_floor(den)
}

/// Serialized form: `"p/q"`, or `"p"` for integers.
pub fn fmt_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    Rat::from_str(t).map_err(|_| format!("not a rational: {s:?}"))
}

pub fn parse_int(s: &str) -> Result<Int, String> {
    Int::from_str_radix(s.trim(), 10).map_err(|_| format!("not an integer: {s:?}"))
}

pub fn abs_max<'a, R: Ring>(values: impl IntoIterator<Item = &'a R>) -> R {
    values.into_iter().map(|v| v.abs()).fold(R::zero(), |m, v| if v.to_rat() > m.to_rat() { v } else { m })
}
