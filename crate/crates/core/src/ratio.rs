//! Exact rational arithmetic for competitive ratios.
//!
//! Every optimality or equilibrium decision in this crate compares
//! [`ExactRatio`] values; floating point is only produced at the very edge
//! (printing and Monte-Carlo averages).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational number kept in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRatio(Ratio<i128>);

impl ExactRatio {
    pub fn new(numer: i128, denom: i128) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidParameter {
                name: "denominator",
                reason: "must be nonzero".into(),
            });
        }
        Ok(Self(Ratio::new(numer, denom)))
    }

    pub fn from_integer(n: i128) -> Self {
        Self(Ratio::from_integer(n))
    }

    pub fn one() -> Self {
        Self(Ratio::one())
    }

    pub fn zero() -> Self {
        Self(Ratio::zero())
    }

    /// `numer / denom` for nonnegative integer inputs; panics on a zero
    /// denominator, so callers must rule that out first.
    pub(crate) fn of(numer: u64, denom: u64) -> Self {
        assert!(denom != 0, "ExactRatio::of with zero denominator");
        Self(Ratio::new(numer as i128, denom as i128))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn floor(&self) -> i128 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i128 {
        self.0.ceil().to_integer()
    }

    pub fn recip(&self) -> Self {
        Self(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Six fractional digits, the format used by every printed table.
    pub fn decimal(&self) -> String {
        format!("{:.6}", self.to_f64())
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }
}

/// `cost / opt` in lowest terms. The optimum of any run with at least one
/// active day is at least 1 unless the license is free on day 1.
pub fn ratio(cost: u64, opt: u64) -> Result<ExactRatio> {
    if opt == 0 {
        return Err(Error::ZeroOptimum { cost });
    }
    Ok(ExactRatio::of(cost, opt))
}

/// A realized competitive ratio, which can be unbounded when an agent pays
/// something on a day where the offline optimum is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RatioValue {
    Finite(ExactRatio),
    Infinite,
}

impl RatioValue {
    /// Realized ratio with the convention `0 / 0 = 1`.
    pub fn of(cost: u64, opt: u64) -> Self {
        match (cost, opt) {
            (0, 0) => RatioValue::Finite(ExactRatio::one()),
            (_, 0) => RatioValue::Infinite,
            _ => RatioValue::Finite(ExactRatio::of(cost, opt)),
        }
    }

    pub fn finite(&self) -> Option<ExactRatio> {
        match self {
            RatioValue::Finite(r) => Some(*r),
            RatioValue::Infinite => None,
        }
    }
}

impl fmt::Display for RatioValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioValue::Finite(r) => r.fmt(f),
            RatioValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for RatioValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RatioValue::Finite(r) => r.serialize(s),
            RatioValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for ExactRatio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            fraction: String,
            decimal: f64,
        }
        Repr {
            fraction: self.to_string(),
            decimal: (self.to_f64() * 1e6).round() / 1e6,
        }
        .serialize(s)
    }
}

/// Accepts integers (`3`), fractions (`31/25`) and finite decimals (`0.2`).
impl FromStr for ExactRatio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter {
            name: "ratio",
            reason: format!("cannot parse `{s}` as an exact rational"),
        };
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            return ExactRatio::new(n, d).map_err(|_| bad());
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || frac_part.len() > 18
        {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: i128 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
        let denom = 10i128.pow(frac_part.len() as u32);
        let value = ExactRatio::new(numer, denom).map_err(|_| bad())?;
        Ok(if neg { -value } else { value })
    }
}

impl From<u64> for ExactRatio {
    fn from(n: u64) -> Self {
        Self::from_integer(n as i128)
    }
}

impl From<i64> for ExactRatio {
    fn from(n: i64) -> Self {
        Self::from_integer(n as i128)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRatio {
            type Output = ExactRatio;
            fn $method(self, rhs: ExactRatio) -> ExactRatio {
                ExactRatio(self.0.$method(rhs.0))
            }
        }
        impl $trait<u64> for ExactRatio {
            type Output = ExactRatio;
            fn $method(self, rhs: u64) -> ExactRatio {
                ExactRatio(self.0.$method(Ratio::from_integer(rhs as i128)))
            }
        }
        impl $trait<ExactRatio> for u64 {
            type Output = ExactRatio;
            fn $method(self, rhs: ExactRatio) -> ExactRatio {
                ExactRatio(Ratio::from_integer(self as i128).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactRatio {
    type Output = ExactRatio;
    fn neg(self) -> ExactRatio {
        ExactRatio(-self.0)
    }
}

impl PartialEq<u64> for ExactRatio {
    fn eq(&self, other: &u64) -> bool {
        self.0 == Ratio::from_integer(*other as i128)
    }
}

impl PartialOrd<u64> for ExactRatio {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some(self.0.cmp(&Ratio::from_integer(*other as i128)))
    }
}
