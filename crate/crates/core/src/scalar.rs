//! Exact scalars for the min-plus semiring.
//!
//! [`ExactScalar`] is an arbitrary-precision rational kept in lowest terms.
//! [`ExtScalar`] adjoins `+∞`, the neutral element of `⊕ = min` and the
//! absorbing element of `⊙ = +`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type ExactScalar = BigRational;

/// Builds an exact integer scalar.
pub fn int(v: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(v))
}

/// Builds the exact rational `num / den`.
///
/// Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> ExactScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn floor_to_bigint(q: &ExactScalar) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil_to_bigint(q: &ExactScalar) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

pub fn to_i64(v: &BigInt) -> Option<i64> {
    v.to_i64()
}

/// Parses `"7"`, `"-3"`, or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<ExactScalar> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a ExactScalar>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// An element of `R ∪ {+∞}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtScalar {
    Finite(ExactScalar),
    Infinity,
}

impl ExtScalar {
    pub fn zero() -> Self {
        ExtScalar::Finite(ExactScalar::zero())
    }

    pub fn from_int(v: i64) -> Self {
        ExtScalar::Finite(int(v))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtScalar::Finite(_))
    }

    pub fn finite(&self) -> Option<&ExactScalar> {
        match self {
            ExtScalar::Finite(v) => Some(v),
            ExtScalar::Infinity => None,
        }
    }

    /// Tropical addition, `min(a, b)`.
    pub fn oplus(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Tropical multiplication, `a + b` with `∞` absorbing.
    pub fn odot(&self, other: &Self) -> Self {
        match (self, other) {
            (ExtScalar::Finite(a), ExtScalar::Finite(b)) => ExtScalar::Finite(a + b),
            _ => ExtScalar::Infinity,
        }
    }

    /// Adds a finite shift; `∞` stays `∞`.
    pub fn shift(&self, by: &ExactScalar) -> Self {
        match self {
            ExtScalar::Finite(a) => ExtScalar::Finite(a + by),
            ExtScalar::Infinity => ExtScalar::Infinity,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, ExtScalar::Finite(v) if v.is_negative())
    }
}

impl From<ExactScalar> for ExtScalar {
    fn from(v: ExactScalar) -> Self {
        ExtScalar::Finite(v)
    }
}

impl PartialOrd for ExtScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtScalar::Finite(a), ExtScalar::Finite(b)) => a.cmp(b),
            (ExtScalar::Finite(_), ExtScalar::Infinity) => Ordering::Less,
            (ExtScalar::Infinity, ExtScalar::Finite(_)) => Ordering::Greater,
            (ExtScalar::Infinity, ExtScalar::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtScalar::Finite(v) => write!(f, "{v}"),
            ExtScalar::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtScalar {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" || t.eq_ignore_ascii_case("+inf") {
            return Ok(ExtScalar::Infinity);
        }
        parse_rational(t).map(ExtScalar::Finite).ok_or(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_min_identity_and_plus_absorber() {
        let a = ExtScalar::from_int(3);
        assert_eq!(a.oplus(&ExtScalar::Infinity), a);
        assert_eq!(a.odot(&ExtScalar::Infinity), ExtScalar::Infinity);
        assert!(ExtScalar::from_int(i64::MAX) < ExtScalar::Infinity);
    }

    #[test]
    fn parses_rationals_and_infinity() {
        assert_eq!("-6/4".parse::<ExtScalar>(), Ok(ExtScalar::Finite(ratio(-3, 2))));
        assert_eq!("inf".parse::<ExtScalar>(), Ok(ExtScalar::Infinity));
        assert!("1/0".parse::<ExtScalar>().is_err());
        assert!("x".parse::<ExtScalar>().is_err());
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(floor_to_bigint(&ratio(-3, 2)), BigInt::from(-2));
        assert_eq!(ceil_to_bigint(&ratio(-3, 2)), BigInt::from(-1));
        assert_eq!(ceil_to_bigint(&int(4)), BigInt::from(4));
    }
}
