use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, ExactScalar};

/// Working precisions tried by [`refine`], in bits.
pub const MIN_BITS: u32 = 64;
pub const MAX_BITS: u32 = 4096;

/// A rational interval `[lo, hi]` known to contain some real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: ExactScalar,
    pub hi: ExactScalar,
}

impl Enclosure {
    pub fn new(lo: ExactScalar, hi: ExactScalar) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn exact(v: ExactScalar) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::exact(int(v))
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> ExactScalar {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &ExactScalar) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        self.mul(&Self::exact(c.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::from_int(1), |acc, _| acc.mul(self))
    }

    /// Reciprocal of a strictly positive enclosure.
    pub fn recip(&self) -> Self {
        assert!(self.lo.is_positive(), "reciprocal needs a positive enclosure");
        Self::new(self.hi.recip(), self.lo.recip())
    }

    pub fn min(&self, o: &Self) -> Self {
        Self::new(self.lo.clone().min(o.lo.clone()), self.hi.clone().min(o.hi.clone()))
    }

    /// Widens to dyadic endpoints with about `bits` significant bits, keeping
    /// numerators and denominators small.
    pub fn rounded(&self, bits: u32) -> Self {
        Self::new(round_dyadic(&self.lo, bits, false), round_dyadic(&self.hi, bits, true))
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

fn round_dyadic(x: &ExactScalar, bits: u32, up: bool) -> ExactScalar {
    if x.is_zero() {
        return x.clone();
    }
    let mag = x.numer().bits() as i64 - x.denom().bits() as i64;
    let e = bits as i64 - mag;
    let scaled = if e >= 0 {
        x * ExactScalar::from_integer(BigInt::one() << e as u64)
    } else {
        x / ExactScalar::from_integer(BigInt::one() << (-e) as u64)
    };
    let r = if up { scaled.ceil() } else { scaled.floor() };
    if e >= 0 {
        r / ExactScalar::from_integer(BigInt::one() << e as u64)
    } else {
        r * ExactScalar::from_integer(BigInt::one() << (-e) as u64)
    }
}

/// `arctan(1/x)` bracketed by consecutive partial sums of its alternating
/// series.
fn arctan_inv(x: u64, bits: u32) -> Enclosure {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let eps = ExactScalar::new(BigInt::one(), BigInt::one() << (bits + 8));
    let mut sum = ExactScalar::zero();
    let mut pow = BigInt::from(x);
    let mut k = 0u64;
    loop {
        let term = ExactScalar::new(BigInt::one(), &pow * BigInt::from(2 * k + 1));
        let next = if k.is_multiple_of(2) { &sum + &term } else { &sum - &term };
        if term < eps {
            let (lo, hi) = if sum < next { (sum, next) } else { (next, sum) };
            return Enclosure::new(lo, hi);
        }
        sum = next;
        pow *= &x2;
        k += 1;
    }
}

/// `π = 16 arctan(1/5) − 4 arctan(1/239)`.
pub fn pi(bits: u32) -> Enclosure {
    let a = arctan_inv(5, bits).scale(&int(16));
    let b = arctan_inv(239, bits).scale(&int(4));
    Enclosure::new(&a.lo - &b.hi, &a.hi - &b.lo).rounded(bits)
}

/// `√v` for rational `v ≥ 0`.
pub fn sqrt(v: &ExactScalar, bits: u32) -> Enclosure {
    assert!(!v.is_negative(), "square root of a negative number");
    let (p, q) = (v.numer(), v.denom());
    let n = p * q;
    if let Some(exact) = exact_sqrt(&n) {
        return Enclosure::exact(ExactScalar::new(exact, q.clone()));
    }
    let shift = BigInt::one() << bits;
    let big = &n * &shift * &shift;
    let s = big.sqrt();
    let den = q * &shift;
    Enclosure::new(
        ExactScalar::new(s.clone(), den.clone()),
        ExactScalar::new(s + 1, den),
    )
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// `⌈√v⌉` for integer `v ≥ 0`.
pub fn ceil_sqrt(v: &BigInt) -> BigInt {
    let s = v.sqrt();
    if &s * &s == *v {
        s
    } else {
        s + 1
    }
}

/// Volume of the unit Euclidean ball in dimension `d`.
pub fn kappa(d: u32, bits: u32) -> Enclosure {
    let j = d / 2;
    let pij = pi(bits).pow(j);
    if d.is_multiple_of(2) {
        let f: BigInt = (1..=j).fold(BigInt::one(), |a, i| a * i);
        pij.scale(&ExactScalar::new(BigInt::one(), f))
    } else {
        let df: BigInt = (0..=j).fold(BigInt::one(), |a, i| a * (2 * i + 1));
        pij.scale(&ExactScalar::new(BigInt::one() << (j + 1), df))
    }
}

/// `2^{e/2}` for any integer `e`.
pub fn pow2_half(e: i64, bits: u32) -> Enclosure {
    let whole = Integer::div_floor(&e, &2);
    let base = if whole >= 0 {
        ExactScalar::from_integer(BigInt::one() << whole as u64)
    } else {
        ExactScalar::new(BigInt::one(), BigInt::one() << (-whole) as u64)
    };
    if e.is_even() {
        Enclosure::exact(base)
    } else {
        sqrt(&int(2), bits).scale(&base)
    }
}

/// `v^{e/2}` for rational `v ≥ 0` and integer `e ≥ 0`.
pub fn pow_half(v: &ExactScalar, e: u32, bits: u32) -> Enclosure {
    let whole = Enclosure::exact(v.clone()).pow(e / 2);
    if e.is_multiple_of(2) {
        whole
    } else {
        whole.mul(&sqrt(v, bits))
    }
}

/// Runs `f` at increasing precision until it returns a verdict.
pub fn refine<T>(start: u32, what: &str, mut f: impl FnMut(u32) -> Result<Option<T>>) -> Result<T> {
    let mut bits = start.max(8);
    loop {
        if let Some(v) = f(bits)? {
            return Ok(v);
        }
        if bits >= MAX_BITS {
            return Err(Error::Inconclusive {
                bits,
                what: what.to_string(),
            });
        }
        bits = (bits * 2).min(MAX_BITS);
    }
}
