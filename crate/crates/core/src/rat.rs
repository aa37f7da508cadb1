//! Exact rational numbers and the extended value `+∞`.
//!
//! `Rat` is `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator. The helpers here fix the textual
//! form used by every file format in the crate: `"p/q"` or `"p"`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_big(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`; whitespace around the parts is allowed.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(RatParseError::Empty);
    }
    let bad = || RatParseError::Malformed(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(RatParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn floor_int(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil_int(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

pub fn to_i64(r: &BigInt) -> Option<i64> {
    r.to_i64()
}

/// Least common multiple of the denominators of `xs` (1 for an empty slice).
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector by the lcm of its denominators, returning the
/// integer vector and the scale.
pub fn clear_denominators(xs: &[Rat]) -> (Vec<BigInt>, BigInt) {
    let l = common_denominator(xs);
    let v = xs
        .iter()
        .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
        .collect();
    (v, l)
}

/// A rational number or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Finite(Rat),
    PosInf,
}

impl ExtRat {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::PosInf => None,
        }
    }

    pub fn into_finite(self) -> Option<Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::PosInf => None,
        }
    }
}

impl From<Rat> for ExtRat {
    fn from(r: Rat) -> Self {
        ExtRat::Finite(r)
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
            (ExtRat::Finite(_), ExtRat::PosInf) => Ordering::Less,
            (ExtRat::PosInf, ExtRat::Finite(_)) => Ordering::Greater,
            (ExtRat::PosInf, ExtRat::PosInf) => Ordering::Equal,
        }
    }
}

impl Add for ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a + b),
            _ => ExtRat::PosInf,
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(r) => f.write_str(&fmt_rat(r)),
            ExtRat::PosInf => f.write_str("+inf"),
        }
    }
}

/// Simplest rational (least denominator, then least |numerator|) in the
/// closed interval `[lo, hi]`, found by walking the Stern–Brocot tree.
pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo <= hi, "empty interval");
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rat::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    simplest_positive(lo, hi)
}

fn simplest_positive(lo: &Rat, hi: &Rat) -> Rat {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if fl.clone() + Rat::one() <= *hi {
        return fl + Rat::one();
    }
    // lo and hi share the integer part; recurse on reciprocals of the
    // fractional parts (order flips).
    let lo_f = lo - &fl;
    let hi_f = hi - &fl;
    let inner = simplest_positive(&hi_f.recip(), &lo_f.recip());
    fl + inner.recip()
}
