//! Exact scalar types: rationals, signed square roots of rationals, and
//! extended values that may be `+∞`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type Vector = Vec<Rational>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn vector(values: &[i64]) -> Vector {
    values.iter().map(|&v| int(v)).collect()
}

/// Parses `"num/den"`, a plain integer, or a finite decimal such as `"-0.125"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(num, den);
        return Ok(if negative { -q } else { q });
    }
    let num: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(num))
}

/// Canonical `"num/den"` form (always with an explicit denominator).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(v: &[Rational], t: &Rational) -> Vector {
    v.iter().map(|x| x * t).collect()
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// A rational `r` with `r <= sqrt(q)`, accurate to about `2^-40` relative.
pub fn sqrt_lower_bound(q: &Rational) -> Rational {
    if let Some(r) = rational_sqrt(q) {
        return r;
    }
    let scale: BigInt = BigInt::one() << 80u32;
    // floor(sqrt(num * den * scale^2)) / (den * scale) <= sqrt(num/den)
    let radicand = q.numer() * q.denom() * &scale * &scale;
    Rational::new(radicand.sqrt(), q.denom() * scale)
}

/// A real number of the form `±sqrt(square)` with `square` rational.
///
/// Every rational `r` is representable as `sign(r)·sqrt(r²)`; ℓ2 norms of
/// rational vectors are representable without loss.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactReal {
    negative: bool,
    square: Rational,
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal { negative: false, square: Rational::zero() }
    }

    pub fn from_rational(r: &Rational) -> Self {
        ExactReal { negative: r.is_negative(), square: r * r }
    }

    /// `sqrt(square)`; `square` must be nonnegative.
    pub fn sqrt(square: Rational) -> Self {
        assert!(!square.is_negative(), "square root of a negative rational");
        ExactReal { negative: false, square }
    }

    pub fn is_zero(&self) -> bool {
        self.square.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.negative && !self.square.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.negative && !self.square.is_zero()
    }

    /// The exact square of the value.
    pub fn square(&self) -> &Rational {
        &self.square
    }

    pub fn signum(&self) -> i32 {
        if self.square.is_zero() {
            0
        } else if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn neg(&self) -> Self {
        ExactReal { negative: !self.negative && !self.square.is_zero(), square: self.square.clone() }
    }

    /// The value as a rational when it is one.
    pub fn to_rational(&self) -> Option<Rational> {
        rational_sqrt(&self.square).map(|r| if self.negative { -r } else { r })
    }

    pub fn to_f64(&self) -> f64 {
        let magnitude = match rational_sqrt(&self.square) {
            Some(r) => r.to_f64().unwrap_or(f64::NAN),
            None => self.square.to_f64().unwrap_or(f64::NAN).sqrt(),
        };
        if self.negative {
            -magnitude
        } else {
            magnitude
        }
    }

    pub fn mul_rational(&self, t: &Rational) -> Self {
        let negative = self.negative != t.is_negative();
        ExactReal { negative: negative && !self.square.is_zero() && !t.is_zero(), square: &self.square * t * t }
    }

    /// `self / other`; `other` must be nonzero.
    pub fn div(&self, other: &ExactReal) -> Self {
        assert!(!other.is_zero(), "division by zero");
        let negative = self.negative != other.negative;
        ExactReal { negative: negative && !self.square.is_zero(), square: &self.square / &other.square }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        self.cmp(&ExactReal::from_rational(r))
    }
}

impl Ord for ExactReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.signum().cmp(&other.signum()) {
            Ordering::Equal => {
                let by_magnitude = self.square.cmp(&other.square);
                if self.signum() < 0 {
                    by_magnitude.reverse()
                } else {
                    by_magnitude
                }
            }
            unequal => unequal,
        }
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            Some(r) => write!(f, "{}", format_rational(&r)),
            None => {
                let sign = if self.negative { "-" } else { "" };
                write!(f, "{sign}sqrt({})", format_rational(&self.square))
            }
        }
    }
}

/// A value that is either a finite [`ExactReal`] or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(ExactReal),
    Infinite,
}

impl Extended {
    pub fn rational(r: &Rational) -> Self {
        Extended::Finite(ExactReal::from_rational(r))
    }

    pub fn zero() -> Self {
        Extended::Finite(ExactReal::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<&ExactReal> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.finite().and_then(ExactReal::to_rational)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(v) => v.to_f64(),
            Extended::Infinite => f64::INFINITY,
        }
    }

    pub fn mul_rational(&self, t: &Rational) -> Self {
        match self {
            Extended::Finite(v) => Extended::Finite(v.mul_rational(t)),
            Extended::Infinite if t.is_zero() => Extended::zero(),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => v.fmt(f),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// Rounds `x` to the nearest multiple of `1/den`.
pub fn round_to_denominator(x: f64, den: i64) -> Rational {
    let scaled = (x * den as f64).round();
    let num = BigInt::from(scaled as i64);
    Rational::new(num, BigInt::from(den))
}

/// Least common multiple of the denominators, used to clear fractions.
pub fn common_denominator(values: &[Rational]) -> BigInt {
    values.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn sign_of(q: &Rational) -> i32 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
