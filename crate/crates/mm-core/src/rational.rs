//! Exact arbitrary-precision rational scalars and the Pochhammer/binomial
//! kernels built on them.
//!
//! `Rational` is the universal scalar of the crate: always stored in lowest
//! terms with a positive denominator, serialized on the wire as the string
//! `"p/q"` (or just `"p"` when q = 1). Arithmetic is exact; division by zero
//! is an error (`checked_div`) or a panic (the `/` operator, mirroring
//! integer division).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, the scalar field for every formula in
/// this crate. Backed by [`num_rational::BigRational`], which keeps the value
/// in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Build p/q from machine integers. Panics if `q == 0`.
    pub fn new(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn from_big(p: BigInt, q: BigInt) -> Self {
        assert!(!q.is_zero(), "zero denominator");
        Rational(BigRational::new(p, q))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// True when the denominator is exactly 1.
    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// True when the value is a nonnegative integer (an element of N).
    pub fn is_natural(&self) -> bool {
        self.0.is_integer() && !self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Integer power, negative exponents allowed (value must be nonzero then).
    pub fn pow_i64(&self, exp: i64) -> Self {
        if exp == 0 {
            return Rational::one();
        }
        if exp < 0 {
            assert!(!self.is_zero(), "negative power of zero");
        }
        Rational(self.0.pow(exp as i32))
    }

    /// Best-effort conversion for empirical probes and human-readable output.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Fall back to a quotient of lossy conversions for huge operands.
            let n = self.0.numer().to_f64().unwrap_or(f64::INFINITY);
            let d = self.0.denom().to_f64().unwrap_or(f64::INFINITY);
            n / d
        })
    }

    /// Number of bits of the denominator, used by the CLI growth guard.
    pub fn denominator_bits(&self) -> u64 {
        self.0.denom().bits()
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.abs().cmp(&other.abs())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            t.parse::<BigInt>()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse integer `{t}`")))
        };
        match s.split_once('/') {
            None => Ok(Rational(BigRational::from_integer(parse_int(s)?))),
            Some((p, q)) => {
                let p = parse_int(p)?;
                let q = parse_int(q)?;
                if q.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Rational(BigRational::new(p, q)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl<'a, 'b> Div<&'b Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'b Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

/// Rising factorial (a)_k = a(a+1)...(a+k-1); the empty product for k = 0.
pub fn pochhammer(a: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    let mut factor = a.clone();
    for _ in 0..k {
        acc *= &factor;
        factor += &Rational::one();
    }
    acc
}

/// k! as a big integer.
pub fn factorial(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    acc
}

/// Binomial coefficient for nonnegative integer arguments; 0 when k > n.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Generalized binomial coefficient C(alpha, k) = alpha(alpha-1)...(alpha-k+1)/k!
/// for rational alpha, i.e. the coefficient of t^k in (1+t)^alpha.
pub fn binomial_rat(alpha: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    let mut factor = alpha.clone();
    for _ in 0..k {
        acc *= &factor;
        factor -= &Rational::one();
    }
    acc / Rational::from_bigint(factorial(k))
}

/// Gamma(a + m)/Gamma(a) for integer m of either sign, as a finite Pochhammer
/// product. For negative m the value is 1/(a-|m|)_{|m|}; a zero in that
/// product corresponds to a pole of the denominator Gamma and is an error
/// here (callers on the integer grid arrange arguments so it cannot occur).
pub fn gamma_ratio(a: &Rational, m: i64) -> Result<Rational> {
    if m >= 0 {
        Ok(pochhammer(a, m as usize))
    } else {
        let shifted = a + &Rational::integer(m);
        let p = pochhammer(&shifted, (-m) as usize);
        if p.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::one() / p)
    }
}
