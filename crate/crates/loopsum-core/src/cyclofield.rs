//! Exact arithmetic in Q(w), where w is a primitive sixth root of unity.
//!
//! Elements are stored on the basis {1, w} with the reduction rule
//! `w^2 = w - 1`, which implies `w^3 = -1` and `w^6 = 1`. Coefficients are
//! arbitrary-precision rationals, so equality is decidable and every
//! operation is exact.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CoreError;

/// Arbitrary-precision rational number: always reduced, denominator positive,
/// zero represented as 0/1. These invariants are maintained by the underlying
/// implementation's constructors.
pub type Rational = BigRational;

/// Parse a rational from `"p"` or `"p/q"` with decimal integers.
pub fn parse_rational(s: &str) -> Result<Rational, CoreError> {
    let bad = || CoreError::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
    let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(CoreError::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(num, den))
}

/// An element `a + b*w` of Q(w).
///
/// The representation is unique: two values are equal iff both components are
/// equal. Products are reduced via `w^2 = w - 1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Cyclo {
    a: Rational,
    b: Rational,
}

impl Cyclo {
    /// Build `a + b*w`.
    pub fn new(a: Rational, b: Rational) -> Self {
        Cyclo { a, b }
    }

    /// The rational part (coefficient of 1).
    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// The coefficient of w.
    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// The rational number `r`, embedded.
    pub fn from_rational(r: Rational) -> Self {
        Cyclo { a: r, b: Rational::zero() }
    }

    /// The integer `n`, embedded.
    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// The rational `p/q`, embedded. Panics if `q == 0`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The generator w itself.
    pub fn omega() -> Self {
        Cyclo { a: Rational::zero(), b: Rational::one() }
    }

    /// `w^k` for any integer `k`, reduced canonically; periodic with period 6.
    pub fn omega_pow(k: i64) -> Self {
        let f = |a: i64, b: i64| Cyclo::new(
            Rational::from_integer(BigInt::from(a)),
            Rational::from_integer(BigInt::from(b)),
        );
        match k.rem_euclid(6) {
            0 => f(1, 0),
            1 => f(0, 1),
            2 => f(-1, 1),
            3 => f(-1, 0),
            4 => f(0, -1),
            5 => f(1, -1),
            _ => unreachable!(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True iff the value lies in Q (no w component).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Field norm `N(a + b*w) = a^2 + a*b + b^2`; zero iff the element is zero,
    /// and multiplicative.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a + &self.a * &self.b + &self.b * &self.b
    }

    /// Multiplicative inverse: `(a + b*w)^-1 = ((a + b) - b*w) / N`.
    pub fn inv(&self) -> Result<Cyclo, CoreError> {
        if self.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Cyclo::new((&self.a + &self.b) / &n, -(&self.b) / &n))
    }

    /// Exact field division.
    pub fn div(&self, rhs: &Cyclo) -> Result<Cyclo, CoreError> {
        Ok(self * &rhs.inv()?)
    }

    /// `self^k` for any integer `k` (negative powers invert; `0^0 = 1`).
    pub fn pow(&self, k: i64) -> Result<Cyclo, CoreError> {
        if k < 0 {
            return self.inv()?.pow(k.unsigned_abs() as i64);
        }
        let mut result = Cyclo::one();
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }
}

impl From<i64> for Cyclo {
    fn from(n: i64) -> Self {
        Cyclo::from_int(n)
    }
}

impl Add<&Cyclo> for &Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        Cyclo::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub<&Cyclo> for &Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        Cyclo::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul<&Cyclo> for &Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        // (a1 + b1 w)(a2 + b2 w) = a1 a2 - b1 b2 + (a1 b2 + a2 b1 + b1 b2) w
        let bb = &self.b * &rhs.b;
        Cyclo::new(
            &self.a * &rhs.a - &bb,
            &self.a * &rhs.b + &self.b * &rhs.a + &bb,
        )
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo::new(-(&self.a), -(&self.b))
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: &Cyclo) -> Cyclo {
                (&self).$method(rhs)
            }
        }
        impl $trait<Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -(&self)
    }
}

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: &Cyclo) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl MulAssign<&Cyclo> for Cyclo {
    fn mul_assign(&mut self, rhs: &Cyclo) {
        *self = (&*self) * rhs;
    }
}

/// Canonical text form: `"a"` if b = 0, `"bw"` if a = 0, else `"a + bw"` /
/// `"a - bw"`. The w coefficient always carries an explicit numeral
/// (`"1w"`, not `"w"`), keeping the grammar trivially parseable.
impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}w", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}w", self.a, -(&self.b))
        } else {
            write!(f, "{} + {}w", self.a, self.b)
        }
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Cyclo {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(CoreError::Parse("empty coefficient".into()));
        }
        // Split at a top-level " + " or " - " (starting after any leading sign).
        let split = s[1..].find(" + ").map(|i| (i + 1, false))
            .or_else(|| s[1..].find(" - ").map(|i| (i + 1, true)));
        let (first, second) = match split {
            Some((i, negated)) => {
                let rest = &s[i + 3..];
                (&s[..i], Some((rest, negated)))
            }
            None => (s, None),
        };
        let parse_part = |part: &str| -> Result<(Rational, bool), CoreError> {
            let part = part.trim();
            match part.strip_suffix('w') {
                Some(r) => Ok((parse_rational(r)?, true)),
                None => Ok((parse_rational(part)?, false)),
            }
        };
        let (r1, w1) = parse_part(first)?;
        match second {
            None => Ok(if w1 {
                Cyclo::new(Rational::zero(), r1)
            } else {
                Cyclo::from_rational(r1)
            }),
            Some((part, negated)) => {
                let (r2, w2) = parse_part(part)?;
                if w1 || !w2 {
                    return Err(CoreError::Parse(format!(
                        "expected `a +/- bw`, got `{s}`"
                    )));
                }
                let r2 = if negated { -r2 } else { r2 };
                Ok(Cyclo::new(r1, r2))
            }
        }
    }
}

impl Serialize for Cyclo {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Cyclo", 2)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Cyclo {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: String,
            b: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let a = parse_rational(&raw.a).map_err(D::Error::custom)?;
        let b = parse_rational(&raw.b).map_err(D::Error::custom)?;
        Ok(Cyclo::new(a, b))
    }
}
