//! Exact arithmetic in the Gaussian rationals Q(i).
//!
//! Values are kept in canonical form at all times: both components are
//! reduced rationals with positive denominators, so structural equality is
//! mathematical equality.
//!
//! Text format: `p/q`, `p/q+r/si`, `p/q-r/si`, with integer shorthand for
//! either component (`3`, `1+2i`, `-1/2i`). The canonical rendering always
//! writes the real part and omits the imaginary part when it is zero.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element `re + im·i` of Q(i).
///
/// Ordering is lexicographic on `(re, im)`; this is the canonical scalar
/// order used wherever a deterministic choice among scalars is needed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        // BigRational reduces on construction; nothing else to normalise.
        GaussianRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `re_num/re_den + (im_num/im_den)·i`. Panics on a zero denominator.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self::new(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        )
    }

    /// Gaussian integer `re + im·i`.
    pub fn gaussian(re: i64, im: i64) -> Self {
        Self::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    pub fn i() -> Self {
        Self::gaussian(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `re² + im²`; zero exactly when `self` is zero.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Least common multiple of the two component denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.re.denom().lcm(self.im.denom())
    }
}

/// Binary field operations on the four owned/borrowed combinations.
macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'b GaussianRational) -> GaussianRational {
                let f: fn(&GaussianRational, &GaussianRational) -> GaussianRational = $body;
                f(self, rhs)
            }
        }
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $tr<&'b GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'b GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussianRational::new(
    &a.re + &b.re,
    &a.im + &b.im
));
forward_binop!(Sub, sub, |a, b| GaussianRational::new(
    &a.re - &b.re,
    &a.im - &b.im
));
forward_binop!(Mul, mul, |a, b| GaussianRational::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rational(f, &self.re)?;
        if !self.im.is_zero() {
            f.write_str(if self.im.is_negative() { "-" } else { "+" })?;
            write_rational(f, &self.im.abs())?;
            f.write_str("i")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cursor over the trimmed scalar text; positions refer to the raw input.
struct Cursor<'a> {
    raw: &'a str,
    bytes: &'a [u8],
    pos: usize,
    end: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        (self.pos < self.end).then(|| self.bytes[self.pos])
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::parse(self.raw, self.pos, message)
    }

    fn sign(&mut self) -> bool {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.raw[start..self.pos].parse().expect("ascii digits"))
    }

    /// Unsigned `p` or `p/q`; `None` if no digits are present.
    fn magnitude(&mut self) -> Result<Option<BigRational>> {
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        if self.peek() != Some(b'/') {
            return Ok(Some(BigRational::from_integer(num)));
        }
        self.pos += 1;
        let den_pos = self.pos;
        let den = self
            .digits()
            .ok_or_else(|| self.err("expected denominator"))?;
        if den.is_zero() {
            return Err(Error::parse(self.raw, den_pos, "zero denominator"));
        }
        Ok(Some(BigRational::new(num, den)))
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(raw: &str) -> Result<Self> {
        let start = raw.len() - raw.trim_start().len();
        let end = raw.trim_end().len();
        let mut c = Cursor {
            raw,
            bytes: raw.as_bytes(),
            pos: start,
            end: end.max(start),
        };
        if c.pos >= c.end {
            return Err(c.err("empty scalar"));
        }

        let negative = c.sign();
        let first = c.magnitude()?;
        let signed = |q: BigRational, neg: bool| if neg { -q } else { q };

        // Pure imaginary: `[sign][mag]i`.
        if c.peek() == Some(b'i') {
            c.pos += 1;
            if c.pos != c.end {
                return Err(c.err("trailing characters after imaginary unit"));
            }
            let im = first.unwrap_or_else(BigRational::one);
            return Ok(Self::new(BigRational::zero(), signed(im, negative)));
        }

        let re = signed(first.ok_or_else(|| c.err("expected number"))?, negative);
        if c.pos == c.end {
            return Ok(Self::new(re, BigRational::zero()));
        }

        let im_negative = match c.peek() {
            Some(b'+') => false,
            Some(b'-') => true,
            _ => return Err(c.err("expected '+', '-' or end of scalar")),
        };
        c.pos += 1;
        let im = c.magnitude()?.unwrap_or_else(BigRational::one);
        if c.peek() != Some(b'i') {
            return Err(c.err("expected imaginary unit 'i'"));
        }
        c.pos += 1;
        if c.pos != c.end {
            return Err(c.err("trailing characters after imaginary unit"));
        }
        Ok(Self::new(re, signed(im, im_negative)))
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
