//! Exact arithmetic over the Gaussian rationals `Q(i)`.
//!
//! Every coefficient in the crate is a [`GaussianRational`]: a pair of
//! arbitrary-precision rationals kept in lowest terms after each operation,
//! so structural equality coincides with field equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ScalarError;

/// Arbitrary-precision rational in canonical form (positive denominator,
/// numerator and denominator coprime). Values whose parts fit in `i64` are
/// stored inline; the representation is canonical, so derived equality and
/// hashing agree with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// `(numerator, denominator)` with `denominator > 0` and `gcd = 1`.
    Small(i64, i64),
    /// Only used when the value does not fit `Small`.
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self, ScalarError> {
        let den = denominator.into();
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational::from_big(BigRational::new(numerator.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational::from_big(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new(r))),
        }
    }

    /// Reduces `n/d` (`d != 0`) into canonical form.
    fn from_i128(n: i128, d: i128) -> Self {
        debug_assert!(d != 0);
        if d == 1 {
            if let Ok(n) = i64::try_from(n) {
                return Rational(Repr::Small(n, 1));
            }
        }
        let g = gcd_u128(n.unsigned_abs(), d.unsigned_abs());
        let (mut n, mut d) = if g > 1 { (n / g as i128, d / g as i128) } else { (n, d) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))),
        }
    }

    fn as_small_integer(&self) -> Option<i64> {
        match self.0 {
            Repr::Small(n, 1) => Some(n),
            _ => None,
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => (**r).clone(),
        }
    }

    pub fn numerator(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denominator(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Rational, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Rational::from_i128(i128::from(*a) * i128::from(*d), i128::from(*b) * i128::from(*c))
            }
            _ => Rational::from_big(self.to_big() / other.to_big()),
        })
    }

    pub fn recip(&self) -> Result<Rational, ScalarError> {
        Rational::one().checked_div(self)
    }

    fn add_impl(&self, other: &Rational, negate: bool) -> Rational {
        if let (Repr::Small(a, 1), Repr::Small(c, 1)) = (&self.0, &other.0) {
            let s = if negate { a.checked_sub(*c) } else { a.checked_add(*c) };
            if let Some(s) = s {
                return Rational(Repr::Small(s, 1));
            }
        }
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let c = if negate { -i128::from(*c) } else { i128::from(*c) };
                if *b == 1 && *d == 1 {
                    let s = i128::from(*a) + c;
                    return match i64::try_from(s) {
                        Ok(s) => Rational(Repr::Small(s, 1)),
                        Err(_) => Rational::from_i128(s, 1),
                    };
                }
                let (a, b, d) = (i128::from(*a), i128::from(*b), i128::from(*d));
                Rational::from_i128(a * d + c * b, b * d)
            }
            _ => {
                let rhs = other.to_big();
                Rational::from_big(if negate { self.to_big() - rhs } else { self.to_big() + rhs })
            }
        }
    }

    fn mul_impl(&self, other: &Rational) -> Rational {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    let p = i128::from(*a) * i128::from(*c);
                    return match i64::try_from(p) {
                        Ok(p) => Rational(Repr::Small(p, 1)),
                        Err(_) => Rational::from_i128(p, 1),
                    };
                }
                Rational::from_i128(i128::from(*a) * i128::from(*c), i128::from(*b) * i128::from(*d))
            }
            _ => Rational::from_big(self.to_big() * other.to_big()),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (i128::from(*a) * i128::from(*d)).cmp(&(i128::from(*c) * i128::from(*b)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &'a Rational) -> Rational {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &'a Rational) -> Rational {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &'a Rational) -> Rational {
        self.mul_impl(rhs)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        self.add_impl(&rhs, false)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self.add_impl(&rhs, true)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        self.mul_impl(&rhs)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational(Repr::Small(m, *d)),
                None => Rational::from_i128(-i128::from(*n), i128::from(*d)),
            },
            Repr::Big(r) => Rational::from_big(-&**r),
        }
    }
}

/// An element `re + im·i` of `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

/// Binary field operation selector, mirroring the arithmetic entry point
/// exposed over the C ABI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational::default()
    }

    pub fn one() -> Self {
        GaussianRational::from_integer(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        GaussianRational::new(Rational::from(n), Rational::zero())
    }

    pub fn from_gaussian_integer(re: i64, im: i64) -> Self {
        GaussianRational::new(Rational::from(re), Rational::from(im))
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational::new(re, Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    fn as_small_integers(&self) -> Option<(i64, i64)> {
        Some((self.re.as_small_integer()?, self.im.as_small_integer()?))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(GaussianRational::new(self.re.checked_div(&n)?, (-&self.im).checked_div(&n)?))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = GaussianRational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Applies `op`; only division can fail.
    pub fn apply(&self, op: FieldOp, other: &Self) -> Result<Self, ScalarError> {
        Ok(match op {
            FieldOp::Add => self + other,
            FieldOp::Sub => self - other,
            FieldOp::Mul => self * other,
            FieldOp::Div => self.checked_div(other)?,
        })
    }

    /// Parses a complex literal such as `-1/2+3i`, `i`, `-i`, `2/3i` or `-2`.
    pub fn parse(text: &str) -> Result<Self, ScalarError> {
        LiteralParser::new(text).parse()
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_integer(n)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        GaussianRational::from_rational(r)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'a GaussianRational) -> GaussianRational {
        if let (Some((a, b)), Some((c, d))) = (self.as_small_integers(), rhs.as_small_integers()) {
            let re = a.checked_mul(c).zip(b.checked_mul(d)).and_then(|(x, y)| x.checked_sub(y));
            let im = a.checked_mul(d).zip(b.checked_mul(c)).and_then(|(x, y)| x.checked_add(y));
            if let (Some(re), Some(im)) = (re, im) {
                return GaussianRational::new(Rational(Repr::Small(re, 1)), Rational(Repr::Small(im, 1)));
            }
            let (a, b, c, d) = (i128::from(a), i128::from(b), i128::from(c), i128::from(d));
            return GaussianRational::new(Rational::from_i128(a * c - b * d, 1), Rational::from_i128(a * d + b * c, 1));
        }
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::from_rational(&self.re * &rhs.re);
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        GaussianRational::new(re, im)
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        GaussianRational::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        GaussianRational::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        if !rhs.re.is_zero() {
            self.re = &self.re + &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im = &self.im + &rhs.im;
        }
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re = &self.re - &rhs.re;
        if !rhs.im.is_zero() {
            self.im = &self.im - &rhs.im;
        }
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
        GaussianRational::new(-&self.re, -&self.im)
    }
}

impl Sum for GaussianRational {
    fn sum<I: Iterator<Item = GaussianRational>>(iter: I) -> Self {
        iter.fold(GaussianRational::zero(), |acc, x| acc + x)
    }
}

impl Product for GaussianRational {
    fn product<I: Iterator<Item = GaussianRational>>(iter: I) -> Self {
        iter.fold(GaussianRational::one(), |acc, x| acc * x)
    }
}

/// Canonical ordering used only to make sorted output deterministic
/// (real part first, then imaginary part). It is not a field ordering.
impl PartialOrd for GaussianRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GaussianRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if !self.re.is_zero() {
            write!(f, "{}", self.re)?;
            if !self.im.is_negative() {
                f.write_str("+")?;
            }
        }
        if self.im.is_one() {
            f.write_str("i")
        } else if (-&self.im).is_one() {
            f.write_str("-i")
        } else {
            write!(f, "{}i", self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GaussianRational {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GaussianRational::parse(s)
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        GaussianRational::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Hand-written recursive-descent parser for the literal grammar
///
/// ```text
/// rational := ["-"] digits ["/" digits]
/// complex  := rational
///           | [rational ("+"|"-")] [digits ["/" digits]] "i"
///           | ["-"] [digits ["/" digits]] "i"
/// ```
struct LiteralParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> LiteralParser<'a> {
    fn new(text: &'a str) -> Self {
        LiteralParser { bytes: text.as_bytes(), pos: 0 }
    }

    fn err(&self, message: &str) -> ScalarError {
        ScalarError::Parse { position: self.pos, message: message.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).ok()?;
        s.parse().ok()
    }

    /// `digits ["/" digits]`, with the sign supplied by the caller.
    fn magnitude(&mut self) -> Result<Option<Rational>, ScalarError> {
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        if self.eat(b'/') {
            let den_pos = self.pos;
            let den = self.digits().ok_or_else(|| self.err("expected denominator digits after '/'"))?;
            if den.is_zero() {
                return Err(ScalarError::Parse { position: den_pos, message: "zero denominator".into() });
            }
            Ok(Some(Rational::new(num, den)?))
        } else {
            Ok(Some(Rational::from_integer(num)))
        }
    }

    fn parse(mut self) -> Result<GaussianRational, ScalarError> {
        if self.bytes.is_empty() {
            return Err(self.err("empty literal"));
        }
        let negative = self.eat(b'-');
        let first = self.magnitude()?;
        let first = first.map(|r| if negative { -r } else { r });

        match (first, self.peek()) {
            (Some(re), None) => Ok(GaussianRational::from_rational(re)),
            (first, Some(b'i')) => {
                // Pure imaginary: `[-][q]i`.
                self.pos += 1;
                self.expect_end()?;
                let im = first.unwrap_or_else(|| if negative { -Rational::one() } else { Rational::one() });
                Ok(GaussianRational::new(Rational::zero(), im))
            }
            (Some(re), Some(sign @ (b'+' | b'-'))) => {
                self.pos += 1;
                let mag = self.magnitude()?.unwrap_or_else(Rational::one);
                if !self.eat(b'i') {
                    return Err(self.err("expected 'i' to close the imaginary part"));
                }
                self.expect_end()?;
                let im = if sign == b'-' { -mag } else { mag };
                Ok(GaussianRational::new(re, im))
            }
            (None, _) => Err(self.err("expected digits or 'i'")),
            (Some(_), Some(_)) => Err(self.err("unexpected character")),
        }
    }

    fn expect_end(&self) -> Result<(), ScalarError> {
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(self.err("trailing characters after literal"))
        }
    }
}
