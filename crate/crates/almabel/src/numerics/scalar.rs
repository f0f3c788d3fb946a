use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use super::NumericsError;

/// Exact rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn new(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Scalar {
        Scalar(BigRational::from_integer(n))
    }

    pub fn from_ratio(num: BigInt, den: BigInt) -> Scalar {
        Scalar(BigRational::new(num, den))
    }

    pub fn zero() -> Scalar {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Scalar {
        Scalar(self.0.abs())
    }

    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn recip(&self) -> Scalar {
        assert!(!self.is_zero(), "reciprocal of zero");
        Scalar(self.0.recip())
    }

    pub fn pow(&self, e: i32) -> Scalar {
        if e < 0 {
            return self.recip().pow(-e);
        }
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // huge numerators or denominators: divide in floating point after scaling
            let n = self.0.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.0.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    /// Exact square root when `self` is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        if self.is_negative() {
            return None;
        }
        let n = self.0.numer().sqrt();
        let d = self.0.denom().sqrt();
        if &(&n * &n) == self.0.numer() && &(&d * &d) == self.0.denom() {
            Some(Scalar::from_ratio(n, d))
        } else {
            None
        }
    }

    /// Closest rational with denominator at most `max_den`, via continued fractions.
    pub fn approximate(x: f64, max_den: i64) -> Option<Scalar> {
        if !x.is_finite() {
            return None;
        }
        let (mut h0, mut h1) = (0i128, 1i128);
        let (mut k0, mut k1) = (1i128, 0i128);
        let mut r = x;
        for _ in 0..64 {
            let a = r.floor();
            if a.abs() > 1e15 {
                break;
            }
            let ai = a as i128;
            let h2 = ai * h1 + h0;
            let k2 = ai * k1 + k0;
            if k2 > max_den as i128 {
                break;
            }
            h0 = h1;
            h1 = h2;
            k0 = k1;
            k1 = k2;
            let frac = r - a;
            if frac.abs() < 1e-14 {
                break;
            }
            r = 1.0 / frac;
        }
        if k1 == 0 {
            return None;
        }
        Some(Scalar::from_ratio(BigInt::from(h1), BigInt::from(k1)))
    }

    pub fn lcm_denominator<'a>(items: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
        items
            .into_iter()
            .fold(BigInt::one(), |acc, s| acc.lcm(s.denom()))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<i32> for Scalar {
    fn from(n: i32) -> Self {
        Scalar::from_int(n as i64)
    }
}

impl FromStr for Scalar {
    type Err = NumericsError;

    /// Accepts `n`, `n/d` and finite decimals such as `-0.25`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || NumericsError::Parse(s.to_string());
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Scalar::from_ratio(n, d));
        }
        if let Some((ip, fp)) = t.split_once('.') {
            let neg = ip.trim_start().starts_with('-');
            let ip = ip.trim_start_matches(['-', '+']);
            let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
            let n: BigInt = digits.parse().map_err(|_| bad())?;
            let d = num::pow(BigInt::from(10), fp.len());
            let v = Scalar::from_ratio(n, d);
            return Ok(if neg { -v } else { v });
        }
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(Scalar::from_bigint(n))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn int_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Scalar", 2)?;
        st.serialize_field("num", &int_json(self.numer()))?;
        st.serialize_field("den", &int_json(self.denom()))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        scalar_from_json(&v).map_err(de::Error::custom)
    }
}

/// Reads `{"num":..,"den":..}`, an integer, or a string such as `"-1/2"`.
pub fn scalar_from_json(v: &serde_json::Value) -> Result<Scalar, NumericsError> {
    use serde_json::Value;
    let as_int = |x: &Value| -> Result<BigInt, NumericsError> {
        match x {
            Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap())),
            Value::String(s) => s.parse().map_err(|_| NumericsError::Parse(s.clone())),
            other => Err(NumericsError::Parse(other.to_string())),
        }
    };
    match v {
        Value::Object(m) => {
            let n = as_int(m.get("num").ok_or_else(|| NumericsError::Parse(v.to_string()))?)?;
            let d = match m.get("den") {
                Some(d) => as_int(d)?,
                None => BigInt::one(),
            };
            if d.is_zero() {
                return Err(NumericsError::Parse(v.to_string()));
            }
            Ok(Scalar::from_ratio(n, d))
        }
        Value::String(s) => s.parse(),
        Value::Number(n) if n.is_i64() => Ok(Scalar::from_int(n.as_i64().unwrap())),
        other => Err(NumericsError::Parse(other.to_string())),
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                Scalar(&self.0 $op &o.0)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                Scalar(self.0 $op o.0)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                Scalar(self.0 $op &o.0)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                Scalar(&self.0 $op o.0)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.0 += &o.0;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        self.0 += o.0;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.0 -= &o.0;
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, o: Scalar) {
        self.0 -= o.0;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        self.0 *= &o.0;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

/// Exact Gaussian rational `re + i im`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CScalar {
    pub re: Scalar,
    pub im: Scalar,
}

impl CScalar {
    pub fn new(re: Scalar, im: Scalar) -> CScalar {
        CScalar { re, im }
    }

    pub fn real(re: Scalar) -> CScalar {
        CScalar { re, im: Scalar::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> CScalar {
        CScalar::new(Scalar::from_int(re), Scalar::from_int(im))
    }

    pub fn i() -> CScalar {
        CScalar::from_ints(0, 1)
    }

    pub fn zero() -> CScalar {
        CScalar::default()
    }

    pub fn one() -> CScalar {
        CScalar::real(Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> CScalar {
        CScalar::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Scalar {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn recip(&self) -> CScalar {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "reciprocal of zero");
        CScalar::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn mul_i(&self) -> CScalar {
        CScalar::new(-&self.im, self.re.clone())
    }

    pub fn scale(&self, s: &Scalar) -> CScalar {
        CScalar::new(&self.re * s, &self.im * s)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl From<Scalar> for CScalar {
    fn from(s: Scalar) -> Self {
        CScalar::real(s)
    }
}

impl fmt::Display for CScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", self.re, -&self.im)
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

impl fmt::Debug for CScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for CScalar {
    type Output = CScalar;
    fn add(self, o: CScalar) -> CScalar {
        CScalar::new(self.re + o.re, self.im + o.im)
    }
}

impl<'a> Add<&'a CScalar> for &'a CScalar {
    type Output = CScalar;
    fn add(self, o: &CScalar) -> CScalar {
        CScalar::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for CScalar {
    type Output = CScalar;
    fn sub(self, o: CScalar) -> CScalar {
        CScalar::new(self.re - o.re, self.im - o.im)
    }
}

impl<'a> Sub<&'a CScalar> for &'a CScalar {
    type Output = CScalar;
    fn sub(self, o: &CScalar) -> CScalar {
        CScalar::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for CScalar {
    type Output = CScalar;
    fn mul(self, o: CScalar) -> CScalar {
        &self * &o
    }
}

impl<'a> Mul<&'a CScalar> for &'a CScalar {
    type Output = CScalar;
    fn mul(self, o: &CScalar) -> CScalar {
        CScalar::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div for CScalar {
    type Output = CScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: CScalar) -> CScalar {
        &self * &o.recip()
    }
}

impl Neg for CScalar {
    type Output = CScalar;
    fn neg(self) -> CScalar {
        CScalar::new(-self.re, -self.im)
    }
}

impl Neg for &CScalar {
    type Output = CScalar;
    fn neg(self) -> CScalar {
        CScalar::new(-&self.re, -&self.im)
    }
}

impl AddAssign<&CScalar> for CScalar {
    fn add_assign(&mut self, o: &CScalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl Sum for CScalar {
    fn sum<I: Iterator<Item = CScalar>>(iter: I) -> CScalar {
        iter.fold(CScalar::zero(), |a, b| a + b)
    }
}

/// Exact field used by the generic matrix code.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_scalar(s: &Scalar) -> Self;
    /// Least common multiple of all denominators in the value.
    fn denom_lcm(&self) -> BigInt;
    fn mul_int(&self, k: &BigInt) -> Self;
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn denom_lcm(&self) -> BigInt {
        self.denom().clone()
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        Scalar(&self.0 * BigRational::from_integer(k.clone()))
    }
}

impl Field for CScalar {
    fn zero() -> Self {
        CScalar::zero()
    }
    fn one() -> Self {
        CScalar::one()
    }
    fn is_zero(&self) -> bool {
        CScalar::is_zero(self)
    }
    fn from_scalar(s: &Scalar) -> Self {
        CScalar::real(s.clone())
    }
    fn denom_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        CScalar::new(self.re.mul_int(k), self.im.mul_int(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let a: Scalar = "-1/2".parse().unwrap();
        assert_eq!(a, Scalar::new(-1, 2));
        assert_eq!(a.to_string(), "-1/2");
        assert_eq!("0.25".parse::<Scalar>().unwrap(), Scalar::new(1, 4));
        assert_eq!("-0.5".parse::<Scalar>().unwrap(), Scalar::new(-1, 2));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }

    #[test]
    fn json_roundtrip() {
        let a = Scalar::new(3, -4);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"num":-3,"den":4}"#);
        let b: Scalar = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        let c: Scalar = serde_json::from_str("\"5/10\"").unwrap();
        assert_eq!(c, Scalar::new(1, 2));
    }

    #[test]
    fn sqrt_and_approx() {
        assert_eq!(Scalar::new(9, 16).sqrt_exact(), Some(Scalar::new(3, 4)));
        assert_eq!(Scalar::new(3, 4).sqrt_exact(), None);
        assert_eq!(Scalar::approximate(-0.3333333333333, 100), Some(Scalar::new(-1, 3)));
        assert_eq!(Scalar::approximate(2.5, 10), Some(Scalar::new(5, 2)));
    }

    #[test]
    fn complex_arithmetic() {
        let z = CScalar::from_ints(1, 2);
        let w = CScalar::from_ints(3, -1);
        assert_eq!(&z * &w, CScalar::from_ints(5, 5));
        assert_eq!((z.clone() / w.clone()) * w, z);
        assert_eq!(CScalar::i() * CScalar::i(), CScalar::from_ints(-1, 0));
        assert_eq!(z.to_string(), "1+2i");
    }
}
