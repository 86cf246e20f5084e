//! Exact arithmetic in the ordered fields Q, Q(sqrt 2) and Q(sqrt 3).
//!
//! Every inequality the crate decides is evaluated with [`QuadExt`]; floats
//! only show up in [`QuadExt::to_f64`], which exists for diagnostics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `"num/den"`; the denominator is always printed.
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational literal {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

/// The value `a + b * sqrt(d)` with `d` in `{1, 2, 3}`.
///
/// Values with `b = 0` are stored with `d = 1`, so a rational combines with
/// any quadratic value. Combining `sqrt 2` and `sqrt 3` values is an error
/// through the `checked_*` methods and a panic through the operators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: u8,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: u8) -> Result<Self> {
        if !matches!(d, 1..=3) {
            return Err(Error::Radicand(d));
        }
        if d == 1 {
            // sqrt(1) = 1 folds into the rational part.
            return Ok(Self::rational(a + b));
        }
        Ok(Self::normalized(a, b, d))
    }

    fn normalized(a: Rational, b: Rational, d: u8) -> Self {
        if b.is_zero() {
            QuadExt { a, b, d: 1 }
        } else {
            QuadExt { a, b, d }
        }
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt { a, b: Rational::zero(), d: 1 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `sqrt(d)` for `d` in `{1, 2, 3}`.
    pub fn sqrt(d: u8) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.d == 1
    }

    fn joint_d(&self, other: &Self) -> Result<u8> {
        match (self.d, other.d) {
            (1, d) | (d, 1) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(Error::IncompatibleRadicands(x, y)),
        }
    }

    pub fn compatible(&self, other: &Self) -> bool {
        self.joint_d(other).is_ok()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.joint_d(other)?;
        Ok(Self::normalized(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let d = self.joint_d(other)?;
        Ok(Self::normalized(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.joint_d(other)?;
        let dd = Rational::from_integer(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::normalized(a, b, d))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // (a - b sqrt d) / (a^2 - b^2 d); the norm is nonzero because sqrt d is
        // irrational for d in {2, 3}.
        let dd = Rational::from_integer(BigInt::from(self.d));
        let norm = &self.a * &self.a - &self.b * &self.b * dd;
        Ok(Self::normalized(&self.a / &norm, -&self.b / &norm, self.d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.joint_d(other)?;
        self.checked_mul(&other.recip()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::normalized(&self.a * r, &self.b * r, self.d)
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact sign of the real number `a + b sqrt(d)`.
    pub fn signum(&self) -> i32 {
        quad_sign(self)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// Diagnostic only; never used to decide anything.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * f64::from(self.d).sqrt()
    }
}

fn sign_of(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `a + b sqrt(d)` by comparing `a^2` against `b^2 d` when the two
/// parts have opposite signs.
pub fn quad_sign(x: &QuadExt) -> i32 {
    let sa = sign_of(&x.a);
    let sb = sign_of(&x.b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    let dd = Rational::from_integer(BigInt::from(x.d));
    let a2 = &x.a * &x.a;
    let b2d = &x.b * &x.b * dd;
    match a2.cmp(&b2d) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        // a^2 = b^2 d has no nonzero rational solution for d in {2, 3}.
        Ordering::Equal => unreachable!("a^2 = b^2 d with d non-square"),
    }
}

pub fn quad_cmp(x: &QuadExt, y: &QuadExt) -> Result<Ordering> {
    let diff = x.checked_sub(y)?;
    Ok(diff.signum().cmp(&0))
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        quad_cmp(self, other).ok()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                self.$checked(rhs).expect(concat!("QuadExt::", stringify!($method)))
            }
        }
        impl $tr<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                (&self).$method(rhs)
            }
        }
        impl $tr<QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -self.clone()
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::from_int(n)
    }
}

impl From<Rational> for QuadExt {
    fn from(r: Rational) -> Self {
        QuadExt::rational(r)
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let root = format!("sqrt{}", self.d);
        let coeff = if self.b.is_one() {
            root
        } else if (-&self.b).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", fmt_rational(&self.b))
        };
        if self.a.is_zero() {
            write!(f, "{coeff}")
        } else if coeff.starts_with('-') {
            write!(f, "{}{coeff}", fmt_rational(&self.a))
        } else {
            write!(f, "{}+{coeff}", fmt_rational(&self.a))
        }
    }
}

/// Parses literals such as `2`, `3/2`, `sqrt2`, `2*sqrt2`, `1/2*sqrt3` and
/// `1+sqrt2`.
impl FromStr for QuadExt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty number literal".into()));
        }
        let Some(pos) = s.find("sqrt") else {
            return Ok(QuadExt::rational(parse_rational(&s)?));
        };
        let d: u8 = s[pos + 4..]
            .parse()
            .map_err(|_| Error::Parse(format!("bad radicand in {s:?}")))?;
        let head = &s[..pos];
        // Split `head` into an optional rational part and the coefficient of
        // the root, e.g. "1+2*" or "-".
        let head = head.strip_suffix('*').unwrap_or(head);
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(i, c)| (c == '+' || c == '-') && !head[..i].ends_with('/'))
            .map(|(i, _)| i)
            .last();
        let (a_str, b_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("", head),
        };
        let a = if a_str.is_empty() { Rational::zero() } else { parse_rational(a_str)? };
        let b = match b_str {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        QuadExt::new(a, b, d)
    }
}

#[derive(Serialize, Deserialize)]
struct QuadExtRepr {
    a: String,
    b: String,
    d: u8,
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QuadExtRepr {
            a: rational_to_string(&self.a),
            b: rational_to_string(&self.b),
            d: self.d,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = QuadExtRepr::deserialize(deserializer)?;
        let a = parse_rational(&repr.a).map_err(serde::de::Error::custom)?;
        let b = parse_rational(&repr.b).map_err(serde::de::Error::custom)?;
        if repr.d == 1 && !b.is_zero() {
            return Err(serde::de::Error::custom("d = 1 requires b = 0"));
        }
        QuadExt::new(a, b, repr.d).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64, d: u8) -> QuadExt {
        QuadExt::new(int(a), int(b), d).unwrap()
    }

    /// Sign of a + b sqrt(d) by integer cross-multiplication, independent of
    /// the field code.
    fn sign_oracle(a: i64, b: i64, d: i64) -> i32 {
        let (a, b) = (a as i128, b as i128);
        let s = |x: i128| x.signum() as i32;
        if b == 0 {
            return s(a);
        }
        if a == 0 || s(a) == s(b) {
            return s(b);
        }
        if a * a > b * b * d as i128 {
            s(a)
        } else {
            s(b)
        }
    }

    #[test]
    fn sign_examples() {
        assert_eq!(quad_sign(&q(0, 0, 1)), 0);
        assert_eq!(sign_oracle(3, -2, 2), 1);
        assert_eq!(quad_sign(&q(3, -2, 2)), 1);
        assert_eq!(sign_oracle(-4, 3, 2), 1);
        assert_eq!(quad_sign(&q(-4, 3, 2)), 1);
        assert_eq!(quad_sign(&q(-5, 3, 3)), 1);
        assert_eq!(quad_sign(&q(-6, 3, 3)), -1);
    }

    #[test]
    fn cmp_examples() {
        let s2 = QuadExt::sqrt(2).unwrap();
        assert_eq!(quad_cmp(&s2, &QuadExt::one()).unwrap(), Ordering::Greater);
        assert_eq!(quad_cmp(&q(1, 1, 2), &q(2, 0, 2)).unwrap(), Ordering::Greater);
        assert_eq!(quad_cmp(&s2, &s2).unwrap(), Ordering::Equal);
        let s3 = QuadExt::sqrt(3).unwrap();
        assert!(matches!(quad_cmp(&s2, &s3), Err(Error::IncompatibleRadicands(2, 3))));
    }

    #[test]
    fn normalizes_rationals() {
        let x = q(5, 0, 3);
        assert_eq!(x.d(), 1);
        let s2 = QuadExt::sqrt(2).unwrap();
        assert_eq!((&s2 * &s2), QuadExt::from_int(2));
        assert_eq!((&s2 * &s2).d(), 1);
        assert!(QuadExt::new(int(1), int(1), 5).is_err());
        assert_eq!(QuadExt::new(int(1), int(1), 1).unwrap(), QuadExt::from_int(2));
    }

    #[test]
    fn division_by_zero() {
        assert!(matches!(QuadExt::zero().recip(), Err(Error::DivisionByZero)));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn parse_and_display() {
        for (s, v) in [
            ("2", q(2, 0, 1)),
            ("sqrt2", q(0, 1, 2)),
            ("2*sqrt2", q(0, 2, 2)),
            ("-sqrt3", q(0, -1, 3)),
            ("1+sqrt2", q(1, 1, 2)),
            ("1-2*sqrt3", q(1, -2, 3)),
        ] {
            let parsed: QuadExt = s.parse().unwrap();
            assert_eq!(parsed, v, "{s}");
            assert_eq!(parsed.to_string().parse::<QuadExt>().unwrap(), v);
        }
        let half: QuadExt = "3/2".parse().unwrap();
        assert_eq!(half, QuadExt::rational(rat(3, 2)));
        let x: QuadExt = "1/2*sqrt3".parse().unwrap();
        assert_eq!(x, QuadExt::new(Rational::zero(), rat(1, 2), 3).unwrap());
        assert!("sqrt5".parse::<QuadExt>().is_err());
        assert!("abc".parse::<QuadExt>().is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let x = QuadExt::new(rat(-7, 3), rat(22, 5), 2).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"-7/3","b":"22/5","d":2}"#);
        let back: QuadExt = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<QuadExt>(r#"{"a":"1/1","b":"1/1","d":1}"#).is_err());
    }

    fn arb_quad(d: u8) -> impl Strategy<Value = QuadExt> {
        (-60i64..60, 1i64..12, -60i64..60, 1i64..12)
            .prop_map(move |(an, ad, bn, bd)| QuadExt::new(rat(an, ad), rat(bn, bd), d).unwrap())
    }

    fn arb_pair() -> impl Strategy<Value = (QuadExt, QuadExt, QuadExt)> {
        (1u8..=3).prop_flat_map(|d| (arb_quad(d), arb_quad(d), arb_quad(d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn field_axioms((x, y, z) in arb_pair()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.recip().unwrap(), QuadExt::one());
            }
        }

        #[test]
        fn sign_is_multiplicative((x, y, _z) in arb_pair()) {
            prop_assert_eq!((&x * &y).signum(), x.signum() * y.signum());
        }

        #[test]
        fn order_compatible_with_field((x, y, z) in arb_pair()) {
            let xy = quad_cmp(&x, &y).unwrap();
            prop_assert_eq!(quad_cmp(&(&x + &z), &(&y + &z)).unwrap(), xy);
            if z.is_positive() {
                prop_assert_eq!(quad_cmp(&(&x * &z), &(&y * &z)).unwrap(), xy);
            }
            prop_assert_eq!(quad_cmp(&y, &x).unwrap(), xy.reverse());
        }

        #[test]
        fn sign_matches_integer_oracle(a in -10_000i64..10_000, b in -10_000i64..10_000, d in 2i64..=3) {
            prop_assert_eq!(quad_sign(&q(a, b, d as u8)), sign_oracle(a, b, d));
        }

        #[test]
        fn sign_matches_float_sanity(x in (1u8..=3).prop_flat_map(arb_quad)) {
            let f = x.to_f64();
            if f.abs() > 1e-9 {
                prop_assert_eq!(x.signum(), if f > 0.0 { 1 } else { -1 });
            }
        }
    }
}
