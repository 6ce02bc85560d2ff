//! Arbitrary-precision integers with an inline machine-word fast path.
//!
//! `Int::S` is used whenever the value fits in an `i64`; every operation
//! re-normalizes, so two equal values always share the same variant.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub enum Int {
    S(i64),
    B(BigInt),
}

impl Int {
    pub const ZERO: Int = Int::S(0);
    pub const ONE: Int = Int::S(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::S(v),
            None => Int::B(b),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::S(v) => BigInt::from(*v),
            Int::B(b) => b.clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::S(v) => Some(*v),
            Int::B(_) => None,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self, Int::S(0))
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        matches!(self, Int::S(1))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::S(v) => v.signum() as i32,
            Int::B(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Int {
        match self {
            Int::S(v) => match v.checked_abs() {
                Some(a) => Int::S(a),
                None => Int::from_big(BigInt::from(*v).abs()),
            },
            Int::B(b) => Int::from_big(b.abs()),
        }
    }

    /// Floor division; panics on a zero divisor.
    pub fn div_floor(&self, d: &Int) -> Int {
        if let (Int::S(a), Int::S(b)) = (self, d) {
            if !(*a == i64::MIN && *b == -1) {
                return Int::S(Integer::div_floor(a, b));
            }
        }
        Int::from_big(Integer::div_floor(&self.to_big(), &d.to_big()))
    }

    /// Remainder with the sign of the divisor (so in `[0, d)` for `d > 0`).
    pub fn mod_floor(&self, d: &Int) -> Int {
        if let (Int::S(a), Int::S(b)) = (self, d) {
            if !(*a == i64::MIN && *b == -1) {
                return Int::S(Integer::mod_floor(a, b));
            }
        }
        Int::from_big(Integer::mod_floor(&self.to_big(), &d.to_big()))
    }

    /// Quotient rounded to the nearest integer (ties toward floor); used to
    /// keep remainders small during elimination.
    pub fn div_round(&self, d: &Int) -> Int {
        let q = self.div_floor(d);
        let r = self - &(&q * d);
        let twice = &r + &r;
        // r has the sign of d; stepping q up moves r to the other side of zero.
        if twice.abs() > d.abs() {
            q + Int::ONE
        } else {
            q
        }
    }

    pub fn divides(&self, other: &Int) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.mod_floor(&self.abs()).is_zero()
    }

    /// Exact division; the caller guarantees divisibility.
    pub fn div_exact(&self, d: &Int) -> Int {
        debug_assert!(d.divides(self));
        self.div_floor(d)
    }

    pub fn gcd(&self, other: &Int) -> Int {
        if let (Int::S(a), Int::S(b)) = (self, other) {
            if *a != i64::MIN && *b != i64::MIN {
                return Int::S(a.gcd(b));
            }
        }
        Int::from_big(self.to_big().gcd(&other.to_big()))
    }

    pub fn lcm(&self, other: &Int) -> Int {
        if self.is_zero() || other.is_zero() {
            return Int::ZERO;
        }
        (self * other).abs().div_exact(&self.gcd(other))
    }

    /// Returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `a x + b y = g`.
    /// When `b` divides `a` the coefficients are `(0, sign(b))`, which keeps
    /// elimination steps minimal.
    pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
        if a.is_zero() && b.is_zero() {
            return (Int::ZERO, Int::ZERO, Int::ZERO);
        }
        if !b.is_zero() && b.divides(a) {
            return (b.abs(), Int::ZERO, Int::from(b.signum() as i64));
        }
        if !a.is_zero() && a.divides(b) {
            return (a.abs(), Int::from(a.signum() as i64), Int::ZERO);
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Int::ONE, Int::ZERO);
        let (mut t0, mut t1) = (Int::ZERO, Int::ONE);
        while !r1.is_zero() {
            let q = r0.div_floor(&r1);
            let r2 = &r0 - &(&q * &r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r2;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_negative() {
            (-r0, -s0, -t0)
        } else {
            (r0, s0, t0)
        }
    }

    /// Inverse modulo `m` when `gcd(self, m) = 1`.
    pub fn mod_inverse(&self, m: &Int) -> Option<Int> {
        let (g, x, _) = Int::ext_gcd(&self.mod_floor(m), m);
        if g.is_one() {
            Some(x.mod_floor(m))
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self * b` added into `self`; the hot path of elimination.
    #[inline]
    pub fn add_mul(&mut self, a: &Int, b: &Int) {
        if let (Int::S(s), Int::S(x), Int::S(y)) = (&*self, a, b) {
            if let Some(p) = x.checked_mul(*y) {
                if let Some(r) = s.checked_add(p) {
                    *self = Int::S(r);
                    return;
                }
            }
        }
        *self = &*self + &(a * b);
    }

    #[inline]
    pub fn sub_mul(&mut self, a: &Int, b: &Int) {
        if let (Int::S(s), Int::S(x), Int::S(y)) = (&*self, a, b) {
            if let Some(p) = x.checked_mul(*y) {
                if let Some(r) = s.checked_sub(p) {
                    *self = Int::S(r);
                    return;
                }
            }
        }
        *self = &*self - &(a * b);
    }
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::S(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::S(v as i64)
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Self {
        match i64::try_from(v) {
            Ok(x) => Int::S(x),
            Err(_) => Int::B(BigInt::from(v)),
        }
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_big(b)
    }
}

impl PartialEq for Int {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Int::S(a), Int::S(b)) => a == b,
            (Int::B(a), Int::B(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Int {}

impl core::hash::Hash for Int {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        match self {
            Int::S(v) => {
                0u8.hash(state);
                v.hash(state)
            }
            Int::B(b) => {
                1u8.hash(state);
                b.hash(state)
            }
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::S(a), Int::S(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident, $big:tt) => {
        impl<'a> $tr<&'a Int> for &'a Int {
            type Output = Int;
            #[inline]
            fn $m(self, rhs: &'a Int) -> Int {
                if let (Int::S(a), Int::S(b)) = (self, rhs) {
                    if let Some(r) = a.$checked(*b) {
                        return Int::S(r);
                    }
                }
                Int::from_big(self.to_big() $big rhs.to_big())
            }
        }
        impl $tr<Int> for Int {
            type Output = Int;
            #[inline]
            fn $m(self, rhs: Int) -> Int {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Int> for Int {
            type Output = Int;
            #[inline]
            fn $m(self, rhs: &'a Int) -> Int {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add, +);
binop!(Sub, sub, checked_sub, -);
binop!(Mul, mul, checked_mul, *);

impl AddAssign<&Int> for Int {
    fn add_assign(&mut self, rhs: &Int) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Int> for Int {
    fn sub_assign(&mut self, rhs: &Int) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Int> for Int {
    fn mul_assign(&mut self, rhs: &Int) {
        *self = &*self * rhs;
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::S(v) => match v.checked_neg() {
                Some(n) => Int::S(n),
                None => Int::from_big(-BigInt::from(v)),
            },
            Int::B(b) => Int::from_big(-b),
        }
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        -(self.clone())
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Self {
        Int::ONE
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::S(v) => write!(f, "{}", v),
            Int::B(b) => write!(f, "{}", b),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseIntError(pub String);

impl fmt::Display for ParseIntError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a decimal integer: {:?}", self.0)
    }
}

impl FromStr for Int {
    type Err = ParseIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Ok(v) = t.parse::<i64>() {
            return Ok(Int::S(v));
        }
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(ParseIntError(String::from(s)));
        }
        BigInt::from_str(t)
            .map(Int::from_big)
            .map_err(|_| ParseIntError(String::from(s)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn promotes_on_overflow_and_demotes_back() {
        let big = Int::from(i64::MAX) + Int::ONE;
        assert!(matches!(big, Int::B(_)));
        let back = big - Int::ONE;
        assert!(matches!(back, Int::S(_)));
        assert_eq!(back, Int::from(i64::MAX));
    }

    #[test]
    fn floor_semantics() {
        let a = Int::from(-7);
        let b = Int::from(3);
        assert_eq!(a.div_floor(&b), Int::from(-3));
        assert_eq!(a.mod_floor(&b), Int::from(2));
    }

    #[test]
    fn ext_gcd_bezout() {
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                let (g, x, y) = Int::ext_gcd(&Int::from(a), &Int::from(b));
                assert_eq!(g, Int::from(a).gcd(&Int::from(b)));
                assert_eq!(Int::from(a) * x + Int::from(b) * y, g);
            }
        }
    }

    #[test]
    fn rounded_quotient_halves_remainder() {
        for a in -20i64..=20 {
            for d in [-7i64, -4, -1, 1, 3, 6] {
                let (a, d) = (Int::from(a), Int::from(d));
                let r = &a - &(a.div_round(&d) * d.clone());
                assert!(&(&r + &r).abs() <= &d.abs(), "{:?} {:?}", a, d);
            }
        }
    }

    #[test]
    fn parse_roundtrip() {
        let s = "-123456789012345678901234567890";
        let v: Int = s.parse().unwrap();
        assert_eq!(alloc::format!("{}", v), s);
        assert!("12a".parse::<Int>().is_err());
        assert!("".parse::<Int>().is_err());
    }
}
