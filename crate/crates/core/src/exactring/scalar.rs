use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact real number `(p + q√2) / (2^a · 3^b)`.
///
/// Values are always stored canonically: when `a > 0`, `p` and `q` are not
/// both even, and when `b > 0` they are not both divisible by 3. Zero is
/// `0/1`. Because √2 is irrational, two values are equal iff their canonical
/// fields are identical, so the derived `Eq` and `Hash` are value equality.
///
/// The derived `Ord` is a structural total order on canonical forms, used
/// for deterministic collections. Use [`RingScalar::cmp_value`] to compare
/// magnitudes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingScalar {
    p: BigInt,
    q: BigInt,
    a: u32,
    b: u32,
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

fn pow3(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(3u8), e as usize)
}

fn twos(n: &BigInt) -> u64 {
    n.trailing_zeros().unwrap_or(u64::MAX)
}

impl RingScalar {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, a: u32, b: u32) -> Self {
        Self::canonical(p.into(), q.into(), a, b)
    }

    fn canonical(mut p: BigInt, mut q: BigInt, mut a: u32, mut b: u32) -> Self {
        if p.is_zero() && q.is_zero() {
            return Self::zero();
        }
        if a > 0 {
            let shift = twos(&p).min(twos(&q)).min(a as u64);
            if shift > 0 {
                p >>= shift as usize;
                q >>= shift as usize;
                a -= shift as u32;
            }
        }
        let three = BigInt::from(3u8);
        while b > 0 {
            let (pd, pr) = p.div_rem(&three);
            if !pr.is_zero() {
                break;
            }
            let (qd, qr) = q.div_rem(&three);
            if !qr.is_zero() {
                break;
            }
            p = pd;
            q = qd;
            b -= 1;
        }
        RingScalar { p, q, a, b }
    }

    pub fn zero() -> Self {
        RingScalar {
            p: BigInt::zero(),
            q: BigInt::zero(),
            a: 0,
            b: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn sqrt2() -> Self {
        Self::new(0, 1, 0, 0)
    }

    pub fn half() -> Self {
        Self::new(1, 0, 1, 0)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n, 0, 0, 0)
    }

    /// `num / den` as a rational ring element. Fails unless `den` is
    /// `±2^a·3^b`.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Denominator("0".into()));
        }
        let (mut num, mut d) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let g = num.gcd(&d);
        if !g.is_one() && !g.is_zero() {
            num /= &g;
            d /= &g;
        }
        let a = twos(&d);
        d >>= a as usize;
        let three = BigInt::from(3u8);
        let mut b = 0u32;
        while (&d % &three).is_zero() {
            d /= &three;
            b += 1;
        }
        if !d.is_one() {
            return Err(Error::Denominator(d.to_string()));
        }
        Ok(Self::new(num, 0, a as u32, b))
    }

    /// The canonical fields `(p, q, a, b)`.
    pub fn parts(&self) -> (&BigInt, &BigInt, u32, u32) {
        (&self.p, &self.q, self.a, self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.p.is_one() && self.q.is_zero() && self.a == 0 && self.b == 0
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// `2^a·3^b`.
    pub fn denominator(&self) -> BigInt {
        pow2(self.a) * pow3(self.b)
    }

    /// Sign of the real value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        // the denominator is positive, so only p + q√2 matters
        match (self.p.sign(), self.q.sign()) {
            (Sign::NoSign, Sign::NoSign) => 0,
            (s, Sign::NoSign) | (Sign::NoSign, s) => sign_i32(s),
            (sp, sq) if sp == sq => sign_i32(sp),
            (sp, _) => {
                // opposite signs: compare p² with 2q²
                let p2 = &self.p * &self.p;
                let q2 = &self.q * &self.q * 2;
                match p2.cmp(&q2) {
                    Ordering::Greater => sign_i32(sp),
                    Ordering::Less => -sign_i32(sp),
                    Ordering::Equal => unreachable!("√2 is irrational"),
                }
            }
        }
    }

    /// Numeric comparison.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(17).parse().unwrap_or(f64::NAN)
    }

    /// Correctly rounded (half-up) decimal expansion with `digits`
    /// fractional digits, computed with integer arithmetic only.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = num_traits::pow(BigInt::from(10u8), digits as usize);
        let den = self.denominator();
        // round(v·10^d) = floor((2·p·10^d + D + 2·q·10^d·√2) / (2D))
        let base = BigInt::from(2) * &self.p * &scale + &den;
        let m = self.q.abs() * &scale;
        let y_floor = if m.is_zero() {
            base
        } else {
            // √(8m²) is irrational for m ≠ 0, so its floor is isqrt and the
            // floor of its negation is -isqrt - 1
            let r = (&m * &m * 8u8).sqrt();
            if self.q.is_positive() {
                base + r
            } else {
                base - r - 1
            }
        };
        let rounded = y_floor.div_floor(&(den * 2));
        format_fixed(&rounded, digits)
    }
}

fn sign_i32(s: Sign) -> i32 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn format_fixed(n: &BigInt, digits: u32) -> String {
    let neg = n.is_negative();
    let mut s = n.abs().to_string();
    let d = digits as usize;
    if d == 0 {
        return if neg { format!("-{s}") } else { s };
    }
    if s.len() <= d {
        s = format!("{}{}", "0".repeat(d + 1 - s.len()), s);
    }
    let (int, frac) = s.split_at(s.len() - d);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

impl Default for RingScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a RingScalar> for &'a RingScalar {
    type Output = RingScalar;
    fn add(self, rhs: &RingScalar) -> RingScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let a = self.a.max(rhs.a);
        let b = self.b.max(rhs.b);
        let s1 = pow2(a - self.a) * pow3(b - self.b);
        let s2 = pow2(a - rhs.a) * pow3(b - rhs.b);
        RingScalar::canonical(&self.p * &s1 + &rhs.p * &s2, &self.q * &s1 + &rhs.q * &s2, a, b)
    }
}

impl<'a> Sub<&'a RingScalar> for &'a RingScalar {
    type Output = RingScalar;
    fn sub(self, rhs: &RingScalar) -> RingScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RingScalar> for &'a RingScalar {
    type Output = RingScalar;
    fn mul(self, rhs: &RingScalar) -> RingScalar {
        if self.is_zero() || rhs.is_zero() {
            return RingScalar::zero();
        }
        let p = &self.p * &rhs.p + (&self.q * &rhs.q) * 2;
        let q = &self.p * &rhs.q + &self.q * &rhs.p;
        RingScalar::canonical(p, q, self.a + rhs.a, self.b + rhs.b)
    }
}

impl Neg for &RingScalar {
    type Output = RingScalar;
    fn neg(self) -> RingScalar {
        RingScalar {
            p: -&self.p,
            q: -&self.q,
            a: self.a,
            b: self.b,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RingScalar> for RingScalar {
            type Output = RingScalar;
            fn $m(self, rhs: RingScalar) -> RingScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RingScalar> for RingScalar {
            type Output = RingScalar;
            fn $m(self, rhs: &RingScalar) -> RingScalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RingScalar {
    type Output = RingScalar;
    fn neg(self) -> RingScalar {
        -&self
    }
}

impl From<i64> for RingScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for RingScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = match (self.p.is_zero(), self.q.is_zero()) {
            (_, true) => self.p.to_string(),
            (true, false) => format!("{}√2", self.q),
            (false, false) if self.q.is_negative() => format!("{}-{}√2", self.p, -&self.q),
            (false, false) => format!("{}+{}√2", self.p, self.q),
        };
        if self.a == 0 && self.b == 0 {
            f.write_str(&num)
        } else if self.p.is_zero() || self.q.is_zero() {
            write!(f, "{}/{}", num, self.denominator())
        } else {
            write!(f, "({})/{}", num, self.denominator())
        }
    }
}

impl fmt::Debug for RingScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized as `["p", "q", "a", "b"]`, all decimal strings.
impl Serialize for RingScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.p.to_string(), self.q.to_string(), self.a.to_string(), self.b.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [p, q, a, b] = <[String; 4]>::deserialize(d)?;
        let p: BigInt = p.parse().map_err(D::Error::custom)?;
        let q: BigInt = q.parse().map_err(D::Error::custom)?;
        let a: u32 = a.parse().map_err(D::Error::custom)?;
        let b: u32 = b.parse().map_err(D::Error::custom)?;
        Ok(RingScalar::new(p, q, a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(p: i64, q: i64, a: u32, b: u32) -> RingScalar {
        RingScalar::new(p, q, a, b)
    }

    #[test]
    fn identity_times_sqrt2() {
        assert_eq!(&rs(1, 0, 0, 0) * &rs(0, 1, 0, 0), rs(0, 1, 0, 0));
    }

    #[test]
    fn sqrt2_squared_is_two() {
        let two = &RingScalar::sqrt2() * &RingScalar::sqrt2();
        let (p, q, a, b) = two.parts();
        assert_eq!((p.clone(), q.clone(), a, b), (BigInt::from(2), BigInt::zero(), 0, 0));
    }

    #[test]
    fn common_factor_three_cancels() {
        let s = rs(3, 3, 0, 1);
        let (p, q, a, b) = s.parts();
        assert_eq!((p.clone(), q.clone(), a, b), (BigInt::from(1), BigInt::from(1), 0, 0));
    }

    #[test]
    fn zero_has_unit_denominator() {
        assert_eq!(rs(0, 0, 5, 7).parts().2, 0);
        assert_eq!(&rs(1, 1, 1, 0) - &rs(1, 1, 1, 0), RingScalar::zero());
    }

    #[test]
    fn rejects_foreign_denominators() {
        assert!(RingScalar::from_ratio(1, 5).is_err());
        assert!(RingScalar::from_ratio(1, 0).is_err());
        assert_eq!(RingScalar::from_ratio(4, -12).unwrap(), -rs(1, 0, 0, 1));
        assert_eq!(RingScalar::from_ratio(10, 12).unwrap(), rs(5, 0, 1, 1));
    }

    #[test]
    fn sign_of_mixed_terms() {
        assert_eq!(rs(3, -2, 0, 0).signum(), 1); // 3 - 2.83
        assert_eq!(rs(2, -2, 0, 0).signum(), -1);
        assert_eq!(rs(-3, 2, 0, 0).signum(), -1);
        assert_eq!(rs(-1, 1, 0, 0).signum(), 1);
        assert_eq!(RingScalar::zero().signum(), 0);
    }

    #[test]
    fn decimal_expansion() {
        assert_eq!(RingScalar::sqrt2().to_decimal(12), "1.414213562373");
        assert_eq!((-RingScalar::sqrt2()).to_decimal(12), "-1.414213562373");
        assert_eq!(rs(1, 0, 0, 1).to_decimal(5), "0.33333");
        assert_eq!(rs(2, 0, 0, 1).to_decimal(5), "0.66667");
        assert_eq!(rs(-1, 0, 1, 0).to_decimal(0), "0");
        assert_eq!(rs(0, 2, 0, 1).to_decimal(12), "0.942809041582");
        assert_eq!(rs(0, -2, 0, 1).to_decimal(3), "-0.943");
    }

    #[test]
    fn json_tuple_roundtrip() {
        let s = rs(-7, 12, 3, 2);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"["-7","12","3","2"]"#);
        let back: RingScalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        // non-canonical input is canonicalized on the way in
        let c: RingScalar = serde_json::from_str(r#"["6","6","1","1"]"#).unwrap();
        assert_eq!(c, rs(1, 1, 0, 0));
    }
}
