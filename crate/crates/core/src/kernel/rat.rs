use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ring::{impl_ring_ops, Field, GcdDomain, Ring};

/// Arbitrary-precision rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rat {
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn from_big(r: BigRational) -> Rat {
        Rat(r)
    }

    pub fn integer(v: impl Into<BigInt>) -> Rat {
        Rat(BigRational::from_integer(v.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    /// The exact square root, if this is the square of a rational.
    pub fn sqrt(&self) -> Option<Rat> {
        if self.is_negative() {
            return None;
        }
        let root = |x: &BigInt| {
            let r = x.sqrt();
            (&r * &r == *x).then_some(r)
        };
        Some(Rat::new(root(self.numer())?, root(self.denom())?))
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn powi(&self, e: i32) -> Rat {
        if e >= 0 {
            self.pow_u(e as u32)
        } else {
            self.recip().pow_u((-e) as u32)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Content-style gcd: gcd of numerators over lcm of denominators, positive.
    pub fn content_gcd(&self, other: &Rat) -> Rat {
        if self.is_zero() {
            return other.abs();
        }
        if other.is_zero() {
            return self.abs();
        }
        let n = self.numer().gcd(other.numer());
        let d = self.denom().lcm(other.denom());
        Rat::new(n, d)
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Rat {
        Rat::integer(v)
    }
}

impl From<i32> for Rat {
    fn from(v: i32) -> Rat {
        Rat::integer(v)
    }
}

impl From<u32> for Rat {
    fn from(v: u32) -> Rat {
        Rat::integer(v)
    }
}

impl From<u64> for Rat {
    fn from(v: u64) -> Rat {
        Rat::integer(v)
    }
}

impl From<usize> for Rat {
    fn from(v: usize) -> Rat {
        Rat::integer(v as u64)
    }
}

impl From<BigInt> for Rat {
    fn from(v: BigInt) -> Rat {
        Rat::integer(v)
    }
}

impl Ring for Rat {
    /// Clears denominators once per operand and reduces once per coefficient.
    fn convolve(a: &[Rat], b: &[Rat], len: usize) -> Vec<Rat> {
        fn clear(v: &[Rat]) -> (Vec<BigInt>, BigInt) {
            let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            (v.iter().map(|x| x.numer() * (&l / x.denom())).collect(), l)
        }
        let (x, lx) = clear(a);
        let (y, ly) = clear(b);
        let den = lx * ly;
        let mut c = vec![BigInt::zero(); len];
        for (i, p) in x.iter().enumerate().take(len) {
            if p.is_zero() {
                continue;
            }
            for (j, q) in y.iter().enumerate().take(len - i) {
                if !q.is_zero() {
                    c[i + j] += p * q;
                }
            }
        }
        c.into_iter().map(|n| Rat::new(n, den.clone())).collect()
    }
    fn zero() -> Rat {
        Rat(BigRational::zero())
    }
    fn one() -> Rat {
        Rat(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn add_ref(&self, o: &Rat) -> Rat {
        Rat(&self.0 + &o.0)
    }
    fn sub_ref(&self, o: &Rat) -> Rat {
        Rat(&self.0 - &o.0)
    }
    fn mul_ref(&self, o: &Rat) -> Rat {
        Rat(&self.0 * &o.0)
    }
    fn neg_ref(&self) -> Rat {
        Rat(-&self.0)
    }
    fn from_rat(r: &Rat) -> Rat {
        r.clone()
    }
    fn inv_opt(&self) -> Option<Rat> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn scale_rat(&self, r: &Rat) -> Rat {
        self.mul_ref(r)
    }
}

impl Field for Rat {}

impl GcdDomain for Rat {
    fn div_exact(&self, d: &Rat) -> Option<Rat> {
        d.inv_opt().map(|i| self * &i)
    }
    fn gcd(&self, other: &Rat) -> Rat {
        self.content_gcd(other)
    }
    fn lead_rat(&self) -> Rat {
        self.clone()
    }
}

impl_ring_ops!([] Rat);

impl std::ops::Div<&Rat> for &Rat {
    type Output = Rat;
    fn div(self, o: &Rat) -> Rat {
        Rat(&self.0 / &o.0)
    }
}

impl std::ops::Div for Rat {
    type Output = Rat;
    fn div(self, o: Rat) -> Rat {
        Rat(self.0 / o.0)
    }
}

impl std::ops::AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, o: &Rat) {
        self.0 += &o.0;
    }
}

impl std::ops::SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, o: &Rat) {
        self.0 -= &o.0;
    }
}

impl std::ops::MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, o: &Rat) {
        self.0 *= &o.0;
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRatError(pub String);

impl FromStr for Rat {
    type Err = ParseRatError;
    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let s = s.trim();
        let err = || ParseRatError(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Rat::new(n, d))
            }
            None => s.parse::<BigInt>().map(Rat::integer).map_err(|_| err()),
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for `Rat::new(n, d)` with machine integers.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(r.to_string(), "-3/2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-7", "3/2", "-136/3"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn content_gcd() {
        assert_eq!(rat(2, 3).content_gcd(&rat(4, 9)), rat(2, 9));
        assert_eq!(Rat::zero().content_gcd(&rat(-5, 2)), rat(5, 2));
    }
}
