//! Algebraic traits shared by every coefficient type in the crate.
//!
//! All rings here are commutative `Q`-algebras, which lets every type accept
//! rational constants through [`Ring::from_rat`].

use std::fmt::Debug;

use super::poly::Poly;
use super::rat::Rat;

/// A commutative `Q`-algebra with exact arithmetic.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_rat(r: &Rat) -> Self;

    /// Multiplicative inverse when `self` is a unit.
    fn inv_opt(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(v: i64) -> Self {
        Self::from_rat(&Rat::from(v))
    }

    fn scale_rat(&self, r: &Rat) -> Self {
        self.mul_ref(&Self::from_rat(r))
    }

    /// The first `len` coefficients of the product of two coefficient vectors.
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        let mut c = vec![Self::zero(); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                if !y.is_zero() {
                    c[i + j] = c[i + j].add_ref(&x.mul_ref(y));
                }
            }
        }
        c
    }

    fn pow_u(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Self {
        self.inv_opt().expect("inverse of zero")
    }

    fn div_ref(&self, other: &Self) -> Self {
        self.mul_ref(&other.inv())
    }
}

/// A polynomial-type domain over `Q` with exact division and gcd.
///
/// Units are exactly the nonzero rationals, so an associate class is pinned
/// by dividing out [`GcdDomain::lead_rat`].
pub trait GcdDomain: Ring {
    /// `Some(self / d)` when `d` divides `self` exactly.
    fn div_exact(&self, d: &Self) -> Option<Self>;

    /// A greatest common divisor; `gcd(0, 0) = 0`.
    fn gcd(&self, other: &Self) -> Self;

    /// Rational coefficient of the leading term in a fixed monomial order.
    fn lead_rat(&self) -> Rat;

    fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale_rat(&self.lead_rat().recip())
    }

    /// A faster gcd of univariate polynomials over `Self`, when the type has
    /// one; `None` falls back to the primitive remainder sequence.
    fn poly_gcd(_a: &Poly<Self>, _b: &Poly<Self>) -> Option<Poly<Self>> {
        None
    }
}

/// Implements the `std::ops` operators in terms of the [`Ring`] methods.
macro_rules! impl_ring_ops {
    ([$($g:tt)*] $t:ty) => {
        impl<$($g)*> std::ops::Add<&$t> for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t { $crate::kernel::Ring::add_ref(self, o) }
        }
        impl<$($g)*> std::ops::Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t { $crate::kernel::Ring::add_ref(&self, &o) }
        }
        impl<$($g)*> std::ops::Sub<&$t> for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t { $crate::kernel::Ring::sub_ref(self, o) }
        }
        impl<$($g)*> std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t { $crate::kernel::Ring::sub_ref(&self, &o) }
        }
        impl<$($g)*> std::ops::Mul<&$t> for &$t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t { $crate::kernel::Ring::mul_ref(self, o) }
        }
        impl<$($g)*> std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t { $crate::kernel::Ring::mul_ref(&self, &o) }
        }
        impl<$($g)*> std::ops::Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t { $crate::kernel::Ring::neg_ref(self) }
        }
        impl<$($g)*> std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t { $crate::kernel::Ring::neg_ref(&self) }
        }
    };
}
pub(crate) use impl_ring_ops;
