//! Dense univariate polynomials over a [`Ring`], with primitive-PRS gcd when
//! the coefficients form a [`GcdDomain`].

use super::rat::Rat;
use super::ring::{impl_ring_ops, GcdDomain, Ring};

/// Polynomial `c[0] + c[1] x + ...` with no trailing zero coefficients.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Poly<R> {
    c: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn from_coeffs(mut c: Vec<R>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn constant(r: R) -> Self {
        Self::from_coeffs(vec![r])
    }

    pub fn x() -> Self {
        Poly { c: vec![R::zero(), R::one()] }
    }

    /// `r * x^k`.
    pub fn monomial(r: R, k: usize) -> Self {
        let mut c = vec![R::zero(); k + 1];
        c[k] = r;
        Self::from_coeffs(c)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> R {
        self.c.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> R {
        self.c.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul_ref(x).add_ref(a);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a.scale_rat(&Rat::from(i)))
            .collect();
        Self::from_coeffs(c)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::from_coeffs(self.c.iter().map(f).collect())
    }

    pub fn scale(&self, r: &R) -> Self {
        Self::from_coeffs(self.c.iter().map(|a| a.mul_ref(r)).collect())
    }

    /// Substitute `x -> -x`.
    pub fn negate_var(&self) -> Self {
        Self::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .map(|(i, a)| if i % 2 == 1 { a.neg_ref() } else { a.clone() })
                .collect(),
        )
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly { c: Vec::new() }
    }
    fn one() -> Self {
        Poly { c: vec![R::one()] }
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add_ref(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a.add_ref(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(c)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
    fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let c = R::convolve(&self.c, &o.c, self.c.len() + o.c.len() - 1);
        Self::from_coeffs(c)
    }
    fn neg_ref(&self) -> Self {
        Poly { c: self.c.iter().map(|a| a.neg_ref()).collect() }
    }
    fn from_rat(r: &Rat) -> Self {
        Self::constant(R::from_rat(r))
    }
    fn inv_opt(&self) -> Option<Self> {
        if self.c.len() == 1 {
            self.c[0].inv_opt().map(Self::constant)
        } else {
            None
        }
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        Self::from_coeffs(self.c.iter().map(|a| a.scale_rat(r)).collect())
    }
}

impl<R: GcdDomain> Poly<R> {
    /// Gcd of the coefficients.
    pub fn content(&self) -> R {
        let mut g = R::zero();
        for a in &self.c {
            g = g.gcd(a);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.content();
        self.map(|a| a.div_exact(&g).expect("content divides coefficients"))
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn prem(&self, b: &Self) -> Self {
        let db = b.deg().expect("pseudo-division by zero");
        let lb = b.lc();
        let mut r = self.c.clone();
        while r.len() > db {
            let top = r.len() - 1;
            let lr = r[top].clone();
            let shift = top - db;
            for x in r.iter_mut() {
                *x = x.mul_ref(&lb);
            }
            for (j, bj) in b.c.iter().enumerate() {
                if !bj.is_zero() {
                    r[shift + j] = r[shift + j].sub_ref(&lr.mul_ref(bj));
                }
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Poly::from_coeffs(r)
    }

    /// Division remainder and quotient, assuming leading coefficients divide
    /// exactly at every step.
    pub fn div_rem_exact(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.deg()?;
        let ld = d.lc();
        if self.c.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut r = self.c.clone();
        let mut q = vec![R::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            if r[i + dd].is_zero() {
                continue;
            }
            let f = r[i + dd].div_exact(&ld)?;
            for (j, dj) in d.c.iter().enumerate().take(dd) {
                if !dj.is_zero() {
                    r[i + j] = r[i + j].sub_ref(&f.mul_ref(dj));
                }
            }
            r[i + dd] = R::zero();
            q[i] = f;
        }
        r.truncate(dd);
        Some((Poly::from_coeffs(q), Poly::from_coeffs(r)))
    }
}

impl<R: GcdDomain> GcdDomain for Poly<R> {
    fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_exact(d)?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        if let Some(g) = R::poly_gcd(self, other) {
            return g;
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&c).normalized()
    }

    fn lead_rat(&self) -> Rat {
        self.lc().lead_rat()
    }
}

impl_ring_ops!([R: Ring] Poly<R>);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat::rat;

    fn p(v: &[i64]) -> Poly<Rat> {
        Poly::from_coeffs(v.iter().map(|&x| Rat::from(x)).collect())
    }

    #[test]
    fn gcd_of_products() {
        let a = p(&[1, 1]) * p(&[-2, 0, 1]);
        let b = p(&[1, 1]) * p(&[3, 1]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
    }

    #[test]
    fn gcd_is_monic() {
        let a = p(&[2, 2]).scale(&rat(1, 3));
        assert_eq!(a.gcd(&Poly::zero()), p(&[1, 1]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[-1, 0, 1]);
        assert_eq!(a.div_exact(&p(&[-1, 1])), Some(p(&[1, 1])));
        assert_eq!(a.div_exact(&p(&[2, 1])), None);
    }

    #[test]
    fn nested_gcd() {
        // Polynomials in y with coefficients in Q[x]: (x + y)(x - y) and (x + y)^2.
        let x = Poly::<Poly<Rat>>::constant(p(&[0, 1]));
        let y = Poly::<Poly<Rat>>::x();
        let a = (&x + &y) * (&x - &y);
        let b = (&x + &y) * (&x + &y);
        assert_eq!(a.gcd(&b), (&x + &y).normalized());
    }
}
