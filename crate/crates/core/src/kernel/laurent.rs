//! Truncated Laurent series in `u` whose coefficients are power series in `Q`.

use std::collections::BTreeMap;
use std::fmt;

use super::rat::Rat;
use super::ring::Ring;
use super::series::{TruncSeries, Var};

/// Lowest `u`-exponent any series in the crate is allowed to carry.
pub const U_FLOOR: i32 = -3;

/// `Σ_{k = low}^{u_order} c_k(Q) u^k`, with every `c_k` known to `Q^q_order`.
#[derive(Clone, PartialEq)]
pub struct ULaurent {
    low: i32,
    u_order: i32,
    q_order: usize,
    c: Vec<TruncSeries<Rat>>,
}

impl ULaurent {
    pub fn zero(low: i32, u_order: i32, q_order: usize) -> ULaurent {
        assert!(low >= U_FLOOR, "u-exponent {low} below the floor {U_FLOOR}");
        assert!(u_order >= low - 1, "empty u-range must still be well formed");
        let len = (u_order - low + 1).max(0) as usize;
        ULaurent { low, u_order, q_order, c: vec![TruncSeries::zero_to(Var::Q, q_order); len] }
    }

    /// Builds from `(u-exponent, Q-series)` pairs; exponents outside the range are dropped.
    pub fn from_terms(
        low: i32,
        u_order: i32,
        q_order: usize,
        terms: impl IntoIterator<Item = (i32, TruncSeries<Rat>)>,
    ) -> ULaurent {
        let mut out = ULaurent::zero(low, u_order, q_order);
        for (k, s) in terms {
            out.add_at(k, &s);
        }
        out
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn u_order(&self) -> i32 {
        self.u_order
    }

    pub fn q_order(&self) -> usize {
        self.q_order
    }

    /// Coefficient of `u^k`; zero below `low`, `None` above the truncation.
    pub fn coeff(&self, k: i32) -> Option<TruncSeries<Rat>> {
        if k > self.u_order {
            return None;
        }
        if k < self.low {
            return Some(TruncSeries::zero_to(Var::Q, self.q_order));
        }
        Some(self.c[(k - self.low) as usize].clone())
    }

    /// Coefficient of `u^k Q^m`.
    pub fn coeff2(&self, k: i32, m: usize) -> Option<Rat> {
        self.coeff(k)?.coeff(m)
    }

    pub fn add_at(&mut self, k: i32, s: &TruncSeries<Rat>) {
        if k > self.u_order {
            return;
        }
        assert!(k >= self.low, "u^{k} below the lowest stored exponent {}", self.low);
        let slot = &mut self.c[(k - self.low) as usize];
        *slot = slot.add_ref(&s.truncate(self.q_order).with_var(Var::Q));
    }

    /// Sum over the common truncation; the exponent ranges are aligned first.
    pub fn add(&self, o: &ULaurent) -> ULaurent {
        let low = self.low.min(o.low);
        let u_order = self.u_order.min(o.u_order);
        let q_order = self.q_order.min(o.q_order);
        let mut out = ULaurent::zero(low, u_order, q_order);
        for x in [self, o] {
            for (i, s) in x.c.iter().enumerate() {
                out.add_at(x.low + i as i32, s);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> ULaurent {
        let mut out = self.clone();
        for s in &mut out.c {
            *s = s.scale_rat(r);
        }
        out
    }

    /// Multiplies every `u`-coefficient by the same `Q`-series.
    pub fn mul_q_series(&self, f: &TruncSeries<Rat>) -> ULaurent {
        let mut out = self.clone();
        for s in &mut out.c {
            *s = s.mul_ref(f);
        }
        if let Some(n) = f.order() {
            out.q_order = out.q_order.min(n);
        }
        out
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        self.c.iter().position(|s| !s.is_zero()).map(|i| self.low + i as i32)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// First `(u-exponent, Q-exponent)` where the two expansions disagree.
    pub fn first_mismatch(&self, o: &ULaurent) -> Option<(i32, usize)> {
        let u_order = self.u_order.min(o.u_order);
        let q_order = self.q_order.min(o.q_order);
        for k in self.low.min(o.low)..=u_order {
            let (a, b) = (self.coeff(k)?, o.coeff(k)?);
            for m in 0..=q_order {
                if a.coeff(m) != b.coeff(m) {
                    return Some((k, m));
                }
            }
        }
        None
    }

    /// Nonzero coefficients keyed by `(u-exponent, Q-exponent)`.
    pub fn nonzero_terms(&self) -> BTreeMap<(i32, usize), Rat> {
        let mut out = BTreeMap::new();
        for (i, s) in self.c.iter().enumerate() {
            for (m, a) in s.coeffs().iter().enumerate() {
                if !a.is_zero() {
                    out.insert((self.low + i as i32, m), a.clone());
                }
            }
        }
        out
    }
}

impl fmt::Debug for ULaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ULaurent")?;
        f.debug_map().entries(self.nonzero_terms()).finish()
    }
}

impl fmt::Display for ULaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, s) in self.c.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let k = self.low + i as i32;
            let mut body = s.to_string();
            if let Some(cut) = body.find(" + O(") {
                body.truncate(cut);
            }
            write!(f, "({body})*u^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(u^{}, Q^{})", self.u_order + 1, self.q_order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat::rat;

    fn konst(r: Rat) -> TruncSeries<Rat> {
        TruncSeries::new(Var::Q, 3, vec![r])
    }

    #[test]
    fn aligned_addition() {
        let a = ULaurent::from_terms(-1, 3, 3, [(-1, konst(rat(-1, 1))), (1, konst(rat(1, 12)))]);
        let b = ULaurent::from_terms(-3, 3, 3, [(-1, konst(rat(1, 1))), (3, konst(rat(1, 720)))]);
        let s = a.add(&b);
        assert_eq!(s.low(), -3);
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s.coeff2(3, 0), Some(rat(1, 720)));
        assert_eq!(s.coeff(4), None);
    }

    #[test]
    fn mismatch_reports_position() {
        let a = ULaurent::from_terms(-1, 1, 2, [(1, TruncSeries::new(Var::Q, 2, vec![rat(0, 1), rat(0, 1), rat(1, 2)]))]);
        let b = ULaurent::zero(-1, 1, 2);
        assert_eq!(a.first_mismatch(&b), Some((1, 2)));
        assert_eq!(a.first_mismatch(&a), None);
    }
}
