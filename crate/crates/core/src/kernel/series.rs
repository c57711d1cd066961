//! Truncated power series with an explicit truncation order.
//!
//! A series either knows its coefficients up to `x^N` (truncated, order `N`)
//! or is an exact polynomial (order `None`, used for constants). Arithmetic
//! truncates to the smaller order and never extends precision.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::rat::Rat;
use super::ring::{impl_ring_ops, Ring};

/// Which formal variable a series is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    /// The degree variable `Q`.
    Q,
    /// The quantum parameter `q`.
    LowerQ,
    /// Untagged; adopts the tag of whatever it is combined with.
    Any,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "Q",
            Var::LowerQ => "q",
            Var::Any => "x",
        }
    }

    fn join(self, o: Var) -> Var {
        match (self, o) {
            (Var::Any, v) | (v, Var::Any) => v,
            (a, b) => {
                debug_assert_eq!(a, b, "mixing series in different variables");
                a
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("constant term must be {expected}, found {found}")]
    ConstantTerm { expected: &'static str, found: String },
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("operation needs a truncation order but the series is exact")]
    Unbounded,
}

#[derive(Clone)]
pub struct TruncSeries<R> {
    var: Var,
    order: Option<usize>,
    c: Vec<R>,
}

impl<R: Ring> TruncSeries<R> {
    /// Series known to order `order`; missing coefficients are zero, extra ones dropped.
    pub fn new(var: Var, order: usize, mut c: Vec<R>) -> Self {
        c.resize(order + 1, R::zero());
        TruncSeries { var, order: Some(order), c }
    }

    /// An exact polynomial.
    pub fn exact(var: Var, mut c: Vec<R>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        TruncSeries { var, order: None, c }
    }

    pub fn from_poly(var: Var, c: &[R], order: usize) -> Self {
        Self::new(var, order, c.iter().take(order + 1).cloned().collect())
    }

    pub fn from_fn(var: Var, order: usize, f: impl Fn(usize) -> R) -> Self {
        Self::new(var, order, (0..=order).map(f).collect())
    }

    pub fn zero_to(var: Var, order: usize) -> Self {
        Self::new(var, order, Vec::new())
    }

    pub fn one_to(var: Var, order: usize) -> Self {
        Self::new(var, order, vec![R::one()])
    }

    /// The monomial `x` truncated at `order`.
    pub fn var_to(var: Var, order: usize) -> Self {
        Self::new(var, order, vec![R::zero(), R::one()])
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    /// Stored coefficients (length `order + 1` for truncated series).
    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    /// Coefficient of `x^k`, or `None` when `k` is beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Option<R> {
        match self.order {
            Some(n) if k > n => None,
            _ => Some(self.c.get(k).cloned().unwrap_or_else(R::zero)),
        }
    }

    pub fn constant_term(&self) -> R {
        self.c.first().cloned().unwrap_or_else(R::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = self.order.map_or(order, |n| n.min(order));
        Self::new(self.var, order, self.c.iter().take(order + 1).cloned().collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> TruncSeries<S> {
        TruncSeries { var: self.var, order: self.order, c: self.c.iter().map(f).collect() }
    }

    fn join_order(&self, o: &Self) -> Option<usize> {
        match (self.order, o.order) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        }
    }

    fn build(var: Var, order: Option<usize>, c: Vec<R>) -> Self {
        match order {
            Some(n) => Self::new(var, n, c),
            None => Self::exact(var, c),
        }
    }

    pub fn scale(&self, r: &R) -> Self {
        Self::build(self.var, self.order, self.c.iter().map(|a| a.mul_ref(r)).collect())
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let c0 = self.constant_term().inv_opt().ok_or(SeriesError::NotInvertible)?;
        let Some(n) = self.order else {
            if self.c.len() <= 1 {
                return Ok(Self::exact(self.var, vec![c0]));
            }
            return Err(SeriesError::Unbounded);
        };
        let mut b: Vec<R> = Vec::with_capacity(n + 1);
        b.push(c0.clone());
        for k in 1..=n {
            let mut acc = R::zero();
            for j in 1..=k {
                if let Some(cj) = self.c.get(j) {
                    if !cj.is_zero() {
                        acc = acc.add_ref(&cj.mul_ref(&b[k - j]));
                    }
                }
            }
            b.push(acc.mul_ref(&c0).neg_ref());
        }
        Ok(Self::new(self.var, n, b))
    }

    /// Formal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::ConstantTerm {
                expected: "1",
                found: format!("{:?}", self.constant_term()),
            });
        }
        let n = self.order.ok_or(SeriesError::Unbounded)?;
        let s = |k: usize| self.c.get(k).cloned().unwrap_or_else(R::zero);
        let mut l: Vec<R> = vec![R::zero(); n + 1];
        for k in 1..=n {
            let mut acc = R::zero();
            for j in 1..k {
                let sk = s(k - j);
                if !sk.is_zero() && !l[j].is_zero() {
                    acc = acc.add_ref(&l[j].mul_ref(&sk).scale_rat(&Rat::from(j)));
                }
            }
            l[k] = s(k).sub_ref(&acc.scale_rat(&Rat::new(1, k as i64)));
        }
        Ok(Self::new(self.var, n, l))
    }

    /// Formal exponential of a series with constant term 0.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::ConstantTerm {
                expected: "0",
                found: format!("{:?}", self.constant_term()),
            });
        }
        let Some(n) = self.order else {
            if self.c.is_empty() {
                return Ok(Self::exact(self.var, vec![R::one()]));
            }
            return Err(SeriesError::Unbounded);
        };
        let s = |k: usize| self.c.get(k).cloned().unwrap_or_else(R::zero);
        let mut e: Vec<R> = vec![R::one()];
        for k in 1..=n {
            let mut acc = R::zero();
            for j in 1..=k {
                let sj = s(j);
                if !sj.is_zero() {
                    acc = acc.add_ref(&sj.mul_ref(&e[k - j]).scale_rat(&Rat::from(j)));
                }
            }
            e.push(acc.scale_rat(&Rat::new(1, k as i64)));
        }
        Ok(Self::new(self.var, n, e))
    }

    /// `base^alpha = exp(alpha * log(base))` for a base with constant term 1.
    pub fn pow_sym(&self, alpha: &R) -> Result<Self, SeriesError> {
        self.log()?.scale(alpha).exp()
    }

    /// `x d/dx`.
    pub fn theta(&self) -> Self {
        Self::build(
            self.var,
            self.order,
            self.c.iter().enumerate().map(|(k, a)| a.scale_rat(&Rat::from(k))).collect(),
        )
    }

    /// `d/dx`; the order drops by one.
    pub fn derivative(&self) -> Self {
        let c: Vec<R> =
            self.c.iter().enumerate().skip(1).map(|(k, a)| a.scale_rat(&Rat::from(k))).collect();
        match self.order {
            Some(0) => Self::new(self.var, 0, Vec::new()),
            Some(n) => Self::new(self.var, n - 1, c),
            None => Self::exact(self.var, c),
        }
    }

    /// Agreement of all coefficients known to both series.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let n = match self.join_order(o) {
            Some(n) => n + 1,
            None => self.c.len().max(o.c.len()),
        };
        (0..n).all(|k| {
            let a = self.c.get(k).cloned().unwrap_or_else(R::zero);
            let b = o.c.get(k).cloned().unwrap_or_else(R::zero);
            a == b
        })
    }

    /// First index (up to the known order) where the two series differ.
    pub fn first_difference(&self, o: &Self) -> Option<usize> {
        let n = match self.join_order(o) {
            Some(n) => n + 1,
            None => self.c.len().max(o.c.len()),
        };
        (0..n).find(|&k| {
            let a = self.c.get(k).cloned().unwrap_or_else(R::zero);
            let b = o.c.get(k).cloned().unwrap_or_else(R::zero);
            a != b
        })
    }
}

impl<R: Ring> PartialEq for TruncSeries<R> {
    fn eq(&self, o: &Self) -> bool {
        self.agrees_with(o)
    }
}

impl<R: Ring> fmt::Debug for TruncSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + O({}^{:?})", self.c, self.var.name(), self.order.map(|n| n + 1))
    }
}

impl<R: Ring> Ring for TruncSeries<R> {
    fn zero() -> Self {
        Self::exact(Var::Any, Vec::new())
    }
    fn one() -> Self {
        Self::exact(Var::Any, vec![R::one()])
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }
    fn add_ref(&self, o: &Self) -> Self {
        let order = self.join_order(o);
        let len = match order {
            Some(n) => n + 1,
            None => self.c.len().max(o.c.len()),
        };
        let c = (0..len)
            .map(|k| match (self.c.get(k), o.c.get(k)) {
                (Some(a), Some(b)) => a.add_ref(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => R::zero(),
            })
            .collect();
        Self::build(self.var.join(o.var), order, c)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let order = self.join_order(o);
        if self.c.is_empty() || o.c.is_empty() {
            return Self::build(self.var.join(o.var), order, Vec::new());
        }
        let full = self.c.len() + o.c.len() - 1;
        let len = order.map_or(full, |n| full.min(n + 1));
        let c = R::convolve(&self.c, &o.c, len);
        Self::build(self.var.join(o.var), order, c)
    }
    fn neg_ref(&self) -> Self {
        Self::build(self.var, self.order, self.c.iter().map(|a| a.neg_ref()).collect())
    }
    fn from_rat(r: &Rat) -> Self {
        Self::exact(Var::Any, vec![R::from_rat(r)])
    }
    fn inv_opt(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        Self::build(self.var, self.order, self.c.iter().map(|a| a.scale_rat(r)).collect())
    }
}

impl_ring_ops!([R: Ring] TruncSeries<R>);

impl fmt::Display for TruncSeries<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var.name();
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let body_is_one = k == 0;
            super::tpoly::fmt_signed_term(
                f,
                a,
                first,
                |f| if k == 1 { write!(f, "{v}") } else { write!(f, "{v}^{k}") },
                body_is_one,
            )?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(n) = self.order {
            write!(f, " + O({v}^{})", n + 1)?;
        }
        Ok(())
    }
}
