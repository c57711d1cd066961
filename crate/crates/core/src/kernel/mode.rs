//! Coefficient modes: the same operator code runs over fully symbolic
//! rational functions, over rational functions of `q` alone with `t1`, `t2`
//! fixed, or over `q`-power series with `t1`, `t2` fixed.

use std::fmt;

use serde::Serialize;

use super::frac::{QFunc, RatFunc};
use super::matrix::Matrix;
use super::poly::Poly;
use super::rat::Rat;
use super::ring::Ring;
use super::series::{TruncSeries, Var};
use super::tpoly::TPoly;

pub trait Mode: Clone + Send + Sync + fmt::Debug {
    type S: Ring;

    fn t1(&self) -> Self::S;
    fn t2(&self) -> Self::S;

    /// `((-q)^r + 1) / ((-q)^r - 1)`.
    fn cot(&self, r: u32) -> Self::S;

    fn constant(&self, r: &Rat) -> Self::S {
        Self::S::from_rat(r)
    }

    fn describe(&self) -> ModeTag;

    /// Image of a symbolic value; `None` when the specialization hits a pole.
    fn lift(&self, f: &RatFunc) -> Option<Self::S>;

    /// Solves `a x = b`; `None` when no unit pivot sequence exists.
    fn solve(&self, a: &Matrix<Self::S>, b: &[Self::S]) -> Option<Vec<Self::S>> {
        a.solve_unit_pivot(b)
    }
}

/// Serializable description of a mode, recorded next to every result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ModeTag {
    Symbolic,
    Specialized { t1: Rat, t2: Rat },
    Series { t1: Rat, t2: Rat, q_order: usize },
}

impl fmt::Display for ModeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeTag::Symbolic => write!(f, "symbolic"),
            ModeTag::Specialized { t1, t2 } => write!(f, "t1={t1}, t2={t2}"),
            ModeTag::Series { t1, t2, q_order } => write!(f, "t1={t1}, t2={t2}, O(q^{})", q_order + 1),
        }
    }
}

/// Numerator and denominator of the cotangent basis function as `q`-polynomial coefficients.
pub fn cot_parts(r: u32) -> (Vec<Rat>, Vec<Rat>) {
    let r = r as usize;
    let sign = if r % 2 == 0 { Rat::one() } else { -Rat::one() };
    let mut num = vec![Rat::zero(); r + 1];
    let mut den = vec![Rat::zero(); r + 1];
    num[0] = Rat::one();
    den[0] = -Rat::one();
    num[r] = num[r].add_ref(&sign);
    den[r] = den[r].add_ref(&sign);
    (num, den)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Symbolic;

impl Mode for Symbolic {
    type S = RatFunc;
    fn t1(&self) -> RatFunc {
        RatFunc::t1()
    }
    fn t2(&self) -> RatFunc {
        RatFunc::t2()
    }
    fn cot(&self, r: u32) -> RatFunc {
        let (n, d) = cot_parts(r);
        let lift = |v: Vec<Rat>| Poly::from_coeffs(v.iter().map(TPoly::from_rat).collect());
        RatFunc::new(lift(n), lift(d))
    }
    fn describe(&self) -> ModeTag {
        ModeTag::Symbolic
    }
    fn lift(&self, f: &RatFunc) -> Option<RatFunc> {
        Some(f.clone())
    }
    fn solve(&self, a: &Matrix<RatFunc>, b: &[RatFunc]) -> Option<Vec<RatFunc>> {
        a.solve_fraction_free(b)
    }
}

/// `t1`, `t2` fixed to rationals; exact in `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Specialized {
    pub t1: Rat,
    pub t2: Rat,
}

impl Specialized {
    pub fn new(t1: Rat, t2: Rat) -> Self {
        Specialized { t1, t2 }
    }
}

impl Mode for Specialized {
    type S = QFunc;
    fn t1(&self) -> QFunc {
        QFunc::from_rat(&self.t1)
    }
    fn t2(&self) -> QFunc {
        QFunc::from_rat(&self.t2)
    }
    fn cot(&self, r: u32) -> QFunc {
        let (n, d) = cot_parts(r);
        QFunc::new(Poly::from_coeffs(n), Poly::from_coeffs(d))
    }
    fn describe(&self) -> ModeTag {
        ModeTag::Specialized { t1: self.t1.clone(), t2: self.t2.clone() }
    }
    fn lift(&self, f: &RatFunc) -> Option<QFunc> {
        f.specialize(&self.t1, &self.t2)
    }
    fn solve(&self, a: &Matrix<QFunc>, b: &[QFunc]) -> Option<Vec<QFunc>> {
        a.solve_fraction_free(b)
    }
}

/// `t1`, `t2` fixed; every quantity is a `q`-power series known to `q^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesAt {
    pub t1: Rat,
    pub t2: Rat,
    pub order: usize,
}

impl SeriesAt {
    pub fn new(t1: Rat, t2: Rat, order: usize) -> Self {
        SeriesAt { t1, t2, order }
    }
}

impl Mode for SeriesAt {
    type S = TruncSeries<Rat>;
    fn t1(&self) -> TruncSeries<Rat> {
        TruncSeries::from_rat(&self.t1).with_var(Var::LowerQ)
    }
    fn t2(&self) -> TruncSeries<Rat> {
        TruncSeries::from_rat(&self.t2).with_var(Var::LowerQ)
    }
    /// `-(1 + 2 Σ_{k ≥ 1} (-q)^{rk})`.
    fn cot(&self, r: u32) -> TruncSeries<Rat> {
        let r = r as usize;
        TruncSeries::from_fn(Var::LowerQ, self.order, |j| {
            if j == 0 {
                -Rat::one()
            } else if j % r == 0 {
                if j % 2 == 0 {
                    Rat::from(-2)
                } else {
                    Rat::from(2)
                }
            } else {
                Rat::zero()
            }
        })
    }
    fn describe(&self) -> ModeTag {
        ModeTag::Series { t1: self.t1.clone(), t2: self.t2.clone(), q_order: self.order }
    }
    fn lift(&self, f: &RatFunc) -> Option<TruncSeries<Rat>> {
        let s = f.specialize(&self.t1, &self.t2)?.q_expand(self.order).ok()?;
        Some(s.with_var(Var::LowerQ))
    }
}
