//! Fractions over a polynomial-type [`GcdDomain`]: the exact rational
//! functions used throughout the crate.

use std::fmt;

use super::poly::Poly;
use super::rat::Rat;
use super::ring::{impl_ring_ops, Field, GcdDomain, Ring};
use super::series::{SeriesError, TruncSeries, Var};
use super::tpoly::TPoly;

/// `num / den` with `gcd(num, den) = 1` and `den` normalized to leading
/// rational coefficient 1.
#[derive(Clone)]
pub struct Frac<D> {
    num: D,
    den: D,
}

/// Rational functions of `q` with rational coefficients (specialized mode).
pub type QFunc = Frac<Poly<Rat>>;
/// Rational functions of `t1, t2` only.
pub type TFunc = Frac<TPoly>;
/// Rational functions of `q` whose coefficients are polynomials in `t1, t2`.
pub type RatFunc = Frac<Poly<TPoly>>;

impl<D: GcdDomain> Frac<D> {
    pub fn new(num: D, den: D) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let l = den.lead_rat().recip();
        Frac { num: num.scale_rat(&l), den: den.scale_rat(&l) }
    }

    /// Builds without gcd reduction; the denominator is still normalized.
    pub fn new_unreduced(num: D, den: D) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let l = den.lead_rat().recip();
        Frac { num: num.scale_rat(&l), den: den.scale_rat(&l) }
    }

    pub fn from_base(d: D) -> Self {
        Frac { num: d, den: D::one() }
    }

    pub fn num(&self) -> &D {
        &self.num
    }

    pub fn den(&self) -> &D {
        &self.den
    }

    /// Equality by cross-multiplication.
    pub fn cross_eq(&self, o: &Self) -> bool {
        self.num.mul_ref(&o.den) == o.num.mul_ref(&self.den)
    }
}

impl<D: GcdDomain> PartialEq for Frac<D> {
    fn eq(&self, o: &Self) -> bool {
        self.cross_eq(o)
    }
}

impl<D: GcdDomain> fmt::Debug for Frac<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl<D: GcdDomain> Ring for Frac<D> {
    fn zero() -> Self {
        Frac { num: D::zero(), den: D::one() }
    }
    fn one() -> Self {
        Frac { num: D::one(), den: D::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num == self.den
    }
    fn add_ref(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Frac::new(self.num.add_ref(&o.num), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            let num = self.num.mul_ref(&o.den).add_ref(&o.num.mul_ref(&self.den));
            // Coprime denominators leave nothing to cancel.
            return Frac::new_unreduced(num, self.den.mul_ref(&o.den));
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul_ref(&d2).add_ref(&o.num.mul_ref(&d1));
        Frac::new(num, self.den.mul_ref(&d2))
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
    fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = o.den.div_exact(&g1).expect("gcd divides");
        let n2 = o.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        Frac::new_unreduced(n1.mul_ref(&n2), d1.mul_ref(&d2))
    }
    fn neg_ref(&self) -> Self {
        Frac { num: self.num.neg_ref(), den: self.den.clone() }
    }
    fn from_rat(r: &Rat) -> Self {
        Frac { num: D::from_rat(r), den: D::one() }
    }
    fn inv_opt(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Frac::new_unreduced(self.den.clone(), self.num.clone()))
        }
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Frac { num: self.num.scale_rat(r), den: self.den.clone() }
    }
}

impl<D: GcdDomain> Field for Frac<D> {}

impl_ring_ops!([D: GcdDomain] Frac<D>);

impl<D: GcdDomain> std::ops::Div<&Frac<D>> for &Frac<D> {
    type Output = Frac<D>;
    fn div(self, o: &Frac<D>) -> Frac<D> {
        self.div_ref(o)
    }
}

impl<D: GcdDomain> std::ops::Div for Frac<D> {
    type Output = Frac<D>;
    fn div(self, o: Frac<D>) -> Frac<D> {
        self.div_ref(&o)
    }
}

// ---------------------------------------------------------------------------
// Rational functions of q.

impl QFunc {
    pub fn q() -> QFunc {
        Frac::from_base(Poly::x())
    }

    pub fn eval(&self, q: &Rat) -> Option<Rat> {
        let d = self.den.eval(q);
        if d.is_zero() {
            None
        } else {
            Some(&self.num.eval(q) / &d)
        }
    }

    /// Taylor expansion at `q = 0`.
    pub fn q_expand(&self, order: usize) -> Result<TruncSeries<Rat>, SeriesError> {
        let n = TruncSeries::from_poly(Var::LowerQ, self.num.coeffs(), order);
        let d = TruncSeries::from_poly(Var::LowerQ, self.den.coeffs(), order);
        Ok(n.mul_ref(&d.inv()?))
    }
}

impl fmt::Display for QFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |f: &mut fmt::Formatter<'_>, c: &Rat| write!(f, "{c}");
        let wrap = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 && !self.den.is_one();
        if wrap {
            write!(f, "(")?;
        }
        fmt_qpoly(f, self.num.coeffs(), show, |c| c.is_negative(), |c| c.abs())?;
        if wrap {
            write!(f, ")")?;
        }
        if !self.den.is_one() {
            write!(f, "/(")?;
            fmt_qpoly(f, self.den.coeffs(), show, |c| c.is_negative(), |c| c.abs())?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn fmt_qpoly<C: Ring>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[C],
    show: impl Fn(&mut fmt::Formatter<'_>, &C) -> fmt::Result,
    is_neg: impl Fn(&C) -> bool,
    abs: impl Fn(&C) -> C,
) -> fmt::Result {
    if coeffs.iter().all(|c| c.is_zero()) {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = is_neg(c);
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        first = false;
        let a = abs(c);
        if k == 0 {
            show(f, &a)?;
        } else {
            if !a.is_one() {
                show(f, &a)?;
                write!(f, "*")?;
            }
            if k == 1 {
                write!(f, "q")?;
            } else {
                write!(f, "q^{k}")?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Rational functions of t1, t2.

impl TFunc {
    pub fn t1() -> TFunc {
        Frac::from_base(TPoly::t1())
    }

    pub fn t2() -> TFunc {
        Frac::from_base(TPoly::t2())
    }

    pub fn eval(&self, t1: &Rat, t2: &Rat) -> Option<Rat> {
        let d = self.den.eval(t1, t2);
        if d.is_zero() {
            None
        } else {
            Some(&self.num.eval(t1, t2) / &d)
        }
    }

    pub fn swap_t(&self) -> TFunc {
        Frac::new(self.num.swap_t(), self.den.swap_t())
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        Frac::new_unreduced(Poly::constant(self.num.clone()), Poly::constant(self.den.clone()))
    }
}

impl fmt::Display for TFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

// ---------------------------------------------------------------------------
// Rational functions of q over Q[t1, t2].

impl RatFunc {
    pub fn t1() -> RatFunc {
        Frac::from_base(Poly::constant(TPoly::t1()))
    }

    pub fn t2() -> RatFunc {
        Frac::from_base(Poly::constant(TPoly::t2()))
    }

    pub fn q() -> RatFunc {
        Frac::from_base(Poly::x())
    }

    /// Substitute rational values for `t1, t2`, keeping `q` symbolic.
    pub fn specialize(&self, t1: &Rat, t2: &Rat) -> Option<QFunc> {
        let num = self.num.map(|c| c.eval(t1, t2));
        let den = self.den.map(|c| c.eval(t1, t2));
        if den.is_zero() {
            None
        } else {
            Some(Frac::new(num, den))
        }
    }

    pub fn eval(&self, t1: &Rat, t2: &Rat, q: &Rat) -> Option<Rat> {
        self.specialize(t1, t2)?.eval(q)
    }

    pub fn swap_t(&self) -> RatFunc {
        Frac::new(self.num.map(|c| c.swap_t()), self.den.map(|c| c.swap_t()))
    }

    /// `f(t1, t2) = f(t2, t1)`, by cross-multiplication without gcd reduction.
    pub fn is_t_symmetric(&self) -> bool {
        let swap = |p: &Poly<TPoly>| p.map(|c| c.swap_t());
        self.num.mul_ref(&swap(&self.den)) == swap(&self.num).mul_ref(&self.den)
    }

    /// A rational function of `q` with constant coefficients.
    pub fn from_qfunc(f: &QFunc) -> RatFunc {
        Frac::new(f.num.map(TPoly::from_rat), f.den.map(TPoly::from_rat))
    }

    /// The value as a function of `t1, t2` alone, when `q` does not occur.
    pub fn as_tfunc(&self) -> Option<TFunc> {
        if self.num.deg().unwrap_or(0) == 0 && self.den.deg() == Some(0) {
            Some(Frac::new(self.num.coeff(0), self.den.coeff(0)))
        } else {
            None
        }
    }

    /// Taylor expansion at `q = 0` with coefficients in `Q(t1, t2)`.
    pub fn q_expand(&self, order: usize) -> Result<TruncSeries<TFunc>, SeriesError> {
        let lift = |c: &[TPoly]| -> Vec<TFunc> { c.iter().map(|x| Frac::from_base(x.clone())).collect() };
        let n = TruncSeries::from_poly(Var::LowerQ, &lift(self.num.coeffs()), order);
        let d = TruncSeries::from_poly(Var::LowerQ, &lift(self.den.coeffs()), order);
        Ok(n.mul_ref(&d.inv()?))
    }

    /// Equivariant degree when every `t`-coefficient of numerator and
    /// denominator is homogeneous of a fixed degree.
    pub fn t_degree(&self) -> Option<i64> {
        fn deg(p: &Poly<TPoly>) -> Option<i64> {
            let mut d = None;
            for c in p.coeffs().iter().filter(|c| !c.is_zero()) {
                let cd = c.total_degree()?;
                if !c.is_homogeneous(cd) || d.is_some_and(|x| x != cd) {
                    return None;
                }
                d = Some(cd);
            }
            d.map(|x| x as i64)
        }
        if self.is_zero() {
            return None;
        }
        Some(deg(&self.num)? - deg(&self.den)?)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |f: &mut fmt::Formatter<'_>, c: &TPoly| {
            if c.terms().len() > 1 {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        };
        let is_neg = |c: &TPoly| c.terms().len() == 1 && c.lead_rat().is_negative();
        let abs = |c: &TPoly| if is_neg(c) { c.neg_ref() } else { c.clone() };
        let wrap = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 && !self.den.is_one();
        if wrap {
            write!(f, "(")?;
        }
        fmt_qpoly(f, self.num.coeffs(), show, is_neg, abs)?;
        if wrap {
            write!(f, ")")?;
        }
        if !self.den.is_one() {
            write!(f, "/(")?;
            fmt_qpoly(f, self.den.coeffs(), show, is_neg, abs)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}
