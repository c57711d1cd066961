use std::collections::BTreeMap;
use std::fmt;

use super::poly::Poly;
use super::rat::Rat;
use super::ring::{impl_ring_ops, GcdDomain, Ring};

/// Sparse polynomial in the equivariant parameters `t1`, `t2`.
///
/// Keys are exponent pairs `(a, b)` for `t1^a t2^b`; zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl TPoly {
    pub fn t1() -> TPoly {
        TPoly::monomial(Rat::one(), 1, 0)
    }

    pub fn t2() -> TPoly {
        TPoly::monomial(Rat::one(), 0, 1)
    }

    pub fn monomial(c: Rat, a: u32, b: u32) -> TPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        TPoly { terms }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Rat> {
        &self.terms
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), Rat)>) -> TPoly {
        let mut p = TPoly::default();
        for (k, c) in it {
            p.add_term(k, &c);
        }
        p
    }

    fn add_term(&mut self, k: (u32, u32), c: &Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Constant value when the polynomial has no `t` dependence.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    /// True when every term has total degree `d`.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|(a, b)| a + b == d)
    }

    pub fn eval(&self, t1: &Rat, t2: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for ((a, b), c) in &self.terms {
            acc += &(c * &(&t1.pow_u(*a) * &t2.pow_u(*b)));
        }
        acc
    }

    pub fn swap_t(&self) -> TPoly {
        TPoly::from_terms(self.terms.iter().map(|(&(a, b), c)| ((b, a), c.clone())))
    }

    /// Recursive dense form: outer variable `t1`, inner variable `t2`.
    pub fn to_rec(&self) -> Poly<Poly<Rat>> {
        let Some(max_a) = self.terms.keys().map(|k| k.0).max() else {
            return Poly::zero();
        };
        let mut rows: Vec<Vec<Rat>> = vec![Vec::new(); max_a as usize + 1];
        for (&(a, b), c) in &self.terms {
            let row = &mut rows[a as usize];
            if row.len() <= b as usize {
                row.resize(b as usize + 1, Rat::zero());
            }
            row[b as usize] = c.clone();
        }
        Poly::from_coeffs(rows.into_iter().map(Poly::from_coeffs).collect())
    }

    pub fn from_rec(p: &Poly<Poly<Rat>>) -> TPoly {
        let mut terms = BTreeMap::new();
        for (a, row) in p.coeffs().iter().enumerate() {
            for (b, c) in row.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    terms.insert((a as u32, b as u32), c.clone());
                }
            }
        }
        TPoly { terms }
    }

    /// Terms in display order: descending total degree, then descending `t1` power.
    pub fn display_terms(&self) -> Vec<((u32, u32), &Rat)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c)).collect();
        v.sort_by(|(x, _), (y, _)| (y.0 + y.1, y.0).cmp(&(x.0 + x.1, x.0)));
        v
    }
}

impl Ring for TPoly {
    fn zero() -> TPoly {
        TPoly::default()
    }
    fn one() -> TPoly {
        TPoly::monomial(Rat::one(), 0, 0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, o: &TPoly) -> TPoly {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c);
        }
        r
    }
    fn sub_ref(&self, o: &TPoly) -> TPoly {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, &-c);
        }
        r
    }
    fn mul_ref(&self, o: &TPoly) -> TPoly {
        let mut r = TPoly::default();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                r.add_term((a1 + a2, b1 + b2), &(c1 * c2));
            }
        }
        r
    }
    fn neg_ref(&self) -> TPoly {
        TPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
    fn from_rat(r: &Rat) -> TPoly {
        TPoly::monomial(r.clone(), 0, 0)
    }
    fn inv_opt(&self) -> Option<TPoly> {
        match self.as_constant() {
            Some(c) if !c.is_zero() => Some(TPoly::from_rat(&c.recip())),
            _ => None,
        }
    }
    fn scale_rat(&self, r: &Rat) -> TPoly {
        if r.is_zero() {
            return TPoly::zero();
        }
        TPoly { terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect() }
    }
}

impl GcdDomain for TPoly {
    fn div_exact(&self, d: &TPoly) -> Option<TPoly> {
        if let Some(c) = d.as_constant() {
            return c.inv_opt().map(|i| self.scale_rat(&i));
        }
        self.to_rec().div_exact(&d.to_rec()).map(|q| TPoly::from_rec(&q))
    }

    fn gcd(&self, o: &TPoly) -> TPoly {
        if self.is_zero() {
            return o.normalized();
        }
        if o.is_zero() {
            return self.normalized();
        }
        // A nonzero constant is a unit.
        if self.as_constant().is_some() || o.as_constant().is_some() {
            return TPoly::one();
        }
        TPoly::from_rec(&self.to_rec().gcd(&o.to_rec()))
    }

    fn lead_rat(&self) -> Rat {
        self.terms.iter().next_back().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    fn poly_gcd(a: &Poly<TPoly>, b: &Poly<TPoly>) -> Option<Poly<TPoly>> {
        q_gcd(a, b)
    }
}

/// Specialization points for the `t`-free part of a gcd.
const PROBES: [(i64, i64, i64, i64); 8] =
    [(3, 7, 11, 5), (-5, 3, 2, 9), (13, 4, -7, 6), (17, 11, 19, 23), (-29, 8, 31, 12), (37, 15, -41, 14), (43, 21, 47, 25), (-53, 27, 59, 26)];

fn at(p: &Poly<TPoly>, t1: &Rat, t2: &Rat) -> Poly<Rat> {
    p.map(|c| c.eval(t1, t2))
}

/// gcd in `Q[t1, t2][q]` when every common factor of positive `q`-degree is
/// free of `t`, which covers the cyclotomic denominators met in practice.
///
/// The candidate comes from gcds in `Q[q]` at two points where both leading
/// coefficients survive, and is accepted only if it divides both inputs
/// exactly. Once the specialized gcd is constant the true gcd has `q`-degree
/// zero and equals the gcd of the contents. `None` means the candidate failed
/// and the caller should use the general algorithm.
fn q_gcd(a: &Poly<TPoly>, b: &Poly<TPoly>) -> Option<Poly<TPoly>> {
    let contents = || Poly::from_coeffs(vec![a.content().gcd(&b.content())]).normalized();
    if a.deg()? == 0 || b.deg()? == 0 {
        return Some(contents());
    }
    let (la, lb) = (a.lc(), b.lc());
    let mut found: Vec<Poly<Rat>> = Vec::new();
    for &(n1, d1, n2, d2) in &PROBES {
        let (t1, t2) = (Rat::new(n1, d1), Rat::new(n2, d2));
        if la.eval(&t1, &t2).is_zero() || lb.eval(&t1, &t2).is_zero() {
            continue;
        }
        let g = at(a, &t1, &t2).gcd(&at(b, &t1, &t2));
        // A constant gcd at one good point bounds the true q-degree by zero.
        if g.deg()? == 0 {
            return Some(contents());
        }
        found.push(g);
        if found.len() == 2 {
            break;
        }
    }
    let [h1, h2] = <[Poly<Rat>; 2]>::try_from(found).ok()?;
    // Factors that move with t do not survive this intersection.
    let h = h1.gcd(&h2);
    if h.deg()? == 0 {
        return None;
    }
    let lifted = h.map(TPoly::from_rat);
    let a2 = a.div_exact(&lifted)?;
    let b2 = b.div_exact(&lifted)?;
    Some(lifted.mul_ref(&q_gcd(&a2, &b2)?).normalized())
}

impl_ring_ops!([] TPoly);

fn fmt_monomial(f: &mut fmt::Formatter<'_>, a: u32, b: u32) -> fmt::Result {
    let mut first = true;
    for (name, e) in [("t1", a), ("t2", b)] {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

/// Writes `c * m` as a signed term; `first` suppresses the leading ` + `.
pub(crate) fn fmt_signed_term(
    f: &mut fmt::Formatter<'_>,
    c: &Rat,
    first: bool,
    body: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
    body_is_one: bool,
) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if body_is_one {
        write!(f, "{abs}")
    } else if abs.is_one() {
        body(f)
    } else {
        write!(f, "{abs}*")?;
        body(f)
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, ((a, b), c)) in self.display_terms().into_iter().enumerate() {
            fmt_signed_term(f, c, i == 0, |f| fmt_monomial(f, a, b), a + b == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
