//! Polynomials in abstract roots `f_1, ..., f_n` of
//! `P(x) = x^n + s_1 x^{n-1} + ... + s_n` and their partial derivatives in
//! `z_1, ..., z_m`, and the rewriting of symmetric ones into
//! `K[Ds][1/Δ]`, where `Δ = Π_{i ≠ j} (f_i - f_j)` and `s_k` carries the sign
//! `(-1)^k e_k(f)`.
//!
//! Text form of a symbol: an optional derivative prefix `d[a_1,...,a_m]`
//! followed by `f<i>`, `s<k>` or `Y`, e.g. `f1`, `d[1]f2`, `d[1,2]s3`,
//! `d[0,1]Y`. Trailing zeros of a multi-index are dropped, so `d[1,0]f1` and
//! `d[1]f1` are the same symbol. See [`parse`] for the expression grammar.

pub mod oracle;
pub mod parse;
pub mod rewrite;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::kernel::{Rat, Ring};

pub use oracle::{
    evaluation_oracle, random_cases, random_point, random_symmetric, Family, MPoly, OracleCase, OracleError, OracleReport,
};
pub use parse::{parse_diffpoly, ParseError};
pub use rewrite::{phi, Rewriter};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymfunError {
    #[error("the input is not invariant under permutations of the roots")]
    NotSymmetric,
    #[error("the input contains the auxiliary function Y")]
    AuxiliarySymbol,
    #[error("root index {index} is out of range for n = {n}")]
    IndexOutOfRange { index: u32, n: u32 },
    #[error("the multi-index must be nonzero")]
    ZeroMultiIndex,
}

/// The three families of symbols, in their frozen order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SymbolKind {
    /// A root `f_i`.
    F,
    /// A signed elementary symmetric function `s_k`.
    S,
    /// The auxiliary function `Y`.
    Y,
}

/// `∂^a f_i`, `∂^a s_k` or `∂^a Y`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffSymbol {
    pub kind: SymbolKind,
    /// 1-based for `f` and `s`; 0 for `Y`.
    pub index: u32,
    deriv: Vec<u32>,
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

impl DiffSymbol {
    pub fn new(kind: SymbolKind, index: u32, deriv: Vec<u32>) -> Self {
        DiffSymbol { kind, index: if kind == SymbolKind::Y { 0 } else { index }, deriv: trim(deriv) }
    }

    pub fn f(i: u32) -> Self {
        Self::new(SymbolKind::F, i, Vec::new())
    }

    pub fn s(k: u32) -> Self {
        Self::new(SymbolKind::S, k, Vec::new())
    }

    pub fn y() -> Self {
        Self::new(SymbolKind::Y, 0, Vec::new())
    }

    pub fn with_deriv(&self, a: &[u32]) -> Self {
        Self::new(self.kind, self.index, a.to_vec())
    }

    /// The multi-index, without trailing zeros.
    pub fn deriv(&self) -> &[u32] {
        &self.deriv
    }

    pub fn order(&self) -> u32 {
        self.deriv.iter().sum()
    }

    /// `∂/∂z_j` (0-based `j`).
    pub fn differentiate(&self, j: usize) -> Self {
        let mut a = self.deriv.clone();
        if a.len() <= j {
            a.resize(j + 1, 0);
        }
        a[j] += 1;
        DiffSymbol { kind: self.kind, index: self.index, deriv: a }
    }

    fn with_index(&self, index: u32) -> Self {
        DiffSymbol { kind: self.kind, index, deriv: self.deriv.clone() }
    }
}

impl fmt::Display for DiffSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.deriv.is_empty() {
            let a: Vec<String> = self.deriv.iter().map(u32::to_string).collect();
            write!(f, "d[{}]", a.join(","))?;
        }
        match self.kind {
            SymbolKind::F => write!(f, "f{}", self.index),
            SymbolKind::S => write!(f, "s{}", self.index),
            SymbolKind::Y => write!(f, "Y"),
        }
    }
}

/// A monomial: symbols with positive exponents, sorted by symbol.
///
/// Monomials are ordered lexicographically with smaller symbols more
/// significant, which is a monomial order; a polynomial's leading term is
/// its largest monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(DiffSymbol, u32)>);

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&o.0) {
            match a.0.cmp(&b.0) {
                // the monomial holding the smaller symbol is larger in that variable
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match a.1.cmp(&b.1) {
                    Ordering::Equal => {}
                    c => return c,
                },
            }
        }
        self.0.len().cmp(&o.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: DiffSymbol) -> Self {
        Monomial(vec![(s, 1)])
    }

    pub fn factors(&self) -> &[(DiffSymbol, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, s: &DiffSymbol) -> u32 {
        self.0.iter().find(|(t, _)| t == s).map_or(0, |(_, e)| *e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn from_unsorted(mut v: Vec<(DiffSymbol, u32)>) -> Self {
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(DiffSymbol, u32)> = Vec::with_capacity(v.len());
        for (s, e) in v {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((t, f)) if *t == s => *f += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        while i < self.0.len() && j < o.0.len() {
            match self.0[i].0.cmp(&o.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(o.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + o.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Monomial(out)
    }

    /// `self / o` if every exponent of `o` is at most that of `self`.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let mut out = self.0.clone();
        for (s, e) in &o.0 {
            let pos = out.iter().position(|(t, _)| t == s)?;
            if out[pos].1 < *e {
                return None;
            }
            out[pos].1 -= e;
            if out[pos].1 == 0 {
                out.remove(pos);
            }
        }
        Some(Monomial(out))
    }

    fn map_symbols(&self, f: impl Fn(&DiffSymbol) -> DiffSymbol) -> Self {
        Monomial::from_unsorted(self.0.iter().map(|(s, e)| (f(s), *e)).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in [`DiffSymbol`]s with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl DiffPoly {
    pub fn var(s: DiffSymbol) -> Self {
        Self::monomial(Monomial::var(s), Rat::one())
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The largest monomial and its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &DiffSymbol> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(s, _)| s))
    }

    pub fn has_kind(&self, kind: SymbolKind) -> bool {
        self.symbols().any(|s| s.kind == kind)
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &DiffPoly, c: &Rat) {
        for (m, v) in &o.terms {
            self.add_term(m.clone(), v.mul_ref(c));
        }
    }

    /// `self += c · m · o`.
    pub fn add_monomial_multiple(&mut self, o: &DiffPoly, m: &Monomial, c: &Rat) {
        for (k, v) in &o.terms {
            self.add_term(k.mul(m), v.mul_ref(c));
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> DiffPoly {
        DiffPoly { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.mul_ref(c))).collect() }
    }

    /// `∂/∂z_j` (0-based), by the product rule.
    pub fn differentiate(&self, j: usize) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (k, (s, e)) in m.0.iter().enumerate() {
                let mut rest = m.0.clone();
                if *e == 1 {
                    rest.remove(k);
                } else {
                    rest[k].1 -= 1;
                }
                rest.push((s.differentiate(j), 1));
                out.add_term(Monomial::from_unsorted(rest), c.mul_ref(&Rat::from(*e)));
            }
        }
        out
    }

    /// Applies `∂^a`.
    pub fn differentiate_multi(&self, a: &[u32]) -> DiffPoly {
        let mut p = self.clone();
        for (j, &k) in a.iter().enumerate() {
            for _ in 0..k {
                p = p.differentiate(j);
            }
        }
        p
    }

    /// Replaces every symbol for which `f` returns a polynomial.
    pub fn substitute(&self, f: &impl Fn(&DiffSymbol) -> Option<DiffPoly>) -> DiffPoly {
        let mut cache: BTreeMap<(DiffSymbol, u32), DiffPoly> = BTreeMap::new();
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::constant(c.clone());
            let mut kept = Vec::new();
            for (s, e) in &m.0 {
                match f(s) {
                    Some(p) => {
                        let pw = cache.entry((s.clone(), *e)).or_insert_with(|| p.pow_u(*e)).clone();
                        acc = acc.mul_ref(&pw);
                    }
                    None => kept.push((s.clone(), *e)),
                }
            }
            out.add_scaled(&acc.mul_monomial(&Monomial(kept), &Rat::one()), &Rat::one());
        }
        out
    }

    /// Renames symbols; `f` must be injective on the symbols present.
    pub fn rename(&self, f: impl Fn(&DiffSymbol) -> DiffSymbol) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.map_symbols(&f), c.clone());
        }
        out
    }

    /// Applies a permutation of the root indices (`perm[i - 1]` is the image of `i`).
    pub fn permute_roots(&self, perm: &[u32]) -> DiffPoly {
        self.rename(|s| if s.kind == SymbolKind::F { s.with_index(perm[s.index as usize - 1]) } else { s.clone() })
    }

    /// `Σ_{σ ∈ S_n} σ(self)`.
    pub fn symmetrize(&self, n: u32) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for p in permutations(n) {
            out.add_scaled(&self.permute_roots(&p), &Rat::one());
        }
        out
    }

    /// Invariance under the generators `(1 2)` and `(1 2 ... n)` of `S_n`.
    pub fn is_symmetric(&self, n: u32) -> bool {
        if n < 2 {
            return true;
        }
        let swap: Vec<u32> = (1..=n).map(|i| if i == 1 { 2 } else if i == 2 { 1 } else { i }).collect();
        let cycle: Vec<u32> = (1..=n).map(|i| i % n + 1).collect();
        self.permute_roots(&swap) == *self && self.permute_roots(&cycle) == *self
    }

    pub fn max_root_index(&self) -> u32 {
        self.symbols().filter(|s| s.kind != SymbolKind::Y).map(|s| s.index).max().unwrap_or(0)
    }

    /// Evaluates with the values supplied by `value`; `None` if some symbol has none.
    pub fn eval(&self, value: &impl Fn(&DiffSymbol) -> Option<Rat>) -> Option<Rat> {
        let mut memo: BTreeMap<&DiffSymbol, Rat> = BTreeMap::new();
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (s, e) in &m.0 {
                let v = match memo.get(s) {
                    Some(v) => v,
                    None => memo.entry(s).or_insert(value(s)?),
                };
                t = t * v.pow_u(*e);
            }
            acc = acc + t;
        }
        Some(acc)
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &DiffPoly) -> Option<DiffPoly> {
        let (lm, lc) = d.leading()?;
        let mut rem = self.clone();
        let mut q = DiffPoly::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(lm)?;
            let qc = c / lc;
            rem.add_monomial_multiple(d, &qm, &-qc.clone());
            q.add_term(qm, qc);
        }
        Some(q)
    }
}

impl Ring for DiffPoly {
    fn zero() -> Self {
        DiffPoly::default()
    }
    fn one() -> Self {
        DiffPoly::constant(Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &Rat::one());
        out
    }
    fn sub_ref(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &-Rat::one());
        out
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let (small, large) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        let mut out = DiffPoly::zero();
        for (m, c) in &small.terms {
            for (k, v) in &large.terms {
                out.add_term(m.mul(k), c.mul_ref(v));
            }
        }
        out
    }
    fn neg_ref(&self) -> Self {
        DiffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
    fn from_rat(r: &Rat) -> Self {
        DiffPoly::constant(r.clone())
    }
    fn inv_opt(&self) -> Option<Self> {
        match self.terms.len() {
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                (m.is_one()).then(|| DiffPoly::constant(c.recip()))
            }
            _ => None,
        }
    }
}

crate::kernel::ring::impl_ring_ops!([] DiffPoly);

impl std::ops::AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, o: &DiffPoly) {
        self.add_scaled(o, &Rat::one());
    }
}

impl std::ops::SubAssign<&DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, o: &DiffPoly) {
        self.add_scaled(o, &-Rat::one());
    }
}

impl fmt::Display for DiffPoly {
    /// Terms in decreasing monomial order, `0` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

/// `numerator / Δ^disc_power` with the numerator in `s`-symbols only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedExpr {
    pub numerator: DiffPoly,
    pub disc_power: u32,
}

impl fmt::Display for LocalizedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.disc_power {
            0 => write!(f, "{}", self.numerator),
            1 => write!(f, "({})/Delta", self.numerator),
            k => write!(f, "({})/Delta^{k}", self.numerator),
        }
    }
}

/// All permutations of `1..=n` as image vectors.
pub fn permutations(n: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for k in 1..=n {
        let mut next = Vec::with_capacity(out.len() * k as usize);
        for p in &out {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out
}
