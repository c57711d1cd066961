//! Genus-1 series of `Hilb^n(C^2)` and the family/Hodge identities around them.
//!
//! The central object is
//!
//! ```text
//! ⟨D⟩_1 = -(1/24) (t1+t2)^2/(t1 t2) · ( Tr_n + Σ_{k=2}^{n-1} σ_{-1}(n-k) Tr_k ),
//! ```
//!
//! evaluated exactly in any [`Mode`]; the bracketed factor is available on its
//! own as [`d_bracket`]. The one-point table for `n ≤ 5` lives in [`table`].

pub mod expr;
pub mod table;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::combinatorics::{
    bernoulli, bernoulli_weight, ecal2, ecal3, eisenstein, log_partition_series, partition_series, ptilde_series,
    sigma, Partition,
};
use crate::hilb::{trn_in, HilbError};
use crate::kernel::{
    Frac, GcdDomain, Mode, QFunc, Rat, RatFunc, Ring, SeriesError, Symbolic, TFunc, TruncSeries, Var,
};
use crate::qmodular::{bseries, CoefficientMismatch, CotBasisExpr};

pub use table::{Section5Entry, Section5Table, TableError, TableIssue, TraceCache, TraceTerm};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Genus1Error {
    #[error("no table entry for {0}")]
    UnknownEntry(Partition),
    #[error("the chosen specialization of t1, t2 is a pole")]
    Pole,
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Hilb(#[from] HilbError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Where a genus-1 value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesSource {
    Theorem1,
    Table,
    TraceCombo,
}

impl fmt::Display for SeriesSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesSource::Theorem1 => "theorem1",
            SeriesSource::Table => "table",
            SeriesSource::TraceCombo => "trace-combo",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Genus1Series<S = RatFunc> {
    pub n: u32,
    pub mu: Partition,
    pub value: S,
    pub source: SeriesSource,
}

/// `-(1/24) (t1+t2)^2 / (t1 t2)`.
pub fn d_prefactor() -> RatFunc {
    let s = RatFunc::t1() + RatFunc::t2();
    (&s * &s / (RatFunc::t1() * RatFunc::t2())).scale_rat(&Rat::new(-1, 24))
}

fn bracket_weight(n: u32, k: u32) -> Rat {
    if k == n {
        Rat::one()
    } else {
        sigma(-1, (n - k) as u64)
    }
}

/// `Tr_n + Σ_{k=2}^{n-1} σ_{-1}(n-k) Tr_k`, a function of `q` alone.
pub fn d_bracket(n: u32) -> QFunc {
    (2..=n).fold(QFunc::zero(), |acc, k| acc + CotBasisExpr::trace(k).to_qfunc().scale_rat(&bracket_weight(n, k)))
}

/// `⟨D⟩_1` for `Hilb^n`, fully symbolic. Zero for `n ≤ 1`.
pub fn d_series(n: u32) -> RatFunc {
    d_prefactor() * RatFunc::from_qfunc(&d_bracket(n))
}

/// `⟨D⟩_1` in an arbitrary mode, assembled from the mode's own `Tr_k`.
pub fn d_series_in<M: Mode>(mode: &M, n: u32) -> Result<M::S, Genus1Error> {
    let pre = mode.lift(&d_prefactor()).ok_or(Genus1Error::Pole)?;
    let b = (2..=n).fold(M::S::zero(), |acc, k| acc.add_ref(&trn_in(mode, k).scale_rat(&bracket_weight(n, k))));
    Ok(pre.mul_ref(&b))
}

/// `q`-expansion of [`d_bracket`] through `q^order`.
pub fn d_series_qexp(n: u32, order: usize) -> Result<TruncSeries<Rat>, Genus1Error> {
    Ok(d_bracket(n).q_expand(order)?.with_var(Var::LowerQ))
}

/// `⟨1^n⟩_1 = coefficient · (-(1/24)(t1+t2)/(t1 t2))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OnesSeries {
    pub n: u32,
    pub coefficient: Rat,
}

impl OnesSeries {
    pub fn prefactor() -> RatFunc {
        ((RatFunc::t1() + RatFunc::t2()) / (RatFunc::t1() * RatFunc::t2())).scale_rat(&Rat::new(-1, 24))
    }

    pub fn value(&self) -> RatFunc {
        Self::prefactor().scale_rat(&self.coefficient)
    }
}

/// `Coeff_{Q^n}[P log P]` with the prefactor kept apart.
pub fn ones_series(n: u32) -> OnesSeries {
    let c = ptilde_series(n as usize).coeff(n as usize).expect("within order");
    OnesSeries { n, coefficient: c }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Degree0Report {
    pub q_order: usize,
    /// `⟨1⟩` at `m = 0` equals the partition series.
    pub m0_is_partition_series: bool,
    /// The `q = 0` value of every `⟨D⟩_1`, `n ≤ q_order`, equals `-1/24` times
    /// the `Q^n` coefficient of the right side.
    pub theorem1_at_q0: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Degree0Mismatch {
    pub q_exponent: usize,
    pub lhs: TFunc,
    pub rhs: TFunc,
}

impl fmt::Display for Degree0Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q^{}: {} vs {}", self.q_exponent, self.lhs, self.rhs)
    }
}

/// Series in `m` truncated after `m^1`, with coefficients in `t1, t2`.
type MLinear = TruncSeries<TFunc>;

fn m_linear(a: TFunc, b: TFunc) -> MLinear {
    TruncSeries::new(Var::Any, 1, vec![a, b])
}

/// The `m^1` coefficient of `⟨c_1(O/I)⟩ = ⟨1⟩ · (1/2)(E2 - E3) · (t1+t2)(t1+m)(t2+m)/(t1 t2)`
/// with `⟨1⟩ = Π (1-Q^n)^{m(-t1-t2-m)/(t1 t2) - 1}`, against
/// `(t1+t2)^2/(t1 t2) (1 + log P) · (1/2) P (E2 - E3)`, to `Q^{q_order}`.
///
/// Only `m^0` and `m^1` are carried, which is exact for both.
pub fn degree0_identity_check(q_order: usize) -> Result<Degree0Report, Degree0Mismatch> {
    let t1 = TFunc::t1();
    let t2 = TFunc::t2();
    let s = &t1 + &t2;
    let tt = &t1 * &t2;
    let lift = |x: &TruncSeries<Rat>| x.map(|c| MLinear::from_rat(c)).with_var(Var::Q);
    let half_e = ecal2(q_order).sub_ref(&ecal3(q_order)).scale(&Rat::new(1, 2));

    // Σ_n log(1 - Q^n) = -log P
    let exponent = m_linear(-TFunc::one(), -(&s / &tt));
    let ones = lift(&log_partition_series(q_order)).scale(&-exponent).exp().expect("no constant term");
    // (t1+t2)(t1+m)(t2+m)/(t1 t2) = s + m s^2/(t1 t2) + O(m^2)
    let frame = m_linear(s.clone(), &(&s * &s) / &tt);
    let lhs = ones.mul_ref(&lift(&half_e)).scale(&frame);

    let pre = &(&s * &s) / &tt;
    let one_plus_log = log_partition_series(q_order).add_ref(&TruncSeries::one_to(Var::Q, q_order));
    let rhs_rat = one_plus_log.mul_ref(&partition_series(q_order)).mul_ref(&half_e);
    let rhs = rhs_rat.map(|c| pre.scale_rat(c));

    let mut m0_ok = true;
    let p = partition_series(q_order);
    for k in 0..=q_order {
        let c = lhs.coeff(k).expect("within order");
        let m0 = ones.coeff(k).expect("within order").coeff(0).expect("m^0");
        m0_ok &= m0 == TFunc::from_rat(&p.coeff(k).expect("within order"));
        let l = c.coeff(1).expect("m^1");
        let r = rhs.coeff(k).expect("within order");
        if l != r {
            return Err(Degree0Mismatch { q_exponent: k, lhs: l, rhs: r });
        }
    }

    let theorem1_at_q0 = (1..=q_order as u32).all(|n| {
        let at0 = d_bracket(n).eval(&Rat::zero()).expect("regular at q = 0");
        at0 == rhs_rat.coeff(n as usize).expect("within order")
    });
    Ok(Degree0Report { q_order, m0_is_partition_series: m0_ok, theorem1_at_q0 })
}

/// `(-1)^g/24 · |B_{2g}|/(4g) · |B_{2g-2}|/(2g-2)! · E_{2g}(Q)`; at `g = 1` this is `-E_2/576`.
pub fn hodge_family_series(g: u32, order: usize) -> TruncSeries<Rat> {
    assert!(g >= 1, "genus must be positive");
    let sign = if g % 2 == 0 { Rat::one() } else { -Rat::one() };
    let c = sign * bernoulli(2 * g as usize).abs() / Rat::from(96 * g as i64) * bernoulli_weight(g);
    eisenstein(g, order).scale(&c)
}

/// `|B_{2g-2}| σ_{2g-1}(n) / (2g-2)!`.
pub fn fixed_elliptic_integral(g: u32, n: u64) -> Rat {
    assert!(g >= 2 && n >= 1);
    bernoulli_weight(g) * sigma(2 * g as i32 - 1, n)
}

fn factorial(n: u64) -> Rat {
    (1..=n).fold(Rat::one(), |a, k| a * Rat::from(k))
}

fn double_factorial_odd(k: u64) -> Rat {
    // (2k+1)!!
    (0..=k).fold(Rat::one(), |a, j| a * Rat::from(2 * j + 1))
}

fn check_dimension(g: u32, ks: &[u32]) -> Result<(), Genus1Error> {
    if g < 2 {
        return Err(Genus1Error::Domain(format!("genus {g} < 2")));
    }
    if ks.is_empty() {
        return Err(Genus1Error::Domain("at least one marking is required".into()));
    }
    let sum: u32 = ks.iter().sum();
    if sum != g - 1 {
        return Err(Genus1Error::Domain(format!("Σ k_i = {sum}, must equal g - 1 = {}", g - 1)));
    }
    Ok(())
}

/// `∫_{M̄_{g,r}} Π_j ψ_j^{k_j + 1 - δ_ij} λ_g λ_{g-1}` from the closed form
/// `|B_{2g}| / (2^{2g-1} (2g)!) · (2g+r-3)! (2k_i+1) / Π (2k_j+1)!!`; `i` is 1-based.
pub fn psi_lambda_integral(g: u32, ks: &[u32], i: usize) -> Result<Rat, Genus1Error> {
    check_dimension(g, ks)?;
    if i == 0 || i > ks.len() {
        return Err(Genus1Error::Domain(format!("marking {i} out of range 1..={}", ks.len())));
    }
    let r = ks.len() as u64;
    let g64 = g as u64;
    let pre = bernoulli(2 * g as usize).abs() / (Rat::from(2u64).pow_u(2 * g - 1) * factorial(2 * g64));
    let den = ks.iter().fold(Rat::one(), |a, &k| a * double_factorial_odd(k as u64));
    Ok(pre * factorial(2 * g64 + r - 3) * Rat::from(2 * ks[i - 1] as u64 + 1) / den)
}

/// The constant `C` and the series `C (-1)^g/24 |B_{2g}|/(4g) (Q d/dQ)^{m-1} E_{2g}(Q)`
/// for `m` point insertions among `r = ks.len()` markings, `Σ k_i = g - 1`.
pub fn hodge_general_series(g: u32, m: usize, ks: &[u32], order: usize) -> Result<(Rat, TruncSeries<Rat>), Genus1Error> {
    check_dimension(g, ks)?;
    if m == 0 || m > ks.len() {
        return Err(Genus1Error::Domain(format!("need 1 ≤ m ≤ r, got m = {m}, r = {}", ks.len())));
    }
    let r = ks.len() as u64;
    let g64 = g as u64;
    let num = factorial(2 * g64 + r - 3) * ks[..m].iter().fold(Rat::zero(), |a, &k| a + Rat::from(2 * k as u64 + 1));
    let den = Rat::from(2u64).pow_u(2 * g - 2)
        * factorial(2 * g64 + m as u64 - 2)
        * ks.iter().fold(Rat::one(), |a, &k| a * double_factorial_odd(k as u64));
    let c = num / den;
    let sign = if g % 2 == 0 { Rat::one() } else { -Rat::one() };
    let w = &c * &sign * bernoulli(2 * g as usize).abs() / Rat::from(96 * g as i64);
    let mut e = eisenstein(g, order);
    for _ in 1..m {
        e = e.theta();
    }
    Ok((c, e.scale(&w)))
}

/// `⟨μ⟩_1` from the table, fully symbolic. Trace combinations with `n = 5`
/// are expensive in this mode; prefer [`table_eval_in`] with a specialization.
pub fn table_eval(mu: &Partition) -> Result<Genus1Series, Genus1Error> {
    table_eval_in(&mut TraceCache::new(Symbolic), mu)
}

/// `⟨μ⟩_1` from the table in the cache's mode.
pub fn table_eval_in<D: GcdDomain, M: Mode<S = Frac<D>>>(
    cache: &mut TraceCache<D, M>,
    mu: &Partition,
) -> Result<Genus1Series<Frac<D>>, Genus1Error> {
    let e = Section5Table::builtin().get(mu).ok_or_else(|| Genus1Error::UnknownEntry(mu.clone()))?;
    let (value, source) = if e.is_trace_combination() {
        (table::eval_combination(e, cache)?.ok_or(Genus1Error::Pole)?, SeriesSource::TraceCombo)
    } else {
        let c = e.closed.as_ref().expect("closed record");
        (cache.mode().lift(c).ok_or(Genus1Error::Pole)?, SeriesSource::Table)
    };
    Ok(Genus1Series { n: e.n(), mu: mu.clone(), value, source })
}

/// The displayed closed form of a record, lifted to the cache's mode.
pub fn table_display_in<D: GcdDomain, M: Mode<S = Frac<D>>>(
    cache: &TraceCache<D, M>,
    mu: &Partition,
) -> Result<Option<Frac<D>>, Genus1Error> {
    let e = Section5Table::builtin().get(mu).ok_or_else(|| Genus1Error::UnknownEntry(mu.clone()))?;
    e.closed.as_ref().map(|c| cache.mode().lift(c).ok_or(Genus1Error::Pole)).transpose()
}

/// `⟨(2,1^{n-2})⟩_1 = -⟨D⟩_1`, the table side read in the cache's mode.
pub fn theorem1_consistency_in<D: GcdDomain, M: Mode<S = Frac<D>>>(
    cache: &mut TraceCache<D, M>,
    n: u32,
) -> Result<bool, Genus1Error> {
    let hook = Partition::hook(n);
    let t = table_eval_in(cache, &hook)?.value;
    let d = d_series_in(cache.mode(), n)?;
    Ok(t == -d)
}

/// [`theorem1_consistency_in`] in symbolic mode.
pub fn theorem1_consistency(n: u32) -> Result<bool, Genus1Error> {
    theorem1_consistency_in(&mut TraceCache::new(Symbolic), n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExxxReport {
    pub n_max: u32,
    pub columns_checked: u32,
}

/// `Σ_n ⟨D⟩_1 Q^n = -(1/24)(t1+t2)^2/(t1 t2) (1 + Σ σ_{-1}(n) Q^n)(Σ Tr_n Q^n)`
/// coefficientwise for `n ≤ n_max`. The error is the first failing `n`.
pub fn exxx_check(n_max: u32) -> Result<ExxxReport, u32> {
    let order = n_max as usize;
    let sig = TruncSeries::from_fn(Var::Q, order, |n| if n == 0 { QFunc::one() } else { QFunc::from_rat(&sigma(-1, n as u64)) });
    let trs = TruncSeries::from_fn(Var::Q, order, |n| CotBasisExpr::trace(n as u32).to_qfunc());
    let prod = sig.mul_ref(&trs);
    let pre = d_prefactor();
    for n in 0..=n_max {
        let rhs = &pre * &RatFunc::from_qfunc(&prod.coeff(n as usize).expect("within order"));
        if d_series(n) != rhs {
            return Err(n);
        }
    }
    Ok(ExxxReport { n_max, columns_checked: n_max + 1 })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XcceTable {
    pub g_max: u32,
    pub n_max: u32,
    /// `(g, n) ↦ ⟨λ_{g-2} λ_g | (2,1^{n-2})⟩_{g,n}`.
    pub values: BTreeMap<(u32, u32), Rat>,
}

/// Hodge-family coefficient minus `σ_1(n)/24 · |B_{2g-2}|/(2g-2)!`, checked
/// against `(1/24) B(u, Q)` coefficientwise.
pub fn xcce_series(g_max: u32, n_max: u32) -> Result<XcceTable, CoefficientMismatch> {
    assert!(g_max >= 1);
    let order = n_max as usize;
    let mut values = BTreeMap::new();
    let b = bseries(2 * g_max as i32 - 3, order);
    for g in 1..=g_max {
        let h = hodge_family_series(g, order);
        let w = bernoulli_weight(g);
        for n in 1..=n_max {
            let v = h.coeff(n as usize).expect("within order") - sigma(1, n as u64) * w.clone() / Rat::from(24);
            let k = 2 * g as i32 - 3;
            let want = b.coeff2(k, n as usize).unwrap_or_else(Rat::zero) / Rat::from(24);
            if v != want {
                return Err(CoefficientMismatch { u_exponent: k, q_exponent: n as usize, lhs: v, rhs: want });
            }
            values.insert((g, n), v);
        }
    }
    Ok(XcceTable { g_max, n_max, values })
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The coefficient of `λ_{g-1}` in the tautological projection of `[NL_{g,n}]`:
/// `n^{2g-1} g / (6|B_{2g}|) Π_{p | n} (1 - p^{2-2g})`.
///
/// At `g = 1` every prime factor contributes `1 - p^0 = 0`, leaving `1` at
/// `n = 1` and `0` otherwise, which is what makes the generating identity
/// hold in that degenerate genus as well.
pub fn nl_coefficient(g: u32, n: u64) -> Rat {
    assert!(g >= 1 && n >= 1);
    let mut v = Rat::from(n).pow_u(2 * g - 1) * Rat::from(g as i64) / (Rat::from(6) * bernoulli(2 * g as usize).abs());
    for p in prime_divisors(n) {
        v *= &(Rat::one() - Rat::from(p).pow_u(2 * g - 2).inv_opt().expect("p > 0"));
    }
    v
}

/// `Σ_{n' | n} σ_1(n/n') · nl_coefficient(g, n')`.
pub fn nl_tilde_coefficient(g: u32, n: u64) -> Rat {
    (1..=n).filter(|d| n % d == 0).map(|d| sigma(1, n / d) * nl_coefficient(g, d)).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NlMismatch {
    pub n: u64,
    pub lhs: Rat,
    pub rhs: Rat,
}

/// `(-1)^g/24 + Σ_n nl_tilde_coefficient(g, n) Q^n = (-1)^g/24 · E_{2g}(Q)` through `Q^{n_max}`.
pub fn nl_projection_check(g: u32, n_max: u64) -> Result<(), NlMismatch> {
    let sign = if g % 2 == 0 { Rat::one() } else { -Rat::one() };
    let e = eisenstein(g, n_max as usize).scale(&(sign.clone() / Rat::from(24)));
    let c0 = e.coeff(0).expect("constant term");
    if c0 != &sign / &Rat::from(24) {
        return Err(NlMismatch { n: 0, lhs: sign / Rat::from(24), rhs: c0 });
    }
    for n in 1..=n_max {
        let lhs = nl_tilde_coefficient(g, n);
        let rhs = e.coeff(n as usize).expect("within order");
        if lhs != rhs {
            return Err(NlMismatch { n, lhs, rhs });
        }
    }
    Ok(())
}
