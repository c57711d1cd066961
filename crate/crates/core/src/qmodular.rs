//! The `u`-side of the theory: expansions of the cotangent basis
//! `c_r(q) = ((-q)^r + 1) / ((-q)^r - 1)` under `-q = e^{iu}`, the double
//! series `B(u, Q)`, and the trace identity relating them.
//!
//! Under `-q = e^{iu}` one has `c_r = -i cot(ru/2)`, so `(-ir/2) c_r` is the
//! real series `-(r/2) cot(ru/2)`. No complex numbers are ever formed: all
//! expansions go through this basis.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::combinatorics::{bernoulli, bernoulli_weight, partition_series, partitions, sigma};
use crate::kernel::{Poly, QFunc, Rat, Ring, TruncSeries, ULaurent, Var};

/// `constant + Σ_r coeff_r c_r(q)` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Default, Serialize)]
pub struct CotBasisExpr {
    pub constant: Rat,
    pub coeffs: BTreeMap<u32, Rat>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QModularError {
    #[error("cotangent index must be positive")]
    ZeroIndex,
    #[error("a nonzero constant {0} has no real expansion under -q = e^(iu)")]
    ImaginaryConstant(Rat),
}

impl CotBasisExpr {
    pub fn add_term(&mut self, r: u32, c: &Rat) {
        let e = self.coeffs.entry(r).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&r);
        }
    }

    /// `Tr_n` written in the cotangent basis.
    pub fn trace(n: u32) -> CotBasisExpr {
        let mut e = CotBasisExpr::default();
        for mu in partitions(n) {
            for &p in mu.parts() {
                e.add_term(p, &Rat::new(p * p, 2));
                e.add_term(1, &Rat::new(-(p as i64), 2));
            }
        }
        e
    }

    /// The rational function of `q` this expression denotes.
    pub fn to_qfunc(&self) -> QFunc {
        let mut acc = QFunc::from_rat(&self.constant);
        for (&r, c) in &self.coeffs {
            let (num, den) = crate::kernel::mode::cot_parts(r);
            acc = acc + QFunc::new(Poly::from_coeffs(num), Poly::from_coeffs(den)).scale_rat(c);
        }
        acc
    }

    /// Expansion of `(-i)` times this expression in `u`.
    pub fn u_expansion(&self, u_order: i32) -> Result<BTreeMap<i32, Rat>, QModularError> {
        if !self.constant.is_zero() {
            return Err(QModularError::ImaginaryConstant(self.constant.clone()));
        }
        let mut out: BTreeMap<i32, Rat> = BTreeMap::new();
        for (&r, c) in &self.coeffs {
            // (-i) c_r = (2/r) (-ir/2) c_r
            let w = c * &Rat::new(2, r);
            for (k, v) in cot_coeffs(r, u_order)? {
                *out.entry(k).or_insert_with(Rat::zero) += &(&w * &v);
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

impl fmt::Display for CotBasisExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (r, c) in &self.coeffs {
            write!(f, " + ({c})*c{r}")?;
        }
        Ok(())
    }
}

/// Coefficients of `-(r/2) cot(ru/2) = -1/u + Σ_{h ≥ 1} |B_{2h}| r^{2h} / (2h)! u^{2h-1}`
/// up to `u^{u_order}`.
pub fn cot_coeffs(r: u32, u_order: i32) -> Result<BTreeMap<i32, Rat>, QModularError> {
    if r == 0 {
        return Err(QModularError::ZeroIndex);
    }
    let mut out = BTreeMap::new();
    if u_order >= -1 {
        out.insert(-1, -Rat::one());
    }
    let rr = Rat::from(r as i64);
    let mut fact = Rat::one();
    for h in 1.. {
        let k = 2 * h - 1;
        if k > u_order {
            break;
        }
        fact = fact * Rat::from((2 * h - 1) as i64) * Rat::from((2 * h) as i64);
        let v = bernoulli(2 * h as usize).abs() * rr.pow_u(2 * h as u32) / fact.clone();
        out.insert(k, v);
    }
    Ok(out)
}

/// `(-ir/2) c_r(q)` expanded in `u` to `u^{u_order}`; coefficients are constant in `Q`.
pub fn cot_expansion(r: u32, u_order: i32) -> Result<ULaurent, QModularError> {
    let terms = cot_coeffs(r, u_order)?;
    Ok(ULaurent::from_terms(
        -1,
        u_order,
        0,
        terms.into_iter().map(|(k, v)| (k, TruncSeries::new(Var::Q, 0, vec![v]))),
    ))
}

/// `B(u, Q) = Σ_{g ≥ 1} Σ_{m ≥ 1} |B_{2g-2}| / (2g-2)! (σ_{2g-1}(m) - σ_1(m)) Q^m u^{2g-3}`.
pub fn bseries(u_order: i32, q_order: usize) -> ULaurent {
    let mut out = ULaurent::zero(-1, u_order, q_order);
    for g in 1u32.. {
        let k = 2 * g as i32 - 3;
        if k > u_order {
            break;
        }
        let w = bernoulli_weight(g);
        let s = TruncSeries::from_fn(Var::Q, q_order, |m| {
            if m == 0 {
                Rat::zero()
            } else {
                &w * &(sigma(2 * g as i32 - 1, m as u64) - sigma(1, m as u64))
            }
        });
        out.add_at(k, &s);
    }
    out
}

/// `(-i) Tr_n(q)` expanded in `u`.
pub fn trace_u_expansion(n: u32, u_order: i32) -> Result<ULaurent, QModularError> {
    let terms = CotBasisExpr::trace(n).u_expansion(u_order)?;
    Ok(ULaurent::from_terms(
        -1,
        u_order,
        0,
        terms.into_iter().map(|(k, v)| (k, TruncSeries::new(Var::Q, 0, vec![v]))),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientMismatch {
    pub u_exponent: i32,
    pub q_exponent: usize,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl fmt::Display for CoefficientMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u^{} Q^{}: {} vs {}", self.u_exponent, self.q_exponent, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub n_max: u32,
    pub u_order: i32,
    pub coefficients_compared: usize,
    pub nonzero_coefficients: usize,
}

/// Both sides of `(-i) Σ_{m ≥ 1} Tr_m(q) Q^m = P(Q) B(u, Q)`, to `Q^{n_max}`.
pub fn lemma_trace_sides(n_max: u32, u_order: i32) -> Result<(ULaurent, ULaurent), QModularError> {
    let q_order = n_max as usize;
    let mut lhs = ULaurent::zero(-1, u_order, q_order);
    for m in 1..=n_max {
        for (k, v) in CotBasisExpr::trace(m).u_expansion(u_order)? {
            let mut c = vec![Rat::zero(); m as usize + 1];
            c[m as usize] = v;
            lhs.add_at(k, &TruncSeries::new(Var::Q, q_order, c));
        }
    }
    let rhs = bseries(u_order, q_order).mul_q_series(&partition_series(q_order));
    Ok((lhs, rhs))
}

/// Checks the trace identity coefficientwise; the error carries the first
/// `(u, Q)` pair that disagrees.
pub fn lemma_trace_check(n_max: u32, u_order: i32) -> Result<LemmaReport, CoefficientMismatch> {
    let (lhs, rhs) = lemma_trace_sides(n_max, u_order).expect("traces have no constant term");
    if let Some((k, m)) = lhs.first_mismatch(&rhs) {
        return Err(CoefficientMismatch {
            u_exponent: k,
            q_exponent: m,
            lhs: lhs.coeff2(k, m).unwrap_or_else(Rat::zero),
            rhs: rhs.coeff2(k, m).unwrap_or_else(Rat::zero),
        });
    }
    let rows = (u_order + 2).max(0) as usize;
    Ok(LemmaReport {
        n_max,
        u_order,
        coefficients_compared: rows * (n_max as usize + 1),
        nonzero_coefficients: lhs.nonzero_terms().len(),
    })
}
