//! The shipped table of genus-1 one-point series for `n ≤ 5`.
//!
//! Each record is either a closed rational function of `t1, t2, q` or a
//! linear combination of trace monomials `Tr_m^ν` and `Tr_2^{(2)} Tr_m^ν` with
//! coefficients in `t1, t2` only. The on-disk grammar is documented at the
//! top of `data/section5.tbl`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use super::expr::{parse_ratfunc, ExprError};
use crate::combinatorics::{Partition, PartitionError};
use crate::hilb::{HilbError, QuantumRing};
use crate::kernel::{Frac, GcdDomain, Mode, RatFunc, Ring, TPoly};

const BUILTIN: &str = include_str!("../../data/section5.tbl");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Expr { line: usize, source: ExprError },
    #[error("line {line}: {source}")]
    Partition { line: usize, source: PartitionError },
    #[error("duplicate entry {0}")]
    Duplicate(Partition),
    #[error("entry {0} has neither a closed form nor trace terms")]
    Empty(Partition),
    #[error("unterminated entry {0}")]
    Unterminated(Partition),
}

/// One monomial `coeff · Π Tr^ν` of a trace combination.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceTerm {
    pub factors: Vec<Partition>,
    pub coeff: RatFunc,
}

impl fmt::Display for TraceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coeff)?;
        for nu in &self.factors {
            write!(f, "*Tr_{}^{}", nu.size(), nu)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Section5Entry {
    pub mu: Partition,
    /// Closed form; for trace records this is the displayed value, if any.
    pub closed: Option<RatFunc>,
    pub constant: RatFunc,
    pub terms: Vec<TraceTerm>,
    pub line: usize,
}

impl Section5Entry {
    pub fn n(&self) -> u32 {
        self.mu.size()
    }

    pub fn is_trace_combination(&self) -> bool {
        !self.terms.is_empty()
    }
}

/// A property a record fails to satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableIssue {
    pub mu: String,
    pub line: usize,
    pub what: String,
}

impl fmt::Display for TableIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (line {}): {}", self.mu, self.line, self.what)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Section5Table {
    pub version: u32,
    entries: BTreeMap<Partition, Section5Entry>,
}

fn parse_monomial(s: &str, line: usize) -> Result<Vec<Partition>, TableError> {
    s.split('*')
        .map(|f| {
            let f = f.trim();
            let inner = f
                .strip_prefix("Tr")
                .map(str::trim)
                .ok_or_else(|| TableError::Syntax { line, msg: format!("expected Tr(..), found {f:?}") })?;
            inner.parse().map_err(|source| TableError::Partition { line, source })
        })
        .collect()
}

impl Section5Table {
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut version = 0;
        let mut entries = BTreeMap::new();
        let mut cur: Option<Section5Entry> = None;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            let rest = rest.trim();
            let expr = |s: &str| parse_ratfunc(s).map_err(|source| TableError::Expr { line, source });
            let syntax = |msg: &str| TableError::Syntax { line, msg: msg.to_string() };
            match (head, cur.as_mut()) {
                ("version", None) => version = rest.parse().map_err(|_| syntax("bad version"))?,
                ("entry", None) => {
                    let mu: Partition = rest.parse().map_err(|source| TableError::Partition { line, source })?;
                    cur = Some(Section5Entry { mu, closed: None, constant: RatFunc::zero(), terms: Vec::new(), line });
                }
                ("closed", Some(e)) => e.closed = Some(expr(rest)?),
                ("const", Some(e)) => e.constant = expr(rest)?,
                ("term", Some(e)) => {
                    let (mono, coeff) = rest.split_once(':').ok_or_else(|| syntax("expected 'term <monomial> : <expr>'"))?;
                    e.terms.push(TraceTerm { factors: parse_monomial(mono, line)?, coeff: expr(coeff)? });
                }
                ("end", Some(_)) => {
                    let e = cur.take().expect("open entry");
                    if e.closed.is_none() && e.terms.is_empty() {
                        return Err(TableError::Empty(e.mu));
                    }
                    if entries.contains_key(&e.mu) {
                        return Err(TableError::Duplicate(e.mu));
                    }
                    entries.insert(e.mu.clone(), e);
                }
                (_, None) => return Err(syntax(&format!("{head:?} outside an entry"))),
                (_, Some(_)) => return Err(syntax(&format!("{head:?} inside an entry"))),
            }
        }
        if let Some(e) = cur {
            return Err(TableError::Unterminated(e.mu));
        }
        Ok(Section5Table { version, entries })
    }

    /// The table shipped with the crate, parsed once.
    pub fn builtin() -> &'static Section5Table {
        static T: OnceLock<Section5Table> = OnceLock::new();
        T.get_or_init(|| Section5Table::parse(BUILTIN).expect("shipped table parses"))
    }

    pub fn get(&self, mu: &Partition) -> Option<&Section5Entry> {
        self.entries.get(mu)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Section5Entry> {
        self.entries.values()
    }

    /// Structural checks on every record: equivariant degree `n - ℓ(μ) - 1`,
    /// `t1 ↔ t2` symmetry, `q`-free coefficients, trace sizes at most `n`,
    /// and closed forms regular at `q = 0`.
    pub fn validate(&self) -> Vec<TableIssue> {
        let mut out = Vec::new();
        for e in self.entries.values() {
            let mut issue = |what: String| out.push(TableIssue { mu: e.mu.to_string(), line: e.line, what });
            let want = e.n() as i64 - e.mu.len() as i64 - 1;
            if let Some(c) = &e.closed {
                if !c.is_zero() && c.t_degree() != Some(want) {
                    issue(format!("closed form has degree {:?}, expected {want}", c.t_degree()));
                }
                if c.swap_t() != *c {
                    issue("closed form is not symmetric in t1, t2".into());
                }
                if c.den().coeffs().first().is_none_or(|d: &TPoly| d.is_zero()) {
                    issue("closed form has a pole at q = 0".into());
                }
            }
            let check_coeff = |what: &str, c: &RatFunc, trace_degree: i64, issue: &mut dyn FnMut(String)| {
                if c.is_zero() {
                    return;
                }
                if c.as_tfunc().is_none() {
                    issue(format!("{what} depends on q"));
                }
                if c.t_degree().map(|d| d + trace_degree) != Some(want) {
                    issue(format!("{what} has degree {:?}, expected {}", c.t_degree(), want - trace_degree));
                }
                if c.swap_t() != *c {
                    issue(format!("{what} is not symmetric in t1, t2"));
                }
            };
            check_coeff("constant", &e.constant, 0, &mut issue);
            for t in &e.terms {
                let deg: i64 = t.factors.iter().map(|nu| nu.size() as i64 - nu.len() as i64).sum();
                if t.factors.iter().any(|nu| nu.size() > e.n() || nu.is_empty()) {
                    issue(format!("term {t} has a trace of the wrong size"));
                }
                check_coeff(&format!("coefficient of {t}"), &t.coeff, deg, &mut issue);
            }
        }
        out
    }
}

/// Traces `Tr_m^ν` in one coefficient mode, one quantum ring per `m`.
pub struct TraceCache<D: GcdDomain, M: Mode<S = Frac<D>>> {
    mode: M,
    rings: BTreeMap<u32, QuantumRing<D>>,
    traces: BTreeMap<Partition, Frac<D>>,
}

impl<D: GcdDomain, M: Mode<S = Frac<D>>> TraceCache<D, M> {
    pub fn new(mode: M) -> Self {
        TraceCache { mode, rings: BTreeMap::new(), traces: BTreeMap::new() }
    }

    pub fn mode(&self) -> &M {
        &self.mode
    }

    pub fn trace(&mut self, nu: &Partition) -> Result<Frac<D>, HilbError> {
        if let Some(v) = self.traces.get(nu) {
            return Ok(v.clone());
        }
        let m = nu.size();
        if !self.rings.contains_key(&m) {
            self.rings.insert(m, QuantumRing::new(&self.mode, m)?);
        }
        let v = self.rings[&m].trmu(nu)?;
        self.traces.insert(nu.clone(), v.clone());
        Ok(v)
    }
}

/// Evaluates a trace combination; `None` when a coefficient has a pole at
/// the chosen specialization.
pub(crate) fn eval_combination<D: GcdDomain, M: Mode<S = Frac<D>>>(
    e: &Section5Entry,
    cache: &mut TraceCache<D, M>,
) -> Result<Option<Frac<D>>, HilbError> {
    let Some(mut acc) = cache.mode().lift(&e.constant) else {
        return Ok(None);
    };
    for t in &e.terms {
        let Some(mut v) = cache.mode().lift(&t.coeff) else {
            return Ok(None);
        };
        for nu in &t.factors {
            v = v.mul_ref(&cache.trace(nu)?);
        }
        acc = acc.add_ref(&v);
    }
    Ok(Some(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses() {
        let t = Section5Table::builtin();
        assert_eq!(t.version, 1);
        assert_eq!(t.entries().count(), 2 + 3 + 5 + 7);
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let e = Section5Table::parse("entry (2)\n  closed q +\nend\n").unwrap_err();
        assert!(matches!(e, TableError::Expr { line: 2, .. }));
        assert!(matches!(Section5Table::parse("entry (2)\n"), Err(TableError::Unterminated(_))));
        assert!(matches!(Section5Table::parse("entry (2)\nend\n"), Err(TableError::Empty(_))));
        assert!(matches!(Section5Table::parse("closed q\n"), Err(TableError::Syntax { line: 1, .. })));
    }
}
