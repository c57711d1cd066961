//! Partitions, divisor sums, Bernoulli numbers, Eisenstein series and the
//! partition-counting series `P`, `P~ = P log P` and `Hur`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::kernel::{Rat, Ring, TruncSeries, Var};

/// A partition: parts in weakly decreasing order, all positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("partition parts must be positive")]
    ZeroPart,
    #[error("cannot parse partition `{0}`")]
    Parse(String),
}

impl Partition {
    /// Sorts the parts; rejects zero parts.
    pub fn new(mut parts: Vec<u32>) -> Result<Partition, PartitionError> {
        if parts.contains(&0) {
            return Err(PartitionError::ZeroPart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    /// `(1^n)`, the unit class.
    pub fn ones(n: u32) -> Partition {
        Partition(vec![1; n as usize])
    }

    /// `(2, 1^{n-2})`, the divisor class up to sign.
    pub fn hook(n: u32) -> Partition {
        assert!(n >= 2, "(2,1^(n-2)) needs n >= 2");
        let mut v = vec![2];
        v.extend(std::iter::repeat(1).take(n as usize - 2));
        Partition(v)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of parts `l(mu)`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of parts equal to `r`.
    pub fn multiplicity(&self, r: u32) -> usize {
        self.0.iter().filter(|&&p| p == r).count()
    }

    /// `(part, multiplicity)` pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `|Aut(mu)| = Π_r m_r(mu)!`.
    pub fn aut(&self) -> BigInt {
        self.multiplicities()
            .iter()
            .map(|&(_, m)| (1..=m as u64).map(BigInt::from).product::<BigInt>())
            .product()
    }

    /// `z(mu) = |Aut(mu)| Π mu_i`.
    pub fn z(&self) -> BigInt {
        self.aut() * self.0.iter().map(|&p| BigInt::from(p)).product::<BigInt>()
    }

    pub fn with_part(&self, r: u32) -> Partition {
        let mut v = self.0.clone();
        v.push(r);
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }

    /// Removes one part equal to `r`, if present.
    pub fn without_part(&self, r: u32) -> Option<Partition> {
        let i = self.0.iter().position(|&p| p == r)?;
        let mut v = self.0.clone();
        v.remove(i);
        Some(Partition(v))
    }

    /// Boxes `(i, j)` of the Young diagram: `i` runs along a row, `j` indexes the row.
    pub fn boxes(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().enumerate().flat_map(|(j, &len)| (0..len).map(move |i| (i, j as u32)))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    /// Accepts `2,1,1`, `(2,1,1)` or `[2,1,1]`; `()` is the empty partition.
    fn from_str(s: &str) -> Result<Partition, PartitionError> {
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .or_else(|| t.strip_prefix('[').and_then(|x| x.strip_suffix(']')))
            .unwrap_or(t)
            .trim();
        if t.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        Partition::new(parts).map_err(|_| PartitionError::Parse(s.to_string()))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// All partitions of `n`, in reverse-lexicographic order:
/// `(n), (n-1,1), (n-2,2), (n-2,1,1), ...`.
///
/// This order indexes every operator matrix and every emitted table.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Position of `mu` in [`partitions`]`(|mu|)`.
pub fn partition_index(mu: &Partition) -> usize {
    partitions(mu.size())
        .iter()
        .position(|p| p == mu)
        .expect("every partition occurs in its own list")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("divisor sums need n >= 1, got {0}")]
pub struct SigmaDomainError(pub i64);

/// `σ_r(n) = Σ_{d | n} d^r`, exact for negative `r`.
pub fn try_sigma(r: i32, n: i64) -> Result<Rat, SigmaDomainError> {
    if n < 1 {
        return Err(SigmaDomainError(n));
    }
    let mut acc = Rat::zero();
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            acc += &Rat::from(d).powi(r);
            let e = n / d;
            if e != d {
                acc += &Rat::from(e).powi(r);
            }
        }
        d += 1;
    }
    Ok(acc)
}

/// [`try_sigma`] for arguments known to be positive.
pub fn sigma(r: i32, n: u64) -> Rat {
    try_sigma(r, n as i64).expect("n >= 1")
}

const BERNOULLI_TABLE: usize = 80;

fn bernoulli_table() -> &'static [Rat] {
    static TABLE: OnceLock<Vec<Rat>> = OnceLock::new();
    TABLE.get_or_init(|| bernoulli_upto(BERNOULLI_TABLE))
}

/// `B_0 .. B_m` from `Σ_{j=0}^{k} C(k+1, j) B_j = 0`.
fn bernoulli_upto(m: usize) -> Vec<Rat> {
    let mut b = vec![Rat::one()];
    for k in 1..=m {
        let mut acc = Rat::zero();
        let mut binom = BigInt::from(1);
        // binom runs over C(k+1, j)
        for (j, bj) in b.iter().enumerate() {
            acc += &(Rat::from(binom.clone()) * bj.clone());
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / Rat::from(k + 1));
    }
    b
}

/// Bernoulli number `B_m` (with `B_1 = -1/2`); zero for odd `m > 1`.
pub fn bernoulli(m: usize) -> Rat {
    if m > 1 && m % 2 == 1 {
        return Rat::zero();
    }
    if m <= BERNOULLI_TABLE {
        return bernoulli_table()[m].clone();
    }
    bernoulli_upto(m).pop().expect("nonempty")
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

/// `|B_{2g-2}| / (2g-2)!`, with the `g = 1` value `|B_0| / 0! = 1`.
///
/// Every genus-dependent weight built from `B_{2g-2}` goes through here.
pub fn bernoulli_weight(g: u32) -> Rat {
    assert!(g >= 1, "genus must be positive");
    let m = 2 * (g as usize) - 2;
    bernoulli(m).abs() / Rat::from(factorial(m))
}

/// `E_{2g}(Q) = 1 - (4g / B_{2g}) Σ_{n ≥ 1} σ_{2g-1}(n) Q^n`.
pub fn eisenstein(g: u32, order: usize) -> TruncSeries<Rat> {
    assert!(g >= 1);
    let c = -Rat::from(4 * g as i64) / bernoulli(2 * g as usize);
    TruncSeries::from_fn(Var::Q, order, |n| {
        if n == 0 {
            Rat::one()
        } else {
            &c * &sigma(2 * g as i32 - 1, n as u64)
        }
    })
}

/// `P(Q) = Π_{l ≥ 1} (1 - Q^l)^{-1}` via Euler's pentagonal recurrence.
pub fn partition_series(order: usize) -> TruncSeries<Rat> {
    let p = partition_counts(order);
    TruncSeries::new(Var::Q, order, p.into_iter().map(Rat::from).collect())
}

/// `p(0) .. p(n)` from the pentagonal number theorem.
pub fn partition_counts(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::from(1)];
    for m in 1..=n {
        let mut acc = BigInt::from(0);
        for k in 1i64.. {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * &p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                acc += sign * &p[m - g2];
            }
        }
        p.push(acc);
    }
    p
}

/// `log P(Q) = Σ σ_{-1}(k) Q^k`, computed by the formal logarithm.
pub fn log_partition_series(order: usize) -> TruncSeries<Rat> {
    partition_series(order).log().expect("P has constant term 1")
}

/// `P~ = P log P`, covers weighted by their number of components.
pub fn ptilde_series(order: usize) -> TruncSeries<Rat> {
    partition_series(order).mul_ref(&log_partition_series(order))
}

/// Coefficient of `x^l y^k` in `exp(y log P(x))`, i.e. `[x^l] (log P)^k / k!`.
pub fn hur(l: usize, k: usize) -> Rat {
    if k == 0 {
        return if l == 0 { Rat::one() } else { Rat::zero() };
    }
    let lp = log_partition_series(l);
    let pw = lp.pow_u(k as u32);
    pw.coeff(l).expect("within order") / Rat::from(factorial(k))
}

/// `ℰ_a(Q) = Σ_{k ≥ 1} k^{a-1} Q^k / (1 - Q^k)`; the `Q^n` coefficient is `σ_{a-1}(n)`.
fn ecal(a: i32, order: usize) -> TruncSeries<Rat> {
    TruncSeries::from_fn(Var::Q, order, |n| if n == 0 { Rat::zero() } else { sigma(a - 1, n as u64) })
}

/// `ℰ_2(Q) = Σ k Q^k / (1 - Q^k)`.
pub fn ecal2(order: usize) -> TruncSeries<Rat> {
    ecal(2, order)
}

/// `ℰ_3(Q) = Σ k^2 Q^k / (1 - Q^k)`.
pub fn ecal3(order: usize) -> TruncSeries<Rat> {
    ecal(3, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    #[test]
    fn canonical_order() {
        let p: Vec<String> = partitions(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(p, ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
        assert_eq!(partitions(0), vec![Partition::empty()]);
    }

    #[test]
    fn aut_and_z() {
        let mu: Partition = "2,1,1".parse().unwrap();
        assert_eq!(mu.aut(), BigInt::from(2));
        assert_eq!(mu.z(), BigInt::from(4));
        assert_eq!(Partition::ones(4).z(), BigInt::from(24));
    }

    #[test]
    fn bernoulli_small() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli(7), Rat::zero());
    }

    #[test]
    fn weight_convention() {
        assert_eq!(bernoulli_weight(1), Rat::one());
        assert_eq!(bernoulli_weight(2), rat(1, 12));
    }
}
