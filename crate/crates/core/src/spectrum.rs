//! Spectrum of `D ⋆` at `t = 0` with `t1`, `t2` fixed to rationals.
//!
//! Eigenvalues are lifted as `q`-power series by Newton iteration on the
//! characteristic polynomial. The Wronskian `W_{k,i} = (q d/dq)^k e_i` is
//! never formed as a series matrix for the certificate: by Cauchy-Binet,
//!
//! ```text
//! [q^K] det W = Σ_{S ⊂ ℕ, |S| = d, ΣS = K} V(S) det(a_{i,m})_{m ∈ S}
//! ```
//!
//! with `e_i = Σ a_{i,m} q^m` and `V(S)` the Vandermonde product of `S`, so
//! coefficient `K` needs the eigenvalues only to `q^{K - (d-1)(d-2)/2}`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{partitions, Partition};
use crate::hilb::{build_md, dpower_vectors, gram_diagonal, trn_in};
use crate::kernel::{Field, Matrix, Rat, Ring, SeriesAt, TruncSeries, Var};

pub type QSeries = TruncSeries<Rat>;

/// Default eigenvalue order per basis element, and the cap for doubling.
pub const ORDER_PER_DIM: usize = 4;
pub const MAX_Q_ORDER: usize = 512;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectrumError {
    #[error("candidate eigenvalues collide at (t1, t2) = ({t1}, {t2}): {value} occurs twice")]
    Collision { t1: Rat, t2: Rat, value: Rat },
    #[error("neither sign of the box-content candidates roots the q = 0 characteristic polynomial for n = {0}")]
    SignAudit(u32),
    #[error("initial eigenvalue {0} is a root of the wrong multiplicity")]
    NotSimple(Rat),
    #[error("the eigenvalues through {0} at q = 0 do not split into power series with rational coefficients")]
    Ramified(Rat),
    #[error("the splitting of the eigenvalues through {0} at q = 0 is not resolved at first order")]
    UnresolvedCluster(Rat),
    #[error("eigenvalue {index} leaves a residual at q^{degree}")]
    Residual { index: usize, degree: usize },
    #[error("the bordered eigenvector system for eigenvalue {0} is singular at q = 0")]
    Singular(usize),
    #[error("the pairing of eigenvector {0} with the unit vanishes at q = 0")]
    UnitPairing(usize),
    #[error("Δ_{0} changes when its eigenvector is rescaled")]
    ScaleVariance(usize),
    #[error("no admissible specialization among the first {0} draws")]
    Exhausted(usize),
    #[error("n must be at least {min}, got {n}")]
    TooSmall { n: u32, min: u32 },
}

/// One eigenvalue `e_i(q)` of `M_D`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSeries {
    pub index: usize,
    /// The partition whose box contents give `e_i(0)`.
    pub partition: Partition,
    pub series: QSeries,
}

/// `M_D` at a specialization, its characteristic polynomial and lifted eigenvalues.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub n: u32,
    pub t1: Rat,
    pub t2: Rat,
    pub q_order: usize,
    pub md: Matrix<QSeries>,
    /// `det(x I - M_D)`, ascending in `x`.
    pub charpoly: Vec<QSeries>,
    pub eigen: Vec<EigenSeries>,
}

/// `det(x I - M)` in ascending degree.
pub fn charpoly<S: Ring>(m: &Matrix<S>) -> Vec<S> {
    m.charpoly()
}

/// `(Σ i, Σ j)` over the boxes `(i, j)` of each `λ ⊢ n`, in canonical partition order.
pub fn content_forms(n: u32) -> Vec<(u64, u64)> {
    partitions(n)
        .iter()
        .map(|lam| lam.boxes().fold((0, 0), |(a, b), (i, j)| (a + i as u64, b + j as u64)))
        .collect()
}

/// `Σ_{(i, j) ∈ λ} (i t1 + j t2)` for every `λ ⊢ n`, in canonical partition order.
pub fn box_content_candidates(n: u32, t1: &Rat, t2: &Rat) -> Vec<Rat> {
    content_forms(n).into_iter().map(|(a, b)| t1 * &Rat::from(a) + t2 * &Rat::from(b)).collect()
}

fn horner<R: Ring>(p: &[R], x: &R) -> R {
    let mut acc = R::zero();
    for c in p.iter().rev() {
        acc = acc.mul_ref(x).add_ref(c);
    }
    acc
}

fn x_derivative<R: Ring>(p: &[R]) -> Vec<R> {
    p.iter().enumerate().skip(1).map(|(k, c)| c.scale_rat(&Rat::from(k))).collect()
}

fn q_constant(n: u32, t1: &Rat, t2: &Rat) -> Matrix<Rat> {
    build_md(&SeriesAt::new(t1.clone(), t2.clone(), 0), n).map(|s| s.constant_term())
}

/// The eigenvalues of `M_D` at `q = 0`: box-content sums with the global sign
/// that makes each of them a root of the characteristic polynomial of exactly
/// its multiplicity.
///
/// Two partitions with the same `(Σ i, Σ j)` give the same value at every
/// specialization (from `n = 6` on, e.g. `(3,3)` and `(4,1,1)`); such values
/// are kept with multiplicity. Any other coincidence is an accident of the
/// chosen point and reported as [`SpectrumError::Collision`].
pub fn initial_eigenvalues(n: u32, t1: &Rat, t2: &Rat) -> Result<Vec<Rat>, SpectrumError> {
    if n == 0 {
        return Err(SpectrumError::TooSmall { n, min: 1 });
    }
    let forms = content_forms(n);
    let cand = box_content_candidates(n, t1, t2);
    let mut by_value: BTreeMap<&Rat, BTreeSet<(u64, u64)>> = BTreeMap::new();
    for (v, f) in cand.iter().zip(&forms) {
        by_value.entry(v).or_default().insert(*f);
    }
    if let Some((v, _)) = by_value.iter().find(|(_, fs)| fs.len() > 1) {
        return Err(SpectrumError::Collision { t1: t1.clone(), t2: t2.clone(), value: (*v).clone() });
    }
    let p = charpoly(&q_constant(n, t1, t2));
    for sign in [-Rat::one(), Rat::one()] {
        let vals: Vec<Rat> = cand.iter().map(|c| c * &sign).collect();
        if vals.iter().all(|v| horner(&p, v).is_zero()) {
            for v in &vals {
                let m = vals.iter().filter(|w| *w == v).count();
                if root_multiplicity(&p, v) != m {
                    return Err(SpectrumError::NotSimple(v.clone()));
                }
            }
            return Ok(vals);
        }
    }
    Err(SpectrumError::SignAudit(n))
}

fn root_multiplicity(p: &[Rat], v: &Rat) -> usize {
    let mut d = p.to_vec();
    let mut m = 0;
    while !d.is_empty() && horner(&d, v).is_zero() {
        d = x_derivative(&d);
        m += 1;
    }
    m
}

/// The deterministic re-draw sequence `(1, 5), (2, 7), (3, 11), (4, 13), ...`:
/// `t1 = k` and `t2` the `(k + 2)`-th prime.
pub fn specializations() -> impl Iterator<Item = (Rat, Rat)> {
    let primes = (5u64..).filter(|p| (2..*p).take_while(|d| d * d <= *p).all(|d| p % d != 0));
    (1i64..).zip(primes).map(|(k, p)| (Rat::from(k), Rat::from(p)))
}

/// The first specialization in [`specializations`] with distinct initial eigenvalues.
pub fn choose_specialization(n: u32, max_draws: usize) -> Result<(Rat, Rat), SpectrumError> {
    for (t1, t2) in specializations().take(max_draws) {
        match initial_eigenvalues(n, &t1, &t2) {
            Ok(_) => return Ok((t1, t2)),
            Err(SpectrumError::Collision { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(SpectrumError::Exhausted(max_draws))
}

fn extend(s: &QSeries, order: usize) -> QSeries {
    QSeries::new(Var::LowerQ, order, s.coeffs().iter().take(order + 1).cloned().collect())
}

/// Newton iteration for a simple root of `p` with initial value `e0`,
/// doubling the `q`-adic precision each step.
pub fn lift_root(p: &[QSeries], e0: &Rat, order: usize) -> QSeries {
    let mut e = QSeries::new(Var::LowerQ, 0, vec![e0.clone()]);
    let mut known = 0;
    while known < order {
        known = (2 * known + 1).min(order);
        let pk: Vec<QSeries> = p.iter().map(|c| c.truncate(known)).collect();
        let x = extend(&e, known);
        let val = horner(&pk, &x);
        let der = horner(&x_derivative(&pk), &x);
        let step = val.mul_ref(&der.inv().expect("simple root"));
        e = x.sub_ref(&step);
    }
    e
}

/// Coefficients in `y` of `p(a + y)`.
fn taylor_shift(p: &[QSeries], a: &Rat) -> Vec<QSeries> {
    let mut s = p.to_vec();
    let d = s.len().saturating_sub(1);
    for i in 0..d {
        for j in (i..d).rev() {
            let t = s[j + 1].scale_rat(a);
            s[j] = s[j].add_ref(&t);
        }
    }
    s
}

fn valuation(s: &QSeries) -> usize {
    s.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(s.order().map_or(usize::MAX, |n| n + 1))
}

/// Multiplies by `q^k` for `k ≥ 0` and divides exactly by `q^{-k}` otherwise.
fn shift_q(s: &QSeries, k: isize) -> QSeries {
    let order = s.order().expect("truncated");
    if k >= 0 {
        let k = k as usize;
        let mut c = vec![Rat::zero(); k];
        c.extend_from_slice(s.coeffs());
        QSeries::new(Var::LowerQ, order + k, c)
    } else {
        let k = (-k) as usize;
        QSeries::new(Var::LowerQ, order - k, s.coeffs()[k..].to_vec())
    }
}

/// Rational roots with multiplicity of a polynomial over `Q` of degree at most 2,
/// or `None` if a root is irrational or the degree is higher.
fn rational_roots(p: &[Rat]) -> Option<Vec<Rat>> {
    let mut p = p.to_vec();
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    match p.len() {
        0 | 1 => Some(Vec::new()),
        2 => Some(vec![-(&p[0] / &p[1])]),
        3 => {
            let (c, b, a) = (&p[0], &p[1], &p[2]);
            let disc = b * b - &Rat::from(4) * &(a * c);
            let r = disc.sqrt()?;
            let two_a = a * &Rat::from(2);
            Some(vec![(-b - r.clone()) / two_a.clone(), (-b + r) / two_a])
        }
        _ => None,
    }
}

/// The `m` roots of `p` that reduce to `e0` at `q = 0`, to `q^order`.
///
/// For `m = 1` this is [`lift_root`]. Otherwise `y = q z` in `p(e0 + y) / q^m`
/// turns the cluster into roots `z(q)` of a new polynomial, which is lifted
/// recursively; this needs the Newton polygon of `p(e0 + y)` to have a single
/// edge of slope one below `y^m`, and the precision of `p` drops by `m`.
pub fn lift_cluster(p: &[QSeries], e0: &Rat, m: usize, order: usize) -> Result<Vec<QSeries>, SpectrumError> {
    if m == 1 {
        return Ok(vec![lift_root(p, e0, order)]);
    }
    let s = taylor_shift(p, e0);
    if (0..m).any(|k| valuation(&s[k]) < m - k) {
        return Err(SpectrumError::Ramified(e0.clone()));
    }
    let r: Vec<QSeries> = s.iter().enumerate().map(|(k, c)| shift_q(c, k as isize - m as isize)).collect();
    let r_order = r.iter().filter_map(|c| c.order()).min().expect("truncated");
    if r_order + 1 < order {
        return Err(SpectrumError::UnresolvedCluster(e0.clone()));
    }
    let r0: Vec<Rat> = r.iter().map(|c| c.constant_term()).collect();
    let roots = rational_roots(&r0[..=m]).ok_or_else(|| SpectrumError::Ramified(e0.clone()))?;
    let mut distinct: Vec<(Rat, usize)> = Vec::new();
    for z in roots {
        match distinct.iter_mut().find(|(w, _)| *w == z) {
            Some((_, k)) => *k += 1,
            None => distinct.push((z, 1)),
        }
    }
    let mut out = Vec::with_capacity(m);
    for (z0, k) in distinct {
        for z in lift_cluster(&r, &z0, k, order.saturating_sub(1))? {
            out.push(extend(&shift_q(&z, 1), order).add_ref(&QSeries::new(Var::LowerQ, order, vec![e0.clone()])));
        }
    }
    Ok(out)
}

impl Eigensystem {
    /// Builds `M_D` to `q^{q_order}`, its characteristic polynomial, and lifts
    /// every eigenvalue. Repeated initial eigenvalues are split by
    /// [`lift_cluster`]; within such a cluster the order of the series is
    /// not tied to the partitions.
    pub fn new(n: u32, t1: &Rat, t2: &Rat, q_order: usize) -> Result<Eigensystem, SpectrumError> {
        let init = initial_eigenvalues(n, t1, t2)?;
        let mut clusters: Vec<(Rat, Vec<usize>)> = Vec::new();
        for (i, e) in init.iter().enumerate() {
            match clusters.iter_mut().find(|(v, _)| v == e) {
                Some((_, idx)) => idx.push(i),
                None => clusters.push((e.clone(), vec![i])),
            }
        }
        let slack = clusters.iter().map(|(_, idx)| idx.len()).filter(|&m| m > 1).map(|m| m * (m + 1) / 2).max().unwrap_or(0);
        let work = q_order + slack;
        let md = build_md(&SeriesAt::new(t1.clone(), t2.clone(), work), n);
        let full: Vec<QSeries> = charpoly(&md).into_iter().map(|c| extend(&c, work)).collect();
        let lifted: Vec<Vec<QSeries>> = clusters
            .par_iter()
            .map(|(e0, idx)| lift_cluster(&full, e0, idx.len(), q_order))
            .collect::<Result<_, _>>()?;
        let parts = partitions(n);
        let mut eigen: Vec<Option<EigenSeries>> = vec![None; init.len()];
        for ((_, idx), series) in clusters.iter().zip(lifted) {
            for (&i, s) in idx.iter().zip(series) {
                eigen[i] = Some(EigenSeries { index: i, partition: parts[i].clone(), series: extend(&s, q_order) });
            }
        }
        let eigen: Vec<EigenSeries> = eigen.into_iter().map(|e| e.expect("every index lifted")).collect();
        let charpoly: Vec<QSeries> = full.iter().map(|c| extend(c, q_order)).collect();
        for e in &eigen {
            let r = horner(&charpoly, &e.series);
            if let Some(degree) = (0..=q_order).find(|&k| !r.coeff(k).is_some_and(|c| c.is_zero())) {
                return Err(SpectrumError::Residual { index: e.index, degree });
            }
        }
        let md = md.map(|c| extend(c, q_order));
        Ok(Eigensystem { n, t1: t1.clone(), t2: t2.clone(), q_order, md, charpoly, eigen })
    }

    pub fn dim(&self) -> usize {
        self.eigen.len()
    }

    pub fn series(&self) -> Vec<QSeries> {
        self.eigen.iter().map(|e| e.series.clone()).collect()
    }

    /// `tr M_D` read off the matrix, to `q^{q_order}`.
    pub fn trace_series(&self) -> QSeries {
        extend(&self.md.trace(), self.q_order)
    }

    /// `(t1 + t2) Tr_n` expanded independently of the matrix.
    pub fn trn_series(&self) -> QSeries {
        let mode = SeriesAt::new(self.t1.clone(), self.t2.clone(), self.q_order);
        let s = &self.t1 + &self.t2;
        extend(&trn_in(&mode, self.n).scale_rat(&s), self.q_order)
    }
}

/// Where the elementary symmetric functions of the eigenvalues first disagree
/// with the characteristic polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VietaMismatch {
    pub x_degree: usize,
    pub q_degree: usize,
}

/// `Π (x - e_i(q))` against `det(x I - M_D)`, coefficient by coefficient.
pub fn vieta_check(sys: &Eigensystem) -> Result<(), VietaMismatch> {
    let mut prod = vec![QSeries::one_to(Var::LowerQ, sys.q_order)];
    for e in &sys.eigen {
        let mut next = vec![QSeries::zero_to(Var::LowerQ, sys.q_order); prod.len() + 1];
        for (k, c) in prod.iter().enumerate() {
            next[k + 1] = next[k + 1].add_ref(c);
            next[k] = next[k].sub_ref(&c.mul_ref(&e.series));
        }
        prod = next;
    }
    for (k, (a, b)) in prod.iter().zip(&sys.charpoly).enumerate() {
        if let Some(q) = a.first_difference(b) {
            return Err(VietaMismatch { x_degree: k, q_degree: q });
        }
    }
    Ok(())
}

/// `e_i' P_x(e_i) + P_q(e_i) = 0`, the `q`-derivative of `P(e_i(q), q) = 0`.
/// Returns the first failing eigenvalue index.
pub fn derivative_identity_check(sys: &Eigensystem) -> Result<(), usize> {
    let dx = x_derivative(&sys.charpoly);
    let dq: Vec<QSeries> = sys.charpoly.iter().map(|c| c.derivative()).collect();
    for e in &sys.eigen {
        let lhs = e.series.derivative().mul_ref(&horner(&dx, &e.series)).add_ref(&horner(&dq, &e.series));
        if !lhs.coeffs().iter().all(|c| c.is_zero()) {
            return Err(e.index);
        }
    }
    Ok(())
}

/// `W_{k,i} = (q d/dq)^k e_i` as a matrix of series, for direct checks on small `n`.
pub fn wronskian_matrix(eigen: &[QSeries]) -> Matrix<QSeries> {
    let d = eigen.len();
    let mut rows = vec![eigen.to_vec()];
    for k in 1..d {
        let next = rows[k - 1].iter().map(|s| s.theta()).collect();
        rows.push(next);
    }
    Matrix::from_rows(rows)
}

fn subsets_with_sum(size: usize, sum: usize, min: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if size == 0 {
        if sum == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    // the smallest admissible completion starting at s is s, s+1, ..., s+size-1
    let mut s = min;
    while size * s + size * (size - 1) / 2 <= sum {
        prefix.push(s);
        subsets_with_sum(size - 1, sum - s, s + 1, prefix, out);
        prefix.pop();
        s += 1;
    }
}

fn triangular(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Smallest `K` with a possibly nonzero `[q^K] det W`.
pub fn wronskian_min_index(d: usize) -> usize {
    triangular(d)
}

/// Largest `K` for which `[q^K] det W` is determined by eigenvalues known to `q^order`.
pub fn wronskian_max_index(d: usize, order: usize) -> usize {
    order + triangular(d.saturating_sub(1))
}

/// `[q^K] det W` by Cauchy-Binet; `None` if the eigenvalues are not known far enough.
pub fn wronskian_coefficient(eigen: &[QSeries], k: usize) -> Option<Rat> {
    let d = eigen.len();
    let order = eigen.iter().filter_map(|e| e.order()).min().unwrap_or(usize::MAX);
    if d == 0 || k > wronskian_max_index(d, order) {
        return if d == 0 { Some(if k == 0 { Rat::one() } else { Rat::zero() }) } else { None };
    }
    let mut subsets = Vec::new();
    subsets_with_sum(d, k, 0, &mut Vec::with_capacity(d), &mut subsets);
    let total = subsets
        .par_iter()
        .map(|s| {
            let mut vdm = Rat::one();
            for (b, &sb) in s.iter().enumerate() {
                for &sa in &s[..b] {
                    vdm = vdm * Rat::from((sb - sa) as i64);
                }
            }
            let a = Matrix::from_fn(d, d, |r, i| eigen[i].coeff(s[r]).expect("within order"));
            vdm * a.det_bareiss()
        })
        .reduce(Rat::zero, |a, b| a + b);
    Some(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Inconclusive,
}

/// A nonzero exact coefficient of `det W` at a rational specialization, or the
/// order at which the search gave up.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WronskianCertificate {
    pub n: u32,
    pub t1: Rat,
    pub t2: Rat,
    pub q_order: usize,
    pub first_nonzero_index: Option<usize>,
    pub coefficient: Option<Rat>,
    pub verdict: Verdict,
}

/// Scans `[q^K] det W` upward from the smallest possible `K`.
pub fn first_nonzero_wronskian(eigen: &[QSeries]) -> Option<(usize, Rat)> {
    let d = eigen.len();
    let order = eigen.iter().filter_map(|e| e.order()).min()?;
    (wronskian_min_index(d)..=wronskian_max_index(d, order))
        .map(|k| (k, wronskian_coefficient(eigen, k).expect("within order")))
        .find(|(_, c)| !c.is_zero())
}

/// Certifies `det W ≠ 0` for `n ≥ 2`. Starts at `q_order` (default
/// `4 |Part(n)|`) and doubles on an inconclusive search, up to [`MAX_Q_ORDER`].
pub fn wronskian_certificate(
    n: u32,
    t1: &Rat,
    t2: &Rat,
    q_order: Option<usize>,
) -> Result<WronskianCertificate, SpectrumError> {
    if n < 2 {
        return Err(SpectrumError::TooSmall { n, min: 2 });
    }
    let mut order = q_order.unwrap_or(ORDER_PER_DIM * partitions(n).len()).clamp(1, MAX_Q_ORDER);
    loop {
        let sys = Eigensystem::new(n, t1, t2, order)?;
        let found = first_nonzero_wronskian(&sys.series());
        if found.is_some() || order >= MAX_Q_ORDER {
            let verdict = if found.is_some() { Verdict::Pass } else { Verdict::Inconclusive };
            let (idx, c) = found.unzip();
            return Ok(WronskianCertificate {
                n,
                t1: t1.clone(),
                t2: t2.clone(),
                q_order: order,
                first_nonzero_index: idx,
                coefficient: c,
                verdict,
            });
        }
        order = (2 * order).min(MAX_Q_ORDER);
    }
}

/// [`wronskian_certificate`] at the first admissible point of [`specializations`].
pub fn certify_wronskian(n: u32, q_order: Option<usize>) -> Result<WronskianCertificate, SpectrumError> {
    let (t1, t2) = choose_specialization(n, 64)?;
    wronskian_certificate(n, &t1, &t2, q_order)
}

/// An eigenvector `v_i(q)` normalized by `v_{i,p} = 1`, lifted jointly with its eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenVector {
    pub index: usize,
    pub pivot: usize,
    pub vector: Vec<QSeries>,
    pub eigenvalue: QSeries,
}

fn null_vector(m: &Matrix<Rat>) -> Option<Vec<Rat>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else { continue };
        for j in 0..cols {
            let (x, y) = (a.get(r, j).clone(), a.get(p, j).clone());
            a.set(r, j, y);
            a.set(p, j, x);
        }
        let inv = a.get(r, c).inv();
        for j in 0..cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in (0..rows).filter(|&i| i != r) {
            let f = a.get(i, c).clone();
            if !f.is_zero() {
                for j in 0..cols {
                    let v = a.get(i, j) - &(&f * a.get(r, j));
                    a.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rat::zero(); cols];
    v[free] = Rat::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -a.get(row, free).clone();
    }
    Some(v)
}

/// Newton iteration on `F(v, e) = ((M - e) v, v_p - 1)` with Jacobian
/// `[[M - e, -v], [e_p^T, 0]]`, doubling the precision each step.
pub fn eigenvectors(sys: &Eigensystem) -> Result<Vec<EigenVector>, SpectrumError> {
    let d = sys.dim();
    let m0 = sys.md.map(|s| s.constant_term());
    let n_order = sys.q_order;
    sys.eigen
        .par_iter()
        .map(|eig| {
            let e0 = eig.series.constant_term();
            let shifted = Matrix::from_fn(d, d, |i, j| if i == j { m0.get(i, j) - &e0 } else { m0.get(i, j).clone() });
            let v0 = null_vector(&shifted).ok_or(SpectrumError::Singular(eig.index))?;
            // prefer the unit coordinate (last in canonical order) as normalization
            let pivot = if !v0[d - 1].is_zero() { d - 1 } else { v0.iter().position(|x| !x.is_zero()).expect("nonzero") };
            let s = v0[pivot].inv();
            let mut v: Vec<QSeries> = v0.iter().map(|x| QSeries::new(Var::LowerQ, 0, vec![x * &s])).collect();
            let mut e = QSeries::new(Var::LowerQ, 0, vec![e0]);
            let mut known = 0;
            while known < n_order {
                known = (2 * known + 1).min(n_order);
                let vk: Vec<QSeries> = v.iter().map(|x| extend(x, known)).collect();
                let ek = extend(&e, known);
                let a = Matrix::from_fn(d, d, |i, j| {
                    let mij = extend(sys.md.get(i, j), known);
                    if i == j { mij.sub_ref(&ek) } else { mij }
                });
                let av = a.mul_vec(&vk);
                let mut rhs: Vec<QSeries> = av.iter().map(|x| x.neg_ref()).collect();
                rhs.push(QSeries::one_to(Var::LowerQ, known).sub_ref(&vk[pivot]));
                let jac = Matrix::from_fn(d + 1, d + 1, |i, j| match (i < d, j < d) {
                    (true, true) => a.get(i, j).clone(),
                    (true, false) => vk[i].neg_ref(),
                    (false, true) => {
                        if j == pivot {
                            QSeries::one_to(Var::LowerQ, known)
                        } else {
                            QSeries::zero_to(Var::LowerQ, known)
                        }
                    }
                    (false, false) => QSeries::zero_to(Var::LowerQ, known),
                });
                let delta = jac.solve_unit_pivot(&rhs).ok_or(SpectrumError::Singular(eig.index))?;
                v = vk.iter().zip(&delta).map(|(x, dx)| x.add_ref(dx)).collect();
                e = ek.add_ref(&delta[d]);
            }
            Ok(EigenVector { index: eig.index, pivot, vector: v, eigenvalue: e })
        })
        .collect()
}

fn pairing(gram: &[QSeries], v: &[QSeries], w: &[QSeries]) -> QSeries {
    gram.iter().zip(v.iter().zip(w)).fold(QSeries::zero(), |acc, (g, (a, b))| acc.add_ref(&g.mul_ref(&a.mul_ref(b))))
}

/// `⟨v, v⟩ / ⟨v, 1⟩^2` in the diagonal Gram pairing; `None` if `⟨v, 1⟩` vanishes at `q = 0`.
pub fn delta_from_vector(gram: &[QSeries], v: &[QSeries]) -> Option<QSeries> {
    let d = v.len();
    let unit = gram[d - 1].mul_ref(&v[d - 1]);
    let vv = pairing(gram, v, v);
    Some(vv.mul_ref(&unit.mul_ref(&unit).inv().ok()?))
}

/// `Δ_i = ⟨v_i, v_i⟩ / ⟨v_i, 1⟩^2` for every eigenvector, each checked to be
/// unchanged when `v_i` is doubled.
pub fn delta_i(sys: &Eigensystem, vectors: &[EigenVector]) -> Result<Vec<QSeries>, SpectrumError> {
    let mode = SeriesAt::new(sys.t1.clone(), sys.t2.clone(), sys.q_order);
    let gram = gram_diagonal(&mode, sys.n);
    vectors
        .iter()
        .map(|ev| {
            let delta = delta_from_vector(&gram, &ev.vector).ok_or(SpectrumError::UnitPairing(ev.index))?;
            let doubled: Vec<QSeries> = ev.vector.iter().map(|x| x.scale_rat(&Rat::from(2))).collect();
            if delta_from_vector(&gram, &doubled).as_ref() != Some(&delta) {
                return Err(SpectrumError::ScaleVariance(ev.index));
            }
            Ok(delta)
        })
        .collect()
}

/// `v_i ⋆ v_j ≡ 0` for `i ≠ j`, with `M_{v_i} = Σ c_k M_D^k` read off the
/// `D`-power coordinates of `v_i`. Returns the first failing pair.
pub fn frobenius_check(sys: &Eigensystem, vectors: &[EigenVector]) -> Result<(), (usize, usize)> {
    let d = sys.dim();
    let dv = dpower_vectors(&sys.md);
    let coords = Matrix::from_fn(d, d, |i, k| dv[k][i].clone());
    let powers: Vec<Matrix<QSeries>> =
        std::iter::successors(Some(Matrix::identity(d)), |p| Some(p.mul_ref(&sys.md))).take(d).collect();
    for a in vectors {
        let c = coords.solve_unit_pivot(&a.vector).ok_or((a.index, a.index))?;
        let mut op = Matrix::zeros(d, d);
        for (ck, pk) in c.iter().zip(&powers) {
            op = op.add_ref(&pk.scale(ck));
        }
        for b in vectors.iter().filter(|b| b.index != a.index) {
            if !op.mul_vec(&b.vector).iter().all(|x| x.coeffs().iter().all(|c| c.is_zero())) {
                return Err((a.index, b.index));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerate_exactly() {
        let mut out = Vec::new();
        subsets_with_sum(3, 5, 0, &mut Vec::new(), &mut out);
        assert_eq!(out, vec![vec![0, 1, 4], vec![0, 2, 3]]);
        assert_eq!(wronskian_min_index(3), 3);
        assert_eq!(wronskian_max_index(3, 10), 11);
        assert_eq!(wronskian_max_index(1, 10), 10);
    }

    #[test]
    fn null_vector_of_rank_deficient() {
        let m = Matrix::from_rows(vec![vec![Rat::from(1), Rat::from(2)], vec![Rat::from(2), Rat::from(4)]]);
        let v = null_vector(&m).unwrap();
        assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        assert!(v.iter().any(|x| !x.is_zero()));
    }

    #[test]
    fn specialization_sequence() {
        let s: Vec<(Rat, Rat)> = specializations().take(4).collect();
        let want = [(1, 5), (2, 7), (3, 11), (4, 13)].map(|(a, b)| (Rat::from(a), Rat::from(b)));
        assert_eq!(s, want);
    }
}
