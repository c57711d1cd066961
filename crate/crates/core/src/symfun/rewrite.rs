//! The rewriting `K[Df]^{S_n} → K[Ds][1/Δ]`.
//!
//! Every derivative of a root is a polynomial in `Ds` and the root divided by
//! a power of `P_x` at that root:
//! `∂^b f · P_x(f)^{N_b} = Ω_b(Ds, f)`, with `Ω_{e_j} = -Σ_k ∂_j s_k f^{n-k}`
//! and the higher ones obtained by differentiating and clearing `P_x` again.
//! `P(f) = 0` lets every numerator be reduced to degree `< n` in the root.
//!
//! [`Rewriter::rewrite_by_clearing`] puts a symmetric input over
//! `Δ^N = Π_i P_x(f_i)^N` and applies the fundamental theorem to the
//! numerator. [`Rewriter::rewrite`] reaches the same result through traces
//! over the roots, which keeps the intermediate expressions much smaller.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::kernel::{Rat, Ring};

use super::{permutations, DiffPoly, DiffSymbol, LocalizedExpr, Monomial, SymbolKind, SymfunError};

/// A polynomial in the root (or `Y`) with coefficients in `K[Ds]`, ascending.
type YPoly = Vec<DiffPoly>;

fn var(s: DiffSymbol) -> DiffPoly {
    DiffPoly::var(s)
}

fn s_sym(k: u32, a: &[u32]) -> DiffPoly {
    var(DiffSymbol::s(k).with_deriv(a))
}

fn y_pow(a: u32) -> DiffPoly {
    DiffPoly::var(DiffSymbol::y()).pow_u(a)
}

/// `P_x(Y) = n Y^{n-1} + Σ_{k<n} (n-k) s_k Y^{n-k-1}` as a polynomial in `Y`.
fn px_diffpoly(n: u32) -> DiffPoly {
    let mut p = y_pow(n - 1).scale_rat(&Rat::from(n));
    for k in 1..n {
        p = p + (s_sym(k, &[]) * y_pow(n - k - 1)).scale_rat(&Rat::from(n - k));
    }
    p
}

/// `Φ_b ∈ K[Ds_{≤b}, DY_{<b}]` with `∂^b f_i · P_x(f_i) = Φ_b |_{Y = f_i}`.
pub fn phi(n: u32, b: &[u32]) -> Result<DiffPoly, SymfunError> {
    let j = b.iter().rposition(|&x| x > 0).ok_or(SymfunError::ZeroMultiIndex)?;
    let mut prev = b.to_vec();
    prev[j] -= 1;
    if prev.iter().all(|&x| x == 0) {
        let mut e = vec![0; j + 1];
        e[j] = 1;
        let mut out = DiffPoly::zero();
        for k in 1..=n {
            out = out - s_sym(k, &e) * y_pow(n - k);
        }
        return Ok(out);
    }
    // differentiate ∂^{b'} Y · P_x(Y) = Φ_{b'}
    let lower = phi(n, &prev)?;
    let dy = var(DiffSymbol::y().with_deriv(&prev));
    Ok(lower.differentiate(j) - dy * px_diffpoly(n).differentiate(j))
}

fn padd(a: &YPoly, b: &YPoly) -> YPoly {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), DiffPoly::zero());
    }
    for (x, y) in out.iter_mut().zip(b) {
        *x += y;
    }
    out
}

fn pscale(a: &YPoly, c: &Rat) -> YPoly {
    a.iter().map(|x| x.scale_rat(c)).collect()
}

fn pmul(a: &YPoly, b: &YPoly) -> YPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![DiffPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

fn pdy(a: &YPoly) -> YPoly {
    a.iter().enumerate().skip(1).map(|(k, c)| c.scale_rat(&Rat::from(k))).collect()
}

fn pdz(a: &YPoly, j: usize) -> YPoly {
    a.iter().map(|c| c.differentiate(j)).collect()
}

fn to_diffpoly(a: &YPoly, root: &DiffSymbol) -> DiffPoly {
    let mut out = DiffPoly::zero();
    let r = var(root.clone());
    for (k, c) in a.iter().enumerate() {
        if !c.is_zero() {
            out = out + c * &r.pow_u(k as u32);
        }
    }
    out
}

fn unit(j: usize) -> Vec<u32> {
    let mut e = vec![0; j + 1];
    e[j] = 1;
    e
}

fn trimmed(b: &[u32]) -> Vec<u32> {
    let mut v = b.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Rewriting context for a fixed number of roots, with caches.
pub struct Rewriter {
    n: u32,
    px: YPoly,
    omega: HashMap<Vec<u32>, (YPoly, u32)>,
    px_pow: Vec<YPoly>,
    orbit_sums: HashMap<Vec<u32>, DiffPoly>,
    elementary: Vec<DiffPoly>,
    disc: Option<DiffPoly>,
    disc_pows: Vec<DiffPoly>,
    cofactor: Option<YPoly>,
    cofactor_pows: Vec<YPoly>,
    trace_rows: HashMap<u32, Vec<(DiffPoly, u32)>>,
}

impl Rewriter {
    pub fn new(n: u32) -> Self {
        assert!(n >= 1, "at least one root");
        let mut px = vec![DiffPoly::zero(); n as usize];
        px[n as usize - 1] = DiffPoly::constant(Rat::from(n));
        for k in 1..n {
            px[(n - k - 1) as usize] = s_sym(k, &[]).scale_rat(&Rat::from(n - k));
        }
        let elementary = (0..=n).map(|k| elementary_in_roots(n, k)).collect();
        Rewriter {
            n,
            px: px.clone(),
            omega: HashMap::new(),
            px_pow: vec![vec![DiffPoly::one()], px],
            orbit_sums: HashMap::new(),
            elementary,
            disc: None,
            disc_pows: Vec::new(),
            cofactor: None,
            cofactor_pows: Vec::new(),
            trace_rows: HashMap::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Reduction modulo `P(Y) = Y^n + Σ s_k Y^{n-k}`.
    fn reduce(&self, mut a: YPoly) -> YPoly {
        let n = self.n as usize;
        while a.len() > n {
            let c = a.pop().expect("nonempty");
            if c.is_zero() {
                continue;
            }
            let d = a.len();
            for k in 1..=n {
                a[d - k] -= &(&c * &s_sym(k as u32, &[]));
            }
        }
        while a.last().is_some_and(DiffPoly::is_zero) {
            a.pop();
        }
        a
    }

    fn px_power(&mut self, k: u32) -> YPoly {
        while self.px_pow.len() <= k as usize {
            let next = pmul(self.px_pow.last().expect("nonempty"), &self.px);
            let r = self.reduce(next);
            self.px_pow.push(r);
        }
        self.px_pow[k as usize].clone()
    }

    fn omega_y(&mut self, b: &[u32]) -> Result<(YPoly, u32), SymfunError> {
        let b = trimmed(b);
        if let Some(v) = self.omega.get(&b) {
            return Ok(v.clone());
        }
        let j = b.iter().rposition(|&x| x > 0).ok_or(SymfunError::ZeroMultiIndex)?;
        let n = self.n;
        let e = unit(j);
        let mut prev = b.clone();
        prev[j] -= 1;
        let out = if prev.iter().all(|&x| x == 0) {
            let mut v = vec![DiffPoly::zero(); n as usize];
            for k in 1..=n {
                v[(n - k) as usize] = -s_sym(k, &e);
            }
            (self.reduce(v), 1)
        } else {
            // ∂_j (G / P_x^N) with ∂_j Y = E / P_x, over P_x^{N + 2}
            let (g, big_n) = self.omega_y(&prev)?;
            let (ej, _) = self.omega_y(&e)?;
            let px = self.px.clone();
            let first = pmul(&padd(&pmul(&pdz(&g, j), &px), &pmul(&pdy(&g), &ej)), &px);
            let dpx = padd(&pmul(&pdz(&px, j), &px), &pmul(&pdy(&px), &ej));
            let v = padd(&first, &pscale(&pmul(&g, &dpx), &-Rat::from(big_n)));
            (self.reduce(v), big_n + 2)
        };
        self.omega.insert(b, out.clone());
        Ok(out)
    }

    /// `(Ω_b(Ds, Y), N_b)` with `∂^b f · P_x(f)^{N_b} = Ω_b(Ds, f)` for every root `f`;
    /// `Ω_b` is reduced to degree `< n` in `Y`.
    pub fn omega(&mut self, b: &[u32]) -> Result<(DiffPoly, u32), SymfunError> {
        let (v, k) = self.omega_y(b)?;
        Ok((to_diffpoly(&v, &DiffSymbol::y()), k))
    }

    /// `Δ = Π_{i ≠ j} (f_i - f_j)` as a polynomial in `s_1, ..., s_n`.
    pub fn discriminant(&mut self) -> DiffPoly {
        if let Some(d) = &self.disc {
            return d.clone();
        }
        let n = self.n;
        let mut p = DiffPoly::one();
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    p = p * (var(DiffSymbol::f(i)) - var(DiffSymbol::f(j)));
                }
            }
        }
        let d = self.elementary_rewrite(&p).expect("Δ is symmetric");
        self.disc = Some(d.clone());
        d
    }

    /// Fundamental theorem: a symmetric polynomial in the underived roots as
    /// a polynomial in the underived `s_k`.
    pub fn elementary_rewrite(&self, p: &DiffPoly) -> Result<DiffPoly, SymfunError> {
        let n = self.n;
        let mut rem = p.clone();
        let mut out = DiffPoly::zero();
        let mut powers: HashMap<(u32, u32), DiffPoly> = HashMap::new();
        while let Some((m, c)) = rem.leading() {
            let c = c.clone();
            let mut alpha = vec![0u32; n as usize + 1];
            for (s, e) in m.factors() {
                if s.kind != SymbolKind::F || !s.deriv().is_empty() {
                    return Err(SymfunError::NotSymmetric);
                }
                alpha[s.index as usize - 1] = *e;
            }
            if alpha.windows(2).any(|w| w[0] < w[1]) {
                return Err(SymfunError::NotSymmetric);
            }
            let mut expanded = DiffPoly::constant(c.clone());
            let mut mono = Vec::new();
            let mut sign = c;
            for k in 1..=n {
                let d = alpha[k as usize - 1] - alpha[k as usize];
                if d == 0 {
                    continue;
                }
                let pw = powers.entry((k, d)).or_insert_with(|| self.elementary[k as usize].pow_u(d));
                expanded = &expanded * &*pw;
                mono.push((DiffSymbol::s(k), d));
                if k % 2 == 1 && d % 2 == 1 {
                    sign = -sign;
                }
            }
            rem -= &expanded;
            out += &DiffPoly::monomial(Monomial::from_unsorted(mono), sign);
        }
        Ok(out)
    }

    /// `Σ_{σ ∈ S_n} Π_i f_{σ(i)}^{a_i}` in `s`, for a sorted exponent vector.
    fn orbit_sum(&mut self, a: &[u32]) -> DiffPoly {
        if let Some(v) = self.orbit_sums.get(a) {
            return v.clone();
        }
        let mono: Vec<(DiffSymbol, u32)> = a.iter().enumerate().map(|(i, &e)| (DiffSymbol::f(i as u32 + 1), e)).collect();
        let p = DiffPoly::monomial(Monomial::from_unsorted(mono), Rat::one()).symmetrize(self.n);
        let v = self.elementary_rewrite(&p).expect("orbit sums are symmetric");
        self.orbit_sums.insert(a.to_vec(), v.clone());
        v
    }

    fn check_input(&self, p: &DiffPoly) -> Result<(), SymfunError> {
        for s in p.symbols() {
            if s.kind == SymbolKind::Y {
                return Err(SymfunError::AuxiliarySymbol);
            }
            if s.index == 0 || s.index > self.n {
                return Err(SymfunError::IndexOutOfRange { index: s.index, n: self.n });
            }
        }
        if !p.is_symmetric(self.n) {
            return Err(SymfunError::NotSymmetric);
        }
        Ok(())
    }

    /// One monomial per `S_n`-orbit, weighted so that `p = Σ weight · sym(monomial)`.
    fn orbit_representatives(&self, p: &DiffPoly) -> Vec<(Monomial, Rat)> {
        let perms = permutations(self.n);
        let nfact = perms.len();
        let mut seen: BTreeSet<Monomial> = BTreeSet::new();
        let mut reps = Vec::new();
        for (m, c) in p.terms() {
            if seen.contains(m) {
                continue;
            }
            let single = DiffPoly::monomial(m.clone(), Rat::one());
            let orbit: BTreeSet<Monomial> =
                perms.iter().map(|q| single.permute_roots(q).leading().expect("nonzero").0.clone()).collect();
            let weight = c.clone() * Rat::from(orbit.len()) / Rat::from(nfact);
            seen.extend(orbit);
            reps.push((m.clone(), weight));
        }
        reps
    }

    /// The s-part of a monomial and, for each root, `(G_i, N_i)` with the
    /// product of its factors equal to `G_i(f_i) / P_x(f_i)^{N_i}`.
    fn split_monomial(&mut self, m: &Monomial) -> Result<(Monomial, Vec<(YPoly, u32)>), SymfunError> {
        let mut rest = Vec::new();
        let mut roots: Vec<(YPoly, u32)> = vec![(vec![DiffPoly::one()], 0); self.n as usize];
        for (s, e) in m.factors() {
            match s.kind {
                SymbolKind::F => {
                    let (g, k) = if s.deriv().is_empty() {
                        (vec![DiffPoly::zero(), DiffPoly::one()], 0)
                    } else {
                        self.omega_y(s.deriv())?
                    };
                    let slot = &mut roots[s.index as usize - 1];
                    for _ in 0..*e {
                        let prod = pmul(&slot.0, &g);
                        slot.0 = self.reduce(prod);
                        slot.1 += k;
                    }
                }
                _ => rest.push((s.clone(), *e)),
            }
        }
        Ok((Monomial::from_unsorted(rest), roots))
    }

    /// The literal clearing construction: every monomial is put over
    /// `Δ^N = Π_i P_x(f_i)^N`, the numerators are symmetrized and the
    /// fundamental theorem is applied; common factors of `Δ` are divided out
    /// at the end. Slower than [`Rewriter::rewrite`] and kept as a cross-check.
    pub fn rewrite_by_clearing(&mut self, p: &DiffPoly) -> Result<LocalizedExpr, SymfunError> {
        self.check_input(p)?;
        let reps = self.orbit_representatives(p);

        let mut parts = Vec::new();
        let mut big_n = 0;
        for (m, w) in reps {
            let (rest, roots) = self.split_monomial(&m)?;
            big_n = big_n.max(roots.iter().map(|r| r.1).max().unwrap_or(0));
            parts.push((DiffPoly::monomial(rest, w), roots));
        }

        let mut numerator = DiffPoly::zero();
        for (coef, roots) in parts {
            // Σ over exponent vectors, grouped by their sorted form
            let mut acc: BTreeMap<Vec<u32>, DiffPoly> = BTreeMap::new();
            acc.insert(Vec::new(), coef);
            for (g, k) in roots {
                let pw = self.px_power(big_n - k);
                let g = self.reduce(pmul(&g, &pw));
                let mut next: BTreeMap<Vec<u32>, DiffPoly> = BTreeMap::new();
                for (key, v) in &acc {
                    for (a, c) in g.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut key2 = key.clone();
                        let pos = key2.partition_point(|&x| x >= a as u32);
                        key2.insert(pos, a as u32);
                        let t = v * c;
                        let slot = next.entry(key2).or_insert_with(DiffPoly::zero);
                        *slot += &t;
                    }
                }
                acc = next;
            }
            for (key, v) in acc {
                if v.is_zero() {
                    continue;
                }
                let o = self.orbit_sum(&key);
                numerator += &(v * o);
            }
        }

        let (numerator, disc_power) = self.simplify(numerator, big_n);
        Ok(LocalizedExpr { numerator, disc_power })
    }

    /// Divides out factors of `Δ` while the power is positive.
    fn simplify(&mut self, mut num: DiffPoly, mut k: u32) -> (DiffPoly, u32) {
        if num.is_zero() {
            return (num, 0);
        }
        let d = self.discriminant();
        while k > 0 {
            match num.div_exact(&d) {
                Some(q) => {
                    num = q;
                    k -= 1;
                }
                None => break,
            }
        }
        (num, k)
    }

    fn disc_pow(&mut self, k: u32) -> DiffPoly {
        if self.disc_pows.is_empty() {
            self.disc_pows.push(DiffPoly::one());
        }
        while self.disc_pows.len() <= k as usize {
            let d = self.discriminant();
            let next = self.disc_pows.last().expect("nonempty") * &d;
            self.disc_pows.push(next);
        }
        self.disc_pows[k as usize].clone()
    }

    /// `A(Y)` of degree `< n` with `A · P_x ≡ Δ (mod P)`: the first column of
    /// the adjugate of multiplication by `P_x`, whose determinant is `Δ`.
    fn cofactor(&mut self) -> YPoly {
        if let Some(a) = &self.cofactor {
            return a.clone();
        }
        let n = self.n as usize;
        let mut cols = Vec::with_capacity(n);
        for c in 0..n {
            let mut y = vec![DiffPoly::zero(); c + 1];
            y[c] = DiffPoly::one();
            let mut col = self.reduce(pmul(&self.px, &y));
            col.resize(n, DiffPoly::zero());
            cols.push(col);
        }
        let m: Vec<Vec<DiffPoly>> = (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect();
        let a: YPoly = (0..n)
            .map(|r| {
                let minor: Vec<Vec<DiffPoly>> = (1..n)
                    .map(|i| (0..n).filter(|&j| j != r).map(|j| m[i][j].clone()).collect())
                    .collect();
                let d = determinant(&minor);
                if r % 2 == 1 {
                    -d
                } else {
                    d
                }
            })
            .collect();
        self.cofactor = Some(a.clone());
        a
    }

    /// `A(Y)` with `A(f) · P_x(f) = Δ` at every root `f`.
    pub fn px_inverse_numerator(&mut self) -> DiffPoly {
        to_diffpoly(&self.cofactor(), &DiffSymbol::y())
    }

    /// `[Tr(Y^a / P_x^N)]_{a < n}` as `(numerator, Δ-power)`.
    fn trace_row(&mut self, big_n: u32) -> Vec<(DiffPoly, u32)> {
        if let Some(r) = self.trace_rows.get(&big_n) {
            return r.clone();
        }
        let n = self.n as usize;
        let row = if big_n == 0 {
            (0..n).map(|a| (self.power_sum(a as u32), 0)).collect()
        } else {
            // Y^a / P_x^N = Y^a A^{N-1} / (Δ^{N-1} P_x), and Tr(G / P_x) is the
            // coefficient of Y^{n-1} in G mod P
            let a_cof = self.cofactor();
            while self.cofactor_pows.len() < big_n as usize {
                let next = match self.cofactor_pows.last() {
                    None => vec![DiffPoly::one()],
                    Some(last) => self.reduce(pmul(last, &a_cof)),
                };
                self.cofactor_pows.push(next);
            }
            let w = self.cofactor_pows[big_n as usize - 1].clone();
            let mut row = Vec::with_capacity(n);
            for a in 0..n {
                let mut y = vec![DiffPoly::zero(); a + 1];
                y[a] = DiffPoly::one();
                let v = self.reduce(pmul(&y, &w));
                let top = v.get(n - 1).cloned().unwrap_or_else(DiffPoly::zero);
                row.push(self.simplify(top, big_n - 1));
            }
            row
        };
        self.trace_rows.insert(big_n, row.clone());
        row
    }

    /// `p_a = Σ_i f_i^a` in `s`.
    fn power_sum(&mut self, a: u32) -> DiffPoly {
        if a == 0 {
            return DiffPoly::constant(Rat::from(self.n));
        }
        let mut key = vec![0; self.n as usize];
        key[0] = a;
        // the orbit sum over S_n counts each term (n-1)! times
        let fact: u64 = (1..self.n as u64).product();
        self.orbit_sum(&key).scale_rat(&Rat::new(1, fact))
    }

    /// `Σ_i G(f_i) / P_x(f_i)^N`.
    fn trace(&mut self, g: &YPoly, big_n: u32) -> (DiffPoly, u32) {
        let row = self.trace_row(big_n);
        let k = g.iter().zip(&row).filter(|(c, _)| !c.is_zero()).map(|(_, r)| r.1).max().unwrap_or(0);
        let mut num = DiffPoly::zero();
        for (c, (w, kw)) in g.iter().zip(row) {
            if c.is_zero() || w.is_zero() {
                continue;
            }
            let lift = self.disc_pow(k - kw);
            num += &(&(c * &w) * &lift);
        }
        (num, k)
    }

    /// Rewrites a symmetric polynomial in `Df` (and possibly `Ds`) as
    /// `numerator(Ds) / Δ^k`, with `k` as small as exact division by `Δ` allows.
    ///
    /// The orbit sum of a monomial `Π_{i ∈ I} X_i(f_i)` is expanded over set
    /// partitions of `I` into products of traces `Σ_j Π_{i ∈ B} X_i(f_j)`;
    /// each `X_i` is `G_i / P_x^{N_i}`, and the traces are computed with
    /// `P_x^{-1} ≡ A / Δ (mod P)` and `Tr(G / P_x) = [Y^{n-1}] (G mod P)`.
    pub fn rewrite(&mut self, p: &DiffPoly) -> Result<LocalizedExpr, SymfunError> {
        self.check_input(p)?;
        let n = self.n;
        let reps = self.orbit_representatives(p);
        let mut total = DiffPoly::zero();
        let mut total_k = 0u32;
        for (m, w) in reps {
            let (rest, roots) = self.split_monomial(&m)?;
            let used: Vec<(YPoly, u32)> = (0..n as usize)
                .filter(|&i| m.factors().iter().any(|(s, _)| s.kind == SymbolKind::F && s.index as usize == i + 1))
                .map(|i| roots[i].clone())
                .collect();
            // Σ over injective placements = Σ_π μ(π) Π_{B ∈ π} Tr(Π_{i ∈ B} X_i)
            let mut inj = DiffPoly::zero();
            let mut inj_k = 0u32;
            for part in set_partitions(used.len()) {
                let mut coef = Rat::one();
                let mut prod = DiffPoly::one();
                let mut k = 0;
                for block in &part {
                    let b = block.len() as u64;
                    let sign = if b % 2 == 0 { -1i64 } else { 1 };
                    coef = coef * Rat::from(sign * (1..b).product::<u64>() as i64);
                    let mut g = vec![DiffPoly::one()];
                    let mut nb = 0;
                    for &i in block {
                        g = self.reduce(pmul(&g, &used[i].0));
                        nb += used[i].1;
                    }
                    let (t, kt) = self.trace(&g, nb);
                    prod = prod * t;
                    k += kt;
                }
                (inj, inj_k) = self.add_local((inj, inj_k), (prod.scale_rat(&coef), k));
            }
            let free: u64 = (1..=(n as u64 - used.len() as u64)).product();
            let scaled = inj.mul_monomial(&rest, &(w * Rat::from(free)));
            (total, total_k) = self.add_local((total, total_k), (scaled, inj_k));
        }
        let (numerator, disc_power) = self.simplify(total, total_k);
        Ok(LocalizedExpr { numerator, disc_power })
    }

    fn add_local(&mut self, a: (DiffPoly, u32), b: (DiffPoly, u32)) -> (DiffPoly, u32) {
        if a.0.is_zero() {
            return b;
        }
        if b.0.is_zero() {
            return a;
        }
        let k = a.1.max(b.1);
        let mut x = &a.0 * &self.disc_pow(k - a.1);
        x += &(&b.0 * &self.disc_pow(k - b.1));
        (x, k)
    }
}

/// Laplace expansion along the first row.
fn determinant(m: &[Vec<DiffPoly>]) -> DiffPoly {
    let k = m.len();
    if k == 0 {
        return DiffPoly::one();
    }
    let mut acc = DiffPoly::zero();
    for c in 0..k {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<DiffPoly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect()).collect();
        let t = &m[0][c] * &determinant(&minor);
        if c % 2 == 0 {
            acc += &t;
        } else {
            acc -= &t;
        }
    }
    acc
}

/// All set partitions of `0..k`, blocks in order of their smallest element.
fn set_partitions(k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for x in 0..k {
        let mut next = Vec::new();
        for p in &out {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(x);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![x]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// `e_k(f_1, ..., f_n)` as a polynomial in the roots.
pub fn elementary_in_roots(n: u32, k: u32) -> DiffPoly {
    // coefficients of Π (1 + f_i T)
    let mut e = vec![DiffPoly::one()];
    for i in 1..=n {
        let f = var(DiffSymbol::f(i));
        let mut next = e.clone();
        next.push(DiffPoly::zero());
        for j in 1..next.len() {
            next[j] = &next[j] + &(&e[j - 1] * &f);
        }
        e = next;
    }
    e.get(k as usize).cloned().unwrap_or_else(DiffPoly::zero)
}

/// Substitutes `∂^a s_k ↦ ∂^a ((-1)^k e_k(f))`, expressing a polynomial in
/// `Ds` (and `Df`) through the roots alone.
pub fn expand_in_roots(p: &DiffPoly, n: u32) -> DiffPoly {
    let signed: Vec<DiffPoly> = (0..=n)
        .map(|k| {
            let e = elementary_in_roots(n, k);
            if k % 2 == 1 {
                -e
            } else {
                e
            }
        })
        .collect();
    p.substitute(&|s: &DiffSymbol| {
        (s.kind == SymbolKind::S && s.index >= 1 && s.index <= n)
            .then(|| signed[s.index as usize].differentiate_multi(s.deriv()))
    })
}

/// `Y ↦ f_i` (with derivatives).
pub fn substitute_root(p: &DiffPoly, i: u32) -> DiffPoly {
    p.rename(|s| if s.kind == SymbolKind::Y { DiffSymbol::new(SymbolKind::F, i, s.deriv().to_vec()) } else { s.clone() })
}
