//! Numerical ground truth: explicit polynomial roots `f_i(z)` evaluated at a
//! rational point, and random symmetric inputs.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::{Rat, Ring};

use super::{DiffPoly, DiffSymbol, LocalizedExpr, Monomial, SymbolKind};

/// A polynomial in `z_1, ..., z_m` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    m: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero(m: usize) -> Self {
        MPoly { m, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: Rat) -> Self {
        let mut p = Self::zero(m);
        p.add_term(vec![0; m], c);
        p
    }

    /// `z_j` (0-based `j`).
    pub fn var(m: usize, j: usize) -> Self {
        let mut e = vec![0; m];
        e[j] = 1;
        let mut p = Self::zero(m);
        p.add_term(e, Rat::one());
        p
    }

    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Self::zero(m);
        for (e, c) in terms {
            assert_eq!(e.len(), m, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.remove(&e).map_or(c.clone(), |x| x + c);
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        let mut out = Self::zero(self.m);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = Self::zero(self.m);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a.iter().zip(b).map(|(u, v)| u + v).collect(), x * y);
            }
        }
        out
    }

    /// `∂^a` with `a` padded by zeros.
    pub fn derivative(&self, a: &[u32]) -> MPoly {
        let mut out = Self::zero(self.m);
        'term: for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let mut c2 = c.clone();
            for (j, &k) in a.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if j >= self.m || e2[j] < k {
                    continue 'term;
                }
                for t in 0..k {
                    c2 = c2 * Rat::from(e2[j] - t);
                }
                e2[j] -= k;
            }
            out.add_term(e2, c2);
        }
        out
    }

    pub fn eval(&self, z: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in z.iter().zip(e) {
                t = t * x.pow_u(k);
            }
            acc = acc + t;
        }
        acc
    }
}

/// Explicit roots `f_1(z), ..., f_n(z)`.
#[derive(Clone, Debug)]
pub struct Family {
    roots: Vec<MPoly>,
    signed: Vec<MPoly>,
}

impl Family {
    pub fn new(roots: Vec<MPoly>) -> Self {
        assert!(!roots.is_empty(), "at least one root");
        let m = roots[0].nvars();
        assert!(roots.iter().all(|r| r.nvars() == m), "common variables");
        // Π (x - f_i) = Σ_k s_k x^{n-k}
        let mut s = vec![MPoly::constant(m, Rat::one())];
        for f in &roots {
            let minus_f = f.scale(&-Rat::one());
            let mut next = s.clone();
            next.push(MPoly::zero(m));
            for k in 1..next.len() {
                next[k] = next[k].add(&s[k - 1].mul(&minus_f));
            }
            s = next;
        }
        Family { roots, signed: s }
    }

    /// Random roots of total degree at most `degree` with small integer coefficients.
    pub fn random(n: u32, m: usize, degree: u32, rng: &mut impl Rng) -> Self {
        let mut exps = vec![Vec::new()];
        for _ in 0..m {
            exps = exps
                .into_iter()
                .flat_map(|e: Vec<u32>| (0..=degree).map(move |k| [e.clone(), vec![k]].concat()))
                .collect();
        }
        exps.retain(|e| e.iter().sum::<u32>() <= degree);
        let roots = (0..n)
            .map(|_| MPoly::from_terms(m, exps.iter().map(|e| (e.clone(), Rat::from(rng.gen_range(-3i64..=3))))))
            .collect();
        Family::new(roots)
    }

    pub fn n(&self) -> u32 {
        self.roots.len() as u32
    }

    pub fn nvars(&self) -> usize {
        self.roots[0].nvars()
    }

    pub fn root(&self, i: u32) -> &MPoly {
        &self.roots[i as usize - 1]
    }

    /// `s_k(z) = (-1)^k e_k(f(z))`.
    pub fn signed_elementary(&self, k: u32) -> &MPoly {
        &self.signed[k as usize]
    }

    /// The value of a symbol at `z`; `None` for `Y` or an out-of-range index.
    pub fn value(&self, s: &DiffSymbol, z: &[Rat]) -> Option<Rat> {
        let n = self.n();
        let p = match s.kind {
            SymbolKind::F if (1..=n).contains(&s.index) => self.root(s.index),
            SymbolKind::S if (1..=n).contains(&s.index) => self.signed_elementary(s.index),
            _ => return None,
        };
        Some(p.derivative(s.deriv()).eval(z))
    }

    /// `Π_{i ≠ j} (f_i(z) - f_j(z))`.
    pub fn discriminant(&self, z: &[Rat]) -> Rat {
        let v: Vec<Rat> = self.roots.iter().map(|f| f.eval(z)).collect();
        let mut acc = Rat::one();
        for (i, a) in v.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                if i != j {
                    acc = acc * (a - b);
                }
            }
        }
        acc
    }

    /// `Π_i P_x(f_i(z))` with `P(x) = Σ_k s_k(z) x^{n-k}`.
    pub fn discriminant_from_px(&self, z: &[Rat]) -> Rat {
        let n = self.n();
        let s: Vec<Rat> = (0..=n).map(|k| self.signed[k as usize].eval(z)).collect();
        let mut acc = Rat::one();
        for f in &self.roots {
            let x = f.eval(z);
            let mut px = Rat::zero();
            for k in 0..n {
                px = px + &s[k as usize] * &Rat::from(n - k) * x.pow_u(n - k - 1);
            }
            acc = acc * px;
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("the roots collide at the evaluation point")]
    Degenerate,
    #[error("symbol {0} has no value in this family")]
    Unbound(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub direct: Rat,
    pub rewritten: Rat,
    pub discriminant: Rat,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.direct == self.rewritten
    }
}

fn eval_in(p: &DiffPoly, family: &Family, z: &[Rat]) -> Result<Rat, OracleError> {
    p.eval(&|s: &DiffSymbol| family.value(s, z)).ok_or_else(|| {
        let s = p.symbols().find(|s| family.value(s, z).is_none()).expect("some symbol is unbound");
        OracleError::Unbound(s.to_string())
    })
}

/// Evaluates `input` directly on the family and `expr` through `s_k(z)` and
/// `Δ(z)`.
pub fn evaluation_oracle(
    input: &DiffPoly,
    expr: &LocalizedExpr,
    family: &Family,
    z: &[Rat],
) -> Result<OracleReport, OracleError> {
    let disc = family.discriminant(z);
    if disc.is_zero() {
        return Err(OracleError::Degenerate);
    }
    let direct = eval_in(input, family, z)?;
    let rewritten = eval_in(&expr.numerator, family, z)? / disc.pow_u(expr.disc_power);
    Ok(OracleReport { direct, rewritten, discriminant: disc })
}

/// A random symmetric polynomial: the symmetrization of one or two random
/// monomials with one to three factors `∂^a f_i`, whose derivative orders
/// add up to at most `max_order`.
pub fn random_symmetric(n: u32, m: usize, max_order: u32, rng: &mut impl Rng) -> DiffPoly {
    let mut out = DiffPoly::zero();
    while out.is_zero() {
        for _ in 0..rng.gen_range(1..=2) {
            let nf = rng.gen_range(1..=3usize);
            let mut derivs = vec![vec![0u32; m]; nf];
            for _ in 0..rng.gen_range(0..=max_order) {
                derivs[rng.gen_range(0..nf)][rng.gen_range(0..m)] += 1;
            }
            let factors = derivs
                .into_iter()
                .map(|a| (DiffSymbol::new(SymbolKind::F, rng.gen_range(1..=n), a), 1))
                .collect();
            let mut c = 0i64;
            while c == 0 {
                c = rng.gen_range(-5..=5);
            }
            let mono = DiffPoly::monomial(Monomial::from_unsorted(factors), Rat::from(c));
            out += &mono.symmetrize(n);
        }
    }
    out
}

/// A random point with small rational coordinates.
pub fn random_point(m: usize, rng: &mut impl Rng) -> Vec<Rat> {
    (0..m).map(|_| Rat::new(rng.gen_range(-7i64..=7), rng.gen_range(1i64..=3))).collect()
}

/// A symmetric input together with a root family and a point where the roots
/// are distinct.
#[derive(Clone, Debug)]
pub struct OracleCase {
    pub input: DiffPoly,
    pub family: Family,
    pub point: Vec<Rat>,
}

impl OracleCase {
    pub fn random(n: u32, m: usize, max_order: u32, rng: &mut impl Rng) -> Self {
        let input = random_symmetric(n, m, max_order, rng);
        let family = Family::random(n, m, 3, rng);
        loop {
            let point = random_point(m, rng);
            if !family.discriminant(&point).is_zero() {
                return OracleCase { input, family, point };
            }
        }
    }

    pub fn n(&self) -> u32 {
        self.family.n()
    }

    pub fn nvars(&self) -> usize {
        self.family.nvars()
    }
}

/// `count` cases from one seeded stream, with `n` cycling through `2..=4`,
/// `m` through `1..=2` and derivative order at most 3.
pub fn random_cases(count: usize, seed: u64) -> Vec<OracleCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| OracleCase::random(2 + (k % 3) as u32, 1 + (k / 3) % 2, 3, &mut rng))
        .collect()
}
