//! The Fock-space model of `H*_T(Hilb^n(C^2))` in the Nakajima basis, the
//! operator `M_D` of quantum multiplication by `D`, and its traces.
//!
//! Conventions. On power sums the Heisenberg operators act by
//! `α_{-r} p_μ = p_{μ ∪ r}` and `α_r p_μ = r m_r(μ) p_{μ \ r}`, and the
//! Nakajima basis vector is `|μ⟩ = p_μ / z(μ)`. With these choices
//! `M_D |1^n⟩ = -|2,1^{n-2}⟩`, the operator is self-adjoint for the diagonal
//! Gram matrix `(-1)^{n-ℓ(μ)} / ((t1 t2)^{ℓ(μ)} z(μ))`, and
//!
//! ```text
//! M_D = (t1+t2) Σ_k (k/2) c_k α_{-k} α_k
//!     + 1/2 Σ_{k,l} [ t1 t2 α_{k+l} α_{-k} α_{-l} - α_{-k-l} α_k α_l ]
//!     - (t1+t2)/2 c_1 |μ|
//! ```
//!
//! with `c_r = ((-q)^r + 1) / ((-q)^r - 1)`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::combinatorics::{partitions, Partition};
use crate::kernel::{Frac, GcdDomain, Matrix, Mode, Rat, RatFunc, Ring, Symbolic};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HilbError {
    #[error("the powers of D are linearly dependent for n = {0}")]
    Degenerate(u32),
    #[error("n must be at least {min}, got {n}")]
    TooSmall { n: u32, min: u32 },
}

/// A vector in the Nakajima basis of a fixed `Hilb^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<S> {
    n: u32,
    coeffs: BTreeMap<Partition, S>,
}

impl<S: Ring> FockVector<S> {
    pub fn basis(mu: &Partition) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(mu.clone(), S::one());
        FockVector { n: mu.size(), coeffs }
    }

    /// Coordinates in canonical partition order.
    pub fn from_dense(n: u32, v: &[S]) -> Self {
        let coeffs = partitions(n)
            .into_iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (p, c.clone()))
            .collect();
        FockVector { n, coeffs }
    }

    pub fn to_dense(&self) -> Vec<S> {
        partitions(self.n).iter().map(|p| self.coeff(p)).collect()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeff(&self, mu: &Partition) -> S {
        self.coeffs.get(mu).cloned().unwrap_or_else(S::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Partition, &S)> {
        self.coeffs.iter()
    }
}

/// `α_{-r} p_μ = p_{μ ∪ r}`.
pub fn alpha_create(r: u32, mu: &Partition) -> Partition {
    mu.with_part(r)
}

/// `α_r p_μ = r m_r(μ) p_{μ \ r}`; `None` when `r` is not a part.
pub fn alpha_annihilate(r: u32, mu: &Partition) -> Option<(Rat, Partition)> {
    let m = mu.multiplicity(r);
    let rest = mu.without_part(r)?;
    Some((Rat::from((r as usize * m) as i64), rest))
}

/// The cubic part of `M_D` on `p_ν`, split into the `t1 t2` splitting terms
/// and the joining terms: `(λ, splitting coefficient, joining coefficient)`.
fn cubic_terms(nu: &Partition) -> BTreeMap<Partition, (Rat, Rat)> {
    let mut out: BTreeMap<Partition, (Rat, Rat)> = BTreeMap::new();
    let half = Rat::new(1, 2);
    for (r, _) in nu.multiplicities() {
        // α_{k+l} α_{-k} α_{-l} with k + l = r
        let Some((f, rest)) = alpha_annihilate(r, nu) else { continue };
        for k in 1..r {
            let lam = alpha_create(k, &alpha_create(r - k, &rest));
            out.entry(lam).or_insert_with(|| (Rat::zero(), Rat::zero())).0 += &(&half * &f);
        }
    }
    let parts: Vec<u32> = nu.multiplicities().iter().map(|&(p, _)| p).collect();
    for &l in &parts {
        let Some((fl, rest)) = alpha_annihilate(l, nu) else { continue };
        for &k in &parts {
            let Some((fk, rest2)) = alpha_annihilate(k, &rest) else { continue };
            let lam = alpha_create(k + l, &rest2);
            out.entry(lam).or_insert_with(|| (Rat::zero(), Rat::zero())).1 -= &(&half * &(&fl * &fk));
        }
    }
    out
}

/// Diagonal entry `(t1+t2) Σ_i [ (μ_i^2/2) c_{μ_i} - (μ_i/2) c_1 ]`.
fn diagonal_entry<M: Mode>(mode: &M, mu: &Partition, tsum: &M::S) -> M::S {
    let mut weights: BTreeMap<u32, Rat> = BTreeMap::new();
    for &p in mu.parts() {
        *weights.entry(p).or_insert_with(Rat::zero) += &Rat::new(p * p, 2);
        *weights.entry(1).or_insert_with(Rat::zero) -= &Rat::new(p, 2);
    }
    let mut acc = M::S::zero();
    for (r, w) in weights {
        if !w.is_zero() {
            acc = acc.add_ref(&mode.cot(r).scale_rat(&w));
        }
    }
    acc.mul_ref(tsum)
}

/// The matrix of `D ⋆` on `Hilb^n` in the Nakajima basis, rows and columns in
/// canonical partition order.
pub fn build_md<M: Mode>(mode: &M, n: u32) -> Matrix<M::S> {
    let parts = partitions(n);
    let index: BTreeMap<&Partition, usize> = parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let tsum = mode.t1().add_ref(&mode.t2());
    let tprod = mode.t1().mul_ref(&mode.t2());
    let z: Vec<BigInt> = parts.iter().map(|p| p.z()).collect();

    let columns: Vec<Vec<(usize, M::S)>> = parts
        .par_iter()
        .enumerate()
        .map(|(j, nu)| {
            let mut col = vec![(j, diagonal_entry(mode, nu, &tsum))];
            for (lam, (split, join)) in cubic_terms(nu) {
                let i = index[&lam];
                // |ν⟩ = p_ν / z(ν): rescale the p-basis coefficient by z(λ)/z(ν)
                let scale = Rat::new(z[i].clone(), z[j].clone());
                let v = tprod.scale_rat(&(&split * &scale)).add_ref(&M::S::from_rat(&(&join * &scale)));
                if !v.is_zero() {
                    col.push((i, v));
                }
            }
            col
        })
        .collect();

    let mut m: Matrix<M::S> = Matrix::zeros(parts.len(), parts.len());
    for (j, col) in columns.into_iter().enumerate() {
        for (i, v) in col {
            let cur = m.get(i, j).add_ref(&v);
            m.set(i, j, cur);
        }
    }
    m
}

/// `Tr_n = Σ_{μ ⊢ n} Σ_i [ (μ_i^2/2) c_{μ_i} - (μ_i/2) c_1 ]`, summed term by term.
pub fn trn_in<M: Mode>(mode: &M, n: u32) -> M::S {
    let c1 = mode.cot(1);
    let mut acc = M::S::zero();
    for mu in partitions(n) {
        for &p in mu.parts() {
            let a = mode.cot(p).scale_rat(&Rat::new(p * p, 2));
            let b = c1.scale_rat(&Rat::new(p, 2));
            acc = acc.add_ref(&a.sub_ref(&b));
        }
    }
    acc
}

/// [`trn_in`] fully symbolically.
pub fn trn(n: u32) -> RatFunc {
    trn_in(&Symbolic, n)
}

/// The diagonal Gram matrix entries `(-1)^{n-ℓ(μ)} / ((t1 t2)^{ℓ(μ)} z(μ))`.
pub fn gram_diagonal<M: Mode>(mode: &M, n: u32) -> Vec<M::S> {
    let tprod = mode.t1().mul_ref(&mode.t2());
    let inv = tprod.inv_opt().expect("t1 t2 must be invertible");
    partitions(n)
        .iter()
        .map(|mu| {
            let sign = if (n as usize - mu.len()) % 2 == 0 { 1 } else { -1 };
            inv.pow_u(mu.len() as u32).scale_rat(&Rat::new(BigInt::from(sign), mu.z()))
        })
        .collect()
}

/// `M^T G = G M` for `M = M_D` and the diagonal Gram matrix.
pub fn selfadjoint_check<M: Mode>(mode: &M, n: u32) -> bool {
    let m = build_md(mode, n);
    let g = gram_diagonal(mode, n);
    let d = g.len();
    (0..d).all(|i| (0..d).all(|j| m.get(j, i).mul_ref(&g[j]) == g[i].mul_ref(m.get(i, j))))
}

/// Nakajima coordinates of `D^{⋆k} = M_D^k |1^n⟩` for `k = 0 .. |Part(n)| - 1`.
pub fn dpower_vectors<S: Ring>(md: &Matrix<S>) -> Vec<Vec<S>> {
    let d = md.rows();
    let mut v = vec![S::zero(); d];
    v[d - 1] = S::one(); // (1^n) is last in canonical order
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        let next = md.mul_vec(&v);
        out.push(std::mem::replace(&mut v, next));
    }
    out
}

/// The `D`-power basis together with its coordinate matrix (columns are the vectors).
pub struct DPowerBasis<S> {
    pub vectors: Vec<FockVector<S>>,
    pub coordinates: Matrix<S>,
}

/// The quantum powers of `D` applied to the unit; fails if they are dependent.
pub fn dpower_basis<M: Mode>(mode: &M, n: u32) -> Result<DPowerBasis<M::S>, HilbError> {
    if n == 0 {
        return Err(HilbError::TooSmall { n, min: 1 });
    }
    let md = build_md(mode, n);
    let vecs = dpower_vectors(&md);
    let d = vecs.len();
    let coords = Matrix::from_fn(d, d, |i, k| vecs[k][i].clone());
    // A solvable system certifies invertibility of the coordinate matrix.
    let mut e = vec![M::S::zero(); d];
    e[0] = M::S::one();
    if d > 1 && mode.solve(&coords, &e).is_none() {
        return Err(HilbError::Degenerate(n));
    }
    let vectors = vecs.iter().map(|v| FockVector::from_dense(n, v)).collect();
    Ok(DPowerBasis { vectors, coordinates: coords })
}

/// `M_D`, its powers and the `D`-power coordinates for one `n`, kept over a
/// single common denominator.
///
/// Writing `M_D = N / L` with `N` a polynomial matrix, all powers are `N^k / L^k`
/// and the coordinate matrix of the `D`-powers becomes polynomial after scaling
/// column `k` by `L^k`. Everything up to the final quotient is therefore done
/// without a single gcd.
pub struct QuantumRing<D: GcdDomain> {
    n: u32,
    denom: D,
    num_powers: Vec<Matrix<D>>,
    coordinates: Matrix<D>,
    solved: OnceLock<Option<(Matrix<D>, D)>>,
}

impl<D: GcdDomain> QuantumRing<D> {
    pub fn new<M: Mode<S = Frac<D>>>(mode: &M, n: u32) -> Result<Self, HilbError> {
        if n == 0 {
            return Err(HilbError::TooSmall { n, min: 1 });
        }
        let md = build_md(mode, n);
        let d = md.rows();
        let mut denom = D::one();
        for i in 0..d {
            for j in 0..d {
                let e = md.get(i, j).den();
                let g = denom.gcd(e);
                denom = denom.mul_ref(&e.div_exact(&g).expect("gcd divides"));
            }
        }
        let num = md.map(|x| x.num().mul_ref(&denom.div_exact(x.den()).expect("common multiple")));
        let mut num_powers = vec![Matrix::identity(d)];
        for k in 1..d {
            let next = num_powers[k - 1].mul_ref(&num);
            num_powers.push(next);
        }
        let coordinates = Matrix::from_fn(d, d, |i, k| num_powers[k].get(i, d - 1).clone());
        Ok(QuantumRing { n, denom, num_powers, coordinates, solved: OnceLock::new() })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.num_powers.len()
    }

    /// The common denominator `L` of `M_D`.
    pub fn denominator(&self) -> &D {
        &self.denom
    }

    pub fn md(&self) -> Matrix<Frac<D>> {
        let d = self.dim();
        if d == 1 {
            return Matrix::zeros(1, 1);
        }
        self.num_powers[1].map(|x| Frac::new(x.clone(), self.denom.clone()))
    }

    /// Determinant of the scaled `D`-power coordinate matrix; nonzero iff the
    /// powers of `D` form a basis.
    pub fn coordinate_det(&self) -> D {
        self.coordinates.det_bareiss()
    }

    /// `(y, det)` with `Σ_k (y_k / det) L^k D^{⋆k} = |μ⟩`.
    ///
    /// One elimination against the identity serves every `μ`; it is done on
    /// first use and kept.
    fn scaled_coefficients(&self, mu: &Partition) -> Result<(Vec<D>, D), HilbError> {
        assert_eq!(mu.size(), self.n, "partition of the wrong size");
        let idx = partitions(self.n).iter().position(|p| p == mu).expect("partition of n");
        let solved = self
            .solved
            .get_or_init(|| self.coordinates.solve_bareiss_many(&Matrix::identity(self.dim())));
        let (y, det) = solved.as_ref().ok_or(HilbError::Degenerate(self.n))?;
        Ok((y.column(idx), det.clone()))
    }

    /// `(A, det)` with `M_{|μ⟩} = A / det` and `A` free of denominators.
    pub fn mult_numerator(&self, mu: &Partition) -> Result<(Matrix<D>, D), HilbError> {
        let (y, det) = self.scaled_coefficients(mu)?;
        let d = self.dim();
        let mut acc: Matrix<D> = Matrix::zeros(d, d);
        for (yk, pk) in y.iter().zip(&self.num_powers) {
            if !yk.is_zero() {
                acc = acc.add_ref(&pk.scale(yk));
            }
        }
        Ok((acc, det))
    }

    /// Coefficients `c_k` with `Σ_k c_k D^{⋆k} = |μ⟩`.
    pub fn dpower_coefficients(&self, mu: &Partition) -> Result<Vec<Frac<D>>, HilbError> {
        let (y, det) = self.scaled_coefficients(mu)?;
        Ok(y.into_iter()
            .enumerate()
            .map(|(k, yk)| Frac::new(yk.mul_ref(&self.denom.pow_u(k as u32)), det.clone()))
            .collect())
    }

    /// `|μ⟩ ⋆ |ν⟩ = |ν⟩ ⋆ |μ⟩` for every pair of basis vectors, compared
    /// column against column after cross-multiplying the scalar denominators.
    /// Returns the first failing pair.
    pub fn commutativity_check(&self) -> Result<(), (Partition, Partition)> {
        let parts = partitions(self.n);
        let ops: Vec<(Matrix<D>, D)> = parts.iter().map(|mu| self.mult_numerator(mu)).collect::<Result<_, _>>().map_err(|_| (parts[0].clone(), parts[0].clone()))?;
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let (a, da) = &ops[i];
                let (b, db) = &ops[j];
                let ok = (0..self.dim()).all(|r| a.get(r, j).mul_ref(db) == b.get(r, i).mul_ref(da));
                if !ok {
                    return Err((parts[i].clone(), parts[j].clone()));
                }
            }
        }
        Ok(())
    }

    /// `M_{|μ⟩} = Σ_k c_k M_D^k`.
    pub fn mult_operator(&self, mu: &Partition) -> Result<Matrix<Frac<D>>, HilbError> {
        let (acc, det) = self.mult_numerator(mu)?;
        Ok(acc.map(|x| Frac::new(x.clone(), det.clone())))
    }

    /// `Tr_m^μ = trace M_{|μ⟩}`.
    pub fn trmu(&self, mu: &Partition) -> Result<Frac<D>, HilbError> {
        let (y, det) = self.scaled_coefficients(mu)?;
        let num = y.iter().zip(&self.num_powers).fold(D::zero(), |acc, (yk, pk)| acc.add_ref(&yk.mul_ref(&pk.trace())));
        Ok(Frac::new(num, det))
    }

    /// [`QuantumRing::trmu`] without the final gcd reduction, which dominates
    /// the cost in symbolic mode.
    pub fn trmu_unreduced(&self, mu: &Partition) -> Result<Frac<D>, HilbError> {
        let (y, det) = self.scaled_coefficients(mu)?;
        let num = y.iter().zip(&self.num_powers).fold(D::zero(), |acc, (yk, pk)| acc.add_ref(&yk.mul_ref(&pk.trace())));
        Ok(Frac::new_unreduced(num, det))
    }
}

/// One-shot [`QuantumRing::mult_operator`].
pub fn mult_operator<D: GcdDomain, M: Mode<S = Frac<D>>>(mode: &M, mu: &Partition) -> Result<Matrix<Frac<D>>, HilbError> {
    QuantumRing::new(mode, mu.size())?.mult_operator(mu)
}

/// One-shot [`QuantumRing::trmu`].
pub fn trmu<D: GcdDomain, M: Mode<S = Frac<D>>>(mode: &M, mu: &Partition) -> Result<Frac<D>, HilbError> {
    QuantumRing::new(mode, mu.size())?.trmu(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{rat, Specialized};

    #[test]
    fn md_on_unit_is_minus_hook() {
        for n in 2..=5 {
            let m = build_md(&Specialized::new(rat(1, 1), rat(5, 1)), n);
            let d = m.rows();
            let hook = partitions(n).iter().position(|p| *p == Partition::hook(n)).unwrap();
            for i in 0..d {
                let expect = if i == hook { -Rat::one() } else { Rat::zero() };
                assert_eq!(m.get(i, d - 1).eval(&rat(1, 3)), Some(expect));
            }
        }
    }

    #[test]
    fn n1_is_zero() {
        assert!(build_md(&Symbolic, 1).is_zero());
        assert!(trn(1).is_zero());
    }
}
