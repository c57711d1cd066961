//! Dense matrices over a [`Ring`]: products, traces, the division-free
//! Berkowitz characteristic polynomial, and exact solvers.

use rayon::prelude::*;

use super::frac::Frac;
use super::ring::{Field, GcdDomain, Ring};

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Ring> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn from_rows(v: Vec<Vec<S>>) -> Self {
        let rows = v.len();
        let cols = v.first().map_or(0, |r| r.len());
        assert!(v.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows, cols, data: v.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self) -> S {
        assert!(self.is_square());
        (0..self.rows).fold(S::zero(), |acc, i| acc.add_ref(self.get(i, i)))
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|a| a.mul_ref(s))
    }

    /// Row-parallel product.
    pub fn mul_ref(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let rows: Vec<Vec<S>> = (0..self.rows)
            .into_par_iter()
            .map(|i| {
                (0..o.cols)
                    .map(|j| {
                        let mut acc = S::zero();
                        for k in 0..self.cols {
                            let a = self.get(i, k);
                            if a.is_zero() {
                                continue;
                            }
                            let b = o.get(k, j);
                            if !b.is_zero() {
                                acc = acc.add_ref(&a.mul_ref(b));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Matrix { rows: self.rows, cols: o.cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add_ref(&a.mul_ref(b));
                    }
                }
                acc
            })
            .collect()
    }

    /// Coefficients of `det(x I - self)` in ascending degree (monic, length `n + 1`).
    ///
    /// Berkowitz's algorithm: only ring operations, no divisions.
    pub fn charpoly(&self) -> Vec<S> {
        assert!(self.is_square());
        let mut v = berkowitz_vector(self);
        v.reverse();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul_ref(self);
        }
        acc
    }
}

/// Characteristic coefficients, highest degree first.
fn berkowitz_vector<S: Ring>(m: &Matrix<S>) -> Vec<S> {
    let n = m.rows;
    if n == 0 {
        return vec![S::one()];
    }
    if n == 1 {
        return vec![S::one(), m.get(0, 0).neg_ref()];
    }
    let a = m.get(0, 0).clone();
    let sub = Matrix::from_fn(n - 1, n - 1, |i, j| m.get(i + 1, j + 1).clone());
    let r: Vec<S> = (1..n).map(|j| m.get(0, j).neg_ref()).collect();
    let mut c: Vec<S> = (1..n).map(|i| m.get(i, 0).clone()).collect();

    // diags = [1, -a, R C, R A C, ..., R A^{n-2} C] with R already negated
    let mut diags = vec![S::one(), a.neg_ref()];
    for step in 0..n - 1 {
        if step > 0 {
            c = sub.mul_vec(&c);
        }
        let mut acc = S::zero();
        for (x, y) in r.iter().zip(&c) {
            if !x.is_zero() && !y.is_zero() {
                acc = acc.add_ref(&x.mul_ref(y));
            }
        }
        diags.push(acc);
    }
    let tail = berkowitz_vector(&sub);
    // Toeplitz (n+1) x n lower-triangular matrix times tail
    (0..=n)
        .map(|i| {
            let mut acc = S::zero();
            for (j, t) in tail.iter().enumerate().take(i + 1) {
                let d = &diags[i - j];
                if !d.is_zero() && !t.is_zero() {
                    acc = acc.add_ref(&d.mul_ref(t));
                }
            }
            acc
        })
        .collect()
}

impl<D: GcdDomain> Matrix<D> {
    /// Determinant by Bareiss fraction-free elimination.
    pub fn det_bareiss(&self) -> D {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut prev = D::one();
        let mut negate = false;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return D::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a.get(k, k).mul_ref(a.get(i, j)).sub_ref(&a.get(i, k).mul_ref(a.get(k, j)));
                    a.set(i, j, v.div_exact(&prev).expect("Bareiss division is exact"));
                }
                a.set(i, k, D::zero());
            }
            prev = a.get(k, k).clone();
        }
        if negate {
            prev.neg_ref()
        } else {
            prev
        }
    }

    /// Solves `self * x = b` fraction-free: returns `(y, d)` with `x = y / d`,
    /// or `None` when the matrix is singular.
    pub fn solve_bareiss(&self, b: &[D]) -> Option<(Vec<D>, D)> {
        let rhs = Matrix::from_fn(b.len(), 1, |i, _| b[i].clone());
        let (y, d) = self.solve_bareiss_many(&rhs)?;
        Some((y.column(0), d))
    }

    /// Fraction-free solve for several right-hand sides at once: `self * (Y / d) = rhs`.
    ///
    /// Gauss-Jordan in Bareiss form; every intermediate entry is a minor of
    /// the augmented matrix, so each division is exact. With `rhs = I` the
    /// result is `(±adj, ±det)`.
    pub fn solve_bareiss_many(&self, rhs: &Matrix<D>) -> Option<(Matrix<D>, D)> {
        assert!(self.is_square());
        let n = self.rows;
        let m = rhs.cols;
        assert_eq!(rhs.rows, n);
        let mut a = Matrix::from_fn(n, n + m, |i, j| if j < n { self.get(i, j).clone() } else { rhs.get(i, j - n).clone() });
        let mut prev = D::one();
        for k in 0..n {
            let p = (k..n).find(|&i| !a.get(i, k).is_zero())?;
            a.swap_rows(p, k);
            let piv = a.get(k, k).clone();
            let pivot_row: Vec<D> = a.row(k).to_vec();
            let updated: Vec<(usize, Vec<D>)> = (0..n)
                .into_par_iter()
                .filter(|&i| i != k)
                .map(|i| {
                    let f = a.get(i, k).clone();
                    let row = (0..n + m)
                        .map(|j| {
                            if j == k {
                                return D::zero();
                            }
                            let v = piv.mul_ref(a.get(i, j)).sub_ref(&f.mul_ref(&pivot_row[j]));
                            v.div_exact(&prev).expect("Bareiss division is exact")
                        })
                        .collect();
                    (i, row)
                })
                .collect();
            for (i, row) in updated {
                for (j, v) in row.into_iter().enumerate() {
                    a.set(i, j, v);
                }
            }
            prev = piv;
        }
        Some((Matrix::from_fn(n, m, |i, j| a.get(i, n + j).clone()), prev))
    }
}

impl<F: Field> Matrix<F> {
    /// Solves `self * x = b` by Gaussian elimination over a field.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let inv = self.solve_many(&Matrix::from_fn(b.len(), 1, |i, _| b[i].clone()))?;
        Some(inv.column(0))
    }

    pub fn inverse(&self) -> Option<Self> {
        self.solve_many(&Matrix::identity(self.rows))
    }

    pub fn solve_many(&self, rhs: &Self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let m = rhs.cols;
        let mut a = Matrix::from_fn(n, n + m, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - n).clone()
            }
        });
        for k in 0..n {
            let p = (k..n).find(|&i| !a.get(i, k).is_zero())?;
            a.swap_rows(p, k);
            let inv = a.get(k, k).inv();
            for j in k..n + m {
                let v = a.get(k, j).mul_ref(&inv);
                a.set(k, j, v);
            }
            for i in 0..n {
                if i == k || a.get(i, k).is_zero() {
                    continue;
                }
                let f = a.get(i, k).clone();
                for j in k..n + m {
                    let v = a.get(i, j).sub_ref(&f.mul_ref(a.get(k, j)));
                    a.set(i, j, v);
                }
            }
        }
        Some(Matrix::from_fn(n, m, |i, j| a.get(i, n + j).clone()))
    }
}

impl<S: Ring> Matrix<S> {
    /// Gauss-Jordan over a ring, pivoting only on units.
    ///
    /// Succeeds over truncated series whenever the constant-term matrix is
    /// invertible.
    pub fn solve_unit_pivot(&self, b: &[S]) -> Option<Vec<S>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = Matrix::from_fn(n, n + 1, |i, j| if j < n { self.get(i, j).clone() } else { b[i].clone() });
        for k in 0..n {
            let (p, inv) = (k..n).find_map(|i| a.get(i, k).inv_opt().map(|v| (i, v)))?;
            a.swap_rows(p, k);
            for j in k..=n {
                let v = a.get(k, j).mul_ref(&inv);
                a.set(k, j, v);
            }
            for i in 0..n {
                if i == k || a.get(i, k).is_zero() {
                    continue;
                }
                let f = a.get(i, k).clone();
                for j in k..=n {
                    let v = a.get(i, j).sub_ref(&f.mul_ref(a.get(k, j)));
                    a.set(i, j, v);
                }
            }
        }
        Some(a.column(n))
    }
}

impl<D: GcdDomain> Matrix<Frac<D>> {
    /// Clears denominators row by row, then solves by Bareiss elimination in `D`.
    pub fn solve_fraction_free(&self, b: &[Frac<D>]) -> Option<Vec<Frac<D>>> {
        let n = self.rows;
        let mut rows = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for i in 0..n {
            let mut l = D::one();
            for x in self.row(i).iter().chain(std::iter::once(&b[i])) {
                let g = l.gcd(x.den());
                l = l.mul_ref(&x.den().div_exact(&g).expect("gcd divides"));
            }
            let clear = |x: &Frac<D>| {
                x.num().mul_ref(&l.div_exact(x.den()).expect("lcm is a multiple"))
            };
            rows.push(self.row(i).iter().map(clear).collect::<Vec<D>>());
            rhs.push(clear(&b[i]));
        }
        let (y, d) = Matrix::from_rows(rows).solve_bareiss(&rhs)?;
        Some(y.into_iter().map(|yi| Frac::new(yi, d.clone())).collect())
    }
}

impl<S> Matrix<S> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::poly::Poly;
    use crate::kernel::rat::{rat, Rat};

    fn m(v: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(v.iter().map(|r| r.iter().map(|&x| Rat::from(x)).collect()).collect())
    }

    #[test]
    fn charpoly_2x2_and_3x3() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.charpoly(), vec![rat(-2, 1), rat(-5, 1), rat(1, 1)]);
        let b = m(&[&[2, 0, 1], &[1, 3, 0], &[0, 1, 1]]);
        // det = 2*3*1 + 1*1*1 = 7, trace 6, principal 2-minors 6 + 2 + 3 = 11
        assert_eq!(b.charpoly(), vec![rat(-7, 1), rat(11, 1), rat(-6, 1), rat(1, 1)]);
    }

    #[test]
    fn bareiss_det_and_solve_agree_with_field_solve() {
        let a = m(&[&[0, 2, 1], &[3, 1, -1], &[2, 5, 7]]);
        assert_eq!(a.det_bareiss(), rat(-33, 1));
        assert_eq!(a.charpoly()[0], rat(33, 1));
        let b = vec![rat(1, 1), rat(2, 1), rat(3, 1)];
        let (y, d) = a.solve_bareiss(&b).unwrap();
        let x = a.solve(&b).unwrap();
        for (yi, xi) in y.iter().zip(&x) {
            assert_eq!(yi / &d, *xi);
        }
        assert_eq!(a.mul_vec(&x), b);
    }

    #[test]
    fn bareiss_over_polynomials() {
        let x = Poly::<Rat>::x();
        let one = Poly::<Rat>::one();
        let a = Matrix::from_rows(vec![vec![x.clone(), one.clone()], vec![one.clone(), x.clone()]]);
        assert_eq!(a.det_bareiss(), &x * &x - one.clone());
        let (y, d) = a.solve_bareiss(&[one.clone(), Poly::zero()]).unwrap();
        assert_eq!(d, &x * &x - one.clone());
        assert_eq!(y, vec![x.clone(), -one]);
    }
}
