use std::fmt;

use super::field::{Field, Rational};
use super::poly::Polynomial;

/// Dense row-major matrix over a field.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F: Field = Rational> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(cols: &[Vec<F>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().unwrap();
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let rv = m.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j).sub(&f.mul(rv));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = r.get(row, f).neg();
                }
                v
            })
            .collect()
    }

    /// Some solution of `A x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> F {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv().unwrap();
            for i in c + 1..n {
                let f = m.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(x I - A)` via Hessenberg reduction.
    pub fn char_poly(&self) -> Polynomial<F> {
        assert!(self.is_square(), "char_poly of a non-square matrix");
        let n = self.rows;
        let mut h = self.clone();
        // similarity transform to upper Hessenberg form
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&i| !h.get(i, c).is_zero()) else {
                continue;
            };
            if p != c + 1 {
                h.swap_rows(p, c + 1);
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + c + 1);
                }
            }
            let inv = h.get(c + 1, c).inv().unwrap();
            for i in c + 2..n {
                let f = h.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = h.get(i, j).sub(&f.mul(h.get(c + 1, j)));
                    h.set(i, j, v);
                }
                for r in 0..n {
                    let v = h.get(r, c + 1).add(&f.mul(h.get(r, i)));
                    h.set(r, c + 1, v);
                }
            }
        }
        // recurrence on leading principal minors of x I - H
        let mut polys: Vec<Polynomial<F>> = vec![Polynomial::one()];
        for k in 0..n {
            let lin = Polynomial::new(vec![h.get(k, k).neg(), F::one()]);
            let mut pk = lin.mul(&polys[k]);
            let mut prod = F::one();
            for i in (0..k).rev() {
                prod = prod.mul(h.get(i + 1, i));
                let c = prod.mul(h.get(i, k));
                if c.is_zero() {
                    continue;
                }
                pk = pk.sub(&polys[i].scale(&c));
            }
            polys.push(pk);
        }
        polys.pop().unwrap()
    }

    /// Monic minimal polynomial, as the lcm of the annihilators of the
    /// standard basis vectors.
    pub fn min_poly(&self) -> Polynomial<F> {
        assert!(self.is_square(), "min_poly of a non-square matrix");
        let n = self.rows;
        let mut acc = Polynomial::one();
        for i in 0..n {
            let mut e = vec![F::zero(); n];
            e[i] = F::one();
            if !acc.is_zero() && self.apply_poly(&acc, &e).iter().all(|x| x.is_zero()) {
                continue;
            }
            acc = acc.lcm(&self.vector_annihilator(&e));
        }
        acc
    }

    fn apply_poly(&self, p: &Polynomial<F>, v: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); v.len()];
        for c in p.coeffs().iter().rev() {
            out = self.mul_vec(&out);
            for (o, x) in out.iter_mut().zip(v) {
                *o = o.add(&c.mul(x));
            }
        }
        out
    }

    /// Monic polynomial of least degree with `p(A) v = 0`.
    fn vector_annihilator(&self, v: &[F]) -> Polynomial<F> {
        let n = self.rows;
        let mut krylov: Vec<Vec<F>> = vec![v.to_vec()];
        loop {
            let next = self.mul_vec(krylov.last().unwrap());
            let m = Matrix::from_cols(&krylov, n);
            if let Some(c) = m.solve(&next) {
                if m.rank() == krylov.len() {
                    let mut coeffs: Vec<F> = c.into_iter().map(|x| x.neg()).collect();
                    coeffs.push(F::one());
                    return Polynomial::new(coeffs);
                }
            }
            krylov.push(next);
        }
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::identity(self.rows), |acc, _| acc.mul(self))
    }

    /// Stacks `self` on top of `o`.
    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Incrementally maintained row-reduced basis of a subspace of `F^n`.
#[derive(Clone, Debug)]
pub struct SubspaceBasis<F: Field = Rational> {
    dim: usize,
    // rows in echelon form, each with its pivot index
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> SubspaceBasis<F> {
    pub fn new(dim: usize) -> Self {
        SubspaceBasis { dim, rows: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let c = v[*p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&c.mul(r));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns true when the span grew.
    pub fn insert(&mut self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.dim);
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().unwrap();
        let r: Vec<F> = r.iter().map(|x| x.mul(&inv)).collect();
        for (_, row) in self.rows.iter_mut() {
            let c = row[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = x.sub(&c.mul(y));
                }
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vec<F>> {
        self.rows.iter().map(|(_, r)| r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::{int, rat};

    fn m(rows: &[&[Rational]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn identity_polys() {
        let i2: Matrix = Matrix::identity(2);
        assert_eq!(i2.min_poly(), Polynomial::linear(&int(1)));
        assert_eq!(i2.char_poly(), Polynomial::from_roots(&[int(1), int(1)]));
    }

    #[test]
    fn saturation_residue_char_poly() {
        let a = m(&[&[int(0), rat(1, 4)], &[int(-1), int(-1)]]);
        let expected = Polynomial::new(vec![rat(1, 4), int(1), int(1)]);
        assert_eq!(a.char_poly(), expected);
        assert_eq!(a.min_poly(), expected);
    }

    #[test]
    fn zero_matrix_min_poly() {
        let z: Matrix = Matrix::zeros(3, 3);
        assert_eq!(z.min_poly(), Polynomial::x());
        assert_eq!(z.char_poly(), Polynomial::x().pow(3));
    }

    #[test]
    fn char_poly_matches_determinant_expansion() {
        let a = m(&[
            &[int(2), int(1), int(0), rat(1, 3)],
            &[int(0), int(0), int(1), int(5)],
            &[int(3), int(0), int(0), int(1)],
            &[int(1), int(1), int(-2), int(4)],
        ]);
        let cp = a.char_poly();
        // det(t I - A) evaluated at several points
        for t in [-2, 0, 1, 3, 7] {
            let shifted = Matrix::identity(4).scale(&int(t)).sub(&a);
            assert_eq!(cp.eval(&int(t)), shifted.det());
        }
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(&[&[int(1), int(2), int(3)], &[int(2), int(4), int(6)]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        assert!(a.solve(&[int(1), int(3)]).is_none());
        let x = a.solve(&[int(1), int(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![int(1), int(2)]);
    }

    #[test]
    fn subspace_membership() {
        let mut s: SubspaceBasis = SubspaceBasis::new(3);
        assert!(s.insert(&[int(1), int(1), int(0)]));
        assert!(s.insert(&[int(0), int(1), int(1)]));
        assert!(!s.insert(&[int(1), int(2), int(1)]));
        assert!(s.contains(&[int(2), int(0), int(-2)]));
        assert!(!s.contains(&[int(0), int(0), int(1)]));
    }
}
