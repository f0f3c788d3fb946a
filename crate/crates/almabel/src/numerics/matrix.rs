use std::fmt;

use num::{BigInt, Integer, One};
use serde::{Deserialize, Serialize};

use super::scalar::{CScalar, Field, Scalar};
use super::NumericsError;

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMatrix = Matrix<Scalar>;
pub type CMatrix = Matrix<CScalar>;

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
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
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() + o.get(i, j).clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() - o.get(i, j).clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |a, i| a + self.get(i, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_skew(&self) -> bool {
        self.is_square() && self.add(&self.transpose()).is_zero()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Rows scaled by the lcm of their denominators, so elimination stays fraction-free.
    fn integral_rows(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows {
            let l = (0..self.cols).fold(BigInt::one(), |acc, j| acc.lcm(&self.get(i, j).denom_lcm()));
            if !l.is_one() {
                for j in 0..self.cols {
                    let v = out.get(i, j).mul_int(&l);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Fraction-free (Bareiss) row echelon form.
    pub fn echelon(&self) -> Echelon<T> {
        let mut a = self.integral_rows();
        let (rows, cols) = (a.rows, a.cols);
        let mut prev = T::one();
        let mut pivots = Vec::new();
        let mut swaps = 0usize;
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    a.data.swap(p * cols + j, r * cols + j);
                }
                swaps += 1;
            }
            let piv = a.get(r, c).clone();
            for i in r + 1..rows {
                let lead = a.get(i, c).clone();
                for j in c + 1..cols {
                    let v = (piv.clone() * a.get(i, j).clone() - lead.clone() * a.get(r, j).clone())
                        / prev.clone();
                    a.set(i, j, v);
                }
                a.set(i, c, T::zero());
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        Echelon { form: a, pivots, swaps }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return T::one();
        }
        // expand on the original entries to avoid the row scaling bookkeeping
        let n = self.rows;
        let mut a = self.clone();
        let mut prev = T::one();
        let mut sign = false;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return T::zero();
            };
            if p != k {
                for j in 0..n {
                    a.data.swap(p * n + j, k * n + j);
                }
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(k, k).clone() * a.get(i, j).clone()
                        - a.get(i, k).clone() * a.get(k, j).clone())
                        / prev.clone();
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        if sign {
            -prev
        } else {
            prev
        }
    }

    /// Basis of the right kernel, one vector per free column with that entry set to one.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let e = self.echelon();
        e.kernel_basis(self.cols)
    }

    /// Reduced row echelon form (rows with leading ones).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let e = self.echelon();
        let mut a = e.form;
        let pivots = e.pivots;
        for (r, &c) in pivots.iter().enumerate() {
            let p = a.get(r, c).clone();
            for j in 0..a.cols {
                let v = a.get(r, j).clone() / p.clone();
                a.set(r, j, v);
            }
            for i in 0..r {
                let f = a.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..a.cols {
                    let v = a.get(i, j).clone() - f.clone() * a.get(r, j).clone();
                    a.set(i, j, v);
                }
            }
        }
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let all: Vec<usize> = (0..a.cols).collect();
        (a.submatrix(&keep, &all), pivots)
    }

    pub fn inverse(&self) -> Result<Self, NumericsError> {
        if !self.is_square() {
            return Err(NumericsError::Dimension(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return Err(NumericsError::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Solves `A x = b` exactly.
    pub fn solve(&self, b: &[T]) -> LinearSolution<T> {
        assert_eq!(b.len(), self.rows);
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let e = aug.echelon();
        let kernel = self.kernel();
        if e.pivots.last() == Some(&self.cols) {
            // left-kernel vector y with yA = 0 and yb != 0
            let left = self.transpose().kernel();
            let cert = left
                .into_iter()
                .find(|y| !dot(y, b).is_zero())
                .expect("inconsistent system must have a certificate");
            return LinearSolution { particular: None, kernel, certificate: Some(cert) };
        }
        let mut x = vec![T::zero(); self.cols];
        for (r, &c) in e.pivots.iter().enumerate().rev() {
            let mut acc = e.form.get(r, self.cols).clone();
            for j in c + 1..self.cols {
                let f = e.form.get(r, j);
                if !f.is_zero() && !x[j].is_zero() {
                    acc = acc - f.clone() * x[j].clone();
                }
            }
            x[c] = acc / e.form.get(r, c).clone();
        }
        LinearSolution { particular: Some(x), kernel, certificate: None }
    }
}

pub fn dot<T: Field>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Output of fraction-free elimination.
#[derive(Clone)]
pub struct Echelon<T> {
    pub form: Matrix<T>,
    pub pivots: Vec<usize>,
    pub swaps: usize,
}

impl<T: Field> Echelon<T> {
    pub fn kernel_basis(&self, ncols: usize) -> Vec<Vec<T>> {
        let free: Vec<usize> = (0..ncols).filter(|c| !self.pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut x = vec![T::zero(); ncols];
            x[f] = T::one();
            for (r, &c) in self.pivots.iter().enumerate().rev() {
                let mut acc = T::zero();
                for j in c + 1..ncols {
                    let a = self.form.get(r, j);
                    if !a.is_zero() && !x[j].is_zero() {
                        acc = acc - a.clone() * x[j].clone();
                    }
                }
                x[c] = acc / self.form.get(r, c).clone();
            }
            basis.push(x);
        }
        basis
    }
}

/// Solution of an exact linear system: a particular solution or an infeasibility certificate.
#[derive(Clone, Debug, Serialize)]
pub struct LinearSolution<T> {
    pub particular: Option<Vec<T>>,
    pub kernel: Vec<Vec<T>>,
    pub certificate: Option<Vec<T>>,
}

impl<T: Field> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn from_ints(rows: &[&[i64]]) -> QMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.to_rows().iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect()
    }

    pub fn complexify(&self) -> CMatrix {
        self.map(|x| CScalar::real(x.clone()))
    }

    /// Sylvester test on leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        (1..=self.rows).all(|k| {
            let idx: Vec<usize> = (0..k).collect();
            self.submatrix(&idx, &idx).det().is_positive()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn certificate_for_inconsistent_system() {
        let a = QMatrix::from_ints(&[&[1, 1], &[2, 2]]);
        let sol = a.solve(&[q(1), q(3)]);
        assert!(sol.particular.is_none());
        assert_eq!(sol.certificate.unwrap(), vec![q(-2), q(1)]);
    }

    #[test]
    fn particular_solution() {
        let a = QMatrix::from_ints(&[&[2, 1, 0], &[0, 3, 1]]);
        let b = vec![q(1), q(2)];
        let sol = a.solve(&b);
        let x = sol.particular.unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert_eq!(sol.kernel.len(), 1);
        assert!(a.mul_vec(&sol.kernel[0]).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = QMatrix::from_ints(&[&[0, 2, 1], &[1, 1, 0], &[3, 0, 5]]);
        // cofactor expansion on the first row: 0 - 2*5 + 1*(-3)
        assert_eq!(a.det(), q(-13));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(3));
        let s = QMatrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_err());
        assert_eq!(s.det(), q(0));
    }

    #[test]
    fn rank_with_rational_entries() {
        let a = Matrix::from_rows(vec![
            vec![Scalar::new(1, 2), Scalar::new(1, 3)],
            vec![Scalar::new(3, 2), Scalar::one()],
        ]);
        assert_eq!(a.rank(), 1);
        let (r, piv) = a.rref();
        assert_eq!(piv, vec![0]);
        assert_eq!(r.row(0), vec![q(1), Scalar::new(2, 3)]);
    }

    #[test]
    fn gaussian_rational_kernel() {
        let i = CScalar::i();
        let one = CScalar::one();
        let a = Matrix::from_rows(vec![vec![one.clone(), i.clone()], vec![i.clone(), -one.clone()]]);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn positive_definite() {
        let g = Matrix::from_rows(vec![
            vec![q(1), Scalar::new(1, 2)],
            vec![Scalar::new(1, 2), q(1)],
        ]);
        assert!(g.is_positive_definite());
        assert!(!QMatrix::from_ints(&[&[1, 2], &[2, 1]]).is_positive_definite());
    }
}
