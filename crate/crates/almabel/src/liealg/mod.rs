//! Real Lie algebras given by exact structure constants.

mod adapted;
mod equations;

pub use adapted::{adapted_data, find_codim1_abelian_ideal, standard_j1, AdaptedFrame, CodimOneIdeal, NumericData};
pub use equations::{format_two_form, parse_structure_equations, LinExpr, StructureTemplate};

use std::collections::BTreeMap;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::numerics::{dot, QMatrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid structure constants: {0}")]
    InvalidStructureConstants(String),
    #[error("Jacobi identity fails on (f{i}, f{j}, f{k}): component {component} is {value}")]
    Jacobi { i: usize, j: usize, k: usize, component: usize, value: String },
    #[error("not almost abelian: {0}")]
    NotAlmostAbelian(String),
    #[error("structure is not compatible with the almost abelian splitting: {0}")]
    HermitianIncompatible(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Finite dimensional real Lie algebra; `c[(i*n + j)*n + k]` is the coefficient of
/// `f_k` in `[f_i, f_j]`.
#[derive(Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<Scalar>,
}

impl LieAlgebra {
    pub fn abelian(dim: usize) -> LieAlgebra {
        LieAlgebra { dim, c: vec![Scalar::zero(); dim * dim * dim] }
    }

    /// Builds from brackets `[f_i, f_j] = v` for `i < j`, zero based; checks Jacobi.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<Scalar>)]) -> Result<LieAlgebra, LieError> {
        let mut l = LieAlgebra::abelian(dim);
        for (i, j, v) in brackets {
            if *i >= dim || *j >= dim || v.len() != dim {
                return Err(LieError::InvalidStructureConstants(format!("bracket ({i},{j}) out of range")));
            }
            if i == j {
                if v.iter().any(|x| !x.is_zero()) {
                    return Err(LieError::InvalidStructureConstants(format!("[f{0}, f{0}] must vanish", i + 1)));
                }
                continue;
            }
            for (k, x) in v.iter().enumerate() {
                let cur = l.c(*i, *j, k).clone();
                l.set(*i, *j, k, &cur + x);
            }
        }
        l.check_jacobi()?;
        Ok(l)
    }

    /// From structure equations `df^k = sum D^k_{ij} f^{ij}`, using `d a(X,Y) = -a([X,Y])`.
    pub fn from_equations(dim: usize, eqs: &[Vec<(Scalar, usize, usize)>]) -> Result<LieAlgebra, LieError> {
        if eqs.len() != dim {
            return Err(LieError::Dimension(format!("{} equations for dimension {dim}", eqs.len())));
        }
        let mut l = LieAlgebra::abelian(dim);
        for (k, comp) in eqs.iter().enumerate() {
            for (d, i, j) in comp {
                if i == j || *i >= dim || *j >= dim {
                    return Err(LieError::InvalidStructureConstants(format!("bad 2-form index in df^{}", k + 1)));
                }
                let cur = l.c(*i, *j, k).clone();
                l.set(*i, *j, k, cur - d);
            }
        }
        l.check_jacobi()?;
        Ok(l)
    }

    pub fn parse(src: &str, params: &BTreeMap<String, Scalar>) -> Result<LieAlgebra, LieError> {
        let t = parse_structure_equations(src)?;
        LieAlgebra::from_equations(t.dim, &t.eval(params)?)
    }

    /// `[e_n, e_j] = sum_i B_ij e_i` on `h = span(e_1..e_{n-1})`, `h` abelian.
    pub fn from_almost_abelian(d: &AlmostAbelianData) -> Result<LieAlgebra, LieError> {
        let b = d.b_matrix();
        let n = b.rows() + 1;
        let mut brackets = Vec::new();
        for j in 0..n - 1 {
            let mut v = vec![Scalar::zero(); n];
            for (i, x) in v.iter_mut().enumerate().take(n - 1) {
                *x = -b.get(i, j);
            }
            brackets.push((j, n - 1, v));
        }
        LieAlgebra::from_brackets(n, &brackets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let n = self.dim;
        self.c[(j * n + i) * n + k] = -&v;
        self.c[(i * n + j) * n + k] = v;
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|k| self.c(i, j, k).clone()).collect()
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad_x`, columns are images of basis vectors.
    pub fn ad(&self, x: &[Scalar]) -> QMatrix {
        let n = self.dim;
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| self.bracket(x, &unit(n, j))).collect();
        QMatrix::from_cols(&cols)
    }

    pub fn check_jacobi(&self) -> Result<(), LieError> {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (unit(n, i), unit(n, j), unit(n, k));
                    let a = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let b = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let c = self.bracket(&ek, &self.bracket(&ei, &ej));
                    for m in 0..n {
                        let s = &a[m] + &b[m] + &c[m];
                        if !s.is_zero() {
                            return Err(LieError::Jacobi {
                                i: i + 1,
                                j: j + 1,
                                k: k + 1,
                                component: m + 1,
                                value: s.to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Basis of `[g, g]` in row reduced form.
    pub fn derived_algebra(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim;
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = self.bracket_basis(i, j);
                if v.iter().any(|x| !x.is_zero()) {
                    rows.push(v);
                }
            }
        }
        span_basis(n, rows)
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Dimensions of the lower central series until it stabilizes.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let n = self.dim;
        let mut cur: Vec<Vec<Scalar>> = (0..n).map(|i| unit(n, i)).collect();
        let mut dims = vec![n];
        loop {
            let mut rows = Vec::new();
            for i in 0..n {
                for v in &cur {
                    let b = self.bracket(&unit(n, i), v);
                    if b.iter().any(|x| !x.is_zero()) {
                        rows.push(b);
                    }
                }
            }
            let next = span_basis(n, rows);
            let d = next.len();
            if d == *dims.last().unwrap() {
                return dims;
            }
            dims.push(d);
            if d == 0 {
                return dims;
            }
            cur = next;
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        *self.lower_central_series().last().unwrap() == 0
    }

    pub fn center_dim(&self) -> usize {
        let n = self.dim;
        // x central iff [x, f_j] = 0 for all j
        let mut rows = Vec::new();
        for j in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|i| self.c(i, j, k).clone()).collect::<Vec<_>>());
            }
        }
        n - QMatrix::from_rows(rows).rank()
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| self.ad(&unit(self.dim, i)).trace().is_zero())
    }

    /// Same algebra in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &QMatrix) -> Result<LieAlgebra, LieError> {
        let n = self.dim;
        let inv = p.inverse().map_err(|_| LieError::Dimension("change of basis is singular".into()))?;
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| p.col(j)).collect();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                brackets.push((i, j, inv.mul_vec(&self.bracket(&cols[i], &cols[j]))));
            }
        }
        LieAlgebra::from_brackets(n, &brackets)
    }

    /// `df^k` as a list of `(coefficient, i, j)` with `i < j`.
    pub fn structure_equations(&self) -> Vec<Vec<(Scalar, usize, usize)>> {
        let n = self.dim;
        (0..n)
            .map(|k| {
                let mut terms = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        let c = self.c(i, j, k);
                        if !c.is_zero() {
                            terms.push((-c, i, j));
                        }
                    }
                }
                terms
            })
            .collect()
    }

    pub fn structure_equations_string(&self) -> String {
        let parts: Vec<String> = self.structure_equations().iter().map(|t| format_two_form(t)).collect();
        format!("({})", parts.join(","))
    }

    /// Skew matrix of the 2-form `c^k`, i.e. `(i, j) -> c^k_{ij}`.
    pub fn component_form(&self, k: usize) -> QMatrix {
        QMatrix::from_fn(self.dim, self.dim, |i, j| self.c(i, j, k).clone())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.c.iter().map(|x| x.to_f64()).collect()
    }
}

impl std::fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.structure_equations_string())
    }
}

impl Serialize for LieAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Br {
            i: usize,
            j: usize,
            k: usize,
            value: Scalar,
        }
        let n = self.dim;
        let mut br = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        br.push(Br { i: i + 1, j: j + 1, k: k + 1, value: c.clone() });
                    }
                }
            }
        }
        let mut st = s.serialize_struct("LieAlgebra", 3)?;
        st.serialize_field("dim", &n)?;
        st.serialize_field("structure_equations", &self.structure_equations_string())?;
        st.serialize_field("brackets", &br)?;
        st.end()
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

/// Row reduced basis of the span of the given vectors.
pub(crate) fn span_basis(n: usize, rows: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    if rows.is_empty() {
        return vec![];
    }
    let (r, _) = QMatrix::from_rows(rows).rref();
    let _ = n;
    r.to_rows()
}

/// `(a, v, A)` describing `ad_{e_{2n}}` on `h = span(e_1..e_{2n-1})`:
/// `[e_{2n}, e_1] = a e_1 + sum v_i e_{i+1}`, `[e_{2n}, e_{j+1}] = sum A_ij e_{i+1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlmostAbelianData {
    pub n: usize,
    pub a: Scalar,
    pub v: Vec<Scalar>,
    pub a_mat: QMatrix,
}

impl AlmostAbelianData {
    pub fn new(a: Scalar, v: Vec<Scalar>, a_mat: QMatrix) -> Result<AlmostAbelianData, LieError> {
        let m = v.len();
        if !m.is_multiple_of(2) || a_mat.rows() != m || a_mat.cols() != m || m == 0 {
            return Err(LieError::Dimension(format!(
                "v has length {m} and A is {}x{}; need an even length 2n-2 and a square A",
                a_mat.rows(),
                a_mat.cols()
            )));
        }
        Ok(AlmostAbelianData { n: m / 2 + 1, a, v, a_mat })
    }

    /// `B = [[a, 0], [v, A]]`.
    pub fn b_matrix(&self) -> QMatrix {
        let m = self.v.len();
        QMatrix::from_fn(m + 1, m + 1, |i, j| match (i, j) {
            (0, 0) => self.a.clone(),
            (0, _) => Scalar::zero(),
            (_, 0) => self.v[i - 1].clone(),
            _ => self.a_mat.get(i - 1, j - 1).clone(),
        })
    }

    pub fn commutes_with_j(&self) -> bool {
        self.a_mat.commutator(&standard_j1(self.n)).is_zero()
    }

    /// `aA + A^2 + A^T A` has vanishing symmetric part.
    pub fn skt_matrix(&self) -> QMatrix {
        let a = &self.a_mat;
        a.scale(&self.a).add(&a.mul(a)).add(&a.transpose().mul(a))
    }

    pub fn is_skt(&self) -> bool {
        self.skt_matrix().is_skew()
    }

    pub fn is_kahler(&self) -> bool {
        self.a_mat.is_skew() && self.v.iter().all(|x| x.is_zero())
    }

    pub fn is_normal(&self) -> bool {
        let a = &self.a_mat;
        a.mul(&a.transpose()) == a.transpose().mul(a)
    }

    pub fn v_norm_sq(&self) -> Scalar {
        dot(&self.v, &self.v)
    }

    /// Reads `(a, v, A)` when the basis itself is adapted: `e_1..e_{2n-1}` span an abelian
    /// ideal and `ad_{e_{2n}}` has no `e_1` component on `e_2..e_{2n-1}`.
    pub fn read_frame(l: &LieAlgebra) -> Option<AlmostAbelianData> {
        let n = l.dim();
        if n < 4 || !n.is_multiple_of(2) {
            return None;
        }
        let last = n - 1;
        for i in 0..last {
            for j in i + 1..last {
                if (0..n).any(|k| !l.c(i, j, k).is_zero()) {
                    return None;
                }
            }
            if !l.c(last, i, last).is_zero() {
                return None;
            }
        }
        if (1..last).any(|j| !l.c(last, j, 0).is_zero()) {
            return None;
        }
        let a = l.c(last, 0, 0).clone();
        let v = (1..last).map(|k| l.c(last, 0, k).clone()).collect();
        let a_mat = QMatrix::from_fn(last - 1, last - 1, |r, c| l.c(last, c + 1, r + 1).clone());
        AlmostAbelianData::new(a, v, a_mat).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn no_params() -> BTreeMap<String, Scalar> {
        BTreeMap::new()
    }

    #[test]
    fn heisenberg_bracket_sign() {
        // df^3 = f^{12} gives [f1, f2] = -f3
        let l = LieAlgebra::parse("(0,0,f^{12})", &no_params()).unwrap();
        assert_eq!(l.bracket_basis(0, 1), vec![q(0), q(0), q(-1)]);
        assert!(l.is_nilpotent());
        assert_eq!(l.center_dim(), 1);
        assert_eq!(l.structure_equations_string(), "(0,0,f^{12})");
    }

    #[test]
    fn jacobi_violation_reported() {
        // [f1,f2] = f3, [f1,f3] = f1, [f2,f3] = 0 breaks Jacobi
        let r = LieAlgebra::from_brackets(
            3,
            &[(0, 1, vec![q(0), q(0), q(1)]), (0, 2, vec![q(1), q(0), q(0)])],
        );
        assert!(matches!(r, Err(LieError::Jacobi { .. })));
    }

    #[test]
    fn almost_abelian_roundtrip() {
        let d = AlmostAbelianData::new(
            q(1),
            vec![q(0), q(1), q(0), q(0)],
            QMatrix::from_ints(&[&[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0], &[-1, 0, 0, 0]]),
        )
        .unwrap();
        let l = LieAlgebra::from_almost_abelian(&d).unwrap();
        let ad = l.ad(&unit(6, 5));
        let b = d.b_matrix();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(ad.get(i, j), b.get(i, j));
            }
        }
        assert!(!l.is_unimodular());
    }

    #[test]
    fn derived_and_lower_central() {
        let l = LieAlgebra::parse("(0,0,0,0,f^{12},f^{13})", &no_params()).unwrap();
        assert_eq!(l.derived_algebra().len(), 2);
        assert_eq!(l.lower_central_series(), vec![6, 2, 0]);
        let so3 = LieAlgebra::parse("(f^{23},-f^{13},f^{12})", &no_params()).unwrap();
        assert_eq!(so3.lower_central_series(), vec![3]);
        assert!(so3.is_unimodular());
    }

    #[test]
    fn change_basis_preserves_jacobi() {
        let l = LieAlgebra::parse("(f^{16},-f^{26},0,0,f^{46},0)", &no_params()).unwrap();
        let p = QMatrix::from_ints(&[
            &[1, 1, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0, 0],
            &[0, 0, 1, 0, 0, 0],
            &[0, 0, 0, 1, 2, 0],
            &[0, 0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 0, 1],
        ]);
        let m = l.change_basis(&p).unwrap();
        assert_eq!(m.derived_algebra().len(), l.derived_algebra().len());
    }
}
