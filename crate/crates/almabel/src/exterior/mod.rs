//! Exterior algebra of the dual of a Lie algebra (and, with the same storage, of the algebra itself).

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::liealg::LieAlgebra;
use crate::numerics::{CScalar, Field, Matrix, QMatrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExteriorError {
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Element of `Λ^k` on a `dim`-dimensional space, sparse over sorted index tuples (zero based).
#[derive(Clone, PartialEq)]
pub struct KForm<T> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<u8>, T>,
}

/// Multivectors share the storage; only the meaning of the indices differs.
pub type Multivector<T> = KForm<T>;

/// All increasing `k`-tuples from `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i as u8);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Sorts indices, returning the permutation sign or `None` on a repeat.
fn sort_sign(idx: &[usize]) -> Option<(Vec<u8>, bool)> {
    let mut inv = 0usize;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return None;
            }
            if idx[i] > idx[j] {
                inv += 1;
            }
        }
    }
    let mut v: Vec<u8> = idx.iter().map(|&i| i as u8).collect();
    v.sort_unstable();
    Some((v, inv % 2 == 1))
}

fn merge_sign(a: &[u8], b: &[u8]) -> Option<(Vec<u8>, bool)> {
    let mut inv = 0usize;
    for x in a {
        for y in b {
            if x == y {
                return None;
            }
            if x > y {
                inv += 1;
            }
        }
    }
    let mut v: Vec<u8> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    Some((v, inv % 2 == 1))
}

impl<T: Field> KForm<T> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        KForm { dim, degree, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, c: T) -> Self {
        let mut f = Self::zero(dim, 0);
        f.add_term(vec![], c);
        f
    }

    /// Basis element `f^{i_1} ^ ... ^ f^{i_k}` for zero based, not necessarily sorted indices.
    pub fn basis(dim: usize, idx: &[usize]) -> Self {
        let mut f = Self::zero(dim, idx.len());
        if let Some((v, neg)) = sort_sign(idx) {
            f.add_term(v, if neg { -T::one() } else { T::one() });
        }
        f
    }

    pub fn from_terms(dim: usize, degree: usize, terms: impl IntoIterator<Item = (Vec<usize>, T)>) -> Self {
        let mut f = Self::zero(dim, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "term degree");
            if let Some((v, neg)) = sort_sign(&idx) {
                f.add_term(v, if neg { -c } else { c });
            }
        }
        f
    }

    pub fn one_form(coeffs: &[T]) -> Self {
        let mut f = Self::zero(coeffs.len(), 1);
        for (i, c) in coeffs.iter().enumerate() {
            f.add_term(vec![i as u8], c.clone());
        }
        f
    }

    fn add_term(&mut self, idx: Vec<u8>, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&idx);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &[usize]) -> T {
        match sort_sign(idx) {
            Some((v, neg)) => {
                let c = self.terms.get(&v).cloned().unwrap_or_else(T::zero);
                if neg {
                    -c
                } else {
                    c
                }
            }
            None => T::zero(),
        }
    }

    /// Dense coefficient vector on the lexicographic basis.
    pub fn to_dense(&self) -> Vec<T> {
        combinations(self.dim, self.degree)
            .iter()
            .map(|c| self.terms.get(c).cloned().unwrap_or_else(T::zero))
            .collect()
    }

    pub fn from_dense(dim: usize, degree: usize, v: &[T]) -> Self {
        let mut f = Self::zero(dim, degree);
        for (c, x) in combinations(dim, degree).into_iter().zip(v) {
            f.add_term(c, x.clone());
        }
        f
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.dim, self.degree), (o.dim, o.degree), "adding forms of different type");
        let mut f = self.clone();
        for (k, v) in &o.terms {
            f.add_term(k.clone(), v.clone());
        }
        f
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut f = Self::zero(self.dim, self.degree);
        for (k, v) in &self.terms {
            f.add_term(k.clone(), v.clone() * s.clone());
        }
        f
    }

    pub fn map<U: Field>(&self, g: impl Fn(&T) -> U) -> KForm<U> {
        let mut f = KForm::<U>::zero(self.dim, self.degree);
        for (k, v) in &self.terms {
            f.add_term(k.clone(), g(v));
        }
        f
    }

    pub fn wedge(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim, "wedge of forms on different spaces");
        let mut f = Self::zero(self.dim, self.degree + o.degree);
        if self.degree + o.degree > self.dim {
            return f;
        }
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if let Some((v, neg)) = merge_sign(a, b) {
                    let c = x.clone() * y.clone();
                    f.add_term(v, if neg { -c } else { c });
                }
            }
        }
        f
    }

    /// Value on `k` vectors: `sum_I phi_I det(vectors restricted to I)`.
    pub fn eval(&self, vectors: &[Vec<T>]) -> T {
        assert_eq!(vectors.len(), self.degree, "wrong number of arguments");
        let k = self.degree;
        let mut acc = T::zero();
        for (idx, c) in &self.terms {
            let m = Matrix::from_fn(k, k, |r, s| vectors[s][idx[r] as usize].clone());
            let d = m.det();
            if !d.is_zero() {
                acc = acc + c.clone() * d;
            }
        }
        acc
    }

    /// `(P^* phi)(X_1..X_k) = phi(P X_1, .., P X_k)`.
    pub fn pullback(&self, p: &Matrix<T>) -> Self {
        let k = self.degree;
        let n = self.dim;
        let mut f = Self::zero(n, k);
        let targets = combinations(n, k);
        for (idx, c) in &self.terms {
            let rows: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
            for t in &targets {
                let cols: Vec<usize> = t.iter().map(|&i| i as usize).collect();
                let d = p.submatrix(&rows, &cols).det();
                if !d.is_zero() {
                    f.add_term(t.clone(), c.clone() * d);
                }
            }
        }
        f
    }

    /// Pushforward of a multivector: `P X_1 ^ .. ^ P X_k`.
    pub fn push(&self, p: &Matrix<T>) -> Self {
        let k = self.degree;
        let n = self.dim;
        let mut f = Self::zero(n, k);
        let targets = combinations(n, k);
        for (idx, c) in &self.terms {
            let cols: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
            for t in &targets {
                let rows: Vec<usize> = t.iter().map(|&i| i as usize).collect();
                let d = p.submatrix(&rows, &cols).det();
                if !d.is_zero() {
                    f.add_term(t.clone(), c.clone() * d);
                }
            }
        }
        f
    }

    /// Contraction `i_X phi`.
    pub fn interior(&self, x: &[T]) -> Self {
        let mut f = Self::zero(self.dim, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return f;
        }
        for (idx, c) in &self.terms {
            for m in 0..idx.len() {
                let xi = &x[idx[m] as usize];
                if xi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(m);
                let v = c.clone() * xi.clone();
                f.add_term(rest, if m % 2 == 1 { -v } else { v });
            }
        }
        f
    }

    /// Exterior derivative from the structure equations, extended as an antiderivation.
    pub fn d(&self, l: &LieAlgebra) -> Self {
        assert_eq!(self.dim, l.dim(), "form and algebra dimensions differ");
        let n = self.dim;
        let dfs: Vec<KForm<T>> = l
            .structure_equations()
            .iter()
            .map(|t| {
                KForm::from_terms(n, 2, t.iter().map(|(c, i, j)| (vec![*i, *j], T::from_scalar(c))))
            })
            .collect();
        let mut f = Self::zero(n, self.degree + 1);
        for (idx, c) in &self.terms {
            for m in 0..idx.len() {
                let df = &dfs[idx[m] as usize];
                if df.is_zero() {
                    continue;
                }
                let left = KForm::<T>::basis(n, &idx[..m].iter().map(|&i| i as usize).collect::<Vec<_>>());
                let right = KForm::<T>::basis(n, &idx[m + 1..].iter().map(|&i| i as usize).collect::<Vec<_>>());
                let mut t = left.wedge(df).wedge(&right).scale(c);
                if m % 2 == 1 {
                    t = t.neg();
                }
                f = f.add(&t);
            }
        }
        f
    }

    /// Formats as `3/2 f123 + f145`, one based, with the given basis letter.
    pub fn format_with(&self, letter: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (idx, c) in &self.terms {
            let name: String = if idx.is_empty() {
                "1".into()
            } else {
                let sep = if self.dim > 9 { "," } else { "" };
                format!("{letter}{}", idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(sep))
            };
            parts.push((c.to_string(), name));
        }
        let mut s = String::new();
        for (k, (c, name)) in parts.iter().enumerate() {
            let (neg, body) = match c.strip_prefix('-') {
                Some(b) if !b.contains(['+', '-']) => (true, b.to_string()),
                _ => (false, c.clone()),
            };
            let coef = if body == "1" {
                String::new()
            } else if body.contains(['+', '-']) {
                format!("({body}) ")
            } else {
                format!("{body} ")
            };
            let term = if name == "1" && coef.is_empty() { "1".to_string() } else if name == "1" { coef.trim().to_string() } else { format!("{coef}{name}") };
            match (k, neg) {
                (0, true) => s.push_str(&format!("-{term}")),
                (0, false) => s.push_str(&term),
                (_, true) => s.push_str(&format!(" - {term}")),
                (_, false) => s.push_str(&format!(" + {term}")),
            }
        }
        s
    }
}

impl KForm<Scalar> {
    pub fn complexify(&self) -> KForm<CScalar> {
        self.map(|x| CScalar::real(x.clone()))
    }
}

impl KForm<CScalar> {
    pub fn real_part(&self) -> KForm<Scalar> {
        let mut f = KForm::<Scalar>::zero(self.dim, self.degree);
        for (k, v) in &self.terms {
            f.add_term(k.clone(), v.re.clone());
        }
        f
    }

    pub fn imag_part(&self) -> KForm<Scalar> {
        let mut f = KForm::<Scalar>::zero(self.dim, self.degree);
        for (k, v) in &self.terms {
            f.add_term(k.clone(), v.im.clone());
        }
        f
    }
}

impl<T: Field> fmt::Display for KForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with("f"))
    }
}

impl<T: Field> fmt::Debug for KForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with("f"))
    }
}

impl<T: Field + Serialize> Serialize for KForm<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a, T> {
            indices: Vec<usize>,
            value: &'a T,
        }
        let terms: Vec<Term<T>> = self
            .terms
            .iter()
            .map(|(k, v)| Term { indices: k.iter().map(|&i| i as usize + 1).collect(), value: v })
            .collect();
        let mut st = s.serialize_struct("KForm", 3)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("text", &self.format_with("f"))?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// Chevalley-Eilenberg formula evaluated on basis vectors; an independent check of `d`.
pub fn d_chevalley_eilenberg<T: Field>(l: &LieAlgebra, phi: &KForm<T>) -> KForm<T> {
    let n = l.dim();
    let k = phi.degree();
    let mut out = KForm::<T>::zero(n, k + 1);
    for idx in combinations(n, k + 1) {
        let xs: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
        let mut acc = T::zero();
        for i in 0..=k {
            for j in i + 1..=k {
                let br: Vec<T> = l.bracket_basis(xs[i], xs[j]).iter().map(T::from_scalar).collect();
                let mut args = vec![br];
                for (m, &x) in xs.iter().enumerate() {
                    if m != i && m != j {
                        let mut e = vec![T::zero(); n];
                        e[x] = T::one();
                        args.push(e);
                    }
                }
                let v = phi.eval(&args);
                acc = if (i + j) % 2 == 1 { acc - v } else { acc + v };
            }
        }
        out = out.add(&KForm::from_terms(n, k + 1, [(xs, acc)]));
    }
    out
}

/// Matrix of `d : Λ^k -> Λ^{k+1}` on the lexicographic bases.
pub fn d_matrix(l: &LieAlgebra, k: usize) -> QMatrix {
    let n = l.dim();
    let src = combinations(n, k);
    let cols: Vec<Vec<Scalar>> = src
        .iter()
        .map(|c| {
            let idx: Vec<usize> = c.iter().map(|&i| i as usize).collect();
            KForm::<Scalar>::basis(n, &idx).d(l).to_dense()
        })
        .collect();
    if cols.is_empty() {
        return QMatrix::zeros(combinations(n, k + 1).len(), 0);
    }
    QMatrix::from_cols(&cols)
}

/// Result of an exactness test: a primitive or a dual certificate.
#[derive(Clone, Debug, Serialize)]
pub enum Exactness {
    Exact { primitive: KForm<Scalar> },
    /// `certificate . d(eta) = 0` for every `eta` while `certificate . phi != 0`;
    /// entries are on the lexicographic basis of `Λ^k`.
    NotExact { certificate: Vec<(Vec<usize>, Scalar)>, pairing: Scalar },
}

impl Exactness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact { .. })
    }
}

pub fn is_closed(l: &LieAlgebra, phi: &KForm<Scalar>) -> bool {
    phi.d(l).is_zero()
}

pub fn is_exact(l: &LieAlgebra, phi: &KForm<Scalar>) -> Exactness {
    let n = l.dim();
    let k = phi.degree();
    let b = phi.to_dense();
    if k == 0 {
        return if phi.is_zero() {
            Exactness::Exact { primitive: KForm::zero(n, 0) }
        } else {
            Exactness::NotExact { certificate: vec![(vec![], Scalar::one())], pairing: phi.coeff(&[]) }
        };
    }
    let dm = d_matrix(l, k - 1);
    let sol = dm.solve(&b);
    match sol.particular {
        Some(x) => Exactness::Exact { primitive: KForm::from_dense(n, k - 1, &x) },
        None => {
            let y = sol.certificate.unwrap();
            let pairing = y.iter().zip(&b).fold(Scalar::zero(), |acc, (a, c)| acc + a * c);
            let certificate = combinations(n, k)
                .into_iter()
                .zip(y)
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c.iter().map(|&i| i as usize + 1).collect(), v))
                .collect();
            Exactness::NotExact { certificate, pairing }
        }
    }
}

/// Mixed-degree complex form, the setting of generalized complex generators.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedForm {
    dim: usize,
    parts: BTreeMap<usize, KForm<CScalar>>,
}

impl MixedForm {
    pub fn zero(dim: usize) -> MixedForm {
        MixedForm { dim, parts: BTreeMap::new() }
    }

    pub fn from_form(f: KForm<CScalar>) -> MixedForm {
        let mut m = MixedForm::zero(f.dim());
        m.add_part(f);
        m
    }

    fn add_part(&mut self, f: KForm<CScalar>) {
        let deg = f.degree();
        let cur = self.parts.remove(&deg).unwrap_or_else(|| KForm::zero(self.dim, deg));
        let s = cur.add(&f);
        if !s.is_zero() {
            self.parts.insert(deg, s);
        }
    }

    pub fn add(&self, o: &MixedForm) -> MixedForm {
        let mut m = self.clone();
        for f in o.parts.values() {
            m.add_part(f.clone());
        }
        m
    }

    pub fn sub(&self, o: &MixedForm) -> MixedForm {
        let mut m = self.clone();
        for f in o.parts.values() {
            m.add_part(f.neg());
        }
        m
    }

    pub fn wedge(&self, o: &MixedForm) -> MixedForm {
        let mut m = MixedForm::zero(self.dim);
        for a in self.parts.values() {
            for b in o.parts.values() {
                m.add_part(a.wedge(b));
            }
        }
        m
    }

    pub fn wedge_form(&self, f: &KForm<CScalar>) -> MixedForm {
        self.wedge(&MixedForm::from_form(f.clone()))
    }

    pub fn d(&self, l: &LieAlgebra) -> MixedForm {
        let mut m = MixedForm::zero(self.dim);
        for f in self.parts.values() {
            m.add_part(f.d(l));
        }
        m
    }

    /// `(d - H^) rho`.
    pub fn twisted_d(&self, l: &LieAlgebra, h: &KForm<Scalar>) -> MixedForm {
        let hh = MixedForm::from_form(h.complexify());
        self.d(l).sub(&hh.wedge(self))
    }

    /// `exp(w) = 1 + w + w^2/2 + ...` for an even form.
    pub fn exp(w: &KForm<CScalar>) -> MixedForm {
        let n = w.dim();
        let mut acc = MixedForm::from_form(KForm::scalar(n, CScalar::one()));
        let mut term = KForm::scalar(n, CScalar::one());
        let mut k = 1;
        loop {
            term = term.wedge(w).scale(&CScalar::real(Scalar::new(1, k)));
            if term.is_zero() {
                break;
            }
            acc.add_part(term.clone());
            k += 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part(&self, deg: usize) -> Option<&KForm<CScalar>> {
        self.parts.get(&deg)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.parts.keys().copied().collect()
    }

    pub fn format_with(&self, letter: &str) -> String {
        if self.parts.is_empty() {
            return "0".into();
        }
        self.parts.values().map(|f| f.format_with(letter)).collect::<Vec<_>>().join(" + ")
    }
}

impl Serialize for MixedForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<&KForm<CScalar>> = self.parts.values().collect();
        let mut st = s.serialize_struct("MixedForm", 2)?;
        st.serialize_field("text", &self.format_with("f"))?;
        st.serialize_field("parts", &parts)?;
        st.end()
    }
}

/// `dim im(d_{k-1})` computed twice: as a rank and as `C(n, k-1) - dim ker`.
pub fn image_dimensions(l: &LieAlgebra, k: usize) -> (usize, usize) {
    let m = d_matrix(l, k - 1);
    (m.rank(), m.cols() - m.kernel().len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::LieAlgebra;
    use std::collections::BTreeMap;

    fn alg(s: &str) -> LieAlgebra {
        LieAlgebra::parse(s, &BTreeMap::new()).unwrap()
    }

    fn f(idx: &[usize]) -> KForm<Scalar> {
        let z: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        KForm::basis(6, &z)
    }

    #[test]
    fn wedge_signs() {
        let a = f(&[2]);
        let b = f(&[1]);
        assert_eq!(a.wedge(&b), f(&[1, 2]).neg());
        assert!(f(&[1, 2]).wedge(&f(&[2, 3])).is_zero());
        assert_eq!(f(&[3, 1, 2]), f(&[1, 2, 3]));
    }

    #[test]
    fn d_matches_structure_equations() {
        let l = alg("(f^{16},-1/2f^{26},-1/2f^{36},0,0,0)");
        assert_eq!(f(&[1]).d(&l), f(&[1, 6]));
        assert_eq!(f(&[2]).d(&l), f(&[2, 6]).scale(&Scalar::new(-1, 2)));
        // d(f^{16} + f^{23} + f^{45}) = f^{236}
        let w = f(&[1, 6]).add(&f(&[2, 3])).add(&f(&[4, 5]));
        assert_eq!(w.d(&l), f(&[2, 3, 6]));
    }

    #[test]
    fn d_squared_vanishes_and_matches_ce() {
        let l = alg("(f^{26},-f^{16},f^{46},0,0,0)");
        for idx in combinations(6, 2) {
            let z: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
            let phi = KForm::<Scalar>::basis(6, &z);
            assert_eq!(phi.d(&l), d_chevalley_eilenberg(&l, &phi));
            assert!(phi.d(&l).d(&l).is_zero());
        }
    }

    #[test]
    fn exactness_witness_and_certificate() {
        let l = alg("(f^{16},-1/2f^{26},-1/2f^{36},0,0,0)");
        let phi = f(&[2, 5]).d(&l);
        match is_exact(&l, &phi) {
            Exactness::Exact { primitive } => assert_eq!(primitive.d(&l), phi),
            other => panic!("{other:?}"),
        }
        let h = f(&[1, 2, 3]);
        match is_exact(&l, &h) {
            Exactness::NotExact { certificate, pairing } => {
                assert!(!pairing.is_zero());
                assert!(!certificate.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pullback_by_identity_and_eval() {
        let w = f(&[1, 6]).add(&f(&[2, 3]));
        assert_eq!(w.pullback(&QMatrix::identity(6)), w);
        let e = |i: usize| crate::liealg::unit(6, i - 1);
        assert_eq!(w.eval(&[e(1), e(6)]), Scalar::one());
        assert_eq!(w.eval(&[e(6), e(1)]), Scalar::from_int(-1));
    }

    #[test]
    fn exp_of_two_form() {
        let w = f(&[1, 2]).add(&f(&[3, 4])).complexify();
        let e = MixedForm::exp(&w);
        assert_eq!(e.degrees(), vec![0, 2, 4]);
        assert_eq!(e.part(4).unwrap().coeff(&[0, 1, 2, 3]), CScalar::one());
    }

    #[test]
    fn formatting() {
        let h = f(&[1, 2, 3]).scale(&Scalar::new(3, 2)).add(&f(&[1, 4, 5]).scale(&Scalar::new(-3, 2)));
        assert_eq!(h.to_string(), "3/2 f123 - 3/2 f145");
        let z = f(&[1, 2]).complexify().scale(&CScalar::from_ints(1, -1));
        assert_eq!(z.format_with("Z"), "(1-1i) Z12");
    }
}
