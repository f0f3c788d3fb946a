//! The complex frame `Z_k = e_k - i e_{7-k}` of a six dimensional almost abelian
//! Hermitian algebra, the `∂̄` operators on `g^{1,0}` and `g^{2,0}`, the Schouten matrix,
//! and the holomorphic Poisson solver.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exterior::{KForm, Multivector};
use crate::hermitian::j_from_pairs;
use crate::liealg::{AlmostAbelianData, LieAlgebra, LieError};
use crate::numerics::{CMatrix, CScalar, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DolbeaultError {
    #[error("the frame formulas need dimension 6 (n = 3), got n = {0}")]
    Dimension(usize),
    #[error("A does not commute with J1")]
    NotHermitian,
    #[error(transparent)]
    Lie(#[from] LieError),
}

fn c(re: &Scalar, im: &Scalar) -> CScalar {
    CScalar::new(re.clone(), im.clone())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DolbeaultData {
    pub a: Scalar,
    pub w1: CScalar,
    pub w2: CScalar,
    pub w3: CScalar,
    pub w4: CScalar,
    pub alpha: CScalar,
    pub beta: CScalar,
}

impl DolbeaultData {
    pub fn from_data(d: &AlmostAbelianData) -> Result<DolbeaultData, DolbeaultError> {
        if d.n != 3 {
            return Err(DolbeaultError::Dimension(d.n));
        }
        if !d.commutes_with_j() {
            return Err(DolbeaultError::NotHermitian);
        }
        let m = |i: usize, j: usize| d.a_mat.get(i - 1, j - 1);
        let neg = |x: &Scalar| -x;
        Ok(DolbeaultData {
            a: d.a.clone(),
            w1: c(m(1, 1), &neg(m(1, 4))),
            w2: c(m(1, 2), &neg(m(1, 3))),
            w3: c(m(2, 1), &neg(m(2, 4))),
            w4: c(m(2, 2), &neg(m(2, 3))),
            alpha: c(&d.v[0], &d.v[3]),
            beta: c(&d.v[1], &d.v[2]),
        })
    }

    pub fn zero() -> DolbeaultData {
        DolbeaultData {
            a: Scalar::zero(),
            w1: CScalar::zero(),
            w2: CScalar::zero(),
            w3: CScalar::zero(),
            w4: CScalar::zero(),
            alpha: CScalar::zero(),
            beta: CScalar::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DolbeaultMatrices {
    /// `∂̄_{Z̄_1}` on `g^{1,0}`, columns are images of `Z_1, Z_2, Z_3`.
    pub m10: CMatrix,
    /// `∂̄_{Z̄_1}` on `g^{2,0}` in the basis `Z_12, Z_13, Z_23`.
    pub m20: CMatrix,
    /// Schouten matrix: `[π, π] = (π^t S π) Z_1 ^ Z_2 ^ Z_3`.
    pub s: CMatrix,
}

pub fn dolbeault_matrices(d: &DolbeaultData) -> DolbeaultMatrices {
    let a = CScalar::real(d.a.clone());
    let z = CScalar::zero;
    let i = CScalar::i();
    let two = CScalar::from_ints(2, 0);
    let (w1, w2, w3, w4) = (&d.w1, &d.w2, &d.w3, &d.w4);
    let m10 = CMatrix::from_rows(vec![
        vec![a.clone(), z(), z()],
        vec![d.alpha.clone(), w1.clone(), w2.clone()],
        vec![d.beta.clone(), w3.clone(), w4.clone()],
    ])
    .scale(&i);
    let m20 = CMatrix::from_rows(vec![
        vec![a.clone() + w1.clone(), w2.clone(), z()],
        vec![w3.clone(), a.clone() + w4.clone(), z()],
        vec![-d.beta.clone(), d.alpha.clone(), w1.clone() + w4.clone()],
    ])
    .scale(&i);
    let s = CMatrix::from_rows(vec![
        vec![-(two.clone() * w3.clone()), w1.clone() - w4.clone(), z()],
        vec![w1.clone() - w4.clone(), two * w2.clone(), z()],
        vec![z(), z(), z()],
    ])
    .scale(&i);
    DolbeaultMatrices { m10, m20, s }
}

/// `-i (w1 + w4)((a + w1)(a + w4) - w2 w3)`; the `w2 w3` term drops out when `A`
/// preserves the planes `(e2,e5)` and `(e3,e4)`.
pub fn det_m20_factored(d: &DolbeaultData) -> CScalar {
    let a = CScalar::real(d.a.clone());
    let inner = (a.clone() + d.w1.clone()) * (a + d.w4.clone()) - d.w2.clone() * d.w3.clone();
    -(CScalar::i() * (d.w1.clone() + d.w4.clone()) * inner)
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// A `(2,0)` bivector `x Z_12 + y Z_13 + z Z_23`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bivector20 {
    pub x: CScalar,
    pub y: CScalar,
    pub z: CScalar,
}

impl Bivector20 {
    pub fn new(x: CScalar, y: CScalar, z: CScalar) -> Bivector20 {
        Bivector20 { x, y, z }
    }

    pub fn zero() -> Bivector20 {
        Bivector20::from_vec(&[CScalar::zero(), CScalar::zero(), CScalar::zero()])
    }

    pub fn from_vec(v: &[CScalar]) -> Bivector20 {
        Bivector20 { x: v[0].clone(), y: v[1].clone(), z: v[2].clone() }
    }

    pub fn to_vec(&self) -> Vec<CScalar> {
        vec![self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn is_zero(&self) -> bool {
        self.to_vec().iter().all(|c| c.is_zero())
    }

    /// Expansion in the real frame `e_1..e_6` with complex coefficients.
    pub fn complex_bivector(&self) -> Multivector<CScalar> {
        let zs = frame_vectors();
        let mut out = KForm::zero(6, 2);
        for (coef, &(p, q)) in self.to_vec().iter().zip(PAIRS.iter()) {
            if coef.is_zero() {
                continue;
            }
            out = out.add(&KForm::one_form(&zs[p]).wedge(&KForm::one_form(&zs[q])).scale(coef));
        }
        out
    }

    /// The real bivector `Re(2 π)`.
    pub fn real_bivector(&self) -> Multivector<Scalar> {
        self.complex_bivector().real_part().scale(&Scalar::from_int(2))
    }
}

impl fmt::Display for Bivector20 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["Z1^Z2", "Z1^Z3", "Z2^Z3"];
        let mut parts = Vec::new();
        for (coef, name) in self.to_vec().iter().zip(names) {
            if coef.is_zero() {
                continue;
            }
            if *coef == CScalar::one() {
                parts.push(name.to_string());
            } else {
                parts.push(format!("({coef}) {name}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Z_1, Z_2, Z_3` as complex vectors in the real frame.
pub fn frame_vectors() -> Vec<Vec<CScalar>> {
    (0..3)
        .map(|k| {
            let mut z = vec![CScalar::zero(); 6];
            z[k] = CScalar::one();
            z[5 - k] = CScalar::from_ints(0, -1);
            z
        })
        .collect()
}

fn cbracket(l: &LieAlgebra, x: &[CScalar], y: &[CScalar]) -> Vec<CScalar> {
    let n = l.dim();
    let mut out = vec![CScalar::zero(); n];
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y[j].is_zero() || i == j {
                continue;
            }
            let xy = x[i].clone() * y[j].clone();
            for (k, o) in out.iter_mut().enumerate() {
                let ck = l.c(i, j, k);
                if !ck.is_zero() {
                    *o = o.clone() + xy.clone() * CScalar::real(ck.clone());
                }
            }
        }
    }
    out
}

fn p10() -> CMatrix {
    let j = j_from_pairs(6, &[(1, 6), (2, 5), (3, 4)]).complexify();
    let half = CScalar::real(Scalar::new(1, 2));
    CMatrix::identity(6).sub(&j.scale(&CScalar::i())).scale(&half)
}

fn bracket_bivectors(l: &LieAlgebra, x: &[Vec<CScalar>; 2], y: &[Vec<CScalar>; 2]) -> Multivector<CScalar> {
    let mut out = KForm::zero(l.dim(), 3);
    for j in 0..2 {
        for k in 0..2 {
            let b = cbracket(l, &x[j], &y[k]);
            let t = KForm::one_form(&b)
                .wedge(&KForm::one_form(&x[1 - j]))
                .wedge(&KForm::one_form(&y[1 - k]));
            out = if (j + k) % 2 == 0 { out.add(&t) } else { out.sub(&t) };
        }
    }
    out
}

/// Schouten bracket of two bivectors, expanded bilinearly over basis bivectors.
pub fn schouten(l: &LieAlgebra, p: &Multivector<CScalar>, q: &Multivector<CScalar>) -> Multivector<CScalar> {
    let n = l.dim();
    let unit = |i: usize| {
        let mut e = vec![CScalar::zero(); n];
        e[i] = CScalar::one();
        e
    };
    let mut out = KForm::zero(n, 3);
    for (pi, pc) in p.terms() {
        for (qi, qc) in q.terms() {
            let x = [unit(pi[0] as usize), unit(pi[1] as usize)];
            let y = [unit(qi[0] as usize), unit(qi[1] as usize)];
            out = out.add(&bracket_bivectors(l, &x, &y).scale(&(pc.clone() * qc.clone())));
        }
    }
    out
}

/// The same three matrices computed directly from structure constants.
pub fn dolbeault_matrices_from_brackets(d: &AlmostAbelianData) -> Result<DolbeaultMatrices, DolbeaultError> {
    if d.n != 3 {
        return Err(DolbeaultError::Dimension(d.n));
    }
    let l = LieAlgebra::from_almost_abelian(d)?;
    let zs = frame_vectors();
    let zbar1: Vec<CScalar> = zs[0].iter().map(|x| x.conj()).collect();
    let p = p10();
    let mut m10 = CMatrix::zeros(3, 3);
    for (j, z) in zs.iter().enumerate() {
        let img = p.mul_vec(&cbracket(&l, &zbar1, z));
        for k in 0..3 {
            m10.set(k, j, img[k].clone());
        }
    }
    let mut m20 = CMatrix::zeros(3, 3);
    for (col, &(a, b)) in PAIRS.iter().enumerate() {
        let za = KForm::one_form(&zs[a]);
        let zb = KForm::one_form(&zs[b]);
        let da = KForm::one_form(&cbracket(&l, &zbar1, &zs[a]));
        let db = KForm::one_form(&cbracket(&l, &zbar1, &zs[b]));
        let img = da.wedge(&zb).add(&za.wedge(&db)).push(&p);
        for (row, &(r, s)) in PAIRS.iter().enumerate() {
            m20.set(row, col, img.coeff(&[r, s]));
        }
    }
    let basis: Vec<Multivector<CScalar>> = (0..3)
        .map(|i| {
            let mut v = vec![CScalar::zero(); 3];
            v[i] = CScalar::one();
            Bivector20::from_vec(&v).complex_bivector()
        })
        .collect();
    let mut s = CMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            s.set(i, j, schouten(&l, &basis[i], &basis[j]).coeff(&[0, 1, 2]));
        }
    }
    Ok(DolbeaultMatrices { m10, m20, s })
}

/// The `(2,0)` part of a bivector written in the frame `e_1..e_6`.
pub fn bivector20_part(b: &Multivector<CScalar>) -> Bivector20 {
    let img = b.push(&p10());
    Bivector20::from_vec(&PAIRS.iter().map(|&(r, s)| img.coeff(&[r, s])).collect::<Vec<_>>())
}

/// `π^t S π`, the `Z_123` coefficient of `[π, π]`.
pub fn schouten_bracket_check(pi: &Bivector20, d: &DolbeaultData) -> CScalar {
    quad(&dolbeault_matrices(d).s, &pi.to_vec())
}

/// The `Z_123` coefficient of `[π, π]` from structure constants.
pub fn schouten_bracket_from_brackets(pi: &Bivector20, d: &AlmostAbelianData) -> Result<CScalar, DolbeaultError> {
    let l = LieAlgebra::from_almost_abelian(d)?;
    let b = pi.complex_bivector();
    Ok(schouten(&l, &b, &b).coeff(&[0, 1, 2]))
}

fn quad(s: &CMatrix, v: &[CScalar]) -> CScalar {
    let sv = s.mul_vec(v);
    v.iter().zip(sv).fold(CScalar::zero(), |acc, (a, b)| acc + a.clone() * b)
}

fn normalize(v: Vec<CScalar>) -> Vec<CScalar> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(p) => {
            let r = p.recip();
            v.iter().map(|x| x.clone() * r.clone()).collect()
        }
        None => v,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PoissonSpace {
    pub kernel: Vec<Bivector20>,
    /// `K^t S K` on kernel coordinates.
    pub quadric: CMatrix,
    /// Whether the Poisson set inside the kernel is a linear subspace.
    pub linear: bool,
    /// Spanning set of the Poisson set when linear; empty otherwise.
    pub generators: Vec<Bivector20>,
    /// Dimension of the linear span of the Poisson set.
    pub span_dim: usize,
}

impl PoissonSpace {
    pub fn is_trivial(&self) -> bool {
        self.span_dim == 0
    }
}

pub fn holomorphic_poisson_space(d: &DolbeaultData) -> PoissonSpace {
    let m = dolbeault_matrices(d);
    let kernel: Vec<Vec<CScalar>> = m.m20.kernel().into_iter().map(normalize).collect();
    let dim = kernel.len();
    let bivectors: Vec<Bivector20> = kernel.iter().map(|v| Bivector20::from_vec(v)).collect();
    if dim == 0 {
        return PoissonSpace { kernel: vec![], quadric: CMatrix::zeros(0, 0), linear: true, generators: vec![], span_dim: 0 };
    }
    let k = CMatrix::from_cols(&kernel);
    let q = k.transpose().mul(&m.s).mul(&k);
    let rank = q.rank();
    let (linear, generators) = if rank == 0 {
        (true, bivectors.clone())
    } else if rank == 1 {
        // q = λ l l^t, so the Poisson set is the hyperplane l . c = 0
        let col = (0..dim).map(|j| q.col(j)).find(|c| c.iter().any(|x| !x.is_zero())).unwrap();
        let inner = CMatrix::from_rows(vec![col]).kernel();
        let gens = inner
            .into_iter()
            .map(|c| Bivector20::from_vec(&normalize(k.mul_vec(&c))))
            .collect();
        (true, gens)
    } else {
        (false, vec![])
    };
    let span_dim = if linear { generators.len() } else { dim };
    PoissonSpace { kernel: bivectors, quadric: q, linear, generators, span_dim }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::QMatrix;

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn data(a: i64, v: [i64; 4], a11: i64, a12: i64, a13: i64, a14: i64, a21: i64, a22: i64, a23: i64, a24: i64) -> AlmostAbelianData {
        let am = QMatrix::from_ints(&[
            &[a11, a12, a13, a14],
            &[a21, a22, a23, a24],
            &[-a24, -a23, a22, a21],
            &[-a14, -a13, a12, a11],
        ]);
        AlmostAbelianData::new(q(a), v.iter().map(|&x| q(x)).collect(), am).unwrap()
    }

    #[test]
    fn closed_forms_match_brackets() {
        let d = data(2, [1, -1, 3, 2], 1, 2, -1, 3, 0, -2, 5, 1);
        let dd = DolbeaultData::from_data(&d).unwrap();
        assert_eq!(dolbeault_matrices(&dd), dolbeault_matrices_from_brackets(&d).unwrap());
        assert_eq!(dolbeault_matrices(&dd).m20.det(), det_m20_factored(&dd));
        // with w2 = w3 = 0 the determinant is -i(a+w1)(a+w4)(w1+w4)
        let d = data(3, [1, 2, -1, 1], -1, 0, 0, 2, 0, 4, 1, 0);
        let dd = DolbeaultData::from_data(&d).unwrap();
        let a = CScalar::real(dd.a.clone());
        let short = -(CScalar::i() * (a.clone() + dd.w1.clone()) * (a + dd.w4.clone()) * (dd.w1.clone() + dd.w4.clone()));
        assert_eq!(dolbeault_matrices(&dd).m20.det(), short);
    }

    #[test]
    fn k23_example_matrix() {
        // a = 0, v = (1,0,0,0), A with A22 = A33 = 0, A23 = 1 rotation on (e3,e4)
        let d = data(0, [1, 0, 0, 0], 0, 0, 0, 0, 0, 0, 1, 0);
        let dd = DolbeaultData::from_data(&d).unwrap();
        assert_eq!(dd.w4, CScalar::from_ints(0, -1));
        let m = dolbeault_matrices(&dd);
        let i = CScalar::i();
        let z = CScalar::zero();
        let expected = CMatrix::from_rows(vec![
            vec![z.clone(), z.clone(), z.clone()],
            vec![z.clone(), CScalar::from_ints(0, -1), z.clone()],
            vec![z.clone(), CScalar::one(), CScalar::from_ints(0, -1)],
        ])
        .scale(&i);
        assert_eq!(m.m20, expected);
        let p = holomorphic_poisson_space(&dd);
        assert_eq!(p.span_dim, 1);
        assert_eq!(p.generators[0].to_string(), "Z1^Z2");
    }

    #[test]
    fn zero_data() {
        let dd = DolbeaultData::zero();
        let m = dolbeault_matrices(&dd);
        assert!(m.m10.is_zero() && m.m20.is_zero() && m.s.is_zero());
        let p = holomorphic_poisson_space(&dd);
        assert_eq!(p.span_dim, 3);
        assert!(p.linear);
    }

    #[test]
    fn schouten_examples() {
        let d = data(1, [0, 0, 0, 0], 1, 0, 0, 0, 0, 0, 0, 0);
        let dd = DolbeaultData::from_data(&d).unwrap();
        // w1 - w4 = 1 here, w3 = 0
        let z12 = Bivector20::new(CScalar::one(), CScalar::zero(), CScalar::zero());
        assert!(schouten_bracket_check(&z12, &dd).is_zero());
        let z23 = Bivector20::new(CScalar::zero(), CScalar::zero(), CScalar::one());
        assert!(schouten_bracket_check(&z23, &dd).is_zero());
        // w1 - w4 = i: A11 = 0, A14 = -1
        let d = data(0, [0, 0, 0, 0], 0, 0, 0, -1, 0, 0, 0, 0);
        let dd = DolbeaultData::from_data(&d).unwrap();
        assert_eq!(&dd.w1 - &dd.w4, CScalar::i());
        let pi = Bivector20::new(CScalar::one(), CScalar::one(), CScalar::zero());
        assert_eq!(schouten_bracket_check(&pi, &dd), CScalar::from_ints(-2, 0));
        assert_eq!(schouten_bracket_from_brackets(&pi, &d).unwrap(), CScalar::from_ints(-2, 0));
    }

    #[test]
    fn no_poisson_for_special_k11() {
        // rows (a,..), (v1,-a/2,r,0,0), (v2,-r,-a/2,0,0), (v3,0,0,-a/2,-r), (v4,0,0,r,-a/2)
        let (a, r) = (q(2), q(1));
        let h = -(&a / q(2));
        let am = QMatrix::from_rows(vec![
            vec![h.clone(), r.clone(), q(0), q(0)],
            vec![-&r, h.clone(), q(0), q(0)],
            vec![q(0), q(0), h.clone(), -&r],
            vec![q(0), q(0), r.clone(), h.clone()],
        ]);
        let d = AlmostAbelianData::new(a.clone(), vec![q(1), q(0), q(2), q(0)], am).unwrap();
        let dd = DolbeaultData::from_data(&d).unwrap();
        let m = dolbeault_matrices(&dd);
        // i a (a^2/4 + r^2), nonzero
        let expected = CScalar::i() * CScalar::real(&a * (&a * &a / q(4) + &r * &r));
        assert_eq!(m.m20.det(), expected);
        assert!(holomorphic_poisson_space(&dd).is_trivial());
    }
}
