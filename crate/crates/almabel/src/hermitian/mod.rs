//! Hermitian structures on Lie algebras: fundamental form, Nijenhuis tensor, Bismut torsion,
//! and the SKT (pluriclosed) verdict by independent routes.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::exterior::{is_exact, Exactness, KForm};
use crate::liealg::{adapted_data, unit, AdaptedFrame, LieAlgebra, LieError};
use crate::numerics::{spectrum, CScalar, QMatrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HermitianError {
    #[error("J^2 != -1: entry ({i},{j}) of J^2 + 1 is {value}")]
    NotComplexStructure { i: usize, j: usize, value: String },
    #[error("metric is not symmetric at ({i},{j})")]
    MetricNotSymmetric { i: usize, j: usize },
    #[error("metric is not positive definite")]
    MetricNotPositive,
    #[error("metric is not J-invariant: entry ({i},{j}) of J^T g J - g is {value}")]
    NotCompatible { i: usize, j: usize, value: String },
    #[error("J is not integrable: N(f{i}, f{j}) = {value}")]
    NotIntegrable { i: usize, j: usize, value: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("routes disagree: {0}")]
    RouteDisagreement(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Pair `(J, g)` with `J^2 = -1` and `g(J., J.) = g`; `J` acts on column vectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HermitianStructure {
    pub j: QMatrix,
    pub g: QMatrix,
}

impl HermitianStructure {
    pub fn new(j: QMatrix, g: QMatrix) -> Result<HermitianStructure, HermitianError> {
        let h = HermitianStructure { j, g };
        h.validate()?;
        Ok(h)
    }

    /// `J f_a = f_b`, `J f_b = -f_a` for each one based pair, with the identity metric.
    pub fn from_pairs(dim: usize, pairs: &[(usize, usize)]) -> Result<HermitianStructure, HermitianError> {
        HermitianStructure::new(j_from_pairs(dim, pairs), QMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    pub fn validate(&self) -> Result<(), HermitianError> {
        let n = self.j.rows();
        if !self.j.is_square() || self.g.rows() != n || self.g.cols() != n || !n.is_multiple_of(2) {
            return Err(HermitianError::Dimension(format!(
                "J is {}x{}, g is {}x{}",
                self.j.rows(),
                self.j.cols(),
                self.g.rows(),
                self.g.cols()
            )));
        }
        let sq = self.j.mul(&self.j).add(&QMatrix::identity(n));
        if let Some((i, jj)) = first_nonzero(&sq) {
            return Err(HermitianError::NotComplexStructure { i: i + 1, j: jj + 1, value: sq.get(i, jj).to_string() });
        }
        for i in 0..n {
            for jj in 0..n {
                if self.g.get(i, jj) != self.g.get(jj, i) {
                    return Err(HermitianError::MetricNotSymmetric { i: i + 1, j: jj + 1 });
                }
            }
        }
        if !self.g.is_positive_definite() {
            return Err(HermitianError::MetricNotPositive);
        }
        let c = self.j.transpose().mul(&self.g).mul(&self.j).sub(&self.g);
        if let Some((i, jj)) = first_nonzero(&c) {
            return Err(HermitianError::NotCompatible { i: i + 1, j: jj + 1, value: c.get(i, jj).to_string() });
        }
        Ok(())
    }
}

pub fn j_from_pairs(dim: usize, pairs: &[(usize, usize)]) -> QMatrix {
    let mut j = QMatrix::zeros(dim, dim);
    for &(a, b) in pairs {
        j.set(b - 1, a - 1, Scalar::one());
        j.set(a - 1, b - 1, Scalar::from_int(-1));
    }
    j
}

fn first_nonzero(m: &QMatrix) -> Option<(usize, usize)> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m.get(i, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// `omega(X, Y) = g(JX, Y)`.
pub fn fundamental_form(h: &HermitianStructure) -> KForm<Scalar> {
    let n = h.dim();
    let m = h.j.transpose().mul(&h.g);
    let mut terms = Vec::new();
    for i in 0..n {
        for k in i + 1..n {
            terms.push((vec![i, k], m.get(i, k).clone()));
        }
    }
    KForm::from_terms(n, 2, terms)
}

/// `N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]` on basis pairs.
#[derive(Clone, Debug, Serialize)]
pub struct Nijenhuis {
    pub values: Vec<Vec<Vec<Scalar>>>,
}

impl Nijenhuis {
    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().flatten().all(|x| x.is_zero())
    }

    pub fn first_nonzero(&self) -> Option<(usize, usize, Vec<Scalar>)> {
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.iter().any(|x| !x.is_zero()) {
                    return Some((i, j, v.clone()));
                }
            }
        }
        None
    }

    /// `N(X, Y, Z) = g(N(X, Y), Z)`.
    pub fn lowered(&self, g: &QMatrix, i: usize, j: usize, k: usize) -> Scalar {
        let gv = g.mul_vec(&self.values[i][j]);
        gv[k].clone()
    }
}

pub fn nijenhuis(l: &LieAlgebra, j: &QMatrix) -> Nijenhuis {
    let n = l.dim();
    let cols: Vec<Vec<Scalar>> = (0..n).map(|i| j.col(i)).collect();
    let mut values = vec![vec![vec![Scalar::zero(); n]; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let ea = unit(n, a);
            let eb = unit(n, b);
            let t1 = l.bracket(&cols[a], &cols[b]);
            let t2 = j.mul_vec(&l.bracket(&cols[a], &eb));
            let t3 = j.mul_vec(&l.bracket(&ea, &cols[b]));
            let t4 = l.bracket(&ea, &eb);
            let v: Vec<Scalar> = (0..n).map(|k| &t1[k] - &t2[k] - &t3[k] - &t4[k]).collect();
            values[b][a] = v.iter().map(|x| -x).collect();
            values[a][b] = v;
        }
    }
    Nijenhuis { values }
}

fn require_integrable(l: &LieAlgebra, h: &HermitianStructure) -> Result<(), HermitianError> {
    match nijenhuis(l, &h.j).first_nonzero() {
        None => Ok(()),
        Some((i, j, v)) => Err(HermitianError::NotIntegrable {
            i: i + 1,
            j: j + 1,
            value: format!("{:?}", v),
        }),
    }
}

/// Bismut torsion `H(X,Y,Z) = dω(JX,JY,JZ)`; requires integrability.
pub fn bismut_torsion(l: &LieAlgebra, h: &HermitianStructure) -> Result<KForm<Scalar>, HermitianError> {
    h.validate()?;
    require_integrable(l, h)?;
    Ok(fundamental_form(h).d(l).pullback(&h.j))
}

/// Pullback by `J` acting as a derivation: replaces one factor `f^i` by `f^i o J`.
fn j_derivation(j: &QMatrix, phi: &KForm<CScalar>) -> KForm<CScalar> {
    let n = phi.dim();
    let jstar: Vec<KForm<CScalar>> = (0..n)
        .map(|i| KForm::one_form(&(0..n).map(|c| CScalar::real(j.get(i, c).clone())).collect::<Vec<_>>()))
        .collect();
    let mut out = KForm::zero(n, phi.degree());
    for (idx, c) in phi.terms() {
        for m in 0..idx.len() {
            let left = KForm::<CScalar>::basis(n, &idx[..m].iter().map(|&x| x as usize).collect::<Vec<_>>());
            let right = KForm::<CScalar>::basis(n, &idx[m + 1..].iter().map(|&x| x as usize).collect::<Vec<_>>());
            let t = left.wedge(&jstar[idx[m] as usize]).wedge(&right).scale(c);
            out = out.add(&t);
        }
    }
    out
}

/// Type decomposition with `(1,0)`-forms defined by `θ o J = iθ`; keys are `(p, q)`.
pub fn bidegree_parts(j: &QMatrix, phi: &KForm<CScalar>) -> BTreeMap<(usize, usize), KForm<CScalar>> {
    let k = phi.degree();
    let mut out = BTreeMap::new();
    for p in 0..=k {
        let q = k - p;
        let lam = |pp: usize| (pp as i64) - ((k - pp) as i64);
        let mut part = phi.clone();
        for pp in 0..=k {
            if pp == p {
                continue;
            }
            // (D - i(p'-q')) / (i(p-q) - i(p'-q'))
            let shift = CScalar::from_ints(0, lam(pp));
            let denom = CScalar::from_ints(0, lam(p) - lam(pp));
            let dpart = j_derivation(j, &part);
            part = dpart.sub(&part.scale(&shift)).scale(&denom.recip());
        }
        if !part.is_zero() {
            out.insert((p, q), part);
        }
    }
    out
}

/// `H = i(∂ - ∂̄)ω` through the type decomposition of `dω`.
pub fn torsion_via_bidegree(l: &LieAlgebra, h: &HermitianStructure) -> Result<KForm<CScalar>, HermitianError> {
    h.validate()?;
    require_integrable(l, h)?;
    let domega = fundamental_form(h).d(l).complexify();
    let parts = bidegree_parts(&h.j, &domega);
    if parts.contains_key(&(3, 0)) || parts.contains_key(&(0, 3)) {
        return Err(HermitianError::RouteDisagreement("dω has a (3,0) or (0,3) part".into()));
    }
    let n = l.dim();
    let zero = KForm::zero(n, 3);
    let del = parts.get(&(2, 1)).unwrap_or(&zero);
    let delbar = parts.get(&(1, 2)).unwrap_or(&zero);
    Ok(del.sub(delbar).scale(&CScalar::i()))
}

/// Adapted data as reported: orthonormal when exact, otherwise in the orthogonal frame with norms.
#[derive(Clone, Debug, Serialize)]
pub struct AdaptedSummary {
    pub orthonormal: bool,
    pub a: Scalar,
    pub v: Vec<Scalar>,
    pub a_mat: QMatrix,
    pub frame_norms_sq: Vec<Scalar>,
    pub numeric: crate::liealg::NumericData,
}

impl AdaptedSummary {
    pub fn from_frame(f: &AdaptedFrame) -> AdaptedSummary {
        let d = f.orthonormal.as_ref().unwrap_or(&f.unnormalized);
        AdaptedSummary {
            orthonormal: f.orthonormal.is_some(),
            a: d.a.clone(),
            v: d.v.clone(),
            a_mat: d.a_mat.clone(),
            frame_norms_sq: f.norms.clone(),
            numeric: f.numeric.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionTrace {
    pub adapted: AdaptedSummary,
    pub skt_matrix_symmetric_part_zero: bool,
    pub a_normal: bool,
    /// Real parts of the eigenvalues of `A`, in units where `a` is as reported.
    pub real_parts: Vec<String>,
    pub real_parts_in_allowed_set: Option<bool>,
    pub kahler_criterion: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SktVerdict {
    pub integrable: bool,
    pub is_skt: bool,
    pub is_kahler: bool,
    pub omega: KForm<Scalar>,
    pub d_omega: KForm<Scalar>,
    pub torsion: Option<KForm<Scalar>>,
    pub d_torsion: Option<KForm<Scalar>>,
    pub torsion_exact: Option<Exactness>,
    pub criterion: Option<CriterionTrace>,
    pub routes: Vec<String>,
}

fn criterion_trace(f: &AdaptedFrame) -> CriterionTrace {
    let d = &f.unnormalized;
    let skt = f.is_skt();
    let normal = f.normality_defect().is_zero();
    // real parts are unchanged in ratio by the frame scaling, so compare with -a/2 here
    let spec = spectrum(&d.a_mat, 1e-9);
    let half = -(&d.a / Scalar::from_int(2));
    let mut parts = Vec::new();
    let mut ok = Some(true);
    let allowed = |x: &Scalar| x.is_zero() || *x == half;
    for r in &spec.rational_eigenvalues {
        parts.push(r.value.to_string());
        if !allowed(&r.value) {
            ok = Some(false);
        }
    }
    for q in &spec.irreducible_quadratic_factors {
        parts.push(q.re.to_string());
        if !allowed(&q.re) {
            ok = Some(false);
        }
    }
    for r in &spec.residual_factors {
        for (re, _) in &r.roots {
            parts.push(format!("{re:.12}"));
            let h = half.to_f64();
            if re.abs() > 1e-9 && (re - h).abs() > 1e-9 {
                ok = Some(false);
            } else if ok == Some(true) {
                ok = None;
            }
        }
    }
    // report real parts for the orthonormal scaling when it is exact
    if let Some(o) = &f.orthonormal {
        let s = spectrum(&o.a_mat, 1e-9);
        parts = s
            .rational_eigenvalues
            .iter()
            .map(|r| r.value.to_string())
            .chain(s.irreducible_quadratic_factors.iter().map(|q| q.re.to_string()))
            .collect();
    }
    CriterionTrace {
        adapted: AdaptedSummary::from_frame(f),
        skt_matrix_symmetric_part_zero: skt,
        a_normal: normal,
        real_parts: parts,
        real_parts_in_allowed_set: ok,
        kahler_criterion: f.is_kahler(),
    }
}

/// SKT and Kähler verdicts by direct computation and, on almost abelian algebras,
/// by the adapted-basis criterion; any disagreement is an error.
pub fn skt_verdict(l: &LieAlgebra, h: &HermitianStructure) -> Result<SktVerdict, HermitianError> {
    h.validate()?;
    if l.dim() != h.dim() {
        return Err(HermitianError::Dimension(format!("algebra has dimension {}, structure {}", l.dim(), h.dim())));
    }
    let omega = fundamental_form(h);
    let d_omega = omega.d(l);
    let integrable = nijenhuis(l, &h.j).is_zero();
    if !integrable {
        return Ok(SktVerdict {
            integrable,
            is_skt: false,
            is_kahler: false,
            omega,
            d_omega,
            torsion: None,
            d_torsion: None,
            torsion_exact: None,
            criterion: None,
            routes: vec!["nijenhuis".into()],
        });
    }
    let torsion = d_omega.pullback(&h.j);
    let d_torsion = torsion.d(l);
    let is_skt = d_torsion.is_zero();
    let is_kahler = d_omega.is_zero();
    let mut routes = vec!["direct".to_string()];
    let via_types = torsion_via_bidegree(l, h)?;
    if via_types != torsion.complexify() {
        return Err(HermitianError::RouteDisagreement(format!(
            "torsion by pullback {torsion} differs from the type decomposition {}",
            via_types.format_with("f")
        )));
    }
    routes.push("bidegree".into());
    let criterion = match adapted_data(l, &h.j, &h.g) {
        Ok(frame) => {
            let tr = criterion_trace(&frame);
            if tr.skt_matrix_symmetric_part_zero != is_skt {
                return Err(HermitianError::RouteDisagreement(format!(
                    "direct SKT = {is_skt}, adapted criterion = {}",
                    tr.skt_matrix_symmetric_part_zero
                )));
            }
            if tr.kahler_criterion != is_kahler {
                return Err(HermitianError::RouteDisagreement(format!(
                    "direct Kähler = {is_kahler}, adapted criterion = {}",
                    tr.kahler_criterion
                )));
            }
            if let Some(spec_ok) = tr.real_parts_in_allowed_set {
                if (spec_ok && tr.a_normal) != is_skt {
                    return Err(HermitianError::RouteDisagreement(format!(
                        "spectral criterion gives {}, direct SKT = {is_skt}",
                        spec_ok && tr.a_normal
                    )));
                }
                routes.push("spectral".into());
            }
            routes.push("adapted".into());
            Some(tr)
        }
        Err(LieError::NotAlmostAbelian(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let torsion_exact = Some(is_exact(l, &torsion));
    Ok(SktVerdict {
        integrable,
        is_skt,
        is_kahler,
        omega,
        d_omega,
        torsion: Some(torsion),
        d_torsion: Some(d_torsion),
        torsion_exact,
        criterion,
        routes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::AlmostAbelianData;

    fn alg(s: &str) -> LieAlgebra {
        LieAlgebra::parse(s, &BTreeMap::new()).unwrap()
    }

    fn f(idx: &[usize]) -> KForm<Scalar> {
        let z: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        KForm::basis(6, &z)
    }

    fn example1() -> HermitianStructure {
        HermitianStructure::from_pairs(6, &[(1, 6), (2, 3), (4, 5)]).unwrap()
    }

    #[test]
    fn example1_fundamental_form() {
        let w = fundamental_form(&example1());
        assert_eq!(w, f(&[1, 6]).add(&f(&[2, 3])).add(&f(&[4, 5])));
    }

    #[test]
    fn k17_torsion_is_f123() {
        let l = alg("(f^{16},-1/2f^{26},-1/2f^{36},0,0,0)");
        let v = skt_verdict(&l, &example1()).unwrap();
        assert!(v.integrable && v.is_skt && !v.is_kahler);
        assert_eq!(v.torsion.unwrap(), f(&[1, 2, 3]));
        assert!(!v.torsion_exact.unwrap().is_exact());
    }

    #[test]
    fn k1_torsion() {
        let l = alg("(f^{16},-1/2f^{26},-1/2f^{36},-1/2f^{46},-1/2f^{56},0)");
        let v = skt_verdict(&l, &example1()).unwrap();
        assert!(v.is_skt);
        assert_eq!(v.torsion.unwrap(), f(&[1, 2, 3]).add(&f(&[1, 4, 5])));
    }

    #[test]
    fn rejects_bad_structures() {
        let mut j = j_from_pairs(6, &[(1, 6), (2, 3), (4, 5)]);
        j.set(0, 0, Scalar::one());
        assert!(matches!(
            HermitianStructure::new(j, QMatrix::identity(6)),
            Err(HermitianError::NotComplexStructure { .. })
        ));
        let mut g = QMatrix::identity(6);
        g.set(0, 1, Scalar::new(1, 2));
        g.set(1, 0, Scalar::new(1, 2));
        assert!(matches!(
            HermitianStructure::new(j_from_pairs(6, &[(1, 6), (2, 3), (4, 5)]), g),
            Err(HermitianError::NotCompatible { .. })
        ));
    }

    #[test]
    fn non_integrable_structure() {
        // the pairing (1,2),(3,6),(4,5) mixes the rotation plane of k23 with the kernel
        let l = alg("(f^{26},-f^{16},f^{46},0,0,0)");
        let h = HermitianStructure::from_pairs(6, &[(1, 3), (2, 6), (4, 5)]).unwrap();
        let n = nijenhuis(&l, &h.j);
        assert!(!n.is_zero());
        assert!(matches!(bismut_torsion(&l, &h), Err(HermitianError::NotIntegrable { .. })));
    }

    /// Closed-form torsion in an orthonormal adapted basis, checked against the direct route.
    #[test]
    fn torsion_expansion_in_adapted_basis() {
        let q = |n: i64| Scalar::from_int(n);
        // A commuting with J1: rows (A11,A12,A13,A14),(A21,A22,A23,A24),(-A24,-A23,A22,A21),(-A14,-A13,A12,A11)
        let (a11, a12, a13, a14, a21, a22, a23, a24) = (q(2), q(-1), q(3), q(1), q(5), q(-2), q(1), q(4));
        let am = QMatrix::from_rows(vec![
            vec![a11.clone(), a12.clone(), a13.clone(), a14.clone()],
            vec![a21.clone(), a22.clone(), a23.clone(), a24.clone()],
            vec![-&a24, -&a23, a22.clone(), a21.clone()],
            vec![-&a14, -&a13, a12.clone(), a11.clone()],
        ]);
        let v = vec![q(1), q(-2), q(3), q(7)];
        let d = AlmostAbelianData::new(q(3), v.clone(), am).unwrap();
        let l = LieAlgebra::from_almost_abelian(&d).unwrap();
        let h = HermitianStructure::from_pairs(6, &[(1, 6), (2, 5), (3, 4)]).unwrap();
        let tor = bismut_torsion(&l, &h).unwrap();
        let e = |idx: &[usize]| f(idx);
        let expected = e(&[1, 2, 3])
            .sub(&e(&[1, 4, 5]))
            .scale(&(&a13 - &a24))
            .sub(&e(&[1, 2, 4]).add(&e(&[1, 3, 5])).scale(&(&a12 + &a21)))
            .sub(&e(&[1, 3, 4]).scale(&(&a22 * q(2))))
            .sub(&e(&[1, 2, 5]).scale(&(&a11 * q(2))))
            .sub(&e(&[1, 2, 6]).scale(&v[0]))
            .sub(&e(&[1, 3, 6]).scale(&v[1]))
            .sub(&e(&[1, 4, 6]).scale(&v[2]))
            .sub(&e(&[1, 5, 6]).scale(&v[3]));
        assert_eq!(tor, expected);
    }

    #[test]
    fn bidegree_has_no_pure_types() {
        let l = alg("(f^{26},-f^{16},f^{46},0,0,0)");
        let h = HermitianStructure::from_pairs(6, &[(1, 2), (3, 5), (4, 6)]).unwrap();
        let d = fundamental_form(&h).d(&l).complexify();
        let parts = bidegree_parts(&h.j, &d);
        let total = parts.values().fold(KForm::zero(6, 3), |acc, p| acc.add(p));
        assert_eq!(total, d);
        assert!(!parts.contains_key(&(3, 0)));
    }
}
