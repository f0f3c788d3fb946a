use serde::Serialize;

use crate::numerics::{QMatrix, Scalar};

use super::{unit, AlmostAbelianData, LieAlgebra, LieError};

/// Codimension one abelian ideal `h = ker(functional)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodimOneIdeal {
    pub functional: Vec<Scalar>,
    pub basis: Vec<Vec<Scalar>>,
}

/// Finds a codimension one abelian ideal, or `None`.
///
/// Such an ideal is `ker(phi)` where `phi` lies in the image of every nonzero
/// component 2-form `c^k` (each must have rank 2) and annihilates `[g, g]`.
pub fn find_codim1_abelian_ideal(l: &LieAlgebra) -> Option<CodimOneIdeal> {
    let n = l.dim();
    let mut rows: Vec<Vec<Scalar>> = l.derived_algebra();
    for k in 0..n {
        let ck = l.component_form(k);
        if ck.is_zero() {
            continue;
        }
        if ck.rank() != 2 {
            return None;
        }
        rows.extend(ck.kernel());
    }
    let w = if rows.is_empty() {
        (0..n).map(|i| unit(n, i)).collect::<Vec<_>>()
    } else {
        QMatrix::from_rows(rows).kernel()
    };
    if w.is_empty() {
        return None;
    }
    // the rref row with the last pivot gives a canonical choice
    let (r, _) = QMatrix::from_rows(w).rref();
    let functional = r.row(r.rows() - 1);
    let basis = QMatrix::from_rows(vec![functional.clone()]).kernel();
    debug_assert!(basis.iter().all(|x| basis.iter().all(|y| l.bracket(x, y).iter().all(|c| c.is_zero()))));
    Some(CodimOneIdeal { functional, basis })
}

/// Standard complex structure on `R^{2n-2}` used for `A`: pairs `(k, 2n-3-k)`.
pub fn standard_j1(n: usize) -> QMatrix {
    let m = 2 * n - 2;
    let mut j = QMatrix::zeros(m, m);
    for p in 0..n - 1 {
        let q = m - 1 - p;
        j.set(q, p, Scalar::one());
        j.set(p, q, Scalar::from_int(-1));
    }
    j
}

/// Floating point data in an orthonormal adapted basis.
#[derive(Clone, Debug, Serialize)]
pub struct NumericData {
    pub a: f64,
    pub v: Vec<f64>,
    pub a_mat: Vec<Vec<f64>>,
}

/// Orthogonal adapted basis `e_1..e_{2n}` with `J e_i = e_{2n+1-i}`, `h = e_{2n}^perp`.
#[derive(Clone, Debug, Serialize)]
pub struct AdaptedFrame {
    pub ideal: CodimOneIdeal,
    /// Columns are `e_1..e_{2n}` in the original basis; orthogonal, not normalized.
    pub frame: QMatrix,
    pub norms: Vec<Scalar>,
    /// Coefficients of `ad_{e_{2n}}` in the orthogonal frame.
    pub unnormalized: AlmostAbelianData,
    pub orthonormal: Option<AlmostAbelianData>,
    pub orthonormal_frame: Option<QMatrix>,
    pub numeric: NumericData,
}

impl AdaptedFrame {
    pub fn n(&self) -> usize {
        self.unnormalized.n
    }

    fn gram_h1(&self) -> QMatrix {
        let m = 2 * self.n() - 2;
        QMatrix::from_fn(m, m, |i, j| if i == j { self.norms[i + 1].clone() } else { Scalar::zero() })
    }

    /// Symmetric part of `G(aA + A^2) + A^T G A`; zero iff the metric is SKT.
    pub fn skt_defect(&self) -> QMatrix {
        let g = self.gram_h1();
        let d = &self.unnormalized;
        let a = &d.a_mat;
        let m = g.mul(&a.scale(&d.a).add(&a.mul(a))).add(&a.transpose().mul(&g).mul(a));
        m.add(&m.transpose())
    }

    pub fn is_skt(&self) -> bool {
        self.skt_defect().is_zero()
    }

    pub fn is_kahler(&self) -> bool {
        let g = self.gram_h1();
        let d = &self.unnormalized;
        g.mul(&d.a_mat).is_skew() && d.v.iter().all(|x| x.is_zero())
    }

    /// `G A G^{-1} A^T G - A^T G A`; zero iff `A` is normal for the metric.
    pub fn normality_defect(&self) -> QMatrix {
        let g = self.gram_h1();
        let gi = g.inverse().expect("gram matrix is invertible");
        let a = &self.unnormalized.a_mat;
        g.mul(a).mul(&gi).mul(&a.transpose()).mul(&g).sub(&a.transpose().mul(&g).mul(a))
    }

    /// Scale factor `|e_{2n}|` relating unnormalized to orthonormal coefficients.
    pub fn e_last_norm_sq(&self) -> &Scalar {
        self.norms.last().unwrap()
    }
}

fn gdot(g: &QMatrix, x: &[Scalar], y: &[Scalar]) -> Scalar {
    let gy = g.mul_vec(y);
    x.iter().zip(&gy).fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
}

fn axpy(x: &[Scalar], c: &Scalar, y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a - c * b).collect()
}

/// Adapted data for a Hermitian structure `(J, g)` on an almost abelian algebra.
pub fn adapted_data(l: &LieAlgebra, j: &QMatrix, g: &QMatrix) -> Result<AdaptedFrame, LieError> {
    let dim = l.dim();
    if !dim.is_multiple_of(2) || dim < 4 {
        return Err(LieError::Dimension(format!("need even dimension at least 4, got {dim}")));
    }
    let n = dim / 2;
    let ideal = find_codim1_abelian_ideal(l)
        .ok_or_else(|| LieError::NotAlmostAbelian("no codimension one abelian ideal".into()))?;
    let gi = g.inverse().map_err(|_| LieError::HermitianIncompatible("metric is singular".into()))?;
    let e_last = gi.mul_vec(&ideal.functional);
    let e_first: Vec<Scalar> = j.mul_vec(&e_last).iter().map(|x| -x).collect();
    let mut frame_h1: Vec<Vec<Scalar>> = Vec::new();
    let fixed = [e_first.clone(), e_last.clone()];
    for i in 0..dim {
        if frame_h1.len() == 2 * n - 2 {
            break;
        }
        let mut x = unit(dim, i);
        for f in fixed.iter().chain(frame_h1.iter()) {
            let c = gdot(g, &x, f) / gdot(g, f, f);
            if !c.is_zero() {
                x = axpy(&x, &c, f);
            }
        }
        if x.iter().all(|c| c.is_zero()) {
            continue;
        }
        let jx = j.mul_vec(&x);
        frame_h1.push(x);
        frame_h1.push(jx);
    }
    if frame_h1.len() != 2 * n - 2 {
        return Err(LieError::HermitianIncompatible("could not complete an adapted basis".into()));
    }
    // order: e_1, u_1..u_{n-1}, J u_{n-1}..J u_1, e_{2n}
    let mut cols = vec![e_first];
    for p in 0..n - 1 {
        cols.push(frame_h1[2 * p].clone());
    }
    for p in (0..n - 1).rev() {
        cols.push(frame_h1[2 * p + 1].clone());
    }
    cols.push(e_last.clone());
    let norms: Vec<Scalar> = cols.iter().map(|c| gdot(g, c, c)).collect();
    let m = dim - 1;
    let mut b = QMatrix::zeros(m, m);
    for jj in 0..m {
        let y = l.bracket(&e_last, &cols[jj]);
        if !gdot(g, &y, &e_last).is_zero() {
            return Err(LieError::NotAlmostAbelian("ideal is not preserved".into()));
        }
        for ii in 0..m {
            b.set(ii, jj, gdot(g, &y, &cols[ii]) / &norms[ii]);
        }
    }
    let w: Vec<String> = (1..m).filter(|&c| !b.get(0, c).is_zero()).map(|c| format!("w{c}={}", b.get(0, c))).collect();
    if !w.is_empty() {
        return Err(LieError::HermitianIncompatible(format!("J e_1 not orthogonal to the image: {}", w.join(", "))));
    }
    let a = b.get(0, 0).clone();
    let v: Vec<Scalar> = (1..m).map(|i| b.get(i, 0).clone()).collect();
    let idx: Vec<usize> = (1..m).collect();
    let a_mat = b.submatrix(&idx, &idx);
    let unnormalized = AlmostAbelianData::new(a, v, a_mat)?;
    let comm = unnormalized.a_mat.commutator(&standard_j1(n));
    if !comm.is_zero() {
        return Err(LieError::HermitianIncompatible(format!("[A, J] = {comm:?}")));
    }
    // orthonormal coefficients: B_ij sqrt(n_i / (n_last n_j))
    let nl = norms.last().unwrap().clone();
    let mut exact = QMatrix::zeros(m, m);
    let mut ok = true;
    let mut bf = vec![vec![0.0; m]; m];
    for ii in 0..m {
        for jj in 0..m {
            let x = b.get(ii, jj);
            if x.is_zero() {
                continue;
            }
            let ratio = &norms[ii] / (&nl * &norms[jj]);
            bf[ii][jj] = x.to_f64() * ratio.to_f64().sqrt();
            match ratio.sqrt_exact() {
                Some(r) => exact.set(ii, jj, x * r),
                None => ok = false,
            }
        }
    }
    let orthonormal = if ok {
        Some(AlmostAbelianData::new(
            exact.get(0, 0).clone(),
            (1..m).map(|i| exact.get(i, 0).clone()).collect(),
            exact.submatrix(&idx, &idx),
        )?)
    } else {
        None
    };
    let roots: Option<Vec<Scalar>> = norms.iter().map(|x| x.sqrt_exact()).collect();
    let orthonormal_frame = roots.map(|r| {
        let scaled: Vec<Vec<Scalar>> = cols.iter().zip(&r).map(|(c, s)| c.iter().map(|x| x / s).collect()).collect();
        QMatrix::from_cols(&scaled)
    });
    let numeric = NumericData {
        a: bf[0][0],
        v: (1..m).map(|i| bf[i][0]).collect(),
        a_mat: (1..m).map(|i| (1..m).map(|c| bf[i][c]).collect()).collect(),
    };
    Ok(AdaptedFrame {
        ideal,
        frame: QMatrix::from_cols(&cols),
        norms,
        unnormalized,
        orthonormal,
        orthonormal_frame,
        numeric,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn alg(s: &str) -> LieAlgebra {
        LieAlgebra::parse(s, &BTreeMap::new()).unwrap()
    }

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    /// `J f_a = f_b` pairs, one based.
    fn jmat(pairs: &[(usize, usize)]) -> QMatrix {
        let mut j = QMatrix::zeros(6, 6);
        for &(a, b) in pairs {
            j.set(b - 1, a - 1, q(1));
            j.set(a - 1, b - 1, q(-1));
        }
        j
    }

    #[test]
    fn heisenberg_and_so3() {
        let h = alg("(0,0,f^{12})");
        let i = find_codim1_abelian_ideal(&h).unwrap();
        assert_eq!(i.functional, vec![q(0), q(1), q(0)]);
        let so3 = alg("(f^{23},-f^{13},f^{12})");
        assert!(find_codim1_abelian_ideal(&so3).is_none());
        let ab = LieAlgebra::abelian(6);
        let i = find_codim1_abelian_ideal(&ab).unwrap();
        assert_eq!(i.functional, unit(6, 5));
    }

    #[test]
    fn nilpotent_six_dimensional_ideal() {
        let l = alg("(0,0,0,f^{12},f^{13},f^{14})");
        let i = find_codim1_abelian_ideal(&l).unwrap();
        assert_eq!(i.basis.len(), 5);
        for x in &i.basis {
            for y in &i.basis {
                assert!(l.bracket(x, y).iter().all(|c| c.is_zero()));
            }
        }
    }

    #[test]
    fn k17_example_frame() {
        let l = alg("(f^{16},-1/2f^{26},-1/2f^{36},0,0,0)");
        let j = jmat(&[(1, 6), (2, 3), (4, 5)]);
        let f = adapted_data(&l, &j, &QMatrix::identity(6)).unwrap();
        let d = f.orthonormal.as_ref().unwrap();
        assert_eq!(d.a, q(1));
        assert!(d.v.iter().all(|x| x.is_zero()));
        let h = Scalar::new(-1, 2);
        let z = Scalar::zero();
        let expected = QMatrix::from_rows(vec![
            vec![h.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), h.clone()],
        ]);
        assert_eq!(d.a_mat, expected);
        assert!(f.is_skt());
        assert!(!f.is_kahler());
    }

    #[test]
    fn incompatible_structure_rejected() {
        let l = alg("(f^{16},-1/2f^{26},-1/2f^{36},0,0,0)");
        // J pairs f2 with f4, which mixes eigenvalues -1/2 and 0
        let j = jmat(&[(1, 6), (2, 4), (3, 5)]);
        assert!(matches!(
            adapted_data(&l, &j, &QMatrix::identity(6)),
            Err(LieError::HermitianIncompatible(_))
        ));
    }
}
