use nalgebra::DMatrix;
use serde::Serialize;

use super::matrix::{dot, QMatrix};
use super::scalar::Scalar;
use super::spectrum::spectrum;
use super::NumericsError;

/// Orthogonal block form `Q^T M Q = D`, exact when square roots allow it.
#[derive(Clone, Debug, Serialize)]
pub enum NormalForm {
    Exact { q: QMatrix, d: QMatrix },
    Numeric { q: Vec<Vec<f64>>, d: Vec<Vec<f64>>, residual: f64, tolerance: f64 },
}

impl NormalForm {
    pub fn q_f64(&self) -> Vec<Vec<f64>> {
        match self {
            NormalForm::Exact { q, .. } => q.to_f64(),
            NormalForm::Numeric { q, .. } => q.clone(),
        }
    }

    pub fn d_f64(&self) -> Vec<Vec<f64>> {
        match self {
            NormalForm::Exact { d, .. } => d.to_f64(),
            NormalForm::Numeric { d, .. } => d.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NormalForm::Exact { .. })
    }
}

fn gram_schmidt_into(frame: &mut Vec<Vec<Scalar>>, v: Vec<Scalar>) -> Option<Vec<Scalar>> {
    let mut u = v;
    for f in frame.iter() {
        let c = dot(&u, f) / dot(f, f);
        if !c.is_zero() {
            u = u.iter().zip(f).map(|(a, b)| a - &c * b).collect();
        }
    }
    if u.iter().all(|x| x.is_zero()) {
        None
    } else {
        frame.push(u.clone());
        Some(u)
    }
}

/// Block-diagonalizes a real normal matrix: 1x1 blocks for real eigenvalues (ascending)
/// followed by `[[a, b], [-b, a]]` blocks with `b > 0`.
pub fn normal_block_diagonalize(m: &QMatrix, tol: f64) -> Result<NormalForm, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::Dimension("normal form needs a square matrix".into()));
    }
    let n = m.rows();
    let c = m.mul(&m.transpose()).sub(&m.transpose().mul(m));
    for i in 0..n {
        for j in 0..n {
            if !c.get(i, j).is_zero() {
                return Err(NumericsError::NotNormal { i, j, value: c.get(i, j).to_string() });
            }
        }
    }
    let spec = spectrum(m, tol);
    if !spec.is_exact() {
        return schur_fallback(m, tol);
    }
    let mut pieces: Vec<Piece> = Vec::new();
    for r in &spec.rational_eigenvalues {
        let ker = m.sub(&QMatrix::identity(n).scale(&r.value)).kernel();
        let mut local = Vec::new();
        for v in ker {
            if let Some(u) = gram_schmidt_into(&mut local, v) {
                pieces.push(Piece::Real(r.value.clone(), u));
            }
        }
    }
    for q in &spec.irreducible_quadratic_factors {
        let space = q.poly.eval_matrix(m).kernel();
        let shifted = m.sub(&QMatrix::identity(n).scale(&q.re));
        let beta = q.im_sq.sqrt_exact();
        let mut local: Vec<Vec<Scalar>> = Vec::new();
        for v in space {
            let Some(u) = gram_schmidt_into(&mut local, v) else { continue };
            // partner -(M - a) u keeps the pair orthogonal, with norm scaled by b
            let w: Vec<Scalar> = shifted.mul_vec(&u).iter().map(|x| -x).collect();
            local.push(w.clone());
            pieces.push(Piece::Pair { a: q.re.clone(), b: beta.clone(), b_sq: q.im_sq.clone(), u, w });
        }
    }
    if let Some(cols) = exact_columns(&pieces) {
        let q = QMatrix::from_cols(&cols);
        let d = q.transpose().mul(m).mul(&q);
        return Ok(NormalForm::Exact { q, d });
    }
    let unit = |v: &Vec<Scalar>| -> Vec<f64> {
        let nr = dot(v, v).to_f64().sqrt();
        v.iter().map(|x| x.to_f64() / nr).collect()
    };
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut dblocks: Vec<(f64, Option<f64>)> = Vec::new();
    for p in &pieces {
        match p {
            Piece::Real(a, v) => {
                cols.push(unit(v));
                dblocks.push((a.to_f64(), None));
            }
            Piece::Pair { a, b_sq, u, w, .. } => {
                cols.push(unit(u));
                cols.push(unit(w));
                dblocks.push((a.to_f64(), Some(b_sq.to_f64().sqrt())));
            }
        }
    }
    finish_numeric(m, cols, &dblocks, tol)
}

enum Piece {
    Real(Scalar, Vec<Scalar>),
    Pair { a: Scalar, b: Option<Scalar>, b_sq: Scalar, u: Vec<Scalar>, w: Vec<Scalar> },
}

fn exact_columns(pieces: &[Piece]) -> Option<Vec<Vec<Scalar>>> {
    let unit = |v: &Vec<Scalar>| -> Option<Vec<Scalar>> {
        let r = dot(v, v).sqrt_exact()?;
        Some(v.iter().map(|x| x / &r).collect())
    };
    let mut cols = Vec::new();
    for p in pieces {
        match p {
            Piece::Real(_, v) => cols.push(unit(v)?),
            Piece::Pair { b, u, w, .. } => {
                let b = b.as_ref()?;
                let w: Vec<Scalar> = w.iter().map(|x| x / b).collect();
                cols.push(unit(u)?);
                cols.push(unit(&w)?);
            }
        }
    }
    Some(cols)
}

fn finish_numeric(
    m: &QMatrix,
    cols: Vec<Vec<f64>>,
    dblocks: &[(f64, Option<f64>)],
    tol: f64,
) -> Result<NormalForm, NumericsError> {
    let n = m.rows();
    let mf = m.to_f64();
    let q = DMatrix::<f64>::from_fn(n, n, |i, j| cols[j][i]);
    let mm = DMatrix::<f64>::from_fn(n, n, |i, j| mf[i][j]);
    let dm = q.transpose() * &mm * &q;
    let mut d = vec![vec![0.0; n]; n];
    let mut i = 0;
    for (a, b) in dblocks {
        d[i][i] = *a;
        if let Some(b) = b {
            d[i + 1][i + 1] = *a;
            d[i][i + 1] = *b;
            d[i + 1][i] = -*b;
            i += 2;
        } else {
            i += 1;
        }
    }
    let mut residual: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            residual = residual.max((dm[(r, c)] - d[r][c]).abs());
        }
    }
    if residual > tol {
        return Err(NumericsError::Tolerance { residual, tolerance: tol });
    }
    let qv = (0..n).map(|r| (0..n).map(|c| q[(r, c)]).collect()).collect();
    Ok(NormalForm::Numeric { q: qv, d, residual, tolerance: tol })
}

/// Real Schur form; for a normal matrix it is block diagonal.
fn schur_fallback(m: &QMatrix, tol: f64) -> Result<NormalForm, NumericsError> {
    let n = m.rows();
    let mf = m.to_f64();
    let mm = DMatrix::<f64>::from_fn(n, n, |i, j| mf[i][j]);
    let (q, t) = mm.schur().unpack();
    let cols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| q[(i, j)]).collect()).collect();
    let mut reals: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut pairs: Vec<(f64, f64, Vec<f64>, Vec<f64>)> = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)].abs() > tol {
            // normalize the 2x2 block to [[a, b], [-b, a]] with b > 0
            let a = 0.5 * (t[(i, i)] + t[(i + 1, i + 1)]);
            let b = (-(t[(i, i + 1)] * t[(i + 1, i)])).abs().sqrt();
            let mut w = cols[i + 1].clone();
            if t[(i, i + 1)] < 0.0 {
                w.iter_mut().for_each(|x| *x = -*x);
            }
            pairs.push((a, b, cols[i].clone(), w));
            i += 2;
        } else {
            reals.push((t[(i, i)], cols[i].clone()));
            i += 1;
        }
    }
    reals.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut cols = Vec::new();
    let mut blocks = Vec::new();
    for (a, v) in reals {
        cols.push(v);
        blocks.push((a, None));
    }
    for (a, b, u, w) in pairs {
        cols.push(u);
        cols.push(w);
        blocks.push((a, Some(b)));
    }
    finish_numeric(m, cols, &blocks, tol.max(1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_example() {
        let m = QMatrix::from_ints(&[&[0, 0, 0, 0], &[0, 0, 1, 0], &[0, -1, 0, 0], &[0, 0, 0, 0]]);
        let nf = normal_block_diagonalize(&m, 1e-12).unwrap();
        let NormalForm::Exact { q, d } = nf else { panic!("expected exact form") };
        assert_eq!(q.transpose().mul(&q), QMatrix::identity(4));
        assert_eq!(q.transpose().mul(&m).mul(&q), d);
        let expected = QMatrix::from_ints(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
        assert_eq!(d, expected);
    }

    #[test]
    fn rejects_non_normal() {
        let m = QMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert!(matches!(normal_block_diagonalize(&m, 1e-9), Err(NumericsError::NotNormal { .. })));
    }

    #[test]
    fn numeric_when_norms_are_not_squares() {
        // symmetric with eigenvectors (1,1) and (1,-1)
        let m = QMatrix::from_ints(&[&[2, 1], &[1, 2]]);
        let nf = normal_block_diagonalize(&m, 1e-10).unwrap();
        assert!(!nf.is_exact());
        let d = nf.d_f64();
        assert_eq!(d[0][0], 1.0);
        assert_eq!(d[1][1], 3.0);
    }

    #[test]
    fn irrational_eigenvalues_use_schur() {
        let m = QMatrix::from_ints(&[&[1, 1], &[1, 0]]);
        let nf = normal_block_diagonalize(&m, 1e-10).unwrap();
        let d = nf.d_f64();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((d[1][1] - phi).abs() < 1e-12);
        assert!((d[0][0] - (1.0 - phi)).abs() < 1e-12);
    }

    #[test]
    fn irrational_rotation_speed() {
        // b = sqrt(2): exact vectors, numeric normalization
        let m = QMatrix::from_ints(&[&[0, 1, 1], &[-1, 0, 1], &[-1, -1, 0]]);
        let nf = normal_block_diagonalize(&m, 1e-10).unwrap();
        assert!(!nf.is_exact());
        let d = nf.d_f64();
        assert!((d[1][2] - 3f64.sqrt()).abs() < 1e-12);
        let r = QMatrix::from_ints(&[&[1, 1, 0], &[-1, 1, 0], &[0, 0, 2]]);
        let nf = normal_block_diagonalize(&r, 1e-10).unwrap();
        assert!(nf.is_exact());
        let d = nf.d_f64();
        assert_eq!(d[0][0], 2.0);
        assert_eq!(d[1][2], 1.0);
    }
}
