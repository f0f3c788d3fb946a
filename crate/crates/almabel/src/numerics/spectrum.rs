use nalgebra::{linalg::Schur, DMatrix};
use num::Complex;
use serde::Serialize;

use super::matrix::QMatrix;
use super::poly::{char_poly, Poly};
use super::scalar::Scalar;

const MAX_DEN: i64 = 1_000_000;

/// Rational eigenvalue with its Jordan block sizes (largest first).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalEigenvalue {
    pub value: Scalar,
    pub multiplicity: usize,
    pub partition: Vec<usize>,
    pub max_block: usize,
}

/// Irreducible monic quadratic `x^2 - 2 re x + re^2 + im_sq` with `im_sq > 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticFactor {
    pub poly: Poly,
    pub re: Scalar,
    pub im_sq: Scalar,
    pub multiplicity: usize,
    /// Sizes of the real Jordan blocks, counted in pairs of complex eigenvalues.
    pub partition: Vec<usize>,
}

/// Factor with no exact description here; only numeric roots are known.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualFactor {
    pub poly: Poly,
    pub multiplicity: usize,
    pub roots: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub char_poly: Poly,
    pub rational_eigenvalues: Vec<RationalEigenvalue>,
    pub irreducible_quadratic_factors: Vec<QuadraticFactor>,
    pub residual_factors: Vec<ResidualFactor>,
    /// Eigenvalues computed in floating point directly from the matrix.
    pub numeric_eigenvalues: Vec<(f64, f64)>,
    pub tolerance: f64,
}

impl SpectrumReport {
    pub fn is_exact(&self) -> bool {
        self.residual_factors.is_empty()
    }

    /// Every eigenvalue as a float pair, one per multiplicity, from the exact factors.
    pub fn exact_eigenvalues_f64(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for r in &self.rational_eigenvalues {
            for _ in 0..r.multiplicity {
                out.push((r.value.to_f64(), 0.0));
            }
        }
        for q in &self.irreducible_quadratic_factors {
            let b = q.im_sq.to_f64().sqrt();
            for _ in 0..q.multiplicity {
                out.push((q.re.to_f64(), b));
                out.push((q.re.to_f64(), -b));
            }
        }
        for r in &self.residual_factors {
            for _ in 0..r.multiplicity {
                out.extend(r.roots.iter().copied());
            }
        }
        sort_pairs(&mut out);
        out
    }
}

pub(crate) fn sort_pairs(v: &mut [(f64, f64)]) {
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
}

/// Complex roots of a polynomial from its companion matrix, polished by Newton steps.
pub fn numeric_roots(p: &Poly) -> Vec<(f64, f64)> {
    let n = p.degree();
    if p.is_zero() || n == 0 {
        return vec![];
    }
    let m = p.monic();
    let c = m.to_f64();
    let comp = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let ev: Vec<Complex<f64>> = match Schur::try_new(comp, 1e-15, 10_000) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => durand_kerner(&c),
    };
    let cf: Vec<Complex<f64>> = c.iter().map(|&x| Complex::new(x, 0.0)).collect();
    let eval = |z: Complex<f64>| -> (Complex<f64>, Complex<f64>) {
        let mut v = Complex::new(0.0, 0.0);
        let mut d = Complex::new(0.0, 0.0);
        for a in cf.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    };
    let mut out: Vec<(f64, f64)> = ev
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..8 {
                let (v, d) = eval(z);
                if d.norm() < 1e-300 {
                    break;
                }
                let step = v / d;
                if !step.re.is_finite() || !step.im.is_finite() || step.norm() > 1e-3 * (1.0 + z.norm()) {
                    break;
                }
                z -= step;
            }
            (z.re, z.im)
        })
        .collect();
    sort_pairs(&mut out);
    out
}

/// Simultaneous iteration for the roots of the monic polynomial with low coefficients `c`.
fn durand_kerner(c: &[f64]) -> Vec<Complex<f64>> {
    let n = c.len() - 1;
    let bound = 1.0 + c[..n].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let seed = Complex::new(0.4, 0.9);
    let mut z: Vec<Complex<f64>> = (0..n).map(|k| seed.powu(k as u32) * bound).collect();
    let eval = |x: Complex<f64>| c.iter().rev().fold(Complex::new(0.0, 0.0), |acc, a| acc * x + a);
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut den = Complex::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                continue;
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Exact factorization of a monic square-free polynomial into rational roots,
/// rational quadratics and an unfactored remainder.
pub(crate) struct SquareFreeSplit {
    pub roots: Vec<Scalar>,
    pub quadratics: Vec<Poly>,
    pub residual: Option<Poly>,
}

pub(crate) fn split_square_free(g: &Poly) -> SquareFreeSplit {
    let mut h = g.monic();
    let mut roots = Vec::new();
    for (re, im) in numeric_roots(&h) {
        if im.abs() > 1e-6 * (1.0 + re.abs()) {
            continue;
        }
        if let Some(r) = Scalar::approximate(re, MAX_DEN) {
            if !roots.contains(&r) && h.eval(&r).is_zero() {
                h = h.divrem(&Poly::linear(&r)).0;
                roots.push(r);
            }
        }
    }
    roots.sort();
    let mut quadratics = Vec::new();
    loop {
        if h.degree() < 2 {
            break;
        }
        let rs = numeric_roots(&h);
        let mut found = None;
        'outer: for i in 0..rs.len() {
            for j in i + 1..rs.len() {
                let s = rs[i].0 + rs[j].0;
                let p = rs[i].0 * rs[j].0 - rs[i].1 * rs[j].1;
                let im_sum = rs[i].1 + rs[j].1;
                if im_sum.abs() > 1e-6 * (1.0 + s.abs()) {
                    continue;
                }
                let (Some(b), Some(c)) = (Scalar::approximate(-s, MAX_DEN), Scalar::approximate(p, MAX_DEN)) else {
                    continue;
                };
                let q = Poly::new(vec![c, b, Scalar::one()]);
                if h.divrem(&q).1.is_zero() {
                    found = Some(q);
                    break 'outer;
                }
            }
        }
        match found {
            Some(q) => {
                h = h.divrem(&q).0;
                quadratics.push(q);
            }
            None => break,
        }
    }
    let residual = if h.degree() == 0 { None } else { Some(h) };
    SquareFreeSplit { roots, quadratics, residual }
}

/// Block counts from the rank sequence of powers of `n`; `weight` is 2 for quadratic factors.
pub(crate) fn partition_from_ranks(nmat: &QMatrix, mult: usize, weight: usize) -> Vec<usize> {
    let dim = nmat.rows();
    let mut ranks = vec![dim];
    let mut p = QMatrix::identity(dim);
    for _ in 0..mult {
        p = p.mul(nmat);
        ranks.push(p.rank());
        if ranks[ranks.len() - 1] == ranks[ranks.len() - 2] {
            break;
        }
    }
    let ge: Vec<usize> = ranks.windows(2).map(|w| (w[0] - w[1]) / weight).collect();
    let mut part = Vec::new();
    for j in 0..ge.len() {
        let next = ge.get(j + 1).copied().unwrap_or(0);
        for _ in 0..ge[j].saturating_sub(next) {
            part.push(j + 1);
        }
    }
    part.sort_unstable_by(|a, b| b.cmp(a));
    part
}

pub fn spectrum(m: &QMatrix, tol: f64) -> SpectrumReport {
    let cp = char_poly(m);
    let n = m.rows();
    let mut rational = Vec::new();
    let mut quads = Vec::new();
    let mut residual = Vec::new();
    for (g, mult) in cp.square_free() {
        let split = split_square_free(&g);
        for r in split.roots {
            let nm = m.sub(&QMatrix::identity(n).scale(&r));
            let partition = partition_from_ranks(&nm, mult, 1);
            rational.push(RationalEigenvalue {
                value: r,
                multiplicity: mult,
                max_block: partition.first().copied().unwrap_or(0),
                partition,
            });
        }
        for q in split.quadratics {
            let b = q.coeff(1);
            let c = q.coeff(0);
            let re = -(&b / Scalar::from_int(2));
            let im_sq = &c - &re * &re;
            if im_sq.is_positive() {
                let partition = partition_from_ranks(&q.eval_matrix(m), mult, 2);
                quads.push(QuadraticFactor { poly: q, re, im_sq, multiplicity: mult, partition });
            } else {
                let roots = numeric_roots(&q);
                residual.push(ResidualFactor { poly: q, multiplicity: mult, roots });
            }
        }
        if let Some(h) = split.residual {
            let roots = numeric_roots(&h);
            residual.push(ResidualFactor { poly: h, multiplicity: mult, roots });
        }
    }
    rational.sort_by(|a, b| a.value.cmp(&b.value));
    quads.sort_by(|a, b| a.re.cmp(&b.re).then(a.im_sq.cmp(&b.im_sq)));
    // read off the exact factors; only the residual needs floating point roots
    let mut numeric: Vec<(f64, f64)> = Vec::with_capacity(n);
    for e in &rational {
        numeric.extend(std::iter::repeat_n((e.value.to_f64(), 0.0), e.multiplicity));
    }
    for q in &quads {
        let (re, im) = (q.re.to_f64(), q.im_sq.to_f64().sqrt());
        for _ in 0..q.multiplicity {
            numeric.push((re, im));
            numeric.push((re, -im));
        }
    }
    for r in &residual {
        for _ in 0..r.multiplicity {
            numeric.extend(r.roots.iter().copied());
        }
    }
    sort_pairs(&mut numeric);
    SpectrumReport {
        char_poly: cp,
        rational_eigenvalues: rational,
        irreducible_quadratic_factors: quads,
        residual_factors: residual,
        numeric_eigenvalues: numeric,
        tolerance: tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_block_spectrum() {
        let m = QMatrix::from_ints(&[&[0, 0, 0, 0], &[0, 0, 1, 0], &[0, -1, 0, 0], &[0, 0, 0, 0]]);
        let s = spectrum(&m, 1e-9);
        assert_eq!(s.rational_eigenvalues.len(), 1);
        assert_eq!(s.rational_eigenvalues[0].value, Scalar::zero());
        assert_eq!(s.rational_eigenvalues[0].multiplicity, 2);
        assert_eq!(s.rational_eigenvalues[0].partition, vec![1, 1]);
        assert_eq!(s.irreducible_quadratic_factors.len(), 1);
        assert_eq!(s.irreducible_quadratic_factors[0].poly, Poly::from_ints(&[1, 0, 1]));
        assert!(s.is_exact());
    }

    #[test]
    fn jordan_block_detected() {
        let m = QMatrix::from_ints(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 2]]);
        let s = spectrum(&m, 1e-9);
        assert_eq!(s.rational_eigenvalues[0].partition, vec![2, 1]);
        assert_eq!(s.rational_eigenvalues[0].max_block, 2);
    }

    #[test]
    fn complex_jordan_block() {
        // J2(i) realified: a 4x4 block with a single real Jordan chain of length 2
        let m = QMatrix::from_ints(&[&[0, 1, 1, 0], &[-1, 0, 0, 1], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
        let s = spectrum(&m, 1e-9);
        assert_eq!(s.irreducible_quadratic_factors[0].multiplicity, 2);
        assert_eq!(s.irreducible_quadratic_factors[0].partition, vec![2]);
    }

    #[test]
    fn irrational_roots_are_residual() {
        let m = QMatrix::from_ints(&[&[0, 2], &[1, 0]]);
        let s = spectrum(&m, 1e-9);
        assert!(s.rational_eigenvalues.is_empty());
        assert_eq!(s.residual_factors.len(), 1);
        let r = &s.residual_factors[0].roots;
        assert!((r[0].0 + 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rational_roots_with_fractions() {
        let m = Matrix::from_rows(vec![
            vec![Scalar::new(-1, 2), Scalar::from_int(3)],
            vec![Scalar::zero(), Scalar::new(7, 3)],
        ]);
        let s = spectrum(&m, 1e-9);
        let vals: Vec<Scalar> = s.rational_eigenvalues.iter().map(|r| r.value.clone()).collect();
        assert_eq!(vals, vec![Scalar::new(-1, 2), Scalar::new(7, 3)]);
    }

    use crate::numerics::Matrix;
}
