//! Invariant-based recognition of almost abelian algebras against the catalog rows.
//!
//! For a non-nilpotent input the codimension one abelian ideal `h` is unique, so
//! `B = ad_X|h` is determined up to similarity and a nonzero scale. Each row's `B`
//! is block triangular with readable eigenvalue expressions; matching eigenvalues to
//! those expressions is a linear system in the row parameters and the scale, and
//! every solution is confirmed by an exact similarity test.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::Serialize;

use crate::liealg::{find_codim1_abelian_ideal, LieAlgebra, LinExpr};
use crate::numerics::{char_poly, spectrum, Poly, QMatrix, Scalar, SpectrumReport};

use super::constraint::{parse_pred, Env};
use super::rows::{Source, ROWS};
use super::{family_matches, template, AlgebraName, FAMILIES};

#[derive(Clone, Debug, Serialize)]
pub struct NormalizedSpectrum {
    /// Divisor applied to the eigenvalues: the trace when nonzero, else the real part
    /// of largest modulus, else the largest imaginary part.
    pub scale: f64,
    pub exact_scale: Option<Scalar>,
    /// Characteristic polynomial of `B / scale` when the scale is rational.
    pub char_poly: Option<Poly>,
    /// Eigenvalues of `B / scale`, sorted lexicographically on (re, im).
    pub eigenvalues: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JordanData {
    /// `(eigenvalue / scale, block sizes)` for rational eigenvalues.
    pub real: Vec<(String, Vec<usize>)>,
    /// `(quadratic factor, block sizes)` for complex pairs.
    pub complex: Vec<(String, Vec<usize>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecognitionInvariants {
    pub dim_derived: usize,
    pub nilpotent: bool,
    pub unimodular: bool,
    pub center_dim: usize,
    pub lower_central_series: Vec<usize>,
    pub almost_abelian: bool,
    pub spectrum_of_ad_up_to_scale: Option<NormalizedSpectrum>,
    pub jordan_type: Option<JordanData>,
}

/// A catalog name compatible with the input. `free_directions > 0` means a whole
/// line (or more) of parameters gives isomorphic algebras; `name` is one admissible
/// representative.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub name: AlgebraName,
    /// `c` with `B_row ~ c B` for the representative.
    pub scale: Option<Scalar>,
    pub free_directions: usize,
    /// The row a theorem family label was derived from.
    pub via: Option<String>,
}

#[derive(Clone, Debug)]
struct SolutionSet {
    row: &'static str,
    /// Unknowns are the row parameters followed by the scale.
    particular: Vec<Scalar>,
    kernel: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Recognition {
    pub invariants: RecognitionInvariants,
    pub candidates: Vec<Candidate>,
    #[serde(skip)]
    b: Option<QMatrix>,
    #[serde(skip)]
    solutions: Vec<SolutionSet>,
}

impl Recognition {
    pub fn names(&self) -> Vec<String> {
        self.candidates.iter().map(|c| c.name.to_string()).collect()
    }

    /// Whether the catalog name (with its parameters) is isomorphic to the input
    /// through one of the recognized solution families.
    pub fn contains(&self, name: &AlgebraName) -> bool {
        if self.candidates.iter().any(|c| &c.name == name) {
            return true;
        }
        let Ok((row, env)) = super::resolve(name) else { return false };
        if row.source == Source::Nilpotent {
            return self.candidates.iter().any(|c| c.name.family == row.name);
        }
        let Some(b) = &self.b else { return false };
        let shape = shape_of(row.name);
        self.solutions.iter().filter(|s| s.row == row.name).any(|s| {
            // find t with particular + sum t_i kernel_i matching env on the parameter coordinates
            let k = shape.params.len();
            let m = QMatrix::from_fn(k, s.kernel.len(), |i, j| s.kernel[j][i].clone());
            let rhs: Vec<Scalar> = shape.params.iter().enumerate().map(|(i, p)| &env[p] - &s.particular[i]).collect();
            let Some(t) = m.solve(&rhs).particular else { return false };
            let mut c = s.particular[k].clone();
            for (ti, kv) in t.iter().zip(&s.kernel) {
                c += ti * &kv[k];
            }
            !c.is_zero() && similar(&row_b(shape, &env), &b.scale(&c))
        })
    }
}

struct Shape {
    name: &'static str,
    params: Vec<String>,
    b: Vec<Vec<LinExpr>>,
    real: Vec<LinExpr>,
    complex: Vec<(LinExpr, LinExpr)>,
}

fn shapes() -> &'static Vec<Shape> {
    static SHAPES: OnceLock<Vec<Shape>> = OnceLock::new();
    SHAPES.get_or_init(|| {
        ROWS.iter()
            .filter(|r| r.source != Source::Nilpotent)
            .map(|r| {
                let t = template(r);
                let b: Vec<Vec<LinExpr>> = (0..5).map(|k| (0..5).map(|j| t.coefficient(k, j, 5)).collect()).collect();
                let mut paired = [false; 5];
                let mut complex = Vec::new();
                for i in 0..5 {
                    for j in i + 1..5 {
                        if !paired[i] && !paired[j] && !b[i][j].is_zero() && !b[j][i].is_zero() {
                            debug_assert_eq!(b[i][i], b[j][j], "{}", r.name);
                            debug_assert_eq!(b[i][j], b[j][i].scale(&Scalar::from_int(-1)), "{}", r.name);
                            paired[i] = true;
                            paired[j] = true;
                            complex.push((b[i][i].clone(), b[i][j].clone()));
                        }
                    }
                }
                let mut real: Vec<LinExpr> = (0..5).filter(|i| !paired[*i]).map(|i| b[i][i].clone()).collect();
                real.sort_by_key(|e| e.to_string());
                Shape { name: r.name, params: r.params.iter().map(|p| p.to_string()).collect(), b, real, complex }
            })
            .collect()
    })
}

fn shape_of(name: &str) -> &'static Shape {
    shapes().iter().find(|s| s.name == name).expect("non-nilpotent row")
}

fn row_b(shape: &Shape, env: &Env) -> QMatrix {
    QMatrix::from_fn(5, 5, |i, j| shape.b[i][j].eval(env).expect("all parameters bound"))
}

/// `B = ad_X|h` in the basis of the ideal, `X` a coordinate vector outside `h`.
pub fn ideal_operator(l: &LieAlgebra) -> Option<QMatrix> {
    let ideal = find_codim1_abelian_ideal(l)?;
    let n = l.dim();
    let i0 = ideal.functional.iter().position(|c| !c.is_zero())?;
    let mut x = vec![Scalar::zero(); n];
    x[i0] = Scalar::one();
    let basis = QMatrix::from_cols(&ideal.basis);
    let cols: Vec<Vec<Scalar>> = ideal
        .basis
        .iter()
        .map(|v| basis.solve(&l.bracket(&x, v)).particular.expect("h is an ideal"))
        .collect();
    Some(QMatrix::from_cols(&cols))
}

fn rank_profile(m: &QMatrix, mult: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(mult);
    let mut p = m.clone();
    for _ in 0..mult {
        out.push(p.rank());
        p = p.mul(m);
    }
    out
}

/// Exact similarity over `Q`: equal characteristic polynomials and equal rank
/// profiles of every factor evaluated at both matrices.
pub fn similar(a: &QMatrix, b: &QMatrix) -> bool {
    let pa = char_poly(a);
    if pa != char_poly(b) {
        return false;
    }
    let n = a.rows();
    for (g, mult) in pa.square_free() {
        // square-free parts may still be reducible; their rank profiles are compared
        // on each linear factor we can see and on the remainder as a whole
        let mut rest = g.clone();
        for r in rational_roots(&g) {
            let shift = QMatrix::identity(n).scale(&r);
            if rank_profile(&a.sub(&shift), mult) != rank_profile(&b.sub(&shift), mult) {
                return false;
            }
            rest = rest.divrem(&Poly::linear(&r)).0;
        }
        if rest.degree() > 0 && rank_profile(&rest.eval_matrix(a), mult) != rank_profile(&rest.eval_matrix(b), mult) {
            return false;
        }
    }
    true
}

fn rational_roots(p: &Poly) -> Vec<Scalar> {
    let m = QMatrix::from_fn(p.degree(), p.degree(), |i, j| {
        // companion matrix; its spectrum report splits off the rational roots
        if i == j + 1 {
            Scalar::one()
        } else if j + 1 == p.degree() {
            -(p.monic().coeff(i))
        } else {
            Scalar::zero()
        }
    });
    spectrum(&m, 1e-9).rational_eigenvalues.into_iter().map(|e| e.value).collect()
}

fn normalized(b: &QMatrix, s: &SpectrumReport) -> (NormalizedSpectrum, JordanData) {
    let tr = b.trace();
    let mut exact: Option<Scalar> = None;
    if !tr.is_zero() {
        exact = Some(tr);
    } else {
        let mut res: Vec<Scalar> = s.rational_eigenvalues.iter().map(|e| e.value.clone()).collect();
        res.extend(s.irreducible_quadratic_factors.iter().map(|q| q.re.clone()));
        res.retain(|r| !r.is_zero());
        // largest modulus, positive one first on ties
        res.sort_by(|x, y| y.abs().cmp(&x.abs()).then(y.cmp(x)));
        let numeric_max = s.numeric_eigenvalues.iter().map(|e| e.0.abs()).fold(0.0, f64::max);
        if let Some(r) = res.first() {
            if r.abs().to_f64() >= numeric_max - 1e-9 {
                exact = Some(r.clone());
            }
        }
        if exact.is_none() && s.is_exact() {
            let mut im: Vec<Scalar> =
                s.irreducible_quadratic_factors.iter().filter_map(|q| q.im_sq.sqrt_exact()).collect();
            im.sort();
            if im.len() == s.irreducible_quadratic_factors.len() {
                exact = im.last().cloned();
            }
        }
    }
    let scale = match &exact {
        Some(e) => e.to_f64(),
        None => {
            let re = s.numeric_eigenvalues.iter().cloned().fold((0.0f64, 0.0f64), |acc, e| {
                if e.0.abs() > acc.0.abs() + 1e-9 || ((e.0.abs() - acc.0.abs()).abs() <= 1e-9 && e.0 > acc.0) {
                    e
                } else {
                    acc
                }
            });
            if re.0.abs() > 1e-9 {
                re.0
            } else {
                s.numeric_eigenvalues.iter().map(|e| e.1.abs()).fold(0.0, f64::max)
            }
        }
    };
    let scale = if scale == 0.0 { 1.0 } else { scale };
    let mut eigenvalues: Vec<(f64, f64)> = s.numeric_eigenvalues.iter().map(|e| (e.0 / scale, e.1 / scale.abs())).collect();
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    let char_poly = exact.as_ref().map(|e| char_poly(&b.scale(&e.recip())));
    let div = |v: &Scalar| match &exact {
        Some(e) => (v / e).to_string(),
        None => format!("{}", v.to_f64() / scale),
    };
    let jordan = JordanData {
        real: s.rational_eigenvalues.iter().map(|e| (div(&e.value), e.partition.clone())).collect(),
        complex: s.irreducible_quadratic_factors.iter().map(|q| (q.poly.to_string(), q.partition.clone())).collect(),
    };
    (NormalizedSpectrum { scale, exact_scale: exact, char_poly, eigenvalues }, jordan)
}

/// Assignments of values to slots up to permuting slots with identical expressions.
fn assignments<S: PartialEq, T>(slots: &[S], values: &[(T, usize)]) -> Vec<Vec<usize>> {
    fn go<S: PartialEq, T>(slots: &[S], values: &[(T, usize)], used: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == slots.len() {
            out.push(cur.clone());
            return;
        }
        let start = if i > 0 && slots[i] == slots[i - 1] { cur[i - 1] } else { 0 };
        for v in start..values.len() {
            if used[v] < values[v].1 {
                used[v] += 1;
                cur.push(v);
                go(slots, values, used, cur, out);
                cur.pop();
                used[v] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    go(slots, values, &mut vec![0; values.len()], &mut Vec::new(), &mut out);
    out
}

fn equation(e: &LinExpr, params: &[String], target: &Scalar) -> (Vec<Scalar>, Scalar) {
    let mut row: Vec<Scalar> = params.iter().map(|p| e.terms.get(p).cloned().unwrap_or_default()).collect();
    row.push(-target.clone());
    (row, -e.constant.clone())
}

fn env_from(params: &[String], u: &[Scalar]) -> Env {
    params.iter().cloned().zip(u.iter().cloned()).collect()
}

fn admissible(row: &str, env: &Env) -> bool {
    let r = super::row(row).expect("row exists");
    parse_pred(r.conditions).ok().and_then(|p| p.eval(env).ok()).unwrap_or(false)
}

struct EigenData {
    real: Vec<(Scalar, usize)>,
    complex: Vec<((Scalar, Scalar), usize)>,
    /// Ranks of `(B - l)^k` for each real eigenvalue, in the order of `real`.
    real_ranks: Vec<Vec<usize>>,
    /// Ranks of `q(B)^k` for each complex pair's quadratic factor.
    complex_ranks: Vec<Vec<usize>>,
}

impl EigenData {
    /// Exact test that `r` is similar to `c B`, reusing the rank data of `B`.
    fn similar_scaled(&self, r: &QMatrix, c: &Scalar) -> bool {
        let n = r.rows();
        let mut expected = Poly::constant(Scalar::one());
        for (l, m) in &self.real {
            expected = expected.mul(&Poly::linear(&(c * l)).pow(*m));
        }
        let quad = |(alpha, beta): &(Scalar, Scalar)| {
            let re = c * alpha;
            let norm = &re * &re + &(c * beta) * &(c * beta);
            Poly::new(vec![norm, -(&re + &re), Scalar::one()])
        };
        for (ab, m) in &self.complex {
            expected = expected.mul(&quad(ab).pow(*m));
        }
        if char_poly(r) != expected {
            return false;
        }
        for ((l, m), ranks) in self.real.iter().zip(&self.real_ranks) {
            if &rank_profile(&r.sub(&QMatrix::identity(n).scale(&(c * l))), *m) != ranks {
                return false;
            }
        }
        for ((ab, m), ranks) in self.complex.iter().zip(&self.complex_ranks) {
            if &rank_profile(&quad(ab).eval_matrix(r), *m) != ranks {
                return false;
            }
        }
        true
    }
}

fn eigen_data(b: &QMatrix, s: &SpectrumReport) -> Option<EigenData> {
    if !s.residual_factors.is_empty() {
        return None;
    }
    let n = b.rows();
    let real: Vec<(Scalar, usize)> = s.rational_eigenvalues.iter().map(|e| (e.value.clone(), e.multiplicity)).collect();
    let complex = s
        .irreducible_quadratic_factors
        .iter()
        .map(|q| Some(((q.re.clone(), q.im_sq.sqrt_exact()?), q.multiplicity)))
        .collect::<Option<Vec<_>>>()?;
    let real_ranks = real.iter().map(|(l, m)| rank_profile(&b.sub(&QMatrix::identity(n).scale(l)), *m)).collect();
    let complex_ranks =
        s.irreducible_quadratic_factors.iter().map(|q| rank_profile(&q.poly.eval_matrix(b), q.multiplicity)).collect();
    Some(EigenData { real, complex, real_ranks, complex_ranks })
}

fn match_row(shape: &Shape, eig: &EigenData) -> Vec<(Env, Scalar, SolutionSet)> {
    let n_real: usize = eig.real.iter().map(|e| e.1).sum();
    let n_complex: usize = eig.complex.iter().map(|e| e.1).sum();
    if n_real != shape.real.len() || n_complex != shape.complex.len() {
        return vec![];
    }
    let k = shape.params.len();
    let real_assign = assignments(&shape.real, &eig.real);
    let complex_assign = assignments(&shape.complex, &eig.complex);
    let mut seen: BTreeSet<Vec<Scalar>> = BTreeSet::new();
    let mut out = Vec::new();
    for ra in &real_assign {
        for ca in &complex_assign {
            for signs in 0..(1u32 << ca.len()) {
                let mut eqs: Vec<(Vec<Scalar>, Scalar)> = Vec::new();
                for (slot, &v) in shape.real.iter().zip(ra) {
                    eqs.push(equation(slot, &shape.params, &eig.real[v].0));
                }
                for (idx, ((re, im), &v)) in shape.complex.iter().zip(ca).enumerate() {
                    let (alpha, beta) = &eig.complex[v].0;
                    let beta = if signs >> idx & 1 == 1 { -beta.clone() } else { beta.clone() };
                    eqs.push(equation(re, &shape.params, alpha));
                    eqs.push(equation(im, &shape.params, &beta));
                }
                let Some((p, kernel)) = affine_solve(&eqs, k + 1) else { continue };
                let set = SolutionSet { row: shape.name, particular: p.clone(), kernel: kernel.clone() };
                for u in representatives(&p, &kernel, k) {
                    let env = env_from(&shape.params, &u);
                    if u[k].is_zero() || !admissible(shape.name, &env) || !seen.insert(u.clone()) {
                        continue;
                    }
                    if eig.similar_scaled(&row_b(shape, &env), &u[k]) {
                        out.push((env, u[k].clone(), set.clone()));
                        break;
                    }
                }
            }
        }
    }
    out
}

/// Solution set of `sum a_j x_j = b` over the rows, as a point plus kernel basis.
fn affine_solve(eqs: &[(Vec<Scalar>, Scalar)], n: usize) -> Option<(Vec<Scalar>, Vec<Vec<Scalar>>)> {
    let aug = QMatrix::from_fn(eqs.len(), n + 1, |i, j| if j < n { eqs[i].0[j].clone() } else { eqs[i].1.clone() });
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Scalar::zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = r.get(row, n).clone();
    }
    let kernel = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Scalar::zero(); n];
            v[f] = Scalar::one();
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = -r.get(row, f).clone();
            }
            v
        })
        .collect();
    Some((x, kernel))
}

/// Candidate points of an affine solution set: the set itself when it is a point,
/// otherwise points with the scale pinned to small values.
fn representatives(p: &[Scalar], kernel: &[Vec<Scalar>], k: usize) -> Vec<Vec<Scalar>> {
    if kernel.is_empty() {
        return vec![p.to_vec()];
    }
    let mut out = Vec::new();
    for c in [1, -1, 2, -2] {
        // pin the scale coordinate, then fix the remaining freedom at zero
        let m = QMatrix::from_fn(1, kernel.len(), |_, j| kernel[j][k].clone());
        let rhs = vec![&Scalar::from_int(c) - &p[k]];
        if let Some(t) = m.solve(&rhs).particular {
            let mut u = p.to_vec();
            for (ti, kv) in t.iter().zip(kernel) {
                for (ui, ki) in u.iter_mut().zip(kv) {
                    *ui += ti * ki;
                }
            }
            out.push(u);
        }
    }
    out
}

fn invariants(l: &LieAlgebra, b: Option<(&QMatrix, &SpectrumReport)>) -> RecognitionInvariants {
    let (spec, jordan) = match b {
        Some((b, s)) => {
            let (n, j) = normalized(b, s);
            (Some(n), Some(j))
        }
        None => (None, None),
    };
    let derived = l.derived_algebra();
    RecognitionInvariants {
        dim_derived: if derived.is_empty() { 0 } else { QMatrix::from_rows(derived).rank() },
        nilpotent: l.is_nilpotent(),
        unimodular: l.is_unimodular(),
        center_dim: l.center_dim(),
        lower_central_series: l.lower_central_series(),
        almost_abelian: spec.is_some(),
        spectrum_of_ad_up_to_scale: spec,
        jordan_type: jordan,
    }
}

pub fn recognize(l: &LieAlgebra) -> Recognition {
    let b = if l.dim() == 6 { ideal_operator(l) } else { None };
    let s = b.as_ref().map(|b| spectrum(b, 1e-9));
    let inv = invariants(l, b.as_ref().zip(s.as_ref()));
    let mut candidates = Vec::new();
    let mut solutions = Vec::new();
    if l.dim() != 6 || l.is_abelian() {
        return Recognition { invariants: inv, candidates, b, solutions };
    }
    if inv.nilpotent {
        for r in ROWS.iter().filter(|r| r.source == Source::Nilpotent) {
            let m = LieAlgebra::parse(r.equations, &Env::new()).expect("nilpotent rows parse");
            if m.lower_central_series() == inv.lower_central_series
                && m.center_dim() == inv.center_dim
                && QMatrix::from_rows(m.derived_algebra()).rank() == inv.dim_derived
            {
                candidates.push(Candidate { name: AlgebraName::new(r.name, &[]), scale: None, free_directions: 0, via: None });
            }
        }
        return Recognition { invariants: inv, candidates, b, solutions };
    }
    let Some(bm) = &b else { return Recognition { invariants: inv, candidates, b, solutions } };
    if let Some(eig) = s.as_ref().and_then(|s| eigen_data(bm, s)) {
        for shape in shapes() {
            for (env, c, set) in match_row(shape, &eig) {
                let free = set.kernel.len();
                for f in FAMILIES {
                    if let Some(own) = family_matches(f, shape.name, &env) {
                        if f.label != shape.name {
                            candidates.push(Candidate {
                                name: AlgebraName { family: f.label.into(), params: own },
                                scale: Some(c.clone()),
                                free_directions: 0,
                                via: Some(shape.name.into()),
                            });
                        }
                    }
                }
                candidates.push(Candidate { name: AlgebraName { family: shape.name.into(), params: env }, scale: Some(c), free_directions: free, via: None });
                solutions.push(set);
            }
        }
    }
    candidates.sort_by(|a, b| a.name.cmp(&b.name));
    candidates.dedup_by(|a, b| a.name == b.name);
    Recognition { invariants: inv, candidates, b, solutions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::new(n, d)
    }

    #[test]
    fn row_shapes_pair_rotation_blocks() {
        let s = shape_of("g6.12");
        assert_eq!(s.complex.len(), 2);
        assert!(s.real.iter().any(|e| e.to_string() == "p"));
        let s = shape_of("g6.11");
        assert_eq!(s.complex.len(), 2);
        assert_eq!(s.real.len(), 1);
        for s in shapes() {
            assert_eq!(s.real.len() + 2 * s.complex.len(), 5, "{}", s.name);
        }
    }

    #[test]
    fn similarity_sees_jordan_blocks() {
        let j = QMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        let d = QMatrix::identity(2);
        assert!(!similar(&j, &d));
        let p = QMatrix::from_ints(&[&[2, 1], &[1, 1]]);
        let conj = p.inverse().unwrap().mul(&j).mul(&p);
        assert!(similar(&j, &conj));
    }

    #[test]
    fn k17_minus_half_round_trip() {
        let name = AlgebraName::new("k17^{-1/2}", &[]);
        let r = recognize(&build(&name).unwrap());
        assert!(r.names().contains(&"k17^{-1/2}".to_string()), "{:?}", r.names());
        assert!(r.contains(&AlgebraName::new("k17", &[("p", q(-1, 2))])));
        assert!(!r.contains(&AlgebraName::new("k17", &[("p", q(1, 2))])));
    }

    #[test]
    fn free_scale_family_is_a_line() {
        let name = AlgebraName::new("g6.7", &[("p", q(1, 3)), ("q", q(-1, 2))]);
        let r = recognize(&build(&name).unwrap());
        assert!(r.contains(&name));
        assert!(r.contains(&AlgebraName::new("g6.7", &[("p", q(2, 3)), ("q", q(-1, 1))])));
        assert!(!r.contains(&AlgebraName::new("g6.7", &[("p", q(1, 3)), ("q", q(1, 2))])));
        assert!(r.candidates.iter().any(|c| c.name.family == "g6.7" && c.free_directions == 1));
    }

    #[test]
    fn abelian_and_nilpotent_inputs() {
        let r = recognize(&LieAlgebra::abelian(6));
        assert!(r.candidates.is_empty());
        assert!(r.invariants.nilpotent);
        for n in ["n1", "n2", "n3"] {
            let r = recognize(&build(&AlgebraName::new(n, &[])).unwrap());
            assert_eq!(r.names(), vec![n.to_string()]);
        }
    }

    #[test]
    fn normalized_spectrum_is_scale_free() {
        let a = build(&AlgebraName::new("k1", &[("p", q(1, 2)), ("r", q(-1, 3))])).unwrap();
        let b = ideal_operator(&a).unwrap();
        let s1 = normalized(&b, &spectrum(&b, 1e-9)).0;
        let b2 = b.scale(&q(-7, 3));
        let s2 = normalized(&b2, &spectrum(&b2, 1e-9)).0;
        assert_eq!(s1.char_poly, s2.char_poly);
    }
}
