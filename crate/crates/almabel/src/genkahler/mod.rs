//! Generalized Kähler triples `(J_+, J_-, g)`: verification, the commutator bivector,
//! the obstruction search for non-split structures, and canonical bundle generators.

mod numeric;
pub mod symbolic;

use serde::Serialize;
use thiserror::Error;

use crate::dolbeault::{bivector20_part, holomorphic_poisson_space, Bivector20, DolbeaultData, DolbeaultError};
use crate::exterior::{KForm, MixedForm};
use crate::hermitian::{bismut_torsion, fundamental_form, j_from_pairs, nijenhuis, HermitianError, HermitianStructure};
use crate::liealg::{adapted_data, AlmostAbelianData, LieAlgebra, LieError};
use crate::numerics::{CScalar, QMatrix, Scalar};

use self::symbolic::{var_index, ConstraintSystem, ConstraintTrace, Engine, Step};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GkError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("search budget must be positive")]
    BudgetZero,
    #[error("frame mismatch: {0}")]
    FrameMismatch(String),
    #[error("(J+, g) is not SKT")]
    NotSkt,
    #[error("not available: {0}")]
    Unavailable(String),
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
    #[error(transparent)]
    Dolbeault(#[from] DolbeaultError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GkTriple {
    pub j_plus: QMatrix,
    pub j_minus: QMatrix,
    pub g: QMatrix,
}

impl GkTriple {
    pub fn new(j_plus: QMatrix, j_minus: QMatrix, g: QMatrix) -> Result<GkTriple, GkError> {
        let n = j_plus.rows();
        for (name, m) in [("J+", &j_plus), ("J-", &j_minus), ("g", &g)] {
            if m.rows() != n || m.cols() != n {
                return Err(GkError::Shape(format!("{name} is {}x{}, expected {n}x{n}", m.rows(), m.cols())));
            }
        }
        Ok(GkTriple { j_plus, j_minus, g })
    }

    pub fn dim(&self) -> usize {
        self.j_plus.rows()
    }
}

/// The split structure `J_+ f1 = f6, J_+ f2 = f3, J_+ f4 = f5`, `J_- f1 = f6, J_- f3 = f2,
/// J_- f5 = f4`, `g` the identity.
pub fn gk_example() -> GkTriple {
    GkTriple {
        j_plus: j_from_pairs(6, &[(1, 6), (2, 3), (4, 5)]),
        j_minus: j_from_pairs(6, &[(1, 6), (3, 2), (5, 4)]),
        g: QMatrix::identity(6),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GkFailure {
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GkVerdict {
    pub valid: bool,
    pub split: bool,
    /// `H = d^c_+ ω_+`, when `J_+` is integrable.
    pub h: Option<KForm<Scalar>>,
    pub h_minus: Option<KForm<Scalar>>,
    pub commutator: QMatrix,
    pub failures: Vec<GkFailure>,
}

fn failure(kind: &str, detail: impl ToString) -> GkFailure {
    GkFailure { kind: kind.to_string(), detail: detail.to_string() }
}

pub fn verify_gk(l: &LieAlgebra, t: &GkTriple) -> Result<GkVerdict, GkError> {
    if l.dim() != t.dim() {
        return Err(GkError::Shape(format!("algebra has dimension {}, triple {}", l.dim(), t.dim())));
    }
    let mut failures = Vec::new();
    let commutator = t.j_plus.commutator(&t.j_minus);
    let torsion = |j: &QMatrix, tag: &str, failures: &mut Vec<GkFailure>| -> Option<KForm<Scalar>> {
        let h = HermitianStructure { j: j.clone(), g: t.g.clone() };
        if let Err(e) = h.validate() {
            failures.push(failure(&format!("non_hermitian_{tag}"), e));
            return None;
        }
        if let Some((i, k, v)) = nijenhuis(l, j).first_nonzero() {
            failures.push(failure(&format!("non_integrable_{tag}"), format!("N(f{}, f{}) = {:?}", i + 1, k + 1, v)));
            return None;
        }
        bismut_torsion(l, &h).ok()
    };
    let hp = torsion(&t.j_plus, "plus", &mut failures);
    let hm = torsion(&t.j_minus, "minus", &mut failures);
    if let (Some(p), Some(m)) = (&hp, &hm) {
        let sum = p.add(m);
        if !sum.is_zero() {
            failures.push(failure("torsion_mismatch", format!("H+ + H- = {sum}")));
        }
        let dh = p.d(l);
        if !dh.is_zero() {
            failures.push(failure("non_pluriclosed", format!("dH+ = {dh}")));
        }
    }
    Ok(GkVerdict {
        valid: failures.is_empty(),
        split: commutator.is_zero(),
        h: hp,
        h_minus: hm,
        commutator,
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorPoisson {
    pub pi: Bivector20,
    /// `[J_+, J_-] g^{-1}` as a bivector in the orthonormal adapted frame of `(J_+, g)`.
    pub bivector: KForm<Scalar>,
    pub holomorphic: bool,
    pub poisson: bool,
}

/// `[J_+, J_-] g^{-1}` as a bivector, with its `(2,0)` part relative to `J_+`.
pub fn commutator_poisson(l: &LieAlgebra, t: &GkTriple) -> Result<CommutatorPoisson, GkError> {
    if l.dim() != 6 || t.dim() != 6 {
        return Err(GkError::Shape("the complex frame formulas need dimension 6".into()));
    }
    let c = t.j_plus.commutator(&t.j_minus).mul(&t.g.inverse().map_err(|e| GkError::Shape(e.to_string()))?);
    let frame = adapted_data(l, &t.j_plus, &t.g)?;
    let (f, data) = match (&frame.orthonormal_frame, &frame.orthonormal) {
        (Some(f), Some(d)) => (f.clone(), d.clone()),
        _ => return Err(GkError::Unavailable("the orthonormal adapted frame is not rational".into())),
    };
    let mut terms = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            terms.push((vec![i, j], c.get(i, j).clone()));
        }
    }
    let pi_f = KForm::from_terms(6, 2, terms);
    let finv = f.inverse().map_err(|e| GkError::Shape(e.to_string()))?;
    let pi_e = pi_f.push(&finv);
    let pi = bivector20_part(&pi_e.complexify());
    let dd = DolbeaultData::from_data(&data)?;
    let m = crate::dolbeault::dolbeault_matrices(&dd);
    let holomorphic = m.m20.mul_vec(&pi.to_vec()).iter().all(|x| x.is_zero());
    let poisson = crate::dolbeault::schouten_bracket_check(&pi, &dd).is_zero();
    Ok(CommutatorPoisson { pi, bivector: pi_e, holomorphic, poisson })
}

/// The Hermitian complex structure `J e_i = e_{7-i}` of the complex frame.
pub fn frame_j() -> QMatrix {
    j_from_pairs(6, &[(1, 6), (2, 5), (3, 4)])
}

/// Data of the normal form `B` with `a = 0` and `A` a rotation by `s` on `(e3, e4)`.
pub fn k23_normal_form(s: &Scalar, v: &[Scalar]) -> AlmostAbelianData {
    let mut a = QMatrix::zeros(4, 4);
    a.set(1, 2, s.clone());
    a.set(2, 1, -s);
    AlmostAbelianData::new(Scalar::zero(), v.to_vec(), a).expect("shape is fixed")
}

fn k23_setting(l: &LieAlgebra, j_plus: &QMatrix, g: &QMatrix) -> Result<(AlmostAbelianData, Scalar), String> {
    if *g != QMatrix::identity(6) || *j_plus != frame_j() {
        return Err("J+ and g are not the complex frame structure".into());
    }
    let d = AlmostAbelianData::read_frame(l).ok_or("the basis is not adapted to an abelian ideal")?;
    let s = d.a_mat.get(1, 2).clone();
    if !d.a.is_zero() || s.is_zero() || d.a_mat != k23_normal_form(&s, &d.v).a_mat {
        return Err("the data is not of the form a = 0, A = rotation on (e3, e4)".into());
    }
    Ok((d, s))
}

/// Real and imaginary parts of `s (Z12 + (iβ/s) Z23)` as skew matrices.
pub fn phi_candidates(generator: &Bivector20, s: &Scalar) -> (QMatrix, QMatrix) {
    let b = generator.complex_bivector();
    let to_matrix = |k: &KForm<Scalar>| {
        let mut m = QMatrix::zeros(6, 6);
        for (idx, c) in k.terms() {
            let (i, j) = (idx[0] as usize, idx[1] as usize);
            m.set(i, j, c * s);
            m.set(j, i, -(c * s));
        }
        m
    };
    (to_matrix(&b.real_part()), to_matrix(&b.imag_part()))
}

/// One based positions `(i, j)`, `i < j`, where the commutator must vanish: outside the
/// supports of `Re Z12`, `Re Z23`, `Im Z23` (or `Im Z12`, `Im Z23`, `Re Z23`).
pub fn alignment_zeros(imaginary: bool) -> Vec<(usize, usize)> {
    let one = CScalar::one();
    let z = CScalar::zero();
    let z12 = Bivector20::new(one.clone(), z.clone(), z.clone()).complex_bivector();
    let z23 = Bivector20::new(z.clone(), z, one).complex_bivector();
    let first = if imaginary { z12.imag_part() } else { z12.real_part() };
    let mut support = std::collections::BTreeSet::new();
    for k in [first, z23.real_part(), z23.imag_part()] {
        for (idx, _) in k.terms() {
            support.insert((idx[0] as usize + 1, idx[1] as usize + 1));
        }
    }
    let mut out = Vec::new();
    for i in 1..=6 {
        for j in i + 1..=6 {
            if !support.contains(&(i, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// The scripted chain of forced vanishings for the alignment with `φ1`.
pub fn phi1_script() -> Vec<Step> {
    let u = |s: &str| Step::Use(s.to_string());
    let zero_branch = vec![
        u("N(1,6,2)"),
        u("N(1,6,5)"),
        u("N(1,5,2)"),
        u("N(1,5,5)"),
        u("N(2,6,2)"),
        u("N(2,6,5)"),
        u("H(1,2,6)"),
        u("H(1,5,6)"),
    ];
    let nonzero_branch = vec![u("J2(1,5)"), u("J2(1,6)"), u("N(2,5,2)"), u("N(2,5,5)")];
    vec![
        u("N(3,4,6)"),
        u("N(3,6,4)"),
        u("N(3,6,2)"),
        u("N(4,6,2)"),
        u("N(4,6,5)"),
        u("N(3,6,5)"),
        u("H(1,3,6)"),
        u("H(1,4,6)"),
        Step::Split(var_index(0, 1), zero_branch, nonzero_branch),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedResult {
    /// Signs applied to `J_+` on its three planes.
    pub signs: Vec<i8>,
    pub start_residual: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceReport {
    pub applicable: bool,
    pub reason: Option<String>,
    pub traces: Vec<ConstraintTrace>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub poisson_line: Option<Bivector20>,
    pub phi_candidates: Option<(QMatrix, QMatrix)>,
    pub best_residual: f64,
    pub best_restart: usize,
    pub best_j_minus: Vec<Vec<f64>>,
    pub structured_seeds: Vec<SeedResult>,
    pub constraint_trace: TraceReport,
    pub budget: usize,
    pub seed: u64,
    pub alignment_penalty: bool,
    pub levels: usize,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub alignment_penalty: bool,
    pub levels: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { alignment_penalty: false, levels: 40 }
    }
}

fn planes(j: &QMatrix) -> Option<Vec<(usize, usize)>> {
    let n = j.rows();
    let mut out = Vec::new();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let col = j.col(i);
        let nz: Vec<usize> = (0..n).filter(|&k| !col[k].is_zero()).collect();
        if nz.len() != 1 || !col[nz[0]].abs().is_one() {
            return None;
        }
        used[i] = true;
        used[nz[0]] = true;
        out.push((i, nz[0]));
    }
    Some(out)
}

pub fn search_compatible_jminus(
    l: &LieAlgebra,
    j_plus: &QMatrix,
    g: &QMatrix,
    budget: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<ObstructionReport, GkError> {
    if budget == 0 {
        return Err(GkError::BudgetZero);
    }
    if l.dim() != 6 {
        return Err(GkError::Shape("the search is written for dimension 6".into()));
    }
    if *g != QMatrix::identity(6) {
        return Err(GkError::FrameMismatch("the search parameterizes skew J- in an orthonormal basis; pass g = I".into()));
    }
    let h = HermitianStructure::new(j_plus.clone(), g.clone())?;
    let hp = bismut_torsion(l, &h)?;
    if !hp.d(l).is_zero() {
        return Err(GkError::NotSkt);
    }
    let setting = k23_setting(l, j_plus, g);
    let (poisson_line, phi, trace) = match &setting {
        Ok((d, s)) => {
            let dd = DolbeaultData::from_data(d)?;
            let space = holomorphic_poisson_space(&dd);
            let line = if space.generators.len() == 1 { Some(space.generators[0].clone()) } else { None };
            match line {
                Some(gen) if gen.y.is_zero() && !gen.x.is_zero() => {
                    let phi = phi_candidates(&gen, s);
                    let system = ConstraintSystem::new(l, j_plus, &hp);
                    let engine = Engine { system: &system, max_depth: 6 };
                    let t1 = engine.run("phi1", &alignment_zeros(false), &phi1_script());
                    let t2 = engine.run("phi2", &alignment_zeros(true), &[]);
                    (Some(gen), Some(phi), TraceReport { applicable: true, reason: None, traces: vec![t1, t2] })
                }
                other => (
                    other,
                    None,
                    TraceReport {
                        applicable: false,
                        reason: Some("the holomorphic Poisson space is not a line of the form Z12 + c Z23".into()),
                        traces: vec![],
                    },
                ),
            }
        }
        Err(reason) => (None, None, TraceReport { applicable: false, reason: Some(reason.clone()), traces: vec![] }),
    };
    let jp_f64 = j_plus.to_f64();
    let h_terms: Vec<((usize, usize, usize), f64)> = hp
        .terms()
        .map(|(idx, c)| ((idx[0] as usize, idx[1] as usize, idx[2] as usize), c.to_f64()))
        .collect();
    let mut res = numeric::Residual::new(&l.to_f64(), &jp_f64, &h_terms);
    if opts.alignment_penalty && trace.applicable {
        res.alignment = Some(alignment_zeros(false).iter().map(|&(i, j)| (i - 1, j - 1)).collect());
    }
    let best = numeric::search(&res, &jp_f64, budget, seed, opts.levels);
    let mut structured = Vec::new();
    if let Some(pl) = planes(j_plus) {
        for mask in 0..(1u32 << pl.len()) {
            let mut start = j_plus.clone();
            let mut signs = Vec::new();
            for (k, &(a, b)) in pl.iter().enumerate() {
                let sgn = if mask & (1 << k) != 0 { -1 } else { 1 };
                signs.push(sgn as i8);
                for (r, c) in [(a, b), (b, a)] {
                    let v = start.get(r, c) * Scalar::from_int(sgn);
                    start.set(r, c, v);
                }
            }
            let x0 = numeric::to_vars(&start.to_f64());
            let r0 = res.eval(&x0);
            let (_, r) = res.descend(x0, opts.levels);
            structured.push(SeedResult { signs, start_residual: r0, residual: r });
        }
    }
    Ok(ObstructionReport {
        poisson_line,
        phi_candidates: phi,
        best_residual: best.residual,
        best_restart: best.restart,
        best_j_minus: best.j_minus,
        structured_seeds: structured,
        constraint_trace: trace,
        budget,
        seed,
        alignment_penalty: opts.alignment_penalty,
        levels: opts.levels,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalGenerators {
    pub rho1: MixedForm,
    pub rho2: MixedForm,
    pub twisted_rho1: MixedForm,
    pub twisted_rho2: MixedForm,
    pub twisted_closed: (bool, bool),
    pub h: KForm<Scalar>,
}

/// `ρ1 = e^{iω+} (f1 - i f6)`, `ρ2 = e^{iω+} (f2 - i f3)(f4 - i f5)` and `(d - H)ρ`.
pub fn canonical_generators(l: &LieAlgebra, t: &GkTriple) -> Result<CanonicalGenerators, GkError> {
    let ex = gk_example();
    if l.dim() != 6 || t.g != ex.g || t.j_plus != ex.j_plus {
        return Err(GkError::FrameMismatch("J+ and g must be the split example structure in the basis f1..f6".into()));
    }
    let h = HermitianStructure::new(t.j_plus.clone(), t.g.clone())?;
    let hp = bismut_torsion(l, &h)?;
    let omega = fundamental_form(&h).complexify().scale(&CScalar::i());
    let e = MixedForm::exp(&omega);
    let one_form = |a: usize, b: usize| {
        let mut v = vec![CScalar::zero(); 6];
        v[a - 1] = CScalar::one();
        v[b - 1] = CScalar::from_ints(0, -1);
        KForm::one_form(&v)
    };
    let rho1 = e.wedge_form(&one_form(1, 6));
    let rho2 = e.wedge_form(&one_form(2, 3).wedge(&one_form(4, 5)));
    let t1 = rho1.twisted_d(l, &hp);
    let t2 = rho2.twisted_d(l, &hp);
    let closed = (t1.is_zero(), t2.is_zero());
    Ok(CanonicalGenerators { rho1, rho2, twisted_rho1: t1, twisted_rho2: t2, twisted_closed: closed, h: hp })
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

    #[test]
    fn k17_example_is_split_gk() {
        let l = alg("(f^{16},-1/2f^{26},-1/2f^{36},0,0,0)");
        let v = verify_gk(&l, &gk_example()).unwrap();
        assert!(v.valid && v.split, "{:?}", v.failures);
        assert_eq!(v.h.unwrap().to_string(), "f123");
        let c = commutator_poisson(&l, &gk_example()).unwrap();
        assert!(c.pi.is_zero() && c.holomorphic && c.poisson);
        let g = canonical_generators(&l, &gk_example()).unwrap();
        assert_eq!(g.twisted_closed, (false, false));
    }

    #[test]
    fn kahler_trivial_triple() {
        let l = alg("(f^{26},-f^{16},0,0,0,0)");
        let j = frame_j();
        // J e1 = e6 on k15^0 in this basis is not integrable; use the pairing (1,2),(3,4),(5,6)
        let j = if nijenhuis(&l, &j).is_zero() { j } else { j_from_pairs(6, &[(1, 2), (3, 4), (5, 6)]) };
        let t = GkTriple::new(j.clone(), j, QMatrix::identity(6)).unwrap();
        let v = verify_gk(&l, &t).unwrap();
        assert!(v.valid && v.split);
        assert!(v.h.unwrap().is_zero());
    }

    #[test]
    fn abelian_flat_generators_are_closed() {
        let l = LieAlgebra::abelian(6);
        let g = canonical_generators(&l, &gk_example()).unwrap();
        assert_eq!(g.twisted_closed, (true, true));
        // the top term of ρ2 is i ω+ (f2 - i f3)(f4 - i f5)
        let h = HermitianStructure::new(gk_example().j_plus, QMatrix::identity(6)).unwrap();
        let w = fundamental_form(&h).complexify().scale(&CScalar::i());
        let a = KForm::one_form(&[CScalar::zero(), CScalar::one(), CScalar::from_ints(0, -1), CScalar::zero(), CScalar::zero(), CScalar::zero()]);
        let b = KForm::one_form(&[CScalar::zero(), CScalar::zero(), CScalar::zero(), CScalar::one(), CScalar::from_ints(0, -1), CScalar::zero()]);
        assert_eq!(g.rho2.part(4).unwrap(), &w.wedge(&a).wedge(&b));
        assert_eq!(g.rho2.degrees(), vec![2, 4]);
    }

    #[test]
    fn frame_mismatch_is_rejected() {
        let l = LieAlgebra::abelian(6);
        let t = GkTriple::new(frame_j(), frame_j(), QMatrix::identity(6)).unwrap();
        assert!(matches!(canonical_generators(&l, &t), Err(GkError::FrameMismatch(_))));
    }

    #[test]
    fn alignment_pattern_gives_three_relations() {
        assert_eq!(alignment_zeros(false).len(), 9);
        let d = k23_normal_form(&q(1), &[q(1), q(0), q(0), q(0)]);
        let l = LieAlgebra::from_almost_abelian(&d).unwrap();
        let h = HermitianStructure::new(frame_j(), QMatrix::identity(6)).unwrap();
        let hp = bismut_torsion(&l, &h).unwrap();
        let system = ConstraintSystem::new(&l, &frame_j(), &hp);
        let engine = Engine { system: &system, max_depth: 0 };
        let mut state = symbolic::State::default();
        let mut entries = Vec::new();
        assert!(engine.align(&mut state, &alignment_zeros(false), &mut entries));
        let forced: Vec<&str> = entries.iter().map(|e| e.forced_value.as_str()).collect();
        assert_eq!(forced, vec!["J36 = J14", "J46 = -J13", "J56 = -J12"]);
    }

    #[test]
    fn symbolic_system_matches_exact_torsion() {
        let l = alg("(f^{16},-1/2f^{26},-1/2f^{36},0,0,0)");
        let ex = gk_example();
        let h = HermitianStructure::new(ex.j_plus.clone(), ex.g.clone()).unwrap();
        let hp = bismut_torsion(&l, &h).unwrap();
        let system = ConstraintSystem::new(&l, &ex.j_plus, &hp);
        let x: Vec<Scalar> = (0..symbolic::NVARS)
            .map(|v| {
                let (a, b) = symbolic::var_pair(v);
                ex.j_minus.get(a, b).clone()
            })
            .collect();
        for (name, p) in system.all() {
            assert!(p.eval(&x).is_zero(), "{name}");
        }
        // J- = J+ doubles the torsion
        let y: Vec<Scalar> = (0..symbolic::NVARS)
            .map(|v| {
                let (a, b) = symbolic::var_pair(v);
                ex.j_plus.get(a, b).clone()
            })
            .collect();
        assert_eq!(system.named("H(1,2,3)").unwrap().eval(&y), q(2));
        let res = numeric::Residual::new(
            &l.to_f64(),
            &ex.j_plus.to_f64(),
            &hp.terms().map(|(i, c)| ((i[0] as usize, i[1] as usize, i[2] as usize), c.to_f64())).collect::<Vec<_>>(),
        );
        assert!(res.eval(&numeric::to_vars(&ex.j_minus.to_f64())) < 1e-24);
        assert!((res.eval(&numeric::to_vars(&ex.j_plus.to_f64())) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn k23_chain_ends_in_contradiction() {
        for v in [[1, 0, 0, 0], [0, 0, 0, 1], [1, 1, -1, 2]] {
            let d = k23_normal_form(&q(1), &v.map(q));
            let l = LieAlgebra::from_almost_abelian(&d).unwrap();
            let r = search_compatible_jminus(&l, &frame_j(), &QMatrix::identity(6), 2, 42, &SearchOptions::default()).unwrap();
            assert!(r.constraint_trace.applicable);
            for t in &r.constraint_trace.traces {
                assert!(t.all_branches_contradict, "{v:?} {}: {:#?}", t.pattern, t.branches);
            }
            assert!(r.best_residual > 1e-3);
        }
    }
}
