//! Table and theorem reproduction suite. Each check returns a pass flag and a JSON
//! record of what it computed; `run_all` drives the `reproduce-tables` command.
//!
//! Everything is seeded, so the records are identical between runs.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{
    build, known_structures, recognize, sample_params, table3_complex_structure, AlgebraName, Role, Source, KAHLER_LIST,
    ROWS, SKT_LIST, SPLIT_GK_LIST,
};
use crate::dolbeault::{
    det_m20_factored, dolbeault_matrices, dolbeault_matrices_from_brackets, holomorphic_poisson_space, DolbeaultData,
};
use crate::exterior::{is_exact, KForm};
use crate::flow::{order_probe, soliton_check};
use crate::genkahler::{
    canonical_generators, frame_j, gk_example, k23_normal_form, search_compatible_jminus, verify_gk, SearchOptions,
};
use crate::hermitian::{bismut_torsion, nijenhuis, skt_verdict, HermitianStructure};
use crate::liealg::{adapted_data, AlmostAbelianData, LieAlgebra};
use crate::numerics::{CScalar, QMatrix, Scalar};

/// Maximum deviation from the closed-form soliton along the flow.
pub const FLOW_TOLERANCE: f64 = 1e-8;
/// Smallest accepted error ratio when halving the flow step.
pub const ORDER_RATIO_MIN: f64 = 12.0;
pub const ORDER_PROBE_DT: f64 = 0.025;
/// Largest accepted SKT defect along the flow.
pub const FLOW_SKT_TOLERANCE: f64 = 1e-9;
pub const SEARCH_SEED: u64 = 42;

/// `(v, budget, floor)` for the k23^0 search at `s = 1`. Floors are the best residuals
/// seen when the search was first run, rounded down.
pub const K23_SEARCHES: [([i64; 4], usize, f64); 3] =
    [([1, 0, 0, 0], 10_000, 2.574), ([0, 0, 0, 1], 10_000, 2.574), ([1, 1, -1, 2], 10_000, 9.652)];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    /// Wall-clock budget for the check.
    pub limit_seconds: f64,
    pub details: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::new(n, d)
}

fn timed(id: u8, name: &'static str, limit_seconds: f64, f: impl FnOnce() -> (bool, Value)) -> Check {
    let start = Instant::now();
    let (pass, details) = f();
    Check { id, name, pass, limit_seconds, details, elapsed: start.elapsed() }
}

/// Orthonormal adapted data of a catalog algebra for the split GK structure.
pub fn gk_adapted_data(name: &AlgebraName) -> Option<AlmostAbelianData> {
    let l = build(name).ok()?;
    let t = gk_example();
    adapted_data(&l, &t.j_plus, &t.g).ok()?.orthonormal
}

pub fn table3_integrability() -> Check {
    timed(1, "complex list structures are integrable", 5.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut pass = true;
        let mut rows = Vec::new();
        for r in ROWS.iter().filter(|r| r.source == Source::ComplexList) {
            let j = table3_complex_structure(r.name).expect("complex list row");
            let mut samples = Vec::new();
            for _ in 0..3 {
                let name = sample_params(r.name, &mut rng, 8).expect("admissible sample");
                let ok = nijenhuis(&build(&name).expect("sample builds"), &j).is_zero();
                pass &= ok;
                samples.push(json!({ "name": name.to_string(), "nijenhuis_zero": ok }));
            }
            rows.push(json!({ "row": r.name, "j": r.complex, "samples": samples }));
        }
        (pass, json!(rows))
    })
}

fn structure_for(name: &AlgebraName, role: Role) -> Option<HermitianStructure> {
    let s = known_structures(name).ok()?.into_iter().find(|s| s.role == role)?;
    HermitianStructure::new(s.j, s.g).ok()
}

pub fn skt_route_agreement() -> Check {
    timed(2, "SKT and Kähler routes agree on the listed structures", 5.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut pass = true;
        let mut out = Vec::new();
        for (list, role) in [(SKT_LIST, Role::Skt), (KAHLER_LIST, Role::Kahler)] {
            for label in list {
                for _ in 0..3 {
                    let name = sample_params(label, &mut rng, 8).expect("admissible sample");
                    let l = build(&name).expect("sample builds");
                    let h = structure_for(&name, role).expect("listed structure");
                    let (ok, record) = match skt_verdict(&l, &h) {
                        Ok(v) => {
                            let c = v.criterion.as_ref();
                            let crit_skt = c.map(|c| c.skt_matrix_symmetric_part_zero && c.a_normal && c.real_parts_in_allowed_set == Some(true));
                            let crit_kahler = c.map(|c| c.kahler_criterion);
                            let ok = match role {
                                Role::Skt => v.is_skt && !v.is_kahler && crit_skt == Some(true) && crit_kahler == Some(false),
                                _ => v.is_kahler && crit_kahler == Some(true),
                            };
                            let record = json!({
                                "name": name.to_string(),
                                "role": role,
                                "direct": { "skt": v.is_skt, "kahler": v.is_kahler },
                                "criterion": { "skt": crit_skt, "kahler": crit_kahler,
                                    "real_parts": c.map(|c| c.real_parts.clone()) },
                                "routes": v.routes,
                            });
                            (ok, record)
                        }
                        Err(e) => (false, json!({ "name": name.to_string(), "error": e.to_string() })),
                    };
                    pass &= ok;
                    out.push(record);
                }
            }
        }
        (pass, json!(out))
    })
}

fn f123() -> KForm<Scalar> {
    KForm::basis(6, &[0, 1, 2])
}

fn f145() -> KForm<Scalar> {
    KForm::basis(6, &[0, 3, 4])
}

pub fn torsion_list() -> Check {
    timed(3, "torsion of the split GK structure", 2.0, || {
        let mut pass = true;
        let mut out = Vec::new();
        let t = gk_example();
        let h = HermitianStructure::new(t.j_plus.clone(), t.g.clone()).expect("valid structure");
        let mut cases: Vec<(AlgebraName, KForm<Scalar>)> = vec![
            (AlgebraName::new("k17^{-1/2}", &[]), f123()),
            (AlgebraName::new("k1^{-1/2,-1/2}", &[]), f123().add(&f145())),
        ];
        for p in [q(1, 1), q(-2, 1), q(3, 2)] {
            let one = f123().scale(&p);
            let two = f123().add(&f145()).scale(&p);
            cases.push((AlgebraName::new("k19^{p,-p/2}", &[("p", p.clone())]), one.clone()));
            cases.push((AlgebraName::new("k8^{p,-p/2,0}", &[("p", p.clone())]), one.clone()));
            cases.push((AlgebraName::new("k8^{p,-p/2,-p/2}", &[("p", p.clone())]), two.clone()));
            for s in [q(1, 2), q(-1, 1)] {
                cases.push((AlgebraName::new("k11^{p,-p/2,0,s}", &[("p", p.clone()), ("s", s.clone())]), one.clone()));
                cases.push((AlgebraName::new("k11^{p,-p/2,-p/2,s}", &[("p", p.clone()), ("s", s)]), two.clone()));
            }
        }
        for (name, expected) in cases {
            let got = build(&name).ok().and_then(|l| bismut_torsion(&l, &h).ok());
            let ok = got.as_ref() == Some(&expected);
            pass &= ok;
            out.push(json!({
                "name": name.to_string(),
                "torsion": got.map(|g| g.format_with("f")),
                "expected": expected.format_with("f"),
                "match": ok,
            }));
        }
        (pass, json!(out))
    })
}

/// The normal form `a = 0`, `A` a rotation by `s` on `(e3, e4)`, as an algebra in the
/// complex frame `J e_i = e_{7-i}`.
pub fn k23_algebra(s: &Scalar, v: &[Scalar]) -> LieAlgebra {
    LieAlgebra::from_almost_abelian(&k23_normal_form(s, v)).expect("normal form is a Lie algebra")
}

pub fn non_exactness() -> Check {
    timed(4, "SKT torsion is not exact", 5.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut pass = true;
        let mut out = Vec::new();
        let mut record = |label: String, l: &LieAlgebra, h: &HermitianStructure| {
            let (ok, detail) = match skt_verdict(l, h) {
                Ok(v) => {
                    let torsion = v.torsion.clone().expect("integrable");
                    match is_exact(l, &torsion) {
                        crate::exterior::Exactness::NotExact { certificate, pairing } => (
                            v.is_skt && !v.is_kahler,
                            json!({ "torsion": torsion.format_with("f"), "certificate": certificate, "pairing": pairing }),
                        ),
                        crate::exterior::Exactness::Exact { primitive } => {
                            (false, json!({ "torsion": torsion.format_with("f"), "primitive": primitive.format_with("f") }))
                        }
                    }
                }
                Err(e) => (false, json!({ "error": e.to_string() })),
            };
            out.push(json!({ "name": label, "not_exact": ok, "detail": detail }));
            ok
        };
        for label in SKT_LIST {
            for _ in 0..3 {
                let name = sample_params(label, &mut rng, 8).expect("admissible sample");
                let l = build(&name).expect("sample builds");
                let h = structure_for(&name, Role::Skt).expect("listed structure");
                pass &= record(name.to_string(), &l, &h);
            }
        }
        let h = HermitianStructure::new(frame_j(), QMatrix::identity(6)).expect("valid structure");
        for (s, v) in [(q(1, 1), [1, 0, 0, 0]), (q(2, 1), [0, 1, 0, -1]), (q(-1, 2), [3, -1, 2, 1])] {
            let v: Vec<Scalar> = v.iter().map(|&x| q(x, 1)).collect();
            let label = format!("k23^0 normal form s={s} v=({},{},{},{})", v[0], v[1], v[2], v[3]);
            pass &= record(label, &k23_algebra(&s, &v), &h);
        }
        (pass, json!(out))
    })
}

/// `A` preserving the planes `(e2, e5)` and `(e3, e4)` of `h1`: on each plane
/// `x Id + y` times the rotation that commutes with `J`.
pub fn plane_operator(x1: &Scalar, y1: &Scalar, x2: &Scalar, y2: &Scalar) -> QMatrix {
    let mut a = QMatrix::zeros(4, 4);
    a.set(0, 0, x1.clone());
    a.set(3, 3, x1.clone());
    a.set(0, 3, y1.clone());
    a.set(3, 0, -y1);
    a.set(1, 1, x2.clone());
    a.set(2, 2, x2.clone());
    a.set(1, 2, y2.clone());
    a.set(2, 1, -y2);
    a
}

fn nonzero(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let x = Scalar::new(rng.gen_range(-8..=8), rng.gen_range(1..=4));
        if !x.is_zero() {
            return x;
        }
    }
}

fn random_v(rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..4).map(|_| Scalar::new(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect()
}

/// Family label and SKT adapted data for the holomorphic Poisson checks.
type PoissonCase = (&'static str, AlmostAbelianData, Option<Expected>);

#[derive(Clone, Copy)]
enum Expected {
    /// `Z1^Z2 + (i beta / s) Z2^Z3`
    FirstBranch,
    /// `Z2^Z3`
    ThirdBranch,
}

fn poisson_cases(rng: &mut ChaCha8Rng) -> Vec<PoissonCase> {
    let z = Scalar::zero();
    let mut out = Vec::new();
    for _ in 0..3 {
        let (a, b) = (nonzero(rng), nonzero(rng));
        // |c| < |b| keeps s = c/b inside the stated family ranges
        let d = rng.gen_range(2..=5);
        let t = Scalar::new(rng.gen_range(1..d) * if rng.gen_bool(0.5) { 1 } else { -1 }, d);
        let c = &b * &t;
        let h = -(&a / q(2, 1));
        let mut v = random_v(rng);
        if v[0].is_zero() && v[3].is_zero() {
            v[0] = q(1, 1);
        }
        let mut flat = random_v(rng);
        flat[0] = z.clone();
        flat[3] = z.clone();
        let data = |a: &Scalar, v: &[Scalar], m: QMatrix| AlmostAbelianData::new(a.clone(), v.to_vec(), m).expect("n = 3");
        let rot = |r: &Scalar| plane_operator(&z, r, &z, &-r);
        out.push(("k23^{0}", k23_normal_form(&b, &v), Some(Expected::FirstBranch)));
        out.push(("k15^{0}", k23_normal_form(&b, &flat), Some(Expected::FirstBranch)));
        out.push(("k11^{p,0,0,1}", data(&a, &random_v(rng), rot(&b)), Some(Expected::ThirdBranch)));
        out.push(("k25^{0,0,1}", data(&z, &random_v(rng), rot(&b)), Some(Expected::ThirdBranch)));
        out.push(("k13", data(&a, &random_v(rng), QMatrix::zeros(4, 4)), Some(Expected::ThirdBranch)));
        let v = random_v(rng);
        out.push(("k1^{-1/2,-1/2}", data(&a, &v, plane_operator(&h, &z, &h, &z)), None));
        out.push(("k8^{p,-p/2,0}", data(&a, &v, plane_operator(&h, &z, &z, &b)), None));
        out.push(("k8^{p,-p/2,-p/2}", data(&a, &v, plane_operator(&h, &z, &h, &b)), None));
        out.push(("k11^{p,0,0,s}", data(&a, &v, plane_operator(&z, &b, &z, &c)), None));
        out.push(("k11^{p,-p/2,0,s}", data(&a, &v, plane_operator(&h, &b, &z, &c)), None));
        out.push(("k11^{p,-p/2,-p/2,s}", data(&a, &v, plane_operator(&h, &b, &h, &c)), None));
        out.push(("k17^{-1/2}", data(&a, &v, plane_operator(&h, &z, &z, &z)), None));
        out.push(("k19^{p,0}", data(&a, &v, plane_operator(&z, &b, &z, &z)), None));
        out.push(("k19^{p,-p/2}", data(&a, &v, plane_operator(&h, &b, &z, &z)), None));
        out.push(("k25^{0,0,r}", data(&z, &v, plane_operator(&z, &b, &z, &c)), None));
        // the special frame with both planes mixed by J
        let mut special = QMatrix::zeros(4, 4);
        for (i, j, x) in [(0, 0, h.clone()), (1, 1, h.clone()), (2, 2, h.clone()), (3, 3, h.clone()), (0, 1, b.clone()), (1, 0, -&b), (2, 3, -&b), (3, 2, b.clone())] {
            special.set(i, j, x);
        }
        out.push(("k11^{p,-p/2,-p/2,1}", data(&a, &v, special), None));
    }
    out
}

pub fn poisson_catalog() -> Check {
    timed(5, "holomorphic Poisson structures exist exactly on the listed families", 10.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pass = true;
        let mut out = Vec::new();
        for (label, d, expected) in poisson_cases(&mut rng) {
            let l = LieAlgebra::from_almost_abelian(&d).expect("data defines an algebra");
            let recognized = recognize(&l).candidates.iter().any(|c| c.name.family == label);
            let dd = DolbeaultData::from_data(&d).expect("A commutes with J1");
            let space = holomorphic_poisson_space(&dd);
            let det = dolbeault_matrices(&dd).m20.det();
            let shape_ok = match expected {
                None => space.is_trivial(),
                Some(kind) => {
                    space.linear
                        && space.span_dim == 1
                        && match kind {
                            Expected::FirstBranch => {
                                let g = &space.generators[0];
                                let s = d.a_mat.get(1, 2);
                                let want = CScalar::i() * dd.beta.clone() * CScalar::real(s.recip());
                                g.y.is_zero() && !g.x.is_zero() && g.z == g.x.clone() * want
                            }
                            Expected::ThirdBranch => {
                                let g = &space.generators[0];
                                g.x.is_zero() && g.y.is_zero() && !g.z.is_zero()
                            }
                        }
                }
            };
            let ok = d.is_skt() && recognized && shape_ok;
            pass &= ok;
            out.push(json!({
                "family": label,
                "a": d.a,
                "v": d.v,
                "skt": d.is_skt(),
                "recognized": recognized,
                "det_m20": det.to_string(),
                "poisson_dim": space.span_dim,
                "generators": space.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "pass": ok,
            }));
        }
        (pass, json!(out))
    })
}

fn random_hermitian_data(rng: &mut ChaCha8Rng, diagonal_planes: bool) -> AlmostAbelianData {
    let mut r = || Scalar::new(rng.gen_range(-5..=5), rng.gen_range(1..=4));
    let (a, v) = (r(), vec![r(), r(), r(), r()]);
    let [a11, mut a12, mut a13, a14, mut a21, a22, a23, mut a24] = [r(), r(), r(), r(), r(), r(), r(), r()];
    if diagonal_planes {
        // w2 = a12 - i a13 and w3 = a21 - i a24
        for x in [&mut a12, &mut a13, &mut a21, &mut a24] {
            *x = Scalar::zero();
        }
    }
    let m = QMatrix::from_rows(vec![
        vec![a11.clone(), a12.clone(), a13.clone(), a14.clone()],
        vec![a21.clone(), a22.clone(), a23.clone(), a24.clone()],
        vec![-&a24, -&a23, a22, a21],
        vec![-&a14, -&a13, a12, a11],
    ]);
    AlmostAbelianData::new(a, v, m).expect("n = 3")
}

pub fn dolbeault_oracle() -> Check {
    timed(6, "closed-form Dolbeault matrices equal the bracket computation", 10.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (mut matrices, mut general, mut short) = (0, 0, 0);
        for _ in 0..100 {
            let d = random_hermitian_data(&mut rng, false);
            let dd = DolbeaultData::from_data(&d).expect("A commutes with J1");
            let closed = dolbeault_matrices(&dd);
            if dolbeault_matrices_from_brackets(&d).ok().as_ref() == Some(&closed) {
                matrices += 1;
            }
            if closed.m20.det() == det_m20_factored(&dd) {
                general += 1;
            }
        }
        for _ in 0..100 {
            let d = random_hermitian_data(&mut rng, true);
            let dd = DolbeaultData::from_data(&d).expect("A commutes with J1");
            let a = CScalar::real(dd.a.clone());
            let printed = -(CScalar::i() * (a.clone() + dd.w1.clone()) * (a + dd.w4.clone()) * (dd.w1.clone() + dd.w4.clone()));
            if dolbeault_matrices(&dd).m20.det() == printed && dolbeault_matrices_from_brackets(&d).ok() == Some(dolbeault_matrices(&dd)) {
                short += 1;
            }
        }
        let pass = matrices == 100 && general == 100 && short == 100;
        (pass, json!({
            "samples": 100,
            "matrices_match": matrices,
            "det_general_identity": general,
            "plane_preserving_samples": 100,
            "det_short_factorization": short,
        }))
    })
}

pub fn split_gk() -> Check {
    timed(7, "split GK structure on the listed families", 10.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = gk_example();
        let mut pass = true;
        let mut out = Vec::new();
        for label in SPLIT_GK_LIST {
            for _ in 0..3 {
                let name = sample_params(label, &mut rng, 8).expect("admissible sample");
                let l = build(&name).expect("sample builds");
                let (ok, detail) = match (verify_gk(&l, &t), canonical_generators(&l, &t)) {
                    (Ok(v), Ok(c)) => (
                        v.valid && v.split && c.twisted_closed == (false, false),
                        json!({ "valid": v.valid, "split": v.split, "twisted_closed": [c.twisted_closed.0, c.twisted_closed.1],
                                "h": v.h.map(|h| h.format_with("f")) }),
                    ),
                    (Err(e), _) | (_, Err(e)) => (false, json!({ "error": e.to_string() })),
                };
                pass &= ok;
                out.push(json!({ "name": name.to_string(), "pass": ok, "detail": detail }));
            }
        }
        (pass, json!(out))
    })
}

pub fn non_split_obstruction() -> Check {
    timed(8, "no non-split GK structure on k23^0", 60.0, || {
        let mut pass = true;
        let mut out = Vec::new();
        let g = QMatrix::identity(6);
        for (v, budget, floor) in K23_SEARCHES {
            let v: Vec<Scalar> = v.iter().map(|&x| q(x, 1)).collect();
            let l = k23_algebra(&q(1, 1), &v);
            match search_compatible_jminus(&l, &frame_j(), &g, budget, SEARCH_SEED, &SearchOptions::default()) {
                Ok(r) => {
                    let chain = r.constraint_trace.applicable
                        && !r.constraint_trace.traces.is_empty()
                        && r.constraint_trace.traces.iter().all(|t| t.all_branches_contradict);
                    let ok = chain && r.best_residual >= floor;
                    pass &= ok;
                    out.push(json!({
                        "v": v,
                        "budget": budget,
                        "seed": SEARCH_SEED,
                        "traces": r.constraint_trace.traces.iter().map(|t| json!({
                            "pattern": t.pattern, "contradiction": t.all_branches_contradict })).collect::<Vec<_>>(),
                        "best_residual": r.best_residual,
                        "floor": floor,
                        "structured_seed_residuals": r.structured_seeds.iter().map(|s| s.residual).collect::<Vec<_>>(),
                        "pass": ok,
                    }));
                }
                Err(e) => {
                    pass = false;
                    out.push(json!({ "v": v, "error": e.to_string() }));
                }
            }
        }
        (pass, json!(out))
    })
}

pub fn flow_solitons() -> Check {
    timed(9, "pluriclosed flow is an expanding soliton", 10.0, || {
        let mut pass = true;
        let mut out = Vec::new();
        let samples: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        for name in [
            AlgebraName::new("k17^{-1/2}", &[]),
            AlgebraName::new("k1^{-1/2,-1/2}", &[]),
            AlgebraName::new("k8^{p,-p/2,0}", &[("p", q(1, 1))]),
        ] {
            let Some(d) = gk_adapted_data(&name) else {
                pass = false;
                out.push(json!({ "name": name.to_string(), "error": "no orthonormal adapted data" }));
                continue;
            };
            let report = soliton_check(&d, &samples, 1e-3, FLOW_TOLERANCE);
            let probe = order_probe(&d, 10.0, ORDER_PROBE_DT);
            match (report, probe) {
                (Ok(r), Ok((e1, e2, ratio))) => {
                    let skt = r.skt_defects.iter().all(|(_, x)| *x <= FLOW_SKT_TOLERANCE);
                    let ok = r.is_soliton && r.expanding && skt && ratio >= ORDER_RATIO_MIN;
                    pass &= ok;
                    out.push(json!({
                        "name": name.to_string(),
                        "a0": d.a,
                        "max_deviation": r.max_deviation,
                        "tolerance": FLOW_TOLERANCE,
                        "dt": 1e-3,
                        "order_probe": { "dt": ORDER_PROBE_DT, "error": e1, "error_half_step": e2, "ratio": ratio, "min_ratio": ORDER_RATIO_MIN },
                        "max_skt_defect": r.skt_defects.iter().map(|x| x.1).fold(0.0, f64::max),
                        "skt_tolerance": FLOW_SKT_TOLERANCE,
                        "scaling": r.scaling,
                        "pass": ok,
                    }));
                }
                (Err(e), _) | (_, Err(e)) => {
                    pass = false;
                    out.push(json!({ "name": name.to_string(), "error": e.to_string() }));
                }
            }
        }
        (pass, json!(out))
    })
}

fn random_basis(rng: &mut ChaCha8Rng) -> QMatrix {
    loop {
        let p = QMatrix::from_fn(6, 6, |_, _| Scalar::new(rng.gen_range(-3..=3), rng.gen_range(1..=2)));
        if !p.det().is_zero() {
            return p;
        }
    }
}

pub fn catalog_round_trip() -> Check {
    timed(10, "recognition recovers every catalog row", 30.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut pass = true;
        let mut out = Vec::new();
        for r in ROWS {
            let mut samples = Vec::new();
            for _ in 0..3 {
                let name = sample_params(r.name, &mut rng, 8).expect("admissible sample");
                let l = build(&name).expect("sample builds");
                let direct = recognize(&l).contains(&name);
                let moved = l.change_basis(&random_basis(&mut rng)).expect("invertible");
                let conjugated = recognize(&moved).contains(&name);
                pass &= direct && conjugated;
                samples.push(json!({ "name": name.to_string(), "direct": direct, "conjugated": conjugated }));
            }
            out.push(json!({ "row": r.name, "samples": samples }));
        }
        (pass, json!(out))
    })
}

pub fn run_all() -> Vec<Check> {
    vec![
        table3_integrability(),
        skt_route_agreement(),
        torsion_list(),
        non_exactness(),
        poisson_catalog(),
        dolbeault_oracle(),
        split_gk(),
        non_split_obstruction(),
        flow_solitons(),
        catalog_round_trip(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_operator_commutes_with_j1() {
        let a = plane_operator(&q(1, 1), &q(2, 1), &q(-1, 2), &q(3, 1));
        let d = AlmostAbelianData::new(q(1, 1), vec![Scalar::zero(); 4], a).unwrap();
        assert!(d.commutes_with_j());
    }

    #[test]
    fn poisson_cases_are_skt() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for (label, d, _) in poisson_cases(&mut rng) {
            assert!(d.is_skt(), "{label}");
            assert!(d.commutes_with_j(), "{label}");
        }
    }
}
