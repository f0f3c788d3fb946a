use std::collections::BTreeMap;

use almabel::catalog::constraint::{parse_pred, Env, Expr, Pred, Rel};
use almabel::exterior::{combinations, KForm};
use almabel::genkahler::frame_j;
use almabel::hermitian::{bismut_torsion, nijenhuis, skt_verdict, torsion_via_bidegree, HermitianStructure};
use almabel::liealg::{adapted_data, standard_j1, AlmostAbelianData, LieAlgebra};
use almabel::numerics::{QMatrix, Scalar};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::new(n, d))
}

fn data(a: Scalar, v: Vec<Scalar>, m: Vec<Scalar>) -> AlmostAbelianData {
    AlmostAbelianData::new(a, v, QMatrix::from_fn(4, 4, |i, j| m[4 * i + j].clone())).unwrap()
}

fn any_data() -> impl Strategy<Value = AlmostAbelianData> {
    (rational(), prop::collection::vec(rational(), 4), prop::collection::vec(rational(), 16)).prop_map(|(a, v, m)| data(a, v, m))
}

/// `A = B - J1 B J1` commutes with `J1`.
fn hermitian_data() -> impl Strategy<Value = AlmostAbelianData> {
    any_data().prop_map(|d| {
        let j = standard_j1(3);
        let a = d.a_mat.sub(&j.mul(&d.a_mat).mul(&j));
        AlmostAbelianData::new(d.a, d.v, a).unwrap()
    })
}

fn form(degree: usize) -> impl Strategy<Value = KForm<Scalar>> {
    let n = combinations(6, degree).len();
    prop::collection::vec(rational(), n).prop_map(move |c| KForm::from_dense(6, degree, &c))
}

fn commutes_with_j1(a: &QMatrix) -> bool {
    let j = standard_j1(3);
    a.mul(&j) == j.mul(a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(d in any_data(), k in 0usize..5, seed in prop::collection::vec(rational(), 20)) {
        let l = LieAlgebra::from_almost_abelian(&d).unwrap();
        let n = combinations(6, k).len();
        let phi = KForm::from_dense(6, k, &seed[..n]);
        prop_assert!(phi.d(&l).d(&l).is_zero());
    }

    #[test]
    fn leibniz_rule(d in any_data(), alpha in form(1), beta in form(2)) {
        let l = LieAlgebra::from_almost_abelian(&d).unwrap();
        let lhs = alpha.wedge(&beta).d(&l);
        let rhs = alpha.d(&l).wedge(&beta).sub(&alpha.wedge(&beta.d(&l)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn integrable_iff_a_commutes_with_j1(d in any_data()) {
        let l = LieAlgebra::from_almost_abelian(&d).unwrap();
        prop_assert_eq!(nijenhuis(&l, &frame_j()).is_zero(), commutes_with_j1(&d.a_mat));
    }

    #[test]
    fn skt_routes_agree(d in hermitian_data()) {
        let l = LieAlgebra::from_almost_abelian(&d).unwrap();
        let h = HermitianStructure::new(frame_j(), QMatrix::identity(6)).unwrap();
        let verdict = skt_verdict(&l, &h).unwrap();
        prop_assert!(verdict.integrable);
        let frame = adapted_data(&l, &h.j, &h.g).unwrap();
        prop_assert_eq!(verdict.is_skt, frame.is_skt());
        prop_assert_eq!(verdict.is_kahler, frame.is_kahler());
        let torsion = bismut_torsion(&l, &h).unwrap();
        prop_assert_eq!(torsion_via_bidegree(&l, &h).unwrap(), torsion.complexify());
        prop_assert_eq!(verdict.is_skt, torsion.d(&l).is_zero());
    }

    #[test]
    fn scalar_display_round_trips(x in rational()) {
        prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
    }

    #[test]
    fn constraint_display_round_trips(p in pred(), p_val in rational(), s_val in rational()) {
        // fraction literals come back as divisions, so the text is a fixed point after one parse
        let text = p.to_string();
        let back = parse_pred(&text).unwrap();
        let again = back.to_string();
        prop_assert_eq!(parse_pred(&again).unwrap().to_string(), again);
        let env: Env = BTreeMap::from([("p".to_string(), p_val), ("s".to_string(), s_val)]);
        prop_assert_eq!(back.eval(&env), p.eval(&env), "{}", text);
    }
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..=5, 1i64..=3).prop_map(|(n, d)| Expr::Num(Scalar::new(n, d))),
        prop_oneof![Just("p"), Just("s")].prop_map(|v| Expr::Var(v.to_string())),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Abs(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), prop_oneof![Just('+'), Just('-'), Just('*'), Just('/')], inner)
                .prop_map(|(a, op, b)| Expr::Bin(Box::new(a), op, Box::new(b))),
        ]
    })
}

fn rel() -> impl Strategy<Value = Rel> {
    prop_oneof![Just(Rel::Ge), Just(Rel::Gt), Just(Rel::Le), Just(Rel::Lt), Just(Rel::Eq), Just(Rel::Ne)]
}

fn chain() -> impl Strategy<Value = Pred> {
    (expr(), prop::collection::vec((rel(), expr()), 1..3)).prop_map(|(e, rest)| Pred::Chain(e, rest))
}

fn pred() -> impl Strategy<Value = Pred> {
    prop_oneof![
        chain(),
        prop::collection::vec(chain(), 2..4).prop_map(Pred::And),
        prop::collection::vec(chain(), 2..4).prop_map(Pred::Or),
    ]
}
