//! Named almost abelian algebras from the classification tables, the theorem lists
//! built on them, their printed complex / Hermitian / generalized Kähler structures,
//! and recognition of an arbitrary algebra against the rows.

pub mod constraint;
pub mod recognize;
pub mod rows;

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::genkahler::gk_example;
use crate::hermitian::{j_from_pairs, nijenhuis, skt_verdict, HermitianStructure};
use crate::liealg::{parse_structure_equations, LinExpr, StructureTemplate};
use crate::liealg::{LieAlgebra, LieError};
use crate::numerics::{QMatrix, Scalar};

use self::constraint::{parse_expr, parse_pred, ConstraintError, Env, Pred};
pub use self::recognize::{recognize, Candidate, Recognition, RecognitionInvariants};
pub use self::rows::{Family, Row, Source, FAMILIES, KAHLER_LIST, POISSON_LIST, ROWS, SKT_LIST, SPLIT_GK_LIST};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown algebra `{0}`")]
    UnknownName(String),
    #[error("{name}: missing parameter `{param}`")]
    MissingParam { name: String, param: String },
    #[error("{name}: unexpected parameter `{param}`")]
    UnexpectedParam { name: String, param: String },
    #[error("{name}: parameters violate `{clause}`")]
    Violation { name: String, clause: String },
    #[error("{0} is not in the complex structure list")]
    NotComplexListed(String),
    #[error("no printed structure covers {0}")]
    NotCovered(String),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// A row or theorem family name together with parameter values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AlgebraName {
    pub family: String,
    pub params: BTreeMap<String, Scalar>,
}

impl AlgebraName {
    pub fn new(family: &str, params: &[(&str, Scalar)]) -> AlgebraName {
        AlgebraName { family: family.to_string(), params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect() }
    }
}

impl fmt::Display for AlgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if !self.params.is_empty() {
            let parts: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "[{}]", parts.join(", "))?;
        }
        Ok(())
    }
}

pub fn row(name: &str) -> Option<&'static Row> {
    ROWS.iter().find(|r| r.name == name)
}

pub fn family(label: &str) -> Option<&'static Family> {
    FAMILIES.iter().find(|f| f.label == label)
}

pub fn template(r: &Row) -> StructureTemplate {
    parse_structure_equations(r.equations).expect("catalog equations parse")
}

fn check_params(name: &str, expected: &[&str], params: &BTreeMap<String, Scalar>) -> Result<(), CatalogError> {
    for p in expected {
        if !params.contains_key(*p) {
            return Err(CatalogError::MissingParam { name: name.into(), param: p.to_string() });
        }
    }
    if let Some(extra) = params.keys().find(|k| !expected.contains(&k.as_str())) {
        return Err(CatalogError::UnexpectedParam { name: name.into(), param: extra.clone() });
    }
    Ok(())
}

fn check_conditions(name: &str, conditions: &str, params: &Env) -> Result<(), CatalogError> {
    let pred = parse_pred(conditions)?;
    for clause in pred.clauses() {
        if !clause.eval(params)? {
            return Err(CatalogError::Violation { name: name.into(), clause: clause.to_string() });
        }
    }
    Ok(())
}

/// The base row and its parameters for a row name or a theorem family label,
/// after checking the parameter list and every printed condition.
pub fn resolve(name: &AlgebraName) -> Result<(&'static Row, Env), CatalogError> {
    if let Some(r) = row(&name.family) {
        check_params(r.name, r.params, &name.params)?;
        check_conditions(r.name, r.conditions, &name.params)?;
        return Ok((r, name.params.clone()));
    }
    let f = family(&name.family).ok_or_else(|| CatalogError::UnknownName(name.family.clone()))?;
    check_params(f.label, f.params, &name.params)?;
    check_conditions(f.label, f.conditions, &name.params)?;
    let base = row(f.base).expect("family bases are rows");
    let mut env = Env::new();
    for (k, e) in f.substitution {
        env.insert(k.to_string(), parse_expr(e)?.eval(&name.params)?);
    }
    check_params(base.name, base.params, &env)?;
    check_conditions(f.label, base.conditions, &env)?;
    Ok((base, env))
}

pub fn build(name: &AlgebraName) -> Result<LieAlgebra, CatalogError> {
    let (r, env) = resolve(name)?;
    Ok(LieAlgebra::parse(r.equations, &env)?)
}

/// `Some(true/false)` from the table's unimodularity column, `None` for rows outside the
/// real tables.
pub fn unimodular_predicate(name: &AlgebraName) -> Result<bool, CatalogError> {
    let (r, env) = resolve(name)?;
    match r.unimodular {
        Some(p) => Ok(parse_pred(p)?.eval(&env)?),
        None if r.source == Source::ComplexList => {
            let t = template(r);
            let trace = (0..5).fold(LinExpr::constant(Scalar::zero()), |acc, k| acc.add(&t.coefficient(k, k, 5)));
            Ok(trace.eval(&env)?.is_zero())
        }
        None => Ok(false),
    }
}

pub fn parse_pairs(spec: &str) -> Vec<(usize, usize)> {
    spec.split(',')
        .filter_map(|p| {
            let p = p.trim().trim_start_matches("Jf");
            let (a, b) = p.split_once("=f")?;
            Some((a.parse().ok()?, b.parse().ok()?))
        })
        .collect()
}

/// The complex structure printed for a complex list row (or a family built on one).
pub fn table3_complex_structure(name: &str) -> Result<QMatrix, CatalogError> {
    let r = row(name)
        .or_else(|| family(name).and_then(|f| row(f.base)))
        .ok_or_else(|| CatalogError::UnknownName(name.into()))?;
    if r.source != Source::ComplexList {
        return Err(CatalogError::NotComplexListed(name.into()));
    }
    Ok(j_from_pairs(6, &parse_pairs(r.complex)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Kahler,
    Skt,
    GkSplit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KnownStructure {
    pub role: Role,
    pub family: String,
    pub j: QMatrix,
    pub j_minus: Option<QMatrix>,
    pub g: QMatrix,
}

/// `J f1 = f6, J f2 = f3, J f4 = f5` with the identity metric.
pub fn example1_j() -> QMatrix {
    j_from_pairs(6, &[(1, 6), (2, 3), (4, 5)])
}

fn family_matches(f: &Family, base: &str, env: &Env) -> Option<Env> {
    if f.base != base {
        return None;
    }
    let own: Env = f.params.iter().map(|p| Some((p.to_string(), env.get(*p)?.clone()))).collect::<Option<_>>()?;
    for (k, e) in f.substitution {
        if parse_expr(e).ok()?.eval(&own).ok()? != *env.get(*k)? {
            return None;
        }
    }
    parse_pred(f.conditions).ok()?.eval(&own).ok()?.then_some(own)
}

/// Theorem families containing the algebra `name` (as labels with their own parameters).
pub fn families_of(name: &AlgebraName) -> Result<Vec<AlgebraName>, CatalogError> {
    let (r, env) = resolve(name)?;
    Ok(FAMILIES
        .iter()
        .filter_map(|f| family_matches(f, r.name, &env).map(|own| AlgebraName { family: f.label.into(), params: own }))
        .collect())
}

/// Printed structures for the theorem lists the algebra belongs to.
pub fn known_structures(name: &AlgebraName) -> Result<Vec<KnownStructure>, CatalogError> {
    let fams = families_of(name)?;
    let id = QMatrix::identity(6);
    let mut out = Vec::new();
    for f in &fams {
        let label = f.family.as_str();
        let push = |out: &mut Vec<KnownStructure>, role, j: QMatrix, j_minus| {
            out.push(KnownStructure { role, family: label.into(), j, j_minus, g: id.clone() })
        };
        if KAHLER_LIST.contains(&label) {
            let j = if matches!(label, "k15^{0}" | "k25^{0,0,r}") {
                j_from_pairs(6, &[(1, 2), (3, 4), (5, 6)])
            } else {
                example1_j()
            };
            push(&mut out, Role::Kahler, j, None);
        }
        if SKT_LIST.contains(&label) {
            let j = if label == "k23^{0}" { j_from_pairs(6, &[(1, 2), (3, 5), (4, 6)]) } else { example1_j() };
            push(&mut out, Role::Skt, j, None);
        }
        if SPLIT_GK_LIST.contains(&label) {
            let t = gk_example();
            push(&mut out, Role::GkSplit, t.j_plus, Some(t.j_minus));
        }
    }
    if out.is_empty() {
        return Err(CatalogError::NotCovered(name.to_string()));
    }
    Ok(out)
}

fn random_rational<R: Rng>(rng: &mut R, max_den: i64) -> Scalar {
    let d = rng.gen_range(1..=max_den);
    let n = rng.gen_range(-2 * d..=2 * d);
    Scalar::new(n, d)
}

/// Admissible parameters with denominators at most `max_den` and values in `[-2, 2]`,
/// by rejection against the printed conditions.
pub fn sample_params<R: Rng>(name: &str, rng: &mut R, max_den: i64) -> Result<AlgebraName, CatalogError> {
    let params: &[&str] = match (row(name), family(name)) {
        (Some(r), _) => r.params,
        (None, Some(f)) => f.params,
        _ => return Err(CatalogError::UnknownName(name.into())),
    };
    for _ in 0..100_000 {
        let cand = AlgebraName {
            family: name.into(),
            params: params.iter().map(|p| (p.to_string(), random_rational(rng, max_den))).collect(),
        };
        if resolve(&cand).is_ok() {
            return Ok(cand);
        }
    }
    Err(CatalogError::Violation { name: name.into(), clause: "no admissible sample found".into() })
}

/// Whether the printed `J` of a complex list row is integrable at these parameters.
pub fn table3_integrable(name: &AlgebraName) -> Result<bool, CatalogError> {
    let (r, _) = resolve(name)?;
    let j = table3_complex_structure(r.name)?;
    Ok(nijenhuis(&build(name)?, &j).is_zero())
}

#[derive(Clone, Debug, Serialize)]
pub struct SktProbe {
    pub tried: usize,
    /// Diagonal entries of the first SKT metric found.
    pub found: Option<Vec<Scalar>>,
}

/// Searches the printed `J` with diagonal `J`-compatible metrics whose entries are
/// `n/d`, `d <= 4`, in `(0, 2]` (first pair fixed to 1) for an SKT pair.
pub fn skt_probe(name: &AlgebraName) -> Result<SktProbe, CatalogError> {
    let (r, _) = resolve(name)?;
    let l = build(name)?;
    let pairs = parse_pairs(r.complex);
    let j = table3_complex_structure(r.name)?;
    let mut values = Vec::new();
    for d in 1..=4 {
        for n in 1..=2 * d {
            let v = Scalar::new(n, d);
            if !values.contains(&v) {
                values.push(v);
            }
        }
    }
    let mut tried = 0;
    for x in &values {
        for y in &values {
            let per_pair = [Scalar::one(), x.clone(), y.clone()];
            let mut diag = vec![Scalar::zero(); 6];
            for ((a, b), v) in pairs.iter().zip(&per_pair) {
                diag[a - 1] = v.clone();
                diag[b - 1] = v.clone();
            }
            let g = QMatrix::from_fn(6, 6, |i, k| if i == k { diag[i].clone() } else { Scalar::zero() });
            tried += 1;
            let Ok(h) = HermitianStructure::new(j.clone(), g) else { continue };
            if matches!(skt_verdict(&l, &h), Ok(v) if v.is_skt) {
                return Ok(SktProbe { tried, found: Some(diag) });
            }
        }
    }
    Ok(SktProbe { tried, found: None })
}

/// Every row and family as a JSON manifest.
pub fn manifest() -> Value {
    let rows: Vec<Value> = ROWS
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "table": r.source,
                "params": r.params,
                "structure_equations": r.equations,
                "conditions": r.conditions,
                "unimodular": r.unimodular.map(String::from).unwrap_or_else(|| match r.source {
                    Source::ComplexList => "trace = 0".to_string(),
                    _ => "never".to_string(),
                }),
                "complex_structure": r.complex,
                "specializes": r.alias,
            })
        })
        .collect();
    let families: Vec<Value> = FAMILIES
        .iter()
        .map(|f| {
            let mut lists = Vec::new();
            for (tag, list) in [("kahler", KAHLER_LIST), ("skt", SKT_LIST), ("holomorphic_poisson", POISSON_LIST), ("split_gk", SPLIT_GK_LIST)] {
                if list.contains(&f.label) {
                    lists.push(tag);
                }
            }
            json!({
                "label": f.label,
                "base": f.base,
                "params": f.params,
                "substitution": f.substitution.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect::<BTreeMap<_, _>>(),
                "conditions": f.conditions,
                "lists": lists,
            })
        })
        .collect();
    json!({ "rows": rows, "families": families })
}

/// The condition predicate of a row, for reports.
pub fn conditions_of(name: &str) -> Result<Pred, CatalogError> {
    let src = row(name).map(|r| r.conditions).or_else(|| family(name).map(|f| f.conditions));
    Ok(parse_pred(src.ok_or_else(|| CatalogError::UnknownName(name.into()))?)?)
}
