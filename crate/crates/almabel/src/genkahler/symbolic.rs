//! Exact polynomial constraints on a skew-symmetric `J_-` and a small deduction engine that
//! propagates forced values (vanishing, squares, linear eliminations) with case splits.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::exterior::KForm;
use crate::liealg::LieAlgebra;
use crate::numerics::Scalar;

pub const NVARS: usize = 15;

/// Unknown `J_{jk}`, `j < k`, numbered lexicographically.
pub fn var_index(j: usize, k: usize) -> usize {
    debug_assert!(j < k && k < 6);
    let mut idx = 0;
    for a in 0..6 {
        for b in a + 1..6 {
            if (a, b) == (j, k) {
                return idx;
            }
            idx += 1;
        }
    }
    unreachable!()
}

pub fn var_pair(v: usize) -> (usize, usize) {
    let mut idx = 0;
    for a in 0..6 {
        for b in a + 1..6 {
            if idx == v {
                return (a, b);
            }
            idx += 1;
        }
    }
    unreachable!()
}

pub fn var_name(v: usize) -> String {
    let (a, b) = var_pair(v);
    format!("J{}{}", a + 1, b + 1)
}

type Mono = [u8; NVARS];

#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, Scalar>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn constant(c: Scalar) -> MPoly {
        let mut p = MPoly::zero();
        p.add_term([0; NVARS], c);
        p
    }

    pub fn var(v: usize) -> MPoly {
        let mut m = [0; NVARS];
        m[v] = 1;
        let mut p = MPoly::zero();
        p.add_term(m, Scalar::one());
        p
    }

    fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&m) {
            Some(x) => {
                *x += &c;
                x.is_zero()
            }
            None => {
                self.terms.insert(m, c);
                false
            }
        };
        if remove {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, c.clone());
        }
        p
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> MPoly {
        if s.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut p = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m = *m1;
                for i in 0..NVARS {
                    m[i] += m2[i];
                }
                p.add_term(m, c1 * c2);
            }
        }
        p
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        self.terms
            .iter()
            .map(|(m, c)| (0..NVARS).fold(c.clone(), |acc, i| acc * x[i].pow(m[i] as i32)))
            .sum()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.iter().map(|&e| e as usize).sum()).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&[0; NVARS]).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| (0..NVARS).filter(move |&i| m[i] > 0)).collect()
    }

    fn substitute(&self, v: usize, by: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m[v];
            let mut rest = *m;
            rest[v] = 0;
            let mut t = MPoly::zero();
            t.add_term(rest, c.clone());
            for _ in 0..e {
                t = t.mul(by);
            }
            out = out.add(&t);
        }
        out
    }

    fn reduce_square(&self, v: usize, k: &Scalar) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut mm = *m;
            let e = mm[v];
            mm[v] = e % 2;
            out.add_term(mm, c * &k.pow((e / 2) as i32));
        }
        out
    }

    /// Largest monomial dividing every term.
    fn monomial_gcd(&self) -> Mono {
        let mut g = [u8::MAX; NVARS];
        for m in self.terms.keys() {
            for i in 0..NVARS {
                g[i] = g[i].min(m[i]);
            }
        }
        if self.terms.is_empty() {
            [0; NVARS]
        } else {
            g
        }
    }

    fn divide_monomial(&self, d: &Mono) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut mm = *m;
            for i in 0..NVARS {
                mm[i] -= d[i];
            }
            out.add_term(mm, c.clone());
        }
        out
    }

    fn is_even_monomial(m: &Mono) -> bool {
        m.iter().all(|e| e % 2 == 0)
    }

    /// Sum of even monomials with coefficients of one sign and a nonzero constant.
    fn is_definite(&self) -> bool {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return false;
        }
        let sign = c0.signum();
        self.terms.iter().all(|(m, c)| MPoly::is_even_monomial(m) && c.signum() == sign)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest degree first
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|a, b| {
            let da: u32 = a.0.iter().map(|&e| e as u32).sum();
            let db: u32 = b.0.iter().map(|&e| e as u32).sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (m, c) in items {
            let mono: Vec<String> = (0..NVARS)
                .filter(|&i| m[i] > 0)
                .map(|i| if m[i] == 1 { var_name(i) } else { format!("{}^{}", var_name(i), m[i]) })
                .collect();
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The generic skew `J_-` and every constraint polynomial of the generalized Kähler system
/// relative to a fixed `(J_+, g = I)` with torsion `H_+`.
pub struct ConstraintSystem {
    pub m: Vec<Vec<MPoly>>,
    /// `N(e_a, e_b)` component `c`.
    pub nij: Vec<Vec<Vec<MPoly>>>,
    /// `(H_+ + H_-)(e_a, e_b, e_c)` for `a < b < c`.
    pub h: BTreeMap<(usize, usize, usize), MPoly>,
    /// `(J_-^2 + I)_{ab}`.
    pub sq: Vec<Vec<MPoly>>,
    /// `[J_+, J_-]`.
    pub commutator: Vec<Vec<MPoly>>,
}

fn det3(m: &[Vec<MPoly>], rows: [usize; 3], cols: [usize; 3]) -> MPoly {
    let e = |i: usize, j: usize| &m[rows[i]][cols[j]];
    let mut out = MPoly::zero();
    for (p, s) in [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)] {
        let t = e(0, p[0]).mul(e(1, p[1])).mul(e(2, p[2]));
        out = if s > 0 { out.add(&t) } else { out.sub(&t) };
    }
    out
}

impl ConstraintSystem {
    pub fn new(l: &LieAlgebra, j_plus: &crate::numerics::QMatrix, h_plus: &KForm<Scalar>) -> ConstraintSystem {
        let n = 6;
        let mut m = vec![vec![MPoly::zero(); n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let x = MPoly::var(var_index(a, b));
                m[b][a] = x.scale(&Scalar::from_int(-1));
                m[a][b] = x;
            }
        }
        let c = |i: usize, j: usize, k: usize| l.c(i, j, k).clone();
        // [x, y] for symbolic coordinate vectors
        let bracket = |x: &[MPoly], y: &[MPoly]| -> Vec<MPoly> {
            let mut out = vec![MPoly::zero(); n];
            for i in 0..n {
                if x[i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if y[j].is_zero() || i == j {
                        continue;
                    }
                    let xy = x[i].mul(&y[j]);
                    for (k, o) in out.iter_mut().enumerate() {
                        let ck = c(i, j, k);
                        if !ck.is_zero() {
                            *o = o.add(&xy.scale(&ck));
                        }
                    }
                }
            }
            out
        };
        let apply = |v: &[MPoly]| -> Vec<MPoly> {
            (0..n).map(|r| (0..n).fold(MPoly::zero(), |acc, k| acc.add(&m[r][k].mul(&v[k])))).collect()
        };
        let col = |a: usize| -> Vec<MPoly> { (0..n).map(|r| m[r][a].clone()).collect() };
        let unit = |a: usize| -> Vec<MPoly> {
            (0..n).map(|r| if r == a { MPoly::constant(Scalar::one()) } else { MPoly::zero() }).collect()
        };
        let mut nij = vec![vec![vec![MPoly::zero(); n]; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let t1 = bracket(&col(a), &col(b));
                let t2 = apply(&bracket(&col(a), &unit(b)));
                let t3 = apply(&bracket(&unit(a), &col(b)));
                let t4 = bracket(&unit(a), &unit(b));
                for k in 0..n {
                    let v = t1[k].sub(&t2[k]).sub(&t3[k]).sub(&t4[k]);
                    nij[b][a][k] = v.scale(&Scalar::from_int(-1));
                    nij[a][b][k] = v;
                }
            }
        }
        // ω_-(e_p, e_q) = g(J e_p, e_q) = m[q][p]; dω by the Chevalley-Eilenberg formula
        let omega = |u: &[MPoly], q: usize| -> MPoly {
            (0..n).fold(MPoly::zero(), |acc, p| acc.add(&u[p].mul(&m[q][p])))
        };
        let mut domega: BTreeMap<(usize, usize, usize), MPoly> = BTreeMap::new();
        let const_bracket = |i: usize, j: usize| -> Vec<MPoly> { (0..n).map(|k| MPoly::constant(c(i, j, k))).collect() };
        for p in 0..n {
            for q in p + 1..n {
                for r in q + 1..n {
                    let v = omega(&const_bracket(p, r), q)
                        .sub(&omega(&const_bracket(p, q), r))
                        .sub(&omega(&const_bracket(q, r), p));
                    if !v.is_zero() {
                        domega.insert((p, q, r), v);
                    }
                }
            }
        }
        let mut h = BTreeMap::new();
        for a in 0..n {
            for b in a + 1..n {
                for cc in b + 1..n {
                    let mut v = MPoly::constant(h_plus.coeff(&[a, b, cc]));
                    for ((p, q, r), d) in &domega {
                        v = v.add(&d.mul(&det3(&m, [*p, *q, *r], [a, b, cc])));
                    }
                    h.insert((a, b, cc), v);
                }
            }
        }
        let mut sq = vec![vec![MPoly::zero(); n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut v = (0..n).fold(MPoly::zero(), |acc, k| acc.add(&m[a][k].mul(&m[k][b])));
                if a == b {
                    v = v.add(&MPoly::constant(Scalar::one()));
                }
                sq[a][b] = v;
            }
        }
        let jp = |i: usize, k: usize| j_plus.get(i, k).clone();
        let mut commutator = vec![vec![MPoly::zero(); n]; n];
        for i in 0..n {
            for jj in 0..n {
                let mut v = MPoly::zero();
                for k in 0..n {
                    v = v.add(&m[k][jj].scale(&jp(i, k))).sub(&m[i][k].scale(&jp(k, jj)));
                }
                commutator[i][jj] = v;
            }
        }
        ConstraintSystem { m, nij, h, sq, commutator }
    }

    /// Named constraint: `N(a,b,c)`, `H(a,b,c)` for `H_+ + H_-`, or `J2(a,b)`; one based.
    pub fn named(&self, name: &str) -> Option<MPoly> {
        let (kind, rest) = name.split_once('(')?;
        let idx: Vec<usize> = rest
            .trim_end_matches(')')
            .split(',')
            .map(|s| s.trim().parse::<usize>().ok().filter(|&x| (1..=6).contains(&x)).map(|x| x - 1))
            .collect::<Option<Vec<_>>>()?;
        match (kind, idx.as_slice()) {
            ("N", &[a, b, c]) => Some(self.nij[a][b][c].clone()),
            ("J2", &[a, b]) => Some(self.sq[a][b].clone()),
            ("H", &[a, b, c]) => {
                let mut s = [a, b, c];
                if s[0] == s[1] || s[1] == s[2] || s[0] == s[2] {
                    return Some(MPoly::zero());
                }
                let mut sign = 1;
                for i in 0..3 {
                    for j in 0..2 - i {
                        if s[j] > s[j + 1] {
                            s.swap(j, j + 1);
                            sign = -sign;
                        }
                    }
                }
                let v = self.h[&(s[0], s[1], s[2])].clone();
                Some(if sign > 0 { v } else { v.scale(&Scalar::from_int(-1)) })
            }
            _ => None,
        }
    }

    /// Every constraint, with names, in a fixed order.
    pub fn all(&self) -> Vec<(String, MPoly)> {
        let mut out = Vec::new();
        for a in 0..6 {
            for b in a..6 {
                out.push((format!("J2({},{})", a + 1, b + 1), self.sq[a][b].clone()));
            }
        }
        for a in 0..6 {
            for b in a + 1..6 {
                for c in 0..6 {
                    out.push((format!("N({},{},{})", a + 1, b + 1, c + 1), self.nij[a][b][c].clone()));
                }
            }
        }
        for ((a, b, c), p) in &self.h {
            out.push((format!("H({},{},{})", a + 1, b + 1, c + 1), p.clone()));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceEntry {
    pub name: String,
    pub expression: String,
    pub forced_value: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Deduction {
    Holds,
    Contradiction,
    Zero(Vec<usize>),
    Square(usize, Scalar),
    Linear(usize, MPoly),
    Undetermined,
}

/// Known facts: linear substitutions, squared values, and nonvanishing variables.
#[derive(Clone, Debug, Default)]
pub struct State {
    subs: BTreeMap<usize, MPoly>,
    squares: BTreeMap<usize, Scalar>,
    nonzero: BTreeSet<usize>,
}

impl State {
    pub fn normalize(&self, p: &MPoly) -> MPoly {
        let mut q = p.clone();
        loop {
            let vars = q.vars();
            let hit: Vec<usize> = vars.iter().copied().filter(|v| self.subs.contains_key(v)).collect();
            if hit.is_empty() {
                break;
            }
            for v in hit {
                q = q.substitute(v, &self.subs[&v]);
            }
        }
        for (v, k) in &self.squares {
            q = q.reduce_square(*v, k);
        }
        q
    }

    fn set_zero(&mut self, v: usize) {
        self.subs.insert(v, MPoly::zero());
    }

    fn deduce(&self, p: &MPoly) -> (MPoly, Deduction) {
        let p = self.normalize(p);
        if p.is_zero() {
            return (p, Deduction::Holds);
        }
        if p.degree() == 0 {
            return (p, Deduction::Contradiction);
        }
        let g = p.monomial_gcd();
        let q = p.divide_monomial(&g);
        let unknown: Vec<usize> = (0..NVARS).filter(|&i| g[i] > 0 && !self.nonzero.contains(&i)).collect();
        let q_definite = q.degree() == 0 || q.is_definite();
        if unknown.len() == 1 && q_definite {
            return (p, Deduction::Zero(unknown));
        }
        if !unknown.is_empty() {
            return (p, Deduction::Undetermined);
        }
        if q_definite {
            return (p, Deduction::Contradiction);
        }
        // same-sign even monomials without constant term
        if q.constant_term().is_zero() {
            let sign = q.terms.values().next().unwrap().signum();
            if q.terms.iter().all(|(m, c)| MPoly::is_even_monomial(m) && c.signum() == sign) {
                if q.terms.keys().any(|m| (0..NVARS).all(|i| m[i] == 0 || self.nonzero.contains(&i))) {
                    return (p, Deduction::Contradiction);
                }
                if q.terms.keys().all(|m| m.iter().filter(|&&e| e > 0).count() == 1) {
                    let vars: Vec<usize> = q.vars().into_iter().collect();
                    return (p, Deduction::Zero(vars));
                }
                return (p, Deduction::Undetermined);
            }
        }
        // c (x^2 - k)
        if q.terms.len() == 2 && q.degree() == 2 {
            let c0 = q.constant_term();
            let quad: Vec<(&Mono, &Scalar)> = q.terms.iter().filter(|(m, _)| m.contains(&2)).collect();
            if !c0.is_zero() && quad.len() == 1 {
                let v = (0..NVARS).find(|&i| quad[0].0[i] == 2).unwrap();
                let k = -(&c0 / quad[0].1);
                if k.is_negative() {
                    return (p, Deduction::Contradiction);
                }
                return (p, Deduction::Square(v, k));
            }
        }
        if q.degree() == 1 {
            let v = *q.vars().iter().next_back().unwrap();
            let mut lead = [0; NVARS];
            lead[v] = 1;
            let c = q.terms[&lead].clone();
            let mut rest = q.clone();
            rest.terms.remove(&lead);
            return (p, Deduction::Linear(v, rest.scale(&-(c.recip()))));
        }
        (p, Deduction::Undetermined)
    }

    fn apply(&mut self, d: &Deduction) {
        match d {
            Deduction::Zero(vs) => {
                for &v in vs {
                    self.set_zero(v);
                }
            }
            Deduction::Square(v, k) => {
                if k.is_zero() {
                    self.set_zero(*v);
                } else {
                    self.squares.insert(*v, k.clone());
                    self.nonzero.insert(*v);
                }
            }
            Deduction::Linear(v, by) => {
                self.subs.insert(*v, by.clone());
            }
            _ => {}
        }
        let subs = self.subs.clone();
        for (k, p) in subs {
            let q = self.normalize(&p);
            self.subs.insert(k, q);
        }
    }

    fn is_free(&self, v: usize) -> bool {
        !self.subs.contains_key(&v)
    }
}

fn describe(d: &Deduction) -> String {
    match d {
        Deduction::Holds => "holds identically".into(),
        Deduction::Contradiction => "contradiction".into(),
        Deduction::Zero(vs) => vs.iter().map(|&v| format!("{} = 0", var_name(v))).collect::<Vec<_>>().join(", "),
        Deduction::Square(v, k) => format!("{}^2 = {k}", var_name(*v)),
        Deduction::Linear(v, by) => format!("{} = {by}", var_name(*v)),
        Deduction::Undetermined => "no deduction".into(),
    }
}

/// A scripted deduction: evaluate a named constraint, or split on `var = 0` / `var != 0`.
#[derive(Clone, Debug)]
pub enum Step {
    Use(String),
    Split(usize, Vec<Step>, Vec<Step>),
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchTrace {
    pub assumptions: Vec<String>,
    pub entries: Vec<TraceEntry>,
    pub contradiction: bool,
    /// Constraints left undetermined when the branch stayed open.
    pub open_constraints: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintTrace {
    pub pattern: String,
    pub branches: Vec<BranchTrace>,
    pub all_branches_contradict: bool,
}

pub struct Engine<'a> {
    pub system: &'a ConstraintSystem,
    pub max_depth: usize,
}

impl<'a> Engine<'a> {
    /// Imposes the vanishing of `[J_+, J_-]` at the given one based positions.
    pub fn align(&self, state: &mut State, zeros: &[(usize, usize)], entries: &mut Vec<TraceEntry>) -> bool {
        for &(i, j) in zeros {
            let p = &self.system.commutator[i - 1][j - 1];
            let (expr, d) = state.deduce(p);
            match d {
                Deduction::Holds | Deduction::Undetermined => {}
                Deduction::Contradiction => {
                    entries.push(TraceEntry {
                        name: format!("align [J+,J-]({i},{j})"),
                        expression: expr.to_string(),
                        forced_value: describe(&d),
                    });
                    return false;
                }
                _ => {
                    entries.push(TraceEntry {
                        name: format!("align [J+,J-]({i},{j})"),
                        expression: expr.to_string(),
                        forced_value: describe(&d),
                    });
                    state.apply(&d);
                }
            }
        }
        true
    }

    pub fn run(&self, pattern: &str, zeros: &[(usize, usize)], script: &[Step]) -> ConstraintTrace {
        let mut state = State::default();
        let mut entries = Vec::new();
        let mut branches = Vec::new();
        if !self.align(&mut state, zeros, &mut entries) {
            branches.push(BranchTrace { assumptions: vec![], entries, contradiction: true, open_constraints: vec![] });
        } else {
            self.run_steps(state, vec![], entries, script, 0, &mut branches);
        }
        let all = branches.iter().all(|b| b.contradiction);
        ConstraintTrace { pattern: pattern.to_string(), branches, all_branches_contradict: all }
    }

    fn run_steps(
        &self,
        mut state: State,
        assumptions: Vec<String>,
        mut entries: Vec<TraceEntry>,
        script: &[Step],
        depth: usize,
        out: &mut Vec<BranchTrace>,
    ) {
        for (pos, step) in script.iter().enumerate() {
            match step {
                Step::Use(name) => {
                    let p = match self.system.named(name) {
                        Some(p) => p,
                        None => continue,
                    };
                    let (expr, d) = state.deduce(&p);
                    entries.push(TraceEntry { name: name.clone(), expression: expr.to_string(), forced_value: describe(&d) });
                    if d == Deduction::Contradiction {
                        out.push(BranchTrace { assumptions, entries, contradiction: true, open_constraints: vec![] });
                        return;
                    }
                    state.apply(&d);
                }
                Step::Split(v, zero_branch, nonzero_branch) => {
                    let v = *v;
                    if !state.is_free(v) || state.nonzero.contains(&v) {
                        continue;
                    }
                    let rest = &script[pos + 1..];
                    let mut s0 = state.clone();
                    s0.set_zero(v);
                    s0.apply(&Deduction::Holds);
                    let mut a0 = assumptions.clone();
                    a0.push(format!("{} = 0", var_name(v)));
                    let steps0: Vec<Step> = zero_branch.iter().chain(rest.iter()).cloned().collect();
                    self.run_steps(s0, a0, entries.clone(), &steps0, depth + 1, out);
                    let mut s1 = state.clone();
                    s1.nonzero.insert(v);
                    let mut a1 = assumptions.clone();
                    a1.push(format!("{} != 0", var_name(v)));
                    let steps1: Vec<Step> = nonzero_branch.iter().chain(rest.iter()).cloned().collect();
                    self.run_steps(s1, a1, entries, &steps1, depth + 1, out);
                    return;
                }
            }
        }
        self.saturate(state, assumptions, entries, depth, out);
    }

    /// Applies every constraint until nothing new follows, then splits on the most frequent
    /// free variable.
    fn saturate(&self, mut state: State, assumptions: Vec<String>, mut entries: Vec<TraceEntry>, depth: usize, out: &mut Vec<BranchTrace>) {
        let all = self.system.all();
        loop {
            let mut progress = false;
            for (name, p) in &all {
                let (expr, d) = state.deduce(p);
                match d {
                    Deduction::Holds | Deduction::Undetermined => {}
                    Deduction::Contradiction => {
                        entries.push(TraceEntry { name: name.clone(), expression: expr.to_string(), forced_value: describe(&d) });
                        out.push(BranchTrace { assumptions, entries, contradiction: true, open_constraints: vec![] });
                        return;
                    }
                    _ => {
                        entries.push(TraceEntry { name: name.clone(), expression: expr.to_string(), forced_value: describe(&d) });
                        state.apply(&d);
                        progress = true;
                        break;
                    }
                }
            }
            if !progress {
                break;
            }
        }
        let open: Vec<(String, MPoly)> = all
            .iter()
            .map(|(n, p)| (n.clone(), state.normalize(p)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        if open.is_empty() {
            out.push(BranchTrace { assumptions, entries, contradiction: false, open_constraints: vec![] });
            return;
        }
        let mut counts = [0usize; NVARS];
        for (_, p) in &open {
            for v in p.vars() {
                if state.is_free(v) && !state.nonzero.contains(&v) {
                    counts[v] += 1;
                }
            }
        }
        let best = (0..NVARS).filter(|&v| counts[v] > 0).max_by_key(|&v| (counts[v], std::cmp::Reverse(v)));
        match best {
            Some(v) if depth < self.max_depth => {
                self.run_steps(state, assumptions, entries, &[Step::Split(v, vec![], vec![])], depth, out);
            }
            _ => {
                let open_constraints = open.iter().map(|(n, p)| format!("{n}: {p}")).collect();
                out.push(BranchTrace { assumptions, entries, contradiction: false, open_constraints });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_numbering() {
        assert_eq!(var_index(0, 1), 0);
        assert_eq!(var_index(4, 5), 14);
        for v in 0..NVARS {
            let (a, b) = var_pair(v);
            assert_eq!(var_index(a, b), v);
        }
        assert_eq!(var_name(var_index(2, 5)), "J36");
    }

    #[test]
    fn deductions() {
        let s = State::default();
        let x = MPoly::var(2);
        let y = MPoly::var(3);
        let sum_sq = x.mul(&x).add(&y.mul(&y)).scale(&Scalar::from_int(3));
        assert_eq!(s.deduce(&sum_sq).1, Deduction::Zero(vec![2, 3]));
        let sq = MPoly::constant(Scalar::one()).sub(&x.mul(&x));
        assert_eq!(s.deduce(&sq).1, Deduction::Square(2, Scalar::one()));
        let pd = x.mul(&x).add(&MPoly::constant(Scalar::one()));
        assert_eq!(s.deduce(&pd).1, Deduction::Contradiction);
        let lin = x.sub(&y);
        assert_eq!(s.deduce(&lin).1, Deduction::Linear(3, x.clone()));
        let mut s2 = State::default();
        s2.apply(&Deduction::Square(2, Scalar::one()));
        // x y with x known nonzero forces y = 0
        assert_eq!(s2.deduce(&x.mul(&y)).1, Deduction::Zero(vec![3]));
        assert_eq!(s2.normalize(&x.mul(&x).mul(&y)), y);
        assert_eq!(sum_sq.to_string(), "3*J14^2 + 3*J15^2");
    }
}
