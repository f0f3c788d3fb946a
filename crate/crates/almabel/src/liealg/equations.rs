use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::numerics::Scalar;

use super::LieError;

/// Affine expression `c + sum k_p p` in named parameters.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LinExpr {
    pub constant: Scalar,
    pub terms: BTreeMap<String, Scalar>,
}

impl LinExpr {
    pub fn constant(c: Scalar) -> LinExpr {
        LinExpr { constant: c, terms: BTreeMap::new() }
    }

    pub fn param(name: &str) -> LinExpr {
        let mut terms = BTreeMap::new();
        terms.insert(name.to_string(), Scalar::one());
        LinExpr { constant: Scalar::zero(), terms }
    }

    fn normalize(mut self) -> LinExpr {
        self.terms.retain(|_, v| !v.is_zero());
        self
    }

    pub fn add(&self, o: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.constant += &o.constant;
        for (k, v) in &o.terms {
            *out.terms.entry(k.clone()).or_default() += v;
        }
        out.normalize()
    }

    pub fn sub(&self, o: &LinExpr) -> LinExpr {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> LinExpr {
        LinExpr {
            constant: &self.constant * s,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
        }
        .normalize()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms.keys().cloned().collect()
    }

    pub fn eval(&self, params: &BTreeMap<String, Scalar>) -> Result<Scalar, LieError> {
        let mut acc = self.constant.clone();
        for (k, v) in &self.terms {
            let p = params.get(k).ok_or_else(|| LieError::Parse(format!("missing parameter `{k}`")))?;
            acc += v * p;
        }
        Ok(acc)
    }

    /// Substitutes the known parameters, leaving the rest symbolic.
    pub fn partial_eval(&self, params: &BTreeMap<String, Scalar>) -> LinExpr {
        let mut out = LinExpr::constant(self.constant.clone());
        for (k, v) in &self.terms {
            match params.get(k) {
                Some(p) => out.constant += v * p,
                None => {
                    out.terms.insert(k.clone(), v.clone());
                }
            }
        }
        out
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (k, v) in &self.terms {
            let a = v.abs();
            let s = if a.is_one() { k.clone() } else { format!("{a}{k}") };
            parts.push((v.is_negative(), s));
        }
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push((self.constant.is_negative(), self.constant.abs().to_string()));
        }
        for (i, (neg, s)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{s}")?,
                (0, false) => write!(f, "{s}")?,
                (_, true) => write!(f, "-{s}")?,
                (_, false) => write!(f, "+{s}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Structure equations with parameter-dependent coefficients:
/// `components[k]` lists `(coefficient, i, j)` with `i < j` for `df^k`, zero based.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTemplate {
    pub dim: usize,
    pub components: Vec<Vec<(LinExpr, usize, usize)>>,
}

impl StructureTemplate {
    pub fn params(&self) -> BTreeSet<String> {
        self.components
            .iter()
            .flatten()
            .flat_map(|(c, _, _)| c.params())
            .collect()
    }

    pub fn eval(&self, params: &BTreeMap<String, Scalar>) -> Result<Vec<Vec<(Scalar, usize, usize)>>, LieError> {
        self.components
            .iter()
            .map(|comp| comp.iter().map(|(c, i, j)| Ok((c.eval(params)?, *i, *j))).collect())
            .collect()
    }

    /// Coefficient of `f^{i j}` in `df^k` as an expression.
    pub fn coefficient(&self, k: usize, i: usize, j: usize) -> LinExpr {
        let (i, j, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let mut acc = LinExpr::default();
        for (c, a, b) in &self.components[k] {
            if *a == i && *b == j {
                acc = acc.add(c);
            }
        }
        acc.scale(&Scalar::from_int(s))
    }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn err(&self, msg: &str) -> LieError {
        LieError::Parse(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), LieError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn integer(&mut self) -> Option<i64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
        }
    }

    /// Number, `a/b`, parameter letter or a braced group thereof.
    fn atom(&mut self) -> Result<LinExpr, LieError> {
        let mut sign = Scalar::one();
        while let Some(c) = self.peek() {
            match c {
                b'-' => {
                    sign = -sign;
                    self.pos += 1;
                }
                b'+' => self.pos += 1,
                _ => break,
            }
        }
        let mut coef = Scalar::one();
        let mut param: Option<String> = None;
        let mut any = false;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.integer().ok_or_else(|| self.err("bad integer"))?;
                    let mut v = Scalar::from_int(n);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let d = self.integer().ok_or_else(|| self.err("bad denominator"))?;
                        if d == 0 {
                            return Err(self.err("zero denominator"));
                        }
                        v = v / Scalar::from_int(d);
                    }
                    coef = coef * v;
                    any = true;
                }
                Some(b'\\') => {
                    let rest = &self.src[self.pos..];
                    if !rest.starts_with("\\frac") {
                        return Err(self.err("unknown command"));
                    }
                    self.pos += 5;
                    self.expect(b'{')?;
                    let num = self.group_expr(b'}')?;
                    self.expect(b'{')?;
                    let den = self.group_expr(b'}')?;
                    if !den.is_constant() || den.constant.is_zero() {
                        return Err(self.err("denominator must be a nonzero number"));
                    }
                    let q = num.scale(&den.constant.recip());
                    if q.is_constant() {
                        coef = coef * q.constant;
                    } else {
                        if param.is_some() || q.terms.len() != 1 || !q.constant.is_zero() {
                            return Err(self.err("only linear coefficients are supported"));
                        }
                        let (k, v) = q.terms.into_iter().next().unwrap();
                        coef = coef * v;
                        param = Some(k);
                    }
                    any = true;
                }
                Some(c) if c.is_ascii_lowercase() && c != b'f' => {
                    if param.is_some() {
                        return Err(self.err("products of parameters are not supported"));
                    }
                    param = Some((c as char).to_string());
                    self.pos += 1;
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return Ok(LinExpr::constant(sign));
        }
        let c = sign * coef;
        Ok(match param {
            Some(p) => LinExpr::param(&p).scale(&c),
            None => LinExpr::constant(c),
        })
    }

    fn group_expr(&mut self, close: u8) -> Result<LinExpr, LieError> {
        let mut acc = LinExpr::default();
        loop {
            let t = self.atom()?;
            acc = acc.add(&t);
            if self.eat(close) {
                return Ok(acc);
            }
            if !matches!(self.peek(), Some(b'+') | Some(b'-')) {
                return Err(self.err("unexpected character in group"));
            }
        }
    }

    /// `f^{ij}`, `f^ij` or `fij`; returns zero based indices.
    fn basis(&mut self) -> Result<(usize, usize), LieError> {
        if !self.eat(b'f') {
            return Err(self.err("expected a basis 2-form"));
        }
        self.eat(b'^');
        let braced = self.eat(b'{');
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = &self.src[start..self.pos];
        if braced {
            self.expect(b'}')?;
        }
        let idx: Vec<usize> = digits.bytes().map(|b| (b - b'0') as usize).collect();
        if idx.len() != 2 || idx.contains(&0) {
            return Err(self.err("basis 2-form needs two indices from 1 to 9"));
        }
        Ok((idx[0] - 1, idx[1] - 1))
    }

    fn component(&mut self) -> Result<Vec<(LinExpr, usize, usize)>, LieError> {
        let mut terms = Vec::new();
        if self.peek() == Some(b'0') {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b',') | Some(b')') | None) {
                return Ok(terms);
            }
            self.pos = save;
        }
        loop {
            let coef = self.atom()?;
            let (i, j) = self.basis()?;
            if i == j {
                return Err(self.err("repeated index in a 2-form"));
            }
            let (i, j, c) = if i < j { (i, j, coef) } else { (j, i, coef.scale(&Scalar::from_int(-1))) };
            terms.push((c, i, j));
            if !matches!(self.peek(), Some(b'+') | Some(b'-')) {
                return Ok(terms);
            }
        }
    }
}

/// Parses `(0,0,0,0,0,f^{12})`-style structure equations.
pub fn parse_structure_equations(src: &str) -> Result<StructureTemplate, LieError> {
    let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut lx = Lexer { s: cleaned.as_bytes(), pos: 0, src: &cleaned };
    let paren = lx.eat(b'(');
    let mut components = Vec::new();
    loop {
        components.push(lx.component()?);
        if lx.eat(b',') {
            continue;
        }
        break;
    }
    if paren {
        lx.expect(b')')?;
    }
    if lx.pos != cleaned.len() {
        return Err(lx.err("trailing input"));
    }
    let dim = components.len();
    for comp in &components {
        for (_, _, j) in comp {
            if *j >= dim {
                return Err(LieError::Parse(format!("index {} exceeds dimension {dim}", j + 1)));
            }
        }
    }
    Ok(StructureTemplate { dim, components })
}

pub fn format_two_form(terms: &[(Scalar, usize, usize)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (c, i, j)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if neg {
            s.push('-');
        } else if k > 0 {
            s.push('+');
        }
        if !a.is_one() {
            s.push_str(&a.to_string());
        }
        s.push_str(&format!("f^{{{}{}}}", i + 1, j + 1));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: &[(&str, Scalar)]) -> BTreeMap<String, Scalar> {
        p.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn parses_parameters_and_fractions() {
        let t = parse_structure_equations("(f^{16}, -\\frac{p}{2}f^{26}+f^{36}, 1/2f^{36}, 0, rf^{56}-sf^{46}, 0)").unwrap();
        assert_eq!(t.dim, 6);
        assert_eq!(t.params(), ["p", "r", "s"].iter().map(|s| s.to_string()).collect());
        let v = t.eval(&params(&[("p", Scalar::from_int(1)), ("r", Scalar::new(1, 3)), ("s", Scalar::from_int(2))])).unwrap();
        assert_eq!(v[1][0], (Scalar::new(-1, 2), 1, 5));
        assert_eq!(v[2][0], (Scalar::new(1, 2), 2, 5));
        assert_eq!(v[4], vec![(Scalar::new(1, 3), 4, 5), (Scalar::from_int(-2), 3, 5)]);
        assert!(v[3].is_empty());
    }

    #[test]
    fn reversed_indices_flip_sign() {
        let t = parse_structure_equations("(0,f^{31},0)").unwrap();
        assert_eq!(t.components[1][0].1, 0);
        assert_eq!(t.components[1][0].0, LinExpr::constant(Scalar::from_int(-1)));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_structure_equations("(f^{16},pqf^{26})").is_err());
        assert!(parse_structure_equations("(f^{17},0)").is_err());
        assert!(parse_structure_equations("(f^{1},0)").is_err());
    }

    #[test]
    fn linexpr_display() {
        let e = LinExpr::param("p").scale(&Scalar::new(-1, 2)).add(&LinExpr::constant(Scalar::one()));
        assert_eq!(e.to_string(), "-1/2p+1");
    }
}
