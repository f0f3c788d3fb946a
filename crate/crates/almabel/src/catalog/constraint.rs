//! Parameter conditions as printed in the tables: chained comparisons of rational
//! expressions with `|x|`, joined by `,`, `or` and `and`, with parentheses.

use std::collections::BTreeMap;
use std::fmt;

use crate::numerics::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Scalar),
    Var(String),
    Abs(Box<Expr>),
    Neg(Box<Expr>),
    Bin(Box<Expr>, char, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
    Ne,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Pred {
    True,
    Chain(Expr, Vec<(Rel, Expr)>),
    And(Vec<Pred>),
    Or(Vec<Pred>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintError {
    Parse(String),
    UnknownParam(String),
    DivisionByZero,
}

impl fmt::Display for ConstraintError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintError::Parse(m) => write!(f, "cannot parse condition: {m}"),
            ConstraintError::UnknownParam(p) => write!(f, "parameter `{p}` has no value"),
            ConstraintError::DivisionByZero => write!(f, "division by zero"),
        }
    }
}

impl std::error::Error for ConstraintError {}

pub type Env = BTreeMap<String, Scalar>;

impl Expr {
    pub fn eval(&self, env: &Env) -> Result<Scalar, ConstraintError> {
        Ok(match self {
            Expr::Num(x) => x.clone(),
            Expr::Var(v) => env.get(v).cloned().ok_or_else(|| ConstraintError::UnknownParam(v.clone()))?,
            Expr::Abs(e) => e.eval(env)?.abs(),
            Expr::Neg(e) => -e.eval(env)?,
            Expr::Bin(a, op, b) => {
                let (x, y) = (a.eval(env)?, b.eval(env)?);
                match op {
                    '+' => x + y,
                    '-' => x - y,
                    '*' => x * y,
                    _ => {
                        if y.is_zero() {
                            return Err(ConstraintError::DivisionByZero);
                        }
                        x / y
                    }
                }
            }
        })
    }
}

impl Rel {
    fn holds(self, a: &Scalar, b: &Scalar) -> bool {
        match self {
            Rel::Ge => a >= b,
            Rel::Gt => a > b,
            Rel::Le => a <= b,
            Rel::Lt => a < b,
            Rel::Eq => a == b,
            Rel::Ne => a != b,
        }
    }
}

impl Pred {
    pub fn eval(&self, env: &Env) -> Result<bool, ConstraintError> {
        match self {
            Pred::True => Ok(true),
            Pred::Chain(first, rest) => {
                let mut left = first.eval(env)?;
                for (rel, e) in rest {
                    let right = e.eval(env)?;
                    if !rel.holds(&left, &right) {
                        return Ok(false);
                    }
                    left = right;
                }
                Ok(true)
            }
            Pred::And(ps) => {
                for p in ps {
                    if !p.eval(env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Pred::Or(ps) => {
                for p in ps {
                    if p.eval(env)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// Top level clauses, so a violation can be reported by its own text.
    pub fn clauses(&self) -> Vec<&Pred> {
        match self {
            Pred::And(ps) => ps.iter().collect(),
            Pred::True => vec![],
            p => vec![p],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Scalar),
    Ident(String),
    Op(char),
    Rel(Rel),
    Bar,
    Open,
    Close,
    Comma,
    And,
    Or,
}

fn tokenize(src: &str) -> Result<Vec<Tok>, ConstraintError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        match c {
            ' ' => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..=i].iter().collect();
                out.push(Tok::Num(s.parse().map_err(|_| ConstraintError::Parse(s))?));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_alphanumeric() {
                    i += 1;
                }
                let s: String = chars[start..=i].iter().collect();
                out.push(match s.as_str() {
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    _ => Tok::Ident(s),
                });
            }
            '+' | '-' | '*' | '/' => out.push(Tok::Op(c)),
            '|' => out.push(Tok::Bar),
            '(' => out.push(Tok::Open),
            ')' => out.push(Tok::Close),
            ',' => out.push(Tok::Comma),
            '>' | '<' | '!' | '=' => {
                let two = next == Some('=');
                let rel = match (c, two) {
                    ('>', true) => Rel::Ge,
                    ('>', false) => Rel::Gt,
                    ('<', true) => Rel::Le,
                    ('<', false) => Rel::Lt,
                    ('!', true) => Rel::Ne,
                    ('=', _) => Rel::Eq,
                    _ => return Err(ConstraintError::Parse(format!("stray `{c}` in `{src}`"))),
                };
                if two {
                    i += 1;
                }
                out.push(Tok::Rel(rel));
            }
            _ => return Err(ConstraintError::Parse(format!("unexpected `{c}` in `{src}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn fail<T>(&self, what: &str) -> Result<T, ConstraintError> {
        Err(ConstraintError::Parse(format!("{what} at token {}", self.pos)))
    }

    /// `,` is the loosest conjunction, then `or`, then `and`.
    fn pred(&mut self) -> Result<Pred, ConstraintError> {
        let mut parts = vec![self.disj()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            parts.push(self.disj()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Pred::And(parts) })
    }

    fn disj(&mut self) -> Result<Pred, ConstraintError> {
        let mut alts = vec![self.conj()?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            alts.push(self.conj()?);
        }
        Ok(if alts.len() == 1 { alts.pop().unwrap() } else { Pred::Or(alts) })
    }

    fn conj(&mut self) -> Result<Pred, ConstraintError> {
        let mut parts = vec![self.atom()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Pred::And(parts) })
    }

    fn atom(&mut self) -> Result<Pred, ConstraintError> {
        let save = self.pos;
        if let Ok(c) = self.chain() {
            return Ok(c);
        }
        self.pos = save;
        if self.bump() != Some(Tok::Open) {
            return self.fail("expected a comparison");
        }
        let p = self.pred()?;
        if self.bump() != Some(Tok::Close) {
            return self.fail("expected `)`");
        }
        Ok(p)
    }

    fn chain(&mut self) -> Result<Pred, ConstraintError> {
        let first = self.expr()?;
        let mut rest = Vec::new();
        while let Some(Tok::Rel(r)) = self.peek().cloned() {
            self.pos += 1;
            rest.push((r, self.expr()?));
        }
        if rest.is_empty() {
            return self.fail("expected a relation");
        }
        Ok(Pred::Chain(first, rest))
    }

    fn expr(&mut self) -> Result<Expr, ConstraintError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            acc = Expr::Bin(Box::new(acc), op, Box::new(self.term()?));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ConstraintError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            acc = Expr::Bin(Box::new(acc), op, Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ConstraintError> {
        if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        match self.bump() {
            Some(Tok::Num(x)) => Ok(Expr::Num(x)),
            Some(Tok::Ident(v)) => Ok(Expr::Var(v)),
            Some(Tok::Bar) => {
                let e = self.expr()?;
                if self.bump() != Some(Tok::Bar) {
                    return self.fail("expected closing `|`");
                }
                Ok(Expr::Abs(Box::new(e)))
            }
            Some(Tok::Open) => {
                let e = self.expr()?;
                if self.bump() != Some(Tok::Close) {
                    return self.fail("expected `)`");
                }
                Ok(e)
            }
            _ => self.fail("expected a number, parameter, `|` or `(`"),
        }
    }
}

pub fn parse_pred(src: &str) -> Result<Pred, ConstraintError> {
    if src.trim().is_empty() {
        return Ok(Pred::True);
    }
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let out = p.pred()?;
    if p.pos != p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(out)
}

pub fn parse_expr(src: &str) -> Result<Expr, ConstraintError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(out)
}

impl Expr {
    /// Binding strength when printed; a fraction literal prints as a division.
    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(_, '+' | '-', _) => 1,
            Expr::Bin(..) => 2,
            Expr::Num(x) if !x.is_integer() => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr, below: bool| if below { format!("({e})") } else { e.to_string() };
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Abs(e) => write!(f, "|{e}|"),
            Expr::Neg(e) => write!(f, "-{}", wrap(e, e.precedence() < 3)),
            Expr::Bin(a, op, b) => {
                let level = if matches!(op, '+' | '-') { 1 } else { 2 };
                let left = wrap(a, a.precedence() < level);
                let right = wrap(b, b.precedence() < level || (matches!(op, '-' | '/') && b.precedence() == level));
                write!(f, "{left}{op}{right}")
            }
        }
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rel::Ge => ">=",
            Rel::Gt => ">",
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Eq => "=",
            Rel::Ne => "!=",
        })
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::True => f.write_str("true"),
            Pred::Chain(first, rest) => {
                write!(f, "{first}")?;
                for (r, e) in rest {
                    write!(f, " {r} {e}")?;
                }
                Ok(())
            }
            Pred::And(ps) => {
                let parts: Vec<String> = ps
                    .iter()
                    .map(|p| if matches!(p, Pred::Or(_)) { format!("({p})") } else { p.to_string() })
                    .collect();
                f.write_str(&parts.join(", "))
            }
            Pred::Or(ps) => {
                let parts: Vec<String> = ps
                    .iter()
                    .map(|p| if matches!(p, Pred::And(_)) { format!("({p})") } else { p.to_string() })
                    .collect();
                f.write_str(&parts.join(" or "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, &str)]) -> Env {
        pairs.iter().map(|(k, v)| (k.to_string(), v.parse().unwrap())).collect()
    }

    #[test]
    fn chains_and_abs() {
        let p = parse_pred("1 >= |p| >= |r| > 0").unwrap();
        assert!(p.eval(&env(&[("p", "-1/2"), ("r", "1/3")])).unwrap());
        assert!(!p.eval(&env(&[("p", "1/3"), ("r", "-1/2")])).unwrap());
        assert!(!p.eval(&env(&[("p", "1/3"), ("r", "0")])).unwrap());
    }

    #[test]
    fn alternatives() {
        let p = parse_pred("p*s != 0, (|q| > |r|) or (|q| = |r|, |s| <= 1)").unwrap();
        assert_eq!(p.clauses().len(), 2);
        assert!(p.eval(&env(&[("p", "1"), ("q", "-1/2"), ("r", "-1/2"), ("s", "1")])).unwrap());
        assert!(!p.eval(&env(&[("p", "1"), ("q", "-1/2"), ("r", "1/2"), ("s", "2")])).unwrap());
        assert!(p.eval(&env(&[("p", "1"), ("q", "1"), ("r", "1/2"), ("s", "2")])).unwrap());
    }

    #[test]
    fn arithmetic() {
        let e = parse_expr("-1-2*p-q").unwrap();
        assert_eq!(e.eval(&env(&[("p", "1/2"), ("q", "1")])).unwrap(), Scalar::from_int(-3));
        let e = parse_expr("-p/2").unwrap();
        assert_eq!(e.eval(&env(&[("p", "3")])).unwrap(), Scalar::new(-3, 2));
        assert!(parse_pred("p*p+q*q != 0").unwrap().eval(&env(&[("p", "0"), ("q", "0")])).is_ok_and(|b| !b));
        assert_eq!(parse_pred("").unwrap(), Pred::True);
        assert!(matches!(parse_expr("x").unwrap().eval(&Env::new()), Err(ConstraintError::UnknownParam(_))));
        assert!(parse_pred("p >").is_err());
    }

    #[test]
    fn display_round_trips() {
        for src in ["1 >= |p| >= |r| > 0", "p*s != 0, (|q| > |r|) or (|q| = |r|, |s| <= 1)", "s = -1-p-q-r", "q = -p/2"] {
            let p = parse_pred(src).unwrap();
            assert_eq!(parse_pred(&p.to_string()).unwrap(), p, "{p}");
        }
        let p = parse_pred("(|q| > |r|) or (|q| = |r|, |s| <= 1)").unwrap();
        assert_eq!(p.to_string(), "|q| > |r| or (|q| = |r|, |s| <= 1)");
    }
}
