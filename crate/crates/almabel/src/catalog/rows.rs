//! Table rows transcribed as data. Conditions and unimodularity predicates use the
//! syntax of [`super::constraint`]; `None` for unimodularity means the row never is.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Indecomposable,
    Decomposable,
    ComplexList,
    Nilpotent,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Row {
    pub name: &'static str,
    pub source: Source,
    pub params: &'static [&'static str],
    pub equations: &'static str,
    pub conditions: &'static str,
    pub unimodular: Option<&'static str>,
    /// Complex structure column: a condition on the parameters for the real tables,
    /// `Jf_a = f_b` pairs for the complex list.
    pub complex: &'static str,
    /// The real table row a complex list entry specializes.
    pub alias: &'static str,
}

const fn row(
    name: &'static str,
    source: Source,
    params: &'static [&'static str],
    equations: &'static str,
    conditions: &'static str,
    unimodular: Option<&'static str>,
    complex: &'static str,
    alias: &'static str,
) -> Row {
    Row { name, source, params, equations, conditions, unimodular, complex, alias }
}

use Source::*;

pub static ROWS: &[Row] = &[
    row("g6.1", Indecomposable, &["p", "q", "r", "s"], "(f^{16},pf^{26},qf^{36},rf^{46},sf^{56},0)", "1 >= |p| >= |q| >= |r| >= |s| > 0", Some("s = -1-p-q-r"), "(p = q and r = s) or (p = 1 and r = s) or (p = 1 and q = r)", ""),
    row("g6.2", Indecomposable, &["p", "q", "r"], "(f^{16},pf^{26}+f^{36},pf^{36},qf^{46},rf^{56},0)", "1 >= |q| >= |r| > 0", Some("r = -1-2*p-q"), "(p = 1 and q = r) or (q = 1 and p = r)", ""),
    row("g6.3", Indecomposable, &["p", "q"], "(f^{16},pf^{26}+f^{36},pf^{36}+f^{46},pf^{46},qf^{56},0)", "1 >= |q| > 0", Some("q = -1-3*p"), "", ""),
    row("g6.4", Indecomposable, &["p"], "(f^{16},pf^{26}+f^{36},pf^{36}+f^{46},pf^{46}+f^{56},pf^{56},0)", "", Some("p = -1/4"), "", ""),
    row("g6.5", Indecomposable, &[], "(f^{16}+f^{26},f^{26}+f^{36},f^{36}+f^{46},f^{46}+f^{56},f^{56},0)", "", None, "", ""),
    row("g6.6", Indecomposable, &["p", "q"], "(f^{16},pf^{26}+f^{36},pf^{36},qf^{46}+f^{56},qf^{56},0)", "|p| >= |q|", Some("q = -1/2-p"), "p = q", ""),
    row("g6.7", Indecomposable, &["p", "q"], "(pf^{16}+f^{26},pf^{26}+f^{36},pf^{36},qf^{46}+f^{56},qf^{56},0)", "p*p+q*q != 0", Some("q = -3/2*p"), "p = q", ""),
    row("g6.8", Indecomposable, &["p", "q", "r", "s"], "(pf^{16},qf^{26},rf^{36},sf^{46}+f^{56},-f^{46}+sf^{56},0)", "|p| >= |q| >= |r| > 0", Some("s = -1/2*(p+q+r)"), "p = q or q = r", ""),
    row("g6.9", Indecomposable, &["p", "q", "r"], "(pf^{16},qf^{26}+f^{36},qf^{36},rf^{46}+f^{56},-f^{46}+rf^{56},0)", "p != 0", Some("r = -1/2*p-q"), "p = q", ""),
    row("g6.10", Indecomposable, &["p", "q"], "(pf^{16}+f^{26},pf^{26}+f^{36},pf^{36},qf^{46}+f^{56},-f^{46}+qf^{56},0)", "", Some("q = -3/2*p"), "", ""),
    row("g6.11", Indecomposable, &["p", "q", "r", "s"], "(pf^{16},qf^{26}+f^{36},-f^{26}+qf^{36},rf^{46}+sf^{56},-sf^{46}+rf^{56},0)", "p*s != 0, (|q| > |r|) or (|q| = |r| and |s| <= 1)", Some("r = -1/2*p-q"), "always", ""),
    row("g6.12", Indecomposable, &["p", "q"], "(pf^{16},qf^{26}+f^{36}-f^{46},-f^{26}+qf^{36}-f^{56},qf^{46}+f^{56},-f^{46}+qf^{56},0)", "p != 0", Some("q = -1/4*p"), "always", ""),
    row("g2+4R", Decomposable, &[], "(f^{16},0,0,0,0,0)", "", None, "always", ""),
    row("g3.2+3R", Decomposable, &[], "(f^{16}+f^{26},f^{26},0,0,0,0)", "", None, "", ""),
    row("g3.3+3R", Decomposable, &[], "(f^{16},f^{26},0,0,0,0)", "", None, "always", ""),
    row("g3.4+3R", Decomposable, &["p"], "(f^{16},pf^{26},0,0,0,0)", "1 >= |p| > 0, p != 1", Some("p = -1"), "", ""),
    row("g3.5+3R", Decomposable, &["p"], "(pf^{16}+f^{26},-f^{16}+pf^{26},0,0,0,0)", "", Some("p = 0"), "always", ""),
    row("g4.2+2R", Decomposable, &["p"], "(pf^{16},f^{26}+f^{36},f^{36},0,0,0)", "p != 0", Some("p = -2"), "p = 1", ""),
    row("g4.3+2R", Decomposable, &[], "(f^{16},f^{36},0,0,0,0)", "", None, "", ""),
    row("g4.4+2R", Decomposable, &[], "(f^{16}+f^{26},f^{26}+f^{36},f^{36},0,0,0)", "", None, "", ""),
    row("g4.5+2R", Decomposable, &["p", "q"], "(f^{16},pf^{26},qf^{36},0,0,0)", "1 >= |p| >= |q| > 0", Some("q = -1-p"), "p = q or p = 1", ""),
    row("g4.6+2R", Decomposable, &["p", "q"], "(pf^{16},qf^{26}+f^{36},-f^{26}+qf^{36},0,0,0)", "p != 0", Some("q = -p/2"), "always", ""),
    row("g5.7+R", Decomposable, &["p", "q", "r"], "(f^{16},pf^{26},qf^{36},rf^{46},0,0)", "1 >= |p| >= |q| >= |r| > 0", Some("r = -1-p-q"), "p = 1 and q = r", ""),
    row("g5.8+R", Decomposable, &["p"], "(f^{16},pf^{26},f^{46},0,0,0)", "1 >= |p| > 0", Some("p = -1"), "p = 1", ""),
    row("g5.9+R", Decomposable, &["p", "q"], "(pf^{16},qf^{26},f^{36}+f^{46},f^{46},0,0)", "|p| >= |q| > 0", Some("q = -2-p"), "", ""),
    row("g5.10+R", Decomposable, &[], "(f^{16},f^{36},f^{46},0,0,0)", "", None, "", ""),
    row("g5.11+R", Decomposable, &["p"], "(pf^{16},f^{26}+f^{36},f^{36}+f^{46},f^{46},0,0)", "p != 0", Some("p = -3"), "", ""),
    row("g5.12+R", Decomposable, &[], "(f^{16}+f^{26},f^{26}+f^{36},f^{36}+f^{46},f^{46},0,0)", "", None, "", ""),
    row("g5.13+R", Decomposable, &["p", "q", "r"], "(f^{16},pf^{26},qf^{36}+rf^{46},-rf^{36}+qf^{46},0,0)", "1 >= |p| > 0, r != 0", Some("q = -1/2*(1+p)"), "p = 1", ""),
    row("g5.14+R", Decomposable, &["p"], "(pf^{16}+f^{26},-f^{16}+pf^{26},f^{46},0,0,0)", "", Some("p = 0"), "always", ""),
    row("g5.15+R", Decomposable, &["p"], "(f^{16}+f^{26},f^{26},pf^{36}+f^{46},pf^{46},0,0)", "|p| <= 1", Some("p = -1"), "p = 1", ""),
    row("g5.16+R", Decomposable, &["p", "q"], "(f^{16}+f^{26},f^{26},pf^{36}+qf^{46},-qf^{36}+pf^{46},0,0)", "q != 0", Some("p = -1"), "", ""),
    row("g5.17+R", Decomposable, &["p", "q", "r"], "(pf^{16}+f^{26},-f^{16}+pf^{26},qf^{36}+rf^{46},-rf^{36}+qf^{46},0,0)", "r != 0, (|p| > |q|) or (|p| = |q| and |r| <= 1)", Some("q = -p"), "always", ""),
    row("g5.18+R", Decomposable, &["p"], "(pf^{16}+f^{26}-f^{36},-f^{16}+pf^{26}-f^{46},pf^{36}+f^{46},-f^{36}+pf^{46},0,0)", "", Some("p = 0"), "always", ""),
    row("k1", ComplexList, &["p", "r"], "(f^{16},pf^{26},pf^{36},rf^{46},rf^{56},0)", "1 >= |p| >= |r| > 0", None, "Jf1=f6, Jf2=f3, Jf4=f5", "g6.1^{p,p,r,r}"),
    row("k2", ComplexList, &["q", "r"], "(f^{16},f^{26},qf^{36},rf^{46},rf^{56},0)", "1 > |q| >= |r| > 0", None, "Jf1=f2, Jf3=f6, Jf4=f5", "g6.1^{1,q,r,r}"),
    row("k3", ComplexList, &["q", "s"], "(f^{16},f^{26},qf^{36},qf^{46},sf^{56},0)", "1 >= |q| > |s| > 0", None, "Jf1=f2, Jf3=f4, Jf5=f6", "g6.1^{1,q,q,s}"),
    row("k4", ComplexList, &["q"], "(f^{16},f^{26}+f^{36},f^{36},qf^{46},qf^{56},0)", "1 >= |q| > 0", None, "Jf2=f1, Jf3=f6, Jf4=f5", "g6.2^{1,q,q}"),
    row("k5", ComplexList, &["p"], "(f^{16},pf^{26}+f^{36},pf^{36},f^{46},pf^{56},0)", "1 > |p| > 0", None, "Jf1=f4, Jf2=f5, Jf3=f6", "g6.2^{p,1,p}"),
    row("k6", ComplexList, &["p"], "(f^{16},pf^{26}+f^{36},pf^{36},pf^{46}+f^{56},pf^{56},0)", "", None, "Jf1=f6, Jf2=f4, Jf3=f5", "g6.6^{p,p}"),
    row("k7", ComplexList, &["p"], "(pf^{16}+f^{26},pf^{26}+f^{36},pf^{36},pf^{46}+f^{56},pf^{56},0)", "p != 0", None, "Jf1=f4, Jf2=f5, Jf3=f6", "g6.7^{p,p}"),
    row("k8", ComplexList, &["p", "q", "s"], "(pf^{16},qf^{26},qf^{36},sf^{46}+f^{56},-f^{46}+sf^{56},0)", "|p| >= |q| > 0", None, "Jf1=f6, Jf2=f3, Jf4=f5", "g6.8^{p,q,q,s}"),
    row("k9", ComplexList, &["p", "r", "s"], "(pf^{16},pf^{26},rf^{36},sf^{46}+f^{56},-f^{46}+sf^{56},0)", "|p| > |r| > 0", None, "Jf1=f2, Jf3=f6, Jf4=f5", "g6.8^{p,p,r,s}"),
    row("k10", ComplexList, &["p", "r"], "(pf^{16},pf^{26}+f^{36},pf^{36},rf^{46}+f^{56},-f^{46}+rf^{56},0)", "p != 0", None, "Jf2=f1, Jf3=f6, Jf4=f5", "g6.9^{p,p,r}"),
    row("k11", ComplexList, &["p", "q", "r", "s"], "(pf^{16},qf^{26}+f^{36},-f^{26}+qf^{36},rf^{46}+sf^{56},-sf^{46}+rf^{56},0)", "p*s != 0, (|q| > |r|) or (|q| = |r| and |s| <= 1)", None, "Jf1=f6, Jf2=f3, Jf4=f5", "g6.11^{p,q,r,s}"),
    row("k12", ComplexList, &["p", "q"], "(pf^{16},qf^{26}+f^{36}-f^{46},-f^{26}+qf^{36}-f^{56},qf^{46}+f^{56},-f^{46}+qf^{56},0)", "p != 0", None, "Jf1=f6, Jf2=f3, Jf4=f5", "g6.12^{p,q}"),
    row("k13", ComplexList, &[], "(f^{16},0,0,0,0,0)", "", None, "Jf1=f6, Jf2=f3, Jf4=f5", "g2+4R"),
    row("k14", ComplexList, &[], "(f^{16},f^{26},0,0,0,0)", "", None, "Jf1=f2, Jf3=f4, Jf5=f6", "g3.3+3R"),
    row("k15", ComplexList, &["p"], "(pf^{16}+f^{26},-f^{16}+pf^{26},0,0,0,0)", "", None, "Jf1=f2, Jf3=f4, Jf5=f6", "g3.5+3R^{p}"),
    row("k16", ComplexList, &[], "(f^{16},f^{26}+f^{36},f^{36},0,0,0)", "", None, "Jf2=f1, Jf3=f6, Jf4=f5", "g4.2+2R^{1}"),
    row("k17", ComplexList, &["p"], "(f^{16},pf^{26},pf^{36},0,0,0)", "1 >= |p| > 0", None, "Jf1=f6, Jf2=f3, Jf4=f5", "g4.5+2R^{p,p}"),
    row("k18", ComplexList, &["q"], "(f^{16},f^{26},qf^{36},0,0,0)", "1 > |q| > 0", None, "Jf1=f2, Jf3=f6, Jf4=f5", "g4.5+2R^{1,q}"),
    row("k19", ComplexList, &["p", "q"], "(pf^{16},qf^{26}+f^{36},-f^{26}+qf^{36},0,0,0)", "p != 0", None, "Jf1=f6, Jf2=f3, Jf4=f5", "g4.6+2R^{p,q}"),
    row("k20", ComplexList, &["q"], "(f^{16},f^{26},qf^{36},qf^{46},0,0)", "1 >= |q| > 0", None, "Jf1=f2, Jf3=f4, Jf5=f6", "g5.7+R^{1,q,q}"),
    row("k21", ComplexList, &[], "(f^{16},f^{26},f^{46},0,0,0)", "", None, "Jf1=f2, Jf3=f5, Jf4=f6", "g5.8+R^{1}"),
    row("k22", ComplexList, &["q", "r"], "(f^{16},f^{26},qf^{36}+rf^{46},-rf^{36}+qf^{46},0,0)", "r != 0", None, "Jf1=f2, Jf3=f4, Jf5=f6", "g5.13+R^{1,q,r}"),
    row("k23", ComplexList, &["p"], "(pf^{16}+f^{26},-f^{16}+pf^{26},f^{46},0,0,0)", "", None, "Jf1=f2, Jf3=f5, Jf4=f6", "g5.14+R^{p}"),
    row("k24", ComplexList, &[], "(f^{16}+f^{26},f^{26},f^{36}+f^{46},f^{46},0,0)", "", None, "Jf1=f3, Jf2=f4, Jf5=f6", "g5.15+R^{1}"),
    row("k25", ComplexList, &["p", "q", "r"], "(pf^{16}+f^{26},-f^{16}+pf^{26},qf^{36}+rf^{46},-rf^{36}+qf^{46},0,0)", "r != 0, (|p| > |q|) or (|p| = |q| and |r| <= 1)", None, "Jf1=f2, Jf3=f4, Jf5=f6", "g5.17+R^{p,q,r}"),
    row("k26", ComplexList, &["p"], "(pf^{16}+f^{26}-f^{36},-f^{16}+pf^{26}-f^{46},pf^{36}+f^{46},-f^{36}+pf^{46},0,0)", "", None, "Jf1=f2, Jf3=f4, Jf5=f6", "g5.18+R^{p}"),
    row("n1", Nilpotent, &[], "(0,0,0,0,0,f^{12})", "", Some("0 = 0"), "", ""),
    row("n2", Nilpotent, &[], "(0,0,0,0,f^{12},f^{13})", "", Some("0 = 0"), "", ""),
    row("n3", Nilpotent, &[], "(0,0,0,f^{12},f^{13},f^{14})", "", Some("0 = 0"), "", ""),
];

/// A named specialization of a row appearing in one of the theorem lists.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Family {
    pub label: &'static str,
    pub base: &'static str,
    pub params: &'static [&'static str],
    /// Values of the base parameters as expressions in `params`.
    pub substitution: &'static [(&'static str, &'static str)],
    pub conditions: &'static str,
}

const fn fam(
    label: &'static str,
    base: &'static str,
    params: &'static [&'static str],
    substitution: &'static [(&'static str, &'static str)],
    conditions: &'static str,
) -> Family {
    Family { label, base, params, substitution, conditions }
}

pub static FAMILIES: &[Family] = &[
    fam("k11^{p,0,0,s}", "k11", &["p", "s"], &[("p", "p"), ("q", "0"), ("r", "0"), ("s", "s")], "p != 0, 1 >= |s| > 0"),
    fam("k13", "k13", &[], &[], ""),
    fam("k15^{0}", "k15", &[], &[("p", "0")], ""),
    fam("k19^{p,0}", "k19", &["p"], &[("p", "p"), ("q", "0")], "p != 0"),
    fam("k25^{0,0,r}", "k25", &["r"], &[("p", "0"), ("q", "0"), ("r", "r")], "1 >= |r| > 0"),
    fam("k1^{-1/2,-1/2}", "k1", &[], &[("p", "-1/2"), ("r", "-1/2")], ""),
    fam("k8^{p,-p/2,0}", "k8", &["p"], &[("p", "p"), ("q", "-p/2"), ("s", "0")], "p != 0"),
    fam("k8^{p,-p/2,-p/2}", "k8", &["p"], &[("p", "p"), ("q", "-p/2"), ("s", "-p/2")], "p != 0"),
    fam("k11^{p,-p/2,0,s}", "k11", &["p", "s"], &[("p", "p"), ("q", "-p/2"), ("r", "0"), ("s", "s")], "p != 0, 1 >= |s| > 0"),
    fam("k11^{p,-p/2,-p/2,s}", "k11", &["p", "s"], &[("p", "p"), ("q", "-p/2"), ("r", "-p/2"), ("s", "s")], "p != 0, 1 >= |s| > 0"),
    fam("k17^{-1/2}", "k17", &[], &[("p", "-1/2")], ""),
    fam("k19^{p,-p/2}", "k19", &["p"], &[("p", "p"), ("q", "-p/2")], "p != 0"),
    fam("k23^{0}", "k23", &[], &[("p", "0")], ""),
    fam("k11^{p,0,0,1}", "k11", &["p"], &[("p", "p"), ("q", "0"), ("r", "0"), ("s", "1")], "p != 0"),
    fam("k25^{0,0,1}", "k25", &[], &[("p", "0"), ("q", "0"), ("r", "1")], ""),
    fam("k11^{p,-p/2,-p/2,1}", "k11", &["p"], &[("p", "p"), ("q", "-p/2"), ("r", "-p/2"), ("s", "1")], "p != 0"),
];

pub const KAHLER_LIST: &[&str] = &["k11^{p,0,0,s}", "k13", "k15^{0}", "k19^{p,0}", "k25^{0,0,r}"];

pub const SKT_LIST: &[&str] = &[
    "k1^{-1/2,-1/2}",
    "k8^{p,-p/2,0}",
    "k8^{p,-p/2,-p/2}",
    "k11^{p,-p/2,0,s}",
    "k11^{p,-p/2,-p/2,s}",
    "k17^{-1/2}",
    "k19^{p,-p/2}",
    "k23^{0}",
];

pub const POISSON_LIST: &[&str] = &["k11^{p,0,0,1}", "k13", "k15^{0}", "k23^{0}", "k25^{0,0,1}"];

pub const SPLIT_GK_LIST: &[&str] = &[
    "k1^{-1/2,-1/2}",
    "k8^{p,-p/2,0}",
    "k8^{p,-p/2,-p/2}",
    "k11^{p,-p/2,0,s}",
    "k11^{p,-p/2,-p/2,s}",
    "k17^{-1/2}",
    "k19^{p,-p/2}",
];
