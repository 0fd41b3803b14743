//! Strict n-categories as a partial Horn theory, term normalization and defining sets.

use super::DefiningEntry;
use crate::syntax::{parse_theory, FuncId, Signature, Term, Theory};
use std::fmt::Write;

/// DSL source of the theory of strict n-categories: one sort `*`, and for each
/// `1 ≤ k ≤ n` the symbols `dk`, `ck` (unary) and `compk` (binary).
pub fn ncat_source(n: usize) -> String {
    assert!(n >= 1, "n must be positive");
    let mut s = format!("# Strict {n}-categories. compk(x, y) is x after y along the (k-1)-cell dk(x) = ck(y).\ntheory ncat{n} {{\n  sort *;\n");
    for k in 1..=n {
        let _ = writeln!(s, "  func d{k} : * -> *;\n  func c{k} : * -> *;\n  func comp{k} : *, * -> *;");
    }
    for k in 1..=n {
        let (d, c, o) = (format!("d{k}"), format!("c{k}"), format!("comp{k}"));
        let _ = writeln!(s, "  axiom [x:*] top |- {d}({d}(x)) = {d}(x) = {c}({d}(x));");
        let _ = writeln!(s, "  axiom [x:*] top |- {c}({c}(x)) = {c}(x) = {d}({c}(x));");
        let _ = writeln!(s, "  axiom [x:*, y:*] {d}(x) = {c}(y) -||- {o}(x, y)!;");
        let _ = writeln!(s, "  axiom [x:*, y:*] {d}(x) = {c}(y) |- {d}({o}(x, y)) = {d}(y) & {c}({o}(x, y)) = {c}(x);");
        let _ = writeln!(s, "  axiom [x:*] top |- {o}(x, {d}(x)) = x = {o}({c}(x), x);");
        let _ = writeln!(
            s,
            "  axiom [x:*, y:*, z:*] {d}(x) = {c}(y) & {d}(y) = {c}(z) |- {o}({o}(x, y), z) = {o}(x, {o}(y, z));"
        );
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let _ = writeln!(s, "  axiom [x:*] top |- d{j}(d{i}(x)) = d{i}(d{j}(x)) = d{i}(c{j}(x)) = c{j}(d{i}(x)) = d{i}(x);");
            let _ = writeln!(s, "  axiom [x:*] top |- c{j}(c{i}(x)) = c{i}(c{j}(x)) = c{i}(d{j}(x)) = d{j}(c{i}(x)) = c{i}(x);");
            let _ = writeln!(
                s,
                "  axiom [x:*, y:*] d{i}(x) = c{i}(y) |- d{j}(comp{i}(x, y)) = comp{i}(d{j}(x), d{j}(y)) & c{j}(comp{i}(x, y)) = comp{i}(c{j}(x), c{j}(y));"
            );
            let _ = writeln!(
                s,
                "  axiom [x:*, x':*, y:*, y':*] d{j}(x) = c{j}(y) & d{j}(x') = c{j}(y') & d{i}(x) = c{i}(x') |- comp{i}(comp{j}(x, y), comp{j}(x', y')) = comp{j}(comp{i}(x, x'), comp{i}(y, y'));"
            );
        }
    }
    s.push_str("}\n");
    s
}

pub fn ncat_theory(n: usize) -> Theory {
    parse_theory(&ncat_source(n)).expect("generated theory parses")
}

/// Symbol table of a signature containing the n-category symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ncat {
    pub n: usize,
    d: Vec<FuncId>,
    c: Vec<FuncId>,
    comp: Vec<FuncId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bd {
    D,
    C,
}

/// Shape of a term over the n-category signature.
pub enum View<'a> {
    Var,
    Bd(Bd, usize, &'a Term),
    Comp(usize, &'a Term, &'a Term),
}

impl Ncat {
    pub fn new(sig: &Signature, n: usize) -> Option<Ncat> {
        let get = |p: &str| (1..=n).map(|k| sig.func_id(&format!("{p}{k}"))).collect::<Option<Vec<_>>>();
        Some(Ncat { n, d: get("d")?, c: get("c")?, comp: get("comp")? })
    }

    /// Reads `n` off a theory whose function symbols are exactly the n-category ones.
    pub fn detect(sig: &Signature) -> Option<Ncat> {
        let n = sig.funcs.len() / 3;
        if n == 0 || sig.funcs.len() != 3 * n {
            return None;
        }
        Ncat::new(sig, n)
    }

    pub fn view<'a>(&self, t: &'a Term) -> View<'a> {
        match t {
            Term::Var(..) => View::Var,
            Term::App(f, args) => {
                if let Some(k) = self.d.iter().position(|g| g == f) {
                    View::Bd(Bd::D, k + 1, &args[0])
                } else if let Some(k) = self.c.iter().position(|g| g == f) {
                    View::Bd(Bd::C, k + 1, &args[0])
                } else if let Some(k) = self.comp.iter().position(|g| g == f) {
                    View::Comp(k + 1, &args[0], &args[1])
                } else {
                    panic!("symbol #{f} is not an n-category symbol")
                }
            }
        }
    }

    pub fn bd(&self, b: Bd, k: usize, t: Term) -> Term {
        let f = match b {
            Bd::D => self.d[k - 1],
            Bd::C => self.c[k - 1],
        };
        Term::App(f, vec![t])
    }

    pub fn d(&self, k: usize, t: Term) -> Term {
        self.bd(Bd::D, k, t)
    }

    pub fn c(&self, k: usize, t: Term) -> Term {
        self.bd(Bd::C, k, t)
    }

    pub fn comp(&self, k: usize, a: Term, b: Term) -> Term {
        Term::App(self.comp[k - 1], vec![a, b])
    }

    /// Largest k with `compk` occurring, 0 if none.
    pub fn sharp(&self, t: &Term) -> usize {
        match self.view(t) {
            View::Var => 0,
            View::Bd(_, _, s) => self.sharp(s),
            View::Comp(k, a, b) => k.max(self.sharp(a)).max(self.sharp(b)),
        }
    }

    /// Left-associated `compk` chain from components.
    fn chain(&self, k: usize, parts: Vec<Term>) -> Term {
        let mut it = parts.into_iter();
        let first = it.next().expect("nonempty chain");
        it.fold(first, |acc, p| self.comp(k, acc, p))
    }

    /// Components of a left-associated `compk` chain; `[t]` if `t` is not a `compk`.
    fn components(&self, k: usize, t: &Term) -> Vec<Term> {
        match self.view(t) {
            View::Comp(j, a, b) if j == k => {
                let mut v = self.components(k, a);
                v.push(b.clone());
                v
            }
            _ => vec![t.clone()],
        }
    }

    /// A normal form ν with τ ⊴ ν and ♯ν ≤ ♯τ.
    pub fn normalize(&self, t: &Term) -> Term {
        match self.view(t) {
            View::Var => t.clone(),
            View::Bd(b, i, s) => self.norm_bd(b, i, &self.normalize(s)),
            View::Comp(i, a, b) => self.norm_comp(i, &self.normalize(a), &self.normalize(b)),
        }
    }

    /// Boundary of a normal term.
    fn norm_bd(&self, b: Bd, i: usize, nu: &Term) -> Term {
        let k = self.sharp(nu);
        if k == 0 {
            return match self.view(nu) {
                View::Var => self.bd(b, i, nu.clone()),
                // the innermost operator of least index wins
                View::Bd(_, m, _) if m <= i => nu.clone(),
                View::Bd(_, _, x) => self.bd(b, i, x.clone()),
                View::Comp(..) => unreachable!("sharp 0"),
            };
        }
        let parts = self.components(k, nu);
        if i <= k {
            match b {
                Bd::D => self.norm_bd(b, i, parts.last().unwrap()),
                Bd::C => self.norm_bd(b, i, &parts[0]),
            }
        } else {
            self.chain(k, parts.iter().map(|p| self.norm_bd(b, i, p)).collect())
        }
    }

    /// `ν ∘_i ν′` for normal ν, ν′.
    fn norm_comp(&self, i: usize, nu: &Term, nu2: &Term) -> Term {
        let (k, k2) = (self.sharp(nu), self.sharp(nu2));
        let m = k.max(k2);
        if m < i {
            return self.comp(i, nu.clone(), nu2.clone());
        }
        if m == i {
            let mut parts = self.components(i, nu);
            parts.extend(self.components(i, nu2));
            return self.chain(i, parts);
        }
        let (top, parts) = if k >= k2 {
            let taus = self.components(k, nu);
            let rho = self.norm_bd(Bd::D, k, nu2);
            let parts: Vec<Term> = taus
                .iter()
                .enumerate()
                .map(|(s, t)| if s == 0 { self.norm_comp(i, t, nu2) } else { self.norm_comp(i, t, &rho) })
                .collect();
            (k, parts)
        } else {
            let taus = self.components(k2, nu2);
            let rho = self.norm_bd(Bd::C, k2, nu);
            let l = taus.len() - 1;
            let parts: Vec<Term> = taus
                .iter()
                .enumerate()
                .map(|(s, t)| if s == l { self.norm_comp(i, nu, t) } else { self.norm_comp(i, &rho, t) })
                .collect();
            (k2, parts)
        };
        let mut it = parts.into_iter();
        let first = it.next().unwrap();
        it.fold(first, |acc, p| self.norm_comp(top, &acc, &p))
    }

    /// The inductive normality predicate, checked directly on the term.
    pub fn is_normal(&self, t: &Term) -> bool {
        match self.view(t) {
            View::Var => true,
            View::Bd(_, _, s) => matches!(s, Term::Var(..)),
            View::Comp(k, _, _) => {
                let parts = self.components(k, t);
                parts.len() >= 2 && parts.iter().all(|p| self.is_normal(p) && self.sharp(p) < k)
            }
        }
    }

    /// Defining set: one equation per composition, built from normal forms.
    pub fn defining_set(&self, t: &Term) -> Vec<DefiningEntry> {
        match self.view(t) {
            View::Var => Vec::new(),
            View::Bd(_, _, s) => self.defining_set(s),
            View::Comp(k, a, b) => {
                let mut out = self.defining_set(a);
                out.extend(self.defining_set(b));
                let (n1, n2) = (self.normalize(a), self.normalize(b));
                let (s1, s2) = (self.sharp(&n1), self.sharp(&n2));
                let (l, r) = if s1.max(s2) < k {
                    (self.d(k, n1), self.c(k, n2))
                } else if s1 < s2 {
                    (self.d(k, n1), self.norm_bd(Bd::C, k, &n2))
                } else if s1 > s2 {
                    (self.norm_bd(Bd::D, k, &n1), self.c(k, n2))
                } else {
                    (self.norm_bd(Bd::D, k, &n1), self.norm_bd(Bd::C, k, &n2))
                };
                out.push(DefiningEntry { label: 0, sigmas: vec![l, r] });
                out
            }
        }
    }
}
