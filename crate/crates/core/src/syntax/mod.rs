//! Terms, Horn formulas, sequents and theories, with a text DSL.

mod lexer;
mod parser;
mod printer;

pub use lexer::{lex, Cursor, Spanned, Tok};
pub(crate) use parser::{context as context_at, formula as formula_at, term as term_at};
pub use parser::{parse_context, parse_formula, parse_sequents, parse_term, parse_theory};

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

pub type SortId = usize;
pub type FuncId = usize;
pub type RelId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuncDecl {
    pub name: String,
    pub inputs: Vec<SortId>,
    pub output: SortId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelDecl {
    pub name: String,
    pub sorts: Vec<SortId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub funcs: Vec<FuncDecl>,
    pub rels: Vec<RelDecl>,
}

impl Signature {
    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s == name)
    }

    pub fn func_id(&self, name: &str) -> Option<FuncId> {
        self.funcs.iter().position(|f| f.name == name)
    }

    pub fn rel_id(&self, name: &str) -> Option<RelId> {
        self.rels.iter().position(|r| r.name == name)
    }

    fn name_taken(&self, name: &str) -> bool {
        self.func_id(name).is_some() || self.rel_id(name).is_some()
    }

    pub fn add_sort(&mut self, name: &str) -> Result<SortId> {
        if self.sort_id(name).is_some() {
            return Err(Error::Duplicate(name.to_string()));
        }
        self.sorts.push(name.to_string());
        Ok(self.sorts.len() - 1)
    }

    pub fn add_func(&mut self, name: &str, inputs: &[SortId], output: SortId) -> Result<FuncId> {
        if self.name_taken(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        self.funcs.push(FuncDecl { name: name.to_string(), inputs: inputs.to_vec(), output });
        Ok(self.funcs.len() - 1)
    }

    pub fn add_rel(&mut self, name: &str, sorts: &[SortId]) -> Result<RelId> {
        if self.name_taken(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        self.rels.push(RelDecl { name: name.to_string(), sorts: sorts.to_vec() });
        Ok(self.rels.len() - 1)
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        &self.sorts[s]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String, SortId),
    App(FuncId, Vec<Term>),
}

impl Term {
    pub fn var(name: &str, sort: SortId) -> Term {
        Term::Var(name.to_string(), sort)
    }

    pub fn app(f: FuncId, args: Vec<Term>) -> Term {
        Term::App(f, args)
    }

    pub fn constant(f: FuncId) -> Term {
        Term::App(f, Vec::new())
    }

    pub fn sort(&self, sig: &Signature) -> SortId {
        match self {
            Term::Var(_, s) => *s,
            Term::App(f, _) => sig.funcs[*f].output,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(..) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(..) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    fn collect_vars(&self, out: &mut Vec<(String, SortId)>) {
        match self {
            Term::Var(x, s) => {
                if !out.iter().any(|(y, _)| y == x) {
                    out.push((x.clone(), *s));
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut v = Vec::new();
        self.collect_vars(&mut v);
        v.into_iter().map(|(x, _)| x).collect()
    }

    /// The minimum context: free variables in order of first occurrence.
    pub fn min_context(&self) -> Context {
        let mut v = Vec::new();
        self.collect_vars(&mut v);
        Context { vars: v }
    }

    /// Simultaneous substitution. Every free variable must be covered and keep its sort.
    pub fn substitute(&self, sig: &Signature, map: &BTreeMap<String, Term>) -> Result<Term> {
        match self {
            Term::Var(x, s) => {
                let t = map.get(x).ok_or_else(|| Error::UnboundVariable(x.clone()))?;
                if t.sort(sig) != *s {
                    return Err(Error::Sort(format!(
                        "substituting {} of sort {} for `{x}` of sort {}",
                        sig.term(t),
                        sig.sort_name(t.sort(sig)),
                        sig.sort_name(*s)
                    )));
                }
                Ok(t.clone())
            }
            Term::App(f, args) => Ok(Term::App(
                *f,
                args.iter().map(|a| a.substitute(sig, map)).collect::<Result<_>>()?,
            )),
        }
    }

    /// Iterator over all subterms, children before parents.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
            if let Term::App(_, args) = t {
                args.iter().for_each(|a| go(a, out));
            }
            out.push(t);
        }
        go(self, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Eq(Term, Term),
    Rel(RelId, Vec<Term>),
    Top,
    /// `τ!`, sugar for `τ = τ`.
    Def(Term),
}

impl Atom {
    /// Replaces `Def(τ)` by `Eq(τ, τ)`.
    pub fn normalized(&self) -> Atom {
        match self {
            Atom::Def(t) => Atom::Eq(t.clone(), t.clone()),
            a => a.clone(),
        }
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Eq(s, t) => vec![s, t],
            Atom::Rel(_, ts) => ts.iter().collect(),
            Atom::Top => vec![],
            Atom::Def(t) => vec![t],
        }
    }

    pub fn substitute(&self, sig: &Signature, map: &BTreeMap<String, Term>) -> Result<Atom> {
        Ok(match self {
            Atom::Eq(s, t) => Atom::Eq(s.substitute(sig, map)?, t.substitute(sig, map)?),
            Atom::Rel(r, ts) => {
                Atom::Rel(*r, ts.iter().map(|t| t.substitute(sig, map)).collect::<Result<_>>()?)
            }
            Atom::Top => Atom::Top,
            Atom::Def(t) => Atom::Def(t.substitute(sig, map)?),
        })
    }
}

/// A finite conjunction of atoms; the empty conjunction is ⊤.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formula(pub Vec<Atom>);

impl Formula {
    pub fn top() -> Formula {
        Formula(vec![Atom::Top])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn and(mut self, other: Formula) -> Formula {
        self.0.extend(other.0);
        self
    }

    /// Semantic form: `Def` expanded, `Top` dropped.
    pub fn normalized(&self) -> Formula {
        Formula(self.0.iter().filter(|a| **a != Atom::Top).map(Atom::normalized).collect())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut v = Vec::new();
        for a in &self.0 {
            for t in a.terms() {
                t.collect_vars(&mut v);
            }
        }
        v.into_iter().map(|(x, _)| x).collect()
    }

    pub fn substitute(&self, sig: &Signature, map: &BTreeMap<String, Term>) -> Result<Formula> {
        Ok(Formula(self.0.iter().map(|a| a.substitute(sig, map)).collect::<Result<_>>()?))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    pub vars: Vec<(String, SortId)>,
}

impl Context {
    pub fn new(vars: Vec<(String, SortId)>) -> Result<Context> {
        let mut seen = BTreeSet::new();
        for (x, _) in &vars {
            if !seen.insert(x.clone()) {
                return Err(Error::Duplicate(x.clone()));
            }
        }
        Ok(Context { vars })
    }

    pub fn empty() -> Context {
        Context::default()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn lookup(&self, x: &str) -> Option<SortId> {
        self.vars.iter().find(|(y, _)| y == x).map(|(_, s)| *s)
    }

    pub fn index_of(&self, x: &str) -> Option<usize> {
        self.vars.iter().position(|(y, _)| y == x)
    }

    pub fn var_term(&self, i: usize) -> Term {
        Term::Var(self.vars[i].0.clone(), self.vars[i].1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub ctx: Context,
    pub premise: Formula,
    pub conclusion: Formula,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub sig: Signature,
    pub sequents: Vec<Sequent>,
}

impl Theory {
    pub fn new(name: &str, sig: Signature) -> Theory {
        Theory { name: name.to_string(), sig, sequents: Vec::new() }
    }

    /// Adds a sequent after sort-checking it.
    pub fn add_sequent(&mut self, seq: Sequent) -> Result<()> {
        check_sequent(&self.sig, &seq)?;
        self.sequents.push(seq);
        Ok(())
    }

    pub fn check(&self) -> Result<()> {
        self.sequents.iter().try_for_each(|s| check_sequent(&self.sig, s))
    }
}

/// Returns the sort of `t` in `ctx`, or the first sort error.
pub fn check_term(sig: &Signature, ctx: &Context, t: &Term) -> Result<SortId> {
    match t {
        Term::Var(x, s) => match ctx.lookup(x) {
            None => Err(Error::UnboundVariable(x.clone())),
            Some(s2) if s2 != *s => Err(Error::Sort(format!(
                "variable `{x}` used at sort {} but declared {}",
                sig.sort_name(*s),
                sig.sort_name(s2)
            ))),
            Some(s2) => Ok(s2),
        },
        Term::App(f, args) => {
            let decl = sig.funcs.get(*f).ok_or_else(|| Error::UnknownSymbol(format!("#{f}")))?;
            if decl.inputs.len() != args.len() {
                return Err(Error::Arity {
                    name: decl.name.clone(),
                    expected: decl.inputs.len(),
                    got: args.len(),
                });
            }
            for (a, want) in args.iter().zip(&decl.inputs) {
                let got = check_term(sig, ctx, a)?;
                if got != *want {
                    return Err(Error::Sort(format!(
                        "argument {} of `{}` has sort {}, expected {}",
                        sig.term(a),
                        decl.name,
                        sig.sort_name(got),
                        sig.sort_name(*want)
                    )));
                }
            }
            Ok(decl.output)
        }
    }
}

pub fn check_atom(sig: &Signature, ctx: &Context, a: &Atom) -> Result<()> {
    match a {
        Atom::Eq(s, t) => {
            let (ss, ts) = (check_term(sig, ctx, s)?, check_term(sig, ctx, t)?);
            if ss != ts {
                return Err(Error::Sort(format!(
                    "equation {} = {} relates sorts {} and {}",
                    sig.term(s),
                    sig.term(t),
                    sig.sort_name(ss),
                    sig.sort_name(ts)
                )));
            }
            Ok(())
        }
        Atom::Rel(r, ts) => {
            let decl = sig.rels.get(*r).ok_or_else(|| Error::UnknownSymbol(format!("#{r}")))?;
            if decl.sorts.len() != ts.len() {
                return Err(Error::Arity { name: decl.name.clone(), expected: decl.sorts.len(), got: ts.len() });
            }
            for (t, want) in ts.iter().zip(&decl.sorts) {
                if check_term(sig, ctx, t)? != *want {
                    return Err(Error::Sort(format!("argument {} of `{}` has the wrong sort", sig.term(t), decl.name)));
                }
            }
            Ok(())
        }
        Atom::Top => Ok(()),
        Atom::Def(t) => check_term(sig, ctx, t).map(|_| ()),
    }
}

pub fn check_formula(sig: &Signature, ctx: &Context, phi: &Formula) -> Result<()> {
    phi.0.iter().try_for_each(|a| check_atom(sig, ctx, a))
}

pub fn check_sequent(sig: &Signature, seq: &Sequent) -> Result<()> {
    Context::new(seq.ctx.vars.clone())?;
    check_formula(sig, &seq.ctx, &seq.premise)?;
    check_formula(sig, &seq.ctx, &seq.conclusion)
}
