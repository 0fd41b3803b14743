//! Finite partial structures, evaluation, satisfaction and homomorphisms.

mod format;
mod homs;

pub use format::{
    hom_from_json, hom_to_json, parse_hom, parse_models, print_hom, print_model, structure_from_json,
    structure_to_json, CarrierJson, FuncEntryJson, HomDoc, HomJson, ModelDoc, RelEntryJson, StructureJson,
};
pub use homs::{check_hom, enumerate_homs, find_isomorphism, is_hom, Hom};

use crate::error::{Error, Result};
use crate::syntax::{Atom, Context, Formula, Sequent, Signature, SortId, Term, Theory};
use std::collections::{BTreeMap, BTreeSet};

pub type ElemId = usize;

/// Variable name to element id.
pub type Assignment = BTreeMap<String, ElemId>;

/// A finite partial Σ-structure. Element ids are unique across sorts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialStructure {
    pub carriers: Vec<BTreeSet<ElemId>>,
    pub funcs: Vec<BTreeMap<Vec<ElemId>, ElemId>>,
    pub rels: Vec<BTreeSet<Vec<ElemId>>>,
    pub sort_of: BTreeMap<ElemId, SortId>,
    pub names: BTreeMap<ElemId, String>,
}

impl PartialStructure {
    pub fn empty(sig: &Signature) -> Self {
        PartialStructure {
            carriers: vec![BTreeSet::new(); sig.sorts.len()],
            funcs: vec![BTreeMap::new(); sig.funcs.len()],
            rels: vec![BTreeSet::new(); sig.rels.len()],
            sort_of: BTreeMap::new(),
            names: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.sort_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sort_of.is_empty()
    }

    pub fn next_id(&self) -> ElemId {
        self.sort_of.keys().next_back().map_or(0, |m| m + 1)
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.sort_of.keys().copied()
    }

    pub fn contains(&self, e: ElemId) -> bool {
        self.sort_of.contains_key(&e)
    }

    pub fn add_elem(&mut self, sort: SortId) -> ElemId {
        let id = self.next_id();
        self.insert_elem(id, sort);
        id
    }

    pub fn add_named(&mut self, sort: SortId, name: &str) -> ElemId {
        let id = self.add_elem(sort);
        self.names.insert(id, name.to_string());
        id
    }

    pub fn insert_elem(&mut self, id: ElemId, sort: SortId) {
        self.carriers[sort].insert(id);
        self.sort_of.insert(id, sort);
    }

    /// Display name: the given name, or `e<id>`.
    pub fn name(&self, e: ElemId) -> String {
        self.names.get(&e).cloned().unwrap_or_else(|| format!("e{e}"))
    }

    pub fn id_of(&self, name: &str) -> Option<ElemId> {
        self.names.iter().find(|(_, n)| *n == name).map(|(id, _)| *id)
    }

    pub fn set_func(&mut self, f: usize, args: Vec<ElemId>, v: ElemId) -> Result<()> {
        match self.funcs[f].get(&args) {
            Some(w) if *w != v => Err(Error::Structure(format!("operation #{f} assigned twice on {args:?}"))),
            _ => {
                self.funcs[f].insert(args, v);
                Ok(())
            }
        }
    }

    pub fn add_rel(&mut self, r: usize, args: Vec<ElemId>) {
        self.rels[r].insert(args);
    }

    pub fn func(&self, f: usize, args: &[ElemId]) -> Option<ElemId> {
        self.funcs[f].get(args).copied()
    }

    /// Checks the structural invariants against a signature.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let bad = |m: String| Err(Error::Structure(m));
        if self.carriers.len() != sig.sorts.len() || self.funcs.len() != sig.funcs.len() || self.rels.len() != sig.rels.len() {
            return bad("table shape does not match signature".into());
        }
        for (s, c) in self.carriers.iter().enumerate() {
            for e in c {
                if self.sort_of.get(e) != Some(&s) {
                    return bad(format!("element {e} listed under the wrong sort"));
                }
            }
        }
        if self.carriers.iter().map(BTreeSet::len).sum::<usize>() != self.sort_of.len() {
            return bad("carrier lists and sort map disagree".into());
        }
        let has = |e: &ElemId, s: SortId| self.sort_of.get(e) == Some(&s);
        for (f, table) in self.funcs.iter().enumerate() {
            let d = &sig.funcs[f];
            for (args, v) in table {
                if args.len() != d.inputs.len() || !args.iter().zip(&d.inputs).all(|(a, s)| has(a, *s)) || !has(v, d.output) {
                    return bad(format!("ill-sorted entry for `{}`", d.name));
                }
            }
        }
        for (r, table) in self.rels.iter().enumerate() {
            let d = &sig.rels[r];
            for args in table {
                if args.len() != d.sorts.len() || !args.iter().zip(&d.sorts).all(|(a, s)| has(a, *s)) {
                    return bad(format!("ill-sorted tuple for `{}`", d.name));
                }
            }
        }
        Ok(())
    }

    /// Kleene-strict evaluation; `None` is undefined.
    pub fn eval(&self, a: &Assignment, t: &Term) -> Option<ElemId> {
        match t {
            Term::Var(x, _) => a.get(x).copied(),
            Term::App(f, args) => {
                let vals = args.iter().map(|s| self.eval(a, s)).collect::<Option<Vec<_>>>()?;
                self.func(*f, &vals)
            }
        }
    }

    pub fn holds_atom(&self, a: &Assignment, atom: &Atom) -> bool {
        match atom {
            Atom::Top => true,
            Atom::Def(t) => self.eval(a, t).is_some(),
            Atom::Eq(s, t) => match (self.eval(a, s), self.eval(a, t)) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            },
            Atom::Rel(r, ts) => ts
                .iter()
                .map(|t| self.eval(a, t))
                .collect::<Option<Vec<_>>>()
                .is_some_and(|v| self.rels[*r].contains(&v)),
        }
    }

    pub fn holds(&self, a: &Assignment, phi: &Formula) -> bool {
        phi.0.iter().all(|at| self.holds_atom(a, at))
    }

    /// All assignments of `ctx` into the carriers, in lexicographic id order.
    pub fn assignments<'a>(&'a self, ctx: &'a Context) -> Assignments<'a> {
        Assignments::new(self, ctx)
    }

    /// First assignment (lexicographic) satisfying the premise but not the conclusion.
    pub fn counterexample(&self, seq: &Sequent) -> Option<Assignment> {
        self.assignments(&seq.ctx).find(|a| self.holds(a, &seq.premise) && !self.holds(a, &seq.conclusion))
    }

    pub fn validates(&self, seq: &Sequent) -> bool {
        self.counterexample(seq).is_none()
    }

    /// `Ok(())` if every sequent is valid, else the first failing sequent index and assignment.
    pub fn is_model(&self, th: &Theory) -> std::result::Result<(), (usize, Assignment)> {
        for (i, seq) in th.sequents.iter().enumerate() {
            if let Some(a) = self.counterexample(seq) {
                return Err((i, a));
            }
        }
        Ok(())
    }

    /// Copy with elements renamed by `f` (which must be injective on this structure).
    pub fn relabel(&self, f: impl Fn(ElemId) -> ElemId) -> PartialStructure {
        let mut out = PartialStructure {
            carriers: vec![BTreeSet::new(); self.carriers.len()],
            funcs: vec![BTreeMap::new(); self.funcs.len()],
            rels: vec![BTreeSet::new(); self.rels.len()],
            ..Default::default()
        };
        for (&e, &s) in &self.sort_of {
            out.insert_elem(f(e), s);
        }
        for (&e, n) in &self.names {
            out.names.insert(f(e), n.clone());
        }
        for (i, t) in self.funcs.iter().enumerate() {
            for (args, v) in t {
                out.funcs[i].insert(args.iter().map(|&x| f(x)).collect(), f(*v));
            }
        }
        for (i, t) in self.rels.iter().enumerate() {
            for args in t {
                out.rels[i].insert(args.iter().map(|&x| f(x)).collect());
            }
        }
        out
    }
}

/// Odometer over assignments of a context; the last variable varies fastest.
pub struct Assignments<'a> {
    ctx: &'a Context,
    pools: Vec<Vec<ElemId>>,
    idx: Vec<usize>,
    done: bool,
}

impl<'a> Assignments<'a> {
    fn new(s: &'a PartialStructure, ctx: &'a Context) -> Self {
        let pools: Vec<Vec<ElemId>> = ctx.vars.iter().map(|(_, so)| s.carriers[*so].iter().copied().collect()).collect();
        let done = pools.iter().any(Vec::is_empty);
        Assignments { ctx, idx: vec![0; pools.len()], pools, done }
    }
}

impl Iterator for Assignments<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let a = self.ctx.vars.iter().zip(&self.idx).zip(&self.pools).map(|(((x, _), &i), p)| (x.clone(), p[i])).collect();
        let mut k = self.idx.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.idx[k] += 1;
            if self.idx[k] < self.pools[k].len() {
                break;
            }
            self.idx[k] = 0;
        }
        Some(a)
    }
}
