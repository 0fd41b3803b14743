//! Premise matching as a conjunctive query over operation and relation tables.

use crate::structure::{ElemId, PartialStructure};
use crate::syntax::{Atom, Context, Formula, FuncId, RelId, SortId, Term};
use std::collections::BTreeMap;

/// A term with variables resolved to context positions.
#[derive(Debug, Clone)]
pub enum CTerm {
    Var(usize),
    App(FuncId, Vec<CTerm>, Term),
}

impl CTerm {
    pub fn compile(ctx: &Context, t: &Term) -> CTerm {
        match t {
            Term::Var(x, _) => CTerm::Var(ctx.index_of(x).expect("variable in context")),
            Term::App(f, args) => CTerm::App(*f, args.iter().map(|a| CTerm::compile(ctx, a)).collect(), t.clone()),
        }
    }

    pub fn eval(&self, s: &PartialStructure, asg: &[ElemId]) -> Option<ElemId> {
        match self {
            CTerm::Var(i) => Some(asg[*i]),
            CTerm::App(f, args, _) => {
                let vals = args.iter().map(|a| a.eval(s, asg)).collect::<Option<Vec<_>>>()?;
                s.func(*f, &vals)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum CAtom {
    Eq(CTerm, CTerm),
    Rel(RelId, Vec<CTerm>),
}

impl CAtom {
    pub fn compile_formula(ctx: &Context, phi: &Formula) -> Vec<CAtom> {
        phi.normalized()
            .0
            .iter()
            .map(|a| match a {
                Atom::Eq(s, t) => CAtom::Eq(CTerm::compile(ctx, s), CTerm::compile(ctx, t)),
                Atom::Rel(r, ts) => CAtom::Rel(*r, ts.iter().map(|t| CTerm::compile(ctx, t)).collect()),
                Atom::Top | Atom::Def(_) => unreachable!("normalized"),
            })
            .collect()
    }

    pub fn holds(&self, s: &PartialStructure, asg: &[ElemId]) -> bool {
        match self {
            CAtom::Eq(a, b) => match (a.eval(s, asg), b.eval(s, asg)) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            },
            CAtom::Rel(r, ts) => {
                ts.iter().map(|t| t.eval(s, asg)).collect::<Option<Vec<_>>>().is_some_and(|v| s.rels[*r].contains(&v))
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Constraint {
    Func(FuncId, Vec<usize>, usize),
    Rel(RelId, Vec<usize>),
}

/// Compiled premise: query variables are context variables plus one per subterm.
#[derive(Debug, Clone)]
pub struct Query {
    nq: usize,
    ctx_q: Vec<usize>,
    ctx_sorts: Vec<SortId>,
    constraints: Vec<Constraint>,
    funcs_used: Vec<FuncId>,
}

struct Builder {
    parent: Vec<usize>,
    nodes: BTreeMap<(FuncId, Vec<usize>), usize>,
    cons: Vec<Constraint>,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, q: usize) -> usize {
        let mut r = q;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        self.parent[q] = r;
        r
    }

    fn term(&mut self, t: &CTerm) -> usize {
        match t {
            CTerm::Var(i) => *i,
            CTerm::App(f, args, _) => {
                let qs: Vec<usize> = args.iter().map(|a| self.term(a)).collect();
                if let Some(&q) = self.nodes.get(&(*f, qs.clone())) {
                    return q;
                }
                let q = self.fresh();
                self.nodes.insert((*f, qs.clone()), q);
                self.cons.push(Constraint::Func(*f, qs, q));
                q
            }
        }
    }
}

impl Query {
    pub fn compile(ctx: &Context, premise: &[CAtom]) -> Query {
        let n = ctx.len();
        let mut b = Builder { parent: (0..n).collect(), nodes: BTreeMap::new(), cons: Vec::new() };
        let mut eqs = Vec::new();
        for a in premise {
            match a {
                CAtom::Eq(s, t) => {
                    let (x, y) = (b.term(s), b.term(t));
                    eqs.push((x, y));
                }
                CAtom::Rel(r, ts) => {
                    let qs = ts.iter().map(|t| b.term(t)).collect();
                    b.cons.push(Constraint::Rel(*r, qs));
                }
            }
        }
        for (x, y) in eqs {
            let (rx, ry) = (b.find(x), b.find(y));
            if rx != ry {
                b.parent[rx.max(ry)] = rx.min(ry);
            }
        }
        // compact representatives to 0..nq
        let total = b.parent.len();
        let mut index = BTreeMap::new();
        let mut rep = vec![0; total];
        for (q, slot) in rep.iter_mut().enumerate() {
            let r = b.find(q);
            let next = index.len();
            *slot = *index.entry(r).or_insert(next);
        }
        let constraints: Vec<Constraint> = b
            .cons
            .iter()
            .map(|c| match c {
                Constraint::Func(f, a, o) => Constraint::Func(*f, a.iter().map(|q| rep[*q]).collect(), rep[*o]),
                Constraint::Rel(r, a) => Constraint::Rel(*r, a.iter().map(|q| rep[*q]).collect()),
            })
            .collect();
        let mut funcs_used: Vec<FuncId> =
            constraints.iter().filter_map(|c| if let Constraint::Func(f, ..) = c { Some(*f) } else { None }).collect();
        funcs_used.sort();
        funcs_used.dedup();
        Query {
            nq: index.len(),
            ctx_q: (0..n).map(|i| rep[i]).collect(),
            ctx_sorts: ctx.vars.iter().map(|(_, s)| *s).collect(),
            constraints,
            funcs_used,
        }
    }

    /// All assignments of the context satisfying the premise, sorted lexicographically.
    pub fn solve(&self, s: &PartialStructure) -> Vec<Vec<ElemId>> {
        let mut rev: BTreeMap<FuncId, BTreeMap<ElemId, Vec<&Vec<ElemId>>>> = BTreeMap::new();
        for &f in &self.funcs_used {
            let m = rev.entry(f).or_default();
            for (args, v) in &s.funcs[f] {
                m.entry(*v).or_default().push(args);
            }
        }
        let mut st = Solver {
            q: self,
            s,
            rev,
            bind: vec![None; self.nq],
            done: vec![false; self.constraints.len()],
            out: Vec::new(),
        };
        st.go();
        let mut out = st.out;
        out.sort();
        out.dedup();
        out
    }
}

struct Solver<'a> {
    q: &'a Query,
    s: &'a PartialStructure,
    rev: BTreeMap<FuncId, BTreeMap<ElemId, Vec<&'a Vec<ElemId>>>>,
    bind: Vec<Option<ElemId>>,
    done: Vec<bool>,
    out: Vec<Vec<ElemId>>,
}

impl<'a> Solver<'a> {
    fn cost(&self, c: &Constraint) -> usize {
        match c {
            Constraint::Func(_, args, o) => {
                let unbound = args.iter().filter(|a| self.bind[**a].is_none()).count();
                if unbound == 0 {
                    0
                } else if self.bind[*o].is_some() {
                    1
                } else {
                    2 + unbound
                }
            }
            Constraint::Rel(_, args) => {
                if args.iter().all(|a| self.bind[*a].is_some()) {
                    0
                } else {
                    10
                }
            }
        }
    }

    /// Binds `qs` to `vals` where consistent; returns the newly bound positions or None.
    fn unify(&mut self, qs: &[usize], vals: &[ElemId]) -> Option<Vec<usize>> {
        let mut newly = Vec::new();
        for (&q, &v) in qs.iter().zip(vals) {
            match self.bind[q] {
                Some(w) if w != v => {
                    for &n in &newly {
                        self.bind[n] = None;
                    }
                    return None;
                }
                Some(_) => {}
                None => {
                    self.bind[q] = Some(v);
                    newly.push(q);
                }
            }
        }
        Some(newly)
    }

    fn go(&mut self) {
        let pick = (0..self.q.constraints.len())
            .filter(|&i| !self.done[i])
            .min_by_key(|&i| (self.cost(&self.q.constraints[i]), i));
        let Some(i) = pick else {
            self.finish(0);
            return;
        };
        self.done[i] = true;
        let c = self.q.constraints[i].clone();
        let cost = self.cost(&c);
        match c {
            Constraint::Func(f, args, o) => {
                let mut qs = args.clone();
                qs.push(o);
                let cands: Vec<Vec<ElemId>> = if cost == 0 {
                    let vals: Vec<ElemId> = args.iter().map(|a| self.bind[*a].unwrap()).collect();
                    match self.s.func(f, &vals) {
                        Some(v) => {
                            let mut t = vals;
                            t.push(v);
                            vec![t]
                        }
                        None => vec![],
                    }
                } else if cost == 1 {
                    let v = self.bind[o].unwrap();
                    self.rev[&f]
                        .get(&v)
                        .map(|ts| {
                            ts.iter()
                                .map(|a| {
                                    let mut t = (*a).clone();
                                    t.push(v);
                                    t
                                })
                                .collect()
                        })
                        .unwrap_or_default()
                } else {
                    self.s.funcs[f]
                        .iter()
                        .map(|(a, v)| {
                            let mut t = a.clone();
                            t.push(*v);
                            t
                        })
                        .collect()
                };
                for t in cands {
                    if let Some(newly) = self.unify(&qs, &t) {
                        self.go();
                        for n in newly {
                            self.bind[n] = None;
                        }
                    }
                }
            }
            Constraint::Rel(r, args) => {
                let tuples: Vec<Vec<ElemId>> = self.s.rels[r].iter().cloned().collect();
                for t in tuples {
                    if let Some(newly) = self.unify(&args, &t) {
                        self.go();
                        for n in newly {
                            self.bind[n] = None;
                        }
                    }
                }
            }
        }
        self.done[i] = false;
    }

    /// Enumerates any context variables left unconstrained.
    fn finish(&mut self, k: usize) {
        if k == self.q.ctx_q.len() {
            self.out.push(self.q.ctx_q.iter().map(|q| self.bind[*q].unwrap()).collect());
            return;
        }
        let q = self.q.ctx_q[k];
        if self.bind[q].is_some() {
            self.finish(k + 1);
            return;
        }
        let sort = self.q.ctx_sorts[k];
        let elems: Vec<ElemId> = self.s.carriers[sort].iter().copied().collect();
        for e in elems {
            self.bind[q] = Some(e);
            self.finish(k + 1);
        }
        self.bind[q] = None;
    }
}
