//! Saturation of finite presentations into free models, representing models and a
//! bounded prover for Horn sequents.

mod query;

pub use query::{CAtom, CTerm, Query};

use crate::structure::{Assignment, ElemId, PartialStructure};
use crate::syntax::{Atom, Context, Formula, FuncId, RelId, Sequent, Term, Theory};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChaseBudget {
    pub max_elements: usize,
    pub max_rounds: usize,
}

impl Default for ChaseBudget {
    fn default() -> Self {
        ChaseBudget { max_elements: 10_000, max_rounds: 1_000 }
    }
}

/// A term over elements of a base structure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroundTerm {
    Elem(ElemId),
    App(FuncId, Vec<GroundTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroundAtom {
    Eq(GroundTerm, GroundTerm),
    Rel(RelId, Vec<GroundTerm>),
    Def(GroundTerm),
}

impl GroundTerm {
    /// Instantiates a term by an assignment.
    pub fn instantiate(t: &Term, a: &Assignment) -> GroundTerm {
        match t {
            Term::Var(x, _) => GroundTerm::Elem(a[x]),
            Term::App(f, args) => GroundTerm::App(*f, args.iter().map(|s| GroundTerm::instantiate(s, a)).collect()),
        }
    }
}

impl GroundAtom {
    /// Ground atoms of `phi` under `a`; `Top` disappears.
    pub fn instantiate(phi: &Formula, a: &Assignment) -> Vec<GroundAtom> {
        phi.0
            .iter()
            .filter_map(|at| match at {
                Atom::Top => None,
                Atom::Eq(s, t) => Some(GroundAtom::Eq(GroundTerm::instantiate(s, a), GroundTerm::instantiate(t, a))),
                Atom::Def(t) => Some(GroundAtom::Def(GroundTerm::instantiate(t, a))),
                Atom::Rel(r, ts) => Some(GroundAtom::Rel(*r, ts.iter().map(|t| GroundTerm::instantiate(t, a)).collect())),
            })
            .collect()
    }
}

/// A base structure together with atoms to be forced on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub base: PartialStructure,
    pub forced: Vec<GroundAtom>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChaseStatus {
    Complete,
    BudgetExceeded,
    /// Halted by an observer before saturation.
    Stopped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreshOrigin {
    /// Created while firing `sequent` at `assignment` (context order), materializing `term`.
    Sequent { sequent: usize, term: Term, assignment: Vec<ElemId> },
    /// Created while forcing the given atom of the presentation.
    Forced { atom: usize },
}

/// A fresh element `id = func(args)`; `args` are canonical at creation time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreshRecord {
    pub id: ElemId,
    pub func: FuncId,
    pub args: Vec<ElemId>,
    pub origin: FreshOrigin,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ChaseStats {
    pub rounds: usize,
    pub firings: usize,
    pub merges: usize,
    pub fresh: usize,
    pub elements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChaseResult {
    pub model: PartialStructure,
    /// Base id to model id.
    pub quotient: BTreeMap<ElemId, ElemId>,
    pub fresh_log: Vec<FreshRecord>,
    pub status: ChaseStatus,
    pub stats: ChaseStats,
    /// Representative of every id ever used (base and fresh).
    pub canon: BTreeMap<ElemId, ElemId>,
}

impl ChaseResult {
    pub fn is_complete(&self) -> bool {
        self.status == ChaseStatus::Complete
    }
}

struct Compiled {
    ctx_len: usize,
    conclusion: Vec<CAtom>,
    query: Query,
}

fn compile(seq: &Sequent) -> Compiled {
    let premise = CAtom::compile_formula(&seq.ctx, &seq.premise);
    Compiled {
        ctx_len: seq.ctx.len(),
        conclusion: CAtom::compile_formula(&seq.ctx, &seq.conclusion),
        query: Query::compile(&seq.ctx, &premise),
    }
}

struct Engine<'a> {
    th: &'a Theory,
    s: PartialStructure,
    parent: Vec<ElemId>,
    /// Table entries mentioning each id, as argument or value; may hold stale keys.
    uses: Vec<Vec<(FuncId, Vec<ElemId>)>>,
    /// Ids that stopped being representatives since the last rebuild.
    pending: Vec<ElemId>,
    changed: bool,
    fresh_log: Vec<FreshRecord>,
    stats: ChaseStats,
}

/// Read access to an in-progress chase.
pub struct ChaseView<'a> {
    pub structure: &'a PartialStructure,
    parent: &'a [ElemId],
}

impl ChaseView<'_> {
    pub fn canon(&self, mut e: ElemId) -> ElemId {
        while self.parent[e] != e {
            e = self.parent[e];
        }
        e
    }
}

impl<'a> Engine<'a> {
    fn new(th: &'a Theory, base: &PartialStructure) -> Engine<'a> {
        let n = base.next_id();
        let mut uses = vec![Vec::new(); n];
        for (f, table) in base.funcs.iter().enumerate() {
            for (args, &v) in table {
                for &e in args.iter().chain([&v]) {
                    uses[e].push((f, args.clone()));
                }
            }
        }
        Engine {
            th,
            s: base.clone(),
            parent: (0..n).collect(),
            uses,
            pending: Vec::new(),
            changed: false,
            fresh_log: Vec::new(),
            stats: ChaseStats::default(),
        }
    }

    fn insert_entry(&mut self, f: FuncId, args: Vec<ElemId>, v: ElemId) {
        for &e in args.iter().chain([&v]) {
            self.uses[e].push((f, args.clone()));
        }
        self.s.funcs[f].insert(args, v);
    }

    fn view(&self) -> ChaseView<'_> {
        ChaseView { structure: &self.s, parent: &self.parent }
    }

    fn find(&mut self, e: ElemId) -> ElemId {
        let mut r = e;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = e;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn fresh(&mut self, f: FuncId, args: Vec<ElemId>, origin: FreshOrigin) -> ElemId {
        let id = self.parent.len();
        self.parent.push(id);
        self.uses.push(Vec::new());
        let sort = self.th.sig.funcs[f].output;
        self.s.insert_elem(id, sort);
        self.insert_entry(f, args.clone(), id);
        self.fresh_log.push(FreshRecord { id, func: f, args, origin });
        self.stats.fresh += 1;
        self.changed = true;
        id
    }

    /// Unions two classes; the least id stays representative.
    fn union(&mut self, a: ElemId, b: ElemId) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (keep, drop) = (ra.min(rb), ra.max(rb));
        self.parent[drop] = keep;
        let sort = self.s.sort_of.remove(&drop).expect("live element");
        self.s.carriers[sort].remove(&drop);
        if let Some(n) = self.s.names.remove(&drop) {
            self.s.names.entry(keep).or_insert(n);
        }
        self.stats.merges += 1;
        self.pending.push(drop);
        self.changed = true;
    }

    /// Congruence closure: re-canonicalizes every entry that mentions a merged id,
    /// merging the outputs of entries that become congruent.
    fn rebuild(&mut self) {
        if self.pending.is_empty() {
            return;
        }
        while let Some(d) = self.pending.pop() {
            for (f, key) in std::mem::take(&mut self.uses[d]) {
                let Some(v) = self.s.funcs[f].remove(&key) else { continue };
                let args: Vec<ElemId> = key.iter().map(|&a| self.find(a)).collect();
                let v = self.find(v);
                match self.s.funcs[f].get(&args) {
                    Some(&w) => self.union(v, w),
                    None => self.insert_entry(f, args, v),
                }
            }
        }
        for r in 0..self.s.rels.len() {
            let old = std::mem::take(&mut self.s.rels[r]);
            let new = old.into_iter().map(|t| t.iter().map(|&a| self.find(a)).collect()).collect();
            self.s.rels[r] = new;
        }
    }

    fn materialize(&mut self, t: &CTerm, asg: &[ElemId], seq: usize) -> ElemId {
        match t {
            CTerm::Var(i) => self.find(asg[*i]),
            CTerm::App(f, args, src) => {
                let vals: Vec<ElemId> = args.iter().map(|a| self.materialize(a, asg, seq)).collect();
                if let Some(v) = self.s.func(*f, &vals) {
                    return self.find(v);
                }
                let o = FreshOrigin::Sequent { sequent: seq, term: src.clone(), assignment: asg.to_vec() };
                self.fresh(*f, vals, o)
            }
        }
    }

    fn materialize_ground(&mut self, t: &GroundTerm, atom: usize) -> ElemId {
        match t {
            GroundTerm::Elem(e) => self.find(*e),
            GroundTerm::App(f, args) => {
                let vals: Vec<ElemId> = args.iter().map(|a| self.materialize_ground(a, atom)).collect();
                match self.s.func(*f, &vals) {
                    Some(v) => self.find(v),
                    None => self.fresh(*f, vals, FreshOrigin::Forced { atom }),
                }
            }
        }
    }

    fn force(&mut self, atoms: &[GroundAtom]) {
        for (i, a) in atoms.iter().enumerate() {
            match a {
                GroundAtom::Eq(s, t) => {
                    let x = self.materialize_ground(s, i);
                    let y = self.materialize_ground(t, i);
                    self.union(x, y);
                    self.rebuild();
                }
                GroundAtom::Def(t) => {
                    self.materialize_ground(t, i);
                }
                GroundAtom::Rel(r, ts) => {
                    let v: Vec<ElemId> = ts.iter().map(|t| self.materialize_ground(t, i)).collect();
                    let v: Vec<ElemId> = v.into_iter().map(|e| self.find(e)).collect();
                    if self.s.rels[*r].insert(v) {
                        self.changed = true;
                    }
                }
            }
        }
    }

    fn fire(&mut self, seq: usize, c: &Compiled, asg: &[ElemId]) {
        for atom in &c.conclusion {
            match atom {
                CAtom::Eq(s, t) => {
                    let x = self.materialize(s, asg, seq);
                    let y = self.materialize(t, asg, seq);
                    self.union(x, y);
                    self.rebuild();
                }
                CAtom::Rel(r, ts) => {
                    let v: Vec<ElemId> = ts.iter().map(|t| self.materialize(t, asg, seq)).collect();
                    let v: Vec<ElemId> = v.into_iter().map(|e| self.find(e)).collect();
                    if self.s.rels[*r].insert(v) {
                        self.changed = true;
                    }
                }
            }
        }
        self.stats.firings += 1;
    }

    fn run(
        &mut self,
        compiled: &[Compiled],
        budget: ChaseBudget,
        observer: &mut dyn FnMut(&ChaseView) -> bool,
    ) -> ChaseStatus {
        self.rebuild();
        if observer(&self.view()) {
            return ChaseStatus::Stopped;
        }
        loop {
            if self.stats.rounds >= budget.max_rounds {
                return ChaseStatus::BudgetExceeded;
            }
            self.changed = false;
            // Matches are taken against the state at the start of the round, so
            // round k derives exactly the consequences of depth k.
            let round: Vec<_> = compiled.iter().map(|c| c.query.solve(&self.s)).collect();
            for (i, (c, matches)) in compiled.iter().zip(round).enumerate() {
                let before = self.changed;
                self.changed = false;
                for m in matches {
                    debug_assert_eq!(m.len(), c.ctx_len);
                    let asg: Vec<ElemId> = m.iter().map(|&e| self.find(e)).collect();
                    if c.conclusion.iter().all(|a| a.holds(&self.s, &asg)) {
                        continue;
                    }
                    self.fire(i, c, &asg);
                    if self.s.len() > budget.max_elements {
                        self.stats.rounds += 1;
                        if observer(&self.view()) {
                            return ChaseStatus::Stopped;
                        }
                        return ChaseStatus::BudgetExceeded;
                    }
                }
                let fired = self.changed;
                self.changed |= before;
                if fired && observer(&self.view()) {
                    self.stats.rounds += 1;
                    return ChaseStatus::Stopped;
                }
            }
            if !self.changed {
                return ChaseStatus::Complete;
            }
            self.stats.rounds += 1;
        }
    }

    fn finish(mut self, base: &PartialStructure, status: ChaseStatus) -> ChaseResult {
        let quotient = base.elements().map(|e| (e, self.find(e))).collect();
        let canon = (0..self.parent.len())
            .filter(|&e| base.contains(e) || e >= base.next_id())
            .map(|e| (e, self.find(e)))
            .collect();
        self.stats.elements = self.s.len();
        ChaseResult { model: self.s, quotient, fresh_log: self.fresh_log, status, stats: self.stats, canon }
    }
}

/// Saturates `p` under the sequents of `th`.
pub fn chase(th: &Theory, p: &Presentation, budget: ChaseBudget) -> ChaseResult {
    chase_observed(th, p, budget, &mut |_| false)
}

/// Like [`chase`], consulting `observer` after the forced atoms and after each sequent
/// that changed the state; returning `true` stops the chase.
pub fn chase_observed(
    th: &Theory,
    p: &Presentation,
    budget: ChaseBudget,
    observer: &mut dyn FnMut(&ChaseView) -> bool,
) -> ChaseResult {
    let compiled: Vec<Compiled> = th.sequents.iter().map(compile).collect();
    let mut e = Engine::new(th, &p.base);
    e.force(&p.forced);
    let status = if e.s.len() > budget.max_elements {
        ChaseStatus::BudgetExceeded
    } else {
        e.run(&compiled, budget, observer)
    };
    e.finish(&p.base, status)
}

/// Base structure with one generator per context variable (ids in context order).
pub fn generators(th: &Theory, ctx: &Context) -> (PartialStructure, Assignment) {
    let mut base = PartialStructure::empty(&th.sig);
    let mut a = Assignment::new();
    for (x, s) in &ctx.vars {
        a.insert(x.clone(), base.add_named(*s, x));
    }
    (base, a)
}

/// The free model on `ctx` subject to `phi`, and the generic assignment.
pub fn representing_model(th: &Theory, ctx: &Context, phi: &Formula, budget: ChaseBudget) -> (ChaseResult, Assignment) {
    let (base, gens) = generators(th, ctx);
    let p = Presentation { base, forced: GroundAtom::instantiate(phi, &gens) };
    let r = chase(th, &p, budget);
    let generic = gens.into_iter().map(|(x, e)| (x, r.quotient[&e])).collect();
    (r, generic)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Valid,
    Invalid,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProofReport {
    pub verdict: Verdict,
    pub stats: ChaseStats,
}

/// Decides `seq` by chasing the representing model of its premise.
pub fn prove_sequent(th: &Theory, seq: &Sequent, budget: ChaseBudget) -> ProofReport {
    let (base, gens) = generators(th, &seq.ctx);
    let ids: Vec<ElemId> = seq.ctx.vars.iter().map(|(x, _)| gens[x]).collect();
    let p = Presentation { base, forced: GroundAtom::instantiate(&seq.premise, &gens) };
    let concl = CAtom::compile_formula(&seq.ctx, &seq.conclusion);
    let mut holds = |v: &ChaseView| {
        let asg: Vec<ElemId> = ids.iter().map(|&e| v.canon(e)).collect();
        concl.iter().all(|a| a.holds(v.structure, &asg))
    };
    let r = chase_observed(th, &p, budget, &mut holds);
    let verdict = match r.status {
        ChaseStatus::Stopped => Verdict::Valid,
        ChaseStatus::Complete => {
            let asg: Vec<ElemId> = ids.iter().map(|e| r.quotient[e]).collect();
            if concl.iter().all(|a| a.holds(&r.model, &asg)) {
                Verdict::Valid
            } else {
                Verdict::Invalid
            }
        }
        ChaseStatus::BudgetExceeded => Verdict::Unknown,
    };
    ProofReport { verdict, stats: r.stats }
}

/// `σ ⊴ τ`: whenever σ is defined, it equals τ.
pub fn reduces(th: &Theory, ctx: &Context, sigma: &Term, tau: &Term, budget: ChaseBudget) -> ProofReport {
    let seq = Sequent {
        ctx: ctx.clone(),
        premise: Formula(vec![Atom::Def(sigma.clone())]),
        conclusion: Formula(vec![Atom::Eq(sigma.clone(), tau.clone())]),
    };
    prove_sequent(th, &seq, budget)
}
