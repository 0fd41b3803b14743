//! Scales, the locally orthogonal factorization step and canonical decompositions.

use crate::chase::{chase, ChaseBudget, ChaseStats, GroundAtom, Presentation};
use crate::error::{Error, Result};
use crate::structure::{check_hom, ElemId, Hom, PartialStructure};
use crate::syntax::{context_at, formula_at, Atom, Context, Cursor, Formula, Term, Theory, Tok};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleEntry {
    pub label: String,
    pub ctx: Context,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scale {
    pub entries: Vec<ScaleEntry>,
}

/// One entry `(z1, z2). z1 = z2` per sort, labelled by the sort name.
pub fn equational_scale(th: &Theory) -> Scale {
    let entries = th
        .sig
        .sorts
        .iter()
        .enumerate()
        .map(|(s, name)| ScaleEntry {
            label: name.clone(),
            ctx: Context { vars: vec![("z1".into(), s), ("z2".into(), s)] },
            formula: Formula(vec![Atom::Eq(Term::var("z1", s), Term::var("z2", s))]),
        })
        .collect();
    Scale { entries }
}

/// Parses `scale { LABEL [ctx] formula; ... }`.
pub fn parse_scale(th: &Theory, src: &str) -> Result<Scale> {
    let mut c = Cursor::new(src)?;
    c.keyword("scale")?;
    c.expect(&Tok::LBrace)?;
    let mut entries = Vec::new();
    while !c.eat(&Tok::RBrace) {
        let label = c.ident()?;
        let ctx = context_at(&mut c, &th.sig)?;
        let formula = formula_at(&mut c, &th.sig, &ctx)?;
        c.expect(&Tok::Semi)?;
        entries.push(ScaleEntry { label, ctx, formula });
    }
    if !c.at_end() {
        return c.error("unexpected trailing input");
    }
    Ok(Scale { entries })
}

/// A scale instance that was forced: entry index and assignment in context order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiredMatch {
    pub entry: usize,
    pub assignment: Vec<ElemId>,
}

#[derive(Debug, Clone)]
pub struct StepResult {
    /// The unit `A → A′`.
    pub e: Hom,
    /// The induced `A′ → X`.
    pub f_next: Hom,
    pub fired: Vec<FiredMatch>,
    pub stats: ChaseStats,
}

/// Forces every scale instance that holds in `X` along `f`, chases, and returns the
/// quotient unit together with the induced map to `X`.
pub fn scale_step(th: &Theory, scale: &Scale, f: &Hom, budget: ChaseBudget) -> Result<StepResult> {
    let (a, x) = (&*f.source, &*f.target);
    let mut fired = Vec::new();
    let mut forced = Vec::new();
    for (i, ent) in scale.entries.iter().enumerate() {
        for u in a.assignments(&ent.ctx) {
            let fu = u.iter().map(|(k, v)| (k.clone(), f.map[v])).collect();
            if x.holds(&fu, &ent.formula) && !a.holds(&u, &ent.formula) {
                fired.push(FiredMatch { entry: i, assignment: ent.ctx.vars.iter().map(|(z, _)| u[z]).collect() });
                forced.extend(GroundAtom::instantiate(&ent.formula, &u));
            }
        }
    }
    let r = chase(th, &Presentation { base: a.clone(), forced }, budget);
    if !r.is_complete() {
        return Err(Error::BudgetExceeded);
    }
    // values in X of every id ever used, fresh ids in creation order
    let mut val: BTreeMap<ElemId, ElemId> = a.elements().map(|e| (e, f.map[&e])).collect();
    for rec in &r.fresh_log {
        let args: Vec<ElemId> = rec.args.iter().map(|e| val[e]).collect();
        let v = x.func(rec.func, &args).ok_or_else(|| {
            Error::Invalid(format!(
                "fresh element {} = {}(..) has no value in the target",
                rec.id, th.sig.funcs[rec.func].name
            ))
        })?;
        val.insert(rec.id, v);
    }
    let mut fmap: BTreeMap<ElemId, ElemId> = BTreeMap::new();
    for (id, rep) in &r.canon {
        let v = val[id];
        if let Some(w) = fmap.insert(*rep, v) {
            if w != v {
                return Err(Error::Invalid(format!("class of {rep} has two images in the target")));
            }
        }
    }
    let a2 = Arc::new(r.model);
    let e = Hom::new(f.source.clone(), a2.clone(), r.quotient);
    let f_next = Hom::new(a2, f.target.clone(), fmap);
    check_hom(&e)?;
    check_hom(&f_next)?;
    Ok(StepResult { e, f_next, fired, stats: r.stats })
}

#[derive(Debug, Clone)]
pub struct TraceStep {
    /// `A_α`.
    pub model: Arc<PartialStructure>,
    /// `f_α : A_α → X`.
    pub leg: Hom,
    /// `A_α → A_{α+1}`.
    pub step: Hom,
    pub fired: Vec<FiredMatch>,
    pub stats: ChaseStats,
    pub iso: bool,
}

#[derive(Debug, Clone)]
pub struct DecompositionTrace {
    pub steps: Vec<TraceStep>,
    /// Leg of the last model reached.
    pub last_leg: Hom,
    /// First α whose step is an isomorphism; `None` if not reached.
    pub stabilization_index: Option<usize>,
}

impl DecompositionTrace {
    pub fn decnum(&self) -> Option<usize> {
        self.stabilization_index
    }

    /// Models `A_0, A_1, …` up to the last one reached.
    pub fn models(&self) -> Vec<Arc<PartialStructure>> {
        let mut v: Vec<_> = self.steps.iter().map(|s| s.model.clone()).collect();
        if self.stabilization_index.is_none() {
            v.push(self.last_leg.source.clone());
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecompBudget {
    pub chase: ChaseBudget,
    pub max_steps: usize,
}

impl Default for DecompBudget {
    fn default() -> Self {
        DecompBudget { chase: ChaseBudget::default(), max_steps: 64 }
    }
}

fn require_model(th: &Theory, s: &PartialStructure, what: &str) -> Result<()> {
    s.validate(&th.sig)?;
    if let Err((i, a)) = s.is_model(th) {
        let asg: Vec<String> = a.iter().map(|(k, v)| format!("{k}={}", s.name(*v))).collect();
        return Err(Error::Invalid(format!(
            "{what} is not a model: `{}` fails at [{}]",
            th.sig.sequent(&th.sequents[i]),
            asg.join(", ")
        )));
    }
    Ok(())
}

/// Iterates [`scale_step`] until a step is an isomorphism or `max_steps` steps were taken.
pub fn canonical_decomposition(th: &Theory, scale: &Scale, f: &Hom, budget: DecompBudget) -> Result<DecompositionTrace> {
    require_model(th, &f.source, "source")?;
    require_model(th, &f.target, "target")?;
    check_hom(f)?;
    let mut steps = Vec::new();
    let mut leg = f.clone();
    let mut stab = None;
    for alpha in 0..=budget.max_steps {
        let r = scale_step(th, scale, &leg, budget.chase)?;
        let iso = r.e.is_iso();
        steps.push(TraceStep {
            model: leg.source.clone(),
            leg: leg.clone(),
            step: r.e.clone(),
            fired: r.fired,
            stats: r.stats,
            iso,
        });
        if iso {
            stab = Some(alpha);
            break;
        }
        leg = r.f_next;
        if alpha == budget.max_steps {
            break;
        }
    }
    Ok(DecompositionTrace { steps, last_leg: leg, stabilization_index: stab })
}

pub fn decnum(th: &Theory, scale: &Scale, f: &Hom, budget: DecompBudget) -> Result<usize> {
    canonical_decomposition(th, scale, f, budget)?.decnum().ok_or(Error::NotStabilized(budget.max_steps))
}

/// `f = mono ∘ strong_epi` with the equational scale.
pub fn image_factorization(th: &Theory, f: &Hom, budget: DecompBudget) -> Result<(Hom, Hom)> {
    let trace = canonical_decomposition(th, &equational_scale(th), f, budget)?;
    let k = trace.decnum().ok_or(Error::NotStabilized(budget.max_steps))?;
    let mut epi = Hom::identity(f.source.clone());
    for s in &trace.steps[..k] {
        epi = epi.then(&s.step)?;
    }
    let mono = trace.steps[k].leg.clone();
    debug_assert!(mono.is_injective());
    Ok((epi, mono))
}

/// The three stabilization tests at step α of a trace over the equational scale:
/// (step is iso, leg is injective, model satisfies the theory).
pub fn stabilization_checks(th: &Theory, step: &TraceStep) -> (bool, bool, bool) {
    (step.iso, step.leg.is_injective(), step.model.is_model(th).is_ok())
}

#[derive(Debug, Clone, Serialize)]
pub struct FiredJson {
    pub label: String,
    pub assignment: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StepJson {
    pub index: usize,
    pub elements: usize,
    pub merges: usize,
    pub fresh: usize,
    pub iso: bool,
    pub fired_matches: Vec<FiredJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceJson {
    pub version: u32,
    pub steps: Vec<StepJson>,
    pub stabilized: bool,
    pub decnum: Option<usize>,
}

pub fn trace_json(scale: &Scale, trace: &DecompositionTrace) -> TraceJson {
    let steps = trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let names = s.model.display_names();
            StepJson {
                index: i,
                elements: s.model.len(),
                merges: s.stats.merges,
                fresh: s.stats.fresh,
                iso: s.iso,
                fired_matches: s
                    .fired
                    .iter()
                    .map(|m| FiredJson {
                        label: scale.entries[m.entry].label.clone(),
                        assignment: m.assignment.iter().map(|e| names[e].clone()).collect(),
                    })
                    .collect(),
            }
        })
        .collect();
    TraceJson { version: 1, steps, stabilized: trace.stabilization_index.is_some(), decnum: trace.stabilization_index }
}

/// DOT rendering of the tower `A_0 → A_1 → … → X`.
pub fn trace_dot(trace: &DecompositionTrace) -> String {
    let mut out = String::from("digraph tower {\n  rankdir=LR;\n");
    let models = trace.models();
    for (i, m) in models.iter().enumerate() {
        let names: Vec<String> = m.display_names().into_values().collect();
        out.push_str(&format!("  A{i} [shape=box,label=\"A{i}\\n{}\"];\n", names.join(" ")));
    }
    out.push_str(&format!("  X [shape=box,label=\"X\\n{} elements\"];\n", trace.last_leg.target.len()));
    for i in 0..models.len().saturating_sub(1) {
        let st = &trace.steps[i];
        out.push_str(&format!("  A{i} -> A{} [label=\"-{} +{}\"];\n", i + 1, st.stats.merges, st.stats.fresh));
    }
    out.push_str(&format!("  A{} -> X;\n}}\n", models.len() - 1));
    out
}
