//! Gauges: a rank ♯ on raw terms plus defining sets, verified with the prover.

mod ncat;

pub use ncat::{ncat_source, ncat_theory, Bd, Ncat, View};

use crate::chase::{prove_sequent, ChaseBudget, Verdict};
use crate::decompose::Scale;
use crate::error::{Error, Result};
use crate::syntax::{term_at, Atom, Context, Cursor, Formula, Sequent, Signature, Term, Theory, Tok};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// `♯f(τ1..τn) = max(base, ♯τi for i in args)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpRule {
    pub base: u32,
    pub args: Vec<usize>,
}

/// One element t of a defining set: scale entry `label` instantiated at `sigmas`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningEntry {
    pub label: usize,
    pub sigmas: Vec<Term>,
}

#[derive(Debug, Clone)]
pub enum DefiningSets {
    /// Listed per closed or open term; variables always have the empty set.
    Table(BTreeMap<Term, Vec<DefiningEntry>>),
    /// Generated from normal forms in the theory of strict n-categories.
    Ncat(Ncat),
}

#[derive(Debug, Clone)]
pub struct GaugeRules {
    pub sharp: Vec<SharpRule>,
    pub defining: DefiningSets,
}

impl GaugeRules {
    pub fn sharp(&self, t: &Term) -> u32 {
        match t {
            Term::Var(..) => 0,
            Term::App(f, args) => {
                let r = &self.sharp[*f];
                r.args.iter().map(|&i| self.sharp(&args[i])).fold(r.base, u32::max)
            }
        }
    }

    pub fn defining_set(&self, t: &Term) -> Option<Vec<DefiningEntry>> {
        if let Term::Var(..) = t {
            return Some(Vec::new());
        }
        match &self.defining {
            DefiningSets::Table(m) => m.get(t).cloned(),
            DefiningSets::Ncat(nc) => Some(nc.defining_set(t)),
        }
    }
}

/// ♯ = largest composition index, defining sets from normal forms.
pub fn ncat_gauge_rules(th: &Theory) -> Option<GaugeRules> {
    let nc = Ncat::detect(&th.sig)?;
    let mut sharp = vec![SharpRule { base: 0, args: vec![0] }; th.sig.funcs.len()];
    for k in 1..=nc.n {
        let f = th.sig.func_id(&format!("comp{k}"))?;
        sharp[f] = SharpRule { base: k as u32, args: vec![0, 1] };
    }
    Some(GaugeRules { sharp, defining: DefiningSets::Ncat(nc) })
}

/// Parses
/// ```text
/// gauge NAME {
///   sharp f = 2;                  # constant
///   sharp g = max(1, $1, $2);     # max of a constant and argument ranks
///   define [ctx] term := LABEL(σ1, σ2) & LABEL(...);   # or `:= top;`
/// }
/// ```
/// Symbols without a `sharp` line get `max(0, $1, …, $n)`. Labels name scale entries.
pub fn parse_gauge_rules(th: &Theory, scale: &Scale, src: &str) -> Result<GaugeRules> {
    let sig = &th.sig;
    let mut sharp: Vec<SharpRule> =
        sig.funcs.iter().map(|f| SharpRule { base: 0, args: (0..f.inputs.len()).collect() }).collect();
    let mut table = BTreeMap::new();
    let mut c = Cursor::new(src)?;
    c.keyword("gauge")?;
    c.ident()?;
    c.expect(&Tok::LBrace)?;
    while !c.eat(&Tok::RBrace) {
        let kw = c.ident()?;
        match kw.as_str() {
            "sharp" => {
                let fname = c.ident()?;
                let f = sig.func_id(&fname).ok_or_else(|| Error::UnknownSymbol(fname.clone()))?;
                c.expect(&Tok::Eq)?;
                let rule = if c.is_keyword("max") {
                    c.advance();
                    c.expect(&Tok::LParen)?;
                    let base = c.number()?;
                    let mut args = Vec::new();
                    while c.eat(&Tok::Comma) {
                        c.expect(&Tok::Hash)?;
                        let i = c.number()? as usize;
                        if i == 0 || i > sig.funcs[f].inputs.len() {
                            return c.error(format!("`{fname}` has no argument {i}"));
                        }
                        args.push(i - 1);
                    }
                    c.expect(&Tok::RParen)?;
                    SharpRule { base, args }
                } else {
                    SharpRule { base: c.number()?, args: Vec::new() }
                };
                sharp[f] = rule;
            }
            "define" => {
                let ctx = crate::syntax::context_at(&mut c, sig)?;
                let t = term_at(&mut c, sig, &ctx)?;
                c.expect(&Tok::Colon)?;
                c.expect(&Tok::Eq)?;
                let mut entries = Vec::new();
                if c.is_keyword("top") {
                    c.advance();
                } else {
                    loop {
                        let label = c.ident()?;
                        let Some(li) = scale.entries.iter().position(|e| e.label == label) else {
                            return c.error(format!("unknown scale label `{label}`"));
                        };
                        c.expect(&Tok::LParen)?;
                        let mut sigmas = Vec::new();
                        if c.peek() != Some(&Tok::RParen) {
                            loop {
                                sigmas.push(term_at(&mut c, sig, &ctx)?);
                                if !c.eat(&Tok::Comma) {
                                    break;
                                }
                            }
                        }
                        c.expect(&Tok::RParen)?;
                        if sigmas.len() != scale.entries[li].ctx.len() {
                            return c.error(format!("scale entry `{label}` takes {} terms", scale.entries[li].ctx.len()));
                        }
                        entries.push(DefiningEntry { label: li, sigmas });
                        if !c.eat(&Tok::Amp) {
                            break;
                        }
                    }
                }
                table.insert(t, entries);
            }
            other => return c.error(format!("unknown gauge declaration `{other}`")),
        }
        c.expect(&Tok::Semi)?;
    }
    Ok(GaugeRules { sharp, defining: DefiningSets::Table(table) })
}

/// The right-hand side of the gauge bisequent for τ.
pub fn defining_formula(sig: &Signature, scale: &Scale, entries: &[DefiningEntry]) -> Result<Formula> {
    let mut atoms = Vec::new();
    for t in entries {
        let ent = &scale.entries[t.label];
        let map: BTreeMap<String, Term> = ent.ctx.vars.iter().map(|(z, _)| z.clone()).zip(t.sigmas.iter().cloned()).collect();
        atoms.extend(ent.formula.substitute(sig, &map)?.0);
        atoms.extend(t.sigmas.iter().map(|s| Atom::Def(s.clone())));
    }
    Ok(Formula(atoms))
}

#[derive(Debug, Clone, Serialize)]
pub struct TermCheck {
    pub term: String,
    pub sharp: u32,
    pub defining: String,
    pub forward: Option<Verdict>,
    pub backward: Option<Verdict>,
    pub decreasing: bool,
}

impl TermCheck {
    pub fn certified(&self) -> bool {
        self.forward == Some(Verdict::Valid) && self.backward == Some(Verdict::Valid) && self.decreasing
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertStatus {
    Certified,
    /// Some verdict is Unknown or a defining set is missing.
    Incomplete,
    /// Some verdict is Invalid or a ♯ fails to decrease.
    Refuted,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeCertificate {
    pub status: CertStatus,
    pub checks: Vec<TermCheck>,
}

/// Checks one term: both directions of `τ↓ ⊣⊢ ⋀ ζ(σ) ∧ σ↓` and the ♯ decrease.
pub fn check_term(th: &Theory, scale: &Scale, rules: &GaugeRules, t: &Term, budget: ChaseBudget) -> Result<TermCheck> {
    let sig = &th.sig;
    let sh = rules.sharp(t);
    let Some(entries) = rules.defining_set(t) else {
        return Ok(TermCheck {
            term: sig.term(t),
            sharp: sh,
            defining: "missing".into(),
            forward: None,
            backward: None,
            decreasing: false,
        });
    };
    let ctx: Context = t.min_context();
    let rhs = defining_formula(sig, scale, &entries)?;
    let def = Formula(vec![Atom::Def(t.clone())]);
    let fwd = Sequent { ctx: ctx.clone(), premise: def.clone(), conclusion: rhs.clone() };
    let bwd = Sequent { ctx, premise: rhs.clone(), conclusion: def };
    let decreasing = entries.iter().all(|e| e.sigmas.iter().all(|s| rules.sharp(s) < sh));
    let forward = prove_sequent(th, &fwd, budget).verdict;
    let backward = prove_sequent(th, &bwd, budget).verdict;
    Ok(TermCheck {
        term: sig.term(t),
        sharp: sh,
        defining: if rhs.0.is_empty() { "top".into() } else { sig.formula(&rhs) },
        forward: Some(forward),
        backward: Some(backward),
        decreasing,
    })
}

pub fn check_gauge(th: &Theory, scale: &Scale, rules: &GaugeRules, terms: &[Term], budget: ChaseBudget) -> Result<GaugeCertificate> {
    let checks = terms.par_iter().map(|t| check_term(th, scale, rules, t, budget)).collect::<Result<Vec<_>>>()?;
    let refuted = checks.iter().any(|c| {
        c.forward == Some(Verdict::Invalid) || c.backward == Some(Verdict::Invalid) || (c.forward.is_some() && !c.decreasing)
    });
    let status = if refuted {
        CertStatus::Refuted
    } else if checks.iter().all(TermCheck::certified) {
        CertStatus::Certified
    } else {
        CertStatus::Incomplete
    };
    Ok(GaugeCertificate { status, checks })
}

/// All terms of depth at most `depth` over the given variables, ordered by depth then structure.
pub fn terms_up_to(sig: &Signature, vars: &[Term], depth: usize) -> Vec<Term> {
    let mut levels: Vec<Vec<Term>> = vec![vars.to_vec()];
    for _ in 0..depth {
        let all: Vec<Term> = levels.iter().flatten().cloned().collect();
        let prev_len: usize = levels.iter().map(Vec::len).sum::<usize>() - levels.last().unwrap().len();
        let mut next = Vec::new();
        for (f, d) in sig.funcs.iter().enumerate() {
            let ar = d.inputs.len();
            if ar == 0 {
                if levels.len() == 1 {
                    next.push(Term::App(f, Vec::new()));
                }
                continue;
            }
            // tuples over `all` with at least one argument from the newest level
            let mut idx = vec![0usize; ar];
            loop {
                if idx.iter().any(|&i| i >= prev_len) {
                    let args: Vec<Term> = idx.iter().map(|&i| all[i].clone()).collect();
                    if args.iter().zip(&d.inputs).all(|(a, s)| a.sort(sig) == *s) {
                        next.push(Term::App(f, args));
                    }
                }
                let mut k = ar;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < all.len() {
                        break;
                    }
                    idx[k] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        levels.push(next);
    }
    levels.into_iter().flatten().collect()
}

/// The gauge of the toy theory: ♯a = ♯b = 0, ♯c = 1, ♯d = 2, with
/// T(c) = {(a, b)} and T(d) = {(a, c)} over the equational scale.
pub fn toy_gauge_rules(th: &Theory) -> Option<GaugeRules> {
    let sig = &th.sig;
    let [a, b, c, d] = ["a", "b", "c", "d"].map(|n| sig.func_id(n));
    let (a, b, c, d) = (a?, b?, c?, d?);
    let mut sharp = vec![SharpRule { base: 0, args: Vec::new() }; sig.funcs.len()];
    sharp[c].base = 1;
    sharp[d].base = 2;
    let k = Term::constant;
    let mut table = BTreeMap::new();
    table.insert(k(a), Vec::new());
    table.insert(k(b), Vec::new());
    table.insert(k(c), vec![DefiningEntry { label: 0, sigmas: vec![k(a), k(b)] }]);
    table.insert(k(d), vec![DefiningEntry { label: 0, sigmas: vec![k(a), k(c)] }]);
    Some(GaugeRules { sharp, defining: DefiningSets::Table(table) })
}

/// γ = max ♯ over the given terms, plus one.
pub fn gamma(rules: &GaugeRules, terms: &[Term]) -> u32 {
    terms.iter().map(|t| rules.sharp(t)).max().unwrap_or(0) + 1
}
