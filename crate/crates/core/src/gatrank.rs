//! Dependency ranks of generalized algebraic theories, the non-descending condition,
//! and the resulting bound on global decomposition numbers.
//!
//! Only the sorts occurring in contexts and result types matter, so a declaration
//! records sort names and nothing else:
//!
//! ```text
//! gat cat {
//!   sort Ob;
//!   sort Mor ctx(Ob, Ob);
//!   op comp ctx(Ob, Ob, Ob, Mor, Mor) : Mor;
//!   axiom ctx(Ob, Ob, Mor) : Mor;
//! }
//! ```
//! The `gat NAME { }` wrapper is optional.

use crate::error::{Error, Result};
use crate::syntax::{Cursor, Tok};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SortDecl {
    pub name: String,
    pub ctx: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpDecl {
    pub name: String,
    pub ctx: Vec<String>,
    pub result: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomDecl {
    pub ctx: Vec<String>,
    pub result: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GatSpec {
    pub name: String,
    pub sorts: Vec<SortDecl>,
    pub ops: Vec<OpDecl>,
    pub axioms: Vec<AxiomDecl>,
}

pub fn parse_gat(src: &str) -> Result<GatSpec> {
    let mut c = Cursor::new(src)?;
    let mut g = GatSpec::default();
    let wrapped = c.is_keyword("gat");
    if wrapped {
        c.keyword("gat")?;
        g.name = c.ident()?;
        c.expect(&Tok::LBrace)?;
    }
    loop {
        if wrapped && c.eat(&Tok::RBrace) {
            break;
        }
        if !wrapped && c.at_end() {
            break;
        }
        let kw = c.ident()?;
        match kw.as_str() {
            "sort" => {
                let name = c.ident()?;
                let ctx = if c.is_keyword("ctx") { ctx(&mut c)? } else { Vec::new() };
                g.sorts.push(SortDecl { name, ctx });
            }
            "op" => {
                let name = c.ident()?;
                let ctx = ctx(&mut c)?;
                c.expect(&Tok::Colon)?;
                g.ops.push(OpDecl { name, ctx, result: c.ident()? });
            }
            "axiom" => {
                let ctx = ctx(&mut c)?;
                c.expect(&Tok::Colon)?;
                g.axioms.push(AxiomDecl { ctx, result: c.ident()? });
            }
            other => return c.error(format!("expected `sort`, `op` or `axiom`, found `{other}`")),
        }
        c.expect(&Tok::Semi)?;
    }
    if !c.at_end() {
        return c.error("trailing input after the closing brace");
    }
    Ok(g)
}

fn ctx(c: &mut Cursor) -> Result<Vec<String>> {
    c.keyword("ctx")?;
    c.expect(&Tok::LParen)?;
    let mut v = Vec::new();
    if !c.eat(&Tok::RParen) {
        loop {
            v.push(c.ident()?);
            if c.eat(&Tok::RParen) {
                break;
            }
            c.expect(&Tok::Comma)?;
        }
    }
    Ok(v)
}

impl GatSpec {
    fn sort_index(&self) -> Result<BTreeMap<&str, usize>> {
        let mut idx = BTreeMap::new();
        for (i, s) in self.sorts.iter().enumerate() {
            if idx.insert(s.name.as_str(), i).is_some() {
                return Err(Error::Duplicate(s.name.clone()));
            }
        }
        let known = |n: &String| if idx.contains_key(n.as_str()) { Ok(()) } else { Err(Error::UnknownSymbol(n.clone())) };
        for s in &self.sorts {
            s.ctx.iter().try_for_each(known)?;
        }
        for o in &self.ops {
            o.ctx.iter().chain([&o.result]).try_for_each(known)?;
        }
        for a in &self.axioms {
            a.ctx.iter().chain([&a.result]).try_for_each(known)?;
        }
        Ok(idx)
    }
}

/// Rank of every sort, in declaration order: 0 for sorts in the empty context,
/// otherwise one more than the largest rank in the context.
pub fn dependency_rank(g: &GatSpec) -> Result<Vec<(String, u32)>> {
    ranks_with_base(g, 0)
}

/// The variant counting sorts in the empty context as rank 1.
/// It exceeds [`dependency_rank`] by exactly one on every sort.
pub fn dependency_rank_from_one(g: &GatSpec) -> Result<Vec<(String, u32)>> {
    ranks_with_base(g, 1)
}

fn ranks_with_base(g: &GatSpec, base: u32) -> Result<Vec<(String, u32)>> {
    let idx = g.sort_index()?;
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done(u32),
    }
    let mut marks = vec![Mark::New; g.sorts.len()];
    fn visit(g: &GatSpec, idx: &BTreeMap<&str, usize>, marks: &mut [Mark], i: usize, base: u32) -> Result<u32> {
        match marks[i] {
            Mark::Done(r) => return Ok(r),
            Mark::Active => return Err(Error::Cycle(g.sorts[i].name.clone())),
            Mark::New => {}
        }
        marks[i] = Mark::Active;
        let mut r = base;
        for b in &g.sorts[i].ctx {
            r = r.max(visit(g, idx, marks, idx[b.as_str()], base)? + 1);
        }
        marks[i] = Mark::Done(r);
        Ok(r)
    }
    (0..g.sorts.len()).map(|i| Ok((g.sorts[i].name.clone(), visit(g, &idx, &mut marks, i, base)?))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Declaration {
    Op(String),
    /// Position among the axioms, from 0.
    Axiom(usize),
}

impl std::fmt::Display for Declaration {
    /// Axioms are numbered from 1 here.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Declaration::Op(o) => write!(f, "op {o}"),
            Declaration::Axiom(i) => write!(f, "axiom {}", i + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub decl: Declaration,
    #[serde(rename = "contextRank")]
    pub context_rank: u32,
    #[serde(rename = "resultRank")]
    pub result_rank: u32,
}

/// Rank of a context: the largest rank of its sorts, 0 when empty.
fn context_rank(ranks: &BTreeMap<&str, u32>, ctx: &[String]) -> u32 {
    ctx.iter().map(|s| ranks[s.as_str()]).max().unwrap_or(0)
}

/// Every op and axiom whose context outranks its result sort.
pub fn non_descending_violations(g: &GatSpec) -> Result<Vec<Violation>> {
    let ranks = dependency_rank(g)?;
    let r: BTreeMap<&str, u32> = ranks.iter().map(|(s, k)| (s.as_str(), *k)).collect();
    let mut out = Vec::new();
    let decls = g
        .ops
        .iter()
        .map(|o| (Declaration::Op(o.name.clone()), &o.ctx, &o.result))
        .chain(g.axioms.iter().enumerate().map(|(i, a)| (Declaration::Axiom(i), &a.ctx, &a.result)));
    for (decl, ctx, result) in decls {
        let (context_rank, result_rank) = (context_rank(&r, ctx), r[result.as_str()]);
        if context_rank > result_rank {
            out.push(Violation { decl, context_rank, result_rank });
        }
    }
    Ok(out)
}

pub fn is_non_descending(g: &GatSpec) -> Result<bool> {
    Ok(non_descending_violations(g)?.is_empty())
}

/// `max rank + 2` for non-descending theories.
pub fn decnum_bound(g: &GatSpec) -> Result<Option<u32>> {
    Ok(rank_report(g)?.bound)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub name: String,
    pub ranks: Vec<(String, u32)>,
    #[serde(rename = "maxRank")]
    pub max_rank: u32,
    #[serde(rename = "nonDescending")]
    pub non_descending: bool,
    pub violations: Vec<Violation>,
    pub bound: Option<u32>,
}

pub fn rank_report(g: &GatSpec) -> Result<RankReport> {
    let ranks = dependency_rank(g)?;
    let violations = non_descending_violations(g)?;
    let max_rank = ranks.iter().map(|(_, r)| *r).max().unwrap_or(0);
    let non_descending = violations.is_empty();
    Ok(RankReport {
        name: g.name.clone(),
        bound: non_descending.then_some(max_rank + 2),
        ranks,
        max_rank,
        non_descending,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_statements_parse() {
        let g = parse_gat("sort Ob; sort Mor ctx(Ob, Ob); op comp ctx(Ob,Ob,Ob,Mor,Mor) : Mor; axiom ctx(Ob,Ob,Mor) : Mor;").unwrap();
        assert_eq!(g.sorts.len(), 2);
        assert_eq!(dependency_rank(&g).unwrap(), vec![("Ob".into(), 0), ("Mor".into(), 1)]);
        assert_eq!(decnum_bound(&g).unwrap(), Some(3));
    }

    #[test]
    fn empty_spec() {
        let g = parse_gat("gat nothing { }").unwrap();
        assert!(is_non_descending(&g).unwrap());
        assert_eq!(decnum_bound(&g).unwrap(), Some(2));
    }

    #[test]
    fn cycles_and_unknown_sorts() {
        let g = parse_gat("sort A ctx(B); sort B ctx(A);").unwrap();
        assert!(matches!(dependency_rank(&g), Err(Error::Cycle(_))));
        let g = parse_gat("sort A ctx(C);").unwrap();
        assert!(matches!(dependency_rank(&g), Err(Error::UnknownSymbol(_))));
        let g = parse_gat("sort A; sort A;").unwrap();
        assert!(matches!(dependency_rank(&g), Err(Error::Duplicate(_))));
    }

    #[test]
    fn parse_errors_have_positions() {
        assert!(matches!(parse_gat("sort A ctx(;"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_gat("gat x { sort A; } sort B;").is_err());
        assert!(parse_gat("rule A;").is_err());
    }
}
