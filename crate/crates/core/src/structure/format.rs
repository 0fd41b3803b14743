use super::{ElemId, Hom, PartialStructure};
use crate::error::{Error, Result};
use crate::syntax::{Cursor, Signature, Theory, Tok};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::sync::Arc;

/// A named model of a named theory, as read from or written to a `.pm` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDoc {
    pub name: String,
    pub theory: String,
    pub structure: PartialStructure,
}

/// A named homomorphism between named models, as read from a `.phom` file.
#[derive(Debug, Clone)]
pub struct HomDoc {
    pub name: String,
    pub source: String,
    pub target: String,
    pub hom: Hom,
}

impl PartialStructure {
    /// Unique printable names for all elements.
    pub fn display_names(&self) -> BTreeMap<ElemId, String> {
        let mut taken: BTreeSet<String> = self.names.values().cloned().collect();
        let mut out = BTreeMap::new();
        for e in self.elements() {
            let n = match self.names.get(&e) {
                Some(n) => n.clone(),
                None => {
                    let mut n = format!("e{e}");
                    while taken.contains(&n) {
                        n.push('\'');
                    }
                    taken.insert(n.clone());
                    n
                }
            };
            out.insert(e, n);
        }
        out
    }
}

fn perr<T>(c: &Cursor, e: Error) -> Result<T> {
    let (line, col) = c.here();
    Err(Error::Parse { line, col, msg: e.to_string() })
}

fn elem_names(c: &mut Cursor, close: &Tok) -> Result<Vec<String>> {
    let mut v = Vec::new();
    while c.peek() != Some(close) {
        v.push(c.ident()?);
        c.eat(&Tok::Comma);
    }
    Ok(v)
}

/// Parses one or more `model NAME of THEORY { ... }` blocks.
pub fn parse_models(th: &Theory, src: &str) -> Result<Vec<ModelDoc>> {
    let mut c = Cursor::new(src)?;
    let mut out = Vec::new();
    while !c.at_end() {
        out.push(model(&mut c, th)?);
    }
    Ok(out)
}

fn model(c: &mut Cursor, th: &Theory) -> Result<ModelDoc> {
    let sig = &th.sig;
    c.keyword("model")?;
    let name = c.ident()?;
    c.keyword("of")?;
    let theory = c.ident()?;
    if theory != th.name {
        return c.error(format!("model is of theory `{theory}`, expected `{}`", th.name));
    }
    c.expect(&Tok::LBrace)?;
    let mut s = PartialStructure::empty(sig);
    let mut ids: BTreeMap<String, ElemId> = BTreeMap::new();
    while !c.eat(&Tok::RBrace) {
        let is_elem = c.is_keyword("elem") && c.peek_at(2) == Some(&Tok::Colon);
        if is_elem {
            c.advance();
            let sort = c.ident()?;
            let Some(so) = sig.sort_id(&sort) else { return perr(c, Error::UnknownSymbol(sort)) };
            c.expect(&Tok::Colon)?;
            for n in elem_names(c, &Tok::Semi)? {
                if ids.contains_key(&n) {
                    return perr(c, Error::Duplicate(n));
                }
                ids.insert(n.clone(), s.add_named(so, &n));
            }
            c.expect(&Tok::Semi)?;
            continue;
        }
        let sym = c.ident()?;
        let args = if c.eat(&Tok::LParen) {
            let a = elem_names(c, &Tok::RParen)?;
            c.expect(&Tok::RParen)?;
            a
        } else {
            Vec::new()
        };
        let resolve = |c: &Cursor, n: &String| match ids.get(n) {
            Some(&e) => Ok(e),
            None => perr(c, Error::UnknownSymbol(n.clone())),
        };
        let arg_ids = args.iter().map(|n| resolve(c, n)).collect::<Result<Vec<_>>>()?;
        if let Some(r) = sig.rel_id(&sym) {
            let d = &sig.rels[r];
            if d.sorts.len() != arg_ids.len() || !arg_ids.iter().zip(&d.sorts).all(|(e, so)| s.sort_of[e] == *so) {
                return c.error(format!("ill-sorted tuple for relation `{sym}`"));
            }
            s.add_rel(r, arg_ids);
        } else if let Some(f) = sig.func_id(&sym) {
            c.expect(&Tok::Eq)?;
            let v = c.ident()?;
            let v = resolve(c, &v)?;
            let d = &sig.funcs[f];
            if d.inputs.len() != arg_ids.len()
                || !arg_ids.iter().zip(&d.inputs).all(|(e, so)| s.sort_of[e] == *so)
                || s.sort_of[&v] != d.output
            {
                return c.error(format!("ill-sorted entry for operation `{sym}`"));
            }
            if let Err(e) = s.set_func(f, arg_ids, v) {
                return perr(c, e);
            }
        } else {
            return perr(c, Error::UnknownSymbol(sym));
        }
        c.expect(&Tok::Semi)?;
    }
    Ok(ModelDoc { name, theory, structure: s })
}

/// Renders a structure in the `.pm` format.
pub fn print_model(sig: &Signature, name: &str, theory: &str, s: &PartialStructure) -> String {
    let names = s.display_names();
    let mut out = format!("model {name} of {theory} {{\n");
    for (so, carrier) in s.carriers.iter().enumerate() {
        if carrier.is_empty() {
            continue;
        }
        let es: Vec<&str> = carrier.iter().map(|e| names[e].as_str()).collect();
        let _ = writeln!(out, "  elem {}: {};", sig.sorts[so], es.join(" "));
    }
    for (f, table) in s.funcs.iter().enumerate() {
        for (args, v) in table {
            let fname = &sig.funcs[f].name;
            if args.is_empty() {
                let _ = writeln!(out, "  {fname} = {};", names[v]);
            } else {
                let a: Vec<&str> = args.iter().map(|e| names[e].as_str()).collect();
                let _ = writeln!(out, "  {fname}({}) = {};", a.join(", "), names[v]);
            }
        }
    }
    for (r, table) in s.rels.iter().enumerate() {
        for args in table {
            let a: Vec<&str> = args.iter().map(|e| names[e].as_str()).collect();
            let _ = writeln!(out, "  {}({});", sig.rels[r].name, a.join(", "));
        }
    }
    out.push_str("}\n");
    out
}

/// Parses `hom NAME : M -> N { e |-> x; ... }`, resolving model names in `models`.
pub fn parse_hom(src: &str, models: &[ModelDoc]) -> Result<HomDoc> {
    let mut c = Cursor::new(src)?;
    c.keyword("hom")?;
    let name = c.ident()?;
    c.expect(&Tok::Colon)?;
    let source = c.ident()?;
    c.expect(&Tok::Arrow)?;
    let target = c.ident()?;
    let find = |c: &Cursor, n: &str| match models.iter().find(|m| m.name == n) {
        Some(m) => Ok(Arc::new(m.structure.clone())),
        None => perr(c, Error::UnknownSymbol(n.to_string())),
    };
    let (s, t) = (find(&c, &source)?, find(&c, &target)?);
    c.expect(&Tok::LBrace)?;
    let mut map = BTreeMap::new();
    while !c.eat(&Tok::RBrace) {
        let a = c.ident()?;
        c.expect(&Tok::MapsTo)?;
        let b = c.ident()?;
        let Some(ai) = s.id_of(&a) else { return perr(&c, Error::UnknownSymbol(a)) };
        let Some(bi) = t.id_of(&b) else { return perr(&c, Error::UnknownSymbol(b)) };
        if map.insert(ai, bi).is_some() {
            return perr(&c, Error::Duplicate(a));
        }
        c.expect(&Tok::Semi)?;
    }
    if !c.at_end() {
        return c.error("unexpected trailing input");
    }
    let hom = Hom::new(s, t, map);
    super::homs::check_hom(&hom)?;
    Ok(HomDoc { name, source, target, hom })
}

pub fn print_hom(name: &str, source: &str, target: &str, h: &Hom) -> String {
    let (sn, tn) = (h.source.display_names(), h.target.display_names());
    let mut out = format!("hom {name} : {source} -> {target} {{\n");
    for (a, b) in &h.map {
        let _ = writeln!(out, "  {} |-> {};", sn[a], tn[b]);
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarrierJson {
    pub sort: String,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncEntryJson {
    pub func: String,
    pub args: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelEntryJson {
    pub rel: String,
    pub args: Vec<String>,
}

/// JSON mirror of the `.pm` format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureJson {
    pub name: String,
    pub theory: String,
    pub carriers: Vec<CarrierJson>,
    pub funcs: Vec<FuncEntryJson>,
    pub rels: Vec<RelEntryJson>,
}

pub fn structure_to_json(sig: &Signature, name: &str, theory: &str, s: &PartialStructure) -> StructureJson {
    let names = s.display_names();
    let n = |e: &ElemId| names[e].clone();
    StructureJson {
        name: name.to_string(),
        theory: theory.to_string(),
        carriers: s
            .carriers
            .iter()
            .enumerate()
            .map(|(so, c)| CarrierJson { sort: sig.sorts[so].clone(), elements: c.iter().map(n).collect() })
            .collect(),
        funcs: s
            .funcs
            .iter()
            .enumerate()
            .flat_map(|(f, t)| {
                t.iter().map(move |(a, v)| (f, a, v))
            })
            .map(|(f, a, v)| FuncEntryJson { func: sig.funcs[f].name.clone(), args: a.iter().map(n).collect(), value: n(v) })
            .collect(),
        rels: s
            .rels
            .iter()
            .enumerate()
            .flat_map(|(r, t)| t.iter().map(move |a| (r, a)))
            .map(|(r, a)| RelEntryJson { rel: sig.rels[r].name.clone(), args: a.iter().map(n).collect() })
            .collect(),
    }
}

pub fn structure_from_json(th: &Theory, j: &StructureJson) -> Result<ModelDoc> {
    let sig = &th.sig;
    let mut s = PartialStructure::empty(sig);
    let mut ids = BTreeMap::new();
    for c in &j.carriers {
        let so = sig.sort_id(&c.sort).ok_or_else(|| Error::UnknownSymbol(c.sort.clone()))?;
        for e in &c.elements {
            if ids.insert(e.clone(), s.add_named(so, e)).is_some() {
                return Err(Error::Duplicate(e.clone()));
            }
        }
    }
    let id = |n: &String| ids.get(n).copied().ok_or_else(|| Error::UnknownSymbol(n.clone()));
    for e in &j.funcs {
        let f = sig.func_id(&e.func).ok_or_else(|| Error::UnknownSymbol(e.func.clone()))?;
        let args = e.args.iter().map(id).collect::<Result<Vec<_>>>()?;
        s.set_func(f, args, id(&e.value)?)?;
    }
    for e in &j.rels {
        let r = sig.rel_id(&e.rel).ok_or_else(|| Error::UnknownSymbol(e.rel.clone()))?;
        s.add_rel(r, e.args.iter().map(id).collect::<Result<Vec<_>>>()?);
    }
    s.validate(sig)?;
    Ok(ModelDoc { name: j.name.clone(), theory: j.theory.clone(), structure: s })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomJson {
    pub name: String,
    pub source: String,
    pub target: String,
    pub map: Vec<(String, String)>,
}

pub fn hom_to_json(name: &str, source: &str, target: &str, h: &Hom) -> HomJson {
    let (sn, tn) = (h.source.display_names(), h.target.display_names());
    HomJson {
        name: name.to_string(),
        source: source.to_string(),
        target: target.to_string(),
        map: h.map.iter().map(|(a, b)| (sn[a].clone(), tn[b].clone())).collect(),
    }
}

pub fn hom_from_json(j: &HomJson, models: &[ModelDoc]) -> Result<HomDoc> {
    let src: String = std::iter::once(format!("hom {} : {} -> {} {{", j.name, j.source, j.target))
        .chain(j.map.iter().map(|(a, b)| format!("{a} |-> {b};")))
        .chain(std::iter::once("}".to_string()))
        .collect::<Vec<_>>()
        .join("\n");
    parse_hom(&src, models)
}
