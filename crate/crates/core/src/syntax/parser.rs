use super::lexer::{Cursor, Tok};
use super::{check_sequent, check_term, Atom, Context, Formula, Sequent, Signature, Term, Theory};
use crate::error::{Error, Result};

/// Parses `theory NAME { ... }`.
pub fn parse_theory(src: &str) -> Result<Theory> {
    let mut c = Cursor::new(src)?;
    let th = theory(&mut c)?;
    if !c.at_end() {
        return c.error("trailing input after theory");
    }
    Ok(th)
}

fn at<T>(c: &Cursor, e: Error) -> Result<T> {
    let (line, col) = c.here();
    Err(Error::Parse { line, col, msg: e.to_string() })
}

fn theory(c: &mut Cursor) -> Result<Theory> {
    c.keyword("theory")?;
    let name = c.ident()?;
    c.expect(&Tok::LBrace)?;
    let mut th = Theory::new(&name, Signature::default());
    while !c.eat(&Tok::RBrace) {
        let kw = c.ident()?;
        match kw.as_str() {
            "sort" => {
                let s = c.ident()?;
                if let Err(e) = th.sig.add_sort(&s) {
                    return at(c, e);
                }
                c.expect(&Tok::Semi)?;
            }
            "func" => {
                let f = c.ident()?;
                c.expect(&Tok::Colon)?;
                let first = sort_list(c, &th.sig)?;
                let (ins, out) = if c.eat(&Tok::Arrow) {
                    let out = c.ident()?;
                    (first, sort(c, &th.sig, &out)?)
                } else if first.len() == 1 {
                    (Vec::new(), first[0])
                } else {
                    return c.error("expected `->`");
                };
                if let Err(e) = th.sig.add_func(&f, &ins, out) {
                    return at(c, e);
                }
                c.expect(&Tok::Semi)?;
            }
            "rel" => {
                let r = c.ident()?;
                c.expect(&Tok::Colon)?;
                let ss = sort_list(c, &th.sig)?;
                if let Err(e) = th.sig.add_rel(&r, &ss) {
                    return at(c, e);
                }
                c.expect(&Tok::Semi)?;
            }
            "axiom" => {
                for s in sequent(c, &th.sig)? {
                    th.sequents.push(s);
                }
                c.expect(&Tok::Semi)?;
            }
            other => return c.error(format!("unknown declaration `{other}`")),
        }
    }
    Ok(th)
}

fn sort(c: &Cursor, sig: &Signature, name: &str) -> Result<usize> {
    match sig.sort_id(name) {
        Some(s) => Ok(s),
        None => at(c, Error::UnknownSymbol(name.to_string())),
    }
}

fn sort_list(c: &mut Cursor, sig: &Signature) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    if c.peek() == Some(&Tok::Semi) {
        return Ok(out);
    }
    loop {
        let s = c.ident()?;
        out.push(sort(c, sig, &s)?);
        if !c.eat(&Tok::Comma) {
            return Ok(out);
        }
    }
}

pub(crate) fn context(c: &mut Cursor, sig: &Signature) -> Result<Context> {
    c.expect(&Tok::LBrack)?;
    let mut vars = Vec::new();
    if !c.eat(&Tok::RBrack) {
        loop {
            let x = c.ident()?;
            c.expect(&Tok::Colon)?;
            let s = c.ident()?;
            let s = sort(c, sig, &s)?;
            if sig.func_id(&x).is_some() || sig.rel_id(&x).is_some() {
                return c.error(format!("variable `{x}` clashes with a symbol name"));
            }
            if vars.iter().any(|(y, _)| *y == x) {
                return at(c, Error::Duplicate(x));
            }
            vars.push((x, s));
            if !c.eat(&Tok::Comma) {
                break;
            }
        }
        c.expect(&Tok::RBrack)?;
    }
    Ok(Context { vars })
}

/// `[ctx] φ |- ψ` or `[ctx] φ -||- ψ` (two sequents, forward first).
pub(crate) fn sequent(c: &mut Cursor, sig: &Signature) -> Result<Vec<Sequent>> {
    let ctx = context(c, sig)?;
    let premise = formula(c, sig, &ctx)?;
    let bi = if c.eat(&Tok::Turnstile) {
        false
    } else if c.eat(&Tok::BiTurnstile) {
        true
    } else {
        return c.error("expected `|-` or `-||-`");
    };
    let conclusion = formula(c, sig, &ctx)?;
    let fwd = Sequent { ctx: ctx.clone(), premise: premise.clone(), conclusion: conclusion.clone() };
    if let Err(e) = check_sequent(sig, &fwd) {
        return at(c, e);
    }
    let mut out = vec![fwd];
    if bi {
        out.push(Sequent { ctx, premise: conclusion, conclusion: premise });
    }
    Ok(out)
}

pub(crate) fn formula(c: &mut Cursor, sig: &Signature, ctx: &Context) -> Result<Formula> {
    let mut atoms = Vec::new();
    loop {
        atom_chain(c, sig, ctx, &mut atoms)?;
        if !c.eat(&Tok::Amp) {
            return Ok(Formula(atoms));
        }
    }
}

fn atom_chain(c: &mut Cursor, sig: &Signature, ctx: &Context, out: &mut Vec<Atom>) -> Result<()> {
    if c.is_keyword("top") && ctx.lookup("top").is_none() && sig.func_id("top").is_none() {
        c.advance();
        out.push(Atom::Top);
        return Ok(());
    }
    if let Some(Tok::Ident(name)) = c.peek() {
        if let Some(r) = sig.rel_id(name) {
            c.advance();
            c.expect(&Tok::LParen)?;
            let ts = term_list(c, sig, ctx)?;
            c.expect(&Tok::RParen)?;
            let decl = &sig.rels[r];
            if decl.sorts.len() != ts.len() {
                return at(c, Error::Arity { name: decl.name.clone(), expected: decl.sorts.len(), got: ts.len() });
            }
            out.push(Atom::Rel(r, ts));
            return Ok(());
        }
    }
    let first = term(c, sig, ctx)?;
    if c.eat(&Tok::Bang) {
        out.push(Atom::Def(first));
        return Ok(());
    }
    if c.peek() != Some(&Tok::Eq) {
        return c.error("expected `=` or `!` after term");
    }
    let mut prev = first;
    while c.eat(&Tok::Eq) {
        let next = term(c, sig, ctx)?;
        out.push(Atom::Eq(prev, next.clone()));
        prev = next;
    }
    Ok(())
}

fn term_list(c: &mut Cursor, sig: &Signature, ctx: &Context) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    if c.peek() == Some(&Tok::RParen) {
        return Ok(out);
    }
    loop {
        out.push(term(c, sig, ctx)?);
        if !c.eat(&Tok::Comma) {
            return Ok(out);
        }
    }
}

pub(crate) fn term(c: &mut Cursor, sig: &Signature, ctx: &Context) -> Result<Term> {
    let name = c.ident()?;
    if c.peek() != Some(&Tok::LParen) {
        if let Some(s) = ctx.lookup(&name) {
            return Ok(Term::Var(name, s));
        }
    }
    let Some(f) = sig.func_id(&name) else {
        if sig.rel_id(&name).is_some() {
            return c.error(format!("relation `{name}` used as a term"));
        }
        return at(c, Error::UnknownSymbol(name));
    };
    let args = if c.eat(&Tok::LParen) {
        let a = term_list(c, sig, ctx)?;
        c.expect(&Tok::RParen)?;
        a
    } else {
        Vec::new()
    };
    let t = Term::App(f, args);
    if let Err(e) = check_term(sig, ctx, &t) {
        return at(c, e);
    }
    Ok(t)
}

fn finish<T>(c: &Cursor, v: T) -> Result<T> {
    if !c.at_end() {
        return c.error("unexpected trailing input");
    }
    Ok(v)
}

/// Parses a standalone term in a context, e.g. `comp1(x, d1(y))`.
pub fn parse_term(sig: &Signature, ctx: &Context, src: &str) -> Result<Term> {
    let mut c = Cursor::new(src)?;
    let t = term(&mut c, sig, ctx)?;
    finish(&c, t)
}

pub fn parse_formula(sig: &Signature, ctx: &Context, src: &str) -> Result<Formula> {
    let mut c = Cursor::new(src)?;
    let f = formula(&mut c, sig, ctx)?;
    finish(&c, f)
}

/// Parses a context written as `[x:s, y:t]`.
pub fn parse_context(sig: &Signature, src: &str) -> Result<Context> {
    let mut c = Cursor::new(src)?;
    let ctx = context(&mut c, sig)?;
    finish(&c, ctx)
}

/// Parses `[ctx] φ |- ψ` (one sequent) or `[ctx] φ -||- ψ` (two).
pub fn parse_sequents(sig: &Signature, src: &str) -> Result<Vec<Sequent>> {
    let mut c = Cursor::new(src)?;
    let s = sequent(&mut c, sig)?;
    c.eat(&Tok::Semi);
    finish(&c, s)
}
