use super::{Atom, Context, Formula, Sequent, Signature, Term, Theory};
use std::fmt::Write;

impl Signature {
    pub fn term(&self, t: &Term) -> String {
        let mut s = String::new();
        self.write_term(&mut s, t);
        s
    }

    fn write_term(&self, out: &mut String, t: &Term) {
        match t {
            Term::Var(x, _) => out.push_str(x),
            Term::App(f, args) => {
                out.push_str(&self.funcs[*f].name);
                if !args.is_empty() {
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        self.write_term(out, a);
                    }
                    out.push(')');
                }
            }
        }
    }

    pub fn atom(&self, a: &Atom) -> String {
        match a {
            Atom::Eq(s, t) => format!("{} = {}", self.term(s), self.term(t)),
            Atom::Rel(r, ts) => format!(
                "{}({})",
                self.rels[*r].name,
                ts.iter().map(|t| self.term(t)).collect::<Vec<_>>().join(", ")
            ),
            Atom::Top => "top".to_string(),
            Atom::Def(t) => format!("{}!", self.term(t)),
        }
    }

    pub fn formula(&self, phi: &Formula) -> String {
        if phi.0.is_empty() {
            return "top".to_string();
        }
        phi.0.iter().map(|a| self.atom(a)).collect::<Vec<_>>().join(" & ")
    }

    pub fn context(&self, ctx: &Context) -> String {
        let vs: Vec<String> = ctx.vars.iter().map(|(x, s)| format!("{x}:{}", self.sorts[*s])).collect();
        format!("[{}]", vs.join(", "))
    }

    pub fn sequent(&self, seq: &Sequent) -> String {
        format!("{} {} |- {}", self.context(&seq.ctx), self.formula(&seq.premise), self.formula(&seq.conclusion))
    }
}

impl Theory {
    /// Renders the theory in the DSL accepted by `parse_theory`.
    pub fn to_source(&self) -> String {
        let sig = &self.sig;
        let mut out = format!("theory {} {{\n", self.name);
        for s in &sig.sorts {
            let _ = writeln!(out, "  sort {s};");
        }
        for f in &sig.funcs {
            if f.inputs.is_empty() {
                let _ = writeln!(out, "  func {} : {};", f.name, sig.sorts[f.output]);
            } else {
                let ins: Vec<&str> = f.inputs.iter().map(|s| sig.sorts[*s].as_str()).collect();
                let _ = writeln!(out, "  func {} : {} -> {};", f.name, ins.join(", "), sig.sorts[f.output]);
            }
        }
        for r in &sig.rels {
            let ss: Vec<&str> = r.sorts.iter().map(|s| sig.sorts[*s].as_str()).collect();
            let _ = writeln!(out, "  rel {} : {};", r.name, ss.join(", "));
        }
        for seq in &self.sequents {
            let _ = writeln!(out, "  axiom {};", sig.sequent(seq));
        }
        out.push_str("}\n");
        out
    }
}
