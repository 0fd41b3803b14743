use super::{ElemId, PartialStructure};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A total sort-preserving map between two structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom {
    pub source: Arc<PartialStructure>,
    pub target: Arc<PartialStructure>,
    pub map: BTreeMap<ElemId, ElemId>,
}

impl Hom {
    pub fn new(source: Arc<PartialStructure>, target: Arc<PartialStructure>, map: BTreeMap<ElemId, ElemId>) -> Hom {
        Hom { source, target, map }
    }

    pub fn identity(s: Arc<PartialStructure>) -> Hom {
        let map = s.elements().map(|e| (e, e)).collect();
        Hom { source: s.clone(), target: s, map }
    }

    pub fn apply(&self, e: ElemId) -> ElemId {
        self.map[&e]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Hom) -> Result<Hom> {
        if *self.target != *other.source {
            return Err(Error::Hom("composition of non-composable homomorphisms".into()));
        }
        let map = self.map.iter().map(|(&a, b)| (a, other.map[b])).collect();
        Ok(Hom { source: self.source.clone(), target: other.target.clone(), map })
    }

    pub fn is_injective(&self) -> bool {
        let mut img: Vec<_> = self.map.values().collect();
        img.sort();
        img.dedup();
        img.len() == self.map.len()
    }

    pub fn is_surjective(&self) -> bool {
        let img: std::collections::BTreeSet<_> = self.map.values().collect();
        img.len() == self.target.len()
    }

    /// Bijective, and the inverse is also a homomorphism.
    pub fn is_iso(&self) -> bool {
        if !(self.is_injective() && self.is_surjective()) {
            return false;
        }
        let inv = self.map.iter().map(|(&a, &b)| (b, a)).collect();
        is_hom(&Hom { source: self.target.clone(), target: self.source.clone(), map: inv })
    }
}

/// Totality, sort preservation, and preservation of definedness, values and tuples.
pub fn is_hom(h: &Hom) -> bool {
    check_hom(h).is_ok()
}

pub fn check_hom(h: &Hom) -> Result<()> {
    let (s, t) = (&*h.source, &*h.target);
    for (&e, &so) in &s.sort_of {
        match h.map.get(&e) {
            None => return Err(Error::Hom(format!("{} is not mapped", s.name(e)))),
            Some(img) if t.sort_of.get(img) != Some(&so) => {
                return Err(Error::Hom(format!("{} is sent to an element of another sort", s.name(e))))
            }
            _ => {}
        }
    }
    if h.map.len() != s.len() {
        return Err(Error::Hom("map has elements outside the source".into()));
    }
    for (f, table) in s.funcs.iter().enumerate() {
        for (args, v) in table {
            let margs: Vec<ElemId> = args.iter().map(|a| h.map[a]).collect();
            if t.func(f, &margs) != Some(h.map[v]) {
                return Err(Error::Hom(format!("operation #{f} not preserved at {args:?}")));
            }
        }
    }
    for (r, table) in s.rels.iter().enumerate() {
        for args in table {
            let margs: Vec<ElemId> = args.iter().map(|a| h.map[a]).collect();
            if !t.rels[r].contains(&margs) {
                return Err(Error::Hom(format!("relation #{r} not preserved at {args:?}")));
            }
        }
    }
    Ok(())
}

enum Check {
    Func(usize, Vec<ElemId>, ElemId),
    Rel(usize, Vec<ElemId>),
}

struct Search<'a> {
    s: &'a PartialStructure,
    t: &'a PartialStructure,
    order: Vec<ElemId>,
    checks: Vec<Vec<Check>>,
    injective: bool,
    limit: usize,
    map: BTreeMap<ElemId, ElemId>,
    used: std::collections::BTreeSet<ElemId>,
    out: Vec<BTreeMap<ElemId, ElemId>>,
}

impl Search<'_> {
    fn ok(&self, c: &Check) -> bool {
        match c {
            Check::Func(f, args, v) => {
                let m: Vec<ElemId> = args.iter().map(|a| self.map[a]).collect();
                self.t.func(*f, &m) == Some(self.map[v])
            }
            Check::Rel(r, args) => {
                let m: Vec<ElemId> = args.iter().map(|a| self.map[a]).collect();
                self.t.rels[*r].contains(&m)
            }
        }
    }

    fn go(&mut self, p: usize) {
        if self.out.len() >= self.limit {
            return;
        }
        if p == self.order.len() {
            self.out.push(self.map.clone());
            return;
        }
        let e = self.order[p];
        let sort = self.s.sort_of[&e];
        let cands: Vec<ElemId> = self.t.carriers[sort].iter().copied().collect();
        for c in cands {
            if self.injective && self.used.contains(&c) {
                continue;
            }
            self.map.insert(e, c);
            if self.checks[p].iter().all(|ch| self.ok(ch)) {
                self.used.insert(c);
                self.go(p + 1);
                self.used.remove(&c);
            }
            self.map.remove(&e);
        }
    }
}

fn search(s: &PartialStructure, t: &PartialStructure, injective: bool, limit: usize) -> Vec<BTreeMap<ElemId, ElemId>> {
    let order: Vec<ElemId> = s.elements().collect();
    let pos: BTreeMap<ElemId, usize> = order.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut checks: Vec<Vec<Check>> = (0..order.len()).map(|_| Vec::new()).collect();
    for (f, table) in s.funcs.iter().enumerate() {
        for (args, v) in table {
            let p = args.iter().chain(std::iter::once(v)).map(|e| pos[e]).max().unwrap();
            checks[p].push(Check::Func(f, args.clone(), *v));
        }
    }
    for (r, table) in s.rels.iter().enumerate() {
        for args in table {
            match args.iter().map(|e| pos[e]).max() {
                Some(p) => checks[p].push(Check::Rel(r, args.clone())),
                None if !t.rels[r].contains(args) => return Vec::new(),
                None => {}
            }
        }
    }
    let mut st = Search {
        s,
        t,
        order,
        checks,
        injective,
        limit,
        map: BTreeMap::new(),
        used: Default::default(),
        out: Vec::new(),
    };
    st.go(0);
    st.out
}

/// All homomorphisms `s → t`, in lexicographic order of the image vector.
pub fn enumerate_homs(s: &Arc<PartialStructure>, t: &Arc<PartialStructure>) -> Vec<Hom> {
    search(s, t, false, usize::MAX).into_iter().map(|m| Hom::new(s.clone(), t.clone(), m)).collect()
}

/// Some isomorphism `s → t`, if one exists.
pub fn find_isomorphism(s: &Arc<PartialStructure>, t: &Arc<PartialStructure>) -> Option<Hom> {
    let sizes = |x: &PartialStructure| {
        (
            x.carriers.iter().map(|c| c.len()).collect::<Vec<_>>(),
            x.funcs.iter().map(|c| c.len()).collect::<Vec<_>>(),
            x.rels.iter().map(|c| c.len()).collect::<Vec<_>>(),
        )
    };
    if sizes(s) != sizes(t) {
        return None;
    }
    search(s, t, true, 1).pop().map(|m| Hom::new(s.clone(), t.clone(), m))
}
