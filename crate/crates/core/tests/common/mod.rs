#![allow(dead_code)]

use horndec::cli::{default_corpus, load_model, load_theory, read};
use horndec::structure::{parse_hom, Hom, PartialStructure};
use horndec::syntax::Theory;
use std::path::PathBuf;
use std::sync::Arc;

pub fn corpus(rel: &str) -> PathBuf {
    default_corpus().join(rel)
}

pub fn theory(name: &str) -> Theory {
    load_theory(&corpus(&format!("theories/{name}.pht"))).unwrap()
}

pub fn model(th: &Theory, name: &str) -> Arc<PartialStructure> {
    Arc::new(load_model(th, &corpus(&format!("models/{name}.pm"))).unwrap().structure)
}

pub fn hom(th: &Theory, from: &str, to: &str, name: &str) -> Hom {
    let a = load_model(th, &corpus(&format!("models/{from}.pm"))).unwrap();
    let b = load_model(th, &corpus(&format!("models/{to}.pm"))).unwrap();
    parse_hom(&read(&corpus(&format!("homs/{name}.phom"))).unwrap(), &[a, b]).unwrap().hom
}

/// Every bundled (theory, source, target, hom) quadruple.
pub const MORPHISMS: &[(&str, &str, &str, &str)] = &[
    ("toy", "toy_M", "toy_T", "toy_bang"),
    ("ncat1", "cat_C0", "cat_C2", "cat_Phi"),
    ("ncat2", "ncat2_X0", "ncat2_X3", "ncat2_F0"),
    ("omega", "omega_M0", "omega_T", "omega_bang0"),
    ("omega", "omega_M3", "omega_T", "omega_bang3"),
    ("omega", "omega_M6", "omega_T", "omega_bang6"),
    ("omega1", "omega1_A0", "omega1_T", "omega1_bang"),
];

pub fn morphism(i: usize) -> (Theory, Hom) {
    let (t, a, b, h) = MORPHISMS[i];
    let th = theory(t);
    let f = hom(&th, a, b, h);
    (th, f)
}

use horndec::chase::{representing_model, ChaseBudget};
use horndec::cli::small_constant_models;
use horndec::structure::{enumerate_homs, find_isomorphism, is_hom, ElemId};
use horndec::syntax::{parse_context, parse_formula, Atom, Context, Formula, Term};
use rand::Rng;
use std::collections::BTreeMap;

/// Models of the one-sorted theory without operations: sets of size 0..=max.
pub fn set_models(th: &Theory, max: usize) -> Vec<Arc<PartialStructure>> {
    (0..=max)
        .map(|n| {
            let mut s = PartialStructure::empty(&th.sig);
            for _ in 0..n {
                s.add_elem(0);
            }
            Arc::new(s)
        })
        .collect()
}

pub fn constant_models(th: &Theory, max: usize) -> Vec<Arc<PartialStructure>> {
    small_constant_models(th, max).into_iter().map(Arc::new).collect()
}

/// Small categories obtained as free models of short presentations, up to isomorphism.
pub fn small_categories(th: &Theory, max: usize) -> Vec<Arc<PartialStructure>> {
    const PRESENTATIONS: &[(&str, &str)] = &[
        ("[x:*]", "d1(x) = x"),
        ("[x:*]", "top"),
        ("[x:*, y:*]", "d1(x) = x & d1(y) = y"),
        ("[x:*, y:*]", "d1(y) = y"),
        ("[x:*, y:*]", "d1(x) = d1(y) & c1(x) = c1(y)"),
        ("[x:*]", "d1(x) = c1(x) & comp1(x, x) = x"),
        ("[x:*]", "d1(x) = c1(x) & comp1(x, x) = d1(x)"),
        ("[x:*, y:*]", "d1(x) = c1(y)"),
        ("[x:*, y:*]", "d1(x) = x & d1(y) = y & d1(x) = d1(y)"),
        ("[x:*, y:*, z:*]", "d1(x) = x & d1(y) = y & d1(z) = z"),
        ("[x:*, y:*]", "d1(x) = d1(y) & c1(x) = c1(y) & d1(x) = c1(x)"),
    ];
    let mut out: Vec<Arc<PartialStructure>> = Vec::new();
    for (c, f) in PRESENTATIONS {
        let ctx = parse_context(&th.sig, c).unwrap();
        let phi = parse_formula(&th.sig, &ctx, f).unwrap();
        let (r, _) = representing_model(th, &ctx, &phi, ChaseBudget { max_elements: 40, max_rounds: 100 });
        if r.is_complete() && r.model.len() <= max {
            let m = Arc::new(r.model);
            if !out.iter().any(|o| find_isomorphism(o, &m).is_some()) {
                out.push(m);
            }
        }
    }
    out
}

/// A pool of small models of the named theory.
pub fn small_models(name: &str, th: &Theory, max: usize) -> Vec<Arc<PartialStructure>> {
    match name {
        "pointed" => set_models(th, max),
        "toy" => constant_models(th, max),
        "omega" | "omega1" => constant_models(th, max.min(2)),
        "ncat1" => small_categories(th, max),
        _ => panic!("no pool for {name}"),
    }
}

/// All homomorphisms between members of a pool.
pub fn homs_within(pool: &[Arc<PartialStructure>]) -> Vec<Hom> {
    let mut out = Vec::new();
    for a in pool {
        for b in pool {
            out.extend(enumerate_homs(a, b));
        }
    }
    out
}

/// A random term of depth at most `depth` over the signature's operations and `vars`.
pub fn random_term(rng: &mut impl Rng, th: &Theory, vars: &[String], depth: usize) -> Term {
    let funcs = &th.sig.funcs;
    let leaf = depth == 0 || funcs.is_empty() || rng.gen_bool(0.3);
    if leaf && !vars.is_empty() {
        return Term::var(&vars[rng.gen_range(0..vars.len())], 0);
    }
    let consts: Vec<usize> = (0..funcs.len()).filter(|&f| funcs[f].inputs.is_empty()).collect();
    let f = if depth == 0 { consts[rng.gen_range(0..consts.len())] } else { rng.gen_range(0..funcs.len()) };
    let args = (0..funcs[f].inputs.len()).map(|_| random_term(rng, th, vars, depth - 1)).collect();
    Term::app(f, args)
}

/// A conjunction of one to three equations or definedness atoms.
pub fn random_formula(rng: &mut impl Rng, th: &Theory, vars: &[String], depth: usize) -> Formula {
    let n = rng.gen_range(1..=3);
    let atoms = (0..n)
        .map(|_| {
            if rng.gen_bool(0.3) {
                Atom::Def(random_term(rng, th, vars, depth))
            } else {
                Atom::Eq(random_term(rng, th, vars, depth), random_term(rng, th, vars, depth))
            }
        })
        .collect();
    Formula(atoms)
}

pub fn random_context(rng: &mut impl Rng, max: usize) -> Context {
    let n = rng.gen_range(1..=max);
    Context::new((0..n).map(|i| (format!("x{i}"), 0)).collect()).unwrap()
}

pub fn var_names(ctx: &Context) -> Vec<String> {
    ctx.vars.iter().map(|(x, _)| x.clone()).collect()
}

/// The unique map `a2 → b` agreeing with `seed` on the listed elements and commuting
/// with the operations, built by closing under the tables of `a2`. Every element of
/// a chase result is reachable this way from the base. Returns `None` on a clash.
pub fn extend_along(a2: &PartialStructure, b: &PartialStructure, seed: &BTreeMap<ElemId, ElemId>) -> Option<BTreeMap<ElemId, ElemId>> {
    let mut h = BTreeMap::new();
    for (&k, &v) in seed {
        if let Some(w) = h.insert(k, v) {
            if w != v {
                return None;
            }
        }
    }
    loop {
        let mut changed = false;
        for (f, table) in a2.funcs.iter().enumerate() {
            for (args, &out) in table {
                if h.contains_key(&out) {
                    continue;
                }
                let Some(img) = args.iter().map(|e| h.get(e).copied()).collect::<Option<Vec<_>>>() else { continue };
                h.insert(out, b.func(f, &img)?);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (h.len() == a2.len()).then_some(h)
}

pub fn is_hom_map(s: &Arc<PartialStructure>, t: &Arc<PartialStructure>, m: &BTreeMap<ElemId, ElemId>) -> bool {
    is_hom(&Hom::new(s.clone(), t.clone(), m.clone()))
}

/// One randomized check of the representing-model universal property: homs from
/// `[[ctx.phi]]` to each small model `N` correspond, via the generic assignment,
/// exactly to the assignments of `N` satisfying `phi`. Returns the number of
/// targets compared, or `None` when the drawn presentation did not chase to completion.
pub fn universal_property_case(rng: &mut impl Rng) -> Option<Result<usize, String>> {
    let name = ["toy", "pointed", "ncat1", "omega"][rng.gen_range(0..4)];
    let th = theory(name);
    let ctx = random_context(rng, 2);
    let phi = random_formula(rng, &th, &var_names(&ctx), 2);
    let (r, generic) = representing_model(&th, &ctx, &phi, ChaseBudget { max_elements: 60, max_rounds: 200 });
    if !r.is_complete() {
        return None;
    }
    let rep = Arc::new(r.model);
    let pool = small_models(name, &th, 4);
    for n in &pool {
        let homs = enumerate_homs(&rep, n);
        let mut images: Vec<Vec<ElemId>> = homs.iter().map(|h| ctx.vars.iter().map(|(x, _)| h.apply(generic[x])).collect()).collect();
        let mut sat: Vec<Vec<ElemId>> =
            n.assignments(&ctx).filter(|a| n.holds(a, &phi)).map(|a| ctx.vars.iter().map(|(x, _)| a[x]).collect()).collect();
        images.sort();
        let before = images.len();
        images.dedup();
        sat.sort();
        if images.len() != before || images != sat {
            return Some(Err(format!(
                "{name}: {} {}: {} homs, {} satisfying assignments into a {}-element model",
                th.sig.context(&ctx),
                th.sig.formula(&phi),
                before,
                sat.len(),
                n.len()
            )));
        }
    }
    Some(Ok(pool.len()))
}

/// One randomized check that a homomorphism preserves a random Horn formula at every
/// assignment. Returns how many assignments satisfied the formula in the source.
pub fn hom_preservation_case(rng: &mut impl Rng, homs: &[(Theory, Vec<Hom>)]) -> Result<usize, String> {
    let (th, hs) = &homs[rng.gen_range(0..homs.len())];
    let h = &hs[rng.gen_range(0..hs.len())];
    let ctx = random_context(rng, 3);
    let phi = random_formula(rng, th, &var_names(&ctx), 2);
    let mut hits = 0;
    for a in h.source.assignments(&ctx) {
        if h.source.holds(&a, &phi) {
            hits += 1;
            let b: horndec::structure::Assignment = a.iter().map(|(k, v)| (k.clone(), h.apply(*v))).collect();
            if !h.target.holds(&b, &phi) {
                return Err(format!("{}: {} not preserved", th.name, th.sig.formula(&phi)));
            }
        }
    }
    Ok(hits)
}

/// Homomorphisms used by the preservation check: all maps between small models plus
/// the legs and steps of the bundled decompositions.
pub fn preservation_pool() -> Vec<(Theory, Vec<Hom>)> {
    use horndec::decompose::{canonical_decomposition, equational_scale, DecompBudget};
    let mut out = Vec::new();
    for name in ["toy", "ncat1", "pointed", "omega"] {
        let th = theory(name);
        let homs = homs_within(&small_models(name, &th, 3));
        out.push((th, homs));
    }
    for i in 0..MORPHISMS.len() {
        let (th, f) = morphism(i);
        let budget = DecompBudget { max_steps: 12, ..DecompBudget::default() };
        let trace = canonical_decomposition(&th, &equational_scale(&th), &f, budget).unwrap();
        let mut homs = vec![f];
        for s in &trace.steps {
            homs.push(s.leg.clone());
            homs.push(s.step.clone());
        }
        out.push((th, homs));
    }
    out
}

/// Kernel pair of `f`: pairs of source elements with equal images.
pub fn kernel_pairs(f: &Hom) -> Vec<(ElemId, ElemId)> {
    let mut out = Vec::new();
    for (&m, &x) in &f.map {
        for (&m2, &x2) in f.map.range(m + 1..) {
            if x == x2 {
                out.push((m, m2));
            }
        }
    }
    out
}

/// Homs `f` whose source and target are small enough for exhaustive coequalizer checks.
/// Per theory: target models and the homs `f` to step.
pub type CoeqPool = Vec<(Theory, Vec<Arc<PartialStructure>>, Vec<Hom>)>;

pub fn coequalizer_pool() -> CoeqPool {
    let mut out = Vec::new();
    for name in ["toy", "ncat1", "pointed"] {
        let th = theory(name);
        let targets = small_models(name, &th, 5);
        let mut homs = homs_within(&small_models(name, &th, 4));
        if name == "toy" {
            homs.push(hom(&th, "toy_M", "toy_T", "toy_bang"));
        }
        if name == "ncat1" {
            homs.push(hom(&th, "cat_C0", "cat_C2", "cat_Phi"));
        }
        out.push((th, targets, homs));
    }
    out
}

/// One randomized check of the universal property of the equational step `e : A → A′`
/// of `f`: every `g : A → Z` into a small model that identifies the kernel pair of `f`
/// factors through `e` exactly once, and no other `g` factors at all.
/// Returns the number of maps `g` examined, or `None` when `A′` is not small (the
/// quotient can be infinite, e.g. when an arrow between merged objects becomes a loop).
pub fn coequalizer_case(rng: &mut impl Rng, pool: &CoeqPool) -> Result<Option<usize>, String> {
    use horndec::decompose::{equational_scale, scale_step};
    let (th, targets, homs) = &pool[rng.gen_range(0..pool.len())];
    let f = &homs[rng.gen_range(0..homs.len())];
    let budget = ChaseBudget { max_elements: 200, max_rounds: 100 };
    let step = match scale_step(th, &equational_scale(th), f, budget) {
        Err(horndec::Error::BudgetExceeded) => return Ok(None),
        r => r.map_err(|e| e.to_string())?,
    };
    let e = &step.e;
    let kp = kernel_pairs(f);
    let mut seen = 0;
    for z in targets {
        for g in enumerate_homs(&f.source, z) {
            let coeq = kp.iter().all(|(m, m2)| g.apply(*m) == g.apply(*m2));
            let factors = enumerate_homs(&e.target, z).into_iter().filter(|h| e.then(h).map(|eh| eh.map == g.map).unwrap_or(false)).count();
            if factors != usize::from(coeq) {
                return Err(format!("{}: {factors} factorizations of a map with coequalizing = {coeq}", th.name));
            }
            seen += 1;
        }
    }
    Ok(Some(seen))
}

/// `♯` read off the operation names: the largest k with `compk` occurring.
pub fn name_sharp(th: &Theory, t: &Term) -> usize {
    match t {
        Term::Var(..) => 0,
        Term::App(f, args) => {
            let own = th.sig.funcs[*f].name.strip_prefix("comp").map_or(0, |k| k.parse().unwrap());
            args.iter().map(|a| name_sharp(th, a)).fold(own, usize::max)
        }
    }
}

/// Normality, written from the inductive definition: variables and boundaries of
/// variables are normal, and so is a left-nested chain `t0 ∘k t1 ∘k … ∘k tl` (l ≥ 1)
/// of normal terms each of ♯ below k.
pub fn is_normal_by_definition(th: &Theory, t: &Term) -> bool {
    let name = |f: &usize| th.sig.funcs[*f].name.as_str();
    match t {
        Term::Var(..) => true,
        Term::App(f, args) if !name(f).starts_with("comp") => matches!(args[0], Term::Var(..)),
        Term::App(f, _) => {
            let k: usize = name(f)["comp".len()..].parse().unwrap();
            // unwind the chain along its left spine
            let mut parts = Vec::new();
            let mut cur = t;
            while let Term::App(g, a) = cur {
                if *g != *f {
                    break;
                }
                parts.push(&a[1]);
                cur = &a[0];
            }
            parts.push(cur);
            parts.iter().all(|p| name_sharp(th, p) < k && is_normal_by_definition(th, p))
        }
    }
}

/// One randomized normalization check: `τ ⊴ ν` is proved, `♯ν ≤ ♯τ`, and `ν` is normal.
pub fn normalization_case(rng: &mut impl Rng) -> Result<(), String> {
    use horndec::chase::{reduces, Verdict};
    use horndec::gauge::{ncat_theory, Ncat};
    let n = rng.gen_range(1..=3);
    let th = ncat_theory(n);
    let nc = Ncat::new(&th.sig, n).unwrap();
    let vars: Vec<String> = (0..rng.gen_range(1..=3)).map(|i| format!("x{i}")).collect();
    let depth = rng.gen_range(1..=4);
    let t = random_term(rng, &th, &vars, depth);
    let ctx = Context::new(vars.iter().map(|v| (v.clone(), 0)).collect()).unwrap();
    let nf = nc.normalize(&t);
    let show = format!("{} ~> {}", th.sig.term(&t), th.sig.term(&nf));
    if name_sharp(&th, &nf) > name_sharp(&th, &t) {
        return Err(format!("n={n}: {show} raises the rank"));
    }
    if !is_normal_by_definition(&th, &nf) {
        return Err(format!("n={n}: {show} is not normal"));
    }
    let rep = reduces(&th, &ctx, &t, &nf, ChaseBudget::default());
    match rep.verdict {
        Verdict::Valid => Ok(()),
        v => Err(format!("n={n}: {show}: {v:?}")),
    }
}
