//! The bundled example table: every worked example of the corpus with its expected value.

use super::{load_model, load_theory, read, GlobalOpts, EXIT_BUDGET, EXIT_MISMATCH, EXIT_OK};
use crate::decompose::{canonical_decomposition, equational_scale, DecompBudget};
use crate::error::{Error, Result};
use crate::gatrank;
use crate::gauge::{check_gauge, gamma, ncat_gauge_rules, parse_gauge_rules, terms_up_to, CertStatus};
use crate::structure::{enumerate_homs, find_isomorphism, parse_hom, Hom, PartialStructure};
use crate::syntax::{Term, Theory};
use crate::topdec;
use serde::Serialize;
use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RecordStatus {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    /// The computation hit a budget.
    #[serde(rename = "BUDGET")]
    Budget,
    /// Corpus files missing or malformed.
    #[serde(rename = "ERROR")]
    Error,
}

impl RecordStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordStatus::Pass => "PASS",
            RecordStatus::Fail => "FAIL",
            RecordStatus::Budget => "BUDGET",
            RecordStatus::Error => "ERROR",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            RecordStatus::Pass => EXIT_OK,
            RecordStatus::Fail | RecordStatus::Error => EXIT_MISMATCH,
            RecordStatus::Budget => EXIT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExampleRecord {
    pub name: String,
    pub anchor: String,
    pub expected: String,
    pub measured: String,
    pub status: RecordStatus,
}

type Measure = fn(&Path, &GlobalOpts) -> Result<String>;

struct Spec {
    name: &'static str,
    anchor: &'static str,
    expected: &'static str,
    measure: Measure,
}

const SPECS: &[Spec] = &[
    Spec {
        name: "toy-decnum",
        anchor: "monadic adjunction example, decnum 3",
        expected: "decnum 3; intermediate sizes 2,2",
        measure: toy_decnum,
    },
    Spec {
        name: "toy-gauge",
        anchor: "toy gauge example",
        expected: "Certified; #a=0 #b=0 #c=1 #d=2; decnum <= 3 on all homs of models up to 3 elements",
        measure: toy_gauge,
    },
    Spec {
        name: "cat-functor",
        anchor: "functor with decnum 2 in Cat",
        expected: "decnum 2; step 1: 7 elements, fresh g.f != h; step 2 iso to target",
        measure: cat_functor,
    },
    Spec {
        name: "2cat-functor",
        anchor: "strict 2-functor with decnum 3",
        expected: "decnum 3; steps iso to X0,X1,X2,X3",
        measure: twocat_functor,
    },
    Spec {
        name: "omega-truncated",
        anchor: "category with decnum omega, constants b, c_0..c_8",
        expected: "decnum(!_n) for n=0..6: 1,2,3,4,5,6,7",
        measure: omega,
    },
    Spec {
        name: "omega1-truncated",
        anchor: "category with decnum omega+1, constants b, c_0..c_8",
        expected: "not stabilized after 7 steps; truncated decnum 9",
        measure: omega1,
    },
    Spec {
        name: "koizumi-1",
        anchor: "monotone quotient example, lambda 1",
        expected: "stabilizes at 2; classes as expected",
        measure: |_, _| koizumi(1),
    },
    Spec {
        name: "koizumi-2",
        anchor: "monotone quotient example, lambda 2",
        expected: "stabilizes at 4; classes as expected",
        measure: |_, _| koizumi(2),
    },
    Spec {
        name: "koizumi-3",
        anchor: "monotone quotient example, lambda 3",
        expected: "stabilizes at 6; classes as expected",
        measure: |_, _| koizumi(3),
    },
    Spec {
        name: "gat-bounds",
        anchor: "global decnum by dependency rank",
        expected: "set 2, cat 3, ncat1 3, ncat2 4, ncat3 5, moncat 3, multicat 3, dblcat 4, nondescending none (axiom 2)",
        measure: gat_bounds,
    },
    Spec {
        name: "ncat2-gauge",
        anchor: "gauge for strict n-categories, n=2",
        expected: "Certified on 722 terms of depth <= 2 over x1,x2; gamma 3",
        measure: ncat2_gauge,
    },
    Spec {
        name: "ncat2-bound",
        anchor: "rank bound vs measured decnum, n=2",
        expected: "bound 4 > measured 3",
        measure: ncat2_bound,
    },
];

/// Runs every record whose name contains `filter`, in parallel, reporting in table order.
pub fn run_examples(corpus: &Path, filter: &str, g: &GlobalOpts) -> Vec<ExampleRecord> {
    let chosen: Vec<&Spec> = SPECS.iter().filter(|s| s.name.contains(filter)).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = chosen.iter().map(|s| scope.spawn(move || ((s.measure)(corpus, g), s))).collect();
        handles
            .into_iter()
            .map(|h| {
                let (r, s) = h.join().expect("example panicked");
                let (measured, status) = match r {
                    Ok(m) if m == s.expected => (m, RecordStatus::Pass),
                    Ok(m) => (m, RecordStatus::Fail),
                    Err(e @ (Error::BudgetExceeded | Error::NotStabilized(_))) => (e.to_string(), RecordStatus::Budget),
                    Err(e) => (e.to_string(), RecordStatus::Error),
                };
                ExampleRecord {
                    name: s.name.into(),
                    anchor: s.anchor.into(),
                    expected: s.expected.into(),
                    measured,
                    status,
                }
            })
            .collect()
    })
}

fn hom_from_files(th: &Theory, corpus: &Path, from: &str, to: &str, hom: &str) -> Result<Hom> {
    let a = load_model(th, &corpus.join("models").join(from))?;
    let b = load_model(th, &corpus.join("models").join(to))?;
    Ok(parse_hom(&read(&corpus.join("homs").join(hom))?, &[a, b])?.hom)
}

fn toy_decnum(corpus: &Path, g: &GlobalOpts) -> Result<String> {
    let th = load_theory(&corpus.join("theories/toy.pht"))?;
    let f = hom_from_files(&th, corpus, "toy_M.pm", "toy_T.pm", "toy_bang.phom")?;
    let trace = canonical_decomposition(&th, &equational_scale(&th), &f, g.decomp_budget())?;
    let k = trace.decnum().ok_or(Error::NotStabilized(g.max_steps))?;
    let sizes: Vec<String> = trace.models()[1..k].iter().map(|m| m.len().to_string()).collect();
    Ok(format!("decnum {k}; intermediate sizes {}", sizes.join(",")))
}

/// All models of a one-sorted theory of constants with at most `max` elements, up to isomorphism.
pub fn small_constant_models(th: &Theory, max: usize) -> Vec<PartialStructure> {
    assert!(th.sig.sorts.len() == 1 && th.sig.funcs.iter().all(|f| f.inputs.is_empty()));
    let k = th.sig.funcs.len();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 0..=max {
        // each constant: undefined (n) or one of the n elements
        let mut vals = vec![0usize; k];
        loop {
            let mut order: Vec<usize> = Vec::new();
            for &v in &vals {
                if v < n && !order.contains(&v) {
                    order.push(v);
                }
            }
            let key: Vec<Option<usize>> =
                vals.iter().map(|&v| (v < n).then(|| order.iter().position(|&o| o == v).unwrap())).collect();
            if seen.insert((n, key.clone())) {
                let mut s = PartialStructure::empty(&th.sig);
                for _ in 0..n {
                    s.add_elem(0);
                }
                for (f, v) in key.iter().enumerate() {
                    if let Some(e) = v {
                        s.set_func(f, Vec::new(), *e).expect("fresh table");
                    }
                }
                if s.is_model(th).is_ok() {
                    out.push(s);
                }
            }
            let mut i = 0;
            while i < k {
                vals[i] += 1;
                if vals[i] <= n {
                    break;
                }
                vals[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    out
}

fn toy_gauge(corpus: &Path, g: &GlobalOpts) -> Result<String> {
    let th = load_theory(&corpus.join("theories/toy.pht"))?;
    let scale = crate::decompose::parse_scale(&th, &read(&corpus.join("scales/toy.scale"))?)?;
    let rules = parse_gauge_rules(&th, &scale, &read(&corpus.join("rules/toy.gauge"))?)?;
    let terms = terms_up_to(&th.sig, &[], 1);
    let cert = check_gauge(&th, &scale, &rules, &terms, g.chase_budget())?;
    let sharps: Vec<String> = terms.iter().map(|t| format!("#{}={}", th.sig.term(t), rules.sharp(t))).collect();
    let bound = gamma(&rules, &terms) as usize;
    let models: Vec<Arc<PartialStructure>> = small_constant_models(&th, 3).into_iter().map(Arc::new).collect();
    let mut worst = None;
    for a in &models {
        for b in &models {
            for f in enumerate_homs(a, b) {
                let k = canonical_decomposition(&th, &scale, &f, g.decomp_budget())?
                    .decnum()
                    .ok_or(Error::NotStabilized(g.max_steps))?;
                if k > bound {
                    worst = Some(k);
                }
            }
        }
    }
    let tail = match worst {
        None => format!("decnum <= {bound} on all homs of models up to 3 elements"),
        Some(k) => format!("decnum {k} > {bound} on some hom"),
    };
    Ok(format!("{:?}; {}; {tail}", cert.status, sharps.join(" ")))
}

fn cat_functor(corpus: &Path, g: &GlobalOpts) -> Result<String> {
    let th = load_theory(&corpus.join("theories/ncat1.pht"))?;
    let f = hom_from_files(&th, corpus, "cat_C0.pm", "cat_C2.pm", "cat_Phi.phom")?;
    let trace = canonical_decomposition(&th, &equational_scale(&th), &f, g.decomp_budget())?;
    let k = trace.decnum().ok_or(Error::NotStabilized(g.max_steps))?;
    let mut out = format!("decnum {k}");
    if k >= 2 {
        let a1 = &trace.steps[1].model;
        let comp = th.sig.func_id("comp1").expect("ncat signature");
        let id = |n: &str| a1.id_of(n).ok_or_else(|| Error::UnknownSymbol(n.into()));
        let gf = a1.func(comp, &[id("g")?, id("f")?]);
        let fresh = match gf {
            Some(e) if e != id("h")? => "fresh g.f != h",
            Some(_) => "g.f = h",
            None => "g.f undefined",
        };
        out += &format!("; step 1: {} elements, {fresh}", a1.len());
        let iso = if trace.steps[k].leg.is_iso() { "iso" } else { "not iso" };
        out += &format!("; step {k} {iso} to target");
    }
    Ok(out)
}

fn twocat_functor(corpus: &Path, g: &GlobalOpts) -> Result<String> {
    let th = load_theory(&corpus.join("theories/ncat2.pht"))?;
    let f = hom_from_files(&th, corpus, "ncat2_X0.pm", "ncat2_X3.pm", "ncat2_F0.phom")?;
    let trace = canonical_decomposition(&th, &equational_scale(&th), &f, g.decomp_budget())?;
    let k = trace.decnum().ok_or(Error::NotStabilized(g.max_steps))?;
    let mut matched = Vec::new();
    for (i, m) in trace.models().iter().enumerate() {
        let p = corpus.join(format!("models/ncat2_X{i}.pm"));
        if !p.exists() {
            break;
        }
        let listed = Arc::new(load_model(&th, &p)?.structure);
        if find_isomorphism(m, &listed).is_some() {
            matched.push(format!("X{i}"));
        } else {
            matched.push(format!("not X{i}"));
        }
    }
    Ok(format!("decnum {k}; steps iso to {}", matched.join(",")))
}

fn omega(corpus: &Path, g: &GlobalOpts) -> Result<String> {
    let th = load_theory(&corpus.join("theories/omega.pht"))?;
    let mut ks = Vec::new();
    for n in 0..=6 {
        let f = hom_from_files(&th, corpus, &format!("omega_M{n}.pm"), "omega_T.pm", &format!("omega_bang{n}.phom"))?;
        let k = canonical_decomposition(&th, &equational_scale(&th), &f, g.decomp_budget())?.decnum();
        ks.push(k.map_or("none".to_string(), |k| k.to_string()));
    }
    Ok(format!("decnum(!_n) for n=0..6: {}", ks.join(",")))
}

fn omega1(corpus: &Path, g: &GlobalOpts) -> Result<String> {
    let th = load_theory(&corpus.join("theories/omega1.pht"))?;
    let f = hom_from_files(&th, corpus, "omega1_A0.pm", "omega1_T.pm", "omega1_bang.phom")?;
    let scale = equational_scale(&th);
    let short = DecompBudget { max_steps: 7, ..g.decomp_budget() };
    let prefix = canonical_decomposition(&th, &scale, &f, short)?;
    let head = match prefix.decnum() {
        None => "not stabilized after 7 steps".to_string(),
        Some(k) => format!("stabilized at {k}"),
    };
    let full = canonical_decomposition(&th, &scale, &f, g.decomp_budget())?;
    let tail = full.decnum().map_or("none".to_string(), |k| k.to_string());
    Ok(format!("{head}; truncated decnum {tail}"))
}

/// Checks the class structure at every step α = 2β + k against
/// `[-1, β+k) × {a}` and `[-1, β) × {b}`, other classes singletons.
fn koizumi(lambda: usize) -> Result<String> {
    let (_, _, f) = topdec::koizumi_space(lambda);
    let t = topdec::monotone_light_decomposition(&f, 4 * lambda + 4)?;
    let ok = t.steps.iter().enumerate().all(|(alpha, s)| s.classes == koizumi_classes(lambda, alpha));
    let k = t.stabilization_index.expect("finite spaces stabilize");
    Ok(format!("stabilizes at {k}; classes {}", if ok { "as expected" } else { "differ" }))
}

/// Expected kernel classes of `X → X_α`, ordered by least point.
pub fn koizumi_classes(lambda: usize, alpha: usize) -> Vec<BTreeSet<usize>> {
    let (beta, k) = ((alpha / 2) as i64, (alpha % 2) as i64);
    let a: BTreeSet<usize> = (-1..beta + k).map(|i| topdec::koizumi_point(i, 'a')).collect();
    let b: BTreeSet<usize> = (-1..beta).map(|i| topdec::koizumi_point(i, 'b')).collect();
    let mut classes: Vec<BTreeSet<usize>> = Vec::new();
    for c in [a, b] {
        if !c.is_empty() {
            classes.push(c);
        }
    }
    let covered: BTreeSet<usize> = classes.iter().flatten().copied().collect();
    for p in 0..2 * (lambda + 1) {
        if !covered.contains(&p) {
            classes.push(BTreeSet::from([p]));
        }
    }
    classes.sort_by_key(|c| *c.first().unwrap());
    classes
}

fn gat_bounds(corpus: &Path, _: &GlobalOpts) -> Result<String> {
    let mut parts = Vec::new();
    for name in ["set", "cat", "ncat1", "ncat2", "ncat3", "moncat", "multicat", "dblcat", "nondescending"] {
        let spec = gatrank::parse_gat(&read(&corpus.join(format!("gat/{name}.gat")))?)?;
        let r = gatrank::rank_report(&spec)?;
        let v = match r.bound {
            Some(b) => b.to_string(),
            None => {
                let decls: Vec<String> = r.violations.iter().map(|v| v.decl.to_string()).collect();
                format!("none ({})", decls.join(", "))
            }
        };
        parts.push(format!("{name} {v}"));
    }
    Ok(parts.join(", "))
}

fn ncat2_gauge(corpus: &Path, g: &GlobalOpts) -> Result<String> {
    let th = load_theory(&corpus.join("theories/ncat2.pht"))?;
    let rules = ncat_gauge_rules(&th).ok_or_else(|| Error::Invalid("not an n-category theory".into()))?;
    let vars = [Term::var("x1", 0), Term::var("x2", 0)];
    let terms = terms_up_to(&th.sig, &vars, 2);
    let cert = check_gauge(&th, &equational_scale(&th), &rules, &terms, g.chase_budget())?;
    if cert.status == CertStatus::Incomplete {
        return Err(Error::BudgetExceeded);
    }
    Ok(format!(
        "{:?} on {} terms of depth <= 2 over x1,x2; gamma {}",
        cert.status,
        terms.len(),
        gamma(&rules, &terms)
    ))
}

fn ncat2_bound(corpus: &Path, g: &GlobalOpts) -> Result<String> {
    let spec = gatrank::parse_gat(&read(&corpus.join("gat/ncat2.gat"))?)?;
    let bound = gatrank::decnum_bound(&spec)?.ok_or_else(|| Error::Invalid("ncat2 spec is not non-descending".into()))?;
    let th = load_theory(&corpus.join("theories/ncat2.pht"))?;
    let f = hom_from_files(&th, corpus, "ncat2_X0.pm", "ncat2_X3.pm", "ncat2_F0.phom")?;
    let k = canonical_decomposition(&th, &equational_scale(&th), &f, g.decomp_budget())?
        .decnum()
        .ok_or(Error::NotStabilized(g.max_steps))?;
    let rel = if (k as u32) < bound { ">" } else { "<=" };
    Ok(format!("bound {bound} {rel} measured {k}"))
}
