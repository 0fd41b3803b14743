//! One PASS/FAIL line per acceptance criterion. All comparisons are exact; the randomized
//! suites use fixed seeds and report how many cases were decided.

mod common;

use clap::Parser;
use horndec::chase::{chase, ChaseBudget, Presentation};
use horndec::cli::{run, RunConfig};
use horndec::decompose::{canonical_decomposition, decnum, equational_scale, parse_scale, DecompBudget};
use horndec::gatrank::{decnum_bound, parse_gat, rank_report, Declaration};
use horndec::gauge::{check_gauge, gamma, parse_gauge_rules, terms_up_to, CertStatus};
use horndec::structure::{find_isomorphism, PartialStructure};
use horndec::syntax::{parse_formula, Context, Theory};
use horndec::topdec::{koizumi_point, koizumi_space, monotone_light_decomposition, PointSet};
use horndec::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn holds(th: &Theory, m: &PartialStructure, src: &str) -> bool {
    m.holds(&Default::default(), &parse_formula(&th.sig, &Context::empty(), src).unwrap())
}

fn budget() -> DecompBudget {
    DecompBudget::default()
}

fn toy_decnum() -> Outcome {
    let (th, f) = common::morphism(0);
    let t = canonical_decomposition(&th, &equational_scale(&th), &f, budget()).map_err(|e| e.to_string())?;
    let models = t.models();
    ensure(t.decnum() == Some(3), || format!("decnum {:?}", t.decnum()))?;
    let (m1, m2) = (&models[1], &models[2]);
    ensure(m1.len() == 2 && holds(&th, m1, "a = b & c!") && !holds(&th, m1, "a = c") && !holds(&th, m1, "d!"), || {
        "first intermediate model is not {a=b, c}".into()
    })?;
    ensure(m2.len() == 2 && holds(&th, m2, "a = b & b = c & d!") && !holds(&th, m2, "a = d"), || {
        "second intermediate model is not {a=b=c, d}".into()
    })?;
    Ok("decnum 3; intermediate models {a=b,c}, {a=b=c,d} with 2 and 2 elements".into())
}

fn toy_gauge() -> Outcome {
    let th = common::theory("toy");
    let scale = parse_scale(&th, &std::fs::read_to_string(common::corpus("scales/toy.scale")).unwrap()).unwrap();
    let rules = parse_gauge_rules(&th, &scale, &std::fs::read_to_string(common::corpus("rules/toy.gauge")).unwrap()).unwrap();
    let terms = terms_up_to(&th.sig, &[], 1);
    let cert = check_gauge(&th, &scale, &rules, &terms, ChaseBudget::default()).map_err(|e| e.to_string())?;
    ensure(cert.status == CertStatus::Certified, || format!("gauge {:?}", cert.status))?;
    let sharps: Vec<(String, u32)> = cert.checks.iter().map(|c| (c.term.clone(), c.sharp)).collect();
    let expected: Vec<(String, u32)> = [("a", 0), ("b", 0), ("c", 1), ("d", 2)].iter().map(|(s, k)| (s.to_string(), *k)).collect();
    ensure(sharps == expected, || format!("sharps {sharps:?}"))?;
    let defs: Vec<&str> = cert.checks.iter().map(|c| c.defining.as_str()).collect();
    ensure(defs == ["top", "top", "a = b & a! & b!", "a = c & a! & c!"], || format!("defining sets {defs:?}"))?;
    ensure(gamma(&rules, &terms) == 3, || "gauge bound is not 3".into())?;
    let pool = common::constant_models(&th, 3);
    let homs = common::homs_within(&pool);
    let eq = equational_scale(&th);
    let mut worst = 0;
    for f in &homs {
        worst = worst.max(decnum(&th, &eq, f, budget()).map_err(|e| e.to_string())?);
    }
    ensure(worst <= 3, || format!("a hom has decnum {worst} > 3"))?;
    Ok(format!("certified #a=#b=0 #c=1 #d=2; {} homs between {} models, max decnum {worst} <= 3", homs.len(), pool.len()))
}

fn cat_functor() -> Outcome {
    let (th, f) = common::morphism(1);
    let t = canonical_decomposition(&th, &equational_scale(&th), &f, budget()).map_err(|e| e.to_string())?;
    ensure(t.decnum() == Some(2), || format!("decnum {:?}", t.decnum()))?;
    let e = &t.steps[0].step;
    let src = &f.source;
    let comp = th.sig.func_id("comp1").unwrap();
    let id = |n: &str| e.apply(src.id_of(n).unwrap());
    let gf = e.target.func(comp, &[id("g"), id("f")]).ok_or("g.f undefined after step 1")?;
    ensure(gf != id("h") && src.elements().all(|m| e.apply(m) != gf), || "g.f is not a fresh element distinct from h".into())?;
    ensure(t.steps[2].leg.is_iso(), || "step 2 leg is not an iso".into())?;
    Ok(format!("decnum 2; step 1 has {} elements with fresh g.f != h; step 2 iso to target", e.target.len()))
}

fn twocat_functor() -> Outcome {
    let (th, f) = common::morphism(2);
    let t = canonical_decomposition(&th, &equational_scale(&th), &f, budget()).map_err(|e| e.to_string())?;
    ensure(t.decnum() == Some(3), || format!("decnum {:?}", t.decnum()))?;
    let models = t.models();
    for (i, m) in models.iter().enumerate() {
        let expected = common::model(&th, &format!("ncat2_X{i}"));
        ensure(find_isomorphism(m, &expected).is_some(), || format!("step {i} is not isomorphic to X{i}"))?;
    }
    let sizes: Vec<String> = models.iter().map(|m| m.len().to_string()).collect();
    Ok(format!("decnum 3; steps isomorphic to X0..X3 (sizes {})", sizes.join(",")))
}

fn omega() -> Outcome {
    let th = common::theory("omega");
    let scale = equational_scale(&th);
    let mut got = Vec::new();
    for n in 0..=6 {
        let f = common::hom(&th, &format!("omega_M{n}"), "omega_T", &format!("omega_bang{n}"));
        let k = decnum(&th, &scale, &f, budget()).map_err(|e| e.to_string())?;
        ensure(k == n + 1, || format!("decnum(!_{n}) = {k}"))?;
        got.push(k.to_string());
    }
    Ok(format!("decnum(!_n) for n=0..6: {}", got.join(",")))
}

fn omega_plus_one() -> Outcome {
    let (th, f) = common::morphism(6);
    let scale = equational_scale(&th);
    match decnum(&th, &scale, &f, DecompBudget { max_steps: 7, ..budget() }) {
        Err(Error::NotStabilized(7)) => {}
        other => return Err(format!("expected no stabilization within 7 steps, got {other:?}")),
    }
    let t = canonical_decomposition(&th, &scale, &f, budget()).map_err(|e| e.to_string())?;
    ensure(t.decnum() == Some(9), || format!("truncated decnum {:?}", t.decnum()))?;
    let models = t.models();
    let sizes: Vec<usize> = models.iter().map(|m| m.len()).collect();
    ensure(sizes == [vec![2; 9], vec![1]].concat(), || format!("sizes {sizes:?}"))?;
    for (k, m) in models.iter().enumerate().skip(1) {
        let merged = holds(&th, m, &format!("c_{} = b", k - 1));
        let next_apart = k >= 9 || !holds(&th, m, &format!("c_{} = b", k));
        ensure(merged && next_apart, || format!("step {k} does not identify exactly c_{} with b", k - 1))?;
    }
    Ok("not stabilized after 7 steps; truncation at c_8 stabilizes at 9, step k identifies c_(k-1) with b".into())
}

fn expected_classes(lambda: usize, alpha: usize) -> Vec<PointSet> {
    let (beta, k) = ((alpha / 2) as i64, (alpha % 2) as i64);
    let a: PointSet = (-1..beta + k).map(|i| koizumi_point(i, 'a')).collect();
    let b: PointSet = (-1..beta).map(|i| koizumi_point(i, 'b')).collect();
    let mut out: Vec<PointSet> = vec![a, b].into_iter().filter(|c| !c.is_empty()).collect();
    for x in 0..2 * (lambda + 1) {
        if !out.iter().any(|c| c.contains(&x)) {
            out.push(PointSet::from([x]));
        }
    }
    out.sort_by_key(|c| *c.first().unwrap());
    out
}

fn koizumi() -> Outcome {
    let mut idx = Vec::new();
    for lambda in 1..=3 {
        let (_, _, f) = koizumi_space(lambda);
        let t = monotone_light_decomposition(&f, 4 * lambda + 4).map_err(|e| e.to_string())?;
        ensure(t.stabilization_index == Some(2 * lambda), || format!("λ={lambda}: stabilizes at {:?}", t.stabilization_index))?;
        for (alpha, s) in t.steps.iter().enumerate() {
            ensure(s.classes == expected_classes(lambda, alpha), || format!("λ={lambda} α={alpha}: classes {:?}", s.classes))?;
        }
        idx.push(format!("λ={lambda}: {}", 2 * lambda));
    }
    Ok(format!("stabilization {}; classes as expected at every step", idx.join(", ")))
}

fn gat_bounds() -> Outcome {
    let read = |n: &str| parse_gat(&std::fs::read_to_string(common::corpus(&format!("gat/{n}.gat"))).unwrap()).unwrap();
    let expected = [("cat", 3), ("ncat1", 3), ("ncat2", 4), ("ncat3", 5), ("moncat", 3), ("multicat", 3), ("dblcat", 4)];
    let mut got = Vec::new();
    for (name, b) in expected {
        let bound = decnum_bound(&read(name)).map_err(|e| e.to_string())?;
        ensure(bound == Some(b), || format!("{name}: bound {bound:?}, expected {b}"))?;
        got.push(format!("{name} {b}"));
    }
    let r = rank_report(&read("nondescending")).map_err(|e| e.to_string())?;
    let flagged: Vec<&Declaration> = r.violations.iter().map(|v| &v.decl).collect();
    ensure(r.bound.is_none() && flagged == [&Declaration::Axiom(1)], || format!("nondescending: {:?}", r.violations))?;
    Ok(format!("bounds {}; violation on axiom 2 of the non-descending example", got.join(", ")))
}

fn full_corpus_json() -> String {
    let mut out = String::new();
    let cfg = RunConfig::try_parse_from(["horndec", "--format", "json", "examples"]).unwrap();
    out += &run(&cfg).output;
    for &(t, a, b, h) in common::MORPHISMS {
        let th = format!("theories/{t}.pht");
        let (from, to, hom) = (format!("models/{a}.pm"), format!("models/{b}.pm"), format!("homs/{h}.phom"));
        let args = ["decompose", "--theory", &th, "--from", &from, "--to", &to, "--hom", &hom].map(|s| match s {
            "decompose" | "--theory" | "--from" | "--to" | "--hom" => s.to_string(),
            rel => common::corpus(rel).display().to_string(),
        });
        let cfg = RunConfig::try_parse_from(["horndec", "--format", "json", "--max-steps", "12"].into_iter().map(String::from).chain(args)).unwrap();
        out += &run(&cfg).output;
    }
    for (t, p) in [("ncat1", "cat_C0"), ("ncat1", "cat_C2"), ("ncat2", "ncat2_X")] {
        let th = common::theory(t);
        let doc = horndec::cli::load_model(&th, &common::corpus(&format!("presentations/{p}.pm"))).unwrap();
        let r = chase(&th, &Presentation { base: doc.structure, forced: Vec::new() }, ChaseBudget::default());
        out += &format!("{:?}\n", r);
    }
    out
}

fn properties() -> Outcome {
    let mut report = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(9001);
    let (mut decided, mut skipped, mut targets) = (0, 0, 0);
    while decided < 100 {
        match common::universal_property_case(&mut rng) {
            None => skipped += 1,
            Some(r) => {
                targets += r.map_err(|e| format!("(a) {e}"))?;
                decided += 1;
            }
        }
        ensure(skipped <= 1000, || "(a) too many presentations exceeded the chase budget".into())?;
    }
    report.push(format!("(a) 100 cases, {targets} target models, {skipped} redrawn"));

    let pool = common::coequalizer_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(9002);
    let (mut decided, mut skipped, mut maps) = (0, 0, 0);
    while decided < 50 {
        match common::coequalizer_case(&mut rng, &pool).map_err(|e| format!("(b) {e}"))? {
            Some(k) => {
                maps += k;
                decided += 1;
            }
            None => skipped += 1,
        }
        ensure(skipped <= 1000, || "(b) too many steps with a large quotient".into())?;
    }
    report.push(format!("(b) 50 cases, {maps} cocones, {skipped} redrawn"));

    let mut rng = ChaCha8Rng::seed_from_u64(9003);
    for _ in 0..200 {
        common::normalization_case(&mut rng).map_err(|e| format!("(c) {e}"))?;
    }
    report.push("(c) 200 terms Valid".into());

    let pool = common::preservation_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(9004);
    let mut hits = 0;
    for _ in 0..200 {
        hits += common::hom_preservation_case(&mut rng, &pool).map_err(|e| format!("(d) {e}"))?;
    }
    report.push(format!("(d) 200 pairs, {hits} satisfying assignments preserved"));

    let runs: Vec<String> = (0..3).map(|_| full_corpus_json()).collect();
    ensure(runs[0] == runs[1] && runs[1] == runs[2], || "(e) full-corpus runs differ".into())?;
    report.push(format!("(e) 3 runs, {} bytes each, identical", runs[0].len()));
    Ok(report.join("; "))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("toy decnum", toy_decnum),
        ("toy gauge", toy_gauge),
        ("Cat functor", cat_functor),
        ("2-Cat functor", twocat_functor),
        ("omega truncation", omega),
        ("omega+1 truncation", omega_plus_one),
        ("Koizumi", koizumi),
        ("GAT bounds", gat_bounds),
        ("property suite", properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS {} {name} [exact] ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name} [exact] ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
