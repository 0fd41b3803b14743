mod common;

use horndec::gauge::ncat_theory;
use horndec::syntax::{check_sequent, check_term, parse_context, parse_formula, parse_term, parse_theory, Signature, Term};
use horndec::Error;
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

const THEORIES: &[&str] = &["toy", "empty", "pointed", "ncat1", "ncat2", "ncat3", "omega", "omega1"];

#[test]
fn toy_theory_shape() {
    let th = common::theory("toy");
    assert_eq!(th.sig.sorts.len(), 1);
    assert_eq!(th.sig.funcs.len(), 4);
    // totality, then two bisequents of two sequents each
    assert_eq!(th.sequents.len(), 5);
}

#[test]
fn empty_theory_block() {
    let th = parse_theory("theory nothing { }").unwrap();
    assert!(th.sig.sorts.is_empty());
    assert!(th.sequents.is_empty());
}

#[test]
fn ncat2_sequent_count() {
    // Hand expansion for n = 2. Per level k: d_k d_k, c_k d_k, d_k c_k, c_k c_k
    // collapse as one sequent each with a chained conclusion counted once, the
    // definability bisequent as two, domain/codomain of composites, unit laws,
    // associativity: 7 sequents per level. For the pair (1,2): four families.
    let th = common::theory("ncat2");
    assert_eq!(th.sig.funcs.len(), 6);
    assert_eq!(th.sequents.len(), 7 * 2 + 4);
    assert_eq!(ncat_theory(1).sequents.len(), 7);
    assert_eq!(ncat_theory(3).sequents.len(), 7 * 3 + 4 * 3);
}

#[test]
fn check_term_examples() {
    let th = ncat_theory(2);
    let ctx = parse_context(&th.sig, "[x:*, y:*]").unwrap();
    let star = th.sig.sort_id("*").unwrap();
    for src in ["d1(x)", "comp1(x, y)"] {
        let t = parse_term(&th.sig, &ctx, src).unwrap();
        assert_eq!(check_term(&th.sig, &ctx, &t).unwrap(), star);
    }
    let toy = common::theory("toy");
    let err = parse_term(&toy.sig, &parse_context(&toy.sig, "[]").unwrap(), "f(a)").unwrap_err();
    assert!(err.to_string().contains("unknown symbol"), "{err}");
}

#[test]
fn arity_and_context_errors() {
    let th = ncat_theory(1);
    let ctx = parse_context(&th.sig, "[x:*]").unwrap();
    assert!(parse_term(&th.sig, &ctx, "d1(x, x)").is_err());
    assert!(parse_term(&th.sig, &ctx, "d1(y)").is_err());
    // the checker rejects the same terms when built by hand
    let d1 = th.sig.func_id("d1").unwrap();
    let bad = Term::app(d1, vec![Term::var("x", 0), Term::var("x", 0)]);
    assert!(check_term(&th.sig, &ctx, &bad).is_err());
    assert!(check_term(&th.sig, &ctx, &Term::app(d1, vec![Term::var("y", 0)])).is_err());
}

#[test]
fn parse_errors_carry_positions() {
    match parse_theory("theory t {\n  sort s;\n  func a : s\n}") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("expected a parse error, got {other:?}"),
    }
    let dup = parse_theory("theory t { sort s; sort s; }").unwrap_err();
    assert!(dup.to_string().contains("duplicate"), "{dup}");
    assert!(parse_theory("theory t { sort s; func a : s; func b : t; }").is_err());
}

#[test]
fn substitution_examples() {
    let th = ncat_theory(1);
    let sig = &th.sig;
    let ctx = parse_context(sig, "[z1:*, z2:*, x:*, u:*, v:*]").unwrap();
    let toy = common::theory("toy");
    let zeta = parse_formula(&toy.sig, &parse_context(&toy.sig, "[z1:*, z2:*]").unwrap(), "z1 = z2").unwrap();
    let empty = parse_context(&toy.sig, "[]").unwrap();
    let m: BTreeMap<String, Term> = [
        ("z1".to_string(), parse_term(&toy.sig, &empty, "a").unwrap()),
        ("z2".to_string(), parse_term(&toy.sig, &empty, "b").unwrap()),
    ]
    .into();
    assert_eq!(toy.sig.formula(&zeta.substitute(&toy.sig, &m).unwrap()), "a = b");

    let t = parse_term(sig, &ctx, "d1(x)").unwrap();
    let m: BTreeMap<String, Term> = [("x".to_string(), parse_term(sig, &ctx, "comp1(u, v)").unwrap())].into();
    assert_eq!(sig.term(&t.substitute(sig, &m).unwrap()), "d1(comp1(u, v))");

    // uncovered variable
    assert!(t.substitute(sig, &BTreeMap::new()).is_err());
}

#[test]
fn interchange_instance_matches_hand_expansion() {
    let th = ncat_theory(2);
    let sig = &th.sig;
    let ctx = parse_context(sig, "[x:*, x':*, y:*, y':*]").unwrap();
    let law = parse_formula(sig, &ctx, "comp1(comp2(x, x'), comp2(y, y')) = comp2(comp1(x, y), comp1(x', y'))").unwrap();
    let target = parse_context(sig, "[p:*, q:*, r:*, s:*]").unwrap();
    let m: BTreeMap<String, Term> =
        [("x", "p"), ("x'", "q"), ("y", "r"), ("y'", "s")].iter().map(|(a, b)| (a.to_string(), parse_term(sig, &target, b).unwrap())).collect();
    assert_eq!(
        sig.formula(&law.substitute(sig, &m).unwrap()),
        "comp1(comp2(p, q), comp2(r, s)) = comp2(comp1(p, r), comp1(q, s))"
    );
}

#[test]
fn free_variable_examples() {
    let th = ncat_theory(2);
    let ctx = parse_context(&th.sig, "[x:*, y:*, z:*]").unwrap();
    let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    assert_eq!(parse_term(&th.sig, &ctx, "d1(x)").unwrap().free_vars(), set(&["x"]));
    assert_eq!(parse_formula(&th.sig, &ctx, "top").unwrap().free_vars(), set(&[]));
    assert_eq!(parse_term(&th.sig, &ctx, "comp2(comp1(x, y), z)").unwrap().free_vars(), set(&["x", "y", "z"]));
}

#[test]
fn definedness_is_sugar_for_reflexive_equation() {
    let th = common::theory("toy");
    let ctx = parse_context(&th.sig, "[]").unwrap();
    let a = parse_formula(&th.sig, &ctx, "c!").unwrap().normalized();
    let b = parse_formula(&th.sig, &ctx, "c = c").unwrap().normalized();
    assert_eq!(a, b);
}

#[test]
fn print_parse_round_trip_on_corpus() {
    for name in THEORIES {
        let th = common::theory(name);
        let again = parse_theory(&th.to_source()).unwrap();
        assert_eq!(again, th, "{name}");
    }
}

#[test]
fn parsed_sequents_recheck() {
    for name in THEORIES {
        let th = common::theory(name);
        for seq in &th.sequents {
            check_sequent(&th.sig, seq).unwrap();
            for a in seq.premise.atoms().iter().chain(seq.conclusion.atoms()) {
                for t in a.terms() {
                    check_term(&th.sig, &seq.ctx, t).unwrap();
                }
            }
        }
    }
}

fn arb_term(sig: Signature, vars: Vec<&'static str>, depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop::sample::select(vars).prop_map(|v| Term::var(v, 0));
    leaf.prop_recursive(depth, 64, 2, move |inner| {
        let fs: Vec<(usize, usize)> = sig.funcs.iter().enumerate().map(|(i, f)| (i, f.inputs.len())).collect();
        (prop::sample::select(fs), prop::collection::vec(inner, 2))
            .prop_map(|((f, n), mut args)| {
                args.truncate(n);
                Term::app(f, args)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn substitution_composes(
        t in arb_term(ncat_theory(2).sig, vec!["x", "y", "z"], 4),
        m1 in prop::collection::vec(arb_term(ncat_theory(2).sig, vec!["u", "v"], 2), 3),
        m2 in prop::collection::vec(arb_term(ncat_theory(2).sig, vec!["x", "y"], 2), 2),
    ) {
        let sig = ncat_theory(2).sig;
        let m1: BTreeMap<String, Term> = ["x", "y", "z"].iter().map(|s| s.to_string()).zip(m1).collect();
        let m2: BTreeMap<String, Term> = ["u", "v"].iter().map(|s| s.to_string()).zip(m2).collect();
        let composed: BTreeMap<String, Term> = m1.iter().map(|(k, v)| (k.clone(), v.substitute(&sig, &m2).unwrap())).collect();
        let two_steps = t.substitute(&sig, &m1).unwrap().substitute(&sig, &m2).unwrap();
        prop_assert_eq!(two_steps, t.substitute(&sig, &composed).unwrap());
    }

    #[test]
    fn printed_terms_parse_back(t in arb_term(ncat_theory(3).sig, vec!["x", "y", "z"], 4)) {
        let th = ncat_theory(3);
        let ctx = parse_context(&th.sig, "[x:*, y:*, z:*]").unwrap();
        prop_assert_eq!(parse_term(&th.sig, &ctx, &th.sig.term(&t)).unwrap(), t);
    }
}
