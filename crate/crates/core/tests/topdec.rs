use horndec::topdec::*;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

fn corpus(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(rel)
}

fn set(xs: &[Point]) -> PointSet {
    xs.iter().copied().collect()
}

fn subsets(n: usize) -> impl Iterator<Item = PointSet> {
    (0u32..1 << n).map(move |bits| (0..n).filter(|&x| bits >> x & 1 == 1).collect())
}

/// Opens of the Koizumi space straight from the two conditions, over all subsets.
fn koizumi_opens_by_conditions(lambda: usize) -> Vec<PointSet> {
    let p = koizumi_point;
    subsets(2 * (lambda + 1))
        .filter(|u| {
            let first = u.contains(&p(-1, 'a')) == u.contains(&p(-1, 'b'));
            let second = (0..lambda as i64).all(|alpha| {
                !u.contains(&p(alpha, 'a')) || (-1..alpha).any(|beta| (beta..=alpha).all(|i| u.contains(&p(i, 'b'))))
            });
            first && second
        })
        .collect()
}

/// Connectedness by definition: no split into two disjoint nonempty relatively open parts.
fn connected_by_opens(opens: &[PointSet], k: &PointSet) -> bool {
    if k.is_empty() {
        return true;
    }
    let rel: BTreeSet<PointSet> = opens.iter().map(|u| u & k).collect();
    !rel.iter().any(|u| !u.is_empty() && u != k && rel.contains(&(k - u)))
}

/// `x ~ y` iff some connected `K` with `f(K)` constant contains both.
fn related_by_subspaces(f: &ContMap) -> Vec<Vec<bool>> {
    let n = f.source.len();
    let opens = f.source.opens();
    let mut rel = vec![vec![false; n]; n];
    for k in subsets(n) {
        let Some(&x0) = k.first() else { continue };
        if k.iter().any(|&x| f.apply(x) != f.apply(x0)) || !connected_by_opens(&opens, &k) {
            continue;
        }
        for &x in &k {
            for &y in &k {
                rel[x][y] = true;
            }
        }
    }
    rel
}

/// `[-1, β+k) × {a}` and `[-1, β) × {b}` at step `α = 2β + k`, everything else a singleton.
fn expected_classes(lambda: usize, alpha: usize) -> Vec<PointSet> {
    let (beta, k) = ((alpha / 2) as i64, (alpha % 2) as i64);
    let a: PointSet = (-1..beta + k).map(|i| koizumi_point(i, 'a')).collect();
    let b: PointSet = (-1..beta).map(|i| koizumi_point(i, 'b')).collect();
    let mut out: Vec<PointSet> = vec![a, b].into_iter().filter(|c| !c.is_empty()).collect();
    for x in 0..2 * (lambda + 1) {
        if !out.iter().any(|c| c.contains(&x)) {
            out.push(set(&[x]));
        }
    }
    out.sort_by_key(|c| *c.first().unwrap());
    out
}

fn is_monotone_quotient_by_brute_force(q: &ContMap) -> bool {
    let src_opens: BTreeSet<PointSet> = q.source.opens().into_iter().collect();
    let final_topology = subsets(q.target.len()).all(|v| q.target.is_open(&v) == src_opens.contains(&q.preimage(&v)));
    let src_opens: Vec<PointSet> = src_opens.into_iter().collect();
    q.is_surjective() && final_topology && q.target.points().all(|y| connected_by_opens(&src_opens, &q.fiber(y)))
}

fn load(rel: &str) -> ContMap {
    let j: MapJson = serde_json::from_str(&std::fs::read_to_string(corpus(rel)).unwrap()).unwrap();
    map_from_json(&j).unwrap()
}

#[test]
fn components_of_small_spaces() {
    let all = set(&[0, 1]);
    assert_eq!(connected_components(&FinSpace::indiscrete(2), &all).len(), 1);
    assert_eq!(connected_components(&FinSpace::discrete(2), &all).len(), 2);
    assert!(connected_components(&FinSpace::discrete(3), &PointSet::new()).is_empty());
}

#[test]
fn koizumi_a_fiber_is_connected_for_lambda_one() {
    let (x, _, f) = koizumi_space(1);
    let fiber = f.fiber(0);
    assert_eq!(fiber, set(&[koizumi_point(-1, 'a'), koizumi_point(0, 'a')]));
    assert_eq!(connected_components(&x, &fiber).len(), 1);
    assert!(connected_by_opens(&x.opens(), &fiber));
}

#[test]
fn components_agree_with_the_open_set_definition() {
    for lambda in 1..=3 {
        let (x, _, _) = koizumi_space(lambda);
        let opens = x.opens();
        for k in subsets(x.len()) {
            let comps = connected_components(&x, &k);
            assert_eq!(comps.len() <= 1, connected_by_opens(&opens, &k), "λ={lambda} {k:?}");
            assert!(comps.iter().all(|c| connected_by_opens(&opens, c)));
            assert_eq!(comps.iter().flatten().copied().collect::<PointSet>(), k);
        }
    }
}

#[test]
fn koizumi_spaces_match_the_open_set_conditions() {
    for lambda in 1..=4 {
        let (x, y, f) = koizumi_space(lambda);
        assert_eq!(x.len(), 2 * (lambda + 1));
        assert_eq!(y.len(), 2);
        assert_eq!(x.opens(), koizumi_opens_by_conditions(lambda), "λ={lambda}");
        assert!(f.is_surjective());
        assert!(y.opens().iter().all(|v| x.is_open(&f.preimage(v))));
    }
}

#[test]
fn invalid_spaces_and_maps_rejected() {
    let bad = FinSpace::new(vec!["p".into(), "q".into()], vec![set(&[0, 1]), set(&[0, 1, 2])]);
    assert!(bad.is_err());
    let not_closed = FinSpace::new(vec!["p".into(), "q".into(), "r".into()], vec![set(&[0, 1]), set(&[1, 2]), set(&[2])]);
    assert!(not_closed.is_err());
    // identity from the indiscrete to the discrete space is not continuous
    let r = ContMap::new(Arc::new(FinSpace::indiscrete(2)), Arc::new(FinSpace::discrete(2)), vec![0, 1]);
    assert!(r.is_err());
}

#[test]
fn koizumi_step_zero_merges_the_bottom_pair_of_a_points() {
    let (_, _, f) = koizumi_space(1);
    let (q, f1) = monotone_light_step(&f);
    let merged: Vec<PointSet> = q.target.points().map(|y| q.fiber(y)).filter(|c| c.len() > 1).collect();
    assert_eq!(merged, vec![set(&[koizumi_point(-1, 'a'), koizumi_point(0, 'a')])]);
    assert_eq!(q.target.len(), 3);
    assert_eq!(q.then(&f1), f);
}

#[test]
fn injective_maps_give_iso_steps() {
    let d = Arc::new(FinSpace::discrete(3));
    let (q, _) = monotone_light_step(&ContMap::identity(d.clone()));
    assert!(q.is_homeomorphism());
    let (_, _, f) = koizumi_space(2);
    let (q, _) = monotone_light_step(&ContMap::identity(f.source.clone()));
    assert!(q.is_homeomorphism());
}

#[test]
fn connected_fibers_collapse_in_one_step() {
    let s = Arc::new(FinSpace::indiscrete(3));
    let t = Arc::new(FinSpace::indiscrete(1));
    let f = ContMap::new(s, t, vec![0, 0, 0]).unwrap();
    let (q, f1) = monotone_light_step(&f);
    assert_eq!(q.target.len(), 1);
    assert!(f1.is_homeomorphism());
}

#[test]
fn identity_stabilizes_at_zero() {
    let (x, _, _) = koizumi_space(2);
    let t = monotone_light_decomposition(&ContMap::identity(x), 8).unwrap();
    assert_eq!(t.stabilization_index, Some(0));
}

#[test]
fn koizumi_stabilizes_at_twice_lambda_with_expected_classes() {
    for lambda in 1..=4 {
        let (_, _, f) = koizumi_space(lambda);
        let t = monotone_light_decomposition(&f, 4 * lambda + 4).unwrap();
        assert_eq!(t.stabilization_index, Some(2 * lambda), "λ={lambda}");
        for (alpha, step) in t.steps.iter().enumerate() {
            assert_eq!(step.classes, expected_classes(lambda, alpha), "λ={lambda} α={alpha}");
        }
        let sizes: Vec<usize> = t.steps.iter().map(|s| s.space.len()).collect();
        let expected: Vec<usize> = (0..=2 * lambda).map(|alpha| 2 * (lambda + 1) - alpha).collect();
        assert_eq!(sizes, expected);
    }
}

#[test]
fn step_budget_is_reported() {
    let (_, _, f) = koizumi_space(3);
    assert!(matches!(monotone_light_decomposition(&f, 3), Err(horndec::Error::NotStabilized(3))));
}

#[test]
fn every_quotient_is_monotone_and_the_tower_commutes() {
    let mut maps: Vec<ContMap> = (1..=3).map(|l| koizumi_space(l).2).collect();
    maps.push(load("spaces/fold.json"));
    for f in maps {
        let t = monotone_light_decomposition(&f, 16).unwrap();
        let k = t.stabilization_index.unwrap();
        for (alpha, step) in t.steps.iter().enumerate() {
            assert!(step.quotient.is_monotone_quotient());
            assert!(is_monotone_quotient_by_brute_force(&step.quotient), "α={alpha}");
            if alpha < k {
                assert_eq!(step.quotient.then(&t.steps[alpha + 1].leg), step.leg);
            }
        }
        assert!(t.steps[k].leg.is_light());
        assert!(t.steps[k].quotient.is_homeomorphism());
        assert!(t.steps[..k].iter().all(|s| !s.leg.is_light()));
    }
}

#[test]
fn component_and_subspace_relations_agree() {
    for lambda in 1..=2 {
        let (_, _, f) = koizumi_space(lambda);
        let t = monotone_light_decomposition(&f, 16).unwrap();
        for step in &t.steps {
            let rel = related_by_subspaces(&step.leg);
            let q = &step.quotient;
            for x in step.space.points() {
                for y in step.space.points() {
                    assert_eq!(rel[x][y], q.apply(x) == q.apply(y), "λ={lambda} {x} {y}");
                }
            }
        }
    }
}

#[test]
fn fold_example() {
    let f = load("spaces/fold.json");
    let t = monotone_light_decomposition(&f, 8).unwrap();
    assert_eq!(t.stabilization_index, Some(1));
    let j = trace_json(&t);
    assert_eq!(j.steps[1].classes, vec![vec!["p".to_string(), "q".to_string()]]);
}

#[test]
fn json_round_trip() {
    let f = koizumi_space(2).2;
    let j = map_to_json(&f);
    assert_eq!(map_from_json(&j).unwrap(), f);
    let stored: MapJson = serde_json::from_str(&std::fs::read_to_string(corpus("spaces/koizumi_2.json")).unwrap()).unwrap();
    assert_eq!(stored, j);
    let text = serde_json::to_string(&j).unwrap();
    assert_eq!(serde_json::from_str::<MapJson>(&text).unwrap(), j);
}
