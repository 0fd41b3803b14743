//! Finite topological spaces and the monotone-quotient / light decomposition of continuous maps.
//!
//! A finite space is stored by the minimal open neighbourhood `U(x)` of each point.
//! The specialization preorder is `x ≤ y` iff `y ∈ U(x)`; a subspace is connected
//! exactly when its comparability graph is.
//!
//! Two points `x, y` with `f(x) = f(y)` lie in a common connected `K` with `f(K)`
//! constant iff they lie in the same connected component of the fiber: such a `K`
//! sits inside the fiber, hence inside one of its components, and the component
//! itself is such a `K`. [`monotone_light_step`] uses the component form.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub type Point = usize;
pub type PointSet = BTreeSet<Point>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSpace {
    labels: Vec<String>,
    min_open: Vec<PointSet>,
}

impl FinSpace {
    /// Checks `x ∈ U(x)` and `y ∈ U(x) ⇒ U(y) ⊆ U(x)`.
    pub fn new(labels: Vec<String>, min_open: Vec<PointSet>) -> Result<FinSpace> {
        if labels.len() != min_open.len() {
            return Err(Error::Invalid("one minimal open set per point is required".into()));
        }
        let n = labels.len();
        for (x, u) in min_open.iter().enumerate() {
            if !u.contains(&x) {
                return Err(Error::Invalid(format!("{} is not in its minimal open set", labels[x])));
            }
            if let Some(&y) = u.iter().find(|&&y| y >= n) {
                return Err(Error::Invalid(format!("point {y} out of range")));
            }
            if let Some(&y) = u.iter().find(|&&y| !min_open[y].is_subset(u)) {
                return Err(Error::Invalid(format!("U({}) is not contained in U({})", labels[y], labels[x])));
            }
        }
        Ok(FinSpace { labels, min_open })
    }

    pub fn discrete(n: usize) -> FinSpace {
        let min_open = (0..n).map(|x| PointSet::from([x])).collect();
        FinSpace { labels: (0..n).map(|x| x.to_string()).collect(), min_open }
    }

    pub fn indiscrete(n: usize) -> FinSpace {
        let all: PointSet = (0..n).collect();
        FinSpace { labels: (0..n).map(|x| x.to_string()).collect(), min_open: vec![all; n] }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<Point> {
        0..self.len()
    }

    pub fn label(&self, x: Point) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn point(&self, label: &str) -> Option<Point> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn min_open(&self, x: Point) -> &PointSet {
        &self.min_open[x]
    }

    pub fn is_open(&self, u: &PointSet) -> bool {
        u.iter().all(|&x| self.min_open[x].is_subset(u))
    }

    /// All open sets, by enumeration of subsets. Small spaces only.
    pub fn opens(&self) -> Vec<PointSet> {
        assert!(self.len() <= 20, "too many points to enumerate opens");
        (0u32..1 << self.len())
            .map(|bits| self.points().filter(|&x| bits >> x & 1 == 1).collect::<PointSet>())
            .filter(|u| self.is_open(u))
            .collect()
    }

    /// Smallest open set containing `s`.
    pub fn open_hull(&self, s: &PointSet) -> PointSet {
        s.iter().flat_map(|&x| self.min_open[x].iter().copied()).collect()
    }
}

/// Connected components of the subspace `subset`, ordered by least point.
pub fn connected_components(s: &FinSpace, subset: &PointSet) -> Vec<PointSet> {
    let mut seen = PointSet::new();
    let mut out = Vec::new();
    for &x in subset {
        if !seen.insert(x) {
            continue;
        }
        let mut comp = PointSet::from([x]);
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for &z in subset {
                let comparable = s.min_open(y).contains(&z) || s.min_open(z).contains(&y);
                if comparable && seen.insert(z) {
                    comp.insert(z);
                    stack.push(z);
                }
            }
        }
        out.push(comp);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContMap {
    pub source: Arc<FinSpace>,
    pub target: Arc<FinSpace>,
    map: Vec<Point>,
}

impl ContMap {
    /// Checks that the preimage of every minimal open set is open.
    pub fn new(source: Arc<FinSpace>, target: Arc<FinSpace>, map: Vec<Point>) -> Result<ContMap> {
        if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
            return Err(Error::Invalid("point map does not match the spaces".into()));
        }
        let f = ContMap { source, target, map };
        for y in f.target.points() {
            let pre = f.preimage(f.target.min_open(y));
            if !f.source.is_open(&pre) {
                return Err(Error::Invalid(format!("preimage of U({}) is not open", f.target.label(y))));
            }
        }
        Ok(f)
    }

    pub fn identity(s: Arc<FinSpace>) -> ContMap {
        let map = s.points().collect();
        ContMap { source: s.clone(), target: s, map }
    }

    pub fn apply(&self, x: Point) -> Point {
        self.map[x]
    }

    pub fn preimage(&self, v: &PointSet) -> PointSet {
        self.source.points().filter(|x| v.contains(&self.map[*x])).collect()
    }

    pub fn fiber(&self, y: Point) -> PointSet {
        self.source.points().filter(|&x| self.map[x] == y).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ContMap) -> ContMap {
        assert!(Arc::ptr_eq(&self.target, &other.source) || *self.target == *other.source);
        let map = self.map.iter().map(|&y| other.map[y]).collect();
        ContMap { source: self.source.clone(), target: other.target.clone(), map }
    }

    pub fn is_injective(&self) -> bool {
        self.map.iter().collect::<BTreeSet<_>>().len() == self.map.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.map.iter().collect::<BTreeSet<_>>().len() == self.target.len()
    }

    /// Homeomorphism: bijective with continuous inverse.
    pub fn is_homeomorphism(&self) -> bool {
        self.is_injective()
            && self.is_surjective()
            && self.source.points().all(|x| {
                let image: PointSet = self.source.min_open(x).iter().map(|&y| self.map[y]).collect();
                image == *self.target.min_open(self.map[x])
            })
    }

    /// Surjective, and the target carries the final topology.
    pub fn is_quotient(&self) -> bool {
        self.is_surjective()
            && self.target.points().all(|y| {
                let hull = saturated_hull(&self.source, &self.map, &self.fiber(y));
                hull.iter().map(|&x| self.map[x]).collect::<PointSet>() == *self.target.min_open(y)
            })
    }

    /// Quotient map with connected fibers.
    pub fn is_monotone_quotient(&self) -> bool {
        self.is_quotient() && self.target.points().all(|y| connected_components(&self.source, &self.fiber(y)).len() == 1)
    }

    /// Every fiber is totally disconnected.
    pub fn is_light(&self) -> bool {
        self.target.points().all(|y| connected_components(&self.source, &self.fiber(y)).iter().all(|c| c.len() == 1))
    }
}

/// Smallest open set containing `s` that is a union of fibers of `q`.
fn saturated_hull(space: &FinSpace, q: &[Point], s: &PointSet) -> PointSet {
    let mut cur = s.clone();
    loop {
        let classes: PointSet = cur.iter().map(|&x| q[x]).collect();
        let sat: PointSet = space.points().filter(|x| classes.contains(&q[*x])).collect();
        let next = space.open_hull(&sat);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Quotient of `s` by a partition, with the final topology.
pub fn quotient_space(s: &Arc<FinSpace>, classes: &[PointSet]) -> ContMap {
    let mut q = vec![usize::MAX; s.len()];
    for (i, c) in classes.iter().enumerate() {
        for &x in c {
            q[x] = i;
        }
    }
    assert!(q.iter().all(|&i| i != usize::MAX), "classes must cover the space");
    let labels = classes
        .iter()
        .map(|c| match c.len() {
            1 => s.label(*c.first().unwrap()).to_string(),
            _ => format!("{{{}}}", c.iter().map(|&x| s.label(x)).collect::<Vec<_>>().join(",")),
        })
        .collect();
    let min_open = classes
        .iter()
        .map(|c| saturated_hull(s, &q, c).iter().map(|&x| q[x]).collect())
        .collect();
    let target = Arc::new(FinSpace { labels, min_open });
    ContMap { source: s.clone(), target, map: q }
}

/// Factors `f` as `f′ ∘ q`, with `q` collapsing each connected component of each fiber.
pub fn monotone_light_step(f: &ContMap) -> (ContMap, ContMap) {
    let mut classes: Vec<PointSet> = f.target.points().flat_map(|y| connected_components(&f.source, &f.fiber(y))).collect();
    classes.sort_by_key(|c| *c.first().unwrap());
    let q = quotient_space(&f.source, &classes);
    let map = classes.iter().map(|c| f.apply(*c.first().unwrap())).collect();
    let f_next = ContMap { source: q.target.clone(), target: f.target.clone(), map };
    (q, f_next)
}

#[derive(Debug, Clone)]
pub struct TopStep {
    /// `X_α`.
    pub space: Arc<FinSpace>,
    /// `f_α : X_α → Y`.
    pub leg: ContMap,
    /// `X_α → X_{α+1}`.
    pub quotient: ContMap,
    /// Kernel classes of `X_0 → X_α`, as sets of points of `X_0`.
    pub classes: Vec<PointSet>,
}

#[derive(Debug, Clone)]
pub struct TopTrace {
    pub steps: Vec<TopStep>,
    /// First α whose quotient is a homeomorphism.
    pub stabilization_index: Option<usize>,
}

/// Iterates [`monotone_light_step`] until the quotient is a homeomorphism.
pub fn monotone_light_decomposition(f: &ContMap, max_steps: usize) -> Result<TopTrace> {
    let mut steps = Vec::new();
    let mut leg = f.clone();
    let mut to_current = ContMap::identity(f.source.clone());
    for alpha in 0..=max_steps {
        let (q, f_next) = monotone_light_step(&leg);
        let mut kernel: BTreeMap<Point, PointSet> = BTreeMap::new();
        for x in f.source.points() {
            kernel.entry(to_current.apply(x)).or_default().insert(x);
        }
        let mut classes: Vec<PointSet> = kernel.into_values().collect();
        classes.sort_by_key(|c| *c.first().unwrap());
        let done = q.is_injective();
        steps.push(TopStep { space: leg.source.clone(), leg: leg.clone(), quotient: q.clone(), classes });
        if done {
            debug_assert!(leg.is_light());
            return Ok(TopTrace { steps, stabilization_index: Some(alpha) });
        }
        to_current = to_current.then(&q);
        leg = f_next;
    }
    Err(Error::NotStabilized(max_steps))
}

/// Points `(i, tag)` with `-1 ≤ i < λ` and `tag ∈ {a, b}`, numbered `2(i+1) + [tag = b]`.
pub fn koizumi_point(index: i64, tag: char) -> Point {
    assert!(index >= -1 && (tag == 'a' || tag == 'b'));
    2 * (index + 1) as usize + usize::from(tag == 'b')
}

/// `X = [-1, λ) × {a, b}`, `Y` the indiscrete space on `{a, b}`, `f` the second projection.
///
/// `U ⊆ X` is open iff `(-1,a) ∈ U ⇔ (-1,b) ∈ U`, and `(α,a) ∈ U` for `α ≥ 0` implies
/// `[β, α] × {b} ⊆ U` for some `β < α`. The least such set around `(α,a)` takes `β = α − 1`.
pub fn koizumi_space(lambda: usize) -> (Arc<FinSpace>, Arc<FinSpace>, ContMap) {
    assert!(lambda >= 1, "λ must be positive");
    let mut labels = Vec::new();
    let mut min_open = Vec::new();
    for i in -1..lambda as i64 {
        for tag in ['a', 'b'] {
            labels.push(format!("<{i},{tag}>"));
            let u: PointSet = match (i, tag) {
                (-1, _) => [koizumi_point(-1, 'a'), koizumi_point(-1, 'b')].into(),
                (_, 'b') => [koizumi_point(i, 'b')].into(),
                _ => {
                    let mut u = PointSet::from([koizumi_point(i, 'a'), koizumi_point(i, 'b'), koizumi_point(i - 1, 'b')]);
                    if i == 0 {
                        u.insert(koizumi_point(-1, 'a'));
                    }
                    u
                }
            };
            min_open.push(u);
        }
    }
    let x = Arc::new(FinSpace::new(labels, min_open).expect("valid finite topology"));
    let y = Arc::new(FinSpace { labels: vec!["a".into(), "b".into()], min_open: vec![[0, 1].into(), [0, 1].into()] });
    let map = x.points().map(|p| p % 2).collect();
    let f = ContMap::new(x.clone(), y.clone(), map).expect("projection is continuous");
    (x, y, f)
}

/// A continuous map between finite spaces, in JSON form.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpaceJson {
    pub points: Vec<String>,
    #[serde(rename = "minOpen")]
    pub min_open: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MapJson {
    pub source: SpaceJson,
    pub target: SpaceJson,
    pub map: BTreeMap<String, String>,
}

fn space_from_json(j: &SpaceJson) -> Result<FinSpace> {
    let index: BTreeMap<&str, Point> = j.points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
    if index.len() != j.points.len() {
        return Err(Error::Invalid("duplicate point names".into()));
    }
    let look = |p: &str| index.get(p).copied().ok_or_else(|| Error::UnknownSymbol(p.to_string()));
    let mut min_open = vec![PointSet::new(); j.points.len()];
    for (p, u) in &j.min_open {
        min_open[look(p)?] = u.iter().map(|q| look(q)).collect::<Result<_>>()?;
    }
    for (i, u) in min_open.iter_mut().enumerate() {
        u.insert(i);
    }
    FinSpace::new(j.points.clone(), min_open)
}

pub fn space_to_json(s: &FinSpace) -> SpaceJson {
    SpaceJson {
        points: s.labels.clone(),
        min_open: s
            .points()
            .map(|x| (s.labels[x].clone(), s.min_open[x].iter().map(|&y| s.labels[y].clone()).collect()))
            .collect(),
    }
}

/// Reads a map; points missing from `minOpen` get `{x}`.
pub fn map_from_json(j: &MapJson) -> Result<ContMap> {
    let s = Arc::new(space_from_json(&j.source)?);
    let t = Arc::new(space_from_json(&j.target)?);
    let map = s
        .points()
        .map(|x| {
            let y = j.map.get(s.label(x)).ok_or_else(|| Error::Invalid(format!("{} is not mapped", s.label(x))))?;
            t.point(y).ok_or_else(|| Error::UnknownSymbol(y.clone()))
        })
        .collect::<Result<_>>()?;
    ContMap::new(s, t, map)
}

pub fn map_to_json(f: &ContMap) -> MapJson {
    MapJson {
        source: space_to_json(&f.source),
        target: space_to_json(&f.target),
        map: f.source.points().map(|x| (f.source.label(x).to_string(), f.target.label(f.apply(x)).to_string())).collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TopStepJson {
    pub index: usize,
    pub points: usize,
    pub classes: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TopTraceJson {
    pub version: u32,
    pub steps: Vec<TopStepJson>,
    pub stabilized: bool,
    #[serde(rename = "stabilizationIndex")]
    pub stabilization_index: Option<usize>,
}

/// Trace with the non-singleton kernel classes of each step, labelled in `X_0`.
pub fn trace_json(t: &TopTrace) -> TopTraceJson {
    let x0 = &t.steps[0].space;
    TopTraceJson {
        version: 1,
        steps: t
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| TopStepJson {
                index: i,
                points: s.space.len(),
                classes: s
                    .classes
                    .iter()
                    .filter(|c| c.len() > 1)
                    .map(|c| c.iter().map(|&x| x0.label(x).to_string()).collect())
                    .collect(),
            })
            .collect(),
        stabilized: t.stabilization_index.is_some(),
        stabilization_index: t.stabilization_index,
    }
}
