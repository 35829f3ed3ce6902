//! The coned-off graph Ĝ: the Cayley graph with every pair of distinct
//! vertices of each peripheral coset joined by an edge.
//!
//! For the standard generating set `d̂` has a closed form (one per peripheral
//! syllable, factor length per non-peripheral syllable). Otherwise Ĝ is
//! explored by BFS over a word ball, with clique edges restricted to the
//! ball. A value is certified when every Ĝ-geodesic realising it provably
//! stays inside the ball:
//!
//! * standard generators: Ĝ-geodesics from `e` to `g` only visit vertices of
//!   word length at most `|g|`, so `|g| ≤ R` suffices;
//! * finite peripheral factors whose elements all have word length at most
//!   `K`: a vertex of a Ĝ-geodesic of length `d` has word length at most
//!   `(|g| + K·d) / 2`, which must be at most `R`.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Ball, Element, GroupSpec};
use crate::metric::{MetricBackend, VertexPath};
use crate::peripheral::{cosets_through, Coset};

/// Rule used by [`check_bcp`] to decide whether a path crosses a coset.
pub const BCP_EDGE_RULE: &str = "every edge whose endpoints both lie in P, Cayley or cone";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum HatEdge {
    Cayley(String),
    Cone(Coset),
}

impl HatEdge {
    /// `cay:<label>` or `cone:H<i>@<rep>`.
    pub fn label(&self, spec: &GroupSpec) -> String {
        match self {
            HatEdge::Cayley(l) => format!("cay:{l}"),
            HatEdge::Cone(c) => format!("cone:H{}@{}", c.factor, spec.format(&c.rep)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HatPath {
    pub vertices: Vec<Element>,
    pub edges: Vec<HatEdge>,
}

impl HatPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> &Element {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Element {
        self.vertices.last().expect("paths are nonempty")
    }

    /// Labels every step between consecutive vertices, preferring a Cayley
    /// edge when both kinds join the pair.
    pub fn from_vertices(spec: &GroupSpec, vertices: Vec<Element>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidGroup("empty path".into()));
        }
        let edges = vertices.windows(2).map(|w| edge_between(spec, &w[0], &w[1])).collect::<Result<_>>()?;
        Ok(Self { vertices, edges })
    }

    pub fn translate(&self, spec: &GroupSpec, g: &Element) -> Self {
        let vertices: Vec<_> = self.vertices.iter().map(|v| spec.mul(g, v)).collect();
        Self::from_vertices(spec, vertices).expect("translates of paths are paths")
    }

    /// Index `k` of the first edge `(vₖ, vₖ₊₁)` with both endpoints in the coset.
    pub fn edge_in(&self, coset: &Coset) -> Option<usize> {
        (0..self.len()).find(|&k| coset.contains(&self.vertices[k]) && coset.contains(&self.vertices[k + 1]))
    }

    /// Edge labels in the serialized syntax.
    pub fn labels(&self, spec: &GroupSpec) -> Vec<String> {
        self.edges.iter().map(|e| e.label(spec)).collect()
    }
}

fn edge_between(spec: &GroupSpec, v: &Element, w: &Element) -> Result<HatEdge> {
    if let Some(l) = spec.edge_label(v, w) {
        return Ok(HatEdge::Cayley(l.to_string()));
    }
    if v != w {
        let wc = cosets_through(spec, w);
        if let Some(c) = cosets_through(spec, v).into_iter().find(|c| wc.contains(c)) {
            return Ok(HatEdge::Cone(c));
        }
    }
    Err(Error::InvalidGroup(format!("{} and {} are not adjacent in the coned-off graph", spec.format(v), spec.format(w))))
}

/// Closed-form coned-off distance for the standard generating set.
pub fn dist_hat_exact(spec: &GroupSpec, x: &Element, y: &Element) -> Result<u32> {
    if !spec.is_standard() {
        return Err(Error::UnsupportedMode);
    }
    Ok(spec
        .between(x, y)
        .syllables()
        .iter()
        .map(|s| if spec.is_peripheral(s.factor) { 1 } else { spec.factor(s.factor).len(&s.elem) })
        .sum())
}

/// Deterministic closed-form Ĝ-geodesic: Cayley steps through
/// non-peripheral syllables, one edge per peripheral syllable.
pub fn geodesic_hat_exact(spec: &GroupSpec, x: &Element, y: &Element) -> Result<HatPath> {
    if !spec.is_standard() {
        return Err(Error::UnsupportedMode);
    }
    let w = spec.between(x, y);
    let mut vertices = vec![x.clone()];
    let mut edges = Vec::new();
    for s in w.syllables() {
        let base = vertices.last().expect("nonempty").clone();
        let f = spec.factor(s.factor);
        if spec.is_peripheral(s.factor) {
            let next = spec.mul(&base, &spec.element_of_factor(s.factor, s.elem)?);
            let edge = edge_between(spec, &base, &next)?;
            vertices.push(next);
            edges.push(edge);
        } else {
            let steps = f.geodesic(&f.identity(), &s.elem);
            for pair in steps.windows(2) {
                let step = f.mul(&f.inv(&pair[0]), &pair[1]);
                edges.push(HatEdge::Cayley(f.step_label(&step).expect("factor geodesics use generator steps").to_string()));
                vertices.push(spec.mul(&base, &spec.element_of_factor(s.factor, pair[1])?));
            }
        }
    }
    Ok(HatPath { vertices, edges })
}

#[derive(Debug, Clone)]
struct HatBall {
    word: Ball,
    hat: Vec<u32>,
    members: HashMap<Coset, Vec<u32>>,
    /// Largest word length of a peripheral element, when every peripheral
    /// factor is finite and inside the ball.
    jump: Option<u32>,
}

/// Coned-off metric: closed form or BFS.
#[derive(Debug, Clone)]
pub struct HatBackend {
    spec: GroupSpec,
    ball: Option<HatBall>,
}

impl HatBackend {
    pub fn exact(spec: &GroupSpec) -> Result<Self> {
        if !spec.is_standard() {
            return Err(Error::UnsupportedMode);
        }
        Ok(Self { spec: spec.clone(), ball: None })
    }

    /// BFS in Ĝ over the word ball of radius `radius`.
    pub fn bfs(spec: &GroupSpec, radius: u32, cap: usize) -> Result<Self> {
        let word = Ball::new(spec, radius, cap)?;
        let mut members: HashMap<Coset, Vec<u32>> = HashMap::new();
        for (k, (z, _)) in word.iter().enumerate() {
            for c in cosets_through(spec, z) {
                members.entry(c).or_default().push(k as u32);
            }
        }
        let mut hat = vec![u32::MAX; word.len()];
        let mut expanded: HashSet<Coset> = HashSet::new();
        hat[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            let d = hat[k];
            let z = word.element(k);
            for g in spec.generators() {
                if let Some(j) = word.position(&spec.mul(z, &g.elem)) {
                    if hat[j] == u32::MAX {
                        hat[j] = d + 1;
                        queue.push_back(j);
                    }
                }
            }
            for c in cosets_through(spec, z) {
                if !expanded.insert(c.clone()) {
                    continue;
                }
                for &j in &members[&c] {
                    let j = j as usize;
                    if hat[j] == u32::MAX {
                        hat[j] = d + 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        let jump = peripheral_jump(spec, &word);
        Ok(Self { spec: spec.clone(), ball: Some(HatBall { word, hat, members, jump }) })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn is_exact(&self) -> bool {
        self.ball.is_none()
    }

    pub fn radius(&self) -> Option<u32> {
        self.ball.as_ref().map(|b| b.word.radius())
    }

    /// BFS value for `d̂(e, g)` with its certification flag.
    fn lookup(&self, g: &Element) -> Result<(usize, u32, bool)> {
        let b = self.ball.as_ref().expect("lookup needs a BFS backend");
        let k = b.word.position(g).ok_or_else(|| Error::out_of_range(format!("{} is outside the ball", self.spec.format(g))))?;
        let (len, d) = (b.word.dist_at(k), b.hat[k]);
        let r = b.word.radius();
        let certified = if self.spec.is_standard() {
            true
        } else {
            b.jump.is_some_and(|kk| len as u64 + kk as u64 * d as u64 <= 2 * r as u64)
        };
        Ok((k, d, certified))
    }

    /// Certified `d̂(x, y)`.
    pub fn dist(&self, x: &Element, y: &Element) -> Result<u32> {
        if self.ball.is_none() {
            return dist_hat_exact(&self.spec, x, y);
        }
        let (_, d, ok) = self.lookup(&self.spec.between(x, y))?;
        if !ok {
            return Err(Error::out_of_range("coned-off distance not certified"));
        }
        Ok(d)
    }

    /// Deterministic Ĝ-geodesic.
    pub fn geodesic(&self, x: &Element, y: &Element) -> Result<HatPath> {
        if self.ball.is_none() {
            return geodesic_hat_exact(&self.spec, x, y);
        }
        let (mut walk, cap) = (Vec::new(), 1);
        let (paths, _) = self.enumerate(x, y, cap, &mut walk)?;
        Ok(paths.into_iter().next().expect("a BFS distance is realised"))
    }

    /// Every Ĝ-geodesic from `x` to `y` (as vertex sequences), up to `cap`.
    /// The flag is true when the cap cut the enumeration short.
    pub fn all_geodesics(&self, x: &Element, y: &Element, cap: usize) -> Result<(Vec<HatPath>, bool)> {
        if self.ball.is_none() {
            return Err(Error::UnsupportedMode);
        }
        self.enumerate(x, y, cap, &mut Vec::new())
    }

    fn enumerate(&self, x: &Element, y: &Element, cap: usize, walk: &mut Vec<usize>) -> Result<(Vec<HatPath>, bool)> {
        let g = self.spec.between(x, y);
        let (k, _, ok) = self.lookup(&g)?;
        if !ok {
            return Err(Error::out_of_range("coned-off distance not certified"));
        }
        let mut out = Vec::new();
        walk.clear();
        walk.push(k);
        let truncated = self.descend(walk, cap, &mut out);
        let paths = out
            .into_iter()
            .map(|rel: Vec<Element>| HatPath::from_vertices(&self.spec, rel).map(|p| p.translate(&self.spec, x)))
            .collect::<Result<_>>()?;
        Ok((paths, truncated))
    }

    /// Walks predecessors back to the identity. Returns true once the cap is hit.
    fn descend(&self, walk: &mut Vec<usize>, cap: usize, out: &mut Vec<Vec<Element>>) -> bool {
        let b = self.ball.as_ref().expect("BFS backend");
        let k = *walk.last().expect("walk is nonempty");
        if b.hat[k] == 0 {
            if out.len() >= cap {
                return true;
            }
            out.push(walk.iter().rev().map(|&j| b.word.element(j).clone()).collect());
            return false;
        }
        for j in self.parents(k) {
            walk.push(j);
            let stop = self.descend(walk, cap, out);
            walk.pop();
            if stop {
                return true;
            }
        }
        false
    }

    /// Ĝ-neighbours of ball vertex `k` one level closer to the identity:
    /// Cayley neighbours in generator order, then coset mates in BFS order.
    fn parents(&self, k: usize) -> Vec<usize> {
        let b = self.ball.as_ref().expect("BFS backend");
        let level = b.hat[k] - 1;
        let z = b.word.element(k);
        let mut out: Vec<usize> = Vec::new();
        for g in self.spec.generators() {
            if let Some(j) = b.word.position(&self.spec.mul(z, &g.elem)) {
                if b.hat[j] == level && !out.contains(&j) {
                    out.push(j);
                }
            }
        }
        for c in cosets_through(&self.spec, z) {
            for &j in &b.members[&c] {
                let j = j as usize;
                if b.hat[j] == level && !out.contains(&j) {
                    out.push(j);
                }
            }
        }
        out
    }

    /// The point of `P` nearest to `x` in Ĝ, with a Ĝ-geodesic to it.
    ///
    /// In closed form this is the gate. With BFS it is the least minimiser
    /// of `d̂(x, ·)` over `P`, certified when every coset point at least as
    /// close in Ĝ lies in the ball.
    pub fn nearest_in_coset(&self, coset: &Coset, x: &Element) -> Result<(Element, Option<HatPath>)> {
        let spec = &self.spec;
        let Some(b) = self.ball.as_ref() else {
            let w = spec.between(&coset.rep, x);
            let point = match w.first() {
                Some(s) if s.factor == coset.factor => spec.mul(&coset.rep, &w.prefix(1)),
                _ => coset.rep.clone(),
            };
            let path = geodesic_hat_exact(spec, x, &point)?;
            return Ok((point, Some(path)));
        };
        let shifted = Coset { factor: coset.factor, rep: spec.mul(&spec.inv(x), &coset.rep).strip_trailing(coset.factor) };
        let idx = b
            .members
            .get(&shifted)
            .ok_or_else(|| Error::out_of_range(format!("{} does not meet the ball around {}", coset.format(spec), spec.format(x))))?;
        let dmin = idx.iter().map(|&k| b.hat[k as usize]).min().expect("member lists are nonempty");
        let certified = if spec.is_standard() {
            true
        } else {
            b.jump.is_some_and(|kk| kk as u64 * dmin as u64 <= b.word.radius() as u64)
        };
        if !certified {
            return Err(Error::out_of_range("coned-off projection not certified"));
        }
        let point = idx
            .iter()
            .filter(|&&k| b.hat[k as usize] == dmin)
            .map(|&k| spec.mul(x, b.word.element(k as usize)))
            .min()
            .expect("a minimiser exists");
        let path = self.geodesic(x, &point).ok();
        Ok((point, path))
    }
}

fn peripheral_jump(spec: &GroupSpec, word: &Ball) -> Option<u32> {
    let mut k = 1;
    for i in spec.peripheral_set() {
        for h in spec.factor(i).elements()? {
            k = k.max(word.dist(&spec.element_of_factor(i, h).ok()?)?);
        }
    }
    Some(k)
}

/// `d̂(x, y)` through a backend.
pub fn dist_hat(hat: &HatBackend, x: &Element, y: &Element) -> Result<u32> {
    hat.dist(x, y)
}

/// `Ĝ`-geodesic through a backend.
pub fn geodesic_hat(hat: &HatBackend, x: &Element, y: &Element) -> Result<HatPath> {
    hat.geodesic(x, y)
}

/// Replaces every cone edge by a factor geodesic inside its coset.
pub fn lift(spec: &GroupSpec, path: &HatPath) -> Result<VertexPath> {
    let mut vertices = vec![path.start().clone()];
    let mut labels = Vec::new();
    for (k, edge) in path.edges.iter().enumerate() {
        let (v, w) = (&path.vertices[k], &path.vertices[k + 1]);
        match edge {
            HatEdge::Cayley(l) => {
                vertices.push(w.clone());
                labels.push(l.clone());
            }
            HatEdge::Cone(c) => {
                let h = spec.between(v, w);
                let s = match h.syllables() {
                    [s] if s.factor == c.factor => s,
                    _ => return Err(Error::InvalidGroup("cone edge endpoints are not in one coset".into())),
                };
                let f = spec.factor(c.factor);
                let steps = f.geodesic(&f.identity(), &s.elem);
                for pair in steps.windows(2) {
                    let step = f.mul(&f.inv(&pair[0]), &pair[1]);
                    labels.push(f.step_label(&step).expect("factor geodesics use generator steps").to_string());
                    vertices.push(spec.mul(v, &spec.element_of_factor(c.factor, pair[1])?));
                }
            }
        }
    }
    Ok(VertexPath { vertices, labels })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BcpWitness {
    pub clause: u8,
    pub coset: String,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub distance: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BcpReport {
    pub geodesics: usize,
    pub pairs: usize,
    pub clause1: u32,
    pub clause2: u32,
    pub truncated: bool,
    pub edge_rule: &'static str,
    pub witnesses: Vec<BcpWitness>,
}

impl BcpReport {
    pub fn vacuous() -> Self {
        Self { geodesics: 1, pairs: 0, clause1: 0, clause2: 0, truncated: false, edge_rule: BCP_EDGE_RULE, witnesses: Vec::new() }
    }

    /// Empirical `c`.
    pub fn c(&self) -> u32 {
        self.clause1.max(self.clause2)
    }

    pub fn merge(&mut self, other: BcpReport) {
        self.geodesics += other.geodesics;
        self.pairs += other.pairs;
        self.truncated |= other.truncated;
        for w in other.witnesses {
            self.record(w);
        }
        self.clause1 = self.clause1.max(other.clause1);
        self.clause2 = self.clause2.max(other.clause2);
    }

    /// Keeps one witness per clause, for the current maximum.
    fn record(&mut self, w: BcpWitness) {
        let best = if w.clause == 1 { self.clause1 } else { self.clause2 };
        if w.distance == 0 || w.distance < best {
            return;
        }
        let have = self.witnesses.iter().position(|o| o.clause == w.clause);
        match have {
            Some(i) if self.witnesses[i].distance >= w.distance => {}
            Some(i) => self.witnesses[i] = w,
            None => self.witnesses.push(w),
        }
    }
}

/// Bounded coset penetration over all enumerated Ĝ-geodesics from `x` to `y`.
///
/// A geodesic crosses `P` when it has an edge with both endpoints in `P`
/// (see [`BCP_EDGE_RULE`]); such an edge is unique on a Ĝ-geodesic. Clause 1
/// records `d(p, q)` for the crossing edge `(p, q)` of a geodesic whose
/// partner avoids `P`; clause 2 records `d(p_α, p_β)` and `d(q_α, q_β)` when
/// both cross.
pub fn check_bcp(hat: &HatBackend, metric: &MetricBackend, x: &Element, y: &Element, cap: usize) -> Result<BcpReport> {
    if x == y {
        return Ok(BcpReport::vacuous());
    }
    let (paths, truncated) = hat.all_geodesics(x, y, cap)?;
    bcp_over(hat.spec(), metric, &paths, truncated)
}

/// [`check_bcp`] over an already enumerated family of Ĝ-geodesics with
/// common endpoints.
pub fn bcp_over(spec: &GroupSpec, metric: &MetricBackend, paths: &[HatPath], truncated: bool) -> Result<BcpReport> {
    // per path: coset → (entry, exit)
    let crossings: Vec<HashMap<Coset, (Element, Element)>> = paths
        .iter()
        .map(|p| {
            let mut m = HashMap::new();
            for k in 0..p.len() {
                let (v, w) = (&p.vertices[k], &p.vertices[k + 1]);
                let wc = cosets_through(spec, w);
                for c in cosets_through(spec, v) {
                    if wc.contains(&c) {
                        m.entry(c).or_insert_with(|| (v.clone(), w.clone()));
                    }
                }
            }
            m
        })
        .collect();
    let mut report = BcpReport { geodesics: paths.len(), pairs: 0, clause1: 0, clause2: 0, truncated, edge_rule: BCP_EDGE_RULE, witnesses: Vec::new() };
    let fmt = |k: usize| paths[k].vertices.iter().map(|v| spec.format(v)).collect::<Vec<_>>();
    for a in 0..paths.len() {
        for b in 0..paths.len() {
            if a == b {
                continue;
            }
            report.pairs += 1;
            let mut cosets: Vec<&Coset> = crossings[a].keys().collect();
            cosets.sort();
            for c in cosets {
                let (p, q) = &crossings[a][c];
                let (clause, d) = match crossings[b].get(c) {
                    None => (1, metric.dist(p, q)?),
                    Some((pb, qb)) if a < b => (2, metric.dist(p, pb)?.max(metric.dist(q, qb)?)),
                    Some(_) => continue,
                };
                let slot = if clause == 1 { &mut report.clause1 } else { &mut report.clause2 };
                if d > *slot {
                    *slot = d;
                    let w = BcpWitness { clause, coset: c.format(spec), alpha: fmt(a), beta: fmt(b), distance: d };
                    report.record(w);
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_BALL_CAP;
    use crate::metric::quasigeodesic_constants;
    use crate::peripheral::coset_of;
    use crate::presets::{c2c3, c2c3_ab, zxz2};
    use crate::Ratio;

    #[test]
    fn dist_examples() {
        let z = zxz2();
        let e = Element::identity();
        assert_eq!(dist_hat_exact(&z, &e, &z.parse("t u^3 v^-2").unwrap()).unwrap(), 2);
        let g = c2c3();
        assert_eq!(dist_hat_exact(&g, &e, &g.parse("a b a b").unwrap()).unwrap(), 4);
        let x = z.parse("t^-2 v").unwrap();
        assert_eq!(dist_hat_exact(&z, &x, &x).unwrap(), 0);
        let bfs = HatBackend::bfs(&z, 7, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(bfs.dist(&e, &z.parse("t u^3 v^-2").unwrap()).unwrap(), 2);
    }

    #[test]
    fn formula_matches_bfs_radius_5() {
        for spec in [c2c3(), zxz2()] {
            let bfs = HatBackend::bfs(&spec, 5, DEFAULT_BALL_CAP).unwrap();
            let ball = Ball::new(&spec, 5, DEFAULT_BALL_CAP).unwrap();
            for (g, _) in ball.iter() {
                assert_eq!(bfs.dist(&Element::identity(), g).unwrap(), dist_hat_exact(&spec, &Element::identity(), g).unwrap());
            }
        }
    }

    #[test]
    fn geodesic_examples() {
        let z = zxz2();
        let e = Element::identity();
        let p = geodesic_hat_exact(&z, &e, &z.parse("t u^5").unwrap()).unwrap();
        assert_eq!(p.labels(&z), ["cay:t", "cone:H1@t^1"]);
        let p = geodesic_hat_exact(&z, &e, &z.parse("u").unwrap()).unwrap();
        assert_eq!(p.labels(&z), ["cay:u"]);
        assert!(geodesic_hat_exact(&z, &e, &e).unwrap().is_empty());
        let bfs = HatBackend::bfs(&z, 7, DEFAULT_BALL_CAP).unwrap();
        for y in ["t u^5", "u", "t u^2 t^-1 v^3"] {
            let y = z.parse(y).unwrap();
            assert_eq!(bfs.geodesic(&e, &y).unwrap(), geodesic_hat_exact(&z, &e, &y).unwrap());
        }
    }

    #[test]
    fn lift_examples() {
        let z = zxz2();
        let e = Element::identity();
        let y = z.parse("t u^5").unwrap();
        let l = lift(&z, &geodesic_hat_exact(&z, &e, &y).unwrap()).unwrap();
        assert_eq!(l.len(), 6);
        assert_eq!(l.vertices[1], z.parse("t").unwrap());
        assert_eq!(l.end(), &y);
        let metric = MetricBackend::exact(&z).unwrap();
        let fit = quasigeodesic_constants::<Ratio>(&l, &metric).unwrap();
        assert_eq!((fit.lambda, fit.mu), (Ratio::from_integer(1), Ratio::from_integer(0)));
        let cay = geodesic_hat_exact(&z, &e, &z.parse("t^3").unwrap()).unwrap();
        assert_eq!(lift(&z, &cay).unwrap().vertices, cay.vertices);
    }

    #[test]
    fn lipschitz_inclusion() {
        let g = c2c3_ab();
        let hat = HatBackend::bfs(&g, 8, DEFAULT_BALL_CAP).unwrap();
        let metric = MetricBackend::bfs(&g, 8, DEFAULT_BALL_CAP).unwrap();
        let ball = Ball::new(&g, 6, DEFAULT_BALL_CAP).unwrap();
        for (y, d) in ball.iter() {
            let dh = hat.dist(&Element::identity(), y).unwrap();
            assert!(dh <= d);
            assert_eq!(metric.dist(&Element::identity(), y).unwrap(), d);
        }
    }

    #[test]
    fn certification_refuses_far_points() {
        let g = c2c3_ab();
        let hat = HatBackend::bfs(&g, 4, DEFAULT_BALL_CAP).unwrap();
        // b·(ab)·a
        assert_eq!(hat.dist(&Element::identity(), &g.parse("b a b a").unwrap()).unwrap(), 3);
        let far = g.parse("b a b a b a b a b a b").unwrap();
        assert!(hat.dist(&Element::identity(), &far).unwrap_err().is_out_of_range());
        // an infinite peripheral factor leaves extended balls uncertified
        let z = zxz2().with_extra_generators(vec![crate::ExtraGenerator { label: "tu".into(), word: zxz2().parse("t u").unwrap() }]).unwrap();
        let hat = HatBackend::bfs(&z, 3, DEFAULT_BALL_CAP).unwrap();
        assert!(hat.dist(&Element::identity(), &z.parse("t").unwrap()).unwrap_err().is_out_of_range());
    }

    #[test]
    fn nearest_point_examples() {
        let z = zxz2();
        let e = Element::identity();
        let p = coset_of(&z, &z.parse("t").unwrap(), 1).unwrap();
        let exact = HatBackend::exact(&z).unwrap();
        let bfs = HatBackend::bfs(&z, 6, DEFAULT_BALL_CAP).unwrap();
        for hat in [&exact, &bfs] {
            assert_eq!(hat.nearest_in_coset(&p, &e).unwrap().0, z.parse("t").unwrap());
            let inside = z.parse("t u^2").unwrap();
            assert_eq!(hat.nearest_in_coset(&p, &inside).unwrap().0, inside);
        }
    }

    #[test]
    fn bcp_exact_mode_is_tight() {
        let z = zxz2();
        let hat = HatBackend::bfs(&z, 5, DEFAULT_BALL_CAP).unwrap();
        let metric = MetricBackend::exact(&z).unwrap();
        let e = Element::identity();
        assert_eq!(check_bcp(&hat, &metric, &e, &e, 100).unwrap().c(), 0);
        let ball = Ball::new(&z, 4, DEFAULT_BALL_CAP).unwrap();
        for (y, _) in ball.iter() {
            let r = check_bcp(&hat, &metric, &e, y, 1000).unwrap();
            assert!(!r.truncated);
            assert!(r.c() <= 1);
        }
    }

    #[test]
    fn bcp_extended_mode_is_finite() {
        let g = c2c3_ab();
        let hat = HatBackend::bfs(&g, 10, DEFAULT_BALL_CAP).unwrap();
        let metric = MetricBackend::bfs(&g, 10, DEFAULT_BALL_CAP).unwrap();
        let ball = Ball::new(&g, 4, DEFAULT_BALL_CAP).unwrap();
        let mut total = BcpReport::vacuous();
        for (y, _) in ball.iter() {
            total.merge(check_bcp(&hat, &metric, &Element::identity(), y, 1000).unwrap());
        }
        assert!(total.pairs > 0);
        assert!(total.c() <= 4);
    }
}
