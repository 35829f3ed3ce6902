//! Word metrics and geodesics.
//!
//! Two independent backends compute the same metric when the generating set
//! is standard: the closed-form tree-of-spaces formula (sum of factor lengths
//! over the syllables of `x⁻¹y`), and a BFS ball around the identity combined
//! with left-invariance. The BFS backend is the only one available for
//! extended generating sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Ball, Element, GroupSpec};
use crate::scalar::{fit_affine, AffineFit, Scalar};

/// Additive allowance used when fitting quasi-geodesic constants: one
/// backtrack along an edge costs 2.
pub const QG_ALLOWANCE: i64 = 2;

/// A vertex path with the generator label of every edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexPath {
    pub vertices: Vec<Element>,
    pub labels: Vec<String>,
}

impl VertexPath {
    pub fn trivial(x: Element) -> Self {
        Self { vertices: vec![x], labels: Vec::new() }
    }

    /// Builds a path from consecutive vertices, labelling every edge.
    /// Fails if two consecutive vertices are not adjacent.
    pub fn from_vertices(spec: &GroupSpec, vertices: Vec<Element>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidGroup("empty path".into()));
        }
        let labels = vertices
            .windows(2)
            .map(|w| {
                spec.edge_label(&w[0], &w[1])
                    .map(str::to_string)
                    .ok_or_else(|| Error::InvalidGroup(format!("{} and {} are not adjacent", spec.format(&w[0]), spec.format(&w[1]))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { vertices, labels })
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> &Element {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Element {
        self.vertices.last().expect("paths are nonempty")
    }

    /// Left translate of the path by `g`.
    pub fn translate(&self, spec: &GroupSpec, g: &Element) -> Self {
        Self { vertices: self.vertices.iter().map(|v| spec.mul(g, v)).collect(), labels: self.labels.clone() }
    }

    pub fn reversed(&self, spec: &GroupSpec) -> Self {
        let vertices: Vec<_> = self.vertices.iter().rev().cloned().collect();
        Self::from_vertices(spec, vertices).expect("reversal of a path is a path")
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn concat(&self, other: &VertexPath) -> Self {
        assert_eq!(self.end(), other.start(), "paths do not meet");
        let mut out = self.clone();
        out.vertices.extend(other.vertices[1..].iter().cloned());
        out.labels.extend(other.labels.iter().cloned());
        out
    }

    /// Sub-path between vertex indices `i ≤ j`.
    pub fn slice(&self, i: usize, j: usize) -> Self {
        Self { vertices: self.vertices[i..=j].to_vec(), labels: self.labels[i..j].to_vec() }
    }
}

/// Exact word distance for the standard generating set.
pub fn dist_exact(spec: &GroupSpec, x: &Element, y: &Element) -> Result<u32> {
    if !spec.is_standard() {
        return Err(Error::UnsupportedMode);
    }
    Ok(spec.standard_len(&spec.between(x, y)))
}

/// Deterministic geodesic for the standard generating set: factor geodesics
/// concatenated syllable by syllable.
pub fn geodesic_exact(spec: &GroupSpec, x: &Element, y: &Element) -> Result<VertexPath> {
    if !spec.is_standard() {
        return Err(Error::UnsupportedMode);
    }
    let w = spec.between(x, y);
    let mut vertices = vec![x.clone()];
    let mut labels = Vec::new();
    let mut base = x.clone();
    for s in w.syllables() {
        let f = spec.factor(s.factor);
        let steps = f.geodesic(&f.identity(), &s.elem);
        for pair in steps.windows(2) {
            let step = f.mul(&f.inv(&pair[0]), &pair[1]);
            labels.push(f.step_label(&step).expect("factor geodesics use generator steps").to_string());
            vertices.push(spec.mul(&base, &spec.element_of_factor(s.factor, pair[1])?));
        }
        base = vertices.last().expect("nonempty").clone();
    }
    Ok(VertexPath { vertices, labels })
}

/// A word metric: either the closed form or a BFS ball.
#[derive(Debug, Clone)]
pub struct MetricBackend {
    spec: GroupSpec,
    ball: Option<Ball>,
}

impl MetricBackend {
    /// Closed-form metric; rejects extended generating sets.
    pub fn exact(spec: &GroupSpec) -> Result<Self> {
        if !spec.is_standard() {
            return Err(Error::UnsupportedMode);
        }
        Ok(Self { spec: spec.clone(), ball: None })
    }

    /// BFS metric certified for every pair with `d(x, y) ≤ radius`.
    pub fn bfs(spec: &GroupSpec, radius: u32, cap: usize) -> Result<Self> {
        Ok(Self { spec: spec.clone(), ball: Some(Ball::new(spec, radius, cap)?) })
    }

    /// Exact backend when the generating set allows it, BFS otherwise.
    pub fn auto(spec: &GroupSpec, radius: u32, cap: usize) -> Result<Self> {
        if spec.is_standard() {
            Self::exact(spec)
        } else {
            Self::bfs(spec, radius, cap)
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn is_exact(&self) -> bool {
        self.ball.is_none()
    }

    pub fn ball(&self) -> Option<&Ball> {
        self.ball.as_ref()
    }

    /// Radius within which distances are certified (`None` = unbounded).
    pub fn radius(&self) -> Option<u32> {
        self.ball.as_ref().map(Ball::radius)
    }

    /// `|x|`, the distance from the identity.
    pub fn norm(&self, x: &Element) -> Result<u32> {
        match &self.ball {
            None => Ok(self.spec.standard_len(x)),
            Some(ball) => ball
                .dist(x)
                .ok_or_else(|| Error::out_of_range(format!("|{}| > {}", self.spec.format(x), ball.radius()))),
        }
    }

    pub fn dist(&self, x: &Element, y: &Element) -> Result<u32> {
        self.norm(&self.spec.between(x, y))
    }

    /// Deterministic geodesic: at every vertex the first generator (in the
    /// order of [`GroupSpec::generators`]) that moves closer to `y`.
    pub fn geodesic(&self, x: &Element, y: &Element) -> Result<VertexPath> {
        if self.ball.is_none() {
            return geodesic_exact(&self.spec, x, y);
        }
        let target = self.spec.between(x, y);
        let mut left = self.norm(&target)?;
        let mut cur = Element::identity();
        let mut rel = Vec::with_capacity(left as usize + 1);
        let mut labels = Vec::with_capacity(left as usize);
        rel.push(cur.clone());
        while left > 0 {
            let (next, label) = self
                .spec
                .generators()
                .iter()
                .find_map(|g| {
                    let next = self.spec.mul(&cur, &g.elem);
                    let rest = self.norm(&self.spec.between(&next, &target)).ok()?;
                    (rest + 1 == left).then(|| (next, g.label.clone()))
                })
                .expect("a BFS distance is realised by some generator step");
            cur = next;
            left -= 1;
            rel.push(cur.clone());
            labels.push(label);
        }
        let vertices = rel.iter().map(|v| self.spec.mul(x, v)).collect();
        Ok(VertexPath { vertices, labels })
    }

    /// Every geodesic from `x` to `y`, in lexicographic generator order, up to
    /// `cap` paths. The flag is true when the cap cut the enumeration short.
    pub fn all_geodesics(&self, x: &Element, y: &Element, cap: usize) -> Result<(Vec<VertexPath>, bool)> {
        let target = self.spec.between(x, y);
        let total = self.norm(&target)?;
        let mut walk = GeodesicWalk { backend: self, target, total, cap, rel: vec![Element::identity()], labels: Vec::new(), out: Vec::new() };
        let truncated = walk.descend();
        let out = walk.out.into_iter().map(|p| p.translate(&self.spec, x)).collect();
        Ok((out, truncated))
    }
}

struct GeodesicWalk<'a> {
    backend: &'a MetricBackend,
    target: Element,
    total: u32,
    cap: usize,
    rel: Vec<Element>,
    labels: Vec<String>,
    out: Vec<VertexPath>,
}

impl GeodesicWalk<'_> {
    /// Returns true once the cap is hit.
    fn descend(&mut self) -> bool {
        let depth = self.labels.len() as u32;
        if depth == self.total {
            if self.out.len() >= self.cap {
                return true;
            }
            self.out.push(VertexPath { vertices: self.rel.clone(), labels: self.labels.clone() });
            return false;
        }
        let spec = &self.backend.spec;
        let cur = self.rel.last().expect("walk starts at the identity").clone();
        for g in spec.generators() {
            let next = spec.mul(&cur, &g.elem);
            if self.backend.norm(&spec.between(&next, &self.target)).ok() != Some(self.total - depth - 1) {
                continue;
            }
            self.rel.push(next);
            self.labels.push(g.label.clone());
            let stop = self.descend();
            self.rel.pop();
            self.labels.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

/// BFS distance; `OutOfRange` when `d(x, y)` exceeds the ball radius.
pub fn dist_bfs(backend: &MetricBackend, x: &Element, y: &Element) -> Result<u32> {
    backend.dist(x, y)
}

/// Pairs `(j − i, d(pᵢ, pⱼ))` over all index pairs of a path.
pub fn path_pairs(path: &VertexPath, backend: &MetricBackend) -> Result<Vec<(u64, u64)>> {
    let n = path.vertices.len();
    let mut pairs = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push(((j - i) as u64, backend.dist(&path.vertices[i], &path.vertices[j])? as u64));
        }
    }
    Ok(pairs)
}

/// Fitted `(λ, μ)` with `(j−i)/λ − μ ≤ d(pᵢ, pⱼ)` for all `i < j`.
pub fn quasigeodesic_constants<T: Scalar>(path: &VertexPath, backend: &MetricBackend) -> Result<AffineFit<T>> {
    let pairs = path_pairs(path, backend)?;
    if pairs.is_empty() {
        return Ok(AffineFit::exact());
    }
    fit_affine(&pairs, T::ratio(QG_ALLOWANCE, 1))
}

/// Least integer `c` making the path a `(1, c)`-quasi-geodesic.
pub fn additive_constant(path: &VertexPath, backend: &MetricBackend) -> Result<u32> {
    let n = path.vertices.len();
    let mut c = 0u32;
    for i in 0..n {
        for j in i + 1..n {
            let d = backend.dist(&path.vertices[i], &path.vertices[j])?;
            c = c.max(((j - i) as u32).saturating_sub(d));
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_BALL_CAP;
    use crate::presets::{c2c3, c2c3_ab, zxz2};
    use crate::Ratio;

    #[test]
    fn exact_distance_examples() {
        let z = zxz2();
        let e = Element::identity();
        let y = z.parse("t u^3 v^-2").unwrap();
        assert_eq!(dist_exact(&z, &e, &y).unwrap(), 6);
        let oracle = MetricBackend::bfs(&z, 7, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(dist_bfs(&oracle, &e, &y).unwrap(), 6);
        assert_eq!(dist_exact(&z, &y, &y).unwrap(), 0);

        let g = c2c3();
        let (a, b) = (g.parse("a").unwrap(), g.parse("b").unwrap());
        assert_eq!(dist_exact(&g, &a, &b).unwrap(), 2);
        let oracle = MetricBackend::bfs(&g, 3, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(dist_bfs(&oracle, &a, &b).unwrap(), 2);
    }

    #[test]
    fn exact_rejects_extended() {
        let ext = c2c3_ab();
        let e = Element::identity();
        assert_eq!(dist_exact(&ext, &e, &e), Err(Error::UnsupportedMode));
        assert!(MetricBackend::exact(&ext).is_err());
        assert!(geodesic_exact(&ext, &e, &e).is_err());
    }

    #[test]
    fn exact_geodesic_examples() {
        let z = zxz2();
        let e = Element::identity();
        let p = geodesic_exact(&z, &e, &z.parse("t u^2").unwrap()).unwrap();
        let names: Vec<_> = p.vertices.iter().map(|v| z.format(v)).collect();
        assert_eq!(names, ["e", "t^1", "t^1 u^1", "t^1 u^2"]);
        assert_eq!(p.labels, ["t", "u", "u"]);
        let x = z.parse("u v").unwrap();
        assert_eq!(geodesic_exact(&z, &x, &x).unwrap(), VertexPath::trivial(x));

        let g = c2c3();
        let p = geodesic_exact(&g, &g.parse("a").unwrap(), &g.parse("b").unwrap()).unwrap();
        let names: Vec<_> = p.vertices.iter().map(|v| g.format(v)).collect();
        assert_eq!(names, ["a^1", "e", "b^1"]);
    }

    #[test]
    fn extended_generator_shortens() {
        let ext = c2c3_ab();
        let m = MetricBackend::bfs(&ext, 5, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(m.dist(&Element::identity(), &ext.parse("a b").unwrap()).unwrap(), 1);
        assert!(m.dist(&Element::identity(), &ext.parse("a b a b a b a b a b").unwrap()).unwrap() == 5);
    }

    #[test]
    fn out_of_range_is_reported() {
        let g = c2c3();
        let m = MetricBackend::bfs(&g, 2, DEFAULT_BALL_CAP).unwrap();
        let far = g.parse("a b a b").unwrap();
        assert!(m.dist(&Element::identity(), &far).unwrap_err().is_out_of_range());
    }

    #[test]
    fn oracle_equivalence_on_c2c3_radius5() {
        let g = c2c3();
        let oracle = MetricBackend::bfs(&g, 10, DEFAULT_BALL_CAP).unwrap();
        let pts: Vec<_> = oracle.ball().unwrap().within(5).cloned().collect();
        for x in &pts {
            for y in &pts {
                assert_eq!(dist_exact(&g, x, y).unwrap(), oracle.dist(x, y).unwrap());
            }
        }
    }

    #[test]
    fn bfs_geodesic_matches_exact_for_standard_generators() {
        let z = zxz2();
        let oracle = MetricBackend::bfs(&z, 6, DEFAULT_BALL_CAP).unwrap();
        let pts: Vec<_> = oracle.ball().unwrap().within(3).cloned().collect();
        for x in pts.iter().step_by(7) {
            for y in &pts {
                assert_eq!(oracle.geodesic(x, y).unwrap(), geodesic_exact(&z, x, y).unwrap());
            }
        }
    }

    #[test]
    fn geodesic_enumeration() {
        let z = zxz2();
        let m = MetricBackend::bfs(&z, 4, DEFAULT_BALL_CAP).unwrap();
        let e = Element::identity();
        let y = z.parse("u^2 v").unwrap();
        let (paths, truncated) = m.all_geodesics(&e, &y, 100).unwrap();
        // lattice paths with two u-steps and one v-step
        assert_eq!(paths.len(), 3);
        assert!(!truncated);
        assert_eq!(paths[0], m.geodesic(&e, &y).unwrap());
        for p in &paths {
            assert_eq!(p.len(), 3);
            assert_eq!(p.end(), &y);
            assert_eq!(VertexPath::from_vertices(&z, p.vertices.clone()).unwrap(), *p);
        }
        let (paths, truncated) = m.all_geodesics(&e, &y, 2).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(truncated);
        let (paths, _) = m.all_geodesics(&y, &y, 2).unwrap();
        assert_eq!(paths, [VertexPath::trivial(y)]);
    }

    #[test]
    fn quasigeodesic_examples() {
        let g = c2c3();
        let m = MetricBackend::exact(&g).unwrap();
        let verts = ["e", "a", "e", "b"].iter().map(|s| g.parse(s).unwrap()).collect();
        let path = VertexPath::from_vertices(&g, verts).unwrap();
        let fit: AffineFit<Ratio> = quasigeodesic_constants(&path, &m).unwrap();
        assert!(fit.mu >= Ratio::from_integer(2));
        assert_eq!(additive_constant(&path, &m).unwrap(), 2);

        let geo = m.geodesic(&Element::identity(), &g.parse("a b a b^2 a").unwrap()).unwrap();
        assert_eq!(quasigeodesic_constants::<Ratio>(&geo, &m).unwrap(), AffineFit::exact());
        assert_eq!(quasigeodesic_constants::<f64>(&geo, &m).unwrap(), AffineFit::exact());
    }

    #[test]
    fn non_adjacent_vertices_rejected() {
        let g = c2c3();
        let verts = vec![Element::identity(), g.parse("a b").unwrap()];
        assert!(VertexPath::from_vertices(&g, verts).is_err());
    }
}
