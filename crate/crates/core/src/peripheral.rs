//! Peripheral cosets and closest-point projections onto them.
//!
//! In the standard-generator metric a free product is a tree of spaces, and
//! the closest point of a coset `P = rep·Hᵢ` to `x` is the gate: `rep·h`
//! where `h` is the leading `i`-syllable of `rep⁻¹x` (or `rep` when there is
//! none). For other generating sets the projection is found by brute force
//! over a BFS ball, and three alternative characterisations (entry point of
//! a quasi-geodesic, entry point of a coned-off geodesic, brute force) can be
//! compared against each other.

use std::collections::HashMap;

use serde::Serialize;

use crate::conedoff::HatBackend;
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::metric::{MetricBackend, VertexPath};

/// A left coset `rep·Hᵢ` of a peripheral factor. The representative never
/// ends in an `i`-syllable, so structural equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Coset {
    pub factor: usize,
    pub rep: Element,
}

impl Coset {
    pub fn contains(&self, x: &Element) -> bool {
        x.strip_trailing(self.factor) == self.rep
    }

    /// `H<i> @ <rep>`.
    pub fn format(&self, spec: &GroupSpec) -> String {
        format!("H{} @ {}", self.factor, spec.format(&self.rep))
    }

    pub fn parse(spec: &GroupSpec, text: &str) -> Result<Self> {
        let (head, rep) = text.split_once('@').ok_or_else(|| Error::Parse(format!("bad coset {text:?}")))?;
        let factor = head
            .trim()
            .strip_prefix('H')
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("bad coset factor in {text:?}")))?;
        coset_of(spec, &spec.parse(rep)?, factor)
    }

    /// The point `rep·h` for a single-syllable element `h` of the factor.
    pub fn point(&self, spec: &GroupSpec, h: &Element) -> Element {
        spec.mul(&self.rep, h)
    }
}

/// The coset `x·Hᵢ`.
pub fn coset_of(spec: &GroupSpec, x: &Element, factor: usize) -> Result<Coset> {
    if factor >= spec.factors().len() {
        return Err(Error::InvalidFactorIndex(factor));
    }
    if !spec.is_peripheral(factor) {
        return Err(Error::NotPeripheral(factor));
    }
    Ok(Coset { factor, rep: x.strip_trailing(factor) })
}

/// Peripheral cosets containing `x`, one per peripheral factor.
pub fn cosets_through(spec: &GroupSpec, x: &Element) -> Vec<Coset> {
    spec.peripheral_set().into_iter().map(|i| Coset { factor: i, rep: x.strip_trailing(i) }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectionMethod {
    Gate,
    BruteForce,
    EntryPoint,
    ConedOff,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionResult {
    pub point: Element,
    pub method: ProjectionMethod,
    pub witness: Option<VertexPath>,
}

/// The gate of `x` in `P`; standard generating set only.
pub fn gate_projection(spec: &GroupSpec, coset: &Coset, x: &Element) -> Result<ProjectionResult> {
    if !spec.is_standard() {
        return Err(Error::UnsupportedMode);
    }
    Ok(ProjectionResult { point: gate(spec, coset, x), method: ProjectionMethod::Gate, witness: None })
}

fn gate(spec: &GroupSpec, coset: &Coset, x: &Element) -> Element {
    let w = spec.between(&coset.rep, x);
    match w.first() {
        Some(s) if s.factor == coset.factor => spec.mul(&coset.rep, &w.prefix(1)),
        _ => coset.rep.clone(),
    }
}

/// Closest-point projections for a metric backend.
///
/// Exact backends use the gate. BFS backends search the ball: by
/// left-invariance `d(x, P) = min |m|` over `m ∈ x⁻¹P`, and the minimum is
/// certified once it is at most the ball radius, since every element of
/// `x⁻¹P` at least as close lies inside the ball. Among minimisers the
/// least element in the structural order is the projection.
#[derive(Debug, Clone)]
pub struct Projector {
    backend: MetricBackend,
    members: HashMap<Coset, Vec<u32>>,
}

impl Projector {
    pub fn new(backend: MetricBackend) -> Self {
        let mut members: HashMap<Coset, Vec<u32>> = HashMap::new();
        if let Some(ball) = backend.ball() {
            let spec = backend.spec();
            for (k, (z, _)) in ball.iter().enumerate() {
                for c in cosets_through(spec, z) {
                    members.entry(c).or_default().push(k as u32);
                }
            }
        }
        Self { backend, members }
    }

    pub fn backend(&self) -> &MetricBackend {
        &self.backend
    }

    pub fn spec(&self) -> &GroupSpec {
        self.backend.spec()
    }

    /// Elements of `coset` inside the backend ball (BFS backends only).
    pub fn ball_members(&self, coset: &Coset) -> Vec<&Element> {
        let ball = self.backend.ball().expect("ball members need a BFS backend");
        self.members.get(coset).map_or_else(Vec::new, |v| v.iter().map(|&k| ball.element(k as usize)).collect())
    }

    /// `(d(x, P), all minimisers sorted)` by brute force over the ball.
    pub fn minimizers(&self, coset: &Coset, x: &Element) -> Result<(u32, Vec<Element>)> {
        let spec = self.spec();
        let ball = self.backend.ball().ok_or(Error::UnsupportedMode)?;
        let shifted = Coset { factor: coset.factor, rep: spec.mul(&spec.inv(x), &coset.rep).strip_trailing(coset.factor) };
        let idx = self
            .members
            .get(&shifted)
            .ok_or_else(|| Error::out_of_range(format!("{} does not meet the ball around {}", coset.format(spec), spec.format(x))))?;
        let dmin = idx.iter().map(|&k| ball.dist_at(k as usize)).min().expect("member lists are nonempty");
        if dmin > ball.radius() {
            return Err(Error::out_of_range("projection minimum not certified"));
        }
        let mut points: Vec<Element> = idx
            .iter()
            .filter(|&&k| ball.dist_at(k as usize) == dmin)
            .map(|&k| spec.mul(x, ball.element(k as usize)))
            .collect();
        points.sort();
        Ok((dmin, points))
    }

    /// `π_P(x)`.
    pub fn project(&self, coset: &Coset, x: &Element) -> Result<Element> {
        if self.backend.is_exact() {
            Ok(gate(self.spec(), coset, x))
        } else {
            Ok(self.minimizers(coset, x)?.1.swap_remove(0))
        }
    }

    /// `d(x, P)`.
    pub fn dist_to(&self, coset: &Coset, x: &Element) -> Result<u32> {
        if self.backend.is_exact() {
            self.backend.dist(x, &gate(self.spec(), coset, x))
        } else {
            Ok(self.minimizers(coset, x)?.0)
        }
    }

    /// Projection together with `d(x, π_P(x))` and `d(x, P)`.
    pub fn project_with_dist(&self, coset: &Coset, x: &Element) -> Result<(Element, u32)> {
        if self.backend.is_exact() {
            let p = gate(self.spec(), coset, x);
            let d = self.backend.dist(x, &p)?;
            Ok((p, d))
        } else {
            let (d, mut pts) = self.minimizers(coset, x)?;
            Ok((pts.swap_remove(0), d))
        }
    }

    /// Peripheral cosets meeting the closed ball `B_r(x)`, i.e. with
    /// `d(x, P) ≤ r`, sorted.
    pub fn cosets_near(&self, x: &Element, r: u32) -> Result<Vec<Coset>> {
        let spec = self.spec();
        let mut out: Vec<Coset> = match self.backend.ball() {
            Some(ball) => {
                if r > ball.radius() {
                    return Err(Error::out_of_range("neighbourhood radius exceeds the ball"));
                }
                ball.within(r).flat_map(|u| cosets_through(spec, &spec.mul(x, u))).collect()
            }
            None => {
                let ball = crate::group::Ball::new(spec, r, crate::group::DEFAULT_BALL_CAP)?;
                ball.within(r).flat_map(|u| cosets_through(spec, &spec.mul(x, u))).collect()
            }
        };
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// All closest points of `P` to `x` found in the BFS ball, certified.
pub fn proj_bruteforce(projector: &Projector, coset: &Coset, x: &Element) -> Result<Vec<Element>> {
    Ok(projector.minimizers(coset, x)?.1)
}

/// First vertex of the geodesic from `x` to `target ∈ P` within distance `d`
/// of `P`.
pub fn proj_entrypoint(projector: &Projector, coset: &Coset, x: &Element, target: &Element, d: u32) -> Result<ProjectionResult> {
    if !coset.contains(target) {
        return Err(Error::InvalidGroup("entry-point target must lie in the coset".into()));
    }
    let path = projector.backend().geodesic(x, target)?;
    for v in &path.vertices {
        if projector.dist_to(coset, v)? <= d {
            return Ok(ProjectionResult { point: v.clone(), method: ProjectionMethod::EntryPoint, witness: Some(path) });
        }
    }
    unreachable!("a path ending in P enters every neighbourhood of P")
}

/// First point of `P` on a coned-off geodesic from `x` to `P`.
pub fn proj_conedoff(hat: &HatBackend, coset: &Coset, x: &Element) -> Result<ProjectionResult> {
    let (point, path) = hat.nearest_in_coset(coset, x)?;
    let witness = path.map(|p| VertexPath { vertices: p.vertices, labels: p.edges.iter().map(|e| e.label(hat.spec())).collect() });
    Ok(ProjectionResult { point, method: ProjectionMethod::ConedOff, witness })
}

/// The cosets `x·w₍<k₎·Hᵢ` for each peripheral syllable of `w = x⁻¹y`; in the
/// exact metric these are exactly the cosets on which `x` and `y` project
/// to different points.
pub fn separating_cosets(spec: &GroupSpec, x: &Element, y: &Element) -> Vec<Coset> {
    let w = spec.between(x, y);
    w.syllables()
        .iter()
        .enumerate()
        .filter(|(_, s)| spec.is_peripheral(s.factor))
        .map(|(k, s)| Coset { factor: s.factor, rep: spec.mul(x, &w.prefix(k)).strip_trailing(s.factor) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_BALL_CAP;
    use crate::presets::{c2c3, c2c3_ab, zxz2};

    #[test]
    fn coset_of_examples() {
        let z = zxz2();
        assert_eq!(z.format(&coset_of(&z, &z.parse("t u^3").unwrap(), 1).unwrap().rep), "t^1");
        assert!(coset_of(&z, &Element::identity(), 1).unwrap().rep.is_identity());
        let x = z.parse("t u t").unwrap();
        assert_eq!(coset_of(&z, &x, 1).unwrap().rep, x);
        assert_eq!(coset_of(&z, &x, 0), Err(Error::NotPeripheral(0)));
        assert_eq!(coset_of(&z, &x, 5), Err(Error::InvalidFactorIndex(5)));
    }

    #[test]
    fn coset_syntax() {
        let z = zxz2();
        let c = coset_of(&z, &z.parse("t u^3").unwrap(), 1).unwrap();
        assert_eq!(c.format(&z), "H1 @ t^1");
        assert_eq!(Coset::parse(&z, "H1 @ t^1 u^4").unwrap(), c);
        assert!(Coset::parse(&z, "H0 @ t").is_err());
    }

    #[test]
    fn gate_examples() {
        let z = zxz2();
        let p = coset_of(&z, &z.parse("t").unwrap(), 1).unwrap();
        let x = z.parse("t u^2 t u").unwrap();
        assert_eq!(gate_projection(&z, &p, &x).unwrap().point, z.parse("t u^2").unwrap());
        let inside = z.parse("t u^4 v").unwrap();
        assert_eq!(gate_projection(&z, &p, &inside).unwrap().point, inside);
        let h = coset_of(&z, &Element::identity(), 1).unwrap();
        assert!(gate_projection(&z, &h, &z.parse("t u^5").unwrap()).unwrap().point.is_identity());
        assert_eq!(gate_projection(&c2c3_ab(), &h, &x), Err(Error::UnsupportedMode));
    }

    #[test]
    fn brute_force_agrees_with_gate_on_worked_examples() {
        let z = zxz2();
        let proj = Projector::new(MetricBackend::bfs(&z, 8, DEFAULT_BALL_CAP).unwrap());
        let p = coset_of(&z, &z.parse("t").unwrap(), 1).unwrap();
        let x = z.parse("t u^2 t u").unwrap();
        assert_eq!(proj_bruteforce(&proj, &p, &x).unwrap(), [z.parse("t u^2").unwrap()]);
        let x = z.parse("t u^5").unwrap();
        let h = coset_of(&z, &Element::identity(), 1).unwrap();
        assert_eq!(proj_bruteforce(&proj, &h, &x).unwrap(), [Element::identity()]);
        let inside = z.parse("u^3 v").unwrap();
        assert_eq!(proj_bruteforce(&proj, &h, &inside).unwrap(), [inside]);
    }

    #[test]
    fn brute_force_certification() {
        let g = c2c3();
        let proj = Projector::new(MetricBackend::bfs(&g, 3, DEFAULT_BALL_CAP).unwrap());
        let far = coset_of(&g, &g.parse("a b a b a").unwrap(), 1).unwrap();
        assert!(proj_bruteforce(&proj, &far, &Element::identity()).unwrap_err().is_out_of_range());
    }

    #[test]
    fn entry_point_examples() {
        let z = zxz2();
        let proj = Projector::new(MetricBackend::exact(&z).unwrap());
        let p = coset_of(&z, &z.parse("t").unwrap(), 1).unwrap();
        let target = z.parse("t u^5").unwrap();
        let r = proj_entrypoint(&proj, &p, &Element::identity(), &target, 0).unwrap();
        assert_eq!(r.point, z.parse("t").unwrap());
        assert_eq!(r.witness.unwrap().len(), 6);
        let r = proj_entrypoint(&proj, &p, &target, &z.parse("t v").unwrap(), 0).unwrap();
        assert_eq!(r.point, target);
    }

    #[test]
    fn separating_cosets_examples() {
        let z = zxz2();
        let e = Element::identity();
        assert!(separating_cosets(&z, &e, &e).is_empty());
        let y = z.parse("t u^5 t u^7").unwrap();
        let got: Vec<_> = separating_cosets(&z, &e, &y).iter().map(|c| c.format(&z)).collect();
        assert_eq!(got, ["H1 @ t^1", "H1 @ t^1 u^5 t^1"]);
        let proj = Projector::new(MetricBackend::exact(&z).unwrap());
        let m = proj.backend();
        let gaps: Vec<_> = separating_cosets(&z, &e, &y)
            .iter()
            .map(|c| m.dist(&proj.project(c, &e).unwrap(), &proj.project(c, &y).unwrap()).unwrap())
            .collect();
        assert_eq!(gaps, [5, 7]);
    }

    #[test]
    fn non_separating_cosets_have_zero_gap() {
        let z = zxz2();
        let proj = Projector::new(MetricBackend::exact(&z).unwrap());
        let ball = crate::group::Ball::new(&z, 4, DEFAULT_BALL_CAP).unwrap();
        let mut cosets: Vec<Coset> = ball.iter().flat_map(|(x, _)| cosets_through(&z, x)).collect();
        cosets.sort();
        cosets.dedup();
        let pts: Vec<_> = ball.within(3).cloned().collect();
        let x = z.parse("t^-1 v^2").unwrap();
        for y in &pts {
            let sep = separating_cosets(&z, &x, y);
            for c in &cosets {
                let gap = proj.backend().dist(&proj.project(c, &x).unwrap(), &proj.project(c, y).unwrap()).unwrap();
                assert_eq!(gap > 0, sep.contains(c), "{} {}", z.format(y), c.format(&z));
            }
        }
    }
}
