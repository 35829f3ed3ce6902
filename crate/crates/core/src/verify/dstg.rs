//! Constants of asymptotically tree-graded geometry: the entrance constant
//! `M`, coarse intersection bounds `B(H)`, quasi-convexity `t`, the overlap
//! bound `σ(D)`, and the entry-point constant for quasi-geodesics.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::Result;
use crate::group::{Ball, Element, DEFAULT_BALL_CAP};
use crate::peripheral::{cosets_through, proj_entrypoint, Coset};
use crate::Ratio;

use super::sample::Sampler;
use super::{ball_elements, coset_points, cosets_meeting_ball, Census, Extremum, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DstgPlan {
    /// Endpoints range over this ball.
    pub sample_radius: u32,
    /// Cosets meeting this ball are examined.
    pub coset_radius: u32,
    /// Coset points `rep·h` with `|h| ≤ point_radius`.
    pub point_radius: u32,
    /// Neighbourhood intersections are searched inside this ball.
    pub region_radius: u32,
    /// Random configurations for `t` and `σ`, per parameter value.
    pub samples: usize,
    pub seed: u64,
    /// Neighbourhood radius at which entry points are compared with projections.
    pub d0: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub param: u32,
    pub value: Extremum,
    /// Whether a witness set reached the edge of the search region.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub param: u32,
    pub value: String,
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DstgConstants {
    pub plan: DstgPlan,
    /// Geodesics whose endpoints are within a third of their length from `P` meet `N_M(P)`.
    pub m: Extremum,
    /// `diam(N_H(P) ∩ N_H(Q))`, `P ≠ Q`, for `H = 0..=3`.
    pub b: Vec<BoundRow>,
    /// Least `t` with geodesics between points of `N_L(P)` inside `N_{tL}(P)`, per `L`.
    pub t_per_l: Vec<RatioRow>,
    /// `max_L t(L)`.
    pub t: String,
    /// `diam(γ₁ ∩ γ₂)` for geodesics with endpoints near distinct cosets, per `D`.
    pub sigma: Vec<BoundRow>,
    /// Distance from the first point of a geodesic in `N_D(P)` to `π_P(x)`, per `D`.
    pub m_entry: Vec<BoundRow>,
    pub census: Census,
}

impl DstgConstants {
    pub fn sigma_at(&self, d: u32) -> Option<u32> {
        self.sigma.iter().find(|r| r.param == d).map(|r| r.value.get())
    }

    pub fn m_entry_at(&self, d: u32) -> Option<u32> {
        self.m_entry.iter().find(|r| r.param == d).map(|r| r.value.get())
    }

    /// `(σ(D₀), M(D₀))` used by the lower-bound estimate of the distance formula.
    pub fn estimate_constants(&self) -> (u32, u32) {
        (self.sigma_at(self.plan.d0).unwrap_or(0), self.m_entry_at(self.plan.d0).unwrap_or(0))
    }
}

pub fn estimate_dstg_constants(space: &Space, plan: DstgPlan) -> Result<DstgConstants> {
    let spec = space.spec();
    let cap = DEFAULT_BALL_CAP;
    let cosets = cosets_meeting_ball(spec, plan.coset_radius, cap)?;
    let xs = ball_elements(spec, plan.sample_radius, cap)?;
    let mut census = Census::default();
    let f = |x: &Element| space.fmt(x);

    // d(x, P) for the sample
    let mut near: HashMap<(usize, usize), u32> = HashMap::new();
    for (ci, p) in cosets.iter().enumerate() {
        for (xi, x) in xs.iter().enumerate() {
            if let Some(d) = census.run(|| space.dist_to(p, x))? {
                near.insert((ci, xi), d);
            }
        }
    }

    let mut m = Extremum::default();
    for (ci, p) in cosets.iter().enumerate() {
        for a in 0..xs.len() {
            let Some(&da) = near.get(&(ci, a)) else { continue };
            for b in a + 1..xs.len() {
                let Some(&db) = near.get(&(ci, b)) else { continue };
                let Some(dxy) = census.run(|| space.d(&xs[a], &xs[b]))? else { continue };
                if dxy == 0 || 3 * da > dxy || 3 * db > dxy {
                    continue;
                }
                let reach = census.run(|| {
                    let g = space.geodesic(&xs[a], &xs[b])?;
                    let mut best = u32::MAX;
                    for v in &g.vertices {
                        best = best.min(space.dist_to(p, v)?);
                    }
                    Ok(best)
                })?;
                if let Some(r) = reach {
                    m.offer(r as i64, || vec![p.format(spec), f(&xs[a]), f(&xs[b])]);
                }
            }
        }
    }

    let mut m_entry = Vec::new();
    for d in [0, 1] {
        let mut e = Extremum::default();
        for p in &cosets {
            let targets = coset_points(spec, p, plan.point_radius);
            for x in &xs {
                let Some(pi) = census.run(|| space.project(p, x))? else { continue };
                for target in &targets {
                    let got = census.run(|| {
                        let r = proj_entrypoint(space.projector(), p, x, target, d)?;
                        space.d(&r.point, &pi)
                    })?;
                    if let Some(g) = got {
                        e.offer(g as i64, || vec![p.format(spec), f(x), f(target)]);
                    }
                }
            }
        }
        m_entry.push(BoundRow { param: d, value: e, truncated: false });
    }

    let b = coarse_intersections(space, &cosets, plan.region_radius, &mut census)?;

    let mut sampler = Sampler::new(plan.seed);
    let mut t_per_l = Vec::new();
    let mut t_max = Ratio::from_integer(0);
    for l in 1..=3u32 {
        let local = ball_elements(spec, l, cap)?;
        let mut best = Ratio::from_integer(0);
        let mut witness = Vec::new();
        for _ in 0..plan.samples {
            let p = sampler.pick(&cosets).clone();
            let pts = coset_points(spec, &p, plan.point_radius);
            let x = spec.mul(sampler.pick(&pts), sampler.pick(&local));
            let y = spec.mul(sampler.pick(&pts), sampler.pick(&local));
            let far = census.run(|| {
                let g = space.geodesic(&x, &y)?;
                let mut worst = 0;
                for v in &g.vertices {
                    worst = worst.max(space.dist_to(&p, v)?);
                }
                Ok(worst)
            })?;
            if let Some(w) = far {
                let t = Ratio::new(w as i64, l as i64);
                if t > best {
                    best = t;
                    witness = vec![p.format(spec), f(&x), f(&y)];
                }
            }
        }
        t_max = t_max.max(best);
        t_per_l.push(RatioRow { param: l, value: best.to_string(), witness });
    }

    let mut sigma = Vec::new();
    for d in [0, 1] {
        let local = ball_elements(spec, d, cap)?;
        let mut e = Extremum::default();
        for _ in 0..plan.samples {
            let p1 = sampler.pick(&cosets).clone();
            let pts1 = coset_points(spec, &p1, plan.point_radius);
            let (a1, b1) = (spec.mul(sampler.pick(&pts1), sampler.pick(&local)), spec.mul(sampler.pick(&pts1), sampler.pick(&local)));
            let got = census.run(|| {
                let g1 = space.geodesic(&a1, &b1)?;
                // a second coset through a point near the first geodesic
                let anchor = spec.mul(sampler.pick(&g1.vertices), &sampler.element(spec, 1, 1));
                let others: Vec<Coset> = cosets_through(spec, &anchor).into_iter().filter(|c| *c != p1).collect();
                if others.is_empty() {
                    return Ok(None);
                }
                let p2 = sampler.pick(&others).clone();
                let pts2 = coset_points(spec, &p2, plan.point_radius);
                let (a2, b2) = (spec.mul(sampler.pick(&pts2), sampler.pick(&local)), spec.mul(sampler.pick(&pts2), sampler.pick(&local)));
                let g2 = space.geodesic(&a2, &b2)?;
                let common: Vec<Element> = g1.vertices.iter().filter(|v| g2.vertices.contains(v)).cloned().collect();
                let diam = super::ap::diameter(space, &common)?;
                Ok(Some((diam, vec![p1.format(spec), p2.format(spec), f(&a1), f(&b1), f(&a2), f(&b2)])))
            })?;
            if let Some(Some((diam, w))) = got {
                e.offer(diam as i64, || w);
            }
        }
        sigma.push(BoundRow { param: d, value: e, truncated: false });
    }

    Ok(DstgConstants { plan, m, b, t_per_l, t: t_max.to_string(), sigma, m_entry, census })
}

/// `diam(N_H(P) ∩ N_H(Q))` over pairs of distinct cosets from `cosets`,
/// searched inside the ball of radius `region`.
fn coarse_intersections(space: &Space, cosets: &[Coset], region: u32, census: &mut Census) -> Result<Vec<BoundRow>> {
    let spec = space.spec();
    let zs = Ball::new(spec, region, DEFAULT_BALL_CAP)?;
    let index: HashMap<&Coset, usize> = cosets.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut rows = Vec::new();
    for h in 0..=3u32 {
        let local = ball_elements(spec, h, DEFAULT_BALL_CAP)?;
        let mut members: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (zi, (z, _)) in zs.iter().enumerate() {
            let mut near: Vec<usize> = local.iter().flat_map(|u| cosets_through(spec, &spec.mul(z, u))).filter_map(|c| index.get(&c).copied()).collect();
            near.sort_unstable();
            near.dedup();
            for (i, &a) in near.iter().enumerate() {
                for &b in &near[i + 1..] {
                    members.entry((a, b)).or_default().push(zi);
                }
            }
        }
        let mut e = Extremum::default();
        let mut truncated = false;
        for ((a, b), zi) in &members {
            let pts: Vec<Element> = zi.iter().map(|&k| zs.element(k).clone()).collect();
            if zi.iter().any(|&k| zs.dist_at(k) == region) {
                truncated = true;
            }
            if let Some(d) = census.run(|| super::ap::diameter(space, &pts))? {
                e.offer(d as i64, || vec![cosets[*a].format(spec), cosets[*b].format(spec)]);
            }
        }
        rows.push(BoundRow { param: h, value: e, truncated });
    }
    Ok(rows)
}
