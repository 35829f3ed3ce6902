//! Bounded coset penetration and the coset-crossing threshold for
//! coned-off geodesics, scanned over a ball.

use serde::Serialize;

use crate::conedoff::{bcp_over, BcpReport, HatBackend};
use crate::error::Result;
use crate::group::{Ball, Element, DEFAULT_BALL_CAP};
use crate::peripheral::{cosets_through, separating_cosets, Coset};

use super::{Census, Extremum, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BcpPlan {
    /// `y` ranges over this ball; `x` is the identity.
    pub radius: u32,
    /// Cap on enumerated Ĝ-geodesics per pair.
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BcpScan {
    pub plan: BcpPlan,
    pub report: BcpReport,
    /// Pairs whose enumeration hit the cap.
    pub truncated_pairs: usize,
    /// Least `L` such that every coset with `d(π_P x, π_P y) ≥ L` is crossed
    /// by every enumerated Ĝ-geodesic from `x` to `y`.
    pub crossing_threshold: Extremum,
    pub census: Census,
}

/// `hat` must be a BFS backend covering the ball; distances and projections
/// come from `space`.
pub fn bcp_scan(space: &Space, hat: &HatBackend, plan: BcpPlan) -> Result<BcpScan> {
    let spec = space.spec();
    let x = Element::identity();
    let ball = Ball::new(spec, plan.radius, DEFAULT_BALL_CAP)?;
    let mut report = BcpReport::vacuous();
    let mut census = Census::default();
    let mut truncated_pairs = 0;
    let mut threshold = Extremum { value: 1, witness: Vec::new() };
    for (y, _) in ball.iter().skip(1) {
        let got = census.run(|| {
            let (paths, truncated) = hat.all_geodesics(&x, y, plan.cap)?;
            let r = bcp_over(spec, space.metric(), &paths, truncated)?;
            let mut cands: Vec<Coset> = separating_cosets(spec, &x, y);
            for p in &paths {
                for v in &p.vertices {
                    cands.extend(cosets_through(spec, v));
                }
            }
            cands.sort();
            cands.dedup();
            let mut worst: Option<(u32, Coset)> = None;
            for c in cands {
                let gap = space.d(&space.project(&c, &x)?, &space.project(&c, y)?)?;
                if gap > 0 && paths.iter().any(|p| p.edge_in(&c).is_none()) && worst.as_ref().is_none_or(|(g, _)| gap > *g) {
                    worst = Some((gap, c));
                }
            }
            Ok((r, worst))
        })?;
        let Some((r, worst)) = got else { continue };
        if r.truncated {
            truncated_pairs += 1;
        }
        report.merge(r);
        if let Some((gap, c)) = worst {
            threshold.offer(gap as i64 + 1, || vec![c.format(spec), space.fmt(y)]);
        }
    }
    Ok(BcpScan { plan, report, truncated_pairs, crossing_threshold: threshold, census })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{c2c3_ab, zxz2};

    #[test]
    fn exact_mode_scan() {
        let z = zxz2();
        let hat = HatBackend::bfs(&z, 4, DEFAULT_BALL_CAP).unwrap();
        let s = bcp_scan(&Space::exact(&z).unwrap(), &hat, BcpPlan { radius: 4, cap: 10_000 }).unwrap();
        assert!(s.report.c() <= 1);
        assert_eq!(s.crossing_threshold.get(), 1);
        assert_eq!(s.truncated_pairs, 0);
    }

    #[test]
    fn extended_mode_scan_is_finite() {
        let g = c2c3_ab();
        let space = Space::bfs(&g, 10, DEFAULT_BALL_CAP).unwrap();
        let s = bcp_scan(&space, space.hat(), BcpPlan { radius: 4, cap: 1000 }).unwrap();
        assert_eq!(s.census.skipped, 0);
        assert!(s.report.pairs > 0);
        assert!(s.report.c() < 10);
    }
}
