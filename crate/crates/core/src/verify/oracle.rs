//! Cross-checks between independent backends.
//!
//! For standard generators: closed-form metric against BFS, closed-form
//! coned-off metric against coned-off BFS, and gate projections against
//! brute force. For extended generators the BFS backend is compared with a
//! BFS backend of larger radius.

use serde::Serialize;

use crate::conedoff::{dist_hat_exact, HatBackend};
use crate::error::Result;
use crate::group::{Ball, DEFAULT_BALL_CAP};
use crate::metric::{dist_exact, MetricBackend};
use crate::peripheral::{gate_projection, proj_bruteforce, Projector};

use super::{cosets_meeting_ball, Census};
use crate::group::GroupSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OraclePlan {
    /// All pairs in this ball are compared.
    pub radius: u32,
    /// Projections: points of this ball onto cosets meeting the coset ball.
    pub projection_radius: u32,
    pub coset_radius: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub mismatches: u64,
    pub first_mismatch: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Vec<String>) {
        self.checked += 1;
        if !ok {
            if self.mismatches == 0 {
                self.first_mismatch = witness();
            }
            self.mismatches += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub plan: OraclePlan,
    pub metric: Tally,
    pub conedoff: Tally,
    pub projection: Tally,
    pub census: Census,
}

impl OracleReport {
    pub fn mismatches(&self) -> u64 {
        self.metric.mismatches + self.conedoff.mismatches + self.projection.mismatches
    }
}

pub fn oracle_scan(spec: &GroupSpec, plan: OraclePlan) -> Result<OracleReport> {
    let cap = DEFAULT_BALL_CAP;
    let ball = Ball::new(spec, plan.radius, cap)?;
    let mut census = Census::default();
    let (mut metric, mut conedoff, mut projection) = (Tally::default(), Tally::default(), Tally::default());
    let f = |x| spec.format(x);
    if spec.is_standard() {
        let bfs = MetricBackend::bfs(spec, 2 * plan.radius, cap)?;
        let hat = HatBackend::bfs(spec, 2 * plan.radius, cap)?;
        for (x, _) in ball.iter() {
            for (y, _) in ball.iter() {
                let a = dist_exact(spec, x, y)?;
                metric.record(bfs.dist(x, y)? == a, || vec![f(x), f(y)]);
                let h = dist_hat_exact(spec, x, y)?;
                conedoff.record(hat.dist(x, y)? == h, || vec![f(x), f(y)]);
                census.configurations += 1;
            }
        }
        let reach = plan.projection_radius + plan.coset_radius;
        let proj = Projector::new(MetricBackend::bfs(spec, reach, cap)?);
        let cosets = cosets_meeting_ball(spec, plan.coset_radius, cap)?;
        for (x, _) in Ball::new(spec, plan.projection_radius, cap)?.iter() {
            for p in &cosets {
                let gate = gate_projection(spec, p, x)?.point;
                let Some(brute) = census.run(|| proj_bruteforce(&proj, p, x))? else { continue };
                projection.record(brute == [gate], || vec![p.format(spec), f(x)]);
            }
        }
    } else {
        let small = MetricBackend::bfs(spec, 2 * plan.radius, cap)?;
        let large = MetricBackend::bfs(spec, 2 * plan.radius + 2, cap)?;
        let hs = HatBackend::bfs(spec, 2 * plan.radius, cap)?;
        let hl = HatBackend::bfs(spec, 2 * plan.radius + 2, cap)?;
        for (x, _) in ball.iter() {
            for (y, _) in ball.iter() {
                metric.record(small.dist(x, y)? == large.dist(x, y)?, || vec![f(x), f(y)]);
                if let Some((a, b)) = census.run(|| Ok((hs.dist(x, y)?, hl.dist(x, y)?)))? {
                    conedoff.record(a == b, || vec![f(x), f(y)]);
                }
            }
        }
    }
    Ok(OracleReport { plan, metric, conedoff, projection, census })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{c2c3, c2c3_ab, zxz2};

    #[test]
    fn backends_agree() {
        let plan = OraclePlan { radius: 3, projection_radius: 3, coset_radius: 2 };
        for spec in [c2c3(), zxz2(), c2c3_ab()] {
            let r = oracle_scan(&spec, plan).unwrap();
            assert_eq!(r.mismatches(), 0, "{r:?}");
            assert!(r.metric.checked > 0);
        }
    }
}
