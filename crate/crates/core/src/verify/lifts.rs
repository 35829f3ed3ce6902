//! Lifts of coned-off geodesics and their quasi-geodesic constants.

use serde::Serialize;

use crate::conedoff::lift;
use crate::error::{Error, Result};
use crate::group::{Element, DEFAULT_BALL_CAP};
use crate::metric::{additive_constant, path_pairs, QG_ALLOWANCE};
use crate::scalar::fit_affine;
use crate::{Fit, Ratio};

use super::sample::Sampler;
use super::{ball_elements, Census, Extremum, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiftPlan {
    pub samples: usize,
    /// Endpoints are drawn from this ball when set; otherwise random normal
    /// forms with the syllable bounds below.
    pub sample_radius: Option<u32>,
    pub max_syllables: usize,
    pub max_syllable_len: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftReport {
    pub plan: LiftPlan,
    /// Constants valid for every sampled lift simultaneously.
    pub lambda: String,
    pub mu: String,
    /// Largest `c` making a lift a `(1, c)`-quasi-geodesic.
    pub additive: Extremum,
    /// Number of lifts that are geodesics.
    pub geodesic_lifts: usize,
    pub census: Census,
    #[serde(skip)]
    pub fit: Fit,
}

pub fn lift_scan(space: &Space, plan: LiftPlan) -> Result<LiftReport> {
    let spec = space.spec();
    let mut sampler = Sampler::new(plan.seed);
    let pool: Option<Vec<Element>> = plan.sample_radius.map(|r| ball_elements(spec, r, DEFAULT_BALL_CAP)).transpose()?;
    let mut census = Census::default();
    let mut pairs = Vec::new();
    let mut additive = Extremum::default();
    let mut geodesic_lifts = 0;
    for _ in 0..plan.samples {
        let (x, y) = match &pool {
            Some(p) => (sampler.pick(p).clone(), sampler.pick(p).clone()),
            None => (sampler.element(spec, plan.max_syllables, plan.max_syllable_len), sampler.element(spec, plan.max_syllables, plan.max_syllable_len)),
        };
        let got = census.run(|| {
            let l = lift(spec, &space.hat().geodesic(&x, &y)?)?;
            Ok((path_pairs(&l, space.metric())?, additive_constant(&l, space.metric())?, l))
        })?;
        let Some((p, c, l)) = got else { continue };
        if c == 0 {
            geodesic_lifts += 1;
        }
        additive.offer(c as i64, || l.vertices.iter().map(|v| space.fmt(v)).collect());
        pairs.extend(p);
    }
    if census.configurations == 0 {
        return Err(Error::EmptySample);
    }
    let fit = if pairs.is_empty() { Fit::exact() } else { fit_affine::<Ratio>(&pairs, Ratio::from_integer(QG_ALLOWANCE))? };
    Ok(LiftReport { plan, lambda: fit.lambda.to_string(), mu: fit.mu.to_string(), additive, geodesic_lifts, census, fit })
}
