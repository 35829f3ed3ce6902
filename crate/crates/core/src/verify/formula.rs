//! The distance formula `d(x,y) ≈ Σ_P {{d(π_P x, π_P y)}}_L + d̂(x,y)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Element;
use crate::peripheral::{separating_cosets, Coset};
use crate::scalar::fit_affine;
use crate::{Fit, Ratio};

use super::Space;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub coset: String,
    pub value: u32,
}

/// Lower-bound estimate `d(x,y) ≥ Σ_{v ≥ 2σ+2M} (v − 2σ − 2M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Estimate {
    pub sigma: u32,
    pub m: u32,
    pub lower: u64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaEval {
    pub x: String,
    pub y: String,
    pub lhs: u32,
    pub dhat: u32,
    /// Cosets with a nonzero projection distance, sorted by coset.
    pub terms: Vec<Term>,
    /// `(L, rhs(L))`.
    pub rhs: Vec<(u32, u64)>,
    pub estimate: Option<Estimate>,
}

impl FormulaEval {
    pub fn rhs_at(&self, l: u32) -> Option<u64> {
        self.rhs.iter().find(|(t, _)| *t == l).map(|&(_, v)| v)
    }
}

/// `{{v}}_L`: `v` if `v > L`, else 0.
pub fn threshold(v: u64, l: u32) -> u64 {
    if v > l as u64 {
        v
    } else {
        0
    }
}

/// Candidate cosets for the sum. In the exact metric these are the
/// separating cosets; otherwise cosets within `radius` of the geodesic are
/// added, which contains every coset with a large projection distance once
/// `radius ≥ 2C`.
fn candidates(space: &Space, x: &Element, y: &Element, radius: u32) -> Result<Vec<Coset>> {
    let mut out = separating_cosets(space.spec(), x, y);
    if !space.is_exact() {
        for v in &space.geodesic(x, y)?.vertices {
            out.extend(space.cosets_near(v, radius)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Evaluates both sides of the formula; `estimate` supplies `(σ, M)`.
pub fn distance_formula(space: &Space, x: &Element, y: &Element, thresholds: &[u32], candidate_radius: u32, estimate: Option<(u32, u32)>) -> Result<FormulaEval> {
    let spec = space.spec();
    let lhs = space.d(x, y)?;
    let dhat = space.hat().dist(x, y)?;
    let mut terms = Vec::new();
    for p in candidates(space, x, y, candidate_radius)? {
        let value = space.d(&space.project(&p, x)?, &space.project(&p, y)?)?;
        if value > 0 {
            terms.push(Term { coset: p.format(spec), value });
        }
    }
    let rhs = thresholds
        .iter()
        .map(|&l| (l, terms.iter().map(|t| threshold(t.value as u64, l)).sum::<u64>() + dhat as u64))
        .collect();
    let estimate = estimate.map(|(sigma, m)| {
        let cut = 2 * sigma as u64 + 2 * m as u64;
        let lower = terms.iter().map(|t| t.value as u64).filter(|&v| v >= cut).map(|v| v - cut).sum::<u64>();
        Estimate { sigma, m, lower, holds: lower <= lhs as u64 }
    });
    Ok(FormulaEval { x: spec.format(x), y: spec.format(y), lhs, dhat, terms, rhs, estimate })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulaFit {
    pub l: u32,
    pub lambda: String,
    pub mu: String,
    pub lambda_f64: f64,
    pub mu_f64: f64,
    pub pairs: usize,
    #[serde(skip)]
    pub fit: Fit,
}

/// Least multiplicative constant `λ` (and then additive `μ`) with
/// `lhs/λ − μ ≤ rhs(L) ≤ λ·lhs + μ` over the sample, per threshold.
pub fn fit_formula_constants(evals: &[FormulaEval], thresholds: &[u32]) -> Result<Vec<FormulaFit>> {
    if evals.is_empty() {
        return Err(Error::EmptySample);
    }
    thresholds
        .iter()
        .map(|&l| {
            let pairs: Vec<(u64, u64)> = evals
                .iter()
                .map(|e| e.rhs_at(l).map(|r| (e.lhs as u64, r)).ok_or_else(|| Error::OutOfRange(format!("threshold {l} not evaluated"))))
                .collect::<Result<_>>()?;
            let fit = fit_affine::<Ratio>(&pairs, Ratio::from_integer(0))?;
            Ok(FormulaFit {
                l,
                lambda: fit.lambda.to_string(),
                mu: fit.mu.to_string(),
                lambda_f64: crate::Scalar::as_f64(fit.lambda),
                mu_f64: crate::Scalar::as_f64(fit.mu),
                pairs: pairs.len(),
                fit,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::zxz2;
    use crate::verify::sample::Sampler;

    #[test]
    fn worked_example() {
        let z = zxz2();
        let space = Space::exact(&z).unwrap();
        let y = z.parse("t u^5 t u^7").unwrap();
        let e = distance_formula(&space, &Element::identity(), &y, &[4, 6], 1, Some((1, 1))).unwrap();
        assert_eq!((e.lhs, e.dhat), (14, 4));
        assert_eq!(e.terms.iter().map(|t| t.value).collect::<Vec<_>>(), [5, 7]);
        assert_eq!(e.rhs_at(4), Some(16));
        assert_eq!(e.rhs_at(6), Some(11));
        let est = e.estimate.unwrap();
        assert_eq!(est.lower, 1 + 3);
        assert!(est.holds);
    }

    #[test]
    fn trivial_pair() {
        let z = zxz2();
        let space = Space::exact(&z).unwrap();
        let x = z.parse("t u").unwrap();
        let e = distance_formula(&space, &x, &x, &[1, 4], 1, None).unwrap();
        assert_eq!(e.rhs, [(1, 0), (4, 0)]);
        let fit = fit_formula_constants(&[e], &[1, 4]).unwrap();
        assert_eq!(fit[0].fit, Fit::exact());
        assert_eq!(fit_formula_constants(&[], &[4]), Err(Error::EmptySample));
    }

    #[test]
    fn rhs_monotone_and_above_dhat() {
        let z = zxz2();
        let space = Space::exact(&z).unwrap();
        let mut s = Sampler::new(9);
        let ls = [0, 1, 2, 4, 8];
        for _ in 0..200 {
            let (x, y) = (s.element(&z, 6, 6), s.element(&z, 6, 6));
            let e = distance_formula(&space, &x, &y, &ls, 1, None).unwrap();
            assert!(e.rhs.windows(2).all(|w| w[0].1 >= w[1].1));
            assert!(e.rhs.iter().all(|&(_, r)| r >= e.dhat as u64));
            // with L = 0 each peripheral syllable counts once more on the right
            assert_eq!(e.rhs_at(0).unwrap(), e.lhs as u64 + e.terms.len() as u64);
        }
    }
}
