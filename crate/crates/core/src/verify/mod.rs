//! Verification suites: almost-projection axioms, the derived lemma battery,
//! tree-graded constants, the distance formula, lifts, BCP and thinness.
//!
//! Every constant is a certified maximum over a finite exhaustive or seeded
//! sample. Configurations whose distances cannot be certified by the active
//! backend are skipped and counted, never guessed.

pub mod ap;
pub mod battery;
pub mod bcp;
pub mod dstg;
pub mod formula;
pub mod lifts;
pub mod oracle;
pub mod sample;
pub mod thinness;

use serde::Serialize;

use crate::conedoff::HatBackend;
use crate::error::Result;
use crate::group::{Element, GroupSpec};
use crate::metric::{MetricBackend, VertexPath};
use crate::peripheral::{Coset, Projector};

pub use ap::{check_ap_axioms, ApPlan, ApReport};
pub use battery::{lemma_battery, BatteryPlan, BatteryReport};
pub use bcp::{bcp_scan, BcpPlan, BcpScan};
pub use dstg::{estimate_dstg_constants, DstgConstants, DstgPlan};
pub use formula::{distance_formula, fit_formula_constants, FormulaEval, FormulaFit};
pub use lifts::{lift_scan, LiftPlan, LiftReport};
pub use oracle::{oracle_scan, OraclePlan, OracleReport};
pub use thinness::{sample_triangles, thinness_scan, ThinnessReport, Triangle};

/// Metric, projections and coned-off metric for one group.
#[derive(Debug, Clone)]
pub struct Space {
    proj: Projector,
    hat: HatBackend,
}

impl Space {
    /// Closed forms throughout; standard generators only.
    pub fn exact(spec: &GroupSpec) -> Result<Self> {
        Ok(Self { proj: Projector::new(MetricBackend::exact(spec)?), hat: HatBackend::exact(spec)? })
    }

    /// BFS balls of the given radius for both metrics.
    pub fn bfs(spec: &GroupSpec, radius: u32, cap: usize) -> Result<Self> {
        Ok(Self { proj: Projector::new(MetricBackend::bfs(spec, radius, cap)?), hat: HatBackend::bfs(spec, radius, cap)? })
    }

    /// Exact when the generating set allows it, BFS otherwise.
    pub fn auto(spec: &GroupSpec, radius: u32, cap: usize) -> Result<Self> {
        if spec.is_standard() {
            Self::exact(spec)
        } else {
            Self::bfs(spec, radius, cap)
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        self.proj.spec()
    }

    pub fn metric(&self) -> &MetricBackend {
        self.proj.backend()
    }

    pub fn projector(&self) -> &Projector {
        &self.proj
    }

    pub fn hat(&self) -> &HatBackend {
        &self.hat
    }

    pub fn is_exact(&self) -> bool {
        self.metric().is_exact()
    }

    pub fn d(&self, x: &Element, y: &Element) -> Result<u32> {
        self.metric().dist(x, y)
    }

    pub fn project(&self, p: &Coset, x: &Element) -> Result<Element> {
        self.proj.project(p, x)
    }

    /// `(π_P(x), d(x, P))`.
    pub fn project_with_dist(&self, p: &Coset, x: &Element) -> Result<(Element, u32)> {
        self.proj.project_with_dist(p, x)
    }

    pub fn dist_to(&self, p: &Coset, x: &Element) -> Result<u32> {
        self.proj.dist_to(p, x)
    }

    pub fn geodesic(&self, x: &Element, y: &Element) -> Result<VertexPath> {
        self.metric().geodesic(x, y)
    }

    /// Peripheral cosets within distance `r` of `x`.
    pub fn cosets_near(&self, x: &Element, r: u32) -> Result<Vec<Coset>> {
        self.proj.cosets_near(x, r)
    }

    pub fn fmt(&self, x: &Element) -> String {
        self.spec().format(x)
    }
}

/// Sample bookkeeping shared by all suites.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Census {
    pub configurations: u64,
    pub skipped: u64,
}

impl Census {
    /// Runs `f`, counting it as a configuration, or as skipped when a
    /// distance could not be certified. Other errors propagate.
    pub fn run<T>(&mut self, f: impl FnOnce() -> Result<T>) -> Result<Option<T>> {
        match f() {
            Ok(v) => {
                self.configurations += 1;
                Ok(Some(v))
            }
            Err(e) if e.is_out_of_range() => {
                self.skipped += 1;
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    pub fn add(&mut self, other: Census) {
        self.configurations += other.configurations;
        self.skipped += other.skipped;
    }

    /// Fraction of configurations skipped.
    pub fn skip_rate(&self) -> f64 {
        let total = self.configurations + self.skipped;
        if total == 0 {
            0.0
        } else {
            self.skipped as f64 / total as f64
        }
    }
}

/// An inequality between measured constants, recorded with its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl DerivedCheck {
    pub fn le(name: &str, lhs: u64, rhs: u64) -> Self {
        Self { name: name.to_string(), lhs: lhs.to_string(), rhs: rhs.to_string(), holds: lhs <= rhs }
    }
}

/// Running maximum with the first configuration that attained it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[derive(Default)]
pub struct Extremum {
    pub value: i64,
    pub witness: Vec<String>,
}


impl Extremum {
    pub fn offer(&mut self, value: i64, witness: impl FnOnce() -> Vec<String>) {
        if value > self.value {
            self.value = value;
            self.witness = witness();
        }
    }

    pub fn get(&self) -> u32 {
        self.value.max(0) as u32
    }
}

/// Peripheral cosets through the elements of the ball of radius `r`, sorted.
pub fn cosets_meeting_ball(spec: &GroupSpec, r: u32, cap: usize) -> Result<Vec<Coset>> {
    let ball = crate::group::Ball::new(spec, r, cap)?;
    let mut out: Vec<Coset> = ball.iter().flat_map(|(x, _)| crate::peripheral::cosets_through(spec, x)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Points `rep·h` of a coset with factor length `|h| ≤ r`.
pub fn coset_points(spec: &GroupSpec, p: &Coset, r: u32) -> Vec<Element> {
    spec.factor(p.factor)
        .ball(r)
        .into_iter()
        .map(|h| spec.mul(&p.rep, &spec.element_of_factor(p.factor, h).expect("factor ball elements are valid")))
        .collect()
}

/// Elements of the ball of radius `r` around the identity, in BFS order.
pub fn ball_elements(spec: &GroupSpec, r: u32, cap: usize) -> Result<Vec<Element>> {
    Ok(crate::group::Ball::new(spec, r, cap)?.iter().map(|(x, _)| x.clone()).collect())
}
