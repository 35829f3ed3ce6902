//! Run configuration: a TOML file describing the group, the metric backend,
//! the suites to run and their sample sizes.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use relhyp::factor::FactorSpec;
use relhyp::group::{ExtraGenerator, GroupSpec, DEFAULT_BALL_CAP};
use relhyp::verify::{ApPlan, BatteryPlan, BcpPlan, DstgPlan, LiftPlan, OraclePlan};

use crate::error::CliError;

/// Suite names in execution order.
pub const SUITES: [&str; 8] = ["oracle", "ap", "battery", "dstg", "formula", "bcp", "lifts", "thinness"];

const RANDOMIZED: [&str; 5] = ["battery", "dstg", "formula", "lifts", "thinness"];

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub group: GroupConfig,
    #[serde(default)]
    pub space: SpaceConfig,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub ap: ApConfig,
    #[serde(default)]
    pub battery: BatteryConfig,
    #[serde(default)]
    pub dstg: DstgConfig,
    #[serde(default)]
    pub formula: FormulaConfig,
    #[serde(default)]
    pub bcp: BcpConfig,
    #[serde(default)]
    pub lifts: LiftsConfig,
    #[serde(default)]
    pub thinness: ThinnessConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub name: String,
    pub factors: Vec<FactorConfig>,
    #[serde(default)]
    pub generators: Vec<GeneratorConfig>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorKindConfig {
    Cyclic,
    InfiniteCyclic,
    FreeAbelian2,
    Table,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FactorConfig {
    pub name: String,
    pub kind: FactorKindConfig,
    pub labels: Vec<String>,
    #[serde(default = "yes")]
    pub peripheral: bool,
    /// Order of a finite cyclic factor.
    pub order: Option<u32>,
    /// Multiplication table of a finite factor, identity at index 0.
    pub rows: Option<Vec<Vec<u32>>>,
    /// Table indices of the generators named in `labels`.
    pub generators: Option<Vec<u32>>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub label: String,
    pub word: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Bfs,
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpaceConfig {
    pub mode: Mode,
    /// Sample radius `r`; BFS backends cover radius `2r + 2`.
    pub radius: u32,
    pub cap: usize,
}

impl Default for SpaceConfig {
    fn default() -> Self {
        Self { mode: Mode::Auto, radius: 4, cap: DEFAULT_BALL_CAP }
    }
}

impl SpaceConfig {
    pub fn backend_radius(&self) -> u32 {
        2 * self.radius + 2
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub suites: Vec<String>,
    pub thresholds: Vec<u32>,
    pub samples: usize,
    pub seed: Option<u64>,
    /// Largest tolerated fraction of configurations skipped as uncertified.
    pub skip_tolerance: f64,
    pub out: PathBuf,
}

impl Default for RunSection {
    fn default() -> Self {
        Self { suites: Vec::new(), thresholds: vec![2, 4, 8], samples: 200, seed: None, skip_tolerance: 0.05, out: PathBuf::from("reports") }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub radius: Option<u32>,
    pub projection_radius: Option<u32>,
    pub coset_radius: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ApConfig {
    pub sample_radius: Option<u32>,
    pub coset_radius: Option<u32>,
    pub point_radius: Option<u32>,
    pub pair_radius: Option<u32>,
    pub depth: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BatteryConfig {
    pub configurations: Option<usize>,
    pub max_syllables: Option<usize>,
    pub max_syllable_len: Option<u32>,
    /// Projection constant; measured by the AP suite when absent.
    pub c: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DstgConfig {
    pub sample_radius: Option<u32>,
    pub coset_radius: Option<u32>,
    pub point_radius: Option<u32>,
    pub region_radius: Option<u32>,
    pub d0: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FormulaConfig {
    /// Draw pairs from this ball instead of random normal forms.
    pub sample_radius: Option<u32>,
    pub max_syllables: Option<usize>,
    pub max_syllable_len: Option<u32>,
    /// Cosets within this distance of a geodesic enter the sum (BFS mode).
    pub candidate_radius: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BcpConfig {
    pub radius: Option<u32>,
    pub cap: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LiftsConfig {
    pub sample_radius: Option<u32>,
    pub max_syllables: Option<usize>,
    pub max_syllable_len: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ThinnessConfig {
    pub k: Option<u32>,
    pub exhaustive_radius: Option<u32>,
    pub max_syllables: Option<usize>,
    pub max_syllable_len: Option<u32>,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub suites: Option<Vec<String>>,
    pub thresholds: Option<Vec<u32>>,
    pub radius: Option<u32>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(s) = o.suites {
            self.run.suites = s;
        }
        if let Some(t) = o.thresholds {
            self.run.thresholds = t;
        }
        if let Some(r) = o.radius {
            self.space.radius = r;
        }
        if let Some(n) = o.samples {
            self.run.samples = n;
        }
        if let Some(s) = o.seed {
            self.run.seed = Some(s);
        }
        if let Some(p) = o.out {
            self.run.out = p;
        }
    }

    /// Checks everything that does not require building the group balls.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.run.suites.is_empty() {
            return bad("no suites selected".into());
        }
        for s in &self.run.suites {
            if !SUITES.contains(&s.as_str()) {
                return bad(format!("unknown suite {s:?}; expected one of {}", SUITES.join(", ")));
            }
        }
        if self.run.seed.is_none() && self.run.suites.iter().any(|s| RANDOMIZED.contains(&s.as_str())) {
            return bad("a seed is required for randomized suites".into());
        }
        if self.run.thresholds.is_empty() {
            return bad("threshold list is empty".into());
        }
        if self.run.samples == 0 {
            return bad("sample size must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.run.skip_tolerance) {
            return bad("skip_tolerance must lie in [0, 1]".into());
        }
        if self.space.radius == 0 {
            return bad("radius must be positive".into());
        }
        Ok(())
    }

    /// Selected suites in canonical order, without repeats.
    pub fn suites(&self) -> Vec<&'static str> {
        SUITES.iter().copied().filter(|s| self.run.suites.iter().any(|t| t == s)).collect()
    }

    pub fn seed(&self) -> u64 {
        self.run.seed.unwrap_or(0)
    }

    pub fn group(&self) -> Result<GroupSpec, CliError> {
        let factors = self.group.factors.iter().map(build_factor).collect::<Result<Vec<_>, _>>()?;
        let spec = GroupSpec::new(factors).map_err(config_err)?;
        if self.group.generators.is_empty() {
            return Ok(spec);
        }
        let extra = self
            .group
            .generators
            .iter()
            .map(|g| Ok(ExtraGenerator { label: g.label.clone(), word: spec.parse(&g.word).map_err(config_err)? }))
            .collect::<Result<Vec<_>, CliError>>()?;
        spec.with_extra_generators(extra).map_err(config_err)
    }

    pub fn is_exact(&self, spec: &GroupSpec) -> bool {
        match self.space.mode {
            Mode::Exact => true,
            Mode::Bfs => false,
            Mode::Auto => spec.is_standard(),
        }
    }

    pub fn oracle_plan(&self) -> OraclePlan {
        let r = self.space.radius;
        let o = &self.oracle;
        OraclePlan { radius: o.radius.unwrap_or(r), projection_radius: o.projection_radius.unwrap_or(r), coset_radius: o.coset_radius.unwrap_or(r.div_ceil(2)) }
    }

    pub fn ap_plan(&self, exact: bool) -> ApPlan {
        let r = self.space.radius;
        let a = &self.ap;
        let base = ApPlan::new(a.sample_radius.unwrap_or(r), a.coset_radius.unwrap_or(r / 2));
        let default_point = if exact { base.point_radius } else { 1 };
        let default_pair = if exact { base.pair_radius } else { base.sample_radius.saturating_sub(2) };
        ApPlan {
            point_radius: a.point_radius.unwrap_or(default_point),
            pair_radius: a.pair_radius.unwrap_or(default_pair),
            ap2_max_depth: a.depth.unwrap_or(base.ap2_max_depth),
            ..base
        }
    }

    pub fn battery_plan(&self, exact: bool) -> BatteryPlan {
        let b = &self.battery;
        BatteryPlan {
            configurations: b.configurations.unwrap_or(10_000),
            max_syllables: b.max_syllables.unwrap_or(4),
            max_syllable_len: b.max_syllable_len.unwrap_or(if exact { 3 } else { 1 }),
            seed: self.seed(),
        }
    }

    pub fn dstg_plan(&self) -> DstgPlan {
        let r = self.space.radius;
        let d = &self.dstg;
        DstgPlan {
            sample_radius: d.sample_radius.unwrap_or(r.min(3)),
            coset_radius: d.coset_radius.unwrap_or(1),
            point_radius: d.point_radius.unwrap_or(2),
            region_radius: d.region_radius.unwrap_or(r.min(5)),
            samples: self.run.samples,
            seed: self.seed(),
            d0: d.d0.unwrap_or(1),
        }
    }

    pub fn bcp_plan(&self) -> BcpPlan {
        BcpPlan { radius: self.bcp.radius.unwrap_or(self.space.radius), cap: self.bcp.cap.unwrap_or(10_000) }
    }

    pub fn lift_plan(&self, exact: bool) -> LiftPlan {
        let l = &self.lifts;
        LiftPlan {
            samples: self.run.samples,
            sample_radius: l.sample_radius.or(if exact { None } else { Some(self.space.radius) }),
            max_syllables: l.max_syllables.unwrap_or(10),
            max_syllable_len: l.max_syllable_len.unwrap_or(12),
            seed: self.seed(),
        }
    }
}

fn config_err(e: relhyp::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn build_factor(f: &FactorConfig) -> Result<FactorSpec, CliError> {
    let need = |n: usize| {
        if f.labels.len() == n {
            Ok(())
        } else {
            Err(CliError::Config(format!("factor {} needs {n} label(s)", f.name)))
        }
    };
    let spec = match f.kind {
        FactorKindConfig::Cyclic => {
            need(1)?;
            let order = f.order.ok_or_else(|| CliError::Config(format!("factor {} needs an order", f.name)))?;
            FactorSpec::cyclic(&f.name, order, &f.labels[0], f.peripheral)
        }
        FactorKindConfig::InfiniteCyclic => {
            need(1)?;
            FactorSpec::infinite_cyclic(&f.name, &f.labels[0], f.peripheral)
        }
        FactorKindConfig::FreeAbelian2 => {
            need(2)?;
            FactorSpec::free_abelian2(&f.name, [&f.labels[0], &f.labels[1]], f.peripheral)
        }
        FactorKindConfig::Table => {
            let (Some(rows), Some(idx)) = (&f.rows, &f.generators) else {
                return Err(CliError::Config(format!("factor {} needs rows and generators", f.name)));
            };
            need(idx.len())?;
            let gens: Vec<(&str, u32)> = f.labels.iter().map(String::as_str).zip(idx.iter().copied()).collect();
            FactorSpec::finite_table(&f.name, rows.clone(), &gens, f.peripheral)
        }
    };
    spec.map_err(config_err)
}
