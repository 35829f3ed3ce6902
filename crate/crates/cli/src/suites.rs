//! One function per suite. Each returns the report tables, a JSON summary
//! and the list of failed checks.

use serde::Serialize;
use serde_json::{json, Value};

use relhyp::group::{Element, GroupSpec, DEFAULT_BALL_CAP};
use relhyp::verify::sample::Sampler;
use relhyp::verify::{
    ball_elements, bcp_scan, check_ap_axioms, distance_formula, estimate_dstg_constants, fit_formula_constants, lemma_battery, lift_scan, oracle_scan, sample_triangles, thinness_scan, ApReport, Census,
    DstgConstants, Space,
};
use relhyp::{Fit, HatBackend};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::Table;

pub struct SuiteResult {
    pub name: &'static str,
    pub tables: Vec<Table>,
    pub summary: Value,
    pub failures: Vec<String>,
    pub census: Census,
}

/// Shared state for one run: the group, its metric space, and results that
/// later suites reuse.
pub struct Context<'a> {
    cfg: &'a RunConfig,
    spec: GroupSpec,
    exact: bool,
    space: Option<Space>,
    ap: Option<ApReport>,
    dstg: Option<DstgConstants>,
}

impl<'a> Context<'a> {
    pub fn new(cfg: &'a RunConfig) -> Result<Self, CliError> {
        let spec = cfg.group()?;
        let exact = cfg.is_exact(&spec);
        if exact && !spec.is_standard() {
            return Err(CliError::Config("exact mode requires the standard generating set".into()));
        }
        Ok(Self { cfg, spec, exact, space: None, ap: None, dstg: None })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    fn space(&mut self) -> Result<&Space, CliError> {
        if self.space.is_none() {
            let s = if self.exact { Space::exact(&self.spec)? } else { Space::bfs(&self.spec, self.cfg.space.backend_radius(), self.cfg.space.cap)? };
            self.space = Some(s);
        }
        Ok(self.space.as_ref().expect("space was just built"))
    }

    fn ap(&mut self) -> Result<&ApReport, CliError> {
        if self.ap.is_none() {
            let plan = self.cfg.ap_plan(self.exact);
            let r = check_ap_axioms(self.space()?, plan)?;
            self.ap = Some(r);
        }
        Ok(self.ap.as_ref().expect("ap report was just built"))
    }

    fn dstg(&mut self) -> Result<&DstgConstants, CliError> {
        if self.dstg.is_none() {
            let plan = self.cfg.dstg_plan();
            let r = estimate_dstg_constants(self.space()?, plan)?;
            self.dstg = Some(r);
        }
        Ok(self.dstg.as_ref().expect("dstg constants were just built"))
    }

    fn projection_constant(&mut self) -> Result<u32, CliError> {
        match self.cfg.battery.c {
            Some(c) => Ok(c),
            None => Ok(self.ap()?.projection_constant),
        }
    }

    pub fn run(&mut self, suite: &str) -> Result<SuiteResult, CliError> {
        let mut r = match suite {
            "oracle" => self.oracle(),
            "ap" => self.ap_suite(),
            "battery" => self.battery(),
            "dstg" => self.dstg_suite(),
            "formula" => self.formula(),
            "bcp" => self.bcp(),
            "lifts" => self.lifts(),
            "thinness" => self.thinness(),
            other => Err(CliError::Config(format!("unknown suite {other:?}"))),
        }?;
        if r.census.skip_rate() > self.cfg.run.skip_tolerance {
            r.failures.push(format!("skip rate {:.4} exceeds tolerance {}", r.census.skip_rate(), self.cfg.run.skip_tolerance));
        }
        Ok(r)
    }

    fn oracle(&mut self) -> Result<SuiteResult, CliError> {
        let r = oracle_scan(&self.spec, self.cfg.oracle_plan())?;
        let mut t = Table::new("oracle.csv", &["check", "checked", "mismatches", "first_mismatch"]);
        for (name, tally) in [("metric", &r.metric), ("conedoff", &r.conedoff), ("projection", &r.projection)] {
            t.row([name.to_string(), tally.checked.to_string(), tally.mismatches.to_string(), join(&tally.first_mismatch)]);
        }
        let failures = if r.mismatches() > 0 { vec![format!("{} backend mismatches", r.mismatches())] } else { Vec::new() };
        Ok(SuiteResult { name: "oracle", tables: vec![t], summary: summary(&r)?, failures, census: r.census })
    }

    fn ap_suite(&mut self) -> Result<SuiteResult, CliError> {
        let exact = self.exact;
        let r = self.ap()?.clone();
        let mut t = Table::new("ap.csv", &["constant", "value", "witness"]);
        for (name, e) in [
            ("AP1", &r.ap1),
            ("AP2", &r.ap2),
            ("AP3-diameter", &r.ap3_diam),
            ("AP3-cardinality", &r.ap3_card),
            ("AP'1", &r.ap1_prime),
            ("AP'2", &r.ap2_prime),
            ("AP'2-inclusive", &r.ap2_prime_inclusive),
        ] {
            t.row([name.to_string(), e.value.to_string(), join(&e.witness)]);
        }
        t.row(["C".to_string(), r.projection_constant.to_string(), String::new()]);
        let mut failures: Vec<String> = r.derived.iter().filter(|c| !c.holds).map(|c| format!("derived check failed: {} ({} > {})", c.name, c.lhs, c.rhs)).collect();
        if exact && (r.projection_constant != 0 || r.ap3_card.get() > 1) {
            failures.push(format!("exact regime not certified: C = {}, |pi_P(Q)| = {}", r.projection_constant, r.ap3_card.get()));
        }
        Ok(SuiteResult { name: "ap", tables: vec![t], summary: summary(&r)?, failures, census: r.census })
    }

    fn battery(&mut self) -> Result<SuiteResult, CliError> {
        let c = self.projection_constant()?;
        let plan = self.cfg.battery_plan(self.exact);
        let r = lemma_battery(self.space()?, c, plan)?;
        let mut t = Table::new("battery.csv", &["lemma", "checked", "violations", "min_slack", "witness"]);
        for l in &r.lemmas {
            t.row([l.lemma.to_string(), l.checked.to_string(), l.violations.to_string(), l.min_slack.map(|s| s.to_string()).unwrap_or_default(), join(&l.witness)]);
        }
        let failures = r.lemmas.iter().filter(|l| l.violations > 0).map(|l| format!("{}: {} violations", l.lemma, l.violations)).collect();
        Ok(SuiteResult { name: "battery", tables: vec![t], summary: summary(&r)?, failures, census: r.census })
    }

    fn dstg_suite(&mut self) -> Result<SuiteResult, CliError> {
        let r = self.dstg()?.clone();
        let mut t = Table::new("dstg.csv", &["constant", "param", "value", "truncated", "witness"]);
        t.row(["M".to_string(), String::new(), r.m.value.to_string(), String::new(), join(&r.m.witness)]);
        for (name, rows) in [("B", &r.b), ("sigma", &r.sigma), ("m_entry", &r.m_entry)] {
            for row in rows {
                t.row([name.to_string(), row.param.to_string(), row.value.value.to_string(), row.truncated.to_string(), join(&row.value.witness)]);
            }
        }
        for row in &r.t_per_l {
            t.row(["t".to_string(), row.param.to_string(), row.value.clone(), String::new(), join(&row.witness)]);
        }
        Ok(SuiteResult { name: "dstg", tables: vec![t], summary: summary(&r)?, failures: Vec::new(), census: r.census })
    }

    fn formula(&mut self) -> Result<SuiteResult, CliError> {
        let cfg = self.cfg;
        let exact = self.exact;
        let estimate = self.dstg()?.estimate_constants();
        let candidate_radius = match cfg.formula.candidate_radius {
            Some(r) => r,
            None if exact => 0,
            None => 2 * self.projection_constant()?.max(1),
        };
        let thresholds = cfg.run.thresholds.clone();
        let space = self.space()?;
        let spec = space.spec();
        let mut sampler = Sampler::new(cfg.seed());
        let pool = match (cfg.formula.sample_radius, exact) {
            (Some(r), _) => Some(ball_elements(spec, r, DEFAULT_BALL_CAP)?),
            (None, false) => Some(ball_elements(spec, cfg.space.radius, DEFAULT_BALL_CAP)?),
            (None, true) => None,
        };
        let (syl, len) = (cfg.formula.max_syllables.unwrap_or(10), cfg.formula.max_syllable_len.unwrap_or(12));
        let mut census = Census::default();
        let mut evals = Vec::new();
        for _ in 0..cfg.run.samples {
            let (x, y): (Element, Element) = match &pool {
                Some(p) => (sampler.pick(p).clone(), sampler.pick(p).clone()),
                None => (sampler.element(spec, syl, len), sampler.element(spec, syl, len)),
            };
            if let Some(e) = census.run(|| distance_formula(space, &x, &y, &thresholds, candidate_radius, Some(estimate)))? {
                evals.push(e);
            }
        }
        let fits = fit_formula_constants(&evals, &thresholds)?;

        let mut t = Table::new("formula.csv", &["L", "lambda", "mu", "lambda_f64", "mu_f64", "pairs"]);
        for f in &fits {
            t.row([f.l.to_string(), f.lambda.clone(), f.mu.clone(), f.lambda_f64.to_string(), f.mu_f64.to_string(), f.pairs.to_string()]);
        }
        let mut header = vec!["x".to_string(), "y".to_string(), "lhs".to_string(), "dhat".to_string(), "terms".to_string(), "estimate_lower".to_string()];
        header.extend(thresholds.iter().map(|l| format!("rhs_L{l}")));
        let mut p = Table::with_header("formula_pairs.csv", header);
        for e in &evals {
            let mut row = vec![e.x.clone(), e.y.clone(), e.lhs.to_string(), e.dhat.to_string(), e.terms.iter().map(|t| t.value.to_string()).collect::<Vec<_>>().join(" ")];
            row.push(e.estimate.as_ref().map(|s| s.lower.to_string()).unwrap_or_default());
            row.extend(e.rhs.iter().map(|(_, v)| v.to_string()));
            p.row(row);
        }

        let mut failures: Vec<String> = evals
            .iter()
            .filter(|e| e.estimate.as_ref().is_some_and(|s| !s.holds))
            .map(|e| format!("lower-bound estimate fails for ({}, {})", e.x, e.y))
            .collect();
        let nondecreasing = fits.windows(2).all(|w| w[0].fit.lambda <= w[1].fit.lambda || w[0].l > w[1].l);
        if exact && !nondecreasing {
            failures.push("fitted lambda decreases with L".into());
        }
        let s = json!({
            "thresholds": thresholds,
            "candidate_radius": candidate_radius,
            "sigma": estimate.0,
            "m": estimate.1,
            "fits": fits,
            "lambda_nondecreasing": nondecreasing,
            "estimate_failures": failures.len(),
            "census": &census,
        });
        Ok(SuiteResult { name: "formula", tables: vec![t, p], summary: s, failures, census })
    }

    fn bcp(&mut self) -> Result<SuiteResult, CliError> {
        let plan = self.cfg.bcp_plan();
        let exact = self.exact;
        let hat = HatBackend::bfs(&self.spec, if exact { plan.radius } else { self.cfg.space.backend_radius() }, self.cfg.space.cap)?;
        let r = bcp_scan(self.space()?, &hat, plan)?;
        let mut t = Table::new("bcp.csv", &["quantity", "value", "witness"]);
        t.row(["geodesics".into(), r.report.geodesics.to_string(), String::new()]);
        t.row(["pairs".into(), r.report.pairs.to_string(), String::new()]);
        t.row(["truncated_pairs".into(), r.truncated_pairs.to_string(), String::new()]);
        let wit = |clause: u8| r.report.witnesses.iter().find(|w| w.clause == clause).map(|w| format!("{} | {} | {}", w.coset, w.alpha.join(" "), w.beta.join(" "))).unwrap_or_default();
        t.row(["clause1".into(), r.report.clause1.to_string(), wit(1)]);
        t.row(["clause2".into(), r.report.clause2.to_string(), wit(2)]);
        t.row(["c".into(), r.report.c().to_string(), String::new()]);
        t.row(["crossing_threshold".into(), r.crossing_threshold.value.to_string(), join(&r.crossing_threshold.witness)]);
        let failures = if exact && r.report.c() > 1 { vec![format!("exact regime BCP constant {} exceeds 1", r.report.c())] } else { Vec::new() };
        Ok(SuiteResult { name: "bcp", tables: vec![t], summary: summary(&r)?, failures, census: r.census })
    }

    fn lifts(&mut self) -> Result<SuiteResult, CliError> {
        let plan = self.cfg.lift_plan(self.exact);
        let exact = self.exact;
        let r = lift_scan(self.space()?, plan)?;
        let mut t = Table::new("lifts.csv", &["quantity", "value", "witness"]);
        t.row(["lambda".into(), r.lambda.clone(), String::new()]);
        t.row(["mu".into(), r.mu.clone(), String::new()]);
        t.row(["additive".into(), r.additive.value.to_string(), join(&r.additive.witness)]);
        t.row(["geodesic_lifts".into(), r.geodesic_lifts.to_string(), String::new()]);
        let failures = if exact && r.fit != Fit::exact() { vec![format!("exact regime lifts are not geodesics: ({}, {})", r.lambda, r.mu)] } else { Vec::new() };
        Ok(SuiteResult { name: "lifts", tables: vec![t], summary: summary(&r)?, failures, census: r.census })
    }

    fn thinness(&mut self) -> Result<SuiteResult, CliError> {
        let cfg = self.cfg;
        let exact = self.exact;
        let th = &cfg.thinness;
        let r = cfg.space.radius;
        let k = th.k.unwrap_or(1);
        let exhaustive = th.exhaustive_radius.unwrap_or(if exact { 2 } else { r / 2 });
        let (syl, len) = if exact { (th.max_syllables.unwrap_or(6), th.max_syllable_len.unwrap_or(6)) } else { (th.max_syllables.unwrap_or((r as usize / 2).max(1)), th.max_syllable_len.unwrap_or(1)) };
        let space = self.space()?;
        let triangles = sample_triangles(space, exhaustive, cfg.run.samples, syl, len, cfg.seed())?;
        let rep = thinness_scan(space, k, &triangles)?;
        let mut t = Table::new("thinness.csv", &["x", "y", "z", "perimeter", "D", "delta"]);
        for rec in &rep.records {
            let [x, y, z] = rec.vertices.clone();
            t.row([x, y, z, rec.perimeter.to_string(), rec.d.to_string(), rec.delta.to_string()]);
        }
        let failures = rep.flagged.iter().map(|d| format!("thickness grows with perimeter at D = {d}")).collect();
        let worst = rep.records.iter().max_by_key(|r| (r.delta, r.perimeter)).map(|r| r.vertices.to_vec()).unwrap_or_default();
        let s = json!({
            "k": rep.k,
            "triangles": rep.records.len(),
            "exhaustive_radius": exhaustive,
            "max_syllables": syl,
            "max_syllable_len": len,
            "lambda": rep.lambda,
            "lambda_f64": rep.lambda_f64,
            "max_delta": rep.records.iter().map(|r| r.delta).max().unwrap_or(0),
            "max_d": rep.records.iter().map(|r| r.d).max().unwrap_or(0),
            "thickest": worst,
            "flagged": rep.flagged,
            "census": rep.census,
        });
        Ok(SuiteResult { name: "thinness", tables: vec![t], summary: s, failures, census: rep.census })
    }
}

fn summary<T: Serialize>(r: &T) -> Result<Value, CliError> {
    serde_json::to_value(r).map_err(|e| CliError::Core(relhyp::Error::Parse(e.to_string())))
}

fn join(w: &[String]) -> String {
    w.join(" ; ")
}
