//! The lemma battery: consequences of the almost-projection axioms,
//! instantiated with a measured projection constant `C` on sampled paths and
//! cosets. Each inequality is a theorem, so every violation is a defect.

use serde::Serialize;

use crate::error::Result;
use crate::group::Element;
use crate::metric::{VertexPath, QG_ALLOWANCE};
use crate::peripheral::{cosets_through, Coset};
use crate::scalar::fit_affine;
use crate::Ratio;

use super::sample::{PathKind, Sampler};
use super::{Census, Space};

/// Lemma identifiers in report order.
pub const LEMMAS: [&str; 10] = [
    "coarsedistdecr-1",
    "coarsedistdecr-2",
    "coarsepropproj1-meets",
    "coarsepropproj1-window",
    "coarsepropproj2",
    "boundedproj",
    "projneighb",
    "morethanap2",
    "concatenation",
    "proj2-1",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BatteryPlan {
    /// Number of sampled (path, coset) configurations.
    pub configurations: usize,
    pub max_syllables: usize,
    pub max_syllable_len: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaTally {
    pub lemma: &'static str,
    pub checked: u64,
    pub violations: u64,
    /// Smallest observed `rhs − lhs`.
    pub min_slack: Option<i64>,
    /// First violation, or the configuration attaining the smallest slack.
    pub witness: Vec<String>,
}

impl LemmaTally {
    fn new(lemma: &'static str) -> Self {
        Self { lemma, checked: 0, violations: 0, min_slack: None, witness: Vec::new() }
    }

    fn check(&mut self, lhs: i64, rhs: i64, witness: impl FnOnce() -> Vec<String>) {
        self.checked += 1;
        let slack = rhs - lhs;
        let first_violation = slack < 0 && self.violations == 0;
        if slack < 0 {
            self.violations += 1;
        }
        if first_violation || (self.violations == 0 && self.min_slack.is_none_or(|m| slack < m)) {
            self.witness = witness();
        }
        self.min_slack = Some(self.min_slack.map_or(slack, |m| m.min(slack)));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatteryReport {
    pub c: u32,
    pub plan: BatteryPlan,
    pub lemmas: Vec<LemmaTally>,
    /// Configurations on which every applicable lemma was evaluated.
    pub configurations: usize,
    /// Counts every certified evaluation, including paths and concatenations.
    pub census: Census,
}

impl BatteryReport {
    pub fn violations(&self) -> u64 {
        self.lemmas.iter().map(|l| l.violations).sum()
    }
}

struct Tallies(Vec<LemmaTally>);

impl Tallies {
    fn get(&mut self, name: &str) -> &mut LemmaTally {
        self.0.iter_mut().find(|t| t.lemma == name).expect("known lemma")
    }
}

/// A sampled path with everything the lemmas need.
struct Config<'a> {
    space: &'a Space,
    path: VertexPath,
    coset: Coset,
    /// `d(vᵢ, vⱼ)` for path vertices.
    dm: Vec<Vec<u32>>,
    /// `d(vᵢ, P)`.
    dp: Vec<u32>,
    /// `π_P(vᵢ)`.
    pi: Vec<Element>,
    /// Least `c` making the path a `(1, c)`-quasi-geodesic.
    c: u32,
}

impl<'a> Config<'a> {
    fn build(space: &'a Space, path: VertexPath, coset: Coset) -> Result<Self> {
        let n = path.vertices.len();
        let mut dm = vec![vec![0; n]; n];
        let mut c = 0;
        for i in 0..n {
            for j in i + 1..n {
                let d = space.d(&path.vertices[i], &path.vertices[j])?;
                dm[i][j] = d;
                dm[j][i] = d;
                c = c.max(((j - i) as u32).saturating_sub(d));
            }
        }
        let mut dp = Vec::with_capacity(n);
        let mut pi = Vec::with_capacity(n);
        for v in &path.vertices {
            let (p, d) = space.project_with_dist(&coset, v)?;
            dp.push(d);
            pi.push(p);
        }
        Ok(Self { space, path, coset, dm, dp, pi, c })
    }

    fn len(&self) -> usize {
        self.path.len()
    }

    fn is_geodesic(&self) -> bool {
        self.dm[0][self.len()] as usize == self.len()
    }

    fn witness(&self, extra: &str) -> Vec<String> {
        let mut w = vec![self.coset.format(self.space.spec()), extra.to_string()];
        w.extend(self.path.vertices.iter().map(|v| self.space.fmt(v)));
        w
    }

    /// `min over vertices v of d(v, z)`.
    fn reach(&self, z: &Element) -> Result<u32> {
        let mut best = u32::MAX;
        for v in &self.path.vertices {
            best = best.min(self.space.d(v, z)?);
        }
        Ok(best)
    }

    fn check_all(&self, cc: u32, t: &mut Tallies) -> Result<()> {
        let s = self.space;
        let n = self.len();
        let (px, py) = (&self.pi[0], &self.pi[n]);
        let gap = s.d(px, py)? as i64;
        let (c, cl) = (cc as i64, self.c as i64);
        let l = n as i64;

        // coarsedistdecr-1, instantiated with max(C, 1)
        let ce = c.max(1);
        let min_dp = *self.dp.iter().min().expect("nonempty") as i64;
        for k in 1..=3i64 {
            if min_dp >= k * ce {
                t.get("coarsedistdecr-1").check(k * gap, l + k * ce, || self.witness(&format!("k={k}")));
            }
        }
        // coarsedistdecr-2
        let dxy = self.dm[0][n] as i64;
        t.get("coarsedistdecr-2").check(gap, dxy + 6 * c, || self.witness(""));

        // coarsepropproj1 with r = d(y, P)
        let r = self.dp[n] as i64;
        let rho = 2 * r + 6 * c + 5 * cl;
        let to_px: Vec<i64> = self.path.vertices.iter().map(|v| s.d(v, px).map(|d| d as i64)).collect::<Result<_>>()?;
        let meets = *to_px.iter().min().expect("nonempty");
        t.get("coarsepropproj1-meets").check(meets, rho, || self.witness(&format!("r={r}")));
        let dxp = self.dp[0] as i64;
        for i in 0..=n {
            let dxv = self.dm[0][i] as i64;
            if dxp - 2 * cl <= dxv && dxv <= dxp {
                t.get("coarsepropproj1-window").check(to_px[i], rho, || self.witness(&format!("r={r} i={i}")));
            }
        }

        if self.is_geodesic() {
            for r in [2 * c, 2 * c + 1, 2 * c + 2] {
                let Some(j) = (0..=n).find(|&i| self.dp[i] as i64 <= r) else { continue };
                // coarsepropproj2
                t.get("coarsepropproj2").check(to_px[j], 8 * r + 22 * c, || self.witness(&format!("r={r}")));
                // boundedproj on the initial segment ending at the first entry
                t.get("boundedproj").check(j as i64, dxp + 8 * r + 23 * c, || self.witness(&format!("r={r}")));
                for i in 0..=j {
                    t.get("boundedproj").check(s.d(&self.pi[i], px)? as i64, 8 * r + 30 * c, || self.witness(&format!("r={r} i={i}")));
                }
                // projneighb
                let inside: Vec<usize> = (0..=n).filter(|&i| self.dp[i] as i64 <= r).collect();
                let diam = inside.iter().flat_map(|&a| inside.iter().map(move |&b| (a, b))).map(|(a, b)| self.dm[a][b]).max().unwrap_or(0);
                t.get("projneighb").check(diam as i64, gap + 18 * r + 62 * c, || self.witness(&format!("r={r}")));
            }
        }

        // morethanap2 and proj2-1, instantiated with L = 8C+8c+1 and R = 10C+5c
        if gap > 8 * c + 8 * cl {
            let bound = 10 * c + 5 * cl;
            t.get("morethanap2").check(min_dp, 2 * c, || self.witness(""));
            let (rx, ry) = (self.reach(px)? as i64, self.reach(py)? as i64);
            t.get("morethanap2").check(rx.max(ry), bound, || self.witness(""));
            t.get("proj2-1").check(rx.max(ry), bound, || self.witness(""));
        }
        Ok(())
    }
}

/// Checks the concatenation of a geodesic `q → p` with a path starting at
/// `p` whose closest vertex to `q` is `p`.
fn check_concatenation(space: &Space, q: &Element, delta1: &VertexPath, t: &mut Tallies) -> Result<bool> {
    let p = delta1.start();
    let dqp = space.d(q, p)?;
    for v in &delta1.vertices {
        if space.d(q, v)? < dqp {
            return Ok(false);
        }
    }
    let pairs = crate::metric::path_pairs(delta1, space.metric())?;
    let fit = if pairs.is_empty() { crate::Fit::exact() } else { fit_affine::<Ratio>(&pairs, Ratio::from_integer(QG_ALLOWANCE))? };
    let (k, cq) = (fit.lambda, fit.mu);
    let delta = space.geodesic(q, p)?.concat(delta1);
    let factor = (Ratio::from_integer(2) * k + Ratio::from_integer(1)).max(Ratio::from_integer(3));
    let n = delta.vertices.len();
    for i in 0..n {
        for j in i + 1..n {
            let d = space.d(&delta.vertices[i], &delta.vertices[j])?;
            let rhs = factor * Ratio::from_integer(d as i64) + k * cq;
            let lhs = Ratio::from_integer((j - i) as i64);
            let slack = rhs - lhs;
            let w = || {
                let mut w = vec![space.fmt(q), format!("K={k} C={cq} i={i} j={j}")];
                w.extend(delta.vertices.iter().map(|v| space.fmt(v)));
                w
            };
            t.get("concatenation").check(0, slack.floor().to_integer(), w);
        }
    }
    Ok(true)
}

/// Runs every lemma on `plan.configurations` sampled configurations.
pub fn lemma_battery(space: &Space, c: u32, plan: BatteryPlan) -> Result<BatteryReport> {
    let spec = space.spec();
    let mut sampler = Sampler::new(plan.seed);
    let mut tallies = Tallies(LEMMAS.iter().map(|&l| LemmaTally::new(l)).collect());
    let mut census = Census::default();
    let mut done = 0usize;
    let mut k = 0usize;
    while done < plan.configurations {
        let kind = PathKind::ALL[k % PathKind::ALL.len()];
        k += 1;
        let x = sampler.element(spec, plan.max_syllables, plan.max_syllable_len);
        let y = sampler.element(spec, plan.max_syllables, plan.max_syllable_len);
        let Some(path) = census.run(|| sampler.path(space, kind, &x, &y))? else { continue };
        // cosets through a path vertex, or through a nearby point
        let anchor = if sampler.below(2) == 0 {
            sampler.pick(&path.vertices).clone()
        } else {
            spec.mul(&x, &sampler.element(spec, 2, plan.max_syllable_len))
        };
        let options = cosets_through(spec, &anchor);
        let coset = sampler.pick(&options).clone();
        let Some(cfg) = census.run(|| Config::build(space, path, coset))? else { continue };
        if census.run(|| cfg.check_all(c, &mut tallies))?.is_some() {
            done += 1;
        }
        if k.is_multiple_of(4) {
            let q = spec.mul(&x, &sampler.element(spec, 2, plan.max_syllable_len));
            census.run(|| check_concatenation(space, &q, &cfg.path, &mut tallies))?;
        }
    }
    Ok(BatteryReport { c, plan, lemmas: tallies.0, configurations: done, census })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{c2c3, zxz2};

    fn plan(n: usize) -> BatteryPlan {
        BatteryPlan { configurations: n, max_syllables: 4, max_syllable_len: 3, seed: 11 }
    }

    #[test]
    fn exact_mode_has_no_violations() {
        for spec in [c2c3(), zxz2()] {
            let r = lemma_battery(&Space::exact(&spec).unwrap(), 0, plan(400)).unwrap();
            assert_eq!(r.violations(), 0, "{:?}", r.lemmas);
            assert!(r.lemmas.iter().all(|l| l.checked > 0), "{:?}", r.lemmas);
        }
    }

    #[test]
    fn projections_are_one_lipschitz_in_exact_mode() {
        let r = lemma_battery(&Space::exact(&zxz2()).unwrap(), 0, plan(300)).unwrap();
        let t = r.lemmas.iter().find(|l| l.lemma == "coarsedistdecr-2").unwrap();
        assert!(t.min_slack.unwrap() >= 0);
    }

    #[test]
    fn tally_records_first_violation() {
        let mut t = LemmaTally::new("x");
        t.check(1, 3, || vec!["a".into()]);
        t.check(5, 3, || vec!["b".into()]);
        t.check(9, 3, || vec!["c".into()]);
        assert_eq!((t.checked, t.violations, t.min_slack), (3, 2, Some(-6)));
        assert_eq!(t.witness, ["b"]);
    }
}
