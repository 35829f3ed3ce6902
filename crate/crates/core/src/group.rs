//! Free products of elementary factors: normal forms, arithmetic, text
//! syntax and word-metric balls.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{FactorElement, FactorSpec};

/// Default cap on the number of elements in a BFS ball.
pub const DEFAULT_BALL_CAP: usize = 4_000_000;

/// One syllable of a normal form: a non-identity element of a single factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub factor: usize,
    pub elem: FactorElement,
}

impl Syllable {
    pub fn new(factor: usize, elem: FactorElement) -> Self {
        Self { factor, elem }
    }
}

/// A group element in syllable normal form.
///
/// Adjacent syllables belong to distinct factors and no syllable is a factor
/// identity, so structural equality is group equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    syllables: Vec<Syllable>,
}

impl Element {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn first(&self) -> Option<&Syllable> {
        self.syllables.first()
    }

    pub fn last(&self) -> Option<&Syllable> {
        self.syllables.last()
    }

    /// The element made of the first `n` syllables.
    pub fn prefix(&self, n: usize) -> Element {
        Element { syllables: self.syllables[..n].to_vec() }
    }

    /// Drops the last syllable if it belongs to `factor`.
    pub fn strip_trailing(&self, factor: usize) -> Element {
        match self.syllables.last() {
            Some(s) if s.factor == factor => self.prefix(self.syllables.len() - 1),
            _ => self.clone(),
        }
    }
}

/// An extra generator given as a word in the factor generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtraGenerator {
    pub label: String,
    pub word: Element,
}

/// Which generating set defines the word metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratingSet {
    /// Union of the factor generators.
    Standard,
    /// Standard generators plus extra words.
    Extended(Vec<ExtraGenerator>),
}

/// One element of the symmetric generating set of the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub elem: Element,
}

/// A free product of elementary factors with a peripheral structure and a
/// choice of finite generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    factors: Vec<FactorSpec>,
    generating_set: GeneratingSet,
    generators: Vec<Generator>,
}

impl GroupSpec {
    /// Free product with the standard generating set.
    pub fn new(factors: Vec<FactorSpec>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::InvalidGroup(format!("a free product needs at least 2 factors, got {}", factors.len())));
        }
        let mut seen: Vec<&str> = Vec::new();
        for f in &factors {
            for name in std::iter::once(f.name()).chain(f.labels().iter().map(String::as_str)) {
                if name == "e" || seen.contains(&name) {
                    return Err(Error::InvalidGroup(format!("duplicate or reserved symbol {name:?}")));
                }
                seen.push(name);
            }
        }
        let mut spec = Self { factors, generating_set: GeneratingSet::Standard, generators: Vec::new() };
        spec.generators = spec.make_generators();
        Ok(spec)
    }

    /// Same group, metric defined by the standard generators plus `extra`.
    pub fn with_extra_generators(&self, extra: Vec<ExtraGenerator>) -> Result<Self> {
        for g in &extra {
            if g.word.is_identity() {
                return Err(Error::InvalidGroup(format!("extra generator {} is trivial", g.label)));
            }
            self.check(&g.word)?;
            if g.label.contains(char::is_whitespace) || g.label.is_empty() {
                return Err(Error::InvalidGroup(format!("bad generator label {:?}", g.label)));
            }
        }
        let mut spec = Self {
            factors: self.factors.clone(),
            generating_set: if extra.is_empty() { GeneratingSet::Standard } else { GeneratingSet::Extended(extra) },
            generators: Vec::new(),
        };
        spec.generators = spec.make_generators();
        Ok(spec)
    }

    /// The same group with the standard generating set.
    pub fn standard(&self) -> Self {
        self.with_extra_generators(Vec::new()).expect("standard generating set is always valid")
    }

    fn make_generators(&self) -> Vec<Generator> {
        let mut gens: Vec<Generator> = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            for s in f.steps() {
                gens.push(Generator { label: s.label.clone(), elem: self.syllable_element(i, s.elem) });
            }
        }
        if let GeneratingSet::Extended(extra) = &self.generating_set {
            for g in extra {
                for (label, elem) in [(g.label.clone(), g.word.clone()), (format!("{}^-1", g.label), self.inv(&g.word))] {
                    if !gens.iter().any(|h| h.elem == elem) {
                        gens.push(Generator { label, elem });
                    }
                }
            }
        }
        gens
    }

    fn syllable_element(&self, factor: usize, elem: FactorElement) -> Element {
        if self.factors[factor].is_identity(&elem) {
            Element::identity()
        } else {
            Element { syllables: vec![Syllable::new(factor, elem)] }
        }
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &FactorSpec {
        &self.factors[i]
    }

    pub fn generating_set(&self) -> &GeneratingSet {
        &self.generating_set
    }

    pub fn is_standard(&self) -> bool {
        matches!(self.generating_set, GeneratingSet::Standard)
    }

    /// Symmetric generating set in tie-break order.
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn is_peripheral(&self, factor: usize) -> bool {
        self.factors.get(factor).is_some_and(FactorSpec::is_peripheral)
    }

    /// Indices of the peripheral factors.
    pub fn peripheral_set(&self) -> Vec<usize> {
        (0..self.factors.len()).filter(|&i| self.is_peripheral(i)).collect()
    }

    /// A single-syllable element (identity when `elem` is trivial).
    pub fn element_of_factor(&self, factor: usize, elem: FactorElement) -> Result<Element> {
        let f = self.factors.get(factor).ok_or(Error::InvalidFactorIndex(factor))?;
        f.check(&elem).map_err(|_| Error::CoordinateOutOfRange { factor, coord: format!("{elem:?}") })?;
        Ok(self.syllable_element(factor, elem))
    }

    /// Validates an element against this spec.
    pub fn check(&self, x: &Element) -> Result<()> {
        let mut prev = None;
        for s in &x.syllables {
            let f = self.factors.get(s.factor).ok_or(Error::InvalidFactorIndex(s.factor))?;
            if !f.contains(&s.elem) || f.is_identity(&s.elem) || prev == Some(s.factor) {
                return Err(Error::InvalidGroup(format!("not a normal form: {x:?}")));
            }
            prev = Some(s.factor);
        }
        Ok(())
    }

    /// Reduces a raw syllable list to normal form: adjacent syllables of the
    /// same factor are merged and identity syllables removed, repeatedly.
    pub fn normalize(&self, raw: &[(usize, FactorElement)]) -> Result<Element> {
        let mut out: Vec<Syllable> = Vec::with_capacity(raw.len());
        for &(factor, elem) in raw {
            let f = self.factors.get(factor).ok_or(Error::InvalidFactorIndex(factor))?;
            f.check(&elem).map_err(|_| Error::CoordinateOutOfRange { factor, coord: format!("{elem:?}") })?;
            self.push_syllable(&mut out, Syllable::new(factor, elem));
        }
        Ok(Element { syllables: out })
    }

    fn push_syllable(&self, out: &mut Vec<Syllable>, s: Syllable) {
        let f = &self.factors[s.factor];
        if f.is_identity(&s.elem) {
            return;
        }
        match out.last_mut() {
            Some(top) if top.factor == s.factor => {
                let merged = f.mul(&top.elem, &s.elem);
                if f.is_identity(&merged) {
                    out.pop();
                } else {
                    top.elem = merged;
                }
            }
            _ => out.push(s),
        }
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let mut out = x.syllables.clone();
        out.reserve(y.syllables.len());
        let mut rest = y.syllables.iter();
        // only the seam can cancel; once a syllable survives the rest is already normal
        for s in rest.by_ref() {
            let before = out.len();
            let top_factor = out.last().map(|t| t.factor);
            self.push_syllable(&mut out, *s);
            if top_factor != Some(s.factor) || out.len() == before {
                break;
            }
        }
        out.extend(rest.copied());
        Element { syllables: out }
    }

    pub fn inv(&self, x: &Element) -> Element {
        Element {
            syllables: x
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable::new(s.factor, self.factors[s.factor].inv(&s.elem)))
                .collect(),
        }
    }

    /// `x⁻¹·y`.
    pub fn between(&self, x: &Element, y: &Element) -> Element {
        self.mul(&self.inv(x), y)
    }

    /// Word length with respect to the standard generators.
    pub fn standard_len(&self, x: &Element) -> u32 {
        x.syllables.iter().map(|s| self.factors[s.factor].len(&s.elem)).sum()
    }

    /// Formats an element as whitespace-separated `label^exp` tokens (`e` for
    /// the identity; finite-table syllables as `Name[index]`).
    pub fn format(&self, x: &Element) -> String {
        if x.is_identity() {
            return "e".to_string();
        }
        let mut out = String::new();
        for (k, s) in x.syllables.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            self.factors[s.factor].fmt_elem(&s.elem, &mut out).expect("writing to a String");
        }
        out
    }

    /// Parses the syntax produced by [`GroupSpec::format`]; bare labels mean
    /// exponent 1 and adjacent tokens are multiplied out.
    pub fn parse(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        if text.is_empty() || text == "e" {
            return Ok(Element::identity());
        }
        let mut raw = Vec::new();
        for token in text.split_whitespace() {
            raw.push(self.parse_token(token)?);
        }
        self.normalize(&raw)
    }

    fn parse_token(&self, token: &str) -> Result<(usize, FactorElement)> {
        if let Some(open) = token.find('[') {
            let name = &token[..open];
            let idx = token[open + 1..]
                .strip_suffix(']')
                .and_then(|s| s.parse::<u32>().ok())
                .ok_or_else(|| Error::Parse(format!("bad table token {token:?}")))?;
            let (i, f) = self
                .factors
                .iter()
                .enumerate()
                .find(|(_, f)| f.name() == name)
                .ok_or_else(|| Error::Parse(format!("unknown factor {name:?}")))?;
            let elem = FactorElement::Index(idx);
            if !f.contains(&elem) {
                return Err(Error::Parse(format!("index out of range in {token:?}")));
            }
            return Ok((i, elem));
        }
        let (label, exp) = match token.split_once('^') {
            Some((l, e)) => (l, e.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?),
            None => (token, 1),
        };
        self.factors
            .iter()
            .enumerate()
            .find_map(|(i, f)| f.power_of_label(label, exp).map(|x| (i, x)))
            .ok_or_else(|| Error::Parse(format!("unknown generator {label:?}")))
    }

    /// Label of the generator `s` with `x·s = y`, if `x` and `y` are adjacent.
    pub fn edge_label(&self, x: &Element, y: &Element) -> Option<&str> {
        let s = self.between(x, y);
        self.generators.iter().find(|g| g.elem == s).map(|g| g.label.as_str())
    }
}

/// Free-standing forms of the group operations.
pub fn normalize(spec: &GroupSpec, raw: &[(usize, FactorElement)]) -> Result<Element> {
    spec.normalize(raw)
}

pub fn mul(spec: &GroupSpec, x: &Element, y: &Element) -> Element {
    spec.mul(x, y)
}

pub fn inv(spec: &GroupSpec, x: &Element) -> Element {
    spec.inv(x)
}

/// Word-metric ball around the identity with exact BFS distances.
///
/// Elements are stored in BFS discovery order, so the index of an element is
/// a deterministic tie-break key.
#[derive(Debug, Clone)]
pub struct Ball {
    radius: u32,
    elems: Vec<Element>,
    dist: Vec<u32>,
    index: HashMap<Element, u32>,
}

impl Ball {
    /// BFS over the symmetric generating set of `spec`.
    pub fn new(spec: &GroupSpec, radius: u32, cap: usize) -> Result<Self> {
        let mut ball = Ball { radius, elems: Vec::new(), dist: Vec::new(), index: HashMap::new() };
        ball.insert(Element::identity(), 0);
        let mut queue = VecDeque::from([0u32]);
        while let Some(i) = queue.pop_front() {
            let d = ball.dist[i as usize];
            if d == radius {
                continue;
            }
            for g in spec.generators() {
                let y = spec.mul(&ball.elems[i as usize], &g.elem);
                if !ball.index.contains_key(&y) {
                    if ball.elems.len() >= cap {
                        return Err(Error::Budget { radius, cap });
                    }
                    let j = ball.insert(y, d + 1);
                    queue.push_back(j);
                }
            }
        }
        Ok(ball)
    }

    fn insert(&mut self, x: Element, d: u32) -> u32 {
        let j = self.elems.len() as u32;
        self.index.insert(x.clone(), j);
        self.elems.push(x);
        self.dist.push(d);
        j
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Distance from the identity, if `x` is in the ball.
    pub fn dist(&self, x: &Element) -> Option<u32> {
        self.index.get(x).map(|&i| self.dist[i as usize])
    }

    pub fn position(&self, x: &Element) -> Option<usize> {
        self.index.get(x).map(|&i| i as usize)
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elems[i]
    }

    pub fn dist_at(&self, i: usize) -> u32 {
        self.dist[i]
    }

    /// Elements with their distances, in BFS order.
    pub fn iter(&self) -> impl Iterator<Item = (&Element, u32)> {
        self.elems.iter().zip(self.dist.iter().copied())
    }

    /// Elements at distance at most `r`, in BFS order.
    pub fn within(&self, r: u32) -> impl Iterator<Item = &Element> {
        self.iter().take_while(move |&(_, d)| d <= r).map(|(x, _)| x)
    }

    pub fn count_within(&self, r: u32) -> usize {
        self.dist.partition_point(|&d| d <= r)
    }

    pub fn to_map(&self) -> HashMap<Element, u32> {
        self.iter().map(|(x, d)| (x.clone(), d)).collect()
    }
}

/// All elements within `radius` of the identity with their word distances.
pub fn ball(spec: &GroupSpec, radius: u32, cap: usize) -> Result<HashMap<Element, u32>> {
    Ok(Ball::new(spec, radius, cap)?.to_map())
}

/// Human-readable description used in reports.
pub fn describe(spec: &GroupSpec) -> String {
    let mut out = String::new();
    for (i, f) in spec.factors().iter().enumerate() {
        if i > 0 {
            out.push_str(" * ");
        }
        out.push_str(f.name());
        if f.is_peripheral() {
            out.push('\'');
        }
    }
    if let GeneratingSet::Extended(extra) = spec.generating_set() {
        let labels: Vec<_> = extra.iter().map(|g| g.label.as_str()).collect();
        let _ = write!(out, " + {{{}}}", labels.join(", "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{c2c3, c2c3_ab, zxz2};
    use FactorElement::*;

    #[test]
    fn normalize_examples() {
        let g = c2c3();
        assert!(g.normalize(&[(0, Residue(1)), (0, Residue(1))]).unwrap().is_identity());
        let raw = [(0, Residue(1)), (1, Residue(1)), (1, Residue(2)), (0, Residue(1))];
        assert!(g.normalize(&raw).unwrap().is_identity());
        let x = g.normalize(&[(1, Residue(1)), (0, Residue(1)), (1, Residue(2))]).unwrap();
        assert_eq!(g.format(&x), "b^1 a^1 b^2");
        assert_eq!(g.normalize(&[(7, Residue(1))]), Err(Error::InvalidFactorIndex(7)));
    }

    #[test]
    fn mul_inv_examples() {
        let g = c2c3();
        let ab = g.parse("a b").unwrap();
        let b2a = g.parse("b^2 a").unwrap();
        assert!(g.mul(&ab, &b2a).is_identity());

        let z = zxz2();
        let x = z.parse("t u^2").unwrap();
        assert_eq!(z.format(&z.inv(&x)), "u^-2 t^-1");
        let p = z.mul(&z.parse("t u").unwrap(), &z.parse("u t").unwrap());
        assert_eq!(z.format(&p), "t^1 u^2 t^1");
    }

    #[test]
    fn syntax_round_trip() {
        let z = zxz2();
        let x = z.parse("t^1 u^3 v^-2").unwrap();
        assert_eq!(x.syllables().len(), 2);
        assert_eq!(z.format(&x), "t^1 u^3 v^-2");
        assert_eq!(z.parse(&z.format(&x)).unwrap(), x);
        assert!(z.parse("w^2").is_err());
        assert!(z.parse("t^x").is_err());
        assert_eq!(z.parse("e").unwrap(), Element::identity());
    }

    #[test]
    fn ball_radius_one() {
        let g = c2c3();
        let b = Ball::new(&g, 1, DEFAULT_BALL_CAP).unwrap();
        let mut got: Vec<_> = b.iter().map(|(x, d)| (g.format(x), d)).collect();
        got.sort();
        assert_eq!(got, [("a^1".into(), 1), ("b^1".into(), 1), ("b^2".into(), 1), ("e".to_string(), 0)]);

        let z = zxz2();
        let b = Ball::new(&z, 1, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(b.len(), 7);
        assert!(b.iter().all(|(x, d)| d == u32::from(!x.is_identity())));

        let ext = c2c3_ab();
        let b = Ball::new(&ext, 1, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(b.dist(&ext.parse("a b").unwrap()), Some(1));
        assert_eq!(b.dist(&ext.parse("b^2 a").unwrap()), Some(1));
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn ball_budget_is_enforced() {
        let z = zxz2();
        assert_eq!(Ball::new(&z, 6, 100).unwrap_err(), Error::Budget { radius: 6, cap: 100 });
    }

    #[test]
    fn ball_parent_property_and_monotone_size() {
        for spec in [c2c3(), zxz2(), c2c3_ab()] {
            let b = Ball::new(&spec, 4, DEFAULT_BALL_CAP).unwrap();
            let mut prev = 0;
            for r in 0..=4 {
                let n = b.count_within(r);
                assert!(n > prev);
                prev = n;
            }
            for (x, d) in b.iter().filter(|(_, d)| *d > 0) {
                let has_parent = spec.generators().iter().any(|g| b.dist(&spec.mul(x, &g.elem)) == Some(d - 1));
                assert!(has_parent, "{} has no BFS parent", spec.format(x));
            }
        }
    }

    #[test]
    fn associativity_on_radius3_ball() {
        for spec in [c2c3(), zxz2()] {
            let b = Ball::new(&spec, 3, DEFAULT_BALL_CAP).unwrap();
            let elems: Vec<_> = b.iter().map(|(x, _)| x.clone()).collect();
            let stride = if elems.len() > 60 { elems.len() / 60 } else { 1 };
            let sample: Vec<_> = elems.iter().step_by(stride).collect();
            for x in &sample {
                for y in &sample {
                    let xy = spec.mul(x, y);
                    for z in &elems {
                        assert_eq!(spec.mul(&xy, z), spec.mul(x, &spec.mul(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_degenerate_groups() {
        let z = zxz2();
        assert!(GroupSpec::new(vec![z.factor(0).clone()]).is_err());
        let extra = vec![ExtraGenerator { label: "x".into(), word: Element::identity() }];
        assert!(z.with_extra_generators(extra).is_err());
    }

    #[test]
    fn extra_generators_do_not_change_the_group() {
        let ext = c2c3_ab();
        assert!(!ext.is_standard());
        assert_eq!(ext.factors(), c2c3().factors());
        assert_eq!(ext.standard(), c2c3());
        let labels: Vec<_> = ext.generators().iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, ["a", "b", "b^-1", "ab", "ab^-1"]);
    }
}
