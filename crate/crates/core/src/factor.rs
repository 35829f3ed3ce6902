//! Elementary factor groups.
//!
//! Every factor of a free product is one of a small number of kinds whose
//! word metric with respect to the standard generators is known in closed
//! form (or, for finite multiplication tables, precomputed by BFS). Higher
//! modules only talk to factors through [`FactorSpec`].

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinate of an element inside one factor.
///
/// The variant always matches the kind of the owning [`FactorSpec`]; the
/// identity is representable but never stored inside a syllable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorElement {
    /// Residue mod n for a cyclic factor.
    Residue(u32),
    /// Exponent of the generator of an infinite cyclic factor.
    Int(i64),
    /// Coordinates in a rank-2 free abelian factor.
    Pair(i64, i64),
    /// Row index into a finite multiplication table.
    Index(u32),
}

/// Validated multiplication table of a finite group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    rows: Vec<Vec<u32>>,
    identity: u32,
    inverse: Vec<u32>,
}

impl CayleyTable {
    /// Checks closure, identity, inverses and associativity.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidFactor("empty multiplication table".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidFactor(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(bad) = row.iter().find(|&&v| v as usize >= n) {
                return Err(Error::InvalidFactor(format!("entry {bad} in row {i} out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| rows[e][x] as usize == x && rows[x][e] as usize == x))
            .ok_or_else(|| Error::InvalidFactor("table has no identity".into()))? as u32;
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| rows[x][y] == identity && rows[y][x] == identity)
                .ok_or_else(|| Error::InvalidFactor(format!("element {x} has no inverse")))?;
            inverse.push(inv as u32);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = rows[a][b] as usize;
                for c in 0..n {
                    if rows[ab][c] != rows[a][rows[b][c] as usize] {
                        return Err(Error::InvalidFactor(format!("table is not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(Self { rows, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.rows[a as usize][b as usize]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }
}

/// The kind of an elementary factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorKind {
    Cyclic(u32),
    InfiniteCyclic,
    FreeAbelian2,
    FiniteTable(CayleyTable),
}

/// One element of the symmetric generating set of a factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorStep {
    pub label: String,
    pub elem: FactorElement,
}

/// An elementary factor with labelled generators and a peripheral flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSpec {
    name: String,
    kind: FactorKind,
    labels: Vec<String>,
    /// Table indices of the labelled generators (finite tables only).
    table_gens: Vec<u32>,
    peripheral: bool,
    steps: Vec<FactorStep>,
    /// Word lengths indexed by table row (finite tables only).
    table_len: Vec<u32>,
}

fn inverse_label(label: &str) -> String {
    format!("{label}^-1")
}

fn check_label(label: &str) -> Result<()> {
    let ok = !label.is_empty()
        && label.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidFactor(format!("bad generator label {label:?}")))
    }
}

impl FactorSpec {
    pub fn cyclic(name: &str, order: u32, label: &str, peripheral: bool) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidFactor(format!("cyclic order must be at least 2, got {order}")));
        }
        Self::build(name, FactorKind::Cyclic(order), vec![label.to_string()], Vec::new(), peripheral)
    }

    pub fn infinite_cyclic(name: &str, label: &str, peripheral: bool) -> Result<Self> {
        Self::build(name, FactorKind::InfiniteCyclic, vec![label.to_string()], Vec::new(), peripheral)
    }

    pub fn free_abelian2(name: &str, labels: [&str; 2], peripheral: bool) -> Result<Self> {
        if labels[0] == labels[1] {
            return Err(Error::InvalidFactor("free abelian generators need distinct labels".into()));
        }
        let labels = labels.iter().map(|s| s.to_string()).collect();
        Self::build(name, FactorKind::FreeAbelian2, labels, Vec::new(), peripheral)
    }

    /// A finite group given by its multiplication table and labelled generators
    /// `(label, row index)`.
    pub fn finite_table(name: &str, rows: Vec<Vec<u32>>, gens: &[(&str, u32)], peripheral: bool) -> Result<Self> {
        let table = CayleyTable::new(rows)?;
        let labels = gens.iter().map(|(l, _)| l.to_string()).collect();
        let idx = gens.iter().map(|&(_, i)| i).collect::<Vec<_>>();
        if let Some(&bad) = idx.iter().find(|&&i| i as usize >= table.order()) {
            return Err(Error::InvalidFactor(format!("generator index {bad} out of range")));
        }
        Self::build(name, FactorKind::FiniteTable(table), labels, idx, peripheral)
    }

    fn build(name: &str, kind: FactorKind, labels: Vec<String>, table_gens: Vec<u32>, peripheral: bool) -> Result<Self> {
        check_label(name)?;
        if labels.is_empty() {
            return Err(Error::InvalidFactor(format!("factor {name} has no generators")));
        }
        for l in &labels {
            check_label(l)?;
        }
        let mut spec = Self {
            name: name.to_string(),
            kind,
            labels,
            table_gens,
            peripheral,
            steps: Vec::new(),
            table_len: Vec::new(),
        };
        spec.steps = spec.make_steps();
        if let FactorKind::FiniteTable(table) = &spec.kind {
            let lengths = spec.table_bfs(table);
            if lengths.contains(&u32::MAX) {
                return Err(Error::InvalidFactor(format!("generators of {name} do not generate the table")));
            }
            spec.table_len = lengths;
        }
        Ok(spec)
    }

    fn make_steps(&self) -> Vec<FactorStep> {
        let mut steps: Vec<FactorStep> = Vec::new();
        let mut push = |label: String, elem: FactorElement| {
            if !self.is_identity(&elem) && !steps.iter().any(|s| s.elem == elem) {
                steps.push(FactorStep { label, elem });
            }
        };
        for (i, label) in self.labels.iter().enumerate() {
            let g = match &self.kind {
                FactorKind::Cyclic(_) => FactorElement::Residue(1),
                FactorKind::InfiniteCyclic => FactorElement::Int(1),
                FactorKind::FreeAbelian2 => {
                    if i == 0 {
                        FactorElement::Pair(1, 0)
                    } else {
                        FactorElement::Pair(0, 1)
                    }
                }
                FactorKind::FiniteTable(_) => FactorElement::Index(self.table_gens[i]),
            };
            push(label.clone(), g);
            push(inverse_label(label), self.inv(&g));
        }
        steps
    }

    fn table_bfs(&self, table: &CayleyTable) -> Vec<u32> {
        let mut len = vec![u32::MAX; table.order()];
        let mut queue = VecDeque::new();
        len[table.identity() as usize] = 0;
        queue.push_back(table.identity());
        while let Some(x) = queue.pop_front() {
            for s in &self.steps {
                if let FactorElement::Index(g) = s.elem {
                    let y = table.mul(x, g) as usize;
                    if len[y] == u32::MAX {
                        len[y] = len[x as usize] + 1;
                        queue.push_back(y as u32);
                    }
                }
            }
        }
        len
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &FactorKind {
        &self.kind
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_peripheral(&self) -> bool {
        self.peripheral
    }

    /// The symmetric generating set in tie-break order: each label, then its
    /// inverse (omitted for involutions).
    pub fn steps(&self) -> &[FactorStep] {
        &self.steps
    }

    /// Number of elements, or `None` for infinite factors.
    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            FactorKind::Cyclic(n) => Some(*n as usize),
            FactorKind::FiniteTable(t) => Some(t.order()),
            _ => None,
        }
    }

    pub fn identity(&self) -> FactorElement {
        match &self.kind {
            FactorKind::Cyclic(_) => FactorElement::Residue(0),
            FactorKind::InfiniteCyclic => FactorElement::Int(0),
            FactorKind::FreeAbelian2 => FactorElement::Pair(0, 0),
            FactorKind::FiniteTable(t) => FactorElement::Index(t.identity()),
        }
    }

    pub fn is_identity(&self, x: &FactorElement) -> bool {
        *x == self.identity()
    }

    /// Whether `x` is a valid coordinate for this factor.
    pub fn contains(&self, x: &FactorElement) -> bool {
        match (&self.kind, x) {
            (FactorKind::Cyclic(n), FactorElement::Residue(r)) => r < n,
            (FactorKind::InfiniteCyclic, FactorElement::Int(_)) => true,
            (FactorKind::FreeAbelian2, FactorElement::Pair(..)) => true,
            (FactorKind::FiniteTable(t), FactorElement::Index(i)) => (*i as usize) < t.order(),
            _ => false,
        }
    }

    pub fn check(&self, x: &FactorElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::CoordinateOutOfRange { factor: 0, coord: format!("{x:?} in {}", self.name) })
        }
    }

    /// Group product of two valid coordinates.
    pub fn mul(&self, x: &FactorElement, y: &FactorElement) -> FactorElement {
        use FactorElement::*;
        match (&self.kind, x, y) {
            (FactorKind::Cyclic(n), Residue(a), Residue(b)) => Residue((a + b) % n),
            (FactorKind::InfiniteCyclic, Int(a), Int(b)) => Int(a + b),
            (FactorKind::FreeAbelian2, Pair(a1, a2), Pair(b1, b2)) => Pair(a1 + b1, a2 + b2),
            (FactorKind::FiniteTable(t), Index(a), Index(b)) => Index(t.mul(*a, *b)),
            _ => panic!("factor element {x:?} or {y:?} does not belong to {}", self.name),
        }
    }

    /// Checked product; rejects coordinates outside the factor.
    pub fn try_mul(&self, x: &FactorElement, y: &FactorElement) -> Result<FactorElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn inv(&self, x: &FactorElement) -> FactorElement {
        use FactorElement::*;
        match (&self.kind, x) {
            (FactorKind::Cyclic(n), Residue(a)) => Residue((n - a % n) % n),
            (FactorKind::InfiniteCyclic, Int(a)) => Int(-a),
            (FactorKind::FreeAbelian2, Pair(a, b)) => Pair(-a, -b),
            (FactorKind::FiniteTable(t), Index(a)) => Index(t.inverse(*a)),
            _ => panic!("factor element {x:?} does not belong to {}", self.name),
        }
    }

    /// Word length with respect to the standard generators.
    pub fn len(&self, x: &FactorElement) -> u32 {
        use FactorElement::*;
        match (&self.kind, x) {
            (FactorKind::Cyclic(n), Residue(k)) => (*k).min(n - k),
            (FactorKind::InfiniteCyclic, Int(k)) => k.unsigned_abs() as u32,
            (FactorKind::FreeAbelian2, Pair(a, b)) => (a.unsigned_abs() + b.unsigned_abs()) as u32,
            (FactorKind::FiniteTable(_), Index(i)) => self.table_len[*i as usize],
            _ => panic!("factor element {x:?} does not belong to {}", self.name),
        }
    }

    /// Vertex path from `x` to `y` of length `len(x⁻¹y)`. At every vertex the
    /// first step (in [`FactorSpec::steps`] order) that decreases the
    /// remaining length is taken.
    pub fn geodesic(&self, x: &FactorElement, y: &FactorElement) -> Vec<FactorElement> {
        let mut path = vec![*x];
        let mut cur = *x;
        let mut remaining = self.mul(&self.inv(x), y);
        let mut left = self.len(&remaining);
        while left > 0 {
            let step = self
                .steps
                .iter()
                .find_map(|s| {
                    let rest = self.mul(&self.inv(&s.elem), &remaining);
                    (self.len(&rest) + 1 == left).then_some((s.elem, rest))
                })
                .expect("word length is realised by some generator step");
            cur = self.mul(&cur, &step.0);
            remaining = step.1;
            left -= 1;
            path.push(cur);
        }
        path
    }

    /// Label of the step from `x` to `x·s`, if `s` is a generator.
    pub fn step_label(&self, s: &FactorElement) -> Option<&str> {
        self.steps.iter().find(|st| st.elem == *s).map(|st| st.label.as_str())
    }

    /// All elements of a finite factor (identity included), in index order.
    pub fn elements(&self) -> Option<Vec<FactorElement>> {
        match &self.kind {
            FactorKind::Cyclic(n) => Some((0..*n).map(FactorElement::Residue).collect()),
            FactorKind::FiniteTable(t) => Some((0..t.order() as u32).map(FactorElement::Index).collect()),
            _ => None,
        }
    }

    /// Elements of length at most `radius`, identity included.
    pub fn ball(&self, radius: u32) -> Vec<FactorElement> {
        match &self.kind {
            FactorKind::InfiniteCyclic => {
                let r = radius as i64;
                (-r..=r).map(FactorElement::Int).collect()
            }
            FactorKind::FreeAbelian2 => {
                let r = radius as i64;
                let mut out = Vec::new();
                for a in -r..=r {
                    let rest = r - a.abs();
                    for b in -rest..=rest {
                        out.push(FactorElement::Pair(a, b));
                    }
                }
                out
            }
            _ => self
                .elements()
                .unwrap_or_default()
                .into_iter()
                .filter(|x| self.len(x) <= radius)
                .collect(),
        }
    }

    /// Writes a non-identity coordinate as syllable tokens, e.g. `u^3 v^-2`.
    pub fn fmt_elem(&self, x: &FactorElement, f: &mut impl fmt::Write) -> fmt::Result {
        use FactorElement::*;
        match x {
            Residue(k) => write!(f, "{}^{}", self.labels[0], k),
            Int(k) => write!(f, "{}^{}", self.labels[0], k),
            Pair(a, b) => match (*a, *b) {
                (a, 0) => write!(f, "{}^{}", self.labels[0], a),
                (0, b) => write!(f, "{}^{}", self.labels[1], b),
                (a, b) => write!(f, "{}^{} {}^{}", self.labels[0], a, self.labels[1], b),
            },
            Index(i) => write!(f, "{}[{}]", self.name, i),
        }
    }

    /// The element denoted by `label^exp` for a label of this factor.
    pub fn power_of_label(&self, label: &str, exp: i64) -> Option<FactorElement> {
        let pos = self.labels.iter().position(|l| l == label)?;
        Some(match &self.kind {
            FactorKind::Cyclic(n) => FactorElement::Residue(exp.rem_euclid(*n as i64) as u32),
            FactorKind::InfiniteCyclic => FactorElement::Int(exp),
            FactorKind::FreeAbelian2 => {
                if pos == 0 {
                    FactorElement::Pair(exp, 0)
                } else {
                    FactorElement::Pair(0, exp)
                }
            }
            FactorKind::FiniteTable(t) => {
                let g = self.table_gens[pos];
                let base = if exp < 0 { t.inverse(g) } else { g };
                let mut acc = t.identity();
                for _ in 0..exp.unsigned_abs() {
                    acc = t.mul(acc, base);
                }
                FactorElement::Index(acc)
            }
        })
    }
}

/// Checked factor product.
pub fn factor_mul(spec: &FactorSpec, x: &FactorElement, y: &FactorElement) -> Result<FactorElement> {
    spec.try_mul(x, y)
}

pub fn factor_len(spec: &FactorSpec, x: &FactorElement) -> Result<u32> {
    spec.check(x)?;
    Ok(spec.len(x))
}

pub fn factor_geodesic(spec: &FactorSpec, x: &FactorElement, y: &FactorElement) -> Result<Vec<FactorElement>> {
    spec.check(x)?;
    spec.check(y)?;
    Ok(spec.geodesic(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use FactorElement::*;

    /// Sym(3) as permutations of {0,1,2}, indexed in lexicographic order.
    pub(crate) fn sym3_rows() -> Vec<Vec<u32>> {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
        perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect()
    }

    #[test]
    fn cyclic_product_cancels() {
        let c3 = FactorSpec::cyclic("B", 3, "b", true).unwrap();
        assert_eq!(factor_mul(&c3, &Residue(1), &Residue(2)).unwrap(), Residue(0));
        assert!(c3.is_identity(&c3.mul(&Residue(1), &Residue(2))));
    }

    #[test]
    fn infinite_and_abelian_products() {
        let z = FactorSpec::infinite_cyclic("T", "t", false).unwrap();
        assert_eq!(z.mul(&Int(3), &Int(-1)), Int(2));
        let z2 = FactorSpec::free_abelian2("H", ["u", "v"], true).unwrap();
        assert_eq!(z2.mul(&Pair(1, 2), &Pair(-1, 0)), Pair(0, 2));
    }

    #[test]
    fn out_of_range_coordinate_is_rejected() {
        let c3 = FactorSpec::cyclic("B", 3, "b", true).unwrap();
        assert!(matches!(factor_mul(&c3, &Residue(3), &Residue(1)), Err(Error::CoordinateOutOfRange { .. })));
        assert!(factor_len(&c3, &Int(1)).is_err());
    }

    #[test]
    fn lengths() {
        let c3 = FactorSpec::cyclic("B", 3, "b", true).unwrap();
        assert_eq!(c3.len(&Residue(2)), 1);
        let z2 = FactorSpec::free_abelian2("H", ["u", "v"], true).unwrap();
        assert_eq!(z2.len(&Pair(3, -2)), 5);
        assert_eq!(z2.len(&Pair(0, 0)), 0);
    }

    #[test]
    fn sym3_transposition_has_length_one() {
        // generators: transpositions (0 1) and (1 2)
        let s3 = FactorSpec::finite_table("S", sym3_rows(), &[("s", 2), ("r", 1)], true).unwrap();
        // independent BFS over the raw table
        let rows = sym3_rows();
        let mut dist = [u32::MAX; 6];
        dist[0] = 0;
        let mut q = VecDeque::from([0usize]);
        while let Some(x) = q.pop_front() {
            for g in [2usize, 1] {
                let y = rows[x][g] as usize;
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    q.push_back(y);
                }
            }
        }
        assert_eq!(dist[2], 1);
        for i in 0..6u32 {
            assert_eq!(s3.len(&Index(i)), dist[i as usize]);
        }
        // (0 2) = [2,1,0] is the longest element
        assert_eq!(s3.len(&Index(5)), 3);
    }

    #[test]
    fn geodesic_examples() {
        let z = FactorSpec::infinite_cyclic("T", "t", false).unwrap();
        assert_eq!(z.geodesic(&Int(0), &Int(2)), vec![Int(0), Int(1), Int(2)]);
        let c4 = FactorSpec::cyclic("G", 4, "g", false).unwrap();
        assert_eq!(c4.geodesic(&Residue(0), &Residue(2)), vec![Residue(0), Residue(1), Residue(2)]);
        let z2 = FactorSpec::free_abelian2("H", ["u", "v"], true).unwrap();
        // both 2-step paths e→u→uv and e→v→uv are geodesic; label order picks u first
        assert_eq!(z2.geodesic(&Pair(0, 0), &Pair(1, 1)), vec![Pair(0, 0), Pair(1, 0), Pair(1, 1)]);
    }

    #[test]
    fn non_associative_table_rejected() {
        // identity 0, but 1·(1·2) != (1·1)·2
        let rows = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 1, 0]];
        assert!(CayleyTable::new(rows).is_err());
        // Latin square with identity that is not associative (order 5 loop)
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(CayleyTable::new(rows), Err(Error::InvalidFactor(_))));
    }

    #[test]
    fn non_generating_labels_rejected() {
        assert!(FactorSpec::finite_table("S", sym3_rows(), &[("s", 2)], true).is_err());
    }

    #[test]
    fn cyclic_of_order_one_rejected() {
        assert!(FactorSpec::cyclic("A", 1, "a", true).is_err());
    }

    #[test]
    fn involution_has_single_step() {
        let c2 = FactorSpec::cyclic("A", 2, "a", true).unwrap();
        assert_eq!(c2.steps().len(), 1);
        let c3 = FactorSpec::cyclic("B", 3, "b", true).unwrap();
        let labels: Vec<_> = c3.steps().iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, ["b", "b^-1"]);
    }

    fn check_geodesic(spec: &FactorSpec, x: &FactorElement, y: &FactorElement) {
        let path = spec.geodesic(x, y);
        assert_eq!(path.first(), Some(x));
        assert_eq!(path.last(), Some(y));
        assert_eq!(path.len() as u32 - 1, spec.len(&spec.mul(&spec.inv(x), y)));
        for w in path.windows(2) {
            let step = spec.mul(&spec.inv(&w[0]), &w[1]);
            assert!(spec.step_label(&step).is_some());
        }
    }

    #[test]
    fn symmetry_and_geodesics_on_radius6_balls() {
        let specs = [
            FactorSpec::cyclic("B", 5, "b", true).unwrap(),
            FactorSpec::infinite_cyclic("T", "t", false).unwrap(),
            FactorSpec::free_abelian2("H", ["u", "v"], true).unwrap(),
            FactorSpec::finite_table("S", sym3_rows(), &[("s", 2), ("r", 1)], true).unwrap(),
        ];
        for spec in &specs {
            let ball = spec.ball(6);
            let sample: Vec<_> = ball.iter().step_by(ball.len() / 20 + 1).collect();
            for x in &sample {
                for y in &ball {
                    let xy = spec.mul(&spec.inv(x), y);
                    let yx = spec.mul(&spec.inv(y), x);
                    assert_eq!(spec.len(&xy), spec.len(&yx));
                    check_geodesic(spec, x, y);
                }
            }
        }
    }

    #[test]
    fn power_of_label() {
        let s3 = FactorSpec::finite_table("S", sym3_rows(), &[("s", 2), ("r", 1)], true).unwrap();
        assert_eq!(s3.power_of_label("s", 2), Some(Index(0)));
        assert_eq!(s3.power_of_label("x", 2), None);
        let c3 = FactorSpec::cyclic("B", 3, "b", true).unwrap();
        assert_eq!(c3.power_of_label("b", -1), Some(Residue(2)));
    }
}
