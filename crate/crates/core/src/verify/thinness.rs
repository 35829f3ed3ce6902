//! Thinness of geodesic triangles against their penetration into
//! peripheral cosets.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::group::{Element, DEFAULT_BALL_CAP};
use crate::metric::VertexPath;
use crate::peripheral::Coset;
use crate::Ratio;

use super::sample::Sampler;
use super::{ball_elements, Census, Space};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Triangle {
    pub vertices: [Element; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleRecord {
    pub vertices: [String; 3],
    pub perimeter: u32,
    /// max over sides and cosets of `diam(N_K(P) ∩ side)`.
    pub d: u32,
    /// Least δ for which the triangle is δ-thin.
    pub delta: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThinnessReport {
    pub k: u32,
    pub records: Vec<TriangleRecord>,
    /// `max δ / max(D, 1)`.
    pub lambda: String,
    pub lambda_f64: f64,
    /// Values of `D` whose triangles show δ growing with the perimeter.
    pub flagged: Vec<u32>,
    pub census: Census,
    #[serde(skip)]
    pub lambda_exact: Ratio,
}

/// Triangles `(e, y, z)` for `y`, `z` in a ball, then random triangles.
pub fn sample_triangles(space: &Space, exhaustive_radius: u32, random: usize, max_syllables: usize, max_len: u32, seed: u64) -> Result<Vec<Triangle>> {
    let spec = space.spec();
    let pts = ball_elements(spec, exhaustive_radius, DEFAULT_BALL_CAP)?;
    let mut out = Vec::new();
    for (i, y) in pts.iter().enumerate() {
        for z in &pts[i + 1..] {
            out.push(Triangle { vertices: [Element::identity(), y.clone(), z.clone()] });
        }
    }
    let mut s = Sampler::new(seed);
    for _ in 0..random {
        let v = [s.element(spec, max_syllables, max_len), s.element(spec, max_syllables, max_len), s.element(spec, max_syllables, max_len)];
        out.push(Triangle { vertices: v });
    }
    Ok(out)
}

fn measure(space: &Space, k: u32, t: &Triangle) -> Result<TriangleRecord> {
    let [a, b, c] = &t.vertices;
    let sides: [VertexPath; 3] = [space.geodesic(a, b)?, space.geodesic(b, c)?, space.geodesic(c, a)?];
    let mut cosets: Vec<Coset> = Vec::new();
    for side in &sides {
        for v in &side.vertices {
            cosets.extend(space.cosets_near(v, k)?);
        }
    }
    cosets.sort();
    cosets.dedup();
    let mut d = 0;
    for p in &cosets {
        for side in &sides {
            let mut inside = Vec::new();
            for (i, v) in side.vertices.iter().enumerate() {
                if space.dist_to(p, v)? <= k {
                    inside.push(i);
                }
            }
            if let (Some(&i), Some(&j)) = (inside.first(), inside.last()) {
                // sides are geodesics, so the extreme points realise the diameter
                d = d.max((j - i) as u32);
            }
        }
    }
    let mut delta = 0;
    for (s, side) in sides.iter().enumerate() {
        for v in &side.vertices {
            let mut best = u32::MAX;
            for (o, other) in sides.iter().enumerate() {
                if o == s {
                    continue;
                }
                for w in &other.vertices {
                    best = best.min(space.d(v, w)?);
                }
            }
            delta = delta.max(best);
        }
    }
    let perimeter = sides.iter().map(|s| s.len() as u32).sum();
    Ok(TriangleRecord { vertices: [space.fmt(a), space.fmt(b), space.fmt(c)], perimeter, d, delta })
}

/// Triangles with the same `D`, split at the median perimeter, are flagged
/// when the larger half is more than twice as thick as the smaller plus `max(D,1)`.
fn flag_families(records: &[TriangleRecord]) -> Vec<u32> {
    let mut buckets: BTreeMap<u32, Vec<&TriangleRecord>> = BTreeMap::new();
    for r in records {
        buckets.entry(r.d).or_default().push(r);
    }
    let mut out = Vec::new();
    for (d, mut rs) in buckets {
        if rs.len() < 4 {
            continue;
        }
        rs.sort_by_key(|r| r.perimeter);
        let (lo, hi) = rs.split_at(rs.len() / 2);
        let dl = lo.iter().map(|r| r.delta).max().unwrap_or(0);
        let dh = hi.iter().map(|r| r.delta).max().unwrap_or(0);
        if dh > 2 * dl + d.max(1) {
            out.push(d);
        }
    }
    out
}

pub fn thinness_scan(space: &Space, k: u32, triangles: &[Triangle]) -> Result<ThinnessReport> {
    let mut census = Census::default();
    let mut records = Vec::new();
    for t in triangles {
        if let Some(r) = census.run(|| measure(space, k, t))? {
            records.push(r);
        }
    }
    let lambda = records.iter().map(|r| Ratio::new(r.delta as i64, r.d.max(1) as i64)).max().unwrap_or_else(|| Ratio::from_integer(0));
    let flagged = flag_families(&records);
    Ok(ThinnessReport { k, records, lambda: lambda.to_string(), lambda_f64: crate::Scalar::as_f64(lambda), flagged, census, lambda_exact: lambda })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{c2c3, zxz2};

    #[test]
    fn tripod_and_degenerate() {
        let g = c2c3();
        let space = Space::exact(&g).unwrap();
        let (e, a, b) = (Element::identity(), g.parse("a").unwrap(), g.parse("b").unwrap());
        let r = measure(&space, 1, &Triangle { vertices: [e.clone(), a.clone(), b.clone()] }).unwrap();
        assert_eq!(r.delta, 0);
        assert_eq!(r.perimeter, 4);
        let r = measure(&space, 1, &Triangle { vertices: [a.clone(), a.clone(), b] }).unwrap();
        assert_eq!(r.delta, 0);
    }

    #[test]
    fn flat_triangle_in_a_coset() {
        let z = zxz2();
        let space = Space::exact(&z).unwrap();
        let t = Triangle { vertices: [Element::identity(), z.parse("u^4").unwrap(), z.parse("v^4").unwrap()] };
        let r = measure(&space, 1, &t).unwrap();
        assert_eq!(r.d, 8, "{r:?}");
        assert!(r.delta <= r.d, "{r:?}");
    }

    #[test]
    fn flags_growing_families() {
        let rec = |p, delta| TriangleRecord { vertices: Default::default(), perimeter: p, d: 1, delta };
        assert_eq!(flag_families(&[rec(3, 0), rec(4, 0), rec(30, 5), rec(40, 9)]), [1]);
        assert!(flag_families(&[rec(3, 1), rec(4, 1), rec(30, 1), rec(40, 2)]).is_empty());
    }
}
