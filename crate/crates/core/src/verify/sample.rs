//! Seeded sampling of elements and paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conedoff::lift;
use crate::error::Result;
use crate::factor::{FactorElement, FactorSpec};
use crate::group::{Element, GroupSpec};
use crate::metric::VertexPath;

use super::Space;

/// Kinds of paths fed to the lemma battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathKind {
    Geodesic,
    /// A geodesic with one edge traversed forth and back.
    Backtrack,
    /// Lift of a coned-off geodesic.
    Lift,
    /// Two geodesics concatenated through a nearby point.
    Detour,
}

impl PathKind {
    pub const ALL: [PathKind; 4] = [PathKind::Geodesic, PathKind::Backtrack, PathKind::Lift, PathKind::Detour];
}

/// Deterministic sampler.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len())]
    }

    /// A uniformly chosen non-identity factor element of length at most `max_len`.
    pub fn factor_element(&mut self, f: &FactorSpec, max_len: u32) -> FactorElement {
        let choices: Vec<_> = f.ball(max_len.max(1)).into_iter().filter(|x| !f.is_identity(x)).collect();
        *self.pick(&choices)
    }

    /// A random normal form with between 0 and `max_syllables` syllables,
    /// each of factor length at most `max_len`.
    pub fn element(&mut self, spec: &GroupSpec, max_syllables: usize, max_len: u32) -> Element {
        let n = self.rng.gen_range(0..=max_syllables);
        let k = spec.factors().len();
        let mut raw = Vec::with_capacity(n);
        let mut prev = None;
        for _ in 0..n {
            let mut i = self.below(k);
            if Some(i) == prev {
                i = (i + 1 + self.below(k - 1)) % k;
            }
            raw.push((i, self.factor_element(spec.factor(i), max_len)));
            prev = Some(i);
        }
        spec.normalize(&raw).expect("sampled syllables are valid")
    }

    /// A path from `x` to `y` of the given kind.
    pub fn path(&mut self, space: &Space, kind: PathKind, x: &Element, y: &Element) -> Result<VertexPath> {
        let spec = space.spec();
        match kind {
            PathKind::Geodesic => space.geodesic(x, y),
            PathKind::Backtrack => {
                let g = space.geodesic(x, y)?;
                let k = self.below(g.vertices.len());
                let gen = self.pick(spec.generators()).elem.clone();
                let v = g.vertices[k].clone();
                let mut vertices = g.vertices[..=k].to_vec();
                vertices.push(spec.mul(&v, &gen));
                vertices.extend(g.vertices[k..].iter().cloned());
                VertexPath::from_vertices(spec, vertices)
            }
            PathKind::Lift => lift(spec, &space.hat().geodesic(x, y)?),
            PathKind::Detour => {
                let z = spec.mul(x, &self.element(spec, 2, 1));
                Ok(space.geodesic(x, &z)?.concat(&space.geodesic(&z, y)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{c2c3_ab, zxz2};

    #[test]
    fn sampling_is_seeded() {
        let z = zxz2();
        let a: Vec<_> = {
            let mut s = Sampler::new(7);
            (0..20).map(|_| s.element(&z, 10, 12)).collect()
        };
        let mut s = Sampler::new(7);
        let b: Vec<_> = (0..20).map(|_| s.element(&z, 10, 12)).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|x| x.syllables().len() <= 10));
        assert!(a.iter().flat_map(|x| x.syllables()).all(|s| z.factor(s.factor).len(&s.elem) <= 12));
    }

    #[test]
    fn sampled_paths_connect_endpoints() {
        let z = zxz2();
        let space = Space::exact(&z).unwrap();
        let mut s = Sampler::new(1);
        for kind in PathKind::ALL {
            for _ in 0..10 {
                let (x, y) = (s.element(&z, 4, 3), s.element(&z, 4, 3));
                let p = s.path(&space, kind, &x, &y).unwrap();
                assert_eq!((p.start(), p.end()), (&x, &y));
            }
        }
        let g = c2c3_ab();
        let space = Space::bfs(&g, 10, crate::group::DEFAULT_BALL_CAP).unwrap();
        for kind in PathKind::ALL {
            let (x, y) = (s.element(&g, 3, 1), s.element(&g, 3, 1));
            let p = s.path(&space, kind, &x, &y).unwrap();
            assert_eq!((p.start(), p.end()), (&x, &y));
        }
    }
}
