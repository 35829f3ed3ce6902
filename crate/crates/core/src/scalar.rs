//! Scalar types for fitted constants, and the affine fit shared by
//! quasi-geodesic constants and the distance-formula constants.
//!
//! Distances are integers; only fitted ratios need a field. Everything here
//! is generic over [`Scalar`] so the same fit runs exactly (`Rational64`) or
//! in floating point (`f64`).

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, ToPrimitive};

use crate::error::{Error, Result};

pub trait Scalar: Num + Copy + PartialOrd + FromPrimitive + Debug + Display {
    fn ratio(num: i64, den: i64) -> Self;
    fn as_f64(self) -> f64;

    fn of(v: u64) -> Self {
        Self::ratio(v as i64, 1)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn as_f64(self) -> f64 {
        self
    }
}

impl Scalar for Rational64 {
    fn ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Constants `(λ, μ)` of a two-sided affine comparison
/// `A/λ − μ ≤ B ≤ λ·A + μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineFit<T> {
    pub lambda: T,
    pub mu: T,
}

impl<T: Scalar> AffineFit<T> {
    pub fn exact() -> Self {
        Self { lambda: T::one(), mu: T::zero() }
    }

    /// Whether `(a, b)` satisfies the comparison with these constants.
    pub fn admits(&self, a: u64, b: u64) -> bool {
        let (a, b) = (T::of(a), T::of(b));
        a / self.lambda - self.mu <= b && b <= self.lambda * a + self.mu
    }
}

/// Fits `(λ, μ)` over sample pairs `(A, B)`.
///
/// `λ` is the least value `≥ 1` for which an additive term of at most
/// `allowance` suffices; `μ` is then the least additive term at that `λ`.
/// With `allowance = 0` this is the pure multiplicative distortion.
pub fn fit_affine<T: Scalar>(pairs: &[(u64, u64)], allowance: T) -> Result<AffineFit<T>> {
    if pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut lambda = T::one();
    for &(a, b) in pairs {
        let (ta, tb) = (T::of(a), T::of(b));
        if a > 0 {
            let denom = tb + allowance;
            if denom <= T::zero() {
                return Err(Error::Infeasible(format!("pair ({a}, {b}) needs an unbounded ratio")));
            }
            lambda = lambda.max_of(ta / denom);
            lambda = lambda.max_of((tb - allowance) / ta);
        } else if tb > allowance {
            return Err(Error::Infeasible(format!("pair ({a}, {b}) needs an additive term above the allowance")));
        }
    }
    let mut mu = T::zero();
    for &(a, b) in pairs {
        let (ta, tb) = (T::of(a), T::of(b));
        mu = mu.max_of(ta / lambda - tb);
        mu = mu.max_of(tb - lambda * ta);
    }
    Ok(AffineFit { lambda, mu })
}

/// `num / max(den, 1)` as a scalar.
pub fn ratio_floor1<T: Scalar>(num: u64, den: u64) -> T {
    T::ratio(num as i64, den.max(1) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    #[test]
    fn geodesic_pairs_fit_exactly() {
        let pairs: Vec<_> = (0..6u64).flat_map(|i| (i..6).map(move |j| (j - i, j - i))).collect();
        let fit: AffineFit<Rational64> = fit_affine(&pairs, Rational64::from_integer(2)).unwrap();
        assert_eq!(fit, AffineFit::exact());
    }

    #[test]
    fn backtracking_costs_two() {
        // path e, a, e, b in C2*C3: (index gap, distance)
        let pairs = [(1, 1), (2, 0), (3, 1), (1, 1), (2, 2), (1, 1)];
        let fit: AffineFit<Rational64> = fit_affine(&pairs, Rational64::from_integer(2)).unwrap();
        assert_eq!(fit.lambda, Rational64::from_integer(1));
        assert_eq!(fit.mu, Rational64::from_integer(2));
        let fit: AffineFit<f64> = fit_affine(&pairs, 2.0).unwrap();
        assert_eq!((fit.lambda, fit.mu), (1.0, 2.0));
    }

    #[test]
    fn multiplicative_fit() {
        let pairs = [(4, 1), (10, 11), (3, 3)];
        let fit: AffineFit<Rational64> = fit_affine(&pairs, Rational64::zero()).unwrap();
        assert_eq!(fit.lambda, Rational64::from_integer(4));
        assert_eq!(fit.mu, Rational64::zero());
    }

    #[test]
    fn infeasible_and_empty() {
        assert_eq!(fit_affine::<f64>(&[], 0.0), Err(Error::EmptySample));
        assert!(matches!(fit_affine::<f64>(&[(3, 0)], 0.0), Err(Error::Infeasible(_))));
        assert!(matches!(fit_affine::<f64>(&[(0, 3)], 1.0), Err(Error::Infeasible(_))));
        assert_eq!(fit_affine::<f64>(&[(0, 0)], 0.0).unwrap(), AffineFit::exact());
    }

    proptest! {
        #[test]
        fn fit_admits_every_pair(pairs in prop::collection::vec((1u64..40, 1u64..40), 1..30), allowance in 0i64..4) {
            let fit: AffineFit<Rational64> = fit_affine(&pairs, Rational64::from_integer(allowance)).unwrap();
            prop_assert!(fit.lambda >= Rational64::one());
            prop_assert!(fit.mu <= Rational64::from_integer(allowance));
            for &(a, b) in &pairs {
                prop_assert!(fit.admits(a, b));
            }
            // the rational and float fits agree
            let f: AffineFit<f64> = fit_affine(&pairs, allowance as f64).unwrap();
            prop_assert!((f.lambda - fit.lambda.as_f64()).abs() < 1e-9);
            prop_assert!((f.mu - fit.mu.as_f64()).abs() < 1e-9);
        }
    }
}
