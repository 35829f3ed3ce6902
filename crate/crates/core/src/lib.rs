//! Relatively hyperbolic free products, computationally.
//!
//! A free product of elementary factors, some of them designated peripheral,
//! is hyperbolic relative to its peripheral factors. This crate realises such
//! groups concretely and measures, on finite certified samples, the coarse
//! constants governing closest-point projections onto peripheral cosets, the
//! coned-off graph, and the distance formula
//! `d(x,y) ≈ Σ_P {{d(π_P x, π_P y)}}_L + d̂(x,y)`.
//!
//! The metric core works with integer graph distances. Fitted constants are
//! generic over [`Scalar`]; the crate root fixes exact rational aliases.

pub mod error;
pub mod factor;
pub mod group;
pub mod conedoff;
pub mod metric;
pub mod peripheral;
pub mod presets;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use factor::{FactorElement, FactorKind, FactorSpec};
pub use conedoff::{BcpReport, HatBackend, HatEdge, HatPath};
pub use metric::{MetricBackend, VertexPath};
pub use peripheral::{Coset, ProjectionMethod, ProjectionResult, Projector};
pub use group::{Ball, Element, ExtraGenerator, GeneratingSet, Generator, GroupSpec, Syllable};
pub use scalar::{AffineFit, Scalar};

/// Exact rational scalar used in reports.
pub type Ratio = num_rational::Rational64;
/// Affine constants with exact rational entries.
pub type Fit = AffineFit<Ratio>;
/// Affine constants in floating point.
pub type FitF64 = AffineFit<f64>;
