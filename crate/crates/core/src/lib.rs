//! Estimation of boundary length and mean breadth of compact sets from
//! distances of random points near the set.
//!
//! Points drawn uniformly from the band `B(S, R)` have distances to `S` whose
//! law is determined by the volume polynomial `V(r) = |B(S, r)|`. The crate
//! samples such distances for a catalog of shapes, fits the polynomial
//! coefficients by moments, likelihood and truncated series estimators, and
//! runs replication studies of those estimators.

pub mod error;
pub mod estim2d;
pub mod estim3d;
pub mod estimate;
pub mod harness;
pub mod model;
pub mod rootfind;
pub mod sampler;
pub mod shapes;

pub use error::{Error, Result};
pub use estimate::{estimate, AnyEstimate, Estimate, Estimate3D, EstimatorOptions, Flags, Method};
pub use model::{Params2D, Params3D};
pub use sampler::{sample_distances, DistanceSample};
pub use shapes::{Dimension, ModelTag, Shape, Shape2D, Shape3D, VolumePolynomial};
