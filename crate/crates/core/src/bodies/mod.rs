//! Convex bodies in R^n: membership oracles with exact metadata, volumes,
//! Minkowski averages, inertia forms, and isotropic normalization.

mod body;
mod inertia;
mod spec_io;
mod volume;

pub use body::{symmetrize_shape, AffineMap, ConvexBody, Error, Family, Result};
pub use inertia::{
    covariance_comparability, eigenvalue_deviation_count, inertia_exact, inertia_from_points,
    isotropic_normalize, InertiaData,
};
pub use spec_io::{BodySpec, Params};
pub use volume::{
    axisymmetric_average_volume, bm_ratio, unit_ball_volume, volume, BmRatio, Volume, VolumeMethod,
};
