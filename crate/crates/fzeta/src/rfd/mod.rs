//! Numeric ground truth for relative fractal drums: exact distance oracles
//! behind the [`Geometry`] trait, distance/tube zeta quadrature, tube-volume
//! sampling, box-dimension fits, Minkowski content estimators, and identity
//! verification.

pub mod geometry;
pub mod identities;
pub mod mink;
pub mod zeta;

pub use geometry::{
    build_rfd, unit_ball_volume, AnnulusGeom, BallGeom, CantorSetGeom, CuspGeom, CuspProfile,
    DustGeom, Gaps1d, GasketGeom, Geometry, PolygonGeom, Rfd, StringGeom, TorusGeom, WedgeGeom,
};
pub use identities::{check_scaling, check_tube_scaling, check_union, IdentityReport};
pub use mink::{
    box_dimension_fit, minkowski_content_estimate, window_slopes, ContentEstimate, DimensionFit,
    FitRange,
};
pub use zeta::{
    distance_zeta_numeric, log_grid, mc_distances, mellin_zeta_numeric, tube_function_numeric,
    tube_zeta_numeric, DistanceSample, Method, QuadCfg, SampleMethod, TubeSamples,
};
