//! Fractal zeta functions and complex dimensions of relative fractal drums.
//!
//! The crate computes the three fractal zeta functions of the theory of
//! complex dimensions — distance, tube and geometric — both from closed
//! meromorphic forms and from numeric ground truth (distance-field
//! quadrature, tube-volume sampling, Monte Carlo), and cross-validates the
//! two routes: residue identities, Minkowski contents, scaling and embedding
//! functional equations, and the fractality classification of a catalog of
//! worked examples (Cantor sets and strings, Sierpinski sprays, square
//! fractals, fractal nests, the Cantor graph, balls, tori, the Cantor dust).
//!
//! Modules follow the pipeline:
//!
//! * [`strings`] — bounded fractal strings and their geometric zetas;
//! * [`cantor`] — generalized Cantor sets with exact tube formulas;
//! * [`mero`] — closed-form meromorphic expressions: evaluation, Moran
//!   roots, pole enumeration, residues, fractality classification;
//! * [`rfd`] — numeric relative fractal drums: distance/tube quadrature,
//!   box-dimension fits, Minkowski content estimators;
//! * [`sprays`] — self-similar sprays and the validated example catalog;
//! * [`embed`] — ambient-embedding functional equations and the Cantor dust;
//! * [`verify`] — the invariant suites run by the CLI and CI.

// Negated float comparisons like `!(x > 0.0)` are deliberate: they reject
// NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cantor;
pub mod embed;
pub mod error;
pub mod fmt;
pub mod mero;
pub mod numeric;
pub mod rfd;
pub mod sprays;
pub mod strings;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
