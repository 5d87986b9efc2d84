//! Numerical tolerances used by the verification suites and tests.
//!
//! Each constant is pinned once here so that the acceptance checks, the
//! `verify` subcommand and the unit tests all agree on what "passes" means.

/// Scaling identity `zeta_{lambda L}(s) = lambda^s zeta_L(s)` on strings.
pub const STRING_SCALING: f64 = 1e-12;

/// Cantor tube formula against the interval-merge oracle (relative).
pub const CANTOR_TUBE: f64 = 1e-12;

/// Multiplicative periodicity of `|C_t| / t^{1-D}` across one period.
pub const CANTOR_PERIOD: f64 = 1e-12;

/// min/max of the normalized tube volume against the closed-form contents.
pub const CANTOR_CONTENT: f64 = 1e-10;

/// Tube-volume scaling of the oracle under `lambda = 1/3`.
pub const CONTENT_SCALING: f64 = 1e-10;

/// Moran-equation residual `|sum b r^D - 1|`.
pub const MORAN_RESIDUAL: f64 = 1e-13;

/// Lattice period detection and pole spacing.
pub const LATTICE_PERIOD: f64 = 1e-12;
pub const LATTICE_SPACING: f64 = 1e-10;

/// Residual `|1 - sum b r^omega|` at every enumerated Dirichlet zero.
pub const DIRICHLET_ZERO: f64 = 1e-10;

/// Agreement between analytic and contour residues.
pub const RESIDUE_CONTOUR: f64 = 1e-8;

/// Analytic residue identities (Cantor string, torus, tube transfer).
pub const RESIDUE_ANALYTIC: f64 = 1e-10;

/// Pole dedup radius and numerator-cancellation threshold.
pub const POLE_DEDUP: f64 = 1e-9;
pub const CANCEL_EPS: f64 = 1e-9;

/// Half-width guard for treating `s` as sitting on a pole.
pub const POLE_HIT: f64 = 1e-13;

/// Exact 1D scaling/union identity residuals.
pub const EXACT_1D: f64 = 1e-8;

/// Spray self-similar identity residual (relative).
pub const SELF_SIMILAR: f64 = 1e-12;

/// Catalog region-measure anchor at `s = N` (relative).
pub const MEASURE_ANCHOR: f64 = 1e-6;

/// Generator closed form vs quadrature (relative).
pub const GENERATOR_QUAD: f64 = 1e-6;

/// Mellin strip identity for catalog tube expressions.
pub const MELLIN_STRIP: f64 = 1e-6;

/// Embedding functional equation residual (Cantor set, unit segment).
pub const EMBED_EQ: f64 = 1e-3;

/// Gamma-ratio composition identity.
pub const GAMMA_COMPOSE: f64 = 1e-12;

/// Box-dimension fit tolerances per geometry.
pub const FIT_CANTOR: f64 = 0.01;
pub const FIT_CUSP: f64 = 0.05;
pub const FIT_DUST: f64 = 0.03;
pub const FIT_EMBED: f64 = 0.02;

/// Cesaro average-content estimator (relative).
pub const AVG_CONTENT: f64 = 0.01;
