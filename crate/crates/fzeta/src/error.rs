use thiserror::Error;

/// Errors shared across the crate.
///
/// Each variant corresponds to a precondition or numerical failure of one of
/// the library operations; the messages carry enough context to diagnose a
/// failed run without a debugger.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("fractal string length must be positive (got {0})")]
    NonPositiveLength(f64),
    #[error("geometric tail diverges: count growth {growth} * ratio {ratio} >= 1 at exponent 1")]
    DivergentTail { growth: f64, ratio: f64 },
    #[error("Re s = {re_s} is at or below the convergence abscissa {abscissa}")]
    AbscissaViolation { re_s: f64, abscissa: f64 },
    #[error("requested tolerance {tol} unreachable: best bound {best}")]
    ToleranceUnreachable { tol: f64, best: f64 },
    #[error("scale factor must be positive (got {0})")]
    NonPositiveScale(f64),
    #[error("tensor truncation too small: tail bound {bound} exceeds {tol} at sigma = {sigma}")]
    TruncationTooSmall { bound: f64, tol: f64, sigma: f64 },
    #[error("expected {expected} scales, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid Cantor parameters m = {m}, a = {a} (need m >= 2, 0 < a < 1/m)")]
    InvalidCantorParameters { m: u32, a: f64 },
    #[error("m^depth = {count} intervals exceeds the cap of 10^7")]
    DepthOverflow { count: f64 },
    #[error("tube radius must be positive (got {0})")]
    NonPositiveT(f64),
    #[error("oracle depth {depth} too shallow for t = {t}: need a^depth < t/10")]
    InsufficientDepth { depth: u32, t: f64 },
    #[error("s = {s} is within {dist:e} of a pole")]
    PoleHit { s: num_complex::Complex64, dist: f64 },
    #[error("entire factor evaluation failed: {0}")]
    EntireFactorFailure(String),
    #[error("Dirichlet polynomial has no real Moran root: sum of coefficients {coeff_sum} < 1")]
    NoRealRoot { coeff_sum: f64 },
    #[error("argument principle counts {expected} zeros in window, enumeration found {found}")]
    SeedGridTooCoarse { expected: i64, found: i64 },
    #[error("{0} is not a declared pole")]
    NotAPole(num_complex::Complex64),
    #[error("contour of radius {radius} around {center} contains another pole")]
    ContourContainsOtherPole {
        center: num_complex::Complex64,
        radius: f64,
    },
    #[error("dimension D = {d} equals ambient N = {n}; tube transfer degenerate")]
    DegenerateDimension { d: f64, n: u32 },
    #[error("all Federer curvature coefficients are zero")]
    AllZeroCoefficients,
    #[error("spray measure diverges: sum b_j r_j^N = {sum} >= 1")]
    MeasureDivergence { sum: f64 },
    #[error("unknown catalog example `{0}`")]
    UnknownExample(String),
    #[error("generator validation failed for `{name}`: closed form {closed} vs quadrature {quad} at s = {s}")]
    GeneratorValidationFailed {
        name: String,
        s: f64,
        closed: f64,
        quad: f64,
    },
    #[error("unsupported geometry kind `{0}`")]
    UnsupportedKind(String),
    #[error("integrand diverges under refinement at s = {0}")]
    NonIntegrable(num_complex::Complex64),
    #[error("need >= {need} samples spanning >= {decades} decades (got {got} over {span:.2})")]
    InsufficientRange {
        need: usize,
        decades: f64,
        got: usize,
        span: f64,
    },
    #[error("D = N = {0}: content estimate degenerate, reported against h == 1 only")]
    DegenerateD(f64),
    #[error("union parts violate the distance compatibility condition: {0}")]
    IncompatibleUnion(String),
    #[error("window contains no poles")]
    EmptyWindow,
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("{0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
