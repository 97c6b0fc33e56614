use thiserror::Error;

/// Everything that can go wrong while analyzing a curve.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot evaluate at z = 0: the polynomial has negative exponents")]
    DomainError,
    #[error("Chebyshev index {0} is outside the exact 64-bit coefficient range")]
    ChebIndexOutOfRange(i64),
    #[error("common zero t = {t} of U_(n-1), U_(m-1) has residual {residual:e}")]
    CommonZeroResidual { t: f64, residual: f64 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("invalid exponent range: {0}")]
    InvalidRange(String),
    #[error("hat reduction needs m = -n and |a_-n| != |a_n|")]
    HatPrecondition,
    #[error("degree assertion failed: {0}")]
    DegreeAssertion(String),
    #[error("resultant vanishes identically (common factor between g and g*)")]
    DegenerateResultant,
    #[error("tangent vanishes near theta = {theta} (|gamma'| = {speed:e})")]
    NonRegular { theta: f64, speed: f64 },
    #[error("infinitely many self-intersections (curve traces arcs more than once)")]
    MultipleCrossingOverflow,
    #[error("search exhausted after {0} trials")]
    SearchExhausted(usize),
    #[error("point lies on the curve (distance {0:e})")]
    PointOnCurve(f64),
    #[error("root of the derivative polynomial within {distance:e} of the circle")]
    RootNearCircle { distance: f64 },
    #[error("base point too close to a crossing")]
    BasePointNearCrossing,
    #[error("Whitney identity failed: rotation {rotation} != {n_plus} - {n_minus} + {mu}")]
    WhitneyMismatch {
        rotation: i64,
        n_plus: i64,
        n_minus: i64,
        mu: i64,
    },
    #[error("rotation numbers disagree: direct {direct}, argument principle {argument}")]
    RotationMismatch { direct: i64, argument: i64 },
    #[error("curve is not normal ({0})")]
    NotNormal(String),
    #[error("expected {expected} self-intersections, found {found}")]
    CountMismatch { expected: i64, found: i64 },
    #[error("{count} self-intersections exceed the bound {bound}")]
    BoundViolated { count: i64, bound: i64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("rational map is a Blaschke product")]
    BlaschkeInput,
    #[error("{0}")]
    Invalid(String),
    #[error("root finder did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
