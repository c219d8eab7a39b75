use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tau must lie in the upper half-plane (got Im tau = {0})")]
    NotInUpperHalfPlane(f64),
    #[error("tau components must be finite")]
    NonFiniteModulus,
    #[error("curve class (0,0) is not a closed curve")]
    ZeroCurve,
    #[error("curve class ({0},{1}) is not primitive; use a weighted curve instead")]
    NonPrimitiveCurve(i64, i64),
    #[error("mapping class has determinant {0}, expected 1")]
    NotUnimodular(i64),
    #[error("weight must be positive and finite (got {0})")]
    InvalidWeight(f64),
    #[error("max_index must be at least 1")]
    InvalidMaxIndex,
    #[error("grid size {0} is not a power of two >= 4")]
    InvalidGridSize(usize),
    #[error("grid size {requested} is smaller than the field resolution {field}")]
    GridTooCoarse { requested: usize, field: usize },
    #[error("field samples must be finite")]
    NonFiniteSample,
    #[error("expected {expected} samples, got {got}")]
    SampleCount { expected: usize, got: usize },
    #[error("|t*m| = {0} >= 1: the deformation is not quasiconformal")]
    DegenerateDeformation(f64),
    #[error("deformation path leaves the upper half-plane")]
    LeavesHalfPlane,
    #[error("direction must have unit modulus (got |m| = {0})")]
    NotUnitDirection(f64),
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("field and Hopf differential live over different moduli")]
    MismatchedModulus,
    #[error("operation requires a constant Beltrami field")]
    NonConstantField,
    #[error("finite-difference step {0} is out of range")]
    StepOutOfRange(f64),
    #[error("tau is too close to the real axis for the stencil (Im tau = {im}, step = {step})")]
    StencilOutsideDomain { im: f64, step: f64 },
    #[error("Poisson right-hand side has nonzero mean {0:e}")]
    Unsolvable(f64),
    #[error("invalid tolerance profile: {0}")]
    InvalidProfile(String),
    #[error("unknown test function '{0}'")]
    UnknownFunction(String),
    #[error("cannot parse '{input}' as {what}")]
    Parse { input: String, what: &'static str },
}
