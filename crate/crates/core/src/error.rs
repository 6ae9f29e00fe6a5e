use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is outside 2..2^31")]
    ModulusOutOfRange(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched moduli {0} and {1}")]
    MismatchedModuli(u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("exponent overflow at byte {pos}")]
    ExponentOverflow { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("zero polynomial where a nonzero one is required")]
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("normal form requested in a free polynomial ring")]
    NoRelation,
    #[error("relation must be homogeneous of positive degree")]
    BadRelation,
    #[error("ideal needs at least two generators, got {0}")]
    TooFewGenerators(usize),
    #[error("generator {0} is not a nonzero homogeneous polynomial")]
    BadGenerator(usize),
    #[error("generator {0} lives in a different ring")]
    GeneratorRingMismatch(usize),
    #[error("ideal is not primary to the irrelevant ideal: no vanishing degree up to {bound}")]
    NotPrimary { bound: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Hk(#[from] HkError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HkError {
    #[error("{q} is not a power of the characteristic {p}")]
    NotFrobeniusPower { q: u64, p: u32 },
    #[error("no run of {needed} vanishing degrees before the degree cap {cap} (q = {q})")]
    CutoffNotReached { q: u64, cap: usize, needed: usize },
    #[error("matrix dimension {dim} in degree {degree} exceeds the cap {cap}")]
    MatrixTooLarge { degree: usize, dim: usize, cap: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("invalid slope data: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<crate::slopes::Violation>),
    #[error("nu2 = {0} is outside [3/2, 2]")]
    Nu2OutOfRange(Rational),
    #[error("degree {e} of the added generator is below the minimal generator degree {min}")]
    GeneratorDegreeTooSmall { e: u64, min: u64 },
    #[error("{0}")]
    Domain(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum P1Error {
    #[error("splitting engine needs the free ring in two variables")]
    NotProjectiveLine,
    #[error("h0 profile is not that of a split bundle: {0}")]
    InconsistentProfile(String),
    #[error("q = {q} is not a multiple of the stabilization level {q0}")]
    IncompatibleLevel { q: u64, q0: u64 },
    #[error(transparent)]
    Hk(#[from] HkError),
    #[error(transparent)]
    Slope(#[from] SlopeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("need at least two rows with distinct q")]
    TooFewRows,
    #[error(
        "ambiguous reconstruction: estimate {alpha_hat}, window {window}, candidates [{}]",
        .candidates.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
    )]
    Ambiguous { alpha_hat: Rational, window: Rational, candidates: Vec<Rational> },
    #[error("multiplicity {ehk} is outside [3h/4, h] for h = {h}")]
    OutOfPlaneCurveRange { h: u64, ehk: Rational },
}

/// Failure to assemble a ring and ideal from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetupError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("in {what}: {source}")]
    Parse { what: String, source: ParseError },
    #[error(transparent)]
    Ring(#[from] RingError),
}
