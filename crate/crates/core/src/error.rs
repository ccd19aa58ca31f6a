use thiserror::Error;

use crate::marked_group::Word;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has non-positive or non-finite determinant {0}")]
    BadDeterminant(f64),
    #[error("trace is within tolerance of 2 but the matrix has no parabolic normal form")]
    ClassifyAmbiguous,
    #[error("map is not parabolic")]
    NotParabolic,
    #[error("map is not hyperbolic")]
    NotHyperbolic,
    #[error("axis test needs hyperbolic or parabolic input")]
    EllipticInput,
    #[error("cross-ratio arguments are not pairwise distinct")]
    DegenerateTuple,
    #[error("Fricke trace equation has no real root for x = {x}, y = {y}")]
    NonRealRoot { x: f64, y: f64 },
    #[error("Jørgensen screen failed for generators {0} and {1}: value {2}")]
    IndiscreteSuspected(usize, usize, f64),
    #[error("enumeration would produce {count} words, above the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u64 },
    #[error("word {0} has different isometry types in source and target")]
    TypeMismatch(Word),
    #[error("no word up to length {0} is hyperbolic in both groups")]
    NoHyperbolicFound(usize),
    #[error("no sampled parabolic element has |omega| > 1; increase depth")]
    NoParabolicAboveOne,
    #[error("attracting fixed point must be 0 for this check")]
    WrongNormalization,
    #[error("need at least {needed} samples, found {found}")]
    InsufficientSamples { needed: usize, found: usize },
    #[error("all samples in the window share the anchor abscissa")]
    DegenerateWindow,
    #[error("groups are not compatible: {0}")]
    Incompatible(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{0}")]
    Parse(String),
}
