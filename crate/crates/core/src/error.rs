use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("modulus {0} is outside the supported range 2..=251")]
    ModulusOutOfRange(u64),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u8, right: u8 },

    #[error("shape error in {context}: expected {expected}, found {found}")]
    Shape {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("size cap exceeded: {requested} basis elements requested, cap is {cap}")]
    Capacity { requested: u128, cap: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("algebra is not commutative: e{i}*e{j} != e{j}*e{i}")]
    NotCommutative { i: usize, j: usize },

    #[error("algebra is not associative on basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },

    #[error("not a Lie algebra: {0}")]
    NotLie(String),

    #[error("operator {index} is not a derivation: Leibniz rule fails on basis pair ({i}, {j})")]
    NotDerivation { index: usize, i: usize, j: usize },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn shape(context: &'static str, expected: usize, found: usize) -> Self {
        Error::Shape {
            context,
            expected,
            found,
        }
    }
}
