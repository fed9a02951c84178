use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    CompositeNonPrimePower(u64),

    #[error("modulus {0:?} is reducible over GF({1})")]
    ReducibleModulus(Vec<u32>, u32),

    #[error("invalid ring descriptor: {0}")]
    InvalidRing(String),

    #[error("conjugation needs GF(q) with q an even power of a prime")]
    ConjugationUnsupported,

    #[error("enumeration of {what} needs {size} items, cap is {cap}")]
    EnumerationTooLarge { what: &'static str, size: u128, cap: u128 },

    #[error("exponent {0} of a substituted variable is not a nonnegative integer")]
    NonIntegralExponent(String),

    #[error("term {term} is not divisible by the monomial")]
    NotDivisible { term: String },

    #[error("{base}^({exp}) is not rational")]
    IrrationalPower { base: String, exp: String },

    #[error("differentiation is undefined in degree 0")]
    DegreeZero,

    #[error("function is not harmonic: gamma(f) is nonzero at {0:?}")]
    NotHarmonic(Vec<usize>),

    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("group closure exceeded {0} elements")]
    GroupTooLarge(usize),

    #[error("character is ill-defined: words {0:?} and {1:?} give the same matrix but different values")]
    CharacterIllDefined(Vec<usize>, Vec<usize>),

    #[error("Molien coefficient at degree {degree} is not a nonnegative integer: {value}")]
    NonIntegerDimension { degree: usize, value: String },

    #[error("polynomial is not a relative invariant under generator {0}")]
    NotRelativeInvariant(String),

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
