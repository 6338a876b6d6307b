use thiserror::Error;

/// Errors raised by field construction, map algebra and the verification pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("field of order {order} exceeds the size bound {bound}")]
    SizeBoundExceeded { order: u64, bound: u64 },
    #[error("zero input where a nonzero element is required")]
    ZeroInput,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("linearized map is singular")]
    Singular,
    #[error("multiplication does not define a presemifield")]
    NotPresemifield,
    #[error("Dembowski-Ostrom polynomial is not planar")]
    NotPlanar,
    #[error("presemifield is not commutative")]
    NotCommutative,
    #[error("element does not lie in the subfield of order {0}")]
    NotInSubfield(u64),
    #[error("equation has no solution: {0}")]
    NoSolution(String),
    #[error("no element with the required properties: {0}")]
    NoSuchElement(String),
    #[error("element has no square root in the subfield")]
    NoSquareRoot,
    /// A construction that must verify did not. Always a bug.
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
