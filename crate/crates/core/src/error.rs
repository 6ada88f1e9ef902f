use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("size {size} exceeds cap {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("characteristic 2 is not supported here")]
    EvenCharacteristic,
    #[error("divisor not supported by this curve model: {0}")]
    UnsupportedDivisor(String),
    #[error("zero function has no divisor")]
    ZeroFunction,
    #[error("point is not a nontrivial 2-torsion point")]
    NotTwoTorsion,
    #[error("point counts are inconsistent with a genus-{genus} curve: {reason}")]
    InconsistentCounts { genus: u32, reason: String },
    #[error("unsupported curve: {0}")]
    UnsupportedCurve(String),
    #[error("spectral curve is non-reduced (b^2-4 vanishes identically)")]
    NonReducedSpectralCurve,
    #[error("spectral curve is singular")]
    SingularSpectralCurve,
    #[error("singular curve model")]
    SingularCurve,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Usage(_) | Error::Io(_) | Error::NotPrime(_) => 2,
            Error::CapExceeded { .. } => 3,
            _ => 4,
        }
    }
}

pub(crate) fn check_cap(size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { size, cap })
    } else {
        Ok(())
    }
}
