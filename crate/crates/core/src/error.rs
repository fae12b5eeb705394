use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rational: {0}")]
    ParseRational(String),
    #[error("invalid depth: {0}")]
    ParseDepth(String),
    #[error("tilde is undefined at infinity")]
    TildeOfInfinity,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("q = {0} is not an odd prime power")]
    NotOddPrimePower(u64),
    #[error("field element must be nonzero")]
    ZeroElement,
    #[error("element has norm different from one")]
    NormNotOne,
    #[error("degree {sub} does not divide field degree {degree}")]
    BadSubfield { sub: u32, degree: u32 },
    #[error("field mismatch: F_{{{0}}} vs F_{{{1}}}")]
    FieldMismatch(String, String),
    #[error("root datum: {0}")]
    RootDatum(String),
    #[error("galois model: {0}")]
    Galois(String),
    #[error("apartment point {point}: {msg}")]
    Point { point: String, msg: String },
    #[error("orbit {0} has no coset in the point table")]
    MissingCoset(usize),
    #[error("interval [{0}, {1}) is unbounded or reversed")]
    BadInterval(String, String),
    #[error("profile: {0}")]
    Profile(String),
    #[error("signs: {0}")]
    Signs(String),
    #[error("orbit {orbit}: exponent {value} is not an integer")]
    NonIntegerExponent { orbit: usize, value: String },
    #[error("hypothesis violated ({clause}) at {at}")]
    Hypothesis { clause: &'static str, at: String },
    #[error("ledger mismatch: {0}")]
    Mismatch(String),
    #[error("class {0}: {1}")]
    Class(String, String),
    #[error("scenario: {0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
