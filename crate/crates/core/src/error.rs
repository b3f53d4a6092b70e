use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("p must be an odd prime, got {0}")]
    InvalidPrime(u64),
    #[error("d = {0} is a square in F, so F(sqrt(d)) is not a field")]
    SquareDiscriminant(String),
    #[error("d = {0} is a square in Q_p, so the extension splits at p = {1}")]
    LocallySplit(String, u64),
    #[error("the Hilbert symbol is undefined at 0")]
    HilbertZero,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("not a minimal double-coset representative")]
    NotMinimalRep,
    #[error("representative is Case 1; no cone statement attached")]
    ExpectedCase2,
    #[error("{0} is not a base of the root system")]
    NotABase(String),
    #[error("{0} is not a theta-base for the given action")]
    NotThetaBase(String),
    #[error("invalid Levi datum: {0}")]
    InvalidLeviDatum(String),
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("empty cone input: {0}")]
    EmptyCone(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("certification input error: {0}")]
    Certify(String),
}

pub type Result<T> = std::result::Result<T, Error>;
