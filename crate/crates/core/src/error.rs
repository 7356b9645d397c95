use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no convergence certificate: {0}")]
    Divergence(String),
    #[error("tail bound {bound:e} exceeds tolerance {tol:e}")]
    TailTooLarge { bound: f64, tol: f64 },
    #[error("point mass at index {index} is not real")]
    NonRealMass { index: usize },
    #[error("coefficient a_{index} is zero")]
    ZeroCoefficient { index: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("sum {value} is not an integer (residual {residual:e})")]
    NonIntegerResult { value: f64, residual: f64 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid driver: {0}")]
    InvalidDriver(String),
    #[error("singular matrix: {0}")]
    SingularMatrix(String),
    #[error("inverse has no Vandermonde row structure (abs residual {abs:e}, rel residual {rel:e})")]
    NoVandermondeStructure { abs: f64, rel: f64 },
    #[error("zero pivot in row {row}")]
    ZeroPivot { row: usize },
    #[error("quadrature too coarse: {0}")]
    QuadratureTooCoarse(String),
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{value} has no inverse modulo {modulus}")]
    NoInverse { value: u64, modulus: u64 },
    #[error("not a principal root: {0}")]
    NotPrincipalRoot(String),
    #[error("duplicate value {0} in symbol table")]
    DuplicateValue(f64),
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("symbol {0:?} is not in the table")]
    UnknownSymbol(char),
    #[error("bad driver index {0}")]
    BadIndex(f64),
    #[error("value {value} is {distance:e} from the nearest symbol (guard {guard:e})")]
    AmbiguousSymbol { value: f64, distance: f64, guard: f64 },
    #[error("stream truncated: {0}")]
    TruncatedStream(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("truncated pixel data: expected {expected} samples, got {got}")]
    TruncatedPixels { expected: usize, got: usize },
    #[error("malformed sequence: {0}")]
    MalformedSeq(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
