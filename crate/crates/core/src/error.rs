use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("permutation degree must be positive")]
    ZeroDegree,
    #[error("image sequence is not a bijection")]
    NotBijective,
    #[error("point {point} is outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {0} appears twice in a cycle decomposition")]
    RepeatedPoint(usize),
    #[error("malformed cycle notation {0:?}")]
    Syntax(String),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("element {0} is not contained in the group")]
    NotInGroup(String),
    #[error("generators produce a group of order {found}, expected {expected}")]
    OrderMismatch { expected: u128, found: u128 },
    #[error("group order overflows 128 bits")]
    OrderOverflow,
    #[error("power maps claim class {class} is fixed by exponent {exponent}, but direct conjugacy search disagrees")]
    WitnessMismatch { class: usize, exponent: u64 },
    #[error("class index {index} out of range ({count} classes)")]
    BadClassIndex { index: usize, count: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharTableError {
    #[error("group of order {order} exceeds the enumeration bound {bound}; ingest a CTX table instead")]
    Capacity { order: u128, bound: u128 },
    #[error("no admissible prime below {0}")]
    NoPrime(u64),
    #[error("eigenspace splitting failed: {0}")]
    Splitting(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("table invariant violated: {0}")]
    Invariant(String),
    #[error("class {class} is not central: |chi(s)|^2 != chi(1)^2 for character {character}")]
    NotScalar { class: usize, character: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("s is not quasi-real; the quasi-(-1) predicate does not apply")]
    PredicateInapplicable,
    #[error("centralizer table order {table} differs from computed centralizer order {computed}")]
    DataMismatch { table: u128, computed: u128 },
    #[error("no singleton class of order {0} in the centralizer table")]
    MissingCentralClass(u64),
    #[error("class {class}: {source}")]
    Provider {
        class: usize,
        #[source]
        source: Box<crate::Error>,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum YdError {
    #[error("class size exceeds the cap {cap}")]
    ClassTooLarge { cap: usize },
    #[error("braiding dimension {dim} exceeds the cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("representation check failed: {0}")]
    Representation(String),
    #[error("element is not in the centralizer of s")]
    NotInCentralizer,
    #[error("{0} is not in the enumerated class")]
    NotInClass(String),
}

/// Any error produced by this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    CharTable(#[from] CharTableError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Yd(#[from] YdError),
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
