use thiserror::Error;

/// Errors are named by cause so a caller (in particular the CLI) can say
/// which definition failed instead of surfacing a NaN.
#[derive(Debug, Error)]
pub enum Error {
    #[error("EmptySample: a sample must contain at least one value")]
    EmptySample,

    #[error("NonFiniteValue: value at position {position} is NaN or infinite")]
    NonFiniteValue { position: usize },

    #[error("AllZero: every value is zero; all inequality ratios are undefined")]
    AllZero,

    #[error("NonPositiveMean: the classic Gini ratio needs a positive mean; use the signed form")]
    NonPositiveMean,

    #[error("NonPositiveSum: the value total must be positive")]
    NonPositiveSum,

    #[error("ZeroMean: the coefficient of variation is undefined when the mean is zero")]
    ZeroMean,

    #[error("TiedValues: the sorted values at rank {rank} and the next rank are equal, so ranks are ambiguous")]
    TiedValues { rank: usize },

    #[error("NegativeValue: value at position {position} is negative")]
    NegativeValue { position: usize },

    #[error("NonPositiveValue: value at position {position} is not strictly positive")]
    NonPositiveValue { position: usize },

    #[error("InvalidProbabilities: {reason}")]
    InvalidProbabilities { reason: String },

    #[error("LambdaOne: order 1 is excluded from the Renyi family; no Shannon limit is provided")]
    LambdaOne,

    #[error("InvalidOrder: {reason}")]
    InvalidOrder { reason: String },

    #[error("SampleTooLarge: n={n} exceeds the cap of {cap} for quadratic-cost evaluation; call the uncapped variant explicitly")]
    SampleTooLarge { n: usize, cap: usize },

    #[error("DegenerateIndex: every converted quantity diverges as the index reaches 1")]
    DegenerateIndex,

    #[error("OutOfRange: {what}")]
    OutOfRange { what: String },

    #[error("InvalidSpec: {0}")]
    InvalidSpec(String),

    #[error("InvalidAlpha: {0}")]
    InvalidAlpha(String),

    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),

    #[error("EmptyGroup: group {id:?} has no members")]
    EmptyGroup { id: String },

    #[error("LengthMismatch: {values} values but {labels} group labels")]
    LengthMismatch { values: usize, labels: usize },

    #[error("replication {replication}: {source}")]
    Replication {
        replication: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("FileNotFound: {path}")]
    FileNotFound { path: String },

    #[error("Io: {0}")]
    Io(#[from] std::io::Error),

    #[error("Csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("Json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("ParseError: line {line}: {message}")]
    ParseError { line: u64, message: String },

    #[error("EmptyColumn: column {column:?} holds no numeric rows")]
    EmptyColumn { column: String },

    #[error("MissingColumn: {column:?} is not present in the header")]
    MissingColumn { column: String },

    #[error("OverlappingBins: bins at rows {first} and {second} overlap")]
    OverlappingBins { first: usize, second: usize },

    #[error("OpenBinNotLast: the open bin at row {row} must be the last bin")]
    OpenBinNotLast { row: usize },

    #[error("NegativeCount: line {line}")]
    NegativeCount { line: u64 },

    #[error("MissingTopMean: the open top bin has no mean; pass one (or fit it to a target mean)")]
    MissingTopMean,

    #[error("TargetMeanUnreachable: {0}")]
    TargetMeanUnreachable(String),
}

impl Error {
    pub(crate) fn in_replication(self, replication: usize) -> Error {
        Error::Replication {
            replication,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
