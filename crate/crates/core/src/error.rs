use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix shape {rows}x{cols} is invalid: {reason}")]
    BadShape {
        rows: usize,
        cols: usize,
        reason: String,
    },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("all singular values are below the rank tolerance")]
    AllZeroMatrix,
    #[error("matrix has rank {rank}, expected full row rank {rows}")]
    RankDeficient { rank: usize, rows: usize },
    #[error("input matrix is not of full row rank (rank {rank} < {rows})")]
    RankDeficientInput { rank: usize, rows: usize },
    #[error("column index {index} out of range for {cols} columns")]
    IndexOutOfRange { index: usize, cols: usize },
    #[error("subset indices must be strictly increasing")]
    UnsortedSubset,
    #[error("subset of size {size} is smaller than the row count {rows}")]
    SubsetTooSmall { size: usize, rows: usize },
    #[error("k = {k} is outside 0..={len}")]
    KOutOfRange { k: usize, len: usize },
    #[error("Gram matrix of the selected columns is numerically singular")]
    SingularGram,
    #[error("k = {k} is invalid: {reason}")]
    BadK { k: usize, reason: String },
    #[error("column {index} is not a removal candidate (leverage {leverage} >= 1 - tau)")]
    NotCandidate { index: usize, leverage: f64 },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("vectors do not decompose the identity (max deviation {deviation:e})")]
    DecompositionNotIdentity { deviation: f64 },
    #[error("sampled columns {indices:?} are rank deficient")]
    SampleRankDeficient { indices: Vec<usize> },
    #[error("enumeration needs {count} subsets, above the cap of {cap}")]
    TooManySubsets { count: u128, cap: u128 },
    #[error("no sample accepted within {rounds} rounds")]
    MaxRoundsExceeded { rounds: usize },
    #[error("edge set is not a spanning tree: {0}")]
    NotASpanningTree(String),
    #[error("edge subset does not form a spanning tree")]
    NotATree,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {index} is a self-loop on vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index} has non-positive or non-finite weight {weight}")]
    NonPositiveWeight { index: usize, weight: f64 },
    #[error("rank parameter {r} is invalid: {reason}")]
    BadRank { r: usize, reason: String },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}
