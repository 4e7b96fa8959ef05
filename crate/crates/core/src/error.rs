use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    ZeroDimension,
    #[error("matrix is not square: {rows} rows but a row of length {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("incompatible operands: {left}x{left} and {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("position ({r},{c}) is outside a {n}x{n} grid")]
    PositionOutOfRange { n: usize, r: usize, c: usize },
    #[error("index pair ({i},{j}) is outside a {n}x{n} grid")]
    PairOutOfRange { n: usize, i: usize, j: usize },
    #[error("permutations act on different label sets ({left} vs {right} labels)")]
    LabelSetMismatch { left: usize, right: usize },
    #[error("map is not a bijection: label {0} is hit more than once or is out of range")]
    NotBijective(usize),
    #[error("no embedded reference table for n={0}")]
    NoReferenceTable(usize),
    #[error("invalid range {from}..={to} (expected 1 <= from <= to <= {max})")]
    InvalidRange { from: usize, to: usize, max: usize },
    #[error("empty payload")]
    EmptyPayload,
    #[error("invalid scramble parameters: {0}")]
    InvalidScrambleParams(String),
    #[error("malformed scrambled stream: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
