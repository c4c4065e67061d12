use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid UTF-8 at byte offset {offset}")]
    Decode { offset: usize },

    #[error("corpus contains no tokens")]
    EmptyCorpus,

    #[error("invalid frequency band [{min}, {max}]")]
    InvalidBand { min: usize, max: usize },

    #[error("word `{word}` occurs {frequency} time(s); a signal needs at least two occurrences")]
    DegenerateSignal { word: String, frequency: usize },

    #[error("DTW requires non-empty vectors (got lengths {x} and {y})")]
    EmptyVector { x: usize, y: usize },

    #[error("no signal for word `{word}` on side {side}")]
    MissingSignal { word: String, side: char },

    #[error("position {pos} outside [0, {len}]")]
    OutOfRange { pos: f64, len: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("metric undefined: {0}")]
    UndefinedMetric(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
