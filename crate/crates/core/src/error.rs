use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed slope {0:?}: expected \"p/q\"")]
    MalformedSlope(String),
    #[error("malformed rational {0:?}: expected \"num/den\"")]
    MalformedRational(String),
    #[error("0/0 is not a slope")]
    ZeroSlope,
    #[error("height bound {bound} is below the height {required} of an input slope")]
    HeightTooSmall { bound: i64, required: i64 },
    #[error("subgraph is not contained in the ball: {0}")]
    NotInBall(String),
    #[error("objects live in different pieces")]
    MixedPieces,
    #[error("invalid piece object: {0}")]
    InvalidObject(String),
    #[error("degenerate realization: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid shadow: {0}")]
    InvalidShadow(String),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
