use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("profile `{function}` is undefined at t = {t}")]
    Domain { function: String, t: f64 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("a^2 + b^2 = {0} is not 1")]
    Normalization(f64),

    #[error("degenerate ruling triple: {0}")]
    DegenerateTriple(String),

    #[error("ruling directions are all parallel; no plane family can be read from cross products")]
    DegenerateDirections,

    #[error("plane with normal ({0}, {1}, {2}) is vertical and therefore not a contact plane")]
    InvalidPlane(f64, f64, f64),

    #[error("singular exclusion removed {removed} of {total} grid nodes")]
    SingularContamination { removed: usize, total: usize },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}
