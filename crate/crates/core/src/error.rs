use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("word `{0}` does not start with `a`")]
    NotInWPlus(String),

    #[error("word of length {0} exceeds the supported maximum of {max}", max = crate::words::MAX_WORD_LEN)]
    WordTooLong(usize),

    #[error("divergent composition {0}: last part must be at least 2")]
    Divergent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("division by an interval containing zero")]
    DivisionByZero,

    #[error("radius {radius} does not certify {digits} digits")]
    PrecisionNotCertified { digits: u32, radius: String },

    #[error("certifying {digits} digits needs {} terms, above the cap of {cap}", term_count(.required))]
    PrecisionUnreachable { digits: u32, required: u64, cap: u64 },

    #[error("word of length {len} exceeds series order {order}")]
    OrderOverflow { len: usize, order: usize },

    #[error("series is not grouplike at order {0}")]
    NotGrouplike(usize),

    #[error("series has constant term {0}, expected 1")]
    NonUnitConstant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn term_count(n: &u64) -> String {
    if *n == u64::MAX {
        "more than 1.8e19".into()
    } else {
        n.to_string()
    }
}
