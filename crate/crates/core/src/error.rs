use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A check matrix that cannot be turned into a matching graph.
    #[error("check matrix is not matchable: {0}")]
    Structure(String),

    #[error("code construction failed: {0}")]
    Construction(String),

    #[error("decoding failed: {0}")]
    Decode(String),

    /// An internal postcondition did not hold. Always a bug.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("threshold fit failed: {0}")]
    Fit(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
