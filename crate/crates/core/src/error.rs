use thiserror::Error;

use crate::roots::RootError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("spectral function is undefined at eigenvalue {eigenvalue:e}")]
    SpectralDomain { eigenvalue: f64 },

    #[error("{context}: {source}")]
    Solver {
        context: &'static str,
        #[source]
        source: RootError,
    },
}

impl Error {
    pub(crate) fn out_of_range(name: &'static str, value: f64, range: &'static str) -> Self {
        Error::OutOfRange { name, value, range }
    }

    /// True for root-finder failures (as opposed to bad input).
    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::Solver { .. })
    }
}

/// Checks `lo <= value <= hi`, rejecting NaN.
pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::out_of_range(name, value, range))
    }
}
