use thiserror::Error;

use crate::singlespin::Regime;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("`{op}` is not defined in the {regime} regime{detail}")]
    Regime {
        op: &'static str,
        regime: Regime,
        detail: String,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: i64, max: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "singular kernel: eigenvalue {value:e} at mode {mode} is below threshold {threshold:e}"
    )]
    Singular {
        mode: usize,
        value: f64,
        threshold: f64,
    },

    #[error("picture conversion is not invertible: dead modes {modes:?}")]
    DeadModes { modes: Vec<usize> },
}

impl Error {
    /// True for failures caused by the numbers rather than the shape of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. } | Error::DeadModes { .. } | Error::NonFinite(_)
        )
    }
}

pub(crate) fn ensure_finite(values: &[num_complex::Complex64], what: &'static str) -> Result<()> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
