use thiserror::Error;

/// Failures raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no admissible root of the q-cubic for a={a}, c={c}")]
    NoValidRoot { a: f64, c: f64 },
    #[error("point {re}+{im}i lies on the branch cut")]
    BranchCut { re: f64, im: f64 },
    #[error("Hankel matrix is singular at {bits} bits")]
    SingularHankel { bits: u32 },
    #[error("moment index {k} out of range (max {max})")]
    IndexOutOfRange { k: usize, max: usize },
    #[error("Painleve solution left the Hastings-McLeod branch at s={s}")]
    BlowUp { s: f64 },
    #[error("solution grid does not reach t={t}")]
    GridTooShort { t: f64 },
    #[error("quadrature did not converge (estimate {estimate:e}, error {error:e})")]
    Quadrature { estimate: f64, error: f64 },
    #[error("R2 is singular at z={re}+{im}i")]
    SingularR2 { re: f64, im: f64 },
}

impl Error {
    /// True for failures that the CLI reports as numerical (exit code 2).
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::Domain(_) | Error::IndexOutOfRange { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
