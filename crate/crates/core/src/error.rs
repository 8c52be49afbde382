use alloc::string::String;

use thiserror::Error;
use time::Date;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dates out of order: {start} is after {end}")]
    DateOrder { start: Date, end: Date },
    #[error("times out of order: {start} is after {end}")]
    TimeOrder { start: f64, end: f64 },
    #[error("invalid date arithmetic: {0}")]
    InvalidDate(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("curve bootstrap failed at pillar {pillar}: {reason}")]
    Bootstrap { pillar: String, reason: String },
    #[error("negative implied hazard rate for the {tenor}y CDS quote")]
    NegativeHazard { tenor: f64 },
    #[error("root not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },
    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("zero annuity")]
    ZeroAnnuity,
    #[error("inconsistent probabilities: p + q = {sum}")]
    Probability { sum: f64 },
    #[error("degenerate risk-adjusted ratio (zero recovery with certain default)")]
    DegenerateRatio,
    #[error("payment date {0} is not a lattice slice")]
    Misaligned(Date),
    #[error(
        "time step too large: branching probability {prob} at slice {slice}; use a smaller step"
    )]
    StepTooLarge { slice: usize, prob: f64 },
    #[error("singular regression: explanatory variable is constant")]
    Singular,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Bootstrap { .. }
                | Error::NegativeHazard { .. }
                | Error::NotBracketed { .. }
                | Error::NoConvergence { .. }
                | Error::ZeroAnnuity
                | Error::DegenerateRatio
                | Error::StepTooLarge { .. }
                | Error::Singular
        )
    }
}
