use thiserror::Error;

/// Crate-wide error type. Variants are named after the contract they violate,
/// not after the call site that detected them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("Bloch vector leaves the unit ball (|x| = {norm})")]
    BlochOutOfBall { norm: f64 },

    #[error("noise channel is not canonical: {0}")]
    NonCanonicalChannel(String),

    #[error("positivity lost at t = {t}: eigenvalue {min_eig:.3e}")]
    PositivityLoss { t: f64, min_eig: f64 },

    #[error("non-finite value at t = {t}")]
    NonFinite { t: f64 },

    #[error("rate pole at t = {t} (denominator {denom:.3e})")]
    RatePole { t: f64, denom: f64 },

    #[error("zero Bloch vector: transition rate undefined")]
    ZeroBlochVector,

    #[error(
        "degenerate spectrum with off-diagonal dissipator coupling \
         (gap {gap:.3e}, coupling {coupling:.3e})"
    )]
    DegenerateSpectrum { gap: f64, coupling: f64 },

    #[error("eigenbranch tracking lost at step {step} (overlap {overlap:.3})")]
    TrackingLost { step: usize, overlap: f64 },

    #[error("population {p:.3e} below floor, renormalized rate undefined")]
    PopulationUnderflow { p: f64 },

    #[error("entropy ledger log-domain violation: {0}")]
    LogDomain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command-line tool: 2 for configuration
    /// errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 3,
        }
    }
}
