use thiserror::Error;

use crate::fock::ModeId;

#[derive(Debug, Error)]
pub enum Error {
    /// Returned when a layout is constructed with a repeated mode label.
    #[error("duplicate mode id '{0}' in layout")]
    DuplicateMode(ModeId),

    /// Returned when an operation names a mode that the layout does not hold.
    #[error("unknown mode id '{0}'")]
    UnknownMode(ModeId),

    /// Returned when a per-mode photon cutoff is below 1.
    #[error("invalid cutoff {cutoff} for mode '{mode}' (must be >= 1)")]
    InvalidCutoff { mode: ModeId, cutoff: usize },

    /// Returned when two values live on different layouts.
    #[error("mode layouts do not match")]
    LayoutMismatch,

    /// Returned when an operator or state has the wrong number of modes.
    #[error("expected a {expected}-mode value, got {got} modes")]
    ModeCountMismatch { expected: usize, got: usize },

    /// Returned when a parameter is non-finite or outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Returned when a 2x2 mode transformation is not orthogonal.
    #[error("beam-splitter matrix not orthogonal (max deviation {0:.3e})")]
    NonOrthogonal(f64),

    /// Returned when a truncated construction loses more weight than allowed.
    #[error("truncation leakage {leakage:.3e} exceeds tolerance {tol:.3e}")]
    ExcessiveLeakage { leakage: f64, tol: f64 },

    /// Returned when a projective outcome asks for more photons than stored.
    #[error("outcome n={n} exceeds cutoff {cutoff} of mode '{mode}'")]
    OutcomeExceedsCutoff { mode: ModeId, n: usize, cutoff: usize },

    /// Returned when a quantity requires a normalized state.
    #[error("state is not normalized (norm^2 = {norm2})")]
    NotNormalized { norm2: f64 },

    /// Returned when a heralding branch cannot occur.
    #[error("heralding outcome has zero probability")]
    ZeroProbability,

    /// Returned when a requested grid or sweep is empty.
    #[error("empty range: {0}")]
    EmptyRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
