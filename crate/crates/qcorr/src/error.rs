use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrices have incompatible dimensions: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix of dimension {dim} cannot be split as {na}x{nb}")]
    BadBipartition { dim: usize, na: usize, nb: usize },

    #[error("matrix is not Hermitian: max asymmetry {asymmetry:.3e}")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e}")]
    NegativeEigenvalue { eigenvalue: f64 },

    #[error("subsystem dimension must be at least 2, got {n}")]
    DimensionTooSmall { n: usize },

    #[error("structure constants have imaginary residue {residue:.3e}")]
    ImaginaryResidue { residue: f64 },

    #[error("trace condition violated: n(na+b+c)-1 = {residual:.3e}")]
    TraceCondition { residual: f64 },

    #[error("state is not physical: positivity margin {margin:.3e} ({violated})")]
    NotPhysical { margin: f64, violated: &'static str },

    #[error("square-root radicand {which} is negative: {value:.3e}")]
    NegativeRadicand { which: &'static str, value: f64 },

    #[error("parameter {value} outside admissible interval [{lo}, {hi}]")]
    ParameterRange { value: f64, lo: f64, hi: f64 },

    #[error("party A must have dimension {expected}, got {got}")]
    PartyDimension { expected: usize, got: usize },

    #[error("observable spectrum is degenerate: min gap {gap:.3e}")]
    DegenerateSpectrum { gap: f64 },

    #[error("scaled discord radicand is negative: {radicand:.3e}")]
    ScaledDiscordDomain { radicand: f64 },

    #[error("invalid optimizer configuration: {reason}")]
    InvalidConfig { reason: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
