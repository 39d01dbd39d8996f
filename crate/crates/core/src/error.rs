use thiserror::Error;

/// Diagnostic returned when a separation-coefficient denominator is too
/// close to zero for the closed forms to be trusted.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceDiagnostic {
    /// Human-readable name of the offending denominator.
    pub denominator: String,
    /// Its actual value.
    pub value: f64,
    /// The natural scale it was compared against.
    pub scale: f64,
}

impl std::fmt::Display for ResonanceDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "resonant drive: denominator {} = {:.6e} (scale {:.6e})",
            self.denominator, self.value, self.scale
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),

    #[error("{0}")]
    Resonance(ResonanceDiagnostic),

    #[error("unstable coupled spectrum: Omega_{index}^2 = {value:.6e} <= 0")]
    UnstableSpectrum { index: usize, value: f64 },

    #[error("drive frequencies {omega1} and {omega2} have no common period with p, q <= {max_ratio}")]
    Incommensurate { omega1: f64, omega2: f64, max_ratio: u32 },

    #[error("mode index {index} outside supported range {min}..={max}")]
    IndexRange { index: u32, min: u32, max: u32 },

    #[error("quadrature failed to converge: estimate {estimate:.6e}, error estimate {error:.3e}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("operation not defined for this model variant: {0}")]
    UnsupportedVariant(String),

    #[error("grid/state dimension mismatch: expected {expected}D, got {got}D")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
