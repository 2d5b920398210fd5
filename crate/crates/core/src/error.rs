use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The band gap of a k-mode is closed (|d| below the gap tolerance), so
    /// ground-state quantities are undefined there.
    #[error("gap closed: |d| = {norm:.3e}{}", k.map(|k| format!(" at k = {k}")).unwrap_or_default())]
    GapClosed { norm: f64, k: Option<f64> },

    /// An input value lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter sits exactly on an equilibrium critical boundary where the
    /// requested quantity is discontinuous or undefined.
    #[error("parameter {value} lies on a critical boundary")]
    CriticalBoundary { value: f64 },

    /// The winding integral failed to converge to an integer at the maximum
    /// refinement level (too coarse a grid, or a near-critical point).
    #[error("winding integral did not snap to an integer (estimate {estimate})")]
    NonIntegerWinding { estimate: f64 },

    /// A check was invoked on inputs that do not satisfy its hypothesis.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Parameter vector length does not match the model's declared arity.
    #[error("model `{model}` expects {expected} parameters, got {got}")]
    ArityMismatch {
        model: String,
        expected: usize,
        got: usize,
    },

    /// No model registered under the requested name.
    #[error("unknown model `{name}` (registered: {known})")]
    UnknownModel { name: String, known: String },
}

impl Error {
    /// Attach the momentum at which a gap closure was detected.
    pub(crate) fn at_k(self, k: f64) -> Self {
        match self {
            Error::GapClosed { norm, .. } => Error::GapClosed { norm, k: Some(k) },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
