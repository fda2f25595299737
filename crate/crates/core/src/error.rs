use thiserror::Error;

/// Errors raised by the geometry engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    /// A coordinate left the chart's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested expectation engine cannot evaluate the request.
    #[error("engine error: {0}")]
    Engine(String),

    /// A metric matrix was not invertible (or not positive definite).
    #[error("singular metric: {0}")]
    SingularMetric(String),

    /// A quantity was requested in a chart it is not defined for.
    #[error("chart mismatch: expected {expected}, got {got}")]
    ChartMismatch {
        expected: &'static str,
        got: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, GeoError>;
