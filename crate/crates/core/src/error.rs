use thiserror::Error;

/// Errors raised anywhere in the toolkit. Each variant knows which module
/// raised it so that the CLI can report provenance.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QlmError {
    #[error("[{module}] parameter error: {detail}")]
    Parameter { module: &'static str, detail: String },

    #[error("[{module}] unknown {kind}: {name}")]
    Unknown { module: &'static str, kind: &'static str, name: String },

    #[error("[{module}] domain error: {detail}")]
    Domain { module: &'static str, detail: String },

    #[error("[surface-geometry] geometry error: {0}")]
    Geometry(String),

    #[error("[{module}] frame error: {detail}")]
    Frame { module: &'static str, detail: String },

    #[error("[surface-geometry] non-convex: |H| below threshold (min |H| = {min_norm_h:.3e} < {threshold:.1e})")]
    NonConvex { min_norm_h: f64, threshold: f64 },

    #[error("[weyl-embedding] not-axisymmetric: phi-variation of sigma {deviation:.3e} exceeds {tolerance:.1e}")]
    NotAxisymmetric { deviation: f64, tolerance: f64 },

    #[error("[weyl-embedding] non-embeddable: f - rho'^2 = {margin:.3e} at theta = {theta:.6}")]
    NonEmbeddable { theta: f64, margin: f64 },

    #[error("[weyl-embedding] convexity error: Gaussian curvature {curvature:.3e} <= 0 at theta = {theta:.6}")]
    Convexity { theta: f64, curvature: f64 },

    #[error("[boundary-dirac] resolution error: {0}")]
    Resolution(String),

    #[error("[{module}] flag error: {detail}")]
    Flag { module: &'static str, detail: String },

    #[error("[cli] config error: {0}")]
    Config(String),

    #[error("[cli] io error: {0}")]
    Io(String),
}

impl QlmError {
    pub fn module(&self) -> &'static str {
        match self {
            QlmError::Parameter { module, .. }
            | QlmError::Unknown { module, .. }
            | QlmError::Domain { module, .. }
            | QlmError::Frame { module, .. }
            | QlmError::Flag { module, .. } => module,
            QlmError::Geometry(_) | QlmError::NonConvex { .. } => "surface-geometry",
            QlmError::NotAxisymmetric { .. }
            | QlmError::NonEmbeddable { .. }
            | QlmError::Convexity { .. } => "weyl-embedding",
            QlmError::Resolution(_) => "boundary-dirac",
            QlmError::Config(_) | QlmError::Io(_) => "cli",
        }
    }
}

impl From<std::io::Error> for QlmError {
    fn from(e: std::io::Error) -> Self {
        QlmError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, QlmError>;
