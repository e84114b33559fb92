use thiserror::Error;

/// Errors raised by the forward brewing model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChemistryError {
    #[error("original gravity {og} is at or beyond the high-gravity ABV singularity (1.775)")]
    GravitySingularity { og: f64 },
    #[error("final gravity {fg} exceeds original gravity {og}")]
    GravityOrder { og: f64, fg: f64 },
    #[error("IBU/GU ratio undefined for original gravity {og}")]
    UndefinedRatio { og: f64 },
    #[error("recipe has {got} quantities but the inventory has {expected} ingredients")]
    RecipeLength { expected: usize, got: usize },
    #[error("quantity {value} for '{name}' outside [0, {stock}]")]
    QuantityOutOfStock {
        name: String,
        value: f64,
        stock: f64,
    },
}

/// Crate-wide error type for loading, validation and orchestration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: line {line}: field '{field}': {message}")]
    Parse {
        path: String,
        line: u64,
        field: String,
        message: String,
    },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Chemistry(#[from] ChemistryError),
    #[error("{0}")]
    Analysis(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than runtime failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Validation(_) | Error::Config(_) | Error::Chemistry(_)
        )
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
