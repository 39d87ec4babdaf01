//! Error type with the stable exit-code contract:
//!
//! * `2` — input error (malformed files, bad words, invalid parameters);
//! * `3` — mathematical precondition violation (non-primitive data,
//!   non-convergence, element of the wrong class);
//! * `4` — measure validation error.

use std::fmt;

use thurston_core::bounds::BoundsError;
use thurston_core::construction::{ConstructionError, DataError};
use thurston_core::geometry::GeomError;
use thurston_core::model::ModelError;
use thurston_core::walk::{MeasureError, WalkError};
use thurston_core::words::WordParseError;

/// A failure, bucketed by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Input(String),
    /// Exit code 3.
    Math(String),
    /// Exit code 4.
    Measure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 3,
            CliError::Measure(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) | CliError::Math(msg) | CliError::Measure(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("json error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(format!("csv error: {e}"))
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Input(format!("intersection data: {e}"))
    }
}

impl From<WordParseError> for CliError {
    fn from(e: WordParseError) -> Self {
        CliError::Input(format!("word: {e}"))
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::EmptySubset => CliError::Input(format!("{e}")),
            ConstructionError::NotPrimitive | ConstructionError::NoConvergence { .. } => {
                CliError::Math(format!("{e}"))
            }
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError::Math(format!("{e}"))
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::NonpositiveSalemLog | BoundsError::GenusBelowTwo { .. } => {
                CliError::Input(format!("{e}"))
            }
            BoundsError::MuBelowFour { .. }
            | BoundsError::NotPseudoAnosov
            | BoundsError::MatrixNotHyperbolic => CliError::Math(format!("{e}")),
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        CliError::Measure(format!("measure: {e}"))
    }
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        CliError::Input(format!("walk: {e}"))
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Input(format!("model: {e}"))
    }
}
