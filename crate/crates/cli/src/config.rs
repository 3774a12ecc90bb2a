use std::path::PathBuf;

use thiserror::Error;
use wardhc::engine::Algorithm;
use wardhc::export::Format;
use wardhc::{LinkageMethod, Scale};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    DataMatrix,
    Dissimilarity,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(PathBuf),
    /// Seeded uniform data on `[0, 1)`.
    Synthetic { n: usize, p: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    pub kind: InputKind,
    /// Scale of a dissimilarity file; ignored for data matrices.
    pub input_scale: Scale,
    pub method: LinkageMethod,
    pub square_input: bool,
    pub sqrt_heights: bool,
    pub force_scale: bool,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub formats: Vec<Format>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("--square-input needs a data matrix or a plain-scale dissimilarity file")]
    SquareSquared,
    #[error("synthetic input is a data matrix; pass --input for a dissimilarity file")]
    SyntheticDissimilarity,
    #[error("synthetic input needs n >= 2 and p >= 1")]
    SyntheticShape,
    #[error("no output format selected")]
    NoFormat,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.square_input && self.kind == InputKind::Dissimilarity && self.input_scale == Scale::Squared {
            return Err(ConfigError::SquareSquared);
        }
        if let Source::Synthetic { n, p } = self.source {
            if self.kind == InputKind::Dissimilarity {
                return Err(ConfigError::SyntheticDissimilarity);
            }
            if n < 2 || p < 1 {
                return Err(ConfigError::SyntheticShape);
            }
        }
        if self.formats.is_empty() {
            return Err(ConfigError::NoFormat);
        }
        Ok(())
    }

    /// Scale of the matrix handed to the agglomeration step.
    pub fn agglomeration_scale(&self) -> Scale {
        match (self.kind, self.square_input) {
            (_, true) => Scale::Squared,
            (InputKind::DataMatrix, false) => Scale::Plain,
            (InputKind::Dissimilarity, false) => self.input_scale,
        }
    }
}
