//! Ward minimum-variance hierarchical clustering.
//!
//! Two Ward variants are provided. `ward.D` agglomerates squared Euclidean
//! distances and reports heights on that scale; `ward.D2` agglomerates plain
//! distances, squaring inside the Lance-Williams update and reporting heights
//! on the distance scale. Fed their matching inputs they build the same tree,
//! with `ward.D` heights equal to the squares of `ward.D2` heights.
//!
//! ```
//! use wardhc::engine::{agglomerate, AgglomerateOptions, Algorithm};
//! use wardhc::{DataMatrix, LinkageMethod};
//!
//! let data = DataMatrix::from_column(&[0.0, 1.0, 10.0]).unwrap();
//! let d = agglomerate(
//!     &data.euclidean(),
//!     LinkageMethod::WardD2,
//!     Algorithm::NnChain,
//!     &AgglomerateOptions::default(),
//! )
//! .unwrap();
//! assert_eq!(d.steps()[0].height, 1.0);
//! assert!((d.steps()[1].height - 10.96966).abs() < 1e-5);
//! ```
//!
//! Node ids follow one convention throughout: leaves are `0..n`, and the
//! cluster created at step `t` is node `n + t`.

pub mod analysis;
pub mod criteria;
pub mod dendrogram;
pub mod engine;
mod error;
pub mod experiments;
pub mod export;
pub mod linkage;
pub mod matrix;
pub mod method;
pub mod oracle;
pub mod partition;

pub use dendrogram::{Dendrogram, HeightScale, Step};
pub use error::{Error, Result, ValidationReport, Violation};
pub use matrix::{condensed_index, validate, DataMatrix, DissimilarityMatrix, Scale};
pub use method::LinkageMethod;
pub use partition::Partition;
