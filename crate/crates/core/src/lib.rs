//! Focusing analysis for discrete acoustic inverse problems.
//!
//! Builds plant matrices for monopole and plane-wave source models, analyses
//! their Gram matrices (crosstalk, Hermitian angles, gramian against the
//! Hadamard bound, singular values) and evaluates the closed-form conditions
//! under which a layout focuses ideally or super-ideally.

pub mod acoustics;
pub mod analysis;
pub mod conditions;
pub mod error;
pub mod field;
pub mod geometry;
pub mod linalg;
pub mod presets;
pub mod verify;

pub use acoustics::{
    build_plant, AcousticModel, ModelKind, PlantMatrix, Wavenumber, SPEED_OF_SOUND,
};
pub use analysis::{analyze_gram, FocusState, GramAnalysis};
pub use error::{Error, Result};
pub use geometry::{build_geometry, GeometrySpec, Layout, Point3};
pub use linalg::{ComplexMatrix, ComplexVector, C64};
