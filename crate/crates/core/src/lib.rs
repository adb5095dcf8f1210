//! Entanglement measures for pure multipartite states built from wedge
//! products of amplitude vectors, with separability certificates across
//! every bipartition and seeded local-unitary invariance experiments.
//!
//! Conventions used throughout:
//!
//! * subsystems and basis labels are 0-based;
//! * amplitudes are stored row-major with subsystem 0 varying slowest;
//! * the normalization constant `𝒩` defaults to 2.

pub mod error;
pub mod frontend;
pub mod lu;
pub mod measures;
pub mod multilinear;
pub mod separability;
pub mod state;

pub use error::{Error, Result};
pub use lu::{apply_local, haar_unitary, invariance_experiment, InvarianceRun, UnitaryGate};
pub use measures::{
    bipartite_concurrence, multipartite_measure, pair_qubit_concurrence, tripartite_measure,
    MeasureConfig, MeasureKind, MeasureResult, MeasureSelector,
};
pub use multilinear::{Permutation, TensorGrid};
pub use num_complex::Complex64;
pub use separability::{is_product_state, separability_report, SeparabilityReport};
pub use state::{
    enumerate_bipartitions, matricize, partial_trace, purity, Bipartition, DensityMatrix, PureState,
};
