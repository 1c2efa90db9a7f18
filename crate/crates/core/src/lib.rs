//! Design, checking and simulation of quantum state verification protocols
//! built from local Pauli projections.

pub mod design;
pub mod error;
pub mod format;
pub mod linalg;
pub mod pauli;
pub mod runtime;
pub mod states;

pub use design::{LocalityMode, LocalityVerdict, Protocol, ProtocolKind};
pub use error::{QsvError, Result};
pub use linalg::HermitianOperator;
pub use pauli::{Axis, QuasiProbTable, Transformation};
pub use runtime::{EstimationResult, VerificationPlan, WitnessReport};
pub use states::{PauliString, StabilizerGenerators, StateVector};
