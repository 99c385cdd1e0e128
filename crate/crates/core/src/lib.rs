//! Two-qubit density-matrix toolkit for teleportation through amplitude
//! damping, protected by weak measurement and its reversal.
//!
//! - [`qmat`]: matrices, states, eigendecomposition, partial trace
//! - [`channels`]: Kraus channels, weak measurement, post-selection
//! - [`fef`]: fully entangled fraction, closed and brute-force
//! - [`protocols`]: Case I, Case II, Werner and X-state protocols
//! - [`teleport`]: circuit-level teleportation fidelity
//! - [`optimize`], [`sampling`]: numeric helpers

pub mod channels;
pub mod error;
pub mod fef;
pub mod optimize;
pub mod protocols;
pub mod qmat;
pub mod sampling;
pub mod teleport;

pub use channels::{DampingParams, KrausChannel, MeasurementOutcome};
pub use error::{Error, Result};
pub use fef::{fef_brute, fef_closed, BruteBudget, FefResult};
pub use protocols::{BellClass, ProtocolParams, ProtocolResult};
pub use qmat::{ComplexMatrix, DensityMatrix, Qubit, C64};
pub use teleport::{average_fidelity, InputQubit, TeleportReport};
