//! Weak-measurement protection protocols.
//!
//! Every protocol comes in up to three flavours: a closed form, a pipeline
//! that builds the state step by step through [`crate::channels`] and
//! evaluates it with [`crate::fef::fef_closed`], and a numeric optimizer over
//! the reversal strength built on the pipeline.
//!
//! Closed forms are written in the complements `1 - D`, `1 - p`, `1 - q` so
//! that they stay accurate when the post-selected weight is tiny.

mod badziag;
mod case1;
mod case2;
mod werner;

pub use badziag::*;
pub use case1::*;
pub use case2::*;
pub use werner::*;

use crate::channels::MeasurementOutcome;
use crate::error::Result;
use crate::fef::fef_closed;
use crate::optimize::{scan_then_golden, ScalarMax};
use crate::qmat::{states, DensityMatrix, C64};

/// Bracket width at which [`optimize_q`] stops.
pub const Q_TOL: f64 = 1e-8;
/// Interior points scanned by [`optimize_q`] before the golden-section stage.
pub const Q_SCAN_POINTS: usize = 64;
/// Classical teleportation fidelity.
pub const CLASSICAL_FIDELITY: f64 = 2.0 / 3.0;

/// `|00⟩ ± |11⟩` versus `|01⟩ ± |10⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alignment {
    Parallel,
    AntiParallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// One of the four maximally entangled input states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BellClass {
    pub alignment: Alignment,
    pub sign: Sign,
}

impl BellClass {
    pub const PSI_PLUS: BellClass = BellClass { alignment: Alignment::Parallel, sign: Sign::Plus };
    pub const PSI_MINUS: BellClass = BellClass { alignment: Alignment::Parallel, sign: Sign::Minus };
    pub const PHI_PLUS: BellClass = BellClass { alignment: Alignment::AntiParallel, sign: Sign::Plus };
    pub const PHI_MINUS: BellClass = BellClass { alignment: Alignment::AntiParallel, sign: Sign::Minus };
    pub const ALL: [BellClass; 4] = [Self::PSI_PLUS, Self::PSI_MINUS, Self::PHI_PLUS, Self::PHI_MINUS];

    pub fn parallel(sign: Sign) -> Self {
        Self { alignment: Alignment::Parallel, sign }
    }

    pub fn anti_parallel(sign: Sign) -> Self {
        Self { alignment: Alignment::AntiParallel, sign }
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        match (self.alignment, self.sign) {
            (Alignment::Parallel, Sign::Plus) => states::psi_plus(),
            (Alignment::Parallel, Sign::Minus) => states::psi_minus(),
            (Alignment::AntiParallel, Sign::Plus) => states::phi_plus(),
            (Alignment::AntiParallel, Sign::Minus) => states::phi_minus(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::pure(&self.amplitudes()).expect("Bell state is a valid state")
    }
}

/// The parameter point a result was computed at. Unused strengths are zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProtocolParams {
    pub d1: f64,
    pub d2: f64,
    pub p1: f64,
    pub p2: f64,
    pub q1: f64,
    pub q2: f64,
    pub gamma: Option<f64>,
}

impl ProtocolParams {
    /// Only Bob's qubit is damped.
    pub fn one_sided(d2: f64, p2: f64, q2: f64) -> Self {
        Self { d2, p2, q2, ..Default::default() }
    }

    /// Both qubits see the same damping, measurement and reversal.
    pub fn symmetric(d: f64, p: f64, q: f64) -> Self {
        Self { d1: d, d2: d, p1: p, p2: p, q1: q, q2: q, gamma: None }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma: Some(gamma), ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolResult {
    pub params: ProtocolParams,
    /// Fully entangled fraction of the (normalized) shared state.
    pub f: f64,
    /// Teleportation fidelity `(2f + 1)/3`.
    pub fidelity: f64,
    /// Probability that every post-selection succeeded.
    pub p_succ: f64,
    /// Reversal strength the result was optimized at, if any.
    pub q_opt: Option<f64>,
    /// The point is reached with probability zero; `f` is the limiting value.
    pub measure_zero: bool,
}

impl ProtocolResult {
    pub fn new(params: ProtocolParams, f: f64, p_succ: f64, q_opt: Option<f64>) -> Self {
        Self { params, f, fidelity: (2.0 * f + 1.0) / 3.0, p_succ, q_opt, measure_zero: p_succ <= 0.0 }
    }

    /// `F ≤ 2/3`.
    pub fn is_classical(&self) -> bool {
        self.fidelity <= CLASSICAL_FIDELITY
    }

    fn from_outcome(params: ProtocolParams, outcome: &MeasurementOutcome) -> Result<Self> {
        let f = fef_closed(&outcome.state)?.f;
        Ok(Self::new(params, f, outcome.success_prob, None))
    }
}

/// Maximize a pipeline's FEF over the reversal strength `q ∈ [0, 1]`.
///
/// A coarse scan picks the bracket, golden-section search narrows it to
/// [`Q_TOL`]. On a plateau the smallest maximizer wins, which is also the one
/// with the highest success probability.
pub fn optimize_q(pipeline: impl FnMut(f64) -> Result<f64>) -> Result<ScalarMax> {
    scan_then_golden(pipeline, 0.0, 1.0, Q_SCAN_POINTS, Q_TOL)
}
