//! Amplitude damping, weak measurement and measurement reversal.
//!
//! Post-selected branches are never renormalized here: the unnormalized state
//! carries the branch weight in its trace, and [`MeasurementOutcome`] tracks
//! the cumulative success probability alongside it.

use crate::error::{check_unit, Error, Result};
use crate::qmat::{embed, ComplexMatrix, DensityMatrix, Qubit};

/// Maximum deviation of `Σ K†K` from the identity.
pub const COMPLETENESS_TOL: f64 = 1e-12;

/// A single-qubit channel given by its Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    label: String,
    ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Build a channel, rejecting operator sets that are not trace preserving.
    pub fn new(label: impl Into<String>, ops: Vec<ComplexMatrix>) -> Result<Self> {
        let label = label.into();
        if ops.is_empty() || ops.iter().any(|k| k.dim() != 2) {
            return Err(Error::DimensionMismatch {
                expected: "non-empty list of 2x2 operators".into(),
                actual: format!("{} operators", ops.len()),
            });
        }
        let channel = Self { label, ops };
        let deviation = channel.completeness_error();
        if deviation > COMPLETENESS_TOL {
            return Err(Error::Incomplete { label: channel.label, deviation });
        }
        Ok(channel)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// `max |Σ K†K - I|`.
    pub fn completeness_error(&self) -> f64 {
        let sum = self.ops.iter().map(|k| &k.adjoint() * k).fold(ComplexMatrix::zeros(2), |acc, m| &acc + &m);
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }
}

/// Decoherence strengths of Alice's and Bob's qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingParams {
    pub d1: f64,
    pub d2: f64,
}

impl DampingParams {
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        Ok(Self { d1: check_unit("D1", d1)?, d2: check_unit("D2", d2)? })
    }

    pub fn symmetric(d: f64) -> Result<Self> {
        Self::new(d, d)
    }

    pub fn strength(&self, qubit: Qubit) -> f64 {
        match qubit {
            Qubit::One => self.d1,
            Qubit::Two => self.d2,
        }
    }
}

/// Amplitude damping channel: `|1⟩` decays to `|0⟩` with probability `d`.
pub fn adc_channel(d: f64) -> Result<KrausChannel> {
    let d = check_unit("D", d)?;
    let w0 = ComplexMatrix::real_diag(&[1.0, (1.0 - d).sqrt()]);
    let w1 = ComplexMatrix::from_real_rows([[0.0, d.sqrt()], [0.0, 0.0]])?;
    KrausChannel::new(format!("adc(D={d})"), vec![w0, w1])
}

/// No-click operator of a weak measurement of strength `p`: `diag(1, √(1-p))`.
pub fn no_click_operator(p: f64) -> Result<ComplexMatrix> {
    let p = check_unit("p", p)?;
    Ok(ComplexMatrix::real_diag(&[1.0, (1.0 - p).sqrt()]))
}

/// Click operator `diag(0, √p)`. Not invertible; the click branch is a failed run.
pub fn click_operator(p: f64) -> Result<ComplexMatrix> {
    let p = check_unit("p", p)?;
    Ok(ComplexMatrix::real_diag(&[0.0, p.sqrt()]))
}

/// Reversal operator of strength `q`: `diag(√(1-q), 1)`.
pub fn reversal_operator(q: f64) -> Result<ComplexMatrix> {
    let q = check_unit("q", q)?;
    Ok(ComplexMatrix::real_diag(&[(1.0 - q).sqrt(), 1.0]))
}

/// The full weak-measurement instrument `{M0, M1}`, used only to check
/// completeness.
pub fn weak_measurement_instrument(p: f64) -> Result<KrausChannel> {
    KrausChannel::new(format!("weak(p={p})"), vec![no_click_operator(p)?, click_operator(p)?])
}

/// Apply `ch` to one qubit of a two-qubit state. Trace preserving.
pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel, qubit: Qubit) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: "4x4".into(), actual: format!("{0}x{0}", rho.dim()) });
    }
    let mut acc = ComplexMatrix::zeros(4);
    for k in ch.ops() {
        let lifted = embed(k, qubit)?;
        acc = &acc + &lifted.conjugate(rho.matrix());
    }
    DensityMatrix::from_trusted(acc)
}

/// A post-selected (unnormalized) state and the probability of having
/// reached it.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub state: DensityMatrix,
    pub success_prob: f64,
}

impl MeasurementOutcome {
    /// Start a pipeline. For a normalized input, `success_prob` stays equal to
    /// the trace of `state` through every step.
    pub fn start(state: DensityMatrix) -> Self {
        Self { state, success_prob: 1.0 }
    }

    /// Keep the no-click branch of a weak measurement on `qubit`.
    pub fn weak_measure(self, p: f64, qubit: Qubit) -> Result<Self> {
        let op = no_click_operator(p)?;
        self.post_select(&op, qubit)
    }

    /// Keep the successful branch of a reversal measurement on `qubit`.
    pub fn reverse_measure(self, q: f64, qubit: Qubit) -> Result<Self> {
        let op = reversal_operator(q)?;
        self.post_select(&op, qubit)
    }

    /// Trace-preserving evolution; the success probability is unchanged.
    pub fn apply_channel(self, ch: &KrausChannel, qubit: Qubit) -> Result<Self> {
        let state = apply_channel(&self.state, ch, qubit)?;
        Ok(Self { state, success_prob: self.success_prob })
    }

    /// Probability that some post-selection along the way failed.
    pub fn failure_prob(&self) -> f64 {
        1.0 - self.success_prob
    }

    fn post_select(self, op: &ComplexMatrix, qubit: Qubit) -> Result<Self> {
        let before = self.state.trace();
        let state = self.state.conjugated_by(&embed(op, qubit)?)?;
        let branch = state.trace() / before;
        Ok(Self { state, success_prob: self.success_prob * branch })
    }
}

/// No-click branch of a weak measurement of strength `p` on `qubit`.
pub fn weak_measure(rho: &DensityMatrix, p: f64, qubit: Qubit) -> Result<MeasurementOutcome> {
    MeasurementOutcome::start(rho.clone()).weak_measure(p, qubit)
}

/// Reversal measurement of strength `q` on `qubit`.
pub fn reverse_measure(rho: &DensityMatrix, q: f64, qubit: Qubit) -> Result<MeasurementOutcome> {
    MeasurementOutcome::start(rho.clone()).reverse_measure(q, qubit)
}
