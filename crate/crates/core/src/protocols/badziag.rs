//! An X-shaped state at the classical fidelity 2/3 whose fidelity rises into
//! the quantum region when one qubit is damped.

use super::{ProtocolParams, ProtocolResult};
use crate::channels::{adc_channel, apply_channel};
use crate::error::{check_unit, Error, Result};
use crate::fef::fef_closed;
use crate::qmat::{ComplexMatrix, DensityMatrix, Qubit};

/// Diagonal `(0, 3-2√2, 1, 2√2-2)/2` with coherence `-(√2-1)/2` between
/// `|01⟩` and `|10⟩`.
pub fn badziag_state() -> DensityMatrix {
    let r2 = 2f64.sqrt();
    let g = -(r2 - 1.0) / 2.0;
    let m = ComplexMatrix::from_real_rows([
        [0.0, 0.0, 0.0, 0.0],
        [0.0, (3.0 - 2.0 * r2) / 2.0, g, 0.0],
        [0.0, g, 0.5, 0.0],
        [0.0, 0.0, 0.0, r2 - 1.0],
    ])
    .expect("4x4");
    DensityMatrix::new(m).expect("valid state")
}

/// Damp the second qubit with strength `d` and evaluate the FEF.
pub fn badziag_enhance(d: f64) -> Result<ProtocolResult> {
    let d = check_unit("D", d)?;
    let out = apply_channel(&badziag_state(), &adc_channel(d)?, Qubit::Two)?;
    let f = fef_closed(&out)?.f;
    Ok(ProtocolResult::new(ProtocolParams { d2: d, ..Default::default() }, f, 1.0, None))
}

/// Best result over `points` evenly spaced damping strengths in `[0, 1]`.
pub fn badziag_max(points: usize) -> Result<ProtocolResult> {
    if points < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 grid points, got {points}")));
    }
    let mut best: Option<ProtocolResult> = None;
    for i in 0..points {
        let r = badziag_enhance(i as f64 / (points - 1) as f64)?;
        if best.is_none_or(|b| r.f > b.f) {
            best = Some(r);
        }
    }
    Ok(best.expect("non-empty grid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fef::{fef_brute, BruteBudget};
    use crate::protocols::CLASSICAL_FIDELITY;
    use approx::assert_abs_diff_eq;

    #[test]
    fn starts_at_classical_bound() {
        let rho = badziag_state();
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(badziag_enhance(0.0).unwrap().fidelity, CLASSICAL_FIDELITY, epsilon = 1e-9);
    }

    #[test]
    fn full_damping_value() {
        let r = badziag_enhance(1.0).unwrap();
        assert_abs_diff_eq!(r.fidelity, 0.6380711874576983, epsilon = 1e-9);
        let out = apply_channel(&badziag_state(), &adc_channel(1.0).unwrap(), Qubit::Two).unwrap();
        let brute = fef_brute(&out, &BruteBudget::default()).unwrap();
        assert_abs_diff_eq!(brute.f, r.f, epsilon = 1e-9);
    }

    #[test]
    fn damping_lifts_fidelity_into_quantum_region() {
        let best = badziag_max(1001).unwrap();
        assert!(best.fidelity > CLASSICAL_FIDELITY + 0.01);
        assert!(best.params.d2 > 0.5 && best.params.d2 < 0.7);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(badziag_enhance(1.5).is_err());
        assert!(badziag_max(1).is_err());
    }
}
