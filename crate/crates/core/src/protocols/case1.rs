//! Only Bob's qubit is damped: weak measurement before sending, reversal after
//! receiving.

use super::{optimize_q, BellClass, ProtocolParams, ProtocolResult};
use crate::channels::{adc_channel, MeasurementOutcome};
use crate::error::{check_unit, Error, Result};
use crate::qmat::Qubit;

/// State shared after weak measurement, damping and reversal on qubit 2.
pub fn case1_state(class: BellClass, d2: f64, p2: f64, q2: f64) -> Result<MeasurementOutcome> {
    let adc = adc_channel(d2)?;
    MeasurementOutcome::start(class.density())
        .weak_measure(p2, Qubit::Two)?
        .apply_channel(&adc, Qubit::Two)?
        .reverse_measure(q2, Qubit::Two)
}

/// Simulated FEF and success probability at an explicit reversal strength.
pub fn case1_pipeline(class: BellClass, d2: f64, p2: f64, q2: f64) -> Result<ProtocolResult> {
    let outcome = case1_state(class, d2, p2, q2)?;
    ProtocolResult::from_outcome(ProtocolParams::one_sided(d2, p2, q2), &outcome)
}

/// FEF of the post-selected state at reversal strength `q2`:
/// `(p̄ + q̄ + 2√(D̄p̄q̄) - Dp̄) / (2(p̄ + q̄) - 2Dqp̄)`.
pub fn case1_fef(d2: f64, p2: f64, q2: f64) -> Result<f64> {
    let (d2, p2, q2) = (check_unit("D2", d2)?, check_unit("p2", p2)?, check_unit("q2", q2)?);
    let kept = (1.0 - d2) * (1.0 - p2);
    let qb = 1.0 - q2;
    let weight = kept + qb * (1.0 + d2 * (1.0 - p2));
    if weight <= 0.0 {
        return Err(Error::Annihilated);
    }
    Ok((kept + qb + 2.0 * (kept * qb).sqrt()) / (2.0 * weight))
}

/// Trace of the post-selected state at reversal strength `q2`.
pub fn case1_success(d2: f64, p2: f64, q2: f64) -> Result<f64> {
    let (d2, p2, q2) = (check_unit("D2", d2)?, check_unit("p2", p2)?, check_unit("q2", q2)?);
    Ok(0.5 * ((1.0 - d2) * (1.0 - p2) + (1.0 - q2) * (1.0 + d2 * (1.0 - p2))))
}

/// Fidelity-optimal reversal strength `(3Dp̄ + D²p̄² + p)/(1 + Dp̄)²`.
pub fn case1_q_opt(d2: f64, p2: f64) -> Result<f64> {
    let (d2, p2) = (check_unit("D2", d2)?, check_unit("p2", p2)?);
    let x = d2 * (1.0 - p2);
    Ok(1.0 - (1.0 - d2) * (1.0 - p2) / ((1.0 + x) * (1.0 + x)))
}

/// Reversal strength that best preserves entanglement, `p + Dp̄`. Not the
/// fidelity optimum.
pub fn entanglement_optimal_q(d2: f64, p2: f64) -> Result<f64> {
    let (d2, p2) = (check_unit("D2", d2)?, check_unit("p2", p2)?);
    Ok(p2 + d2 * (1.0 - p2))
}

/// Closed-form optimum over the reversal strength.
///
/// At `D2 = 1` or `p2 = 1` the success probability vanishes; the limiting FEF
/// is reported with `measure_zero` set.
pub fn case1_optimal(d2: f64, p2: f64) -> Result<ProtocolResult> {
    let q = case1_q_opt(d2, p2)?;
    let x = d2 * (1.0 - p2);
    let f = (2.0 + x) / (2.0 + 2.0 * x);
    let p_succ = (1.0 - d2) * (1.0 - p2) * (2.0 + x) / (2.0 + 2.0 * x);
    Ok(ProtocolResult::new(ProtocolParams::one_sided(d2, p2, q), f, p_succ, Some(q)))
}

/// Numeric optimum of [`case1_pipeline`] over `q2`.
pub fn case1_numeric_optimal(class: BellClass, d2: f64, p2: f64) -> Result<ProtocolResult> {
    let best = optimize_q(|q| Ok(case1_pipeline(class, d2, p2, q)?.f))?;
    let r = case1_pipeline(class, d2, p2, best.x)?;
    Ok(ProtocolResult { q_opt: Some(best.x), ..r })
}

/// No weak measurement and no reversal: `1/4 + √(1-D)/2 + (1-D)/4`.
pub fn case1_baseline(d2: f64) -> Result<ProtocolResult> {
    let d2 = check_unit("D2", d2)?;
    let f = 0.25 + 0.5 * (1.0 - d2).sqrt() + 0.25 * (1.0 - d2);
    Ok(ProtocolResult::new(ProtocolParams::one_sided(d2, 0.0, 0.0), f, 1.0, None))
}

/// Simulated counterpart of [`case1_baseline`].
pub fn case1_baseline_pipeline(class: BellClass, d2: f64) -> Result<ProtocolResult> {
    case1_pipeline(class, d2, 0.0, 0.0)
}

/// Only Bob acts: no weak measurement, optimal reversal.
pub fn case1_bob_only(d2: f64) -> Result<ProtocolResult> {
    let d2 = check_unit("D2", d2)?;
    let q = case1_q_opt(d2, 0.0)?;
    let f = (2.0 + d2) / (2.0 + 2.0 * d2);
    let p_succ = (2.0 - d2 - d2 * d2) / (2.0 * (1.0 + d2));
    Ok(ProtocolResult::new(ProtocolParams::one_sided(d2, 0.0, q), f, p_succ, Some(q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::golden_section_max;
    use approx::assert_abs_diff_eq;

    /// Expanded form in `D2`, `p2`, `q2` directly.
    fn fef_expanded(d: f64, p: f64, q: f64) -> f64 {
        let (db, pb, qb) = (1.0 - d, 1.0 - p, 1.0 - q);
        (pb + qb + 2.0 * (db * pb * qb).sqrt() - d * pb) / (2.0 * (pb + qb) - 2.0 * d * q * pb)
    }

    #[test]
    fn complement_form_matches_expanded_form() {
        for &d in &[0.05, 0.3, 0.5, 0.77, 0.95] {
            for &p in &[0.0, 0.2, 0.6, 0.9] {
                for &q in &[0.0, 0.1, 0.5, 0.8, 0.99] {
                    assert_abs_diff_eq!(case1_fef(d, p, q).unwrap(), fef_expanded(d, p, q), epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn noiseless_pipeline() {
        let r = case1_pipeline(BellClass::PSI_PLUS, 0.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(r.f, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.p_succ, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn classical_boundary_without_protection() {
        let d = 2.0 * 2f64.sqrt() - 2.0;
        let r = case1_pipeline(BellClass::PSI_PLUS, d, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(r.f, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(case1_baseline(d).unwrap().f, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn both_classes_give_the_same_fef() {
        let a = case1_pipeline(BellClass::PSI_PLUS, 0.7, 0.3, 0.5).unwrap();
        for class in BellClass::ALL {
            let b = case1_pipeline(class, 0.7, 0.3, 0.5).unwrap();
            assert_abs_diff_eq!(a.f, b.f, epsilon = 1e-9);
            assert_abs_diff_eq!(a.p_succ, b.p_succ, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(a.f, case1_fef(0.7, 0.3, 0.5).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn optimal_corners() {
        let r = case1_optimal(1.0, 0.0).unwrap();
        assert_eq!(r.f, 0.75);
        assert_eq!(r.p_succ, 0.0);
        assert!(r.measure_zero);

        let r = case1_optimal(0.0, 0.0).unwrap();
        assert_eq!(r.f, 1.0);
        assert_eq!(r.q_opt, Some(0.0));
        assert_eq!(r.p_succ, 1.0);
    }

    #[test]
    fn optimum_at_half_damping_matches_golden_oracle() {
        // Oracle: golden-section on the expanded form, independent of the pipeline.
        let oracle = golden_section_max(|q| Ok::<_, ()>(fef_expanded(0.5, 0.2, q)), 0.0, 1.0, 1e-10).unwrap();
        let r = case1_optimal(0.5, 0.2).unwrap();
        assert_abs_diff_eq!(r.f, 6.0 / 7.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.q_opt.unwrap(), 39.0 / 49.0, epsilon = 1e-15);
        assert_abs_diff_eq!(oracle.x, 39.0 / 49.0, epsilon = 1e-6);
        assert_abs_diff_eq!(oracle.value, 6.0 / 7.0, epsilon = 1e-12);

        let numeric = case1_numeric_optimal(BellClass::PSI_PLUS, 0.5, 0.2).unwrap();
        assert_abs_diff_eq!(numeric.q_opt.unwrap(), 39.0 / 49.0, epsilon = 1e-6);
        assert_abs_diff_eq!(numeric.f, 6.0 / 7.0, epsilon = 1e-9);
    }

    #[test]
    fn pipeline_success_matches_closed_success_at_optimum() {
        let q = case1_q_opt(0.5, 0.2).unwrap();
        let r = case1_pipeline(BellClass::PSI_PLUS, 0.5, 0.2, q).unwrap();
        // (1-D)(1-p)(2 + Dp̄)/(2 + 2Dp̄) at D=0.5, p=0.2: 0.4·2.4/2.8
        assert_abs_diff_eq!(r.p_succ, 0.4 * 2.4 / 2.8, epsilon = 1e-14);
        assert_abs_diff_eq!(case1_optimal(0.5, 0.2).unwrap().p_succ, r.p_succ, epsilon = 1e-14);
    }

    #[test]
    fn baseline_values() {
        assert_eq!(case1_baseline(0.0).unwrap().f, 1.0);
        assert_eq!(case1_baseline(1.0).unwrap().f, 0.25);
        for d in [0.1, 0.5, 0.9] {
            let sim = case1_baseline_pipeline(BellClass::PHI_MINUS, d).unwrap();
            assert_abs_diff_eq!(sim.f, case1_baseline(d).unwrap().f, epsilon = 1e-12);
        }
    }

    #[test]
    fn bob_only_values() {
        let r = case1_bob_only(0.0).unwrap();
        assert_eq!((r.f, r.p_succ), (1.0, 1.0));
        let r = case1_bob_only(1.0).unwrap();
        assert_eq!(r.f, 0.75);
        assert_abs_diff_eq!(r.fidelity, 5.0 / 6.0, epsilon = 1e-15);
        assert_eq!(r.p_succ, 0.0);
        let a = case1_bob_only(0.5).unwrap();
        let b = case1_optimal(0.5, 0.0).unwrap();
        assert_abs_diff_eq!(a.f, b.f, epsilon = 1e-15);
        assert_abs_diff_eq!(a.p_succ, b.p_succ, epsilon = 1e-15);
    }

    #[test]
    fn full_measurement_and_reversal_annihilates() {
        assert_eq!(case1_pipeline(BellClass::PSI_PLUS, 0.3, 1.0, 1.0).unwrap_err(), Error::Annihilated);
        assert_eq!(case1_fef(1.0, 0.0, 1.0).unwrap_err(), Error::Annihilated);
    }

    #[test]
    fn range_checks() {
        assert!(case1_optimal(1.2, 0.0).is_err());
        assert!(case1_pipeline(BellClass::PSI_PLUS, 0.2, -0.1, 0.0).is_err());
        assert!(case1_bob_only(f64::INFINITY).is_err());
        assert!(case1_baseline(-1.0).is_err());
    }

    #[test]
    fn entanglement_optimum_is_not_fidelity_optimum() {
        let (d, p) = (0.5, 0.2);
        let qe = entanglement_optimal_q(d, p).unwrap();
        assert_abs_diff_eq!(qe, 0.6, epsilon = 1e-15);
        assert!(case1_fef(d, p, qe).unwrap() < case1_optimal(d, p).unwrap().f);
    }
}
