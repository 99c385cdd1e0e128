//! Both qubits are damped. Alice weakly measures both before the noise, and
//! each party reverses on their own qubit afterwards.

use super::{optimize_q, Alignment, BellClass, ProtocolParams, ProtocolResult};
use crate::channels::{adc_channel, DampingParams, MeasurementOutcome};
use crate::error::{check_unit, Result};
use crate::qmat::{DensityMatrix, Qubit};

/// Per-qubit weak-measurement and reversal strengths, Alice's first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strengths {
    pub p: (f64, f64),
    pub q: (f64, f64),
}

impl Strengths {
    pub fn symmetric(p: f64, q: f64) -> Self {
        Self { p: (p, p), q: (q, q) }
    }
}

/// Weak measurement on both qubits, damping on both, reversal on both,
/// starting from an arbitrary state. Asymmetric settings are allowed.
pub fn double_sided_state(
    initial: DensityMatrix,
    damping: DampingParams,
    strengths: Strengths,
) -> Result<MeasurementOutcome> {
    let adc1 = adc_channel(damping.d1)?;
    let adc2 = adc_channel(damping.d2)?;
    MeasurementOutcome::start(initial)
        .weak_measure(strengths.p.0, Qubit::One)?
        .weak_measure(strengths.p.1, Qubit::Two)?
        .apply_channel(&adc1, Qubit::One)?
        .apply_channel(&adc2, Qubit::Two)?
        .reverse_measure(strengths.q.0, Qubit::One)?
        .reverse_measure(strengths.q.1, Qubit::Two)
}

pub fn case2_state(class: BellClass, damping: DampingParams, strengths: Strengths) -> Result<MeasurementOutcome> {
    double_sided_state(class.density(), damping, strengths)
}

/// Symmetric setting `D1 = D2 = d`, `p1 = p2 = p`, `q1 = q2 = q`.
pub fn case2_pipeline(class: BellClass, d: f64, p: f64, q: f64) -> Result<ProtocolResult> {
    let outcome = case2_state(class, DampingParams::symmetric(d)?, Strengths::symmetric(p, q))?;
    ProtocolResult::from_outcome(ProtocolParams::symmetric(d, p, q), &outcome)
}

/// Fidelity-optimal symmetric reversal strength,
/// `(1 + x² - D̄p̄√(1 + x²)) / (1 + x²)` with `x = Dp̄`.
pub fn case2_q_opt(d: f64, p: f64) -> Result<f64> {
    let (d, p) = (check_unit("D", d)?, check_unit("p", p)?);
    let x2 = (d * (1.0 - p)).powi(2);
    let kept = (1.0 - d) * (1.0 - p);
    Ok(1.0 - kept / (1.0 + x2).sqrt())
}

/// Closed-form optimum for the parallel class.
pub fn case2_optimal(d: f64, p: f64) -> Result<ProtocolResult> {
    let q = case2_q_opt(d, p)?;
    let x = d * (1.0 - p);
    let s = (1.0 + x * x).sqrt();
    let f = (1.0 + s + x * x) / (2.0 * (1.0 + x * s + x * x));
    let kept = (1.0 - d) * (1.0 - p);
    let p_succ = kept * kept * (1.0 + x * s + x * x) / (1.0 + x * x);
    Ok(ProtocolResult::new(ProtocolParams::symmetric(d, p, q), f, p_succ, Some(q)))
}

/// Numeric optimum of [`case2_pipeline`] over the common reversal strength.
pub fn case2_numeric_optimal(class: BellClass, d: f64, p: f64) -> Result<ProtocolResult> {
    let best = optimize_q(|q| Ok(case2_pipeline(class, d, p, q)?.f))?;
    let r = case2_pipeline(class, d, p, best.x)?;
    Ok(ProtocolResult { q_opt: Some(best.x), ..r })
}

/// Both qubits damped, no measurements. Parallel: `1 - D + D²/2`.
/// Anti-parallel: `1 - D` up to `D = 2/3`, `D/2` from there on.
pub fn case2_baseline(class: BellClass, d: f64) -> Result<ProtocolResult> {
    let d = check_unit("D", d)?;
    let f = match class.alignment {
        Alignment::Parallel => 1.0 - d + d * d / 2.0,
        Alignment::AntiParallel if d <= 2.0 / 3.0 => 1.0 - d,
        Alignment::AntiParallel => d / 2.0,
    };
    Ok(ProtocolResult::new(ProtocolParams::symmetric(d, 0.0, 0.0), f, 1.0, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::golden_section_max;
    use approx::assert_abs_diff_eq;

    /// Expanded form in `D`, `p` directly.
    fn q_opt_expanded(d: f64, p: f64) -> f64 {
        let x2 = (d * (1.0 - p)).powi(2);
        (1.0 + x2 - ((1.0 - d).powi(2) * (1.0 - p).powi(2) * (1.0 + x2)).sqrt()) / (1.0 + x2)
    }

    #[test]
    fn q_opt_matches_expanded_form() {
        for &d in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            for &p in &[0.0, 0.3, 0.7, 1.0] {
                assert_abs_diff_eq!(case2_q_opt(d, p).unwrap(), q_opt_expanded(d, p), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn noiseless() {
        let r = case2_pipeline(BellClass::PSI_PLUS, 0.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(r.f, 1.0, epsilon = 1e-14);
        let r = case2_optimal(0.0, 0.0).unwrap();
        assert_eq!((r.f, r.q_opt, r.p_succ), (1.0, Some(0.0), 1.0));
    }

    #[test]
    fn full_damping_limit() {
        let r = case2_optimal(1.0, 0.0).unwrap();
        assert_abs_diff_eq!(r.f, 0.5, epsilon = 1e-15);
        assert_eq!(r.p_succ, 0.0);
        assert!(r.measure_zero);
        // Just inside the edge the pipeline reaches the same value.
        let d = 1.0 - 1e-9;
        let q = case2_q_opt(d, 0.0).unwrap();
        let sim = case2_pipeline(BellClass::PSI_PLUS, d, 0.0, q).unwrap();
        assert_abs_diff_eq!(sim.f, 0.5, epsilon = 1e-8);
    }

    #[test]
    fn exact_reversal_without_noise() {
        assert_abs_diff_eq!(case2_q_opt(0.0, 0.4).unwrap(), 0.4, epsilon = 1e-15);
        let r = case2_pipeline(BellClass::PSI_MINUS, 0.0, 0.4, 0.4).unwrap();
        assert_abs_diff_eq!(r.f, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn anti_parallel_state_survives_equal_weak_measurements() {
        for class in [BellClass::PHI_PLUS, BellClass::PHI_MINUS] {
            let out =
                case2_state(class, DampingParams::symmetric(0.0).unwrap(), Strengths::symmetric(0.6, 0.0)).unwrap();
            assert!(out.state.normalize().matrix().max_abs_diff(class.density().matrix()) <= 1e-12);
        }
    }

    #[test]
    fn closed_optimum_matches_golden_oracle_on_pipeline() {
        let (d, p) = (0.3, 0.1);
        let oracle =
            golden_section_max(|q| case2_pipeline(BellClass::PSI_PLUS, d, p, q).map(|r| r.f), 0.0, 1.0, 1e-10).unwrap();
        let r = case2_optimal(d, p).unwrap();
        assert_abs_diff_eq!(oracle.x, r.q_opt.unwrap(), epsilon = 1e-6);
        assert_abs_diff_eq!(oracle.value, r.f, epsilon = 1e-9);
        let sim = case2_pipeline(BellClass::PSI_PLUS, d, p, r.q_opt.unwrap()).unwrap();
        assert_abs_diff_eq!(sim.p_succ, r.p_succ, epsilon = 1e-12);
    }

    #[test]
    fn baselines() {
        assert_eq!(case2_baseline(BellClass::PSI_PLUS, 0.0).unwrap().f, 1.0);
        assert_abs_diff_eq!(case2_baseline(BellClass::PHI_PLUS, 2.0 / 3.0).unwrap().f, 1.0 / 3.0, epsilon = 1e-15);
        let d = 2.0 * 2f64.sqrt() - 2.0;
        let b2 = case2_baseline(BellClass::PSI_PLUS, d).unwrap().f;
        assert_abs_diff_eq!(b2, 1.0 - d + d * d / 2.0, epsilon = 1e-15);
        assert!(b2 > 0.5 && (b2 - 0.5147).abs() < 1e-4);
        for class in BellClass::ALL {
            for d in [0.1, 0.5, 2.0 / 3.0, 0.8, 0.95] {
                let sim = case2_pipeline(class, d, 0.0, 0.0).unwrap();
                assert_abs_diff_eq!(sim.f, case2_baseline(class, d).unwrap().f, epsilon = 1e-12);
            }
        }
    }
}
