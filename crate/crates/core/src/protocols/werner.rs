//! Werner-state resource `γ|ψ±⟩⟨ψ±| + (1-γ)I/4` with both qubits damped.
//!
//! With `t = D̄p̄` and
//! `A = (γ+1)D²p̄² + 2(1-γ)Dp̄ + (γ+1)`, the protected state at reversal
//! strength `q` has
//!
//! ```text
//! f = (A q̄² + 4γ t q̄ + (γ+1) t²) / (2 (A q̄² + 2 B t q̄ + (γ+1) t²))
//! P = (A q̄² + 2 B t q̄ + (γ+1) t²) / 4,      B = (γ+1)Dp̄ + 1 - γ
//! ```
//!
//! and the optimal reversal is `q̄ = t √((γ+1)/A)`.

use super::{double_sided_state, optimize_q, BellClass, ProtocolParams, ProtocolResult, Sign, Strengths};
use crate::channels::{adc_channel, apply_channel, DampingParams};
use crate::error::{check_unit, Error, Result};
use crate::fef::fef_closed;
use crate::qmat::{ComplexMatrix, DensityMatrix, Qubit};

pub fn werner_state(gamma: f64, sign: Sign) -> Result<DensityMatrix> {
    let gamma = check_unit("gamma", gamma)?;
    let bell = BellClass::parallel(sign).density();
    DensityMatrix::new(&bell.matrix().scale(gamma) + &ComplexMatrix::identity(4).scale((1.0 - gamma) / 4.0))
}

/// FEF after damping both qubits with no measurements:
/// `(D²(γ+1) - 2Dγ - 2(D-1)γ + γ + 1)/4`.
pub fn werner_baseline(gamma: f64, d2: f64) -> Result<ProtocolResult> {
    let (g, d) = (check_unit("gamma", gamma)?, check_unit("D2", d2)?);
    let f = 0.25 * (d * d * (g + 1.0) - 2.0 * d * g - 2.0 * (d - 1.0) * g + g + 1.0);
    let params = ProtocolParams::symmetric(d, 0.0, 0.0).with_gamma(g);
    Ok(ProtocolResult::new(params, f, 1.0, None))
}

/// Simulated baseline: damp both qubits of the Werner state.
pub fn werner_baseline_pipeline(gamma: f64, d2: f64) -> Result<ProtocolResult> {
    let rho = werner_state(gamma, Sign::Plus)?;
    let adc = adc_channel(d2)?;
    let out = apply_channel(&apply_channel(&rho, &adc, Qubit::One)?, &adc, Qubit::Two)?;
    let f = fef_closed(&out)?.f;
    Ok(ProtocolResult::new(ProtocolParams::symmetric(d2, 0.0, 0.0).with_gamma(gamma), f, 1.0, None))
}

/// Largest `D2` for which the unprotected fidelity stays above 2/3,
/// `(3γ - 1)/(1 + γ)`. Only meaningful for `γ > 1/3`.
pub fn werner_baseline_threshold(gamma: f64) -> f64 {
    (3.0 * gamma - 1.0) / (1.0 + gamma)
}

/// Smallest `γ` for which the protected fidelity exceeds 2/3,
/// `(1 + D - Dp)/(3 - D + Dp)`.
pub fn werner_quantum_threshold(d2: f64, p2: f64) -> f64 {
    (1.0 + d2 - d2 * p2) / (3.0 - d2 + d2 * p2)
}

struct Coeffs {
    g: f64,
    a: f64,
    b: f64,
    t: f64,
}

fn coeffs(gamma: f64, d: f64, p: f64) -> Result<Coeffs> {
    let (g, d, p) = (check_unit("gamma", gamma)?, check_unit("D2", d)?, check_unit("p2", p)?);
    let x = d * (1.0 - p);
    Ok(Coeffs {
        g,
        a: (g + 1.0) * x * x + 2.0 * (1.0 - g) * x + (g + 1.0),
        b: (g + 1.0) * x + 1.0 - g,
        t: (1.0 - d) * (1.0 - p),
    })
}

/// FEF of the protected state at reversal strength `q2` (symmetric setting).
pub fn werner_fef(gamma: f64, d2: f64, p2: f64, q2: f64) -> Result<f64> {
    let k = coeffs(gamma, d2, p2)?;
    let qb = 1.0 - check_unit("q2", q2)?;
    let num = k.a * qb * qb + 4.0 * k.g * k.t * qb + (k.g + 1.0) * k.t * k.t;
    let den = 2.0 * (k.a * qb * qb + 2.0 * k.b * k.t * qb + (k.g + 1.0) * k.t * k.t);
    if den <= 0.0 {
        return Err(Error::Annihilated);
    }
    Ok(num / den)
}

/// Success probability of the protected protocol at reversal strength `q2`.
pub fn werner_success(gamma: f64, d2: f64, p2: f64, q2: f64) -> Result<f64> {
    let k = coeffs(gamma, d2, p2)?;
    let qb = 1.0 - check_unit("q2", q2)?;
    Ok(0.25 * (k.a * qb * qb + 2.0 * k.b * k.t * qb + (k.g + 1.0) * k.t * k.t))
}

/// Fidelity-optimal common reversal strength.
pub fn werner_q_opt(gamma: f64, d2: f64, p2: f64) -> Result<f64> {
    let k = coeffs(gamma, d2, p2)?;
    Ok(1.0 - k.t * ((k.g + 1.0) / k.a).sqrt())
}

/// Closed-form protected result at the optimal reversal strength.
pub fn werner_optimal(gamma: f64, d2: f64, p2: f64) -> Result<ProtocolResult> {
    let k = coeffs(gamma, d2, p2)?;
    let q = werner_q_opt(gamma, d2, p2)?;
    // q̄ = t·s, so every term carries t² and f does not depend on t.
    let s = ((k.g + 1.0) / k.a).sqrt();
    let inner = k.a * s * s + 2.0 * k.b * s + (k.g + 1.0);
    let f = (k.a * s * s + 4.0 * k.g * s + (k.g + 1.0)) / (2.0 * inner);
    let p_succ = 0.25 * k.t * k.t * inner;
    let params = ProtocolParams::symmetric(d2, p2, q).with_gamma(k.g);
    Ok(ProtocolResult::new(params, f, p_succ, Some(q)))
}

/// Simulated protected protocol: weak measurement on both qubits, damping on
/// both, reversal on both.
pub fn werner_pipeline(gamma: f64, d2: f64, p2: f64, q2: f64) -> Result<ProtocolResult> {
    let out = double_sided_state(
        werner_state(gamma, Sign::Plus)?,
        DampingParams::symmetric(d2)?,
        Strengths::symmetric(p2, q2),
    )?;
    ProtocolResult::from_outcome(ProtocolParams::symmetric(d2, p2, q2).with_gamma(gamma), &out)
}

/// Numeric optimum of [`werner_pipeline`] over `q2`.
pub fn werner_numeric_optimal(gamma: f64, d2: f64, p2: f64) -> Result<ProtocolResult> {
    let best = optimize_q(|q| Ok(werner_pipeline(gamma, d2, p2, q)?.f))?;
    let r = werner_pipeline(gamma, d2, p2, best.x)?;
    Ok(ProtocolResult { q_opt: Some(best.x), ..r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{case2_optimal, CLASSICAL_FIDELITY};
    use approx::assert_abs_diff_eq;

    /// Expanded FEF with `(p-1)`, `(q-1)` factors.
    fn fef_expanded(g: f64, d: f64, p: f64, q: f64) -> f64 {
        let a = d * d * (p - 1.0).powi(2) * (g + 1.0) + 2.0 * d * (p - 1.0) * (g - 1.0) + g + 1.0;
        let num = (q - 1.0).powi(2) * a - 4.0 * (d - 1.0) * (p - 1.0) * (q - 1.0) * g
            + (d - 1.0).powi(2) * (p - 1.0).powi(2) * (g + 1.0);
        let den = 2.0
            * (q * q * a
                + q * (-2.0 * d * (p - 1.0) * (p * g + p - 2.0) - 2.0 * p * (g - 1.0) - 4.0)
                + p * p * (g + 1.0)
                - 4.0 * p
                + 4.0);
        num / den
    }

    fn q_opt_expanded(g: f64, d: f64, p: f64) -> f64 {
        let a = d * d * (p - 1.0).powi(2) * (g + 1.0) + 2.0 * d * (p - 1.0) * (g - 1.0) + g + 1.0;
        (a - ((d - 1.0).powi(2) * (p - 1.0).powi(2) * (g + 1.0) * a).sqrt()) / a
    }

    fn success_expanded(g: f64, d: f64, p: f64, q: f64) -> f64 {
        let a = d * d * (p - 1.0).powi(2) * (g + 1.0) + 2.0 * d * (p - 1.0) * (g - 1.0) + g + 1.0;
        0.25 * (q * q * a
            + q * (-2.0 * d * (p - 1.0) * (p * g + p - 2.0) + p * (2.0 - 2.0 * g) - 4.0)
            + p * p * (g + 1.0)
            - 4.0 * p
            + 4.0)
    }

    #[test]
    fn rearranged_forms_match_expanded_forms() {
        for &g in &[0.0, 0.3, 0.7, 1.0] {
            for &d in &[0.0, 0.25, 0.6, 0.9] {
                for &p in &[0.0, 0.4, 0.8] {
                    assert_abs_diff_eq!(werner_q_opt(g, d, p).unwrap(), q_opt_expanded(g, d, p), epsilon = 1e-12);
                    for &q in &[0.0, 0.3, 0.75] {
                        assert_abs_diff_eq!(werner_fef(g, d, p, q).unwrap(), fef_expanded(g, d, p, q), epsilon = 1e-12);
                        assert_abs_diff_eq!(
                            werner_success(g, d, p, q).unwrap(),
                            success_expanded(g, d, p, q),
                            epsilon = 1e-12
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn baseline_corner_and_boundary() {
        assert_abs_diff_eq!(werner_baseline(1.0, 0.0).unwrap().f, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(werner_baseline(1.0 / 3.0, 0.0).unwrap().fidelity, CLASSICAL_FIDELITY, epsilon = 1e-15);
        let d = werner_baseline_threshold(0.8);
        assert_abs_diff_eq!(werner_baseline(0.8, d).unwrap().fidelity, CLASSICAL_FIDELITY, epsilon = 1e-14);
    }

    #[test]
    fn baseline_matches_pipeline() {
        let sim = werner_baseline_pipeline(0.8, 0.2).unwrap();
        assert_abs_diff_eq!(sim.f, werner_baseline(0.8, 0.2).unwrap().f, epsilon = 1e-12);
        // (0.04·1.8 - 0.32 + 0.32 + 1.8)/4
        assert_abs_diff_eq!(sim.f, 0.708, epsilon = 1e-12);
    }

    #[test]
    fn pure_limit_reduces_to_case2() {
        for &(d, p) in &[(0.3, 0.1), (0.7, 0.5), (0.95, 0.0)] {
            let w = werner_optimal(1.0, d, p).unwrap();
            let c = case2_optimal(d, p).unwrap();
            assert_abs_diff_eq!(w.f, c.f, epsilon = 1e-12);
            assert_abs_diff_eq!(w.p_succ, c.p_succ, epsilon = 1e-12);
            assert_abs_diff_eq!(w.q_opt.unwrap(), c.q_opt.unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn quantum_condition_example() {
        let thr = werner_quantum_threshold(0.3, 0.4);
        assert_abs_diff_eq!(thr, 1.18 / 2.82, epsilon = 1e-15);
        let r = werner_optimal(0.7, 0.3, 0.4).unwrap();
        assert!(r.fidelity > CLASSICAL_FIDELITY);
        let sim = werner_pipeline(0.7, 0.3, 0.4, r.q_opt.unwrap()).unwrap();
        assert_abs_diff_eq!(sim.f, r.f, epsilon = 1e-9);
        assert_abs_diff_eq!(sim.p_succ, r.p_succ, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_matches_numeric_optimum() {
        let r = werner_optimal(0.8, 0.2, 0.4).unwrap();
        let n = werner_numeric_optimal(0.8, 0.2, 0.4).unwrap();
        assert_abs_diff_eq!(n.q_opt.unwrap(), r.q_opt.unwrap(), epsilon = 1e-6);
        assert_abs_diff_eq!(n.f, r.f, epsilon = 1e-9);
    }
}
