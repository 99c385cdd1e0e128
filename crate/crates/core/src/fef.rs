//! Fully entangled fraction of two-qubit states.
//!
//! Two independent routes are provided. [`fef_closed`] diagonalizes the real
//! part of the state written in the magic basis, where every maximally
//! entangled state has real coefficients up to a global phase. [`fef_brute`]
//! searches directly over `(I ⊗ U)|ψ+⟩` with `U ∈ SU(2)` in Euler angles and
//! serves as the oracle for the first.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::optimize::nelder_mead_max;
use crate::qmat::{c, hermitian_eigen, partial_trace, ComplexMatrix, DensityMatrix, Qubit, C64};

/// Tolerance on the witness checks performed on every evaluation.
pub const WITNESS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct FefResult {
    /// Fully entangled fraction of the normalized state.
    pub f: f64,
    /// Teleportation fidelity `(2f + 1)/3`.
    pub fidelity: f64,
    /// A maximally entangled state attaining `f`. Only `f` is unique; the
    /// witness is one of possibly many maximizers.
    pub witness: [C64; 4],
}

impl FefResult {
    fn new(f: f64, witness: [C64; 4]) -> Self {
        let f = f.clamp(0.0, 1.0);
        Self { f, fidelity: (2.0 * f + 1.0) / 3.0, witness }
    }
}

/// Teleportation fidelity of the optimal standard protocol, `(2f + 1)/3`.
pub fn fidelity_from_fef(f: f64) -> Result<f64> {
    let f = crate::error::check_unit("f", f)?;
    Ok((2.0 * f + 1.0) / 3.0)
}

/// Columns are `(|00⟩+|11⟩)/√2`, `i(|00⟩-|11⟩)/√2`, `i(|01⟩+|10⟩)/√2`,
/// `(|01⟩-|10⟩)/√2`.
pub fn magic_basis() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    ComplexMatrix::from_rows([
        [c(s, 0.0), c(0.0, s), z, z],
        [z, z, c(0.0, s), c(s, 0.0)],
        [z, z, c(0.0, s), c(-s, 0.0)],
        [c(s, 0.0), c(0.0, -s), z, z],
    ])
    .expect("static magic basis")
}

fn expectation(rho: &ComplexMatrix, v: &[C64; 4]) -> f64 {
    let rv = rho.apply(v);
    v.iter().zip(&rv).map(|(a, b)| a.conj() * b).sum::<C64>().re
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: "4x4".into(), actual: format!("{0}x{0}", rho.dim()) });
    }
    Ok(())
}

/// Check that `witness` is maximally entangled and attains `f` on `rho`.
fn verify_witness(rho: &DensityMatrix, result: &FefResult) -> Result<()> {
    let overlap = expectation(rho.matrix(), &result.witness);
    if (overlap - result.f).abs() > WITNESS_TOL {
        return Err(Error::InvariantBreach(format!("witness overlap {overlap} differs from f = {}", result.f)));
    }
    let proj = DensityMatrix::pure(&result.witness)?;
    let half = ComplexMatrix::identity(2).scale(0.5);
    for q in Qubit::BOTH {
        let dev = partial_trace(&proj, q)?.matrix().max_abs_diff(&half);
        if dev > WITNESS_TOL {
            return Err(Error::InvariantBreach(format!(
                "witness marginal on qubit {} deviates from I/2 by {dev:e}",
                q.index()
            )));
        }
    }
    Ok(())
}

/// FEF by the magic-basis eigenvalue method. Unnormalized inputs are
/// normalized by their trace first.
pub fn fef_closed(rho: &DensityMatrix) -> Result<FefResult> {
    require_two_qubit(rho)?;
    let rho = rho.normalize();
    let basis = magic_basis();
    let in_magic = &(&basis.adjoint() * rho.matrix()) * &basis;
    let real_part = ComplexMatrix::new(4, 4, in_magic.as_slice().iter().map(|z| c(z.re, 0.0)).collect())?;
    let eig = hermitian_eigen(&real_part)?;
    let top: Vec<f64> = eig.vector(0).iter().map(|z| z.re).collect();
    let norm = top.iter().map(|x| x * x).sum::<f64>().sqrt();
    let coeffs: Vec<C64> = top.iter().map(|&x| c(x / norm, 0.0)).collect();
    let w = basis.apply(&coeffs);
    let result = FefResult::new(eig.values[0], [w[0], w[1], w[2], w[3]]);
    verify_witness(&rho, &result)?;
    Ok(result)
}

/// Search budget for [`fef_brute`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteBudget {
    /// Starting grid over the three Euler angles; at least 32 points in total.
    pub grid: [usize; 3],
    /// Nelder–Mead evaluation cap per start.
    pub max_evals: usize,
    /// Convergence threshold on the simplex size, in radians.
    pub xtol: f64,
}

impl Default for BruteBudget {
    fn default() -> Self {
        Self { grid: [4, 2, 4], max_evals: 3000, xtol: 1e-9 }
    }
}

impl BruteBudget {
    pub fn starts(&self) -> usize {
        self.grid.iter().product()
    }
}

/// `Rz(α) Ry(β) Rz(δ)`.
pub fn su2_from_euler(alpha: f64, beta: f64, delta: f64) -> ComplexMatrix {
    let (cb, sb) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let e = |t: f64| C64::from_polar(1.0, t);
    ComplexMatrix::from_rows([
        [e(-(alpha + delta) / 2.0) * cb, -e(-(alpha - delta) / 2.0) * sb],
        [e((alpha - delta) / 2.0) * sb, e((alpha + delta) / 2.0) * cb],
    ])
    .expect("2x2")
}

/// `(I ⊗ U)|ψ+⟩`; its `(i, j)` amplitude is `U[j][i]/√2`.
pub fn rotated_bell(u: &ComplexMatrix) -> [C64; 4] {
    let s = FRAC_1_SQRT_2;
    [u[(0, 0)] * s, u[(1, 0)] * s, u[(0, 1)] * s, u[(1, 1)] * s]
}

/// FEF by direct maximization of `⟨φ|ρ|φ⟩` over `φ = (I ⊗ U)|ψ+⟩`,
/// multi-start Nelder–Mead from a grid of Euler angles.
pub fn fef_brute(rho: &DensityMatrix, budget: &BruteBudget) -> Result<FefResult> {
    require_two_qubit(rho)?;
    if budget.starts() < 32 {
        return Err(Error::InvalidInput(format!("brute-force FEF needs at least 32 starts, got {}", budget.starts())));
    }
    let rho = rho.normalize();
    let m = rho.matrix();
    let objective = |x: &[f64; 3]| expectation(m, &rotated_bell(&su2_from_euler(x[0], x[1], x[2])));

    let [na, nb, nd] = budget.grid;
    let mut best: Option<([f64; 3], f64)> = None;
    for i in 0..na {
        for j in 0..nb {
            for k in 0..nd {
                let start = [
                    2.0 * PI * (i as f64 + 0.25) / na as f64,
                    PI * (j as f64 + 0.5) / nb as f64,
                    2.0 * PI * (k as f64 + 0.25) / nd as f64,
                ];
                let r = nelder_mead_max(objective, start, 0.4, 1e-16, budget.xtol, budget.max_evals);
                if best.is_none_or(|(_, v)| r.value > v) {
                    best = Some((r.x, r.value));
                }
            }
        }
    }
    let (x, value) = best.expect("at least one start");
    let result = FefResult::new(value, rotated_bell(&su2_from_euler(x[0], x[1], x[2])));
    verify_witness(&rho, &result)?;
    Ok(result)
}
