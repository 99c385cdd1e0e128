//! Direct simulation of one-qubit teleportation through a shared two-qubit
//! resource.
//!
//! The sender holds the input qubit and the first resource qubit, the
//! receiver the second. The sender measures in the basis
//! `|Φ_k⟩ = (I ⊗ σ_k)|ψ+⟩`; the receiver undoes the outcome with
//! `σ_kᵀ V†`, where `V` rotates `|ψ+⟩` onto the resource's best maximally
//! entangled state. All four outcomes are summed, so the returned fidelity is
//! the outcome-averaged one.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::fef::fef_closed;
use crate::qmat::{c, ComplexMatrix, DensityMatrix, C64, NORMALIZED_TOL};

/// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputQubit {
    theta: f64,
    phi: f64,
}

impl InputQubit {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::OutOfRange { name: "theta", value: theta });
        }
        if !phi.is_finite() || !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::OutOfRange { name: "phi", value: phi });
        }
        Ok(Self { theta, phi })
    }

    /// Build from a Bloch vector; the vector is normalized.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = (x * x + y * y + z * z).sqrt();
        if !r.is_finite() || r == 0.0 {
            return Err(Error::InvalidInput(format!("degenerate Bloch vector ({x}, {y}, {z})")));
        }
        let theta = (z / r).clamp(-1.0, 1.0).acos();
        let phi = y.atan2(x).rem_euclid(2.0 * PI);
        // rem_euclid can round up to exactly 2π.
        Self::new(theta, if phi >= 2.0 * PI { 0.0 } else { phi })
    }

    /// `±z`, `±x`, `±y`.
    pub fn cardinal_states() -> [InputQubit; 6] {
        let h = PI / 2.0;
        [
            Self { theta: 0.0, phi: 0.0 },
            Self { theta: PI, phi: 0.0 },
            Self { theta: h, phi: 0.0 },
            Self { theta: h, phi: PI },
            Self { theta: h, phi: h },
            Self { theta: h, phi: 3.0 * h },
        ]
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        [c((self.theta / 2.0).cos(), 0.0), C64::from_polar((self.theta / 2.0).sin(), self.phi)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportReport {
    /// Fidelities for `+z, -z, +x, -x, +y, -y`.
    pub per_input: [f64; 6],
    pub average: f64,
    /// Fully entangled fraction of the resource.
    pub fef: f64,
    /// `(2f + 1)/3`.
    pub predicted: f64,
}

/// The `V` with `(I ⊗ V)|ψ+⟩ = witness`, i.e. `V = √2 Wᵀ` for the amplitude
/// matrix `W[i][j] = w_{2i+j}`.
pub fn alignment_from_witness(witness: &[C64; 4]) -> ComplexMatrix {
    ComplexMatrix::from_rows([[witness[0] * SQRT_2, witness[2] * SQRT_2], [witness[1] * SQRT_2, witness[3] * SQRT_2]])
        .expect("2x2")
}

fn paulis() -> [ComplexMatrix; 4] {
    [ComplexMatrix::identity(2), ComplexMatrix::pauli_x(), ComplexMatrix::pauli_y(), ComplexMatrix::pauli_z()]
}

/// Fidelity `Σ_k ⟨ψ|C_k ρ_k C_k†|ψ⟩` of teleporting `input` with receiver
/// frame `v`.
pub fn teleport_once(resource: &DensityMatrix, input: InputQubit, v: &ComplexMatrix) -> Result<f64> {
    if resource.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: "4x4".into(), actual: format!("{0}x{0}", resource.dim()) });
    }
    if v.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: "2x2".into(), actual: format!("{0}x{0}", v.dim()) });
    }
    if !resource.is_normalized() {
        return Err(Error::NotNormalized { trace: resource.trace() });
    }
    let unitarity = (&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(2));
    if unitarity > NORMALIZED_TOL {
        return Err(Error::InvalidInput(format!("alignment is not unitary (deviation {unitarity:e})")));
    }
    let psi = input.amplitudes();
    let rho = resource.matrix();
    let mut total = 0.0;
    for sigma in paulis() {
        // Measurement vector Φ_k[x][y] = σ[y][x]/√2.
        let phi = |x: usize, y: usize| sigma[(y, x)] * FRAC_1_SQRT_2;
        let mut bob = ComplexMatrix::zeros(2);
        for b in 0..2 {
            for b2 in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for (x, px) in psi.iter().enumerate() {
                    for y in 0..2 {
                        let left = phi(x, y).conj() * px;
                        for (x2, px2) in psi.iter().enumerate() {
                            for y2 in 0..2 {
                                let right = phi(x2, y2) * px2.conj();
                                acc += left * right * rho[(2 * y + b, 2 * y2 + b2)];
                            }
                        }
                    }
                }
                bob[(b, b2)] = acc;
            }
        }
        let correction = &sigma.transpose() * &v.adjoint();
        let out = correction.conjugate(&bob);
        let applied = out.apply(&psi);
        total += psi.iter().zip(&applied).map(|(a, b)| a.conj() * b).sum::<C64>().re;
    }
    Ok(total)
}

/// Six-state average fidelity with corrections aligned to the resource's
/// witness, alongside the fidelity predicted from its FEF.
pub fn average_fidelity(resource: &DensityMatrix) -> Result<TeleportReport> {
    let fef = fef_closed(resource)?;
    let v = alignment_from_witness(&fef.witness);
    let mut per_input = [0.0; 6];
    for (slot, input) in per_input.iter_mut().zip(InputQubit::cardinal_states()) {
        *slot = teleport_once(resource, input, &v)?;
    }
    Ok(TeleportReport { per_input, average: per_input.iter().sum::<f64>() / 6.0, fef: fef.f, predicted: fef.fidelity })
}
