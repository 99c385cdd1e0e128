//! Seeded random states and unitaries for oracle checks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::qmat::{c, ComplexMatrix, DensityMatrix, C64};

fn gaussian(rng: &mut impl Rng) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Hilbert–Schmidt random two-qubit state, `G G† / Tr(G G†)` with complex
/// Gaussian `G`.
pub fn random_density_matrix(rng: &mut impl Rng) -> DensityMatrix {
    let g = ComplexMatrix::new(4, 4, (0..16).map(|_| gaussian(rng)).collect()).expect("4x4");
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr)).expect("Gram matrix is a state")
}

/// Haar-random element of SU(2) from a uniformly random unit quaternion.
pub fn random_unitary2(rng: &mut impl Rng) -> ComplexMatrix {
    let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, cc, d] = v.map(|x| x / n);
    ComplexMatrix::from_rows([[c(a, b), c(cc, d)], [c(-cc, d), c(a, -b)]]).expect("2x2")
}

/// Random product state `ρ_A ⊗ ρ_B`.
pub fn random_product_state(rng: &mut impl Rng) -> DensityMatrix {
    let mut qubit = || {
        let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r: f64 = rng.gen::<f64>().cbrt() / n;
        let [x, y, z] = v.map(|t| t * r);
        ComplexMatrix::from_rows([
            [c((1.0 + z) / 2.0, 0.0), c(x / 2.0, -y / 2.0)],
            [c(x / 2.0, y / 2.0), c((1.0 - z) / 2.0, 0.0)],
        ])
        .expect("2x2")
    };
    let (a, b) = (qubit(), qubit());
    DensityMatrix::new(crate::qmat::kron(&a, &b).expect("2x2 factors")).expect("product of states")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rho = random_density_matrix(&mut rng);
            assert!((rho.trace() - 1.0).abs() < 1e-12);
            let u = random_unitary2(&mut rng);
            assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
            assert!((random_product_state(&mut rng).trace() - 1.0).abs() < 1e-12);
        }
    }
}
