//! Derivative-free maximizers: golden-section search on an interval and
//! Nelder–Mead on a small number of angles.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (√5 - 1) / 2

/// Result of a scalar maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMax {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`, stopping once
/// the bracket is narrower than `xtol`.
///
/// Ties keep the left half, so on a plateau the search drifts to the smallest
/// maximizer. The endpoints themselves are never evaluated.
pub fn golden_section_max<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    lo: f64,
    hi: f64,
    xtol: f64,
) -> Result<ScalarMax, E> {
    assert!(lo <= hi, "empty bracket [{lo}, {hi}]");
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut evaluations = 2;
    while b - a > xtol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
        evaluations += 1;
    }
    let (x, value) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    Ok(ScalarMax { x, value, evaluations })
}

/// Coarse interior scan over `scan_points` equally spaced points, then a
/// golden-section refinement inside the neighbouring cells of the best one.
///
/// The scan guards against functions that are not unimodal on the whole
/// interval. The interval endpoints are never evaluated.
pub fn scan_then_golden<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    lo: f64,
    hi: f64,
    scan_points: usize,
    xtol: f64,
) -> Result<ScalarMax, E> {
    let cells = scan_points.max(1) + 1;
    let h = (hi - lo) / cells as f64;
    let mut best = (1, f64::NEG_INFINITY);
    for k in 1..cells {
        let v = f(lo + h * k as f64)?;
        if v > best.1 {
            best = (k, v);
        }
    }
    let (k, scan_value) = best;
    let a = lo + h * (k - 1) as f64;
    let b = if k + 1 == cells { hi } else { lo + h * (k + 1) as f64 };
    let refined = golden_section_max(&mut f, a, b, xtol)?;
    let evaluations = refined.evaluations + cells - 1;
    if refined.value >= scan_value {
        Ok(ScalarMax { evaluations, ..refined })
    } else {
        Ok(ScalarMax { x: lo + h * k as f64, value: scan_value, evaluations })
    }
}

/// Outcome of a Nelder–Mead run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexMax<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub evaluations: usize,
}

/// Nelder–Mead maximization from `start` with initial step `step` along each
/// axis. Stops when the simplex values agree within `ftol` and the simplex is
/// smaller than `xtol`, or after `max_evals` evaluations.
pub fn nelder_mead_max<const N: usize>(
    f: impl Fn(&[f64; N]) -> f64,
    start: [f64; N],
    step: f64,
    ftol: f64,
    xtol: f64,
    max_evals: usize,
) -> SimplexMax<N> {
    // Work on -f so the textbook minimization steps apply unchanged.
    let g = |x: &[f64; N]| -f(x);
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((start, g(&start)));
    for i in 0..N {
        let mut x = start;
        x[i] += step;
        simplex.push((x, g(&x)));
    }
    let mut evaluations = N + 1;

    while evaluations < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[N].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread.abs() <= ftol && size <= xtol {
            break;
        }

        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for i in 0..N {
                centroid[i] += x[i] / N as f64;
            }
        }
        let along = |t: f64| {
            let mut x = [0.0; N];
            for i in 0..N {
                x[i] = centroid[i] + t * (simplex[N].0[i] - centroid[i]);
            }
            x
        };

        let xr = along(-1.0);
        let fr = g(&xr);
        evaluations += 1;
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = g(&xe);
            evaluations += 1;
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[N].1 {
                let x = along(-0.5);
                (x, g(&x))
            } else {
                let x = along(0.5);
                (x, g(&x))
            };
            evaluations += 1;
            if fc < simplex[N].1.min(fr) {
                simplex[N] = (xc, fc);
            } else {
                let best = simplex[0].0;
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for i in 0..N {
                        x[i] = best[i] + 0.5 * (x[i] - best[i]);
                    }
                    *fx = g(x);
                }
                evaluations += N;
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    SimplexMax { x: simplex[0].0, value: -simplex[0].1, evaluations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn ok(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> Result<f64, Infallible> {
        move |x| Ok(f(x))
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let r = golden_section_max(ok(|x| -(x - 0.3137).powi(2)), 0.0, 1.0, 1e-10).unwrap();
        assert!((r.x - 0.3137).abs() < 1e-9);
    }

    #[test]
    fn golden_handles_boundary_maximum() {
        let r = golden_section_max(ok(|x| -x), 0.0, 1.0, 1e-9).unwrap();
        assert!(r.x < 1e-8);
        let r = golden_section_max(ok(|x| x), 0.0, 1.0, 1e-9).unwrap();
        assert!(r.x > 1.0 - 1e-8);
    }

    #[test]
    fn golden_plateau_drifts_left() {
        let r = golden_section_max(ok(|_| 1.0), 0.2, 0.9, 1e-9).unwrap();
        assert!(r.x - 0.2 < 1e-8);
        let r = golden_section_max(ok(|x| if x < 0.5 { x } else { 0.5 }), 0.0, 1.0, 1e-9).unwrap();
        assert!((r.x - 0.5).abs() < 1e-8);
    }

    #[test]
    fn golden_propagates_errors() {
        let r = golden_section_max(|x| if x > 0.5 { Err("boom") } else { Ok(x) }, 0.0, 1.0, 1e-6);
        assert_eq!(r.unwrap_err(), "boom");
    }

    #[test]
    fn scan_escapes_local_maximum() {
        // local max at 0.1, global max at 0.8
        let f = |x: f64| (-(x - 0.1).powi(2) * 400.0).exp() * 0.5 + (-(x - 0.8).powi(2) * 400.0).exp();
        let r = golden_section_max(ok(f), 0.0, 1.0, 1e-9).unwrap();
        let s = scan_then_golden(ok(f), 0.0, 1.0, 64, 1e-9).unwrap();
        assert!((s.x - 0.8).abs() < 1e-6, "{s:?}");
        assert!(s.value >= r.value);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let f = |x: &[f64; 2]| -((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2));
        let r = nelder_mead_max(f, [-1.2, 1.0], 0.5, 1e-20, 1e-12, 20_000);
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6, "{r:?}");
    }
}
