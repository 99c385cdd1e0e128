//! Parallel grid evaluation with deterministic row order.

use qtwm_core::fef::{fef_brute, fef_closed, BruteBudget};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::CliError;
use crate::eval::{describe, evaluate, pipeline_state, Row};
use crate::spec::SweepSpec;

/// Grid points re-checked against the brute-force FEF per sweep.
pub const SPOT_CHECKS: usize = 4;
/// Largest allowed closed vs brute-force FEF difference on a spot check.
pub const SPOT_TOL: f64 = 1e-6;

pub fn run_sweep(spec: &SweepSpec, workers: Option<usize>, seed: u64) -> Result<Vec<Row>, CliError> {
    let points = spec.points();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let evaluated: Vec<Result<Row, CliError>> =
        pool.install(|| points.par_iter().map(|p| evaluate(spec.protocol, p).map(|e| e.row(p))).collect());
    let rows = evaluated.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = sample(&mut rng, rows.len(), SPOT_CHECKS.min(rows.len())).into_vec();
    let checks: Vec<Result<(), CliError>> = pool.install(|| {
        picks
            .par_iter()
            .map(|&i| {
                let row = &rows[i];
                if row.p_succ <= 0.0 {
                    return Ok(());
                }
                let out = pipeline_state(spec.protocol, &row.params, row.q_opt).map_err(CliError::from_eval)?;
                let closed = fef_closed(&out.state).map_err(CliError::from_eval)?.f;
                let brute = fef_brute(&out.state, &BruteBudget::default()).map_err(CliError::from_eval)?.f;
                if (closed - brute).abs() > SPOT_TOL {
                    return Err(CliError::Breach(format!(
                        "{} at {}: closed FEF {closed} vs brute-force {brute}",
                        spec.protocol,
                        describe(&row.params)
                    )));
                }
                Ok(())
            })
            .collect()
    });
    checks.into_iter().collect::<Result<(), _>>()?;
    Ok(rows)
}
