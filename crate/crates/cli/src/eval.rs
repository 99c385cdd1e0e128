//! Evaluate one parameter point: closed form, simulated pipeline, baseline.

use std::collections::BTreeMap;

use qtwm_core::channels::{adc_channel, apply_channel, MeasurementOutcome};
use qtwm_core::fef::fef_closed;
use qtwm_core::protocols::*;
use qtwm_core::{DampingParams, ProtocolResult, Qubit};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::spec::{Point, Protocol};

/// Largest allowed closed-form vs pipeline difference in `f` and `P_succ`.
pub const PIPELINE_TOL: f64 = 1e-8;

/// Below this success probability the optimal reversal strength cannot be
/// told apart from 1 in double precision, so the pipeline is not compared.
pub const MIN_COMPARED_SUCCESS: f64 = 1e-12;

/// One dataset row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub params: BTreeMap<String, f64>,
    pub q_opt: Option<f64>,
    pub f: f64,
    #[serde(rename = "F")]
    pub fidelity: f64,
    #[serde(rename = "P_succ")]
    pub p_succ: f64,
    pub f_baseline: f64,
    #[serde(rename = "F_baseline")]
    pub fidelity_baseline: f64,
    pub classical: bool,
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub closed: ProtocolResult,
    /// Simulated result at the same reversal strength, when it was compared.
    pub pipeline: Option<ProtocolResult>,
    pub baseline: ProtocolResult,
}

impl Evaluation {
    pub fn row(&self, point: &Point) -> Row {
        let c = &self.closed;
        Row {
            params: point.clone(),
            q_opt: c.q_opt,
            f: c.f,
            fidelity: c.fidelity,
            p_succ: c.p_succ,
            f_baseline: self.baseline.f,
            fidelity_baseline: self.baseline.fidelity,
            classical: c.is_classical(),
        }
    }
}

fn get(point: &Point, name: &str) -> f64 {
    *point.get(name).unwrap_or_else(|| panic!("validated point lacks {name}"))
}

fn closed_form(protocol: Protocol, point: &Point) -> qtwm_core::Result<ProtocolResult> {
    match protocol {
        Protocol::Case1 => case1_optimal(get(point, "D2"), get(point, "p2")),
        Protocol::Case1Baseline => case1_baseline(get(point, "D2")),
        Protocol::Case1BobOnly => case1_bob_only(get(point, "D2")),
        Protocol::Case2 => case2_optimal(get(point, "D"), get(point, "p")),
        Protocol::Case2Baseline => case2_baseline(BellClass::PSI_PLUS, get(point, "D")),
        Protocol::Werner => werner_optimal(get(point, "gamma"), get(point, "D2"), get(point, "p2")),
        Protocol::Badziag => badziag_enhance(get(point, "D")),
    }
}

fn baseline(protocol: Protocol, point: &Point) -> qtwm_core::Result<ProtocolResult> {
    match protocol {
        Protocol::Case1 | Protocol::Case1Baseline | Protocol::Case1BobOnly => case1_baseline(get(point, "D2")),
        Protocol::Case2 | Protocol::Case2Baseline => case2_baseline(BellClass::PSI_PLUS, get(point, "D")),
        Protocol::Werner => werner_baseline(get(point, "gamma"), get(point, "D2")),
        Protocol::Badziag => badziag_enhance(0.0),
    }
}

/// The simulated post-selected state behind `protocol` at `point`, with
/// reversal strength `q` where the protocol has one.
pub fn pipeline_state(protocol: Protocol, point: &Point, q: Option<f64>) -> qtwm_core::Result<MeasurementOutcome> {
    let q = q.unwrap_or(0.0);
    let bell = BellClass::PSI_PLUS;
    match protocol {
        Protocol::Case1 => case1_state(bell, get(point, "D2"), get(point, "p2"), q),
        Protocol::Case1BobOnly => case1_state(bell, get(point, "D2"), 0.0, q),
        Protocol::Case1Baseline => case1_state(bell, get(point, "D2"), 0.0, 0.0),
        Protocol::Case2 => {
            let d = get(point, "D");
            case2_state(bell, DampingParams::symmetric(d)?, Strengths::symmetric(get(point, "p"), q))
        }
        Protocol::Case2Baseline => {
            case2_state(bell, DampingParams::symmetric(get(point, "D"))?, Strengths::symmetric(0.0, 0.0))
        }
        Protocol::Werner => double_sided_state(
            werner_state(get(point, "gamma"), Sign::Plus)?,
            DampingParams::symmetric(get(point, "D2"))?,
            Strengths::symmetric(get(point, "p2"), q),
        ),
        Protocol::Badziag => {
            let rho = apply_channel(&badziag_state(), &adc_channel(get(point, "D"))?, Qubit::Two)?;
            Ok(MeasurementOutcome::start(rho))
        }
    }
}

/// Evaluate a validated point. A closed-form vs pipeline disagreement beyond
/// [`PIPELINE_TOL`] is an invariant breach.
pub fn evaluate(protocol: Protocol, point: &Point) -> Result<Evaluation, CliError> {
    let closed = closed_form(protocol, point).map_err(CliError::from_eval)?;
    let baseline = baseline(protocol, point).map_err(CliError::from_eval)?;
    let pipeline = if closed.p_succ >= MIN_COMPARED_SUCCESS {
        let out = pipeline_state(protocol, point, closed.q_opt).map_err(CliError::from_eval)?;
        let f = fef_closed(&out.state).map_err(CliError::from_eval)?.f;
        Some(ProtocolResult::new(closed.params, f, out.success_prob, closed.q_opt))
    } else {
        None
    };
    if let Some(sim) = &pipeline {
        let (df, dp) = ((sim.f - closed.f).abs(), (sim.p_succ - closed.p_succ).abs());
        if df > PIPELINE_TOL || dp > PIPELINE_TOL {
            return Err(CliError::Breach(format!(
                "{protocol} at {}: closed form (f={}, P={}) vs pipeline (f={}, P={})",
                describe(point),
                closed.f,
                closed.p_succ,
                sim.f,
                sim.p_succ
            )));
        }
    }
    Ok(Evaluation { closed, pipeline, baseline })
}

pub fn describe(point: &Point) -> String {
    point.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}
