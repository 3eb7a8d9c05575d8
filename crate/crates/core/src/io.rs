//! JSON file formats for states, ensembles and analysis reports.
//!
//! State: `{"n_qubits": N, "amplitudes": [[re, im], ...]}` in basis-index order.
//! Ensemble: `{"n_qubits": N, "components": [{"weight": w, "amplitudes": [...]}]}`.
//! Report: per-pair concurrence and PT minimum plus realized / target edges.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entanganalysis::{AnalysisReport, StateRef};
use crate::graphio::Edge;
use crate::statesynth::{PureEnsemble, StateError, StateVector};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("declared n_qubits = {declared} but a component has {found}")]
    QubitMismatch { declared: usize, found: usize },
}

#[derive(Debug, Serialize, Deserialize)]
struct StateJson {
    n_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ComponentJson {
    weight: f64,
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EnsembleJson {
    n_qubits: usize,
    components: Vec<ComponentJson>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyStateJson {
    Ensemble(EnsembleJson),
    Pure(StateJson),
}

#[derive(Debug, Serialize)]
struct PairJson {
    i: usize,
    j: usize,
    concurrence: f64,
    pt_min: f64,
    entangled: bool,
}

#[derive(Debug, Serialize)]
struct ReportJson {
    n_qubits: usize,
    pairs: Vec<PairJson>,
    realized_edges: Vec<Edge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_edges: Option<Vec<Edge>>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    matched: Option<bool>,
}

/// A state file's content: either a pure state or an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedState {
    Pure(StateVector),
    Ensemble(PureEnsemble),
}

impl LoadedState {
    pub fn as_state_ref(&self) -> StateRef<'_> {
        match self {
            LoadedState::Pure(s) => StateRef::Pure(s),
            LoadedState::Ensemble(e) => StateRef::Ensemble(e),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.as_state_ref().n_qubits()
    }
}

fn encode(s: &StateVector) -> Vec<[f64; 2]> {
    s.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

fn decode(n: usize, amps: Vec<[f64; 2]>) -> Result<StateVector, StateError> {
    StateVector::new(
        n,
        amps.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
    )
}

pub fn state_to_json(s: &StateVector) -> String {
    serde_json::to_string_pretty(&StateJson {
        n_qubits: s.n_qubits(),
        amplitudes: encode(s),
    })
    .expect("state serializes")
}

pub fn ensemble_to_json(e: &PureEnsemble) -> String {
    serde_json::to_string_pretty(&EnsembleJson {
        n_qubits: e.n_qubits(),
        components: e
            .components()
            .iter()
            .map(|(w, s)| ComponentJson {
                weight: *w,
                amplitudes: encode(s),
            })
            .collect(),
    })
    .expect("ensemble serializes")
}

/// Parses either file format; normalization and weights are validated.
pub fn parse_state_json(text: &str) -> Result<LoadedState, IoError> {
    match serde_json::from_str::<AnyStateJson>(text)? {
        AnyStateJson::Pure(s) => Ok(LoadedState::Pure(decode(s.n_qubits, s.amplitudes)?)),
        AnyStateJson::Ensemble(e) => {
            let declared = e.n_qubits;
            let components = e
                .components
                .into_iter()
                .map(|c| Ok((c.weight, decode(declared, c.amplitudes)?)))
                .collect::<Result<Vec<_>, IoError>>()?;
            let ensemble = PureEnsemble::new(components)?;
            if ensemble.n_qubits() != declared {
                return Err(IoError::QubitMismatch {
                    declared,
                    found: ensemble.n_qubits(),
                });
            }
            Ok(LoadedState::Ensemble(ensemble))
        }
    }
}

/// Rounds to 12 significant digits.
fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn report_to_json(r: &AnalysisReport) -> String {
    let json = ReportJson {
        n_qubits: r.n_qubits(),
        pairs: r
            .pairs()
            .iter()
            .map(|p| PairJson {
                i: p.pair.0,
                j: p.pair.1,
                concurrence: sig12(p.concurrence),
                pt_min: sig12(p.pt_min_eigenvalue),
                entangled: p.is_entangled,
            })
            .collect(),
        realized_edges: r.realized_graph().edges().iter().copied().collect(),
        target_edges: r.target_graph().map(|t| t.edges().iter().copied().collect()),
        matched: r.match_flag(),
    };
    serde_json::to_string_pretty(&json).expect("report serializes")
}
