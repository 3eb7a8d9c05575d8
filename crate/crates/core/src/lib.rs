//! Pure multi-qubit states that realize prescribed entangled graphs.
//!
//! An entangled graph has one vertex per qubit and an edge wherever the
//! two-qubit reduced state of that pair is inseparable. This crate builds
//! states for any such graph ([`statesynth::synthesize`]) and checks them by
//! computing concurrence and partial-transpose spectra for every pair
//! ([`entanganalysis::realized_graph`]).

pub mod cmatrix;
pub mod entanganalysis;
pub mod graphio;
pub mod io;
pub mod random;
pub mod selftest;
pub mod statesynth;

pub use cmatrix::{ComplexMatrix, MatrixError, Spectrum};
pub use entanganalysis::{
    concurrence, pt_min_eigenvalue, realized_graph, reduce_pair, reduce_pair_ensemble,
    verify_realization, AnalysisError, AnalysisReport, PairReport, StateRef, TwoQubitDensity,
};
pub use graphio::{emit_dot, graph_stats, parse_graph, EntangledGraph, GraphError, GraphStats};
pub use io::{IoError, LoadedState};
pub use statesynth::{
    default_params, general_construction, synthesize, PureEnsemble, StateError, StateVector,
    SynthesisParams,
};
