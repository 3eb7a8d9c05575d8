//! Fixed inputs shared by the benchmarks.

use entgraph::{EntangledGraph, StateVector, TwoQubitDensity};

/// Deterministic graph on `n` vertices: edge `(i, j)` present when `i + j` is odd.
pub fn alternating_graph(n: usize) -> EntangledGraph {
    let edges = entgraph::graphio::all_pairs(n)
        .into_iter()
        .filter(|(i, j)| (i + j) % 2 == 1);
    EntangledGraph::new(n, edges).expect("valid edges")
}

pub fn synthesized_state(n: usize) -> StateVector {
    entgraph::synthesize(&alternating_graph(n))
        .expect("synthesizable")
        .state
}

pub fn sample_density() -> TwoQubitDensity {
    let s = entgraph::statesynth::w_state(3).expect("valid n");
    entgraph::reduce_pair(&s, 1, 2).expect("valid pair")
}
