mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use entgraph::cmatrix::{
    adjoint, hermitian_eigenvalues, hermitian_sqrt, multiply, partial_transpose_second,
};
use entgraph::entanganalysis::validate_params;
use entgraph::graphio::all_pairs;
use entgraph::selftest::{self, SelftestConfig};
use entgraph::statesynth::permute_qubits;
use entgraph::{
    concurrence, default_params, general_construction, parse_graph, realized_graph, reduce_pair,
    ComplexMatrix, EntangledGraph, StateRef, StateVector, TwoQubitDensity,
};

fn matrix(n: usize, scale: f64) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-scale..scale, 2 * n * n).prop_map(move |v| {
        let data = v.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        ComplexMatrix::from_vec(n, n, data).unwrap()
    })
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n, 1.0).prop_map(|a| a.add(&adjoint(&a)).unwrap().scale(0.5))
}

fn sized_hermitian() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..=8).prop_flat_map(hermitian)
}

fn graph() -> impl Strategy<Value = EntangledGraph> {
    (2usize..=7).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (0..1u64 << pairs).prop_map(move |mask| EntangledGraph::from_mask(n, mask).unwrap())
    })
}

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec(-1.0..1.0f64, 2 << n)
        .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
        .prop_map(move |v| {
            let amps: Vec<Complex64> = v.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
            let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            StateVector::new(n, amps.into_iter().map(|z| z / norm).collect()).unwrap()
        })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
}

fn density() -> impl Strategy<Value = TwoQubitDensity> {
    matrix(4, 1.0).prop_map(|a| {
        let rho = multiply(&a, &adjoint(&a)).unwrap();
        let tr = rho.trace().re;
        TwoQubitDensity::new(rho.scale(1.0 / tr), (1, 2)).unwrap()
    })
}

fn flip(rho: &TwoQubitDensity, first: bool, second: bool) -> TwoQubitDensity {
    let mask = (usize::from(first) << 1) | usize::from(second);
    let m = ComplexMatrix::from_vec(4, 4, (0..16).map(|t| rho.entry((t / 4) ^ mask, (t % 4) ^ mask)).collect()).unwrap();
    TwoQubitDensity::new(m, rho.pair()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn graph_text_round_trip(g in graph()) {
        prop_assert_eq!(parse_graph(&g.serialize()).unwrap(), g);
    }

    #[test]
    fn degrees_sum_to_twice_the_edges(g in graph()) {
        let total: usize = (1..=g.n_vertices()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn eigenvalues_sum_to_trace(m in sized_hermitian()) {
        let spec = hermitian_eigenvalues(&m).unwrap();
        prop_assert!((spec.sum() - m.trace().re).abs() < 1e-12);
    }

    #[test]
    fn square_root_squares_back(a in (1usize..=6).prop_flat_map(|n| matrix(n, 1.0))) {
        let psd = multiply(&a, &adjoint(&a)).unwrap();
        let root = hermitian_sqrt(&psd).unwrap();
        let back = multiply(&root, &root).unwrap();
        prop_assert!(back.sub(&psd).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn partial_transpose_is_a_trace_preserving_involution(m in hermitian(4)) {
        let pt = partial_transpose_second(&m).unwrap();
        prop_assert_eq!(partial_transpose_second(&pt).unwrap(), m.clone());
        prop_assert!((pt.trace() - m.trace()).norm() < 1e-15);
        prop_assert!(pt.hermitian_deviation() < 1e-15);
    }

    #[test]
    fn multiplication_is_associative(a in matrix(4, 0.5), b in matrix(4, 0.5), c in matrix(4, 0.5)) {
        let left = multiply(&multiply(&a, &b).unwrap(), &c).unwrap();
        let right = multiply(&a, &multiply(&b, &c).unwrap()).unwrap();
        prop_assert!(left.sub(&right).unwrap().max_abs() < 5e-15);
    }

    #[test]
    fn concurrence_is_invariant_under_local_flips(rho in density()) {
        let c = concurrence(&rho).unwrap();
        for (first, second) in [(true, true), (true, false), (false, true)] {
            let flipped = concurrence(&flip(&rho, first, second)).unwrap();
            prop_assert!((c - flipped).abs() < 1e-10);
        }
    }

    #[test]
    fn reductions_are_valid_densities(s in (2usize..=5).prop_flat_map(state)) {
        for (i, j) in all_pairs(s.n_qubits()) {
            prop_assert!(reduce_pair(&s, i, j).is_ok());
        }
    }

    #[test]
    fn permutation_preserves_amplitudes(
        (s, perm) in (2usize..=5).prop_flat_map(|n| (state(n), permutation(n)))
    ) {
        let moved = permute_qubits(&s, &perm).unwrap();
        let key = |v: &StateVector| {
            let mut amps: Vec<(u64, u64)> = v.amplitudes().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect();
            amps.sort_unstable();
            amps
        };
        prop_assert_eq!(key(&moved), key(&s));
        prop_assert!((moved.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn realized_graph_follows_qubit_permutations(
        (g, perm) in (5usize..=6).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            ((1..1u64 << pairs).prop_map(move |m| EntangledGraph::from_mask(n, m).unwrap()), permutation(n))
        })
    ) {
        let s = general_construction(&g, &default_params(g.edge_count()).unwrap()).unwrap();
        let before = realized_graph(&StateRef::Pure(&s)).unwrap();
        let moved = permute_qubits(&s, &perm).unwrap();
        let after = realized_graph(&StateRef::Pure(&moved)).unwrap();
        prop_assert_eq!(after.realized_graph(), &before.realized_graph().relabel(&perm).unwrap());
    }

    #[test]
    fn general_construction_separates_non_edges(
        g in (5usize..=7).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (1..1u64 << pairs).prop_map(move |m| EntangledGraph::from_mask(n, m).unwrap())
        })
    ) {
        let s = general_construction(&g, &default_params(g.edge_count()).unwrap()).unwrap();
        for (i, j) in all_pairs(g.n_vertices()) {
            let c = concurrence(&reduce_pair(&s, i, j).unwrap()).unwrap();
            if g.has_edge(i, j) {
                prop_assert!(c > 1e-6, "edge ({}, {}) C = {}", i, j, c);
            } else {
                prop_assert!(c < 1e-12, "non-edge ({}, {}) C = {}", i, j, c);
            }
        }
    }
}

#[test]
fn default_params_meet_both_conditions() {
    for k in 1..=200 {
        let p = default_params(k).unwrap();
        assert!((p.norm_sqr() - 1.0).abs() < 1e-12, "k = {k}");
        assert!(validate_params(&p).all_passed(), "k = {k}");
    }
}

#[test]
fn selftest_is_deterministic() {
    let cfg = SelftestConfig {
        max_n: 4,
        samples: 0,
        seed: 7,
    };
    let first = selftest::run(&cfg).unwrap();
    let second = selftest::run(&cfg).unwrap();
    assert!(first.all_passed(), "{}", first.render());
    assert_eq!(first.render(), second.render());
}
