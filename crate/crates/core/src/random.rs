//! Seeded generators for test corpora: random graphs, Haar-like pure states
//! and separable two-qubit mixtures.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cmatrix::ComplexMatrix;
use crate::entanganalysis::TwoQubitDensity;
use crate::graphio::{all_pairs, EntangledGraph};
use crate::statesynth::StateVector;

/// Each of the `N(N-1)/2` possible edges present independently with
/// probability 1/2.
pub fn random_graph<R: Rng + ?Sized>(n: usize, rng: &mut R) -> EntangledGraph {
    let edges: Vec<_> = all_pairs(n).into_iter().filter(|_| rng.random_bool(0.5)).collect();
    EntangledGraph::new(n, edges).expect("pairs from all_pairs are valid")
}

fn gaussian_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..len)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Normalized complex Gaussian amplitudes (unitarily invariant distribution).
pub fn random_pure_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StateVector {
    StateVector::new(n, gaussian_vector(1 << n, rng)).expect("normalized by construction")
}

/// Mixture of `terms` random product states `|a><a| (x) |b><b|` with random
/// weights.
pub fn random_separable_density<R: Rng + ?Sized>(terms: usize, rng: &mut R) -> TwoQubitDensity {
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut rho = ComplexMatrix::zeros(4, 4);
    for w in weights {
        let a = gaussian_vector(2, rng);
        let b = gaussian_vector(2, rng);
        let prod = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
        rho = rho
            .add(&ComplexMatrix::outer(&prod).scale(w / total))
            .expect("4x4");
    }
    TwoQubitDensity::new(rho, (1, 2)).expect("convex mixture of product states")
}
