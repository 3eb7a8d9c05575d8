//! Pairwise entanglement analysis.
//!
//! For every qubit pair the two-qubit reduced state is formed and tested two
//! ways: Wootters concurrence and the minimum eigenvalue of the partial
//! transpose. For two qubits both criteria are exact, so they must agree; a
//! disagreement is reported as an error rather than silently resolved.

mod closed_form;

use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

pub use closed_form::{
    cf_nonedge_r_spectrum, cf_reduced_edge, cf_reduced_nonedge, cf_star_alpha_bound,
    cf_star_pt_min_edge, cf_star_pt_min_nonedge, validate_params, ConditionCheck, NonEdgeRSpectrum,
    ParamValidation,
};

use crate::cmatrix::{
    self, hermitian_eigenvalues, hermitian_sqrt_truncated, multiply, partial_transpose_second,
    ComplexMatrix, MatrixError, HERMITIAN_TOL, PSD_CLAMP,
};
use crate::graphio::{all_pairs, Edge, EntangledGraph, GraphError};
use crate::statesynth::{qubit_bit, PureEnsemble, StateVector};

/// Concurrence above which a pair is reported as an edge.
pub const EDGE_THRESHOLD: f64 = 1e-6;
/// Concurrence below which a pair is reported as separable.
pub const NON_EDGE_CEILING: f64 = 1e-9;
/// Partial-transpose eigenvalue below `-PT_THRESHOLD` certifies entanglement.
pub const PT_THRESHOLD: f64 = 1e-9;
const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of a reduced state at or below this are treated as exact
/// zeros when taking its square root.
const ROOT_CUTOFF: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("invalid qubit pair ({i}, {j}) for {n} qubits")]
    BadPair { i: usize, j: usize, n: usize },
    #[error("not a two-qubit density matrix: {0}")]
    InvalidDensity(String),
    #[error("pair ({i}, {j}): concurrence {concurrence:e} lies between the separable ceiling and the edge threshold")]
    Ambiguous {
        i: usize,
        j: usize,
        concurrence: f64,
    },
    #[error("pair ({i}, {j}): concurrence {concurrence:e} and partial-transpose minimum {pt_min:e} disagree")]
    CriteriaDisagree {
        i: usize,
        j: usize,
        concurrence: f64,
        pt_min: f64,
    },
    #[error("eigenvalue {0:e} of the spin-flip product is below -{PSD_CLAMP:e}")]
    NegativeREigenvalue(f64),
    #[error("closed form requires {expected} statistics for pair {pair:?}")]
    WrongPairKind { pair: Edge, expected: &'static str },
    #[error("closed form requires N >= 5, got {0}")]
    StarTooSmall(usize),
    #[error("alpha = {0} outside (0, 1]")]
    AlphaRange(f64),
    #[error("graph has {graph} qubits but the state has {state}")]
    QubitMismatch { graph: usize, state: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// 4x4 reduced state of qubits `(i, j)` in the basis `|q_i q_j>` = 00, 01, 10, 11.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    matrix: ComplexMatrix,
    pair: Edge,
}

impl TwoQubitDensity {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix, pair: Edge) -> Result<Self, AnalysisError> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(AnalysisError::InvalidDensity(format!(
                "shape {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(AnalysisError::InvalidDensity(format!(
                "Hermitian deviation {dev:e}"
            )));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(AnalysisError::InvalidDensity(format!("trace {tr}")));
        }
        let min = hermitian_eigenvalues(&matrix)?.min();
        if min < -PSD_CLAMP {
            return Err(AnalysisError::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { matrix, pair })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn pair(&self) -> Edge {
        self.pair
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }
}

/// A pure state or a pure-state ensemble, analyzed identically pairwise.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a StateVector),
    Ensemble(&'a PureEnsemble),
}

impl<'a> From<&'a StateVector> for StateRef<'a> {
    fn from(s: &'a StateVector) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a PureEnsemble> for StateRef<'a> {
    fn from(e: &'a PureEnsemble) -> Self {
        StateRef::Ensemble(e)
    }
}

impl StateRef<'_> {
    pub fn n_qubits(&self) -> usize {
        match self {
            StateRef::Pure(s) => s.n_qubits(),
            StateRef::Ensemble(e) => e.n_qubits(),
        }
    }

    pub fn reduce(&self, i: usize, j: usize) -> Result<TwoQubitDensity, AnalysisError> {
        match self {
            StateRef::Pure(s) => reduce_pair(s, i, j),
            StateRef::Ensemble(e) => reduce_pair_ensemble(e, i, j),
        }
    }
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<(), AnalysisError> {
    if i == 0 || j > n || i >= j {
        return Err(AnalysisError::BadPair { i, j, n });
    }
    Ok(())
}

fn accumulate_pair(s: &StateVector, i: usize, j: usize, weight: f64, rho: &mut ComplexMatrix) {
    let amps = s.amplitudes();
    let n = s.n_qubits();
    let bi = qubit_bit(n, i);
    let bj = qubit_bit(n, j);
    let rest_mask = !(bi | bj);
    for (x, &psi_x) in amps.iter().enumerate() {
        if psi_x == Complex64::new(0.0, 0.0) {
            continue;
        }
        let row = 2 * usize::from(x & bi != 0) + usize::from(x & bj != 0);
        let rest = x & rest_mask;
        for col in 0..4 {
            let y = rest | if col & 2 != 0 { bi } else { 0 } | if col & 1 != 0 { bj } else { 0 };
            rho[(row, col)] += psi_x * amps[y].conj() * weight;
        }
    }
}

/// Partial trace of `|s><s|` over every qubit except `i` and `j`.
pub fn reduce_pair(s: &StateVector, i: usize, j: usize) -> Result<TwoQubitDensity, AnalysisError> {
    check_pair(s.n_qubits(), i, j)?;
    let mut rho = ComplexMatrix::zeros(4, 4);
    accumulate_pair(s, i, j, 1.0, &mut rho);
    TwoQubitDensity::new(rho, (i, j))
}

/// Weighted sum of the component reductions.
pub fn reduce_pair_ensemble(
    e: &PureEnsemble,
    i: usize,
    j: usize,
) -> Result<TwoQubitDensity, AnalysisError> {
    check_pair(e.n_qubits(), i, j)?;
    let mut rho = ComplexMatrix::zeros(4, 4);
    for (w, s) in e.components() {
        accumulate_pair(s, i, j, *w, &mut rho);
    }
    TwoQubitDensity::new(rho, (i, j))
}

fn sigma_yy() -> ComplexMatrix {
    // sigma_y (x) sigma_y is real: anti-diagonal (-1, 1, 1, -1).
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

/// `(sigma_y (x) sigma_y) rho^* (sigma_y (x) sigma_y)`.
pub fn spin_flip(rho: &TwoQubitDensity) -> ComplexMatrix {
    let yy = sigma_yy();
    let conj = cmatrix::conjugate(rho.matrix());
    multiply(&multiply(&yy, &conj).expect("4x4"), &yy).expect("4x4")
}

/// Eigenvalues of `rho * spin_flip(rho)`, descending, via the Hermitian
/// matrix `sqrt(rho) spin_flip(rho) sqrt(rho)` which has the same spectrum.
///
/// The surrogate is formed as `A A^dagger` with
/// `A = sqrt(rho) (sigma_y (x) sigma_y) conj(sqrt(rho))`, so it is PSD by
/// construction and a vanishing `A` yields eigenvalues at the `1e-32` level
/// rather than the `1e-16` level of the direct triple product.
pub fn r_spectrum(rho: &TwoQubitDensity) -> Result<[f64; 4], AnalysisError> {
    let root = hermitian_sqrt_truncated(rho.matrix(), ROOT_CUTOFF)?;
    let a = multiply(&multiply(&root, &sigma_yy())?, &cmatrix::conjugate(&root))?;
    let m = multiply(&a, &cmatrix::adjoint(&a))?;
    let spec = hermitian_eigenvalues(&m)?;
    let mut out = [0.0; 4];
    for (slot, &l) in out.iter_mut().zip(spec.values()) {
        if l < -PSD_CLAMP {
            return Err(AnalysisError::NegativeREigenvalue(l));
        }
        *slot = l.max(0.0);
    }
    Ok(out)
}

/// `max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4))` over the descending
/// spectrum of `R`.
pub fn concurrence(rho: &TwoQubitDensity) -> Result<f64, AnalysisError> {
    let l = r_spectrum(rho)?;
    let c = l[0].sqrt() - l[1].sqrt() - l[2].sqrt() - l[3].sqrt();
    Ok(c.clamp(0.0, 1.0))
}

pub fn pt_min_eigenvalue(rho: &TwoQubitDensity) -> Result<f64, AnalysisError> {
    let pt = partial_transpose_second(rho.matrix())?;
    Ok(hermitian_eigenvalues(&pt)?.min())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairReport {
    pub pair: Edge,
    pub concurrence: f64,
    pub pt_min_eigenvalue: f64,
    pub is_entangled: bool,
}

/// Classifies one pair under the edge/non-edge thresholds, cross-checking the
/// concurrence verdict against the partial transpose.
pub fn classify_pair(rho: &TwoQubitDensity) -> Result<PairReport, AnalysisError> {
    let (i, j) = rho.pair();
    let c = concurrence(rho)?;
    let pt = pt_min_eigenvalue(rho)?;
    let is_entangled = if c > EDGE_THRESHOLD {
        true
    } else if c < NON_EDGE_CEILING {
        false
    } else {
        return Err(AnalysisError::Ambiguous {
            i,
            j,
            concurrence: c,
        });
    };
    if is_entangled != (pt < -PT_THRESHOLD) {
        return Err(AnalysisError::CriteriaDisagree {
            i,
            j,
            concurrence: c,
            pt_min: pt,
        });
    }
    Ok(PairReport {
        pair: (i, j),
        concurrence: c,
        pt_min_eigenvalue: pt,
        is_entangled,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    n_qubits: usize,
    pairs: Vec<PairReport>,
    realized: EntangledGraph,
    target: Option<EntangledGraph>,
}

impl AnalysisReport {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn pairs(&self) -> &[PairReport] {
        &self.pairs
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairReport> {
        self.pairs.iter().find(|p| p.pair == (i, j))
    }

    pub fn realized_graph(&self) -> &EntangledGraph {
        &self.realized
    }

    pub fn target_graph(&self) -> Option<&EntangledGraph> {
        self.target.as_ref()
    }

    /// `None` when no target was given.
    pub fn match_flag(&self) -> Option<bool> {
        self.target
            .as_ref()
            .map(|t| t.edges() == self.realized.edges())
    }

    pub fn matches(&self) -> bool {
        self.match_flag() == Some(true)
    }

    /// Target edges that were not realized.
    pub fn missing_edges(&self) -> Vec<Edge> {
        match &self.target {
            Some(t) => t.edges().difference(self.realized.edges()).copied().collect(),
            None => Vec::new(),
        }
    }

    /// Realized edges that the target does not have.
    pub fn extra_edges(&self) -> Vec<Edge> {
        match &self.target {
            Some(t) => self.realized.edges().difference(t.edges()).copied().collect(),
            None => Vec::new(),
        }
    }
}

pub fn realized_graph(state: &StateRef<'_>) -> Result<AnalysisReport, AnalysisError> {
    let n = state.n_qubits();
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for (i, j) in all_pairs(n) {
        pairs.push(classify_pair(&state.reduce(i, j)?)?);
    }
    let realized = EntangledGraph::new(n, pairs.iter().filter(|p| p.is_entangled).map(|p| p.pair))?;
    Ok(AnalysisReport {
        n_qubits: n,
        pairs,
        realized,
        target: None,
    })
}

pub fn verify_realization(
    g: &EntangledGraph,
    state: &StateRef<'_>,
) -> Result<AnalysisReport, AnalysisError> {
    if g.n_vertices() != state.n_qubits() {
        return Err(AnalysisError::QubitMismatch {
            graph: g.n_vertices(),
            state: state.n_qubits(),
        });
    }
    let mut report = realized_graph(state)?;
    report.target = Some(g.clone());
    Ok(report)
}

/// Human-readable concurrence / PT table that does not apply the edge
/// thresholds, so it can describe states that fail classification.
pub fn pair_table(state: &StateRef<'_>) -> Result<String, AnalysisError> {
    let mut out = String::from("   i   j   concurrence        pt_min\n");
    for (i, j) in all_pairs(state.n_qubits()) {
        let rho = state.reduce(i, j)?;
        let _ = writeln!(
            out,
            "{i:>4}{j:>4}  {:>12.6e}  {:>12.6e}",
            concurrence(&rho)?,
            pt_min_eigenvalue(&rho)?
        );
    }
    Ok(out)
}
