//! Closed-form reduced matrices and spectra for the general construction and
//! the star family. These are pure formula evaluations used to cross-check
//! the numeric pipeline.

use num_complex::Complex64;

use super::{AnalysisError, TwoQubitDensity};
use crate::cmatrix::ComplexMatrix;
use crate::graphio::GraphStats;
use crate::statesynth::SynthesisParams;

/// Slack allowed on the two parameter conditions. The default parameters hit
/// the separability condition with equality for every k.
const CONDITION_TOL: f64 = 1e-14;

/// Reduced state of an edge pair of the general construction.
///
/// Valid for N >= 5, where no other basis vectors of the superposition share
/// a configuration of the traced-out qubits.
pub fn cf_reduced_edge(
    p: &SynthesisParams,
    st: &GraphStats,
) -> Result<TwoQubitDensity, AnalysisError> {
    if !st.is_edge {
        return Err(AnalysisError::WrongPairKind {
            pair: st.pair,
            expected: "edge",
        });
    }
    let k = st.k as f64;
    let (a2, b2, g2) = (p.alpha * p.alpha, p.beta * p.beta, p.gamma * p.gamma);
    let (ni, nj, nij) = (st.n_i as f64, st.n_j as f64, st.n_ij as f64);

    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = (a2 + g2 * (k - ni - nj + 1.0) / k).into();
    m[(1, 1)] = (g2 * (nj - 1.0) / k).into();
    m[(2, 2)] = (g2 * (ni - 1.0) / k).into();
    m[(3, 3)] = (b2 + g2 / k).into();
    let inner: Complex64 = (g2 * nij / k).into();
    m[(1, 2)] = inner;
    m[(2, 1)] = inner;
    let outer: Complex64 = (p.alpha * p.gamma / k.sqrt()).into();
    m[(0, 3)] = outer;
    m[(3, 0)] = outer;
    TwoQubitDensity::new(m, st.pair)
}

/// Reduced state of a non-edge pair of the general construction (N >= 5).
pub fn cf_reduced_nonedge(
    p: &SynthesisParams,
    st: &GraphStats,
) -> Result<TwoQubitDensity, AnalysisError> {
    if st.is_edge {
        return Err(AnalysisError::WrongPairKind {
            pair: st.pair,
            expected: "non-edge",
        });
    }
    let k = st.k as f64;
    let (a2, b2, g2) = (p.alpha * p.alpha, p.beta * p.beta, p.gamma * p.gamma);
    let (ni, nj, nij) = (st.n_i as f64, st.n_j as f64, st.n_ij as f64);

    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = (a2 + g2 * (k - ni - nj) / k).into();
    m[(1, 1)] = (g2 * nj / k).into();
    m[(2, 2)] = (g2 * ni / k).into();
    m[(3, 3)] = b2.into();
    let inner: Complex64 = (g2 * nij / k).into();
    m[(1, 2)] = inner;
    m[(2, 1)] = inner;
    TwoQubitDensity::new(m, st.pair)
}

/// Spectrum of `rho * spin_flip(rho)` for the non-edge reduced state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonEdgeRSpectrum {
    /// Doubly degenerate `(alpha^2 + gamma^2 (k - n_i - n_j) / k) * beta^2`.
    pub outer: f64,
    /// `gamma^4 ((n_ij + sqrt(n_i n_j)) / k)^2`.
    pub inner_plus: f64,
    /// `gamma^4 ((n_ij - sqrt(n_i n_j)) / k)^2`.
    pub inner_minus: f64,
}

impl NonEdgeRSpectrum {
    pub fn sorted(&self) -> [f64; 4] {
        let mut v = [self.outer, self.outer, self.inner_plus, self.inner_minus];
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

pub fn cf_nonedge_r_spectrum(
    p: &SynthesisParams,
    st: &GraphStats,
) -> Result<NonEdgeRSpectrum, AnalysisError> {
    if st.is_edge {
        return Err(AnalysisError::WrongPairKind {
            pair: st.pair,
            expected: "non-edge",
        });
    }
    let k = st.k as f64;
    let (a2, b2, g2) = (p.alpha * p.alpha, p.beta * p.beta, p.gamma * p.gamma);
    let (ni, nj, nij) = (st.n_i as f64, st.n_j as f64, st.n_ij as f64);
    let root = (ni * nj).sqrt();
    let g4 = g2 * g2;
    Ok(NonEdgeRSpectrum {
        outer: (a2 + g2 * (k - ni - nj) / k) * b2,
        inner_plus: g4 * ((nij + root) / k).powi(2),
        inner_minus: g4 * ((nij - root) / k).powi(2),
    })
}

fn star_args(alpha: f64, n: usize) -> Result<(f64, f64), AnalysisError> {
    if n < 5 {
        return Err(AnalysisError::StarTooSmall(n));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(AnalysisError::AlphaRange(alpha));
    }
    Ok((alpha * alpha, n as f64))
}

/// Minimum PT eigenvalue of the hub pair of `star_state(N, alpha)`:
/// `(alpha^2 / 2N) (N - 2 - sqrt(N^2 - 4N + 8))`.
pub fn cf_star_pt_min_edge(alpha: f64, n: usize) -> Result<f64, AnalysisError> {
    let (a2, nf) = star_args(alpha, n)?;
    Ok(a2 / (2.0 * nf) * (nf - 2.0 - (nf * nf - 4.0 * nf + 8.0).sqrt()))
}

/// Minimum PT eigenvalue of a non-hub pair of `star_state(N, alpha)`.
///
/// The partial transpose has the doubly degenerate eigenvalue `alpha^2 / N`
/// and the pair `(N - 2 alpha^2 -+ sqrt(delta)) / 2N` with
/// `delta = N^2 - 4 alpha^2 (N - 1) N + 4 alpha^4 (2 + (N - 2) N)`; the lower
/// root of the pair only drops below `alpha^2 / N` for larger `alpha`.
pub fn cf_star_pt_min_nonedge(alpha: f64, n: usize) -> Result<f64, AnalysisError> {
    let (a2, nf) = star_args(alpha, n)?;
    let delta = nf * nf - 4.0 * a2 * (nf - 1.0) * nf + 4.0 * a2 * a2 * (2.0 + (nf - 2.0) * nf);
    let root = (nf - 2.0 * a2 - delta.sqrt()) / (2.0 * nf);
    Ok(root.min(a2 / nf))
}

/// Largest `alpha` for which non-hub pairs of the star state stay
/// separable: `sqrt(N^2 - 2N) / (N - 1)`.
pub fn cf_star_alpha_bound(n: usize) -> Result<f64, AnalysisError> {
    if n < 5 {
        return Err(AnalysisError::StarTooSmall(n));
    }
    let nf = n as f64;
    Ok((nf * nf - 2.0 * nf).sqrt() / (nf - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionCheck {
    pub passed: bool,
    /// Non-negative when the inequality holds.
    pub slack: f64,
}

/// Verdicts on the two sufficient conditions of the general construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamValidation {
    /// Non-edges separable: `(alpha beta)^2 >= gamma^4 > 0`.
    pub separability: ConditionCheck,
    /// Edges entangled: `0 < gamma^2 k <= 4 alpha^2`.
    pub entanglement: ConditionCheck,
}

impl ParamValidation {
    pub fn all_passed(&self) -> bool {
        self.separability.passed && self.entanglement.passed
    }
}

pub fn validate_params(p: &SynthesisParams) -> ParamValidation {
    let g2 = p.gamma * p.gamma;
    let g4 = g2 * g2;
    let ab2 = (p.alpha * p.beta).powi(2);
    let sep_slack = ab2 - g4;
    let gk = g2 * p.k as f64;
    let ent_slack = 4.0 * p.alpha * p.alpha - gk;
    ParamValidation {
        separability: ConditionCheck {
            passed: g4 > 0.0 && sep_slack >= -CONDITION_TOL,
            slack: sep_slack,
        },
        entanglement: ConditionCheck {
            passed: gk > 0.0 && ent_slack >= -CONDITION_TOL,
            slack: ent_slack,
        },
    }
}
