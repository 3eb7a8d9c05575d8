//! Reference computations written independently of the library: partial
//! traces by direct summation and spectra from nalgebra.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

use entgraph::{PureEnsemble, StateVector, TwoQubitDensity};

pub type CMat = DMatrix<Complex<f64>>;

pub fn to_nalgebra(rho: &TwoQubitDensity) -> CMat {
    CMat::from_fn(4, 4, |r, c| rho.entry(r, c))
}

/// Reduced state of qubits `(i, j)` by summing `psi psi*` over every
/// assignment of the other qubits.
pub fn brute_reduce(psi: &[Complex64], n: usize, i: usize, j: usize) -> CMat {
    let bit = |q: usize| n - q;
    let others: Vec<usize> = (1..=n).filter(|&q| q != i && q != j).collect();
    let mut out = CMat::zeros(4, 4);
    for rest in 0..1usize << others.len() {
        let mut base = 0usize;
        for (t, &q) in others.iter().enumerate() {
            if rest >> t & 1 == 1 {
                base |= 1 << bit(q);
            }
        }
        let index = |ab: usize| base | (ab >> 1) << bit(i) | (ab & 1) << bit(j);
        for r in 0..4 {
            for c in 0..4 {
                out[(r, c)] += psi[index(r)] * psi[index(c)].conj();
            }
        }
    }
    out
}

pub fn brute_reduce_state(s: &StateVector, i: usize, j: usize) -> CMat {
    brute_reduce(s.amplitudes(), s.n_qubits(), i, j)
}

pub fn brute_reduce_ensemble(e: &PureEnsemble, i: usize, j: usize) -> CMat {
    e.components()
        .iter()
        .fold(CMat::zeros(4, 4), |acc, (w, s)| acc + brute_reduce_state(s, i, j) * Complex::from(*w))
}

pub fn eigenvalues_ascending(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

pub fn partial_transpose(m: &CMat) -> CMat {
    CMat::from_fn(4, 4, |r, c| {
        let (a, b) = (r >> 1, r & 1);
        let (a2, b2) = (c >> 1, c & 1);
        m[(a << 1 | b2, a2 << 1 | b)]
    })
}

pub fn pt_min(m: &CMat) -> f64 {
    eigenvalues_ascending(&partial_transpose(m))[0]
}

/// True when only the diagonal and anti-diagonal entries are nonzero.
pub fn is_x_shaped(m: &CMat) -> bool {
    (0..4).all(|r| (0..4).all(|c| r == c || r + c == 3 || m[(r, c)].norm() == 0.0))
}

/// Concurrence of a state with X-shaped density matrix in closed form.
pub fn x_state_concurrence(m: &CMat) -> f64 {
    let d = |k: usize| m[(k, k)].re;
    let outer = m[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    let inner = m[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    2.0 * outer.max(inner).max(0.0)
}

/// Spectrum of `rho (Y x Y) rho* (Y x Y)`, via the Hermitian form
/// `sqrt(rho) rho~ sqrt(rho)`, in descending order.
pub fn r_spectrum(m: &CMat) -> Vec<f64> {
    let eig = m.clone().symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| Complex::from(l.max(0.0).sqrt()));
    let sqrt = &eig.eigenvectors * CMat::from_diagonal(&roots) * eig.eigenvectors.adjoint();
    let yy = CMat::from_fn(4, 4, |r, c| match (r, c) {
        (0, 3) | (3, 0) => Complex::from(-1.0),
        (1, 2) | (2, 1) => Complex::from(1.0),
        _ => Complex::from(0.0),
    });
    let flipped = &yy * m.map(|z| z.conj()) * &yy;
    let herm = &sqrt * flipped * &sqrt;
    let herm = (&herm + herm.adjoint()) * Complex::from(0.5);
    let mut v = eigenvalues_ascending(&herm);
    v.reverse();
    v
}

pub fn concurrence(m: &CMat) -> f64 {
    if is_x_shaped(m) {
        return x_state_concurrence(m);
    }
    let l: Vec<f64> = r_spectrum(m).iter().map(|x| x.max(0.0).sqrt()).collect();
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
