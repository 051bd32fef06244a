//! Multipartite entanglement measures: geometric measure, Schmidt measure,
//! SL-invariant monotones and the LU/SLOCC parameter counts.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartite::{coefficient_det, schmidt_rank};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::random::{complex_gaussian, rng_for};
use crate::tensor::{digits, StateVector, SubsystemSet};
use crate::threequbit::{hyperdeterminant_amps, tensor_rank_3qubit};
use crate::tolerance::FIT_RESIDUAL;

/// Settings for the alternating product-state optimizers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_sweeps: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { restarts: 32, max_sweeps: 500, tol: 1e-10, seed: 0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometricMeasure {
    /// Hilbert-Schmidt distance `√(2 − 2Λ²)` to the nearest pure product state.
    pub value: f64,
    /// Best product overlap `Λ = max |⟨a₁…a_N|ψ⟩|`.
    pub overlap: f64,
    #[serde(skip)]
    pub closest_product: StateVector,
    /// False when the best restart ran out of sweeps before converging.
    pub converged: bool,
}

struct Climb {
    overlap: f64,
    factors: Vec<Vec<C64>>,
    converged: bool,
}

fn normalize(v: &mut [C64]) -> f64 {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
    n
}

/// `v[x] = Σ conj(Π_{k≠party} a_k[x_k]) ψ[x₁…x_N]` with `x_party = x`.
fn contract_except(dims: &[usize], amps: &[C64], factors: &[Vec<C64>], party: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dims[party]];
    for (flat, a) in amps.iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        let x = digits(flat, dims);
        let mut w = *a;
        for (k, f) in factors.iter().enumerate() {
            if k != party {
                w *= f[x[k]].conj();
            }
        }
        v[x[party]] += w;
    }
    v
}

fn climb<R: Rng>(psi: &StateVector, config: &OptimizerConfig, rng: &mut R) -> Climb {
    let dims = psi.dims();
    let mut factors: Vec<Vec<C64>> = dims
        .iter()
        .map(|&d| {
            let mut f: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
            normalize(&mut f);
            f
        })
        .collect();
    let mut overlap = 0.0;
    for _ in 0..config.max_sweeps {
        let mut current = overlap;
        for party in 0..dims.len() {
            let mut v = contract_except(dims, psi.amps(), &factors, party);
            current = normalize(&mut v);
            if current > 0.0 {
                factors[party] = v;
            }
        }
        let gain = current - overlap;
        overlap = current;
        if gain.abs() < config.tol {
            return Climb { overlap, factors, converged: true };
        }
    }
    Climb { overlap, factors, converged: false }
}

/// Distance to the nearest pure product state by alternating overlap maximization.
pub fn geometric_measure(psi: &StateVector, config: &OptimizerConfig) -> Result<GeometricMeasure> {
    if config.restarts == 0 || config.max_sweeps == 0 {
        return Err(Error::InvalidArgument("optimizer needs at least one restart and one sweep".into()));
    }
    let best = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(config.seed, r as u64);
            climb(psi, config, &mut rng)
        })
        .reduce_with(|a, b| if b.overlap > a.overlap { b } else { a })
        .expect("at least one restart");
    let overlap = best.overlap.min(1.0);
    let factors: Vec<StateVector> =
        best.factors.into_iter().map(|f| StateVector::normalized(vec![f.len()], f)).collect::<Result<_>>()?;
    let mut product = StateVector::product(&factors)?;
    let phase = product.inner(psi)?;
    if phase.norm() > 0.0 {
        let rot = phase / phase.norm();
        product = StateVector::new(product.dims().to_vec(), product.amps().iter().map(|a| a * rot).collect())?;
    }
    Ok(GeometricMeasure {
        value: (2.0 - 2.0 * overlap * overlap).max(0.0).sqrt(),
        overlap,
        closest_product: product,
        converged: best.converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchmidtMeasure {
    /// Minimal number of product terms, or the first rank not excluded when `exact` is false.
    pub rank: usize,
    /// `log₂ rank`.
    pub bits: f64,
    /// False when every fit up to the search limit failed and `rank` is only a lower bound.
    pub exact: bool,
}

impl SchmidtMeasure {
    fn exact(rank: usize) -> Self {
        SchmidtMeasure { rank, bits: (rank as f64).log2(), exact: true }
    }
}

const MAX_SEARCH_QUBITS: usize = 4;
const MAX_SEARCH_RANK: usize = 4;
const FIT_STARTS: u64 = 12;
const FIT_ITERATIONS: usize = 3000;
const TERM_NORM_BOUND: f64 = 1e3;

/// Matrix unfolding of `amps` with `party` as rows and the remaining parties (in order) as columns.
fn unfold(dims: &[usize], amps: &[C64], party: usize) -> CMatrix {
    let rest: Vec<usize> = (0..dims.len()).filter(|&k| k != party).collect();
    let rest_dims: Vec<usize> = rest.iter().map(|&k| dims[k]).collect();
    let cols: usize = rest_dims.iter().product();
    let mut m = CMatrix::zeros(dims[party], cols);
    for (flat, a) in amps.iter().enumerate() {
        let x = digits(flat, dims);
        let col = rest.iter().fold(0, |acc, &k| acc * dims[k] + x[k]);
        m[(x[party], col)] = *a;
    }
    m
}

/// Khatri-Rao product of the factor matrices of every party except `party`.
fn khatri_rao_except(dims: &[usize], factors: &[CMatrix], party: usize, rank: usize) -> CMatrix {
    let rest: Vec<usize> = (0..dims.len()).filter(|&k| k != party).collect();
    let rest_dims: Vec<usize> = rest.iter().map(|&k| dims[k]).collect();
    let rows: usize = rest_dims.iter().product();
    CMatrix::from_fn(rows, rank, |row, t| {
        let x = digits(row, &rest_dims);
        rest.iter().zip(&x).map(|(&k, &xi)| factors[k][(xi, t)]).product()
    })
}

fn pinv(m: &CMatrix) -> CMatrix {
    let (u, s, v_adj) = linalg::svd_sorted(m);
    let cutoff = s.first().copied().unwrap_or(0.0) * 1e-12;
    let inv = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        s.len(),
        s.iter().map(|&x| if x > cutoff { C64::new(1.0 / x, 0.0) } else { ZERO }),
    ));
    v_adj.adjoint() * inv * u.adjoint()
}

fn reconstruct(dims: &[usize], factors: &[CMatrix], rank: usize) -> Vec<C64> {
    let total: usize = dims.iter().product();
    (0..total)
        .map(|flat| {
            let x = digits(flat, dims);
            (0..rank).map(|t| x.iter().enumerate().map(|(k, &xi)| factors[k][(xi, t)]).product::<C64>()).sum()
        })
        .collect()
}

fn residual(amps: &[C64], approx: &[C64]) -> f64 {
    amps.iter().zip(approx).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
}

fn max_term_norm(factors: &[CMatrix], rank: usize) -> f64 {
    (0..rank).map(|t| factors.iter().map(|f| f.column(t).norm()).product::<f64>()).fold(0.0, f64::max)
}

/// Whether `ψ` is within the fit threshold of a sum of `rank` product terms with bounded norms.
fn fits_with_rank(psi: &StateVector, rank: usize, seed: u64) -> bool {
    let dims = psi.dims();
    let amps = psi.amps();
    let unfoldings: Vec<CMatrix> = (0..dims.len()).map(|p| unfold(dims, amps, p)).collect();
    (0..FIT_STARTS).any(|start| {
        let mut rng = rng_for(seed, start);
        let mut factors: Vec<CMatrix> =
            dims.iter().map(|&d| CMatrix::from_fn(d, rank, |_, _| complex_gaussian(&mut rng))).collect();
        let mut last = f64::INFINITY;
        for it in 0..FIT_ITERATIONS {
            for p in 0..dims.len() {
                let k = khatri_rao_except(dims, &factors, p, rank);
                factors[p] = &unfoldings[p] * pinv(&k.transpose());
            }
            if it % 10 == 9 {
                let r = residual(amps, &reconstruct(dims, &factors, rank));
                if r < FIT_RESIDUAL {
                    return max_term_norm(&factors, rank) <= TERM_NORM_BOUND;
                }
                if max_term_norm(&factors, rank) > TERM_NORM_BOUND || last - r < 1e-12 * last {
                    return false;
                }
                last = r;
            }
        }
        false
    })
}

/// `log₂` of the minimal number of product terms.
///
/// Two qubits use the Schmidt rank and three qubits the exact tensor rank. Up
/// to four qubits, product-term fits of rank 1 to 4 are attempted in turn.
pub fn schmidt_measure(psi: &StateVector) -> Result<SchmidtMeasure> {
    let n = psi.n_parties();
    if !psi.dims().iter().all(|&d| d == 2) || n > MAX_SEARCH_QUBITS {
        return Err(Error::UnsupportedDims {
            dims: psi.dims().to_vec(),
            reason: format!("Schmidt measure is available for up to {MAX_SEARCH_QUBITS} qubits"),
        });
    }
    match n {
        1 => Ok(SchmidtMeasure::exact(1)),
        2 => Ok(SchmidtMeasure::exact(schmidt_rank(psi, &SubsystemSet::new([1]))?)),
        3 => Ok(SchmidtMeasure::exact(tensor_rank_3qubit(psi)?)),
        _ => {
            for rank in 1..=MAX_SEARCH_RANK {
                if fits_with_rank(psi, rank, rank as u64) {
                    return Ok(SchmidtMeasure::exact(rank));
                }
            }
            let rank = MAX_SEARCH_RANK + 1;
            Ok(SchmidtMeasure { rank, bits: (rank as f64).log2(), exact: false })
        }
    }
}

/// Registered homogeneous SL-invariant polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlInvariant {
    /// `2 det T` on two qubits.
    Concurrence,
    /// Cayley hyperdeterminant on three qubits.
    Hyperdeterminant,
}

impl SlInvariant {
    pub const ALL: [SlInvariant; 2] = [SlInvariant::Concurrence, SlInvariant::Hyperdeterminant];

    pub fn degree(self) -> u32 {
        match self {
            SlInvariant::Concurrence => 2,
            SlInvariant::Hyperdeterminant => 4,
        }
    }

    pub fn n_qubits(self) -> usize {
        match self {
            SlInvariant::Concurrence => 2,
            SlInvariant::Hyperdeterminant => 3,
        }
    }

    /// `|f|` of a homogeneous SL-invariant `f` is an entanglement monotone iff its degree is at most 4.
    pub fn is_monotone(self) -> bool {
        self.degree() <= 4
    }

    pub fn evaluate(self, amps: &[C64]) -> C64 {
        match self {
            SlInvariant::Concurrence => coefficient_det(amps) * 2.0,
            SlInvariant::Hyperdeterminant => hyperdeterminant_amps(amps),
        }
    }
}

impl fmt::Display for SlInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlInvariant::Concurrence => "concurrence",
            SlInvariant::Hyperdeterminant => "hyperdeterminant",
        })
    }
}

impl FromStr for SlInvariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SlInvariant::ALL
            .into_iter()
            .find(|f| f.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unregistered invariant {s:?}")))
    }
}

pub fn sl_invariant_monotone(f: SlInvariant, psi: &StateVector) -> Result<f64> {
    if !psi.is_qubits(f.n_qubits()) {
        return Err(Error::DimensionMismatch(format!(
            "{f} is defined on {} qubits, state has dims {:?}",
            f.n_qubits(),
            psi.dims()
        )));
    }
    if !f.is_monotone() {
        return Err(Error::InvalidArgument(format!("{f} has degree {} > 4", f.degree())));
    }
    Ok(f.evaluate(psi.amps()).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParameterCounts {
    /// Real parameters needed up to local unitaries.
    pub lu_bound: u64,
    /// Lower bound on SLOCC orbit parameters.
    pub slocc_bound: u64,
}

pub fn parameter_counts(n_qubits: usize) -> Result<ParameterCounts> {
    if n_qubits == 0 || n_qubits > 62 {
        return Err(Error::InvalidArgument(format!("qubit count must lie in 1..=62, got {n_qubits}")));
    }
    let full = 1i128 << (n_qubits + 1);
    let n = n_qubits as i128;
    let clamp = |x: i128| x.max(0) as u64;
    Ok(ParameterCounts { lu_bound: clamp(full - 3 * n - 2), slocc_bound: clamp(full - 6 * n - 2) })
}
