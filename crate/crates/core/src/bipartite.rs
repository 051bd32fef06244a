//! Bipartite pure-state entanglement: Schmidt decomposition, entropy of
//! entanglement, Schmidt rank and concurrence.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tensor::{DensityOperator, StateVector, SubsystemSet};
use crate::tolerance::{RANK, ZERO_CUTOFF};

/// `|ψ⟩ = Σ √p_i |α_i⟩ ⊗ |β_i⟩` across a cut.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Squared Schmidt coefficients, descending, summing to one.
    pub coefficients: Vec<f64>,
    /// `|α_i⟩` on the cut subsystems (in label order).
    pub left_basis: Vec<Vec<C64>>,
    /// `|β_i⟩` on the complement.
    pub right_basis: Vec<Vec<C64>>,
    pub cut: SubsystemSet,
}

impl SchmidtDecomposition {
    /// Rebuilds the state amplitudes in the original subsystem order.
    pub fn reconstruct(&self, psi_dims: &[usize]) -> Vec<C64> {
        let rows = self.cut.indices();
        let cols: Vec<usize> = (0..psi_dims.len()).filter(|p| !rows.contains(p)).collect();
        let row_dims: Vec<usize> = rows.iter().map(|&p| psi_dims[p]).collect();
        let col_dims: Vec<usize> = cols.iter().map(|&p| psi_dims[p]).collect();
        let total: usize = psi_dims.iter().product();
        (0..total)
            .map(|i| {
                let dg = crate::tensor::digits(i, psi_dims);
                let r = crate::tensor::flat_index(&rows.iter().map(|&p| dg[p]).collect::<Vec<_>>(), &row_dims);
                let c = crate::tensor::flat_index(&cols.iter().map(|&p| dg[p]).collect::<Vec<_>>(), &col_dims);
                self.coefficients
                    .iter()
                    .zip(self.left_basis.iter().zip(&self.right_basis))
                    .map(|(p, (a, b))| a[r] * b[c] * p.sqrt())
                    .sum()
            })
            .collect()
    }
}

fn check_cut(psi: &StateVector, cut: &SubsystemSet) -> Result<()> {
    cut.validate(psi.n_parties())?;
    if cut.is_empty() || cut.len() == psi.n_parties() {
        return Err(Error::TrivialCut);
    }
    Ok(())
}

/// Squared singular values and singular vectors of the coefficient matrix along `cut`.
pub fn schmidt_decompose(psi: &StateVector, cut: &SubsystemSet) -> Result<SchmidtDecomposition> {
    check_cut(psi, cut)?;
    let t = psi.reshape_bipartite(&cut.indices());
    let (u, s, v_adj) = linalg::svd_sorted(&t);
    let k = s.len();
    Ok(SchmidtDecomposition {
        coefficients: s.iter().map(|x| x * x).collect(),
        left_basis: (0..k).map(|i| u.column(i).iter().copied().collect()).collect(),
        right_basis: (0..k).map(|i| v_adj.row(i).iter().copied().collect()).collect(),
        cut: cut.clone(),
    })
}

/// Shannon entropy (bits) of the Schmidt coefficients.
pub fn entanglement_entropy(psi: &StateVector, cut: &SubsystemSet) -> Result<f64> {
    let sd = schmidt_decompose(psi, cut)?;
    Ok(linalg::shannon_bits(sd.coefficients, ZERO_CUTOFF))
}

/// Number of squared Schmidt coefficients above 1e-9.
pub fn schmidt_rank(psi: &StateVector, cut: &SubsystemSet) -> Result<usize> {
    let sd = schmidt_decompose(psi, cut)?;
    Ok(sd.coefficients.iter().filter(|&&p| p > RANK).count())
}

/// `2|det T|` for a two-qubit pure state.
pub fn concurrence(psi: &StateVector) -> Result<f64> {
    if !psi.is_qubits(2) {
        return Err(Error::UnsupportedDims {
            dims: psi.dims().to_vec(),
            reason: "concurrence needs a two-qubit state".into(),
        });
    }
    Ok(2.0 * coefficient_det(psi.amps()).norm())
}

/// `det T` with `T_{jk} = ψ_{jk}`; homogeneous of degree 2.
pub fn coefficient_det(amps: &[C64]) -> C64 {
    amps[0] * amps[3] - amps[1] * amps[2]
}

/// Wootters concurrence of a two-qubit mixed state.
///
/// With `ρ = A A†` and `A = V √Λ`, the square roots of the eigenvalues of
/// `ρ (Y⊗Y) ρ* (Y⊗Y)` are the singular values of the symmetric matrix `Aᵀ (Y⊗Y) A`.
pub fn mixed_concurrence(rho: &DensityOperator) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(Error::UnsupportedDims {
            dims: rho.dims().to_vec(),
            reason: "mixed-state concurrence needs two qubits".into(),
        });
    }
    let yy = linalg::kron(&linalg::pauli_y(), &linalg::pauli_y());
    let (vals, vecs) = linalg::hermitian_eigen(rho.matrix());
    let roots = nalgebra::DVector::from_iterator(4, vals.iter().map(|&v| C64::new(v.max(0.0).sqrt(), 0.0)));
    let a = vecs * CMatrix::from_diagonal(&roots);
    let tau = a.transpose() * yy * &a;
    let (_, l, _) = linalg::svd_sorted(&tau);
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct BipartiteReport {
    pub cut: SubsystemSet,
    pub coefficients: Vec<f64>,
    pub entropy_bits: f64,
    pub schmidt_rank: usize,
}

pub fn bipartite_report(psi: &StateVector, cut: &SubsystemSet) -> Result<BipartiteReport> {
    let sd = schmidt_decompose(psi, cut)?;
    Ok(BipartiteReport {
        cut: cut.clone(),
        entropy_bits: linalg::shannon_bits(sd.coefficients.iter().copied(), ZERO_CUTOFF),
        schmidt_rank: sd.coefficients.iter().filter(|&&p| p > RANK).count(),
        coefficients: sd.coefficients,
    })
}
