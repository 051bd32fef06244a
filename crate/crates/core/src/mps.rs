//! Matrix product states: amplitudes, dense conversion with truncation and
//! entanglement entropies across the bonds.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, shannon_bits, CMatrix, ZERO};
use crate::tensor::{check_dense_limit, digits, StateVector};
use crate::tolerance::ZERO_CUTOFF;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// First and last bonds have dimension 1.
    Open,
    /// Amplitudes are traces of the matrix product.
    Periodic,
}

/// Site `j` holds one `D_{j-1} × D_j` matrix per physical index.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixProductState {
    sites: Vec<Vec<CMatrix>>,
    boundary: Boundary,
}

impl MatrixProductState {
    pub fn new(sites: Vec<Vec<CMatrix>>, boundary: Boundary) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::DimensionMismatch("MPS without sites".into()));
        }
        for (j, site) in sites.iter().enumerate() {
            let Some(first) = site.first() else {
                return Err(Error::DimensionMismatch(format!("site {j} has physical dimension 0")));
            };
            if site.iter().any(|m| m.shape() != first.shape()) {
                return Err(Error::DimensionMismatch(format!("site {j} mixes matrix shapes")));
            }
            if first.nrows() == 0 || first.ncols() == 0 {
                return Err(Error::DimensionMismatch(format!("site {j} has an empty bond")));
            }
        }
        for j in 1..sites.len() {
            if sites[j - 1][0].ncols() != sites[j][0].nrows() {
                return Err(Error::DimensionMismatch(format!(
                    "bond {j}: site {} has {} columns, site {} has {} rows",
                    j - 1,
                    sites[j - 1][0].ncols(),
                    j,
                    sites[j][0].nrows()
                )));
            }
        }
        let (left, right) = (sites[0][0].nrows(), sites[sites.len() - 1][0].ncols());
        match boundary {
            Boundary::Open if left != 1 || right != 1 => {
                return Err(Error::DimensionMismatch(format!("open boundary needs outer bonds 1, got {left} and {right}")))
            }
            Boundary::Periodic if left != right => {
                return Err(Error::DimensionMismatch(format!("periodic boundary bonds differ: {left} and {right}")))
            }
            _ => {}
        }
        Ok(MatrixProductState { sites, boundary })
    }

    /// Periodic GHZ form: `M[0] = diag(1,0)`, `M[1] = diag(0,1)`, scaled by `2^{-1/(2N)}`.
    pub fn ghz(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("GHZ needs at least one site".into()));
        }
        let s = C64::new(2f64.powf(-0.5 / n as f64), 0.0);
        let m0 = CMatrix::from_row_slice(2, 2, &[s, ZERO, ZERO, ZERO]);
        let m1 = CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, s]);
        Self::new(vec![vec![m0, m1]; n], Boundary::Periodic)
    }

    /// Bond dimension 1 with the factors' amplitudes as scalars.
    pub fn product(factors: &[StateVector]) -> Result<Self> {
        let sites = factors
            .iter()
            .map(|f| {
                if f.n_parties() != 1 {
                    return Err(Error::InvalidArgument("product MPS needs single-party factors".into()));
                }
                Ok(f.amps().iter().map(|&a| CMatrix::from_element(1, 1, a)).collect())
            })
            .collect::<Result<_>>()?;
        Self::new(sites, Boundary::Open)
    }

    pub fn sites(&self) -> &[Vec<CMatrix>] {
        &self.sites
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn phys_dims(&self) -> Vec<usize> {
        self.sites.iter().map(|s| s.len()).collect()
    }

    /// `D_0, D_1, …, D_N`.
    pub fn bond_dims(&self) -> Vec<usize> {
        std::iter::once(self.sites[0][0].nrows()).chain(self.sites.iter().map(|s| s[0].ncols())).collect()
    }

    pub fn bond_dimension(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }
}

/// `tr(M^{(1)}[x_1] ⋯ M^{(N)}[x_N])`.
pub fn mps_amplitude(m: &MatrixProductState, config: &[usize]) -> Result<C64> {
    if config.len() != m.n_sites() {
        return Err(Error::DimensionMismatch(format!("{} indices for {} sites", config.len(), m.n_sites())));
    }
    let mut acc: Option<CMatrix> = None;
    for (j, (&x, site)) in config.iter().zip(&m.sites).enumerate() {
        let Some(mat) = site.get(x) else {
            return Err(Error::InvalidArgument(format!("index {x} out of range at site {j} (dimension {})", site.len())));
        };
        acc = Some(match acc {
            None => mat.clone(),
            Some(a) => a * mat,
        });
    }
    Ok(linalg::trace(&acc.expect("at least one site")))
}

fn raw_amplitudes(m: &MatrixProductState) -> Result<Vec<C64>> {
    let dims = m.phys_dims();
    let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).unwrap_or(usize::MAX);
    check_dense_limit(total)?;
    (0..total).map(|flat| mps_amplitude(m, &digits(flat, &dims))).collect()
}

/// All amplitudes, normalized.
pub fn mps_to_dense(m: &MatrixProductState) -> Result<StateVector> {
    let amps = raw_amplitudes(m)?;
    StateVector::normalized(m.phys_dims(), amps)
}

#[derive(Debug, Clone)]
pub struct Compression {
    pub mps: MatrixProductState,
    /// `|⟨ψ|φ⟩|²` between the input and the normalized compressed state.
    pub fidelity: f64,
    /// Sum over bonds of the discarded squared singular values.
    pub discarded_weight: f64,
}

/// Left-to-right SVD sweep keeping singular values above `max(tol, 1e-12) · s_max`,
/// at most `max_bond` per bond.
pub fn dense_to_mps(psi: &StateVector, max_bond: usize, tol: f64) -> Result<Compression> {
    if max_bond == 0 {
        return Err(Error::InvalidArgument("max_bond must be at least 1".into()));
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tol must be nonnegative, got {tol}")));
    }
    let dims = psi.dims().to_vec();
    let n = dims.len();
    let mut carry = CMatrix::from_row_slice(1, psi.dim(), psi.amps());
    let mut sites = Vec::with_capacity(n);
    let mut discarded = 0.0;
    for (j, &d) in dims.iter().enumerate() {
        let left = carry.nrows();
        let rest = carry.ncols() / d;
        if j == n - 1 {
            let norm = carry.norm();
            sites.push((0..d).map(|x| CMatrix::from_fn(left, 1, |a, _| carry[(a, x)] / norm)).collect());
            break;
        }
        let reshaped = CMatrix::from_fn(left * d, rest, |r, y| carry[(r / d, (r % d) * rest + y)]);
        let (u, s, v_adj) = linalg::svd_sorted(&reshaped);
        let smax = s.first().copied().unwrap_or(0.0);
        let cutoff = tol.max(ZERO_CUTOFF) * smax;
        let keep = s.iter().take_while(|&&v| v > cutoff).count().clamp(1, max_bond);
        discarded += s[keep..].iter().map(|v| v * v).sum::<f64>();
        sites.push((0..d).map(|x| CMatrix::from_fn(left, keep, |a, b| u[(a * d + x, b)])).collect());
        carry = CMatrix::from_fn(keep, rest, |b, y| v_adj[(b, y)] * s[b]);
    }
    let mps = MatrixProductState::new(sites, Boundary::Open)?;
    let approx = raw_amplitudes(&mps)?;
    let overlap: C64 = psi.amps().iter().zip(&approx).map(|(a, b)| a.conj() * b).sum();
    Ok(Compression { fidelity: overlap.norm_sqr().min(1.0), mps, discarded_weight: discarded })
}

/// Entanglement entropy (bits) across each bond `j | j+1` of an open-boundary MPS.
///
/// The chain is brought to left-canonical form by QR, then swept right to left
/// by SVD; the singular values at each bond are then the Schmidt coefficients.
pub fn cut_entropies(m: &MatrixProductState) -> Result<Vec<f64>> {
    if m.boundary == Boundary::Periodic {
        return Err(Error::InvalidArgument("cut entropies need an open-boundary MPS".into()));
    }
    let mut sites = m.sites.clone();
    let n = sites.len();
    for j in 0..n - 1 {
        let (rows, cols) = sites[j][0].shape();
        let d = sites[j].len();
        let stacked = CMatrix::from_fn(rows * d, cols, |r, c| sites[j][r % d][(r / d, c)]);
        let (q, r) = stacked.qr().unpack();
        let k = q.ncols();
        sites[j] = (0..d).map(|x| CMatrix::from_fn(rows, k, |a, b| q[(a * d + x, b)])).collect();
        sites[j + 1] = sites[j + 1].iter().map(|mx| &r * mx).collect();
    }
    let mut entropies = vec![0.0; n - 1];
    for j in (1..n).rev() {
        let (rows, cols) = sites[j][0].shape();
        let d = sites[j].len();
        let wide = CMatrix::from_fn(rows, d * cols, |a, c| sites[j][c / cols][(a, c % cols)]);
        let (u, s, v_adj) = linalg::svd_sorted(&wide);
        let total: f64 = s.iter().map(|v| v * v).sum();
        if total <= 0.0 {
            return Err(Error::InvalidState("MPS has zero norm".into()));
        }
        let probs = s.iter().map(|v| v * v / total);
        entropies[j - 1] = shannon_bits(probs, ZERO_CUTOFF);
        let k = s.len();
        sites[j] = (0..d).map(|x| CMatrix::from_fn(k, cols, |a, b| v_adj[(a, x * cols + b)])).collect();
        let us = CMatrix::from_fn(rows, k, |a, b| u[(a, b)] * s[b]);
        sites[j - 1] = sites[j - 1].iter().map(|mx| mx * &us).collect();
    }
    Ok(entropies)
}
