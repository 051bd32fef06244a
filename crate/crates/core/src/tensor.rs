//! Dense pure and mixed states over a list of subsystems.
//!
//! Amplitudes are stored row-major over the subsystems: subsystem 1 is the
//! slowest-varying index. For three qubits the order is `|000⟩, |001⟩, …, |111⟩`.
//! Subsystem labels in [`SubsystemSet`] are 1-based; qubit/party indices passed
//! to gate-style functions are 0-based.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::tolerance::{MAX_DENSE_DIM, VALIDITY, ZERO_CUTOFF};

/// Sorted set of 1-based subsystem labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsystemSet(BTreeSet<usize>);

impl SubsystemSet {
    pub fn new(labels: impl IntoIterator<Item = usize>) -> Self {
        SubsystemSet(labels.into_iter().collect())
    }

    pub fn empty() -> Self {
        SubsystemSet(BTreeSet::new())
    }

    /// `{1, …, n}`.
    pub fn full(n: usize) -> Self {
        SubsystemSet((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: usize) -> bool {
        self.0.contains(&label)
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// 0-based party indices, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().map(|l| l - 1).collect()
    }

    /// Checks every label lies in `1..=parties`.
    pub fn validate(&self, parties: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l == 0 || l > parties) {
            Some(&label) => Err(Error::SubsystemOutOfRange { label, parties }),
            None => Ok(()),
        }
    }

    pub fn complement(&self, parties: usize) -> SubsystemSet {
        SubsystemSet((1..=parties).filter(|l| !self.0.contains(l)).collect())
    }

    pub fn union(&self, other: &SubsystemSet) -> SubsystemSet {
        SubsystemSet(self.0.union(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &SubsystemSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// All nonempty subsets of `{1, …, n}`, ordered by size then lexicographically.
    pub fn all_nonempty(n: usize) -> Vec<SubsystemSet> {
        let mut sets: Vec<SubsystemSet> = (1u64..(1u64 << n))
            .map(|mask| SubsystemSet((0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()))
            .collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        sets
    }
}

impl fmt::Display for SubsystemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for SubsystemSet {
    type Err = Error;

    /// Parses a comma-separated label list such as `"1,3"`; an empty string is the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('{').trim_end_matches('}');
        if trimmed.trim().is_empty() {
            return Ok(SubsystemSet::empty());
        }
        trimmed
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad subsystem label {p:?}: {e}")))
            })
            .collect::<Result<BTreeSet<_>>>()
            .map(SubsystemSet)
    }
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidState(format!("dims must be nonempty and positive, got {dims:?}")));
    }
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::InvalidState("dimension overflow".into()))
}

/// Splits a flat index into per-subsystem digits (subsystem 1 slowest).
pub(crate) fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

pub(crate) fn flat_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// For each flat index, its (row, column) position when the parties in `rows`
/// index matrix rows and the remaining parties index columns.
fn split_indices(dims: &[usize], rows: &[usize]) -> (Vec<(usize, usize)>, usize, usize) {
    let cols: Vec<usize> = (0..dims.len()).filter(|p| !rows.contains(p)).collect();
    let row_dims: Vec<usize> = rows.iter().map(|&p| dims[p]).collect();
    let col_dims: Vec<usize> = cols.iter().map(|&p| dims[p]).collect();
    let total: usize = dims.iter().product();
    let map = (0..total)
        .map(|i| {
            let dg = digits(i, dims);
            let r: Vec<usize> = rows.iter().map(|&p| dg[p]).collect();
            let c: Vec<usize> = cols.iter().map(|&p| dg[p]).collect();
            (flat_index(&r, &row_dims), flat_index(&c, &col_dims))
        })
        .collect();
    (map, row_dims.iter().product(), col_dims.iter().product())
}

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl StateVector {
    /// Rejects amplitude vectors whose norm differs from 1 by more than 1e-9.
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amps.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims {dims:?} (expected {total})",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > VALIDITY {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector { dims, amps })
    }

    /// Rescales `amps` to unit norm first.
    pub fn normalized(dims: Vec<usize>, mut amps: Vec<C64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < ZERO_CUTOFF {
            return Err(Error::InvalidState(format!("cannot normalize vector of norm {norm}")));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        StateVector::new(dims, amps)
    }

    pub fn from_real(dims: Vec<usize>, amps: &[f64]) -> Result<Self> {
        StateVector::normalized(dims, amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|x_1 … x_N⟩`.
    pub fn basis(dims: Vec<usize>, digits_: &[usize]) -> Result<Self> {
        let total = check_dims(&dims)?;
        if digits_.len() != dims.len() || digits_.iter().zip(&dims).any(|(&x, &d)| x >= d) {
            return Err(Error::InvalidArgument(format!("basis label {digits_:?} invalid for dims {dims:?}")));
        }
        let mut amps = vec![ZERO; total];
        amps[flat_index(digits_, &dims)] = ONE;
        Ok(StateVector { dims, amps })
    }

    /// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
    pub fn ghz(n: usize) -> Self {
        assert!(n >= 1, "GHZ state needs at least one qubit");
        let mut amps = vec![ZERO; 1 << n];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        amps[0] = C64::new(h, 0.0);
        amps[(1 << n) - 1] = C64::new(h, 0.0);
        StateVector { dims: vec![2; n], amps }
    }

    /// Equal superposition of all weight-one basis states on `n` qubits.
    pub fn w(n: usize) -> Self {
        assert!(n >= 2, "W state needs at least two qubits");
        let mut amps = vec![ZERO; 1 << n];
        let a = 1.0 / (n as f64).sqrt();
        for k in 0..n {
            amps[1 << k] = C64::new(a, 0.0);
        }
        StateVector { dims: vec![2; n], amps }
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn epr() -> Self {
        StateVector::ghz(2)
    }

    pub fn qubit(alpha: C64, beta: C64) -> Result<Self> {
        StateVector::normalized(vec![2], vec![alpha, beta])
    }

    pub fn zero() -> Self {
        StateVector { dims: vec![2], amps: vec![ONE, ZERO] }
    }

    pub fn one() -> Self {
        StateVector { dims: vec![2], amps: vec![ZERO, ONE] }
    }

    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector { dims: vec![2], amps: vec![C64::new(h, 0.0), C64::new(h, 0.0)] }
    }

    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector { dims: vec![2], amps: vec![C64::new(h, 0.0), C64::new(-h, 0.0)] }
    }

    /// Tensor product of several states, first factor slowest.
    pub fn product(factors: &[StateVector]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
        rest.iter().try_fold(first.clone(), |acc, f| tensor_product(&acc, f))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn is_qubits(&self, n: usize) -> bool {
        self.dims.len() == n && self.dims.iter().all(|&d| d == 2)
    }

    pub fn amplitude(&self, digits_: &[usize]) -> C64 {
        self.amps[flat_index(digits_, &self.dims)]
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator { dims: self.dims.clone(), mat: linalg::outer(&self.amps) }
    }

    /// Applies `op` to party `party` (0-based) without renormalizing.
    pub fn apply_local_raw(&self, party: usize, op: &CMatrix) -> Result<Vec<C64>> {
        apply_local_amps(&self.dims, &self.amps, party, op)
    }

    /// Applies `op` to party `party` (0-based) and renormalizes; suits unitaries
    /// and invertible filtering operations alike.
    pub fn apply_local(&self, party: usize, op: &CMatrix) -> Result<StateVector> {
        let amps = self.apply_local_raw(party, op)?;
        StateVector::normalized(self.dims.clone(), amps)
    }

    /// Applies one operator per party.
    pub fn apply_product(&self, ops: &[CMatrix]) -> Result<StateVector> {
        if ops.len() != self.n_parties() {
            return Err(Error::DimensionMismatch(format!(
                "{} local operators for {} parties",
                ops.len(),
                self.n_parties()
            )));
        }
        let mut amps = self.amps.clone();
        for (p, op) in ops.iter().enumerate() {
            amps = apply_local_amps(&self.dims, &amps, p, op)?;
        }
        StateVector::normalized(self.dims.clone(), amps)
    }

    /// Coefficient matrix with the parties in `rows` (0-based) indexing rows.
    pub fn reshape_bipartite(&self, rows: &[usize]) -> CMatrix {
        let (map, nr, nc) = split_indices(&self.dims, rows);
        let mut m = CMatrix::zeros(nr, nc);
        for (i, &(r, c)) in map.iter().enumerate() {
            m[(r, c)] = self.amps[i];
        }
        m
    }
}

pub(crate) fn apply_local_amps(dims: &[usize], amps: &[C64], party: usize, op: &CMatrix) -> Result<Vec<C64>> {
    let d = *dims
        .get(party)
        .ok_or_else(|| Error::InvalidArgument(format!("party {party} out of range")))?;
    if op.nrows() != d || op.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on a dimension-{d} subsystem",
            op.nrows(),
            op.ncols()
        )));
    }
    let inner: usize = dims[party + 1..].iter().product();
    let outer: usize = dims[..party].iter().product();
    let mut out = vec![ZERO; amps.len()];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * d * inner + i;
            for r in 0..d {
                let mut acc = ZERO;
                for c in 0..d {
                    acc += op[(r, c)] * amps[base + c * inner];
                }
                out[base + r * inner] = acc;
            }
        }
    }
    Ok(out)
}

/// Positive semi-definite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dims: Vec<usize>,
    mat: CMatrix,
}

impl DensityOperator {
    /// Validates hermiticity, positivity and unit trace at 1e-9.
    pub fn new(dims: Vec<usize>, mat: CMatrix) -> Result<Self> {
        let total = check_dims(&dims)?;
        if mat.nrows() != total || mat.ncols() != total {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for dims {dims:?}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let defect = linalg::hermiticity_defect(&mat);
        if defect > VALIDITY {
            return Err(Error::InvalidDensity(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = linalg::trace(&mat);
        if (tr.re - 1.0).abs() > VALIDITY || tr.im.abs() > VALIDITY {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min = linalg::hermitian_eigenvalues(&mat)[0];
        if min < -VALIDITY {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityOperator { dims, mat: linalg::hermitian_part(&mat) })
    }

    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, mat: CMatrix) -> Self {
        DensityOperator { dims, mat }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let total = check_dims(&dims)?;
        Ok(DensityOperator { dims, mat: CMatrix::identity(total, total).scale(1.0 / total as f64) })
    }

    /// Convex combination `Σ w_i ρ_i` of operators on identical dims.
    pub fn mixture(weights: &[f64], states: &[DensityOperator]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::InvalidArgument("weights and states must be nonempty and of equal length".into()));
        }
        check_probabilities(weights)?;
        let dims = states[0].dims.clone();
        if states.iter().any(|s| s.dims != dims) {
            return Err(Error::DimensionMismatch("mixture components differ in dims".into()));
        }
        let mat = states
            .iter()
            .zip(weights)
            .fold(CMatrix::zeros(states[0].dim(), states[0].dim()), |acc, (s, &w)| acc + s.mat.scale(w));
        Ok(DensityOperator { dims, mat })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.mat)
    }

    /// `Re tr(A ρ)`.
    pub fn expectation(&self, observable: &CMatrix) -> Result<f64> {
        if observable.nrows() != self.dim() || observable.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} observable on dimension {}",
                observable.nrows(),
                observable.ncols(),
                self.dim()
            )));
        }
        let mut acc = ZERO;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += observable[(i, j)] * self.mat[(j, i)];
            }
        }
        Ok(acc.re)
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityOperator { dims, mat: self.mat.kronecker(&other.mat) }
    }
}

pub(crate) fn check_probabilities(p: &[f64]) -> Result<()> {
    if p.iter().any(|&x| !(x >= -VALIDITY)) {
        return Err(Error::InvalidArgument("negative probability".into()));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > VALIDITY {
        return Err(Error::InvalidArgument(format!("probabilities sum to {s}")));
    }
    Ok(())
}

/// Reduction onto a subset of subsystems.
pub trait PartialTrace {
    fn party_dims(&self) -> &[usize];

    /// Reduced operator on `keep`, subsystems in their original order.
    fn partial_trace(&self, keep: &SubsystemSet) -> Result<DensityOperator>;
}

fn check_keep(keep: &SubsystemSet, parties: usize) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::EmptySubsystemSet);
    }
    keep.validate(parties)
}

impl PartialTrace for StateVector {
    fn party_dims(&self) -> &[usize] {
        &self.dims
    }

    fn partial_trace(&self, keep: &SubsystemSet) -> Result<DensityOperator> {
        check_keep(keep, self.n_parties())?;
        let rows = keep.indices();
        let m = self.reshape_bipartite(&rows);
        let dims = rows.iter().map(|&p| self.dims[p]).collect();
        let rho = &m * m.adjoint();
        Ok(DensityOperator { dims, mat: linalg::hermitian_part(&rho) })
    }
}

impl PartialTrace for DensityOperator {
    fn party_dims(&self) -> &[usize] {
        &self.dims
    }

    fn partial_trace(&self, keep: &SubsystemSet) -> Result<DensityOperator> {
        check_keep(keep, self.n_parties())?;
        let rows = keep.indices();
        let (map, nk, nr) = split_indices(&self.dims, &rows);
        // full index of (kept, traced) pair
        let mut full = vec![0usize; nk * nr];
        for (i, &(k, r)) in map.iter().enumerate() {
            full[r * nk + k] = i;
        }
        let mut out = CMatrix::zeros(nk, nk);
        for r in 0..nr {
            let block = &full[r * nk..(r + 1) * nk];
            for (a, &ia) in block.iter().enumerate() {
                for (b, &ib) in block.iter().enumerate() {
                    out[(a, b)] += self.mat[(ia, ib)];
                }
            }
        }
        let dims = rows.iter().map(|&p| self.dims[p]).collect();
        Ok(DensityOperator { dims, mat: linalg::hermitian_part(&out) })
    }
}

pub fn partial_trace<S: PartialTrace + ?Sized>(state: &S, keep: &SubsystemSet) -> Result<DensityOperator> {
    state.partial_trace(keep)
}

pub fn tensor_product(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    let amps = a.amps.iter().flat_map(|x| b.amps.iter().map(move |y| x * y)).collect();
    StateVector::new(dims, amps)
}

/// `-Σ λ log₂ λ` over eigenvalues above 1e-12.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let ev = rho.eigenvalues();
    if let Some(&min) = ev.first() {
        if min < -VALIDITY {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
    }
    Ok(linalg::shannon_bits(ev, ZERO_CUTOFF))
}

/// `|⟨a|b⟩|²`.
pub fn fidelity_overlap(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// Entropy of the reduction onto `set`; the empty set has entropy 0.
pub fn subsystem_entropy<S: PartialTrace + ?Sized>(state: &S, set: &SubsystemSet) -> Result<f64> {
    if set.is_empty() {
        return Ok(0.0);
    }
    von_neumann_entropy(&state.partial_trace(set)?)
}

pub(crate) fn check_dense_limit(dim: usize) -> Result<()> {
    if dim > MAX_DENSE_DIM {
        return Err(Error::SizeLimit { what: "total dimension", got: dim, limit: MAX_DENSE_DIM });
    }
    Ok(())
}

/// Column vector view, mostly for tests and interop.
pub fn as_column(psi: &StateVector) -> DVector<C64> {
    DVector::from_column_slice(psi.amps())
}
