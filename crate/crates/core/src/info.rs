//! Entropy vectors, strong subadditivity and the Holevo bound.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tensor::{check_dense_limit, check_probabilities, subsystem_entropy, DensityOperator, PartialTrace, SubsystemSet};
use crate::tolerance::ENTROPY_SLACK;

/// Values keyed by subsystem set, serialized as a JSON object with keys like `"{1,3}"`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SetValues(pub Vec<(SubsystemSet, f64)>);

impl SetValues {
    pub fn get(&self, set: &SubsystemSet) -> Option<f64> {
        self.0.iter().find(|(s, _)| s == set).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(SubsystemSet, f64)> {
        self.0.iter()
    }
}

impl Serialize for SetValues {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

/// `S(A)` in bits for every nonempty `A ⊆ {1, …, N}`.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyVector {
    pub n_parties: usize,
    pub entries: SetValues,
}

impl EntropyVector {
    /// `S(A)`, with `S(∅) = 0`.
    pub fn entropy(&self, set: &SubsystemSet) -> Result<f64> {
        if set.is_empty() {
            return Ok(0.0);
        }
        set.validate(self.n_parties)?;
        Ok(self.entries.get(set).expect("every nonempty subset is present"))
    }

    /// `I(A:B) = S(A) + S(B) − S(AB)`.
    pub fn mutual_information(&self, a: &SubsystemSet, b: &SubsystemSet) -> Result<f64> {
        if !a.is_disjoint(b) {
            return Err(Error::OverlappingSubsystems);
        }
        Ok(self.entropy(a)? + self.entropy(b)? - self.entropy(&a.union(b))?)
    }
}

pub fn entropy_vector<S: PartialTrace + ?Sized>(state: &S) -> Result<EntropyVector> {
    let dims = state.party_dims();
    check_dense_limit(dims.iter().product())?;
    let n = dims.len();
    let entries = SubsystemSet::all_nonempty(n)
        .into_iter()
        .map(|set| Ok((set.clone(), subsystem_entropy(state, &set)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyVector { n_parties: n, entries: SetValues(entries) })
}

#[derive(Debug, Clone, Serialize)]
pub struct SsaReport {
    /// `S(AB) + S(BC)`.
    pub lhs: f64,
    /// `S(B) + S(ABC)`.
    pub rhs: f64,
    pub holds: bool,
    /// `I(A:BC) − I(A:B)`, equal to `lhs − rhs`.
    pub mutual_info_gap: f64,
}

/// Strong subadditivity `S(AB) + S(BC) ≥ S(B) + S(ABC)` for pairwise disjoint sets.
pub fn check_ssa<S: PartialTrace + ?Sized>(
    state: &S,
    a: &SubsystemSet,
    b: &SubsystemSet,
    c: &SubsystemSet,
) -> Result<SsaReport> {
    if !a.is_disjoint(b) || !b.is_disjoint(c) || !a.is_disjoint(c) {
        return Err(Error::OverlappingSubsystems);
    }
    let s = |set: &SubsystemSet| subsystem_entropy(state, set);
    let ab = a.union(b);
    let bc = b.union(c);
    let abc = ab.union(c);
    let lhs = s(&ab)? + s(&bc)?;
    let rhs = s(b)? + s(&abc)?;
    let i_a_bc = s(a)? + s(&bc)? - s(&abc)?;
    let i_a_b = s(a)? + s(b)? - s(&ab)?;
    Ok(SsaReport { lhs, rhs, holds: lhs >= rhs - ENTROPY_SLACK, mutual_info_gap: i_a_bc - i_a_b })
}

#[derive(Debug, Clone, Serialize)]
pub struct HolevoReport {
    /// `I(X:B)` of the classical-quantum state.
    pub mutual_info: f64,
    /// `log₂ dim B`.
    pub bound: f64,
    pub holds: bool,
}

/// Classical-quantum state `Σ_x p_x |x⟩⟨x| ⊗ ρ_x` with the register as party 1.
pub fn cq_state(px: &[f64], states: &[DensityOperator]) -> Result<DensityOperator> {
    check_probabilities(px)?;
    if px.len() != states.len() || states.is_empty() {
        return Err(Error::DimensionMismatch(format!("{} probabilities for {} states", px.len(), states.len())));
    }
    let dims_b = states[0].dims().to_vec();
    if states.iter().any(|s| s.dims() != dims_b.as_slice()) {
        return Err(Error::DimensionMismatch("signal states have different dims".into()));
    }
    let k = px.len();
    let db = states[0].dim();
    let mut mat = CMatrix::zeros(k * db, k * db);
    for (x, (p, rho)) in px.iter().zip(states).enumerate() {
        mat.view_mut((x * db, x * db), (db, db)).copy_from(&rho.matrix().scale(*p));
    }
    let dims = std::iter::once(k).chain(dims_b).collect();
    DensityOperator::new(dims, linalg::hermitian_part(&mat))
}

/// `I(X:B) = S(X) + S(B) − S(XB)` against the bound `log₂ dim B`.
pub fn holevo_demo(px: &[f64], states: &[DensityOperator]) -> Result<HolevoReport> {
    let cq = cq_state(px, states)?;
    let n = cq.n_parties();
    let x = SubsystemSet::new([1]);
    let b = SubsystemSet::new(2..=n);
    let mutual_info = subsystem_entropy(&cq, &x)? + subsystem_entropy(&cq, &b)? - subsystem_entropy(&cq, &x.union(&b))?;
    let bound = (states[0].dim() as f64).log2();
    Ok(HolevoReport { mutual_info, bound, holds: mutual_info <= bound + ENTROPY_SLACK })
}
