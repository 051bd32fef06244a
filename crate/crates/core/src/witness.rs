//! Separable ensembles, the S ⊂ B ⊂ W ⊂ GHZ hierarchy and entanglement witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tensor::{check_probabilities, DensityOperator, StateVector, SubsystemSet};
use crate::tolerance::{VALIDITY, WITNESS};

/// `Σ_i p_i ρ_i^{(1)} ⊗ … ⊗ ρ_i^{(N)}` in unassembled form.
#[derive(Debug, Clone)]
pub struct SeparableEnsemble {
    weights: Vec<f64>,
    factors: Vec<Vec<DensityOperator>>,
}

impl SeparableEnsemble {
    pub fn new(weights: Vec<f64>, factors: Vec<Vec<DensityOperator>>) -> Result<Self> {
        check_probabilities(&weights)?;
        if weights.len() != factors.len() || factors.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} product terms",
                weights.len(),
                factors.len()
            )));
        }
        let party_dims = |term: &[DensityOperator]| term.iter().map(|r| r.dim()).collect::<Vec<_>>();
        let dims = party_dims(&factors[0]);
        if dims.is_empty() {
            return Err(Error::DimensionMismatch("product term without factors".into()));
        }
        for term in &factors {
            if party_dims(term) != dims {
                return Err(Error::DimensionMismatch(format!(
                    "factor dimensions {:?} differ from {dims:?}",
                    party_dims(term)
                )));
            }
        }
        Ok(SeparableEnsemble { weights, factors })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn factors(&self) -> &[Vec<DensityOperator>] {
        &self.factors
    }

    pub fn party_dims(&self) -> Vec<usize> {
        self.factors[0].iter().map(|r| r.dim()).collect()
    }
}

pub fn assemble_separable(ensemble: &SeparableEnsemble) -> Result<DensityOperator> {
    let dims = ensemble.party_dims();
    let total: usize = dims.iter().product();
    let mut mat = CMatrix::zeros(total, total);
    for (p, term) in ensemble.weights.iter().zip(&ensemble.factors) {
        mat += linalg::kron_all(term.iter().map(|r| r.matrix())).scale(*p);
    }
    DensityOperator::new(dims, mat)
}

/// Levels of the three-qubit mixed-state hierarchy, ordered by inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HierarchyLevel {
    S,
    B,
    W,
    #[serde(rename = "GHZ")]
    Ghz,
}

impl fmt::Display for HierarchyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HierarchyLevel::S => "S",
            HierarchyLevel::B => "B",
            HierarchyLevel::W => "W",
            HierarchyLevel::Ghz => "GHZ",
        })
    }
}

/// Hermitian observable that is nonnegative on every state of `certified_class`.
#[derive(Debug, Clone)]
pub struct WitnessOperator {
    pub name: String,
    pub observable: CMatrix,
    pub certified_class: HierarchyLevel,
    pub threshold_note: String,
}

impl WitnessOperator {
    pub fn new(
        name: impl Into<String>,
        observable: CMatrix,
        certified_class: HierarchyLevel,
        threshold_note: impl Into<String>,
    ) -> Result<Self> {
        if !observable.is_square() || linalg::hermiticity_defect(&observable) > VALIDITY {
            return Err(Error::InvalidArgument("witness observable must be Hermitian".into()));
        }
        Ok(WitnessOperator { name: name.into(), observable, certified_class, threshold_note: threshold_note.into() })
    }

    /// `U A U†` for a product unitary `U = ⊗ U_j`.
    pub fn rotated(&self, local_unitaries: &[CMatrix]) -> Result<Self> {
        let u = linalg::kron_all(local_unitaries);
        if u.nrows() != self.observable.nrows() {
            return Err(Error::DimensionMismatch("local unitaries do not match the witness dimension".into()));
        }
        Ok(WitnessOperator { observable: &u * &self.observable * u.adjoint(), ..self.clone() })
    }
}

fn projector_witness(name: &str, bound: f64, psi: &StateVector, class: HierarchyLevel, note: &str) -> WitnessOperator {
    let proj = linalg::outer(psi.amps());
    let obs = linalg::identity(proj.nrows()).scale(bound) - proj;
    WitnessOperator::new(name, obs, class, note).expect("projector witness is Hermitian")
}

/// `¾𝕀 − |GHZ⟩⟨GHZ|`, nonnegative on the W class.
pub fn ghz_witness() -> WitnessOperator {
    projector_witness(
        "A_GHZ",
        0.75,
        &StateVector::ghz(3),
        HierarchyLevel::W,
        "W-class states have GHZ fidelity at most 3/4",
    )
}

/// `⅔𝕀 − |W⟩⟨W|`, nonnegative on biseparable states.
pub fn w_witness() -> WitnessOperator {
    projector_witness(
        "A_W",
        2.0 / 3.0,
        &StateVector::w(3),
        HierarchyLevel::B,
        "biseparable states have W fidelity at most 2/3",
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Detected,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessResult {
    pub witness: String,
    pub value: f64,
    pub verdict: Verdict,
}

pub fn witness_expectation(w: &WitnessOperator, rho: &DensityOperator) -> Result<WitnessResult> {
    let value = rho.expectation(&w.observable)?;
    let verdict = if value < -WITNESS { Verdict::Detected } else { Verdict::Inconclusive };
    Ok(WitnessResult { witness: w.name.clone(), value, verdict })
}

#[derive(Debug, Clone, Serialize)]
pub struct HierarchyLabel {
    /// Lowest level the state is certified to reach.
    pub label: HierarchyLevel,
    /// False when no witness fired, so `label` is only the default.
    pub conclusive: bool,
    pub basis: Vec<String>,
    pub expectations: Vec<WitnessResult>,
}

/// Certifies the highest hierarchy level the shipped witnesses can establish.
///
/// A negative `A_GHZ` value puts the state outside W, so it needs GHZ-class
/// content. A negative `A_W` value puts it outside B.
pub fn hierarchy_report(rho: &DensityOperator) -> Result<HierarchyLabel> {
    if rho.dims() != [2, 2, 2] {
        return Err(Error::UnsupportedDims {
            dims: rho.dims().to_vec(),
            reason: "hierarchy report needs three qubits".into(),
        });
    }
    let mut label = HierarchyLevel::S;
    let mut basis = Vec::new();
    let mut expectations = Vec::new();
    for w in [ghz_witness(), w_witness()] {
        let r = witness_expectation(&w, rho)?;
        if r.verdict == Verdict::Detected {
            let reached = match w.certified_class {
                HierarchyLevel::S => HierarchyLevel::B,
                HierarchyLevel::B => HierarchyLevel::W,
                HierarchyLevel::W | HierarchyLevel::Ghz => HierarchyLevel::Ghz,
            };
            basis.push(format!("outside {} per {} (value {:.6})", w.certified_class, w.name, r.value));
            label = label.max(reached);
        }
        expectations.push(r);
    }
    Ok(HierarchyLabel { label, conclusive: !basis.is_empty(), basis, expectations })
}

/// A partition of the parties `1..=N` into nonempty disjoint blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<SubsystemSet>,
}

impl Partition {
    pub fn new(mut blocks: Vec<SubsystemSet>, parties: usize) -> Result<Self> {
        let mut seen = SubsystemSet::empty();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::EmptySubsystemSet);
            }
            b.validate(parties)?;
            if !seen.is_disjoint(b) {
                return Err(Error::OverlappingSubsystems);
            }
            seen = seen.union(b);
        }
        if seen.len() != parties {
            return Err(Error::InvalidArgument(format!("blocks {blocks:?} do not cover all {parties} parties")));
        }
        blocks.sort_by_key(|b| b.labels().next());
        Ok(Partition { blocks })
    }

    /// Every party in its own block.
    pub fn finest(parties: usize) -> Self {
        Partition { blocks: (1..=parties).map(|p| SubsystemSet::new([p])).collect() }
    }

    pub fn blocks(&self) -> &[SubsystemSet] {
        &self.blocks
    }

    pub fn parties(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    /// Number of blocks; a state product across this partition is `k`-separable.
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    /// True if every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.parties() == other.parties()
            && self.blocks.iter().all(|b| other.blocks.iter().any(|o| b.union(o) == *o))
    }

    /// All `2^{N-1} − 1` bipartitions.
    pub fn bipartitions(parties: usize) -> Vec<Partition> {
        SubsystemSet::all_nonempty(parties)
            .into_iter()
            .filter(|s| s.contains(1) && s.len() < parties)
            .map(|s| Partition::new(vec![s.clone(), s.complement(parties)], parties).expect("bipartition"))
            .collect()
    }
}
