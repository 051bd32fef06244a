//! JSON file formats for states, graphs, MPS, covariance matrices and the CLI config.
//!
//! Complex numbers are `[re, im]` pairs. Amplitudes are row-major with
//! subsystem 1 slowest. MPS site entries run over the physical index first,
//! then row, then column.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gaussian::{BosonicCovariance, CovarianceKind, Covariance, FermionicCovariance, RMatrix};
use crate::linalg::{c, CMatrix};
use crate::measures::OptimizerConfig;
use crate::mps::{Boundary, MatrixProductState};
use crate::stabilizer::Graph;
use crate::tensor::{DensityOperator, StateVector};
use crate::tolerance::Tolerances;
use num_complex::Complex64 as C64;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: Vec<usize>,
    amps: Option<Vec<[f64; 2]>>,
    mat: Option<Vec<Vec<[f64; 2]>>>,
}

/// A loaded state file.
#[derive(Debug, Clone, PartialEq)]
pub enum StateInput {
    Pure(StateVector),
    Mixed(DensityOperator),
}

impl StateInput {
    pub fn to_density(&self) -> DensityOperator {
        match self {
            StateInput::Pure(psi) => psi.to_density(),
            StateInput::Mixed(rho) => rho.clone(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            StateInput::Pure(psi) => psi.dims(),
            StateInput::Mixed(rho) => rho.dims(),
        }
    }

    pub fn pure(&self) -> Result<&StateVector> {
        match self {
            StateInput::Pure(psi) => Ok(psi),
            StateInput::Mixed(_) => Err(Error::InvalidArgument("this analysis needs a pure state".into())),
        }
    }
}

fn malformed(what: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

fn complex(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|[re, im]| c(*re, *im)).collect()
}

fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn parse_state(text: &str) -> Result<StateInput> {
    let f: StateFile = serde_json::from_str(text).map_err(|e| malformed("state file", e))?;
    match (f.amps, f.mat) {
        (Some(amps), None) => {
            StateVector::new(f.dims, complex(&amps)).map(StateInput::Pure).map_err(|e| malformed("state file", e))
        }
        (None, Some(rows)) => {
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(malformed("state file", "density matrix is not square"));
            }
            let mat = CMatrix::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1]));
            DensityOperator::new(f.dims, mat).map(StateInput::Mixed).map_err(|e| malformed("state file", e))
        }
        _ => Err(malformed("state file", "expected exactly one of \"amps\" or \"mat\"")),
    }
}

pub fn state_to_json(psi: &StateVector) -> Value {
    json!({ "dims": psi.dims(), "amps": pairs(psi.amps()) })
}

pub fn density_to_json(rho: &DensityOperator) -> Value {
    let m = rho.matrix();
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
    json!({ "dims": rho.dims(), "mat": rows })
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    serde_json::from_str(text).map_err(|e| malformed("graph file", e))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MpsFile {
    boundary: Boundary,
    sites: Vec<MpsSiteFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MpsSiteFile {
    /// `[physical, left bond, right bond]`.
    shape: [usize; 3],
    entries: Vec<[f64; 2]>,
}

pub fn parse_mps(text: &str) -> Result<MatrixProductState> {
    let f: MpsFile = serde_json::from_str(text).map_err(|e| malformed("MPS file", e))?;
    let mut sites = Vec::with_capacity(f.sites.len());
    for (j, s) in f.sites.iter().enumerate() {
        let [d, l, r] = s.shape;
        if s.entries.len() != d * l * r {
            return Err(malformed("MPS file", format!("site {j} has {} entries for shape {:?}", s.entries.len(), s.shape)));
        }
        let z = complex(&s.entries);
        sites.push((0..d).map(|k| CMatrix::from_row_slice(l, r, &z[k * l * r..(k + 1) * l * r])).collect());
    }
    MatrixProductState::new(sites, f.boundary).map_err(|e| malformed("MPS file", e))
}

pub fn mps_to_json(m: &MatrixProductState) -> Value {
    let sites = m
        .sites()
        .iter()
        .map(|site| {
            let (l, r) = site[0].shape();
            let entries = site
                .iter()
                .flat_map(|mat| (0..l).flat_map(move |i| (0..r).map(move |j| [mat[(i, j)].re, mat[(i, j)].im])))
                .collect();
            MpsSiteFile { shape: [site.len(), l, r], entries }
        })
        .collect();
    serde_json::to_value(MpsFile { boundary: m.boundary(), sites }).expect("MPS file serializes")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CovarianceFile {
    kind: CovarianceKind,
    n_modes: usize,
    gamma: Vec<Vec<f64>>,
    #[serde(default = "xxpp")]
    ordering: String,
}

fn xxpp() -> String {
    "xxpp".into()
}

#[derive(Debug, Clone, PartialEq)]
pub enum CovarianceInput {
    Bosonic(BosonicCovariance),
    Fermionic(FermionicCovariance),
}

pub fn parse_covariance(text: &str) -> Result<CovarianceInput> {
    let f: CovarianceFile = serde_json::from_str(text).map_err(|e| malformed("covariance file", e))?;
    if f.ordering != "xxpp" {
        return Err(malformed("covariance file", format!("unsupported ordering {:?}", f.ordering)));
    }
    let n = 2 * f.n_modes;
    if f.gamma.len() != n || f.gamma.iter().any(|r| r.len() != n) {
        return Err(malformed("covariance file", format!("gamma must be {n}×{n} for {} modes", f.n_modes)));
    }
    let gamma = RMatrix::from_fn(n, n, |i, j| f.gamma[i][j]);
    match f.kind {
        CovarianceKind::Bosonic => BosonicCovariance::new(gamma).map(CovarianceInput::Bosonic),
        CovarianceKind::Fermionic => FermionicCovariance::new(gamma).map(CovarianceInput::Fermionic),
    }
    .map_err(|e| malformed("covariance file", e))
}

pub fn covariance_to_json<C: Covariance>(g: &C, kind: CovarianceKind) -> Value {
    let m = g.gamma();
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    json!({ "kind": kind, "n_modes": g.n_modes(), "gamma": rows, "ordering": "xxpp" })
}

/// CLI configuration file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tolerances: Tolerances,
    pub optimizer: OptimizerConfig,
    pub seed: Option<u64>,
}

pub fn parse_config(text: &str) -> Result<Config> {
    serde_json::from_str(text).map_err(|e| malformed("config file", e))
}
