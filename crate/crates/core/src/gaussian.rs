//! Gaussian covariance matrices in `xxpp` ordering, `R = (x_1 … x_N, p_1 … p_N)`.
//!
//! Mode `j` (1-based label) owns rows `j-1` and `N+j-1`; fermionic Majorana
//! operators use the same split.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tensor::SubsystemSet;
use crate::tolerance::{PURITY, SYMPLECTIC_PAIRING, VALIDITY};

pub type RMatrix = DMatrix<f64>;

/// `σ = [[0, 𝕀], [−𝕀, 0]]`.
pub fn symplectic_form(n_modes: usize) -> RMatrix {
    RMatrix::from_fn(2 * n_modes, 2 * n_modes, |r, c| {
        if c == r + n_modes {
            1.0
        } else if r == c + n_modes {
            -1.0
        } else {
            0.0
        }
    })
}

fn mode_count(gamma: &RMatrix) -> Result<usize> {
    if !gamma.is_square() || !gamma.nrows().is_multiple_of(2) || gamma.nrows() == 0 {
        return Err(Error::InvalidCovariance(format!(
            "covariance must be 2N×2N with N ≥ 1, got {}×{}",
            gamma.nrows(),
            gamma.ncols()
        )));
    }
    Ok(gamma.nrows() / 2)
}

fn max_abs(m: &RMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

/// Indices of the rows owned by the kept modes, x block first.
fn kept_rows(n_modes: usize, keep: &SubsystemSet) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::EmptySubsystemSet);
    }
    keep.validate(n_modes)?;
    let idx = keep.indices();
    Ok(idx.iter().copied().chain(idx.iter().map(|i| i + n_modes)).collect())
}

fn principal_submatrix(gamma: &RMatrix, rows: &[usize]) -> RMatrix {
    RMatrix::from_fn(rows.len(), rows.len(), |r, c| gamma[(rows[r], rows[c])])
}

pub trait Covariance: Sized {
    fn gamma(&self) -> &RMatrix;
    fn from_gamma(gamma: RMatrix) -> Result<Self>;

    fn n_modes(&self) -> usize {
        self.gamma().nrows() / 2
    }
}

/// Real symmetric `γ` with `γ + iσ ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BosonicCovariance {
    gamma: RMatrix,
}

impl BosonicCovariance {
    pub fn new(gamma: RMatrix) -> Result<Self> {
        let n = mode_count(&gamma)?;
        let asym = max_abs(&(&gamma - gamma.transpose()));
        if asym > VALIDITY {
            return Err(Error::InvalidCovariance(format!("γ is not symmetric (defect {asym:e})")));
        }
        let gamma = (&gamma + gamma.transpose()) * 0.5;
        let mut h = to_complex(&gamma);
        h += to_complex(&symplectic_form(n)) * C64::new(0.0, 1.0);
        let min = linalg::hermitian_eigenvalues(&h)[0];
        if min < -VALIDITY {
            return Err(Error::InvalidCovariance(format!("γ + iσ has eigenvalue {min:e} < 0")));
        }
        Ok(BosonicCovariance { gamma })
    }

    pub fn vacuum(n_modes: usize) -> Self {
        BosonicCovariance { gamma: RMatrix::identity(2 * n_modes, 2 * n_modes) }
    }

    /// `ν 𝕀` on every mode.
    pub fn thermal(n_modes: usize, nu: f64) -> Result<Self> {
        Self::new(RMatrix::identity(2 * n_modes, 2 * n_modes) * nu)
    }

    /// Single-mode `diag(e^{2r}, e^{−2r})`.
    pub fn squeezed(r: f64) -> Self {
        BosonicCovariance { gamma: RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![(2.0 * r).exp(), (-2.0 * r).exp()])) }
    }

    /// `S γ Sᵀ`.
    pub fn transform(&self, s: &RMatrix) -> Result<Self> {
        if s.shape() != self.gamma.shape() {
            return Err(Error::DimensionMismatch("symplectic matrix does not match γ".into()));
        }
        Self::new(s * &self.gamma * s.transpose())
    }
}

impl Covariance for BosonicCovariance {
    fn gamma(&self) -> &RMatrix {
        &self.gamma
    }

    fn from_gamma(gamma: RMatrix) -> Result<Self> {
        Self::new(gamma)
    }
}

/// Real antisymmetric `γ` with `γᵀγ ⪯ 𝕀`.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionicCovariance {
    gamma: RMatrix,
}

impl FermionicCovariance {
    pub fn new(gamma: RMatrix) -> Result<Self> {
        mode_count(&gamma)?;
        let sym = max_abs(&(&gamma + gamma.transpose()));
        if sym > VALIDITY {
            return Err(Error::InvalidCovariance(format!("γ is not antisymmetric (defect {sym:e})")));
        }
        let gamma = (&gamma - gamma.transpose()) * 0.5;
        let gtg = gamma.transpose() * &gamma;
        let max = SymmetricEigen::new(gtg).eigenvalues.iter().fold(f64::MIN, |a, &b| a.max(b));
        if max > 1.0 + VALIDITY {
            return Err(Error::InvalidCovariance(format!("γᵀγ has eigenvalue {max} > 1")));
        }
        Ok(FermionicCovariance { gamma })
    }

    /// Pure state pairing Majoranas `j` and `N+j`.
    pub fn vacuum(n_modes: usize) -> Self {
        FermionicCovariance { gamma: symplectic_form(n_modes) }
    }
}

impl Covariance for FermionicCovariance {
    fn gamma(&self) -> &RMatrix {
        &self.gamma
    }

    fn from_gamma(gamma: RMatrix) -> Result<Self> {
        Self::new(gamma)
    }
}

/// Principal submatrix on the kept modes' rows and columns.
pub fn restrict_modes<C: Covariance>(g: &C, keep: &SubsystemSet) -> Result<C> {
    let rows = kept_rows(g.n_modes(), keep)?;
    C::from_gamma(principal_submatrix(g.gamma(), &rows))
}

fn sqrt_psd(m: &RMatrix) -> RMatrix {
    let eig = SymmetricEigen::new(m.clone());
    let roots = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    &eig.eigenvectors * RMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose()
}

/// Symplectic eigenvalues `D_1 ≥ … ≥ D_N`.
///
/// `γ^{1/2} (iσ) γ^{1/2}` is Hermitian and similar to `iσγ`; its spectrum is
/// `±D_j`.
pub fn symplectic_eigenvalues(g: &BosonicCovariance) -> Result<Vec<f64>> {
    let n = g.n_modes();
    let root = to_complex(&sqrt_psd(&g.gamma));
    let isigma = to_complex(&symplectic_form(n)) * C64::new(0.0, 1.0);
    let mut ev = linalg::hermitian_eigenvalues(&(&root * isigma * &root));
    ev.reverse();
    for k in 0..n {
        let (hi, lo) = (ev[k], ev[2 * n - 1 - k]);
        if (hi + lo).abs() > SYMPLECTIC_PAIRING * hi.abs().max(1.0) {
            return Err(Error::NumericalDegeneracy(format!("unpaired spectrum of iσγ: {hi} and {lo}")));
        }
    }
    Ok(ev[..n].to_vec())
}

pub fn is_pure_gaussian(g: &BosonicCovariance) -> Result<bool> {
    Ok(symplectic_eigenvalues(g)?.iter().all(|d| (d - 1.0).abs() < PURITY))
}

/// `g(D) = ((D+1)/2) log₂((D+1)/2) − ((D−1)/2) log₂((D−1)/2)`, zero at `D = 1`.
pub fn mode_entropy(d: f64) -> f64 {
    let plus = (d + 1.0) / 2.0;
    let minus = (d - 1.0) / 2.0;
    let xlogx = |x: f64| if x > 1e-15 { x * x.log2() } else { 0.0 };
    (xlogx(plus) - xlogx(minus)).max(0.0)
}

/// Von Neumann entropy (bits) from the symplectic spectrum.
pub fn gaussian_mode_entropy(g: &BosonicCovariance) -> Result<f64> {
    Ok(symplectic_eigenvalues(g)?.into_iter().map(mode_entropy).sum())
}

/// Symmetric 3×3 matrix with `a` on the diagonal and `off` elsewhere.
fn circulant3(a: f64, off: f64) -> RMatrix {
    RMatrix::from_fn(3, 3, |r, c| if r == c { a } else { off })
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyCandidate {
    pub label: String,
    pub b: f64,
    pub c: f64,
    pub valid: bool,
    pub pure: bool,
    /// Smallest eigenvalue of `γ + iσ`.
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub a: f64,
    pub chosen: FamilyCandidate,
    pub candidates: Vec<FamilyCandidate>,
    #[serde(skip)]
    pub covariance: BosonicCovariance,
}

fn family_gamma(a: f64, b: f64, c: f64) -> RMatrix {
    let mut g = RMatrix::zeros(6, 6);
    g.view_mut((0, 0), (3, 3)).copy_from(&circulant3(a, b));
    g.view_mut((3, 3), (3, 3)).copy_from(&circulant3(a, c));
    g
}

/// Pure, genuinely three-mode entangled `γ = circ(a,b,b) ⊕ circ(a,c,c)`.
///
/// Two closed forms for `(b, c)` are tried with both sign assignments. The
/// first is `−(1 ± a² + r)/(4a)`. The second is `(a² − 1 ± r)/(4a)`, which
/// solves `γ_x γ_p = 𝕀` for circulants. Here `r = √(1 − 10a² + 9a⁴)`. The
/// first candidate that is a valid pure covariance wins.
pub fn three_mode_family_report(a: f64) -> Result<FamilyReport> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("family parameter must exceed 1, got {a}")));
    }
    let r = (1.0 - 10.0 * a * a + 9.0 * a.powi(4)).sqrt();
    let q = 4.0 * a;
    let raw = [
        ("sum-form (b:+, c:−)", -(1.0 + a * a + r) / q, -(1.0 - a * a + r) / q),
        ("sum-form (b:−, c:+)", -(1.0 - a * a + r) / q, -(1.0 + a * a + r) / q),
        ("inverse-form (b:+, c:−)", (a * a - 1.0 + r) / q, (a * a - 1.0 - r) / q),
        ("inverse-form (b:−, c:+)", (a * a - 1.0 - r) / q, (a * a - 1.0 + r) / q),
    ];
    let sigma = to_complex(&symplectic_form(3)) * C64::new(0.0, 1.0);
    let mut candidates = Vec::new();
    let mut chosen: Option<(FamilyCandidate, BosonicCovariance)> = None;
    for (label, b, c) in raw {
        let gamma = family_gamma(a, b, c);
        let min_eigenvalue = linalg::hermitian_eigenvalues(&(to_complex(&gamma) + &sigma))[0];
        let cov = BosonicCovariance::new(gamma).ok();
        let pure = match &cov {
            Some(g) => is_pure_gaussian(g).unwrap_or(false),
            None => false,
        };
        let cand = FamilyCandidate { label: label.into(), b, c, valid: cov.is_some(), pure, min_eigenvalue };
        if chosen.is_none() && pure {
            chosen = Some((cand.clone(), cov.expect("pure implies valid")));
        }
        candidates.push(cand);
    }
    let (chosen, covariance) = chosen.ok_or_else(|| {
        Error::NumericalDegeneracy(format!("no (b, c) assignment gives a valid pure covariance at a = {a}"))
    })?;
    Ok(FamilyReport { a, chosen, candidates, covariance })
}

pub fn three_mode_family(a: f64) -> Result<BosonicCovariance> {
    Ok(three_mode_family_report(a)?.covariance)
}

/// `exp(σH)` for a random symmetric `H`; satisfies `SσSᵀ = σ`.
pub fn random_symplectic<R: Rng + ?Sized>(n_modes: usize, scale: f64, rng: &mut R) -> RMatrix {
    let m = 2 * n_modes;
    let x = RMatrix::from_fn(m, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let h = (&x + x.transpose()) * (0.5 * scale / (m as f64).sqrt());
    (symplectic_form(n_modes) * h).exp()
}

#[derive(Debug, Clone, Serialize)]
pub struct WilliamsonReport {
    pub n_modes: usize,
    pub symplectic_eigenvalues: Vec<f64>,
    /// `diag(D, D)` in `xxpp` ordering.
    pub normal_form_diagonal: Vec<f64>,
    pub pure: bool,
    pub entropy_bits: f64,
}

pub fn williamson_report(g: &BosonicCovariance) -> Result<WilliamsonReport> {
    let d = symplectic_eigenvalues(g)?;
    Ok(WilliamsonReport {
        n_modes: g.n_modes(),
        normal_form_diagonal: d.iter().chain(d.iter()).copied().collect(),
        pure: d.iter().all(|x| (x - 1.0).abs() < PURITY),
        entropy_bits: d.iter().copied().map(mode_entropy).sum(),
        symplectic_eigenvalues: d,
    })
}

/// Tag recorded in covariance files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CovarianceKind {
    Bosonic,
    Fermionic,
}
