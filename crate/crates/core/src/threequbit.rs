//! Three-qubit pure states: local-unitary normal form, the Cayley
//! hyperdeterminant, tensor rank and the six SLOCC classes.
//!
//! Amplitudes `α_{ijk}` are indexed with qubit 1 slowest, so the slice
//! matrices are `(T_i)_{jk} = α_{ijk}`.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::bipartite::mixed_concurrence;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::tensor::{apply_local_amps, subsystem_entropy, PartialTrace, StateVector, SubsystemSet};
use crate::tolerance::{Tolerances, ENTROPY_SLACK};

const DIMS: [usize; 3] = [2, 2, 2];

fn require_three_qubits(psi: &StateVector) -> Result<()> {
    if psi.is_qubits(3) {
        Ok(())
    } else {
        Err(Error::UnsupportedDims { dims: psi.dims().to_vec(), reason: "expected three qubits".into() })
    }
}

/// The two 2×2 slices of a three-qubit amplitude tensor along qubit 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSlices {
    pub t0: [[C64; 2]; 2],
    pub t1: [[C64; 2]; 2],
}

impl CoefficientSlices {
    pub fn from_amps(a: &[C64]) -> Self {
        assert_eq!(a.len(), 8, "three-qubit amplitudes");
        CoefficientSlices { t0: [[a[0], a[1]], [a[2], a[3]]], t1: [[a[4], a[5]], [a[6], a[7]]] }
    }

    pub fn of(psi: &StateVector) -> Result<Self> {
        require_three_qubits(psi)?;
        Ok(Self::from_amps(psi.amps()))
    }

    pub fn to_amps(&self) -> [C64; 8] {
        let [[a, b], [c, d]] = self.t0;
        let [[e, f], [g, h]] = self.t1;
        [a, b, c, d, e, f, g, h]
    }

    /// Coefficients of `det(T0 + z T1) = lead z² + cross z + constant`.
    pub fn det_quadratic(&self) -> (C64, C64, C64) {
        let (t0, t1) = (&self.t0, &self.t1);
        let lead = det2(t1);
        let cross = t0[0][0] * t1[1][1] + t0[1][1] * t1[0][0] - t0[0][1] * t1[1][0] - t0[1][0] * t1[0][1];
        (lead, cross, det2(t0))
    }
}

fn det2(m: &[[C64; 2]; 2]) -> C64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Cayley hyperdeterminant of raw (not necessarily normalized) amplitudes.
///
/// Evaluated as the ε-contraction
/// `-½ Σ α_{i1j1k1} α_{i2j2k2} α_{i3j3k3} α_{i4j4k4} ε_{i1i2} ε_{i3i4} ε_{j1j2} ε_{j3j4} ε_{k1k3} ε_{k2k4}`
/// with `ε_{01} = +1 = -ε_{10}`. Pairing the third index differently from the
/// first two is what keeps the sum from cancelling identically.
pub fn hyperdeterminant_amps(a: &[C64]) -> C64 {
    assert_eq!(a.len(), 8, "three-qubit amplitudes");
    let at = |i: usize, j: usize, k: usize| a[4 * i + 2 * j + k];
    let eps = |x: usize| if x == 0 { 1.0 } else { -1.0 };
    let mut sum = ZERO;
    for bits in 0..64usize {
        let [i1, i3, j1, j3, k1, k2] = [0, 1, 2, 3, 4, 5].map(|b| bits >> b & 1);
        let (i2, i4, j2, j4, k3, k4) = (1 - i1, 1 - i3, 1 - j1, 1 - j3, 1 - k1, 1 - k2);
        let sign = eps(i1) * eps(i3) * eps(j1) * eps(j3) * eps(k1) * eps(k2);
        sum += at(i1, j1, k1) * at(i2, j2, k2) * at(i3, j3, k3) * at(i4, j4, k4) * sign;
    }
    sum * -0.5
}

pub fn hyperdeterminant(psi: &StateVector) -> Result<C64> {
    require_three_qubits(psi)?;
    Ok(hyperdeterminant_amps(psi.amps()))
}

/// `τ₃ = |Det(ψ)|`; 1/4 on GHZ, 0 on the W class.
pub fn three_tangle(psi: &StateVector) -> Result<f64> {
    Ok(hyperdeterminant(psi)?.norm())
}

/// `λ₀|000⟩ + λ₁e^{iφ}|100⟩ + λ₂|101⟩ + λ₃|110⟩ + λ₄|111⟩` with `λ_i ≥ 0`, `φ ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcinNormalForm {
    pub lambda: [f64; 5],
    pub phi: f64,
}

impl AcinNormalForm {
    pub fn to_state(&self) -> StateVector {
        let l = self.lambda;
        let mut amps = [ZERO; 8];
        amps[0] = C64::new(l[0], 0.0);
        amps[4] = C64::from_polar(l[1], self.phi);
        amps[5] = C64::new(l[2], 0.0);
        amps[6] = C64::new(l[3], 0.0);
        amps[7] = C64::new(l[4], 0.0);
        StateVector::normalized(DIMS.to_vec(), amps.to_vec()).expect("normal form is nonzero")
    }
}

#[derive(Debug, Clone, Copy)]
enum FirstQubitRotation {
    /// Unitary whose first row is proportional to `(1, z)`.
    Root(C64),
    /// Exchange of |0⟩ and |1⟩, the `z → ∞` limit.
    Swap,
}

impl FirstQubitRotation {
    fn matrix(self) -> CMatrix {
        match self {
            FirstQubitRotation::Root(z) => {
                let n = (1.0 + z.norm_sqr()).sqrt();
                CMatrix::from_row_slice(2, 2, &[ONE / n, z / n, -z.conj() / n, ONE / n])
            }
            FirstQubitRotation::Swap => linalg::pauli_x(),
        }
    }

    fn modulus(self) -> f64 {
        match self {
            FirstQubitRotation::Root(z) => z.norm(),
            FirstQubitRotation::Swap => f64::INFINITY,
        }
    }
}

/// Roots of `det(T0 + z T1) = 0`, plus the swap when the quadratic degenerates.
fn vanishing_rotations(slices: &CoefficientSlices) -> Vec<FirstQubitRotation> {
    let (a, b, c) = slices.det_quadratic();
    let scale = slices.to_amps().iter().map(|x| x.norm_sqr()).sum::<f64>().max(f64::MIN_POSITIVE);
    let tiny = 1e-14 * scale;
    let polish = |mut z: C64| {
        for _ in 0..3 {
            let f = a * z * z + b * z + c;
            let df = a * z * 2.0 + b;
            if df.norm() <= tiny {
                break;
            }
            z -= f / df;
        }
        z
    };
    let mut out = Vec::new();
    if a.norm() > tiny {
        let disc = (b * b - a * c * 4.0).sqrt();
        // choose the sign that avoids cancellation
        let q = if (b.conj() * disc).re >= 0.0 { (b + disc) * -0.5 } else { (b - disc) * -0.5 };
        if q.norm() > tiny {
            out.push(FirstQubitRotation::Root(polish(q / a)));
            out.push(FirstQubitRotation::Root(polish(c / q)));
        } else {
            out.push(FirstQubitRotation::Root(ZERO));
        }
    } else {
        if b.norm() > tiny {
            out.push(FirstQubitRotation::Root(polish(-c / b)));
        } else if c.norm() <= tiny {
            out.push(FirstQubitRotation::Root(ZERO));
        }
        out.push(FirstQubitRotation::Swap);
    }
    out
}

fn phase_of(z: C64) -> f64 {
    z.arg()
}

/// Follows one choice of first-qubit rotation through to the normal form.
fn normal_form_from(amps: &[C64], rotation: FirstQubitRotation) -> AcinNormalForm {
    let rotated = apply_local_amps(&DIMS, amps, 0, &rotation.matrix()).expect("qubit operator");
    let slices = CoefficientSlices::from_amps(&rotated);
    let t0 = CMatrix::from_row_slice(2, 2, &slices.t0.concat());
    let t1 = CMatrix::from_row_slice(2, 2, &slices.t1.concat());

    // When T0' vanishes the first qubit factors off; diagonalize T1' instead.
    let target = if t0.norm() > 1e-9 * t1.norm().max(1.0) { &t0 } else { &t1 };
    let (w, _, v_adj) = linalg::svd_sorted(target);
    let u2 = w.adjoint();
    let u3 = v_adj.map(|z| z.conj());
    let t0 = &u2 * &t0 * u3.transpose();
    let t1 = &u2 * &t1 * u3.transpose();

    let lambda0 = t0[(0, 0)].norm();
    let beta = [t1[(0, 0)], t1[(0, 1)], t1[(1, 0)], t1[(1, 1)]];
    let mags = beta.map(|z| z.norm());
    let negligible = |m: f64| m < 1e-12;
    let phi = if negligible(mags[0]) || mags[1..].iter().any(|&m| negligible(m)) {
        // a vanishing coefficient leaves a free phase that absorbs φ
        0.0
    } else {
        let raw = phase_of(beta[0]) + phase_of(beta[3]) - phase_of(beta[1]) - phase_of(beta[2]);
        raw.rem_euclid(2.0 * std::f64::consts::PI)
    };
    let mut lambda = [lambda0, mags[0], mags[1], mags[2], mags[3]];
    let norm = lambda.iter().map(|x| x * x).sum::<f64>().sqrt();
    lambda.iter_mut().for_each(|x| *x /= norm);
    AcinNormalForm { lambda, phi }
}

fn fold_phase(phi: f64) -> Option<f64> {
    let pi = std::f64::consts::PI;
    let tol = 1e-9;
    if phi <= pi + tol {
        Some(phi.min(pi))
    } else if phi >= 2.0 * pi - tol {
        Some(0.0)
    } else {
        None
    }
}

/// Local-unitary normal form of a three-qubit state.
///
/// Every rotation of qubit 1 that makes `det T0' = 0` is tried (both roots of
/// the quadratic in `u01/u00`, or the swap when the quadratic degenerates).
/// The candidates whose phase lands in `[0, π]` are kept. Ties go to the
/// smaller root, then to the lexicographically smallest `(λ₁, …, λ₄)`.
pub fn acin_normal_form(psi: &StateVector) -> Result<AcinNormalForm> {
    require_three_qubits(psi)?;
    let slices = CoefficientSlices::from_amps(psi.amps());
    let mut best: Option<(f64, AcinNormalForm)> = None;
    for rotation in vanishing_rotations(&slices) {
        let form = normal_form_from(psi.amps(), rotation);
        let Some(phi) = fold_phase(form.phi) else { continue };
        let form = AcinNormalForm { phi, ..form };
        let key = rotation.modulus();
        let better = match &best {
            None => true,
            Some((bk, bf)) => {
                if (key - bk).abs() > 1e-9 * key.max(1.0) {
                    key < *bk
                } else {
                    form.lambda[1..].partial_cmp(&bf.lambda[1..]) == Some(std::cmp::Ordering::Less)
                }
            }
        };
        if better {
            best = Some((key, form));
        }
    }
    best.map(|(_, f)| f).ok_or_else(|| {
        Error::NumericalDegeneracy("no normal-form candidate produced a phase in [0, π]".into())
    })
}

/// The six SLOCC classes of three-qubit pure states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SloccClass {
    Product,
    #[serde(rename = "Biseparable1_23")]
    Biseparable1_23,
    #[serde(rename = "Biseparable2_13")]
    Biseparable2_13,
    #[serde(rename = "Biseparable3_12")]
    Biseparable3_12,
    W,
    #[serde(rename = "GHZ")]
    Ghz,
}

impl SloccClass {
    pub const ALL: [SloccClass; 6] = [
        SloccClass::Product,
        SloccClass::Biseparable1_23,
        SloccClass::Biseparable2_13,
        SloccClass::Biseparable3_12,
        SloccClass::W,
        SloccClass::Ghz,
    ];

    /// A canonical member of the class.
    pub fn representative(self) -> StateVector {
        let epr = StateVector::epr();
        let zero = StateVector::zero();
        let t = crate::tensor::tensor_product;
        match self {
            SloccClass::Product => StateVector::basis(DIMS.to_vec(), &[0, 0, 0]).unwrap(),
            SloccClass::Biseparable1_23 => t(&zero, &epr).unwrap(),
            SloccClass::Biseparable3_12 => t(&epr, &zero).unwrap(),
            SloccClass::Biseparable2_13 => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                StateVector::from_real(DIMS.to_vec(), &[h, 0.0, 0.0, 0.0, 0.0, h, 0.0, 0.0]).unwrap()
            }
            SloccClass::W => StateVector::w(3),
            SloccClass::Ghz => StateVector::ghz(3),
        }
    }
}

impl fmt::Display for SloccClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SloccClass::Product => "Product",
            SloccClass::Biseparable1_23 => "Biseparable1_23",
            SloccClass::Biseparable2_13 => "Biseparable2_13",
            SloccClass::Biseparable3_12 => "Biseparable3_12",
            SloccClass::W => "W",
            SloccClass::Ghz => "GHZ",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SloccReport {
    pub class: SloccClass,
    /// Ranks of the three single-qubit reductions.
    pub ranks: [usize; 3],
    /// Smallest eigenvalue of each single-qubit reduction.
    pub min_eigenvalues: [f64; 3],
    pub det_abs: f64,
    /// Set when an eigenvalue or |Det| sits within two decades of its cutoff.
    pub ambiguous: bool,
    pub notes: Vec<String>,
}

fn single_party_min_eigs(psi: &StateVector) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (p, slot) in out.iter_mut().enumerate() {
        *slot = psi.partial_trace(&SubsystemSet::new([p + 1]))?.eigenvalues()[0].max(0.0);
    }
    Ok(out)
}

fn near(value: f64, cutoff: f64) -> bool {
    value > cutoff * 1e-2 && value < cutoff * 1e2
}

pub fn slocc_report(psi: &StateVector, tol: &Tolerances) -> Result<SloccReport> {
    require_three_qubits(psi)?;
    let min_eigs = single_party_min_eigs(psi)?;
    let ranks = min_eigs.map(|m| if m > tol.rank { 2 } else { 1 });
    let det_abs = hyperdeterminant_amps(psi.amps()).norm();
    let mut notes = Vec::new();
    let mut ambiguous = false;
    for (p, &m) in min_eigs.iter().enumerate() {
        if near(m, tol.rank) {
            ambiguous = true;
            notes.push(format!("reduced state of qubit {} has eigenvalue {m:e} near the rank cutoff", p + 1));
        }
    }
    let rank_one: Vec<usize> = (0..3).filter(|&p| ranks[p] == 1).collect();
    let class = match rank_one.as_slice() {
        [] => {
            if near(det_abs, tol.hyperdet) {
                ambiguous = true;
                notes.push(format!("|Det| = {det_abs:e} near the GHZ/W cutoff"));
            }
            if det_abs > tol.hyperdet {
                SloccClass::Ghz
            } else {
                SloccClass::W
            }
        }
        [0] => SloccClass::Biseparable1_23,
        [1] => SloccClass::Biseparable2_13,
        [2] => SloccClass::Biseparable3_12,
        [_, _, _] => SloccClass::Product,
        _ => {
            return Err(Error::NumericalDegeneracy(format!(
                "two single-qubit reductions are pure but the state is not a product (minimum eigenvalues {min_eigs:?})"
            )))
        }
    };
    Ok(SloccReport { class, ranks, min_eigenvalues: min_eigs, det_abs, ambiguous, notes })
}

/// Classifies by single-qubit reduced ranks, then by whether the hyperdeterminant vanishes.
pub fn slocc_classify(psi: &StateVector) -> Result<SloccClass> {
    Ok(slocc_report(psi, &Tolerances::default())?.class)
}

/// Number of product vectors in the range of `tr₁|ψ⟩⟨ψ|`, when the range is two-dimensional.
///
/// A range vector `x V₁ + y V₂` is a product iff `det(x V₁ + y V₂) = 0`; the
/// quadratic form has two distinct projective roots when its discriminant is
/// nonzero and a single double root otherwise.
fn range_product_vectors(psi: &StateVector, tol: &Tolerances) -> Result<usize> {
    let rho23 = psi.partial_trace(&SubsystemSet::new([2, 3]))?;
    let (vals, vecs) = linalg::hermitian_eigen(rho23.matrix());
    let v1: Vec<C64> = vecs.column(3).iter().copied().collect();
    let v2: Vec<C64> = vecs.column(2).iter().copied().collect();
    if vals[2] <= tol.rank {
        return Err(Error::NumericalDegeneracy("range of the two-party reduction is one-dimensional".into()));
    }
    let quad = CoefficientSlices::from_amps(&[v1, v2].concat()).det_quadratic();
    let (a, b, c) = quad;
    let disc = (b * b - a * c * 4.0).norm();
    Ok(if disc > tol.rank { 2 } else { 1 })
}

/// Minimal number of product terms (1, 2 or 3) needed to write `ψ`.
pub fn tensor_rank_3qubit(psi: &StateVector) -> Result<usize> {
    tensor_rank_3qubit_with(psi, &Tolerances::default())
}

pub fn tensor_rank_3qubit_with(psi: &StateVector, tol: &Tolerances) -> Result<usize> {
    require_three_qubits(psi)?;
    let min_eigs = single_party_min_eigs(psi)?;
    let entangled = min_eigs.iter().filter(|&&m| m > tol.rank).count();
    match entangled {
        0 => Ok(1),
        // one party factors off, the rest is a two-term Schmidt decomposition
        2 => Ok(2),
        3 => match range_product_vectors(psi, tol)? {
            2 => Ok(2),
            _ => Ok(3),
        },
        _ => Err(Error::NumericalDegeneracy(format!(
            "inconsistent single-qubit ranks (minimum eigenvalues {min_eigs:?})"
        ))),
    }
}

/// `(|0⟩+ε|1⟩)^{⊗3} − |000⟩`, normalized: a two-product-term state that tends to `|W⟩` as `ε → 0`.
pub fn w_approximant(epsilon: f64) -> Result<StateVector> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    let scale = 1.0 / (3f64.sqrt() * epsilon);
    let amps: Vec<C64> = (0..8usize)
        .map(|i| {
            let ones = i.count_ones() as i32;
            let v = if i == 0 { 0.0 } else { epsilon.powi(ones) };
            C64::new(scale * v, 0.0)
        })
        .collect();
    StateVector::normalized(DIMS.to_vec(), amps)
}

#[derive(Debug, Clone, Serialize)]
pub struct MonogamyReport {
    /// Concurrence of the 1–2 reduction.
    pub ent12: f64,
    /// Concurrence of the 1–3 reduction.
    pub ent13: f64,
    pub maximally_entangled_12: bool,
    /// `ψ` is a product across 12|3.
    pub factorizes: bool,
    pub mutual_info_13: f64,
    pub mutual_info_23: f64,
    /// Maximal 1–2 entanglement forces factorization and uncorrelated 1–3, 2–3 marginals.
    pub monogamy_holds: bool,
}

pub fn monogamy_check(psi: &StateVector) -> Result<MonogamyReport> {
    require_three_qubits(psi)?;
    let set = |v: &[usize]| SubsystemSet::new(v.iter().copied());
    let ent12 = mixed_concurrence(&psi.partial_trace(&set(&[1, 2]))?)?;
    let ent13 = mixed_concurrence(&psi.partial_trace(&set(&[1, 3]))?)?;
    let s = |v: &[usize]| subsystem_entropy(psi, &set(v));
    let (s1, s2, s3) = (s(&[1])?, s(&[2])?, s(&[3])?);
    let mutual_info_13 = (s1 + s3 - s(&[1, 3])?).max(0.0);
    let mutual_info_23 = (s2 + s3 - s(&[2, 3])?).max(0.0);
    let maximally_entangled_12 = ent12 >= 1.0 - ENTROPY_SLACK;
    let factorizes = s3 < ENTROPY_SLACK;
    let monogamy_holds =
        !maximally_entangled_12 || (factorizes && mutual_info_13 < ENTROPY_SLACK && mutual_info_23 < ENTROPY_SLACK);
    Ok(MonogamyReport { ent12, ent13, maximally_entangled_12, factorizes, mutual_info_13, mutual_info_23, monogamy_holds })
}

/// Everything the classifier knows about a three-qubit state.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub slocc: SloccClass,
    pub tangle: f64,
    pub hyperdeterminant: [f64; 2],
    pub rank: usize,
    pub acin: AcinNormalForm,
    pub ambiguous: bool,
    pub notes: Vec<String>,
}

pub fn classify(psi: &StateVector, tol: &Tolerances) -> Result<ClassificationReport> {
    let report = slocc_report(psi, tol)?;
    let det = hyperdeterminant(psi)?;
    Ok(ClassificationReport {
        slocc: report.class,
        tangle: det.norm(),
        hyperdeterminant: [det.re, det.im],
        rank: tensor_rank_3qubit_with(psi, tol)?,
        acin: acin_normal_form(psi)?,
        ambiguous: report.ambiguous,
        notes: report.notes,
    })
}
