//! Pauli strings in the binary symplectic representation, stabilizer groups,
//! graphs and graph states.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ZERO};
use crate::tensor::{digits, StateVector};
use crate::tolerance::VALIDITY;

/// Largest qubit count synthesized or verified densely.
pub const MAX_DENSE_QUBITS: usize = 12;

fn check_dense_qubits(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        Err(Error::SizeLimit { what: "qubits for dense synthesis", got: n, limit: MAX_DENSE_QUBITS })
    } else {
        Ok(())
    }
}

/// Scalar prefactor `i^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    fn exponent(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    fn from_exponent(k: u8) -> Self {
        [Phase::PlusOne, Phase::PlusI, Phase::MinusOne, Phase::MinusI][(k % 4) as usize]
    }

    pub fn value(self) -> C64 {
        [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][self.exponent() as usize]
    }

    pub fn is_real(self) -> bool {
        matches!(self, Phase::PlusOne | Phase::MinusOne)
    }
}

/// `phase · P₁ ⊗ … ⊗ P_n` with `P_k` fixed by the bits `(x_k, z_k)`:
/// `(0,0) = I`, `(1,0) = X`, `(0,1) = Z`, `(1,1) = Y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: Vec<bool>,
    z: Vec<bool>,
    phase: Phase,
}

impl PauliString {
    pub fn new(x: Vec<bool>, z: Vec<bool>, phase: Phase) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch(format!("x has {} bits, z has {}", x.len(), z.len())));
        }
        Ok(PauliString { x, z, phase })
    }

    pub fn identity(n: usize) -> Self {
        PauliString { x: vec![false; n], z: vec![false; n], phase: Phase::PlusOne }
    }

    /// A single-qubit `X`, `Y` or `Z` placed on `qubit`.
    pub fn single(n: usize, qubit: usize, letter: char) -> Result<Self> {
        let mut p = Self::identity(n);
        if qubit >= n {
            return Err(Error::InvalidArgument(format!("qubit {qubit} out of range for {n} qubits")));
        }
        let (x, z) = letter_bits(letter)?;
        p.x[qubit] = x;
        p.z[qubit] = z;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x
    }

    pub fn z_bits(&self) -> &[bool] {
        &self.z
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(a, b)| **a || **b).count()
    }

    /// Symplectic form `Σ_k x_k z'_k + z_k x'_k mod 2`; zero iff the strings commute.
    pub fn symplectic(&self, other: &PauliString) -> bool {
        (0..self.n()).fold(false, |acc, k| acc ^ (self.x[k] & other.z[k]) ^ (self.z[k] & other.x[k]))
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        !self.symplectic(other)
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch("Pauli strings of different length".into()));
        }
        // i-power contributed by each single-qubit product, e.g. X·Y = iZ
        let mut k = self.phase.exponent() + other.phase.exponent();
        for q in 0..self.n() {
            let a = (self.x[q], self.z[q]);
            let b = (other.x[q], other.z[q]);
            k += match (a, b) {
                ((true, false), (true, true)) | ((true, true), (false, true)) | ((false, true), (true, false)) => 1,
                ((true, true), (true, false)) | ((false, true), (true, true)) | ((true, false), (false, true)) => 3,
                _ => 0,
            };
        }
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        Ok(PauliString { x, z, phase: Phase::from_exponent(k) })
    }

    fn masks(&self) -> (usize, usize, u8) {
        let n = self.n();
        let mut xm = 0;
        let mut zm = 0;
        let mut ys = 0u8;
        for q in 0..n {
            let bit = 1 << (n - 1 - q);
            if self.x[q] {
                xm |= bit;
            }
            if self.z[q] {
                zm |= bit;
            }
            if self.x[q] && self.z[q] {
                ys += 1;
            }
        }
        (xm, zm, ys)
    }

    /// Applies the string to qubit amplitudes (qubit 0 slowest).
    pub fn apply(&self, amps: &[C64]) -> Result<Vec<C64>> {
        if amps.len() != 1 << self.n() {
            return Err(Error::DimensionMismatch(format!("{} amplitudes for {} qubits", amps.len(), self.n())));
        }
        // Y = iXZ on each qubit carrying both bits
        let (xm, zm, ys) = self.masks();
        let lead = Phase::from_exponent(self.phase.exponent() + ys % 4).value();
        let mut out = vec![ZERO; amps.len()];
        for (b, a) in amps.iter().enumerate() {
            let sign = if (b & zm).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[b ^ xm] += a * lead * sign;
        }
        Ok(out)
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        check_dense_qubits(self.n())?;
        let d = 1 << self.n();
        let mut m = CMatrix::zeros(d, d);
        for col in 0..d {
            let mut e = vec![ZERO; d];
            e[col] = C64::new(1.0, 0.0);
            for (row, v) in self.apply(&e)?.into_iter().enumerate() {
                m[(row, col)] = v;
            }
        }
        Ok(m)
    }
}

fn letter_bits(c: char) -> Result<(bool, bool)> {
    match c {
        'I' => Ok((false, false)),
        'X' => Ok((true, false)),
        'Y' => Ok((true, true)),
        'Z' => Ok((false, true)),
        _ => Err(Error::Parse(format!("unknown Pauli letter {c:?}"))),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.phase {
            Phase::PlusOne => "+",
            Phase::MinusOne => "-",
            Phase::PlusI => "+i",
            Phase::MinusI => "-i",
        })?;
        for (x, z) in self.x.iter().zip(&self.z) {
            f.write_str(match (x, z) {
                (false, false) => "I",
                (true, false) => "X",
                (true, true) => "Y",
                (false, true) => "Z",
            })?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(r) = s.strip_prefix("+i") {
            (Phase::PlusI, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MinusI, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::PlusOne, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MinusOne, r)
        } else {
            (Phase::PlusOne, s)
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("empty Pauli string {s:?}")));
        }
        let (x, z) = body.chars().map(letter_bits).collect::<Result<Vec<_>>>()?.into_iter().unzip();
        Ok(PauliString { x, z, phase })
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rank over GF(2) of bit rows.
fn gf2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        rank += 1;
    }
    rank
}

/// `n` independent, commuting, Hermitian Pauli strings on `n` qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct StabilizerGroup {
    generators: Vec<PauliString>,
}

impl StabilizerGroup {
    pub fn new(generators: Vec<PauliString>) -> Result<Self> {
        let n = generators.len();
        if n == 0 {
            return Err(Error::InvalidStabilizer("no generators".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.n() != n) {
            return Err(Error::InvalidStabilizer(format!("{g} acts on {} qubits, expected {n}", g.n())));
        }
        if let Some(g) = generators.iter().find(|g| !g.phase().is_real()) {
            return Err(Error::InvalidStabilizer(format!("{g} has an imaginary phase")));
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes_with(b) {
                    return Err(Error::InvalidStabilizer(format!("{a} and {b} anticommute")));
                }
            }
        }
        let rows = generators.iter().map(|g| [g.x_bits(), g.z_bits()].concat()).collect();
        if gf2_rank(rows) < n {
            return Err(Error::InvalidStabilizer("generators are not independent".into()));
        }
        Ok(StabilizerGroup { generators })
    }

    pub fn parse(strings: &[&str]) -> Result<Self> {
        Self::new(strings.iter().map(|s| s.parse()).collect::<Result<_>>()?)
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn n(&self) -> usize {
        self.generators.len()
    }
}

impl<'de> Deserialize<'de> for StabilizerGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let gens = Vec::<PauliString>::deserialize(d)?;
        StabilizerGroup::new(gens).map_err(serde::de::Error::custom)
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphFile")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphFile> for Graph {
    type Error = Error;

    fn try_from(g: GraphFile) -> Result<Self> {
        Graph::new(g.n, g.edges)
    }
}

impl Graph {
    /// Duplicate edges collapse; self-loops and out-of-range endpoints are errors.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!("edge ({a}, {b}) out of range for {n} vertices")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph { n, edges: set.into_iter().collect() })
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument("a cycle needs at least 3 vertices".into()));
        }
        Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).expect("complete edges are valid")
    }

    pub fn star(n: usize) -> Self {
        Graph::new(n, (1..n).map(|v| (0, v))).expect("star edges are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }
}

/// Controlled-Z on qubits `i` and `j` (0-based).
pub fn apply_cz(psi: &StateVector, i: usize, j: usize) -> Result<StateVector> {
    let dims = psi.dims();
    if i == j || i >= dims.len() || j >= dims.len() || dims[i] != 2 || dims[j] != 2 {
        return Err(Error::InvalidArgument(format!("CZ needs two distinct qubits, got ({i}, {j}) on dims {dims:?}")));
    }
    let amps = psi
        .amps()
        .iter()
        .enumerate()
        .map(|(flat, a)| {
            let x = digits(flat, dims);
            if x[i] == 1 && x[j] == 1 {
                -a
            } else {
                *a
            }
        })
        .collect();
    StateVector::new(dims.to_vec(), amps)
}

/// `∏_{(a,b)∈E} CZ_{ab} |+⟩^{⊗n}`.
pub fn graph_state(g: &Graph) -> Result<StateVector> {
    check_dense_qubits(g.n)?;
    let mut h = 0.5f64.powi((g.n / 2) as i32);
    if g.n % 2 == 1 {
        h *= FRAC_1_SQRT_2;
    }
    let amps = (0..1usize << g.n)
        .map(|flat| {
            let bit = |v: usize| (flat >> (g.n - 1 - v)) & 1;
            let parity = g.edges.iter().map(|&(a, b)| bit(a) & bit(b)).sum::<usize>() % 2;
            C64::new(if parity == 0 { h } else { -h }, 0.0)
        })
        .collect();
    StateVector::new(vec![2; g.n], amps)
}

/// `K_v = X_v ∏_{w ∈ N(v)} Z_w` for every vertex.
pub fn graph_stabilizers(g: &Graph) -> StabilizerGroup {
    let generators = (0..g.n)
        .map(|v| {
            let mut x = vec![false; g.n];
            let mut z = vec![false; g.n];
            x[v] = true;
            for w in g.neighbors(v) {
                z[w] = true;
            }
            PauliString { x, z, phase: Phase::PlusOne }
        })
        .collect();
    StabilizerGroup::new(generators).expect("graph generators form a stabilizer group")
}

fn stabilizer_dims(group: &StabilizerGroup, psi: &StateVector) -> Result<()> {
    if !psi.is_qubits(group.n()) {
        return Err(Error::DimensionMismatch(format!(
            "{} generators for a state with dims {:?}",
            group.n(),
            psi.dims()
        )));
    }
    Ok(())
}

/// True iff `gψ = ψ` within the validity tolerance for every generator.
pub fn verify_stabilized(group: &StabilizerGroup, psi: &StateVector) -> Result<bool> {
    check_dense_qubits(group.n())?;
    stabilizer_dims(group, psi)?;
    for g in &group.generators {
        let image = g.apply(psi.amps())?;
        let dev = image.iter().zip(psi.amps()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if dev > VALIDITY {
            return Ok(false);
        }
    }
    Ok(true)
}

fn project(group: &StabilizerGroup, mut v: Vec<C64>) -> Result<Vec<C64>> {
    for g in &group.generators {
        let gv = g.apply(&v)?;
        v.iter_mut().zip(gv).for_each(|(a, b)| *a = (*a + b) * 0.5);
    }
    Ok(v)
}

/// The joint +1 eigenvector, by projecting computational basis seeds with `∏ (𝕀 + g)/2`.
pub fn stabilizer_to_state(group: &StabilizerGroup) -> Result<StateVector> {
    let n = group.n();
    check_dense_qubits(n)?;
    let d = 1usize << n;
    // nonzero overlaps of a stabilizer state with basis states are at least 2^{-n}
    let threshold = 0.5 / d as f64;
    for seed in 0..d {
        let mut e = vec![ZERO; d];
        e[seed] = C64::new(1.0, 0.0);
        let v = project(group, e)?;
        let norm2: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        if norm2 >= threshold {
            let lead = v.iter().find(|a| a.norm() > 1e-12).copied().expect("nonzero projection");
            let rot = lead.conj() / lead.norm();
            let amps = v.into_iter().map(|a| a * rot).collect();
            return StateVector::normalized(vec![2; n], amps);
        }
    }
    Err(Error::InvalidStabilizer("projection annihilated every basis seed".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hadamard;
    use crate::random::{random_state, rng_for};
    use crate::tensor::fidelity_overlap;
    use rand::Rng;

    fn random_graph<R: Rng>(n: usize, rng: &mut R) -> Graph {
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.4)).collect();
        Graph::new(n, edges).unwrap()
    }

    #[test]
    fn pauli_parse_and_print() {
        let p: PauliString = "+XZI".parse().unwrap();
        assert_eq!(p.to_string(), "+XZI");
        assert_eq!("-iYY".parse::<PauliString>().unwrap().to_string(), "-iYY");
        assert_eq!("ZZ".parse::<PauliString>().unwrap().to_string(), "+ZZ");
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("+".parse::<PauliString>().is_err());
    }

    #[test]
    fn single_qubit_matrices() {
        use crate::linalg::{pauli_x, pauli_y, pauli_z};
        for (s, m) in [("X", pauli_x()), ("Y", pauli_y()), ("Z", pauli_z())] {
            assert!((s.parse::<PauliString>().unwrap().to_matrix().unwrap() - m).norm() < 1e-15);
        }
    }

    #[test]
    fn multiplication_tracks_phase() {
        let x: PauliString = "X".parse().unwrap();
        let y: PauliString = "Y".parse().unwrap();
        let z: PauliString = "Z".parse().unwrap();
        assert_eq!(x.multiply(&y).unwrap().to_string(), "+iZ");
        assert_eq!(y.multiply(&x).unwrap().to_string(), "-iZ");
        assert_eq!(z.multiply(&x).unwrap().to_string(), "+iY");
        let mut rng = rng_for(61, 0);
        for _ in 0..20 {
            let letters = ['I', 'X', 'Y', 'Z'];
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| -> PauliString {
                (0..3).map(|_| letters[rng.gen_range(0..4)]).collect::<String>().parse().unwrap()
            };
            let (a, b) = (mk(&mut rng), mk(&mut rng));
            let dense = a.to_matrix().unwrap() * b.to_matrix().unwrap();
            assert!((a.multiply(&b).unwrap().to_matrix().unwrap() - dense).norm() < 1e-12);
        }
    }

    #[test]
    fn symplectic_form_matches_dense_commutator() {
        let mut rng = rng_for(62, 0);
        let letters = ['I', 'X', 'Y', 'Z'];
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            let mut mk = || -> PauliString { (0..n).map(|_| letters[rng.gen_range(0..4)]).collect::<String>().parse().unwrap() };
            let (a, b) = (mk(), mk());
            let (ma, mb) = (a.to_matrix().unwrap(), b.to_matrix().unwrap());
            let comm = (&ma * &mb - &mb * &ma).norm();
            assert_eq!(a.commutes_with(&b), comm < 1e-12);
        }
    }

    #[test]
    fn group_validation() {
        assert!(StabilizerGroup::parse(&["ZZI", "IZZ", "XXX"]).is_ok());
        assert!(StabilizerGroup::parse(&["XI", "ZI"]).is_err());
        assert!(StabilizerGroup::parse(&["ZZ", "ZZ"]).is_err());
        assert!(StabilizerGroup::parse(&["ZZ", "-ZZ"]).is_err());
        assert!(StabilizerGroup::parse(&["+iZ"]).is_err());
        assert!(StabilizerGroup::parse(&["ZZ"]).is_err());
    }

    #[test]
    fn cz_examples() {
        let pp = StateVector::product(&[StateVector::plus(), StateVector::plus()]).unwrap();
        let out = apply_cz(&pp, 0, 1).unwrap();
        let expect = StateVector::from_real(vec![2, 2], &[0.5, 0.5, 0.5, -0.5]).unwrap();
        assert!((fidelity_overlap(&out, &expect).unwrap() - 1.0).abs() < 1e-15);
        assert!((out.amps()[3] + 0.5).norm() < 1e-15);
        let back = apply_cz(&out, 1, 0).unwrap();
        assert!(back.amps().iter().zip(pp.amps()).all(|(a, b)| (a - b).norm() < 1e-15));
        assert!(apply_cz(&pp, 0, 0).is_err());
        assert!(apply_cz(&pp, 0, 2).is_err());

        let mut rng = rng_for(63, 0);
        let psi = random_state(&[2, 2, 2], &mut rng);
        let a = apply_cz(&apply_cz(&psi, 0, 1).unwrap(), 1, 2).unwrap();
        let b = apply_cz(&apply_cz(&psi, 1, 2).unwrap(), 0, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cluster_state() {
        let psi = graph_state(&Graph::path(3)).unwrap();
        let s = 2f64.powf(-1.5);
        let expect = [s, s, s, -s, s, s, -s, s];
        assert!(psi.amps().iter().zip(expect).all(|(a, b)| (a - C64::new(b, 0.0)).norm() < 1e-15));
        let one = graph_state(&Graph::empty(1)).unwrap();
        assert!((fidelity_overlap(&one, &StateVector::plus()).unwrap() - 1.0).abs() < 1e-15);
        assert!(graph_state(&Graph::empty(13)).is_err());
    }

    #[test]
    fn graph_state_equals_cz_circuit() {
        for g in [Graph::path(4), Graph::cycle(5).unwrap(), Graph::star(4), Graph::complete(4)] {
            let mut psi = StateVector::product(&vec![StateVector::plus(); g.n()]).unwrap();
            for &(a, b) in g.edges() {
                psi = apply_cz(&psi, a, b).unwrap();
            }
            let direct = graph_state(&g).unwrap();
            assert!(psi.amps().iter().zip(direct.amps()).all(|(a, b)| (a - b).norm() < 1e-15));
        }
    }

    #[test]
    fn stabilizer_examples() {
        let path = graph_stabilizers(&Graph::path(3));
        let names: Vec<String> = path.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["+XZI", "+ZXZ", "+IZX"]);
        let names: Vec<String> = graph_stabilizers(&Graph::complete(3)).generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["+XZZ", "+ZXZ", "+ZZX"]);
        let names: Vec<String> = graph_stabilizers(&Graph::empty(2)).generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["+XI", "+IX"]);
    }

    #[test]
    fn verification_examples() {
        let ghz = StateVector::ghz(3);
        assert!(verify_stabilized(&StabilizerGroup::parse(&["ZZI", "IZZ", "XXX"]).unwrap(), &ghz).unwrap());
        assert!(!verify_stabilized(&StabilizerGroup::parse(&["ZZI", "IZZ", "-XXX"]).unwrap(), &ghz).unwrap());
        assert!(verify_stabilized(&StabilizerGroup::parse(&["ZZ", "XX"]).unwrap(), &ghz).is_err());
    }

    #[test]
    fn synthesis_examples() {
        let ghz = stabilizer_to_state(&StabilizerGroup::parse(&["ZZI", "IZZ", "XXX"]).unwrap()).unwrap();
        assert!(ghz.amps().iter().zip(StateVector::ghz(3).amps()).all(|(a, b)| (a - b).norm() < 1e-12));
        let plus = stabilizer_to_state(&StabilizerGroup::parse(&["X"]).unwrap()).unwrap();
        assert!((fidelity_overlap(&plus, &StateVector::plus()).unwrap() - 1.0).abs() < 1e-12);
        let zz = stabilizer_to_state(&StabilizerGroup::parse(&["ZI", "IZ"]).unwrap()).unwrap();
        assert_eq!(zz, StateVector::basis(vec![2, 2], &[0, 0]).unwrap());
        let ones = stabilizer_to_state(&StabilizerGroup::parse(&["-ZI", "-IZ"]).unwrap()).unwrap();
        assert_eq!(ones, StateVector::basis(vec![2, 2], &[1, 1]).unwrap());
    }

    #[test]
    fn random_graph_states_are_stabilized() {
        let mut rng = rng_for(64, 0);
        for _ in 0..30 {
            let n = rng.gen_range(1..=8);
            let g = random_graph(n, &mut rng);
            let psi = graph_state(&g).unwrap();
            let group = graph_stabilizers(&g);
            assert!(verify_stabilized(&group, &psi).unwrap());
            let amp = 2f64.powf(-(n as f64) / 2.0);
            assert!(psi.amps().iter().all(|a| (a.norm() - amp).abs() < 1e-15 && a.im == 0.0));
            let synth = stabilizer_to_state(&group).unwrap();
            assert!((fidelity_overlap(&psi, &synth).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn hadamards_map_cluster_to_ghz() {
        let cluster = graph_state(&Graph::path(3)).unwrap();
        let h = hadamard();
        let out = cluster.apply_local(0, &h).unwrap().apply_local(2, &h).unwrap();
        assert!((fidelity_overlap(&out, &StateVector::ghz(3)).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn graph_json_round_trip() {
        let g: Graph = serde_json::from_str(r#"{"n":3,"edges":[[1,0],[1,2],[0,1]]}"#).unwrap();
        assert_eq!(g, Graph::path(3));
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[0,2]]}"#).is_err());
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[1,1]]}"#).is_err());
    }
}
