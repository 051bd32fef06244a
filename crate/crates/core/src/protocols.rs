//! Protocol simulators: the Mermin GHZ game, GHZ secret sharing, the AME check,
//! one-bit teleportation and Ramsey frequency estimation.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::SetValues;
use crate::linalg::{self, c, CMatrix, ZERO};
use crate::random::rng_for;
use crate::stabilizer::apply_cz;
use crate::tensor::{
    check_dense_limit, digits, subsystem_entropy, tensor_product, DensityOperator, PartialTrace, StateVector,
    SubsystemSet,
};
use crate::tolerance::{ENTROPY_SLACK, VALIDITY};

/// The four promised inputs `(x, y, z)` with `x ⊕ y ⊕ z = 0`.
pub const GHZ_GAME_INPUTS: [[u8; 3]; 4] = [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]];

/// Player strategy for the Mermin GHZ game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GhzGameStrategy {
    /// Deterministic responses `a(0), a(1), b(0), b(1), c(0), c(1)`.
    Classical { bits: [bool; 6] },
    /// Shared GHZ state; input 0 measures X, input 1 measures Y, output `m` for eigenvalue `(−1)^m`.
    Quantum,
}

impl GhzGameStrategy {
    /// Classical strategy whose six bits are the binary digits of `index` (bit 0 is `a(0)`).
    pub fn classical_from_index(index: u8) -> Self {
        let mut bits = [false; 6];
        for (k, b) in bits.iter_mut().enumerate() {
            *b = (index >> k) & 1 == 1;
        }
        GhzGameStrategy::Classical { bits }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GameInputOutcome {
    pub inputs: [u8; 3],
    pub win_probability: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GhzGameResult {
    pub strategy: GhzGameStrategy,
    pub win_probability: f64,
    pub per_input: Vec<GameInputOutcome>,
}

fn game_target(x: [u8; 3]) -> u8 {
    x[0] | x[1] | x[2]
}

/// Rows are the bras of the measurement eigenbasis, row `m` for outcome `m`.
fn measurement_bras(input: u8) -> CMatrix {
    let s = FRAC_1_SQRT_2;
    if input == 0 {
        CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
    } else {
        CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(0.0, -s), c(s, 0.0), c(0.0, s)])
    }
}

fn quantum_win(x: [u8; 3]) -> Result<f64> {
    let bras: Vec<CMatrix> = x.iter().map(|&i| measurement_bras(i)).collect();
    let out = StateVector::ghz(3).apply_product(&bras)?;
    let target = game_target(x);
    Ok(out
        .amps()
        .iter()
        .enumerate()
        .filter(|(flat, _)| digits(*flat, out.dims()).iter().fold(0, |p, &d| p ^ d as u8) == target)
        .map(|(_, a)| a.norm_sqr())
        .sum())
}

/// Win probability with inputs uniform over the promised set.
pub fn ghz_game(strategy: &GhzGameStrategy) -> Result<GhzGameResult> {
    let per_input = GHZ_GAME_INPUTS
        .iter()
        .map(|&x| {
            let p = match strategy {
                GhzGameStrategy::Classical { bits } => {
                    let out = (0..3).fold(0u8, |acc, k| acc ^ bits[2 * k + x[k] as usize] as u8);
                    if out == game_target(x) { 1.0 } else { 0.0 }
                }
                GhzGameStrategy::Quantum => quantum_win(x)?,
            };
            Ok(GameInputOutcome { inputs: x, win_probability: p })
        })
        .collect::<Result<Vec<_>>>()?;
    let win_probability = per_input.iter().map(|o| o.win_probability).sum::<f64>() / 4.0;
    Ok(GhzGameResult { strategy: *strategy, win_probability, per_input })
}

#[derive(Debug, Clone, Serialize)]
pub struct BruteforceReport {
    pub strategies: usize,
    /// Best number of winning inputs out of four.
    pub max_wins: usize,
    pub max_win: f64,
    pub optimal: Vec<[bool; 6]>,
}

/// Exhaustive search over the 64 deterministic strategies. Mixed strategies
/// cannot do better since the win probability is linear in the mixture.
pub fn classical_bruteforce() -> BruteforceReport {
    let mut best = 0;
    let mut optimal = Vec::new();
    for idx in 0..64u8 {
        let s = GhzGameStrategy::classical_from_index(idx);
        let GhzGameStrategy::Classical { bits } = s else { unreachable!() };
        let wins = ghz_game(&s)
            .expect("classical evaluation is infallible")
            .per_input
            .iter()
            .filter(|o| o.win_probability == 1.0)
            .count();
        if wins > best {
            best = wins;
            optimal.clear();
        }
        if wins == best {
            optimal.push(bits);
        }
    }
    BruteforceReport { strategies: 64, max_wins: best, max_win: best as f64 / 4.0, optimal }
}

/// `½ ‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", rho.dims(), sigma.dims())));
    }
    let diff = rho.matrix() - sigma.matrix();
    if diff.iter().all(|z| *z == ZERO) {
        return Ok(0.0);
    }
    Ok(0.5 * linalg::hermitian_eigenvalues(&diff).iter().map(|e| e.abs()).sum::<f64>())
}

#[derive(Debug, Clone, Serialize)]
pub struct SecretSharingReport {
    pub n: usize,
    /// Trace distance of the two secrets' reductions on every proper subset.
    pub subset_distinguishability: SetValues,
    pub max_subset_distinguishability: f64,
    pub full_distinguishability: f64,
}

fn ghz_phase_secret(n: usize, sign: f64) -> Result<StateVector> {
    let mut amps = vec![ZERO; 1 << n];
    amps[0] = c(FRAC_1_SQRT_2, 0.0);
    amps[(1 << n) - 1] = c(sign * FRAC_1_SQRT_2, 0.0);
    StateVector::new(vec![2; n], amps)
}

/// Distinguishability of the secrets `(|0…0⟩ ± |1…1⟩)/√2` by each coalition.
pub fn secret_sharing_check(n: usize) -> Result<SecretSharingReport> {
    if !(2..=10).contains(&n) {
        return Err(Error::SizeLimit { what: "secret-sharing parties", got: n, limit: 10 });
    }
    let plus = ghz_phase_secret(n, 1.0)?;
    let minus = ghz_phase_secret(n, -1.0)?;
    let mut entries = Vec::new();
    for set in SubsystemSet::all_nonempty(n) {
        if set.len() == n {
            continue;
        }
        let d = trace_distance(&plus.partial_trace(&set)?, &minus.partial_trace(&set)?)?;
        entries.push((set, d));
    }
    let max_subset_distinguishability = entries.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    let full_distinguishability = (1.0 - plus.inner(&minus)?.norm_sqr()).max(0.0).sqrt();
    Ok(SecretSharingReport {
        n,
        subset_distinguishability: SetValues(entries),
        max_subset_distinguishability,
        full_distinguishability,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AmeReport {
    pub is_ame: bool,
    pub worst_bipartition: SubsystemSet,
    /// Largest `|A| log₂ d − S(A)` over `1 ≤ |A| ≤ ⌊N/2⌋`.
    pub deficit: f64,
    pub local_dim: usize,
}

/// Absolutely-maximally-entangled test on `N ≤ 8` parties of equal dimension.
pub fn ame_check(psi: &StateVector) -> Result<AmeReport> {
    let dims = psi.dims();
    let n = dims.len();
    if !(2..=8).contains(&n) {
        return Err(Error::UnsupportedDims { dims: dims.to_vec(), reason: "AME check needs 2 to 8 parties".into() });
    }
    let d = dims[0];
    if dims.iter().any(|&x| x != d) {
        return Err(Error::UnsupportedDims { dims: dims.to_vec(), reason: "local dimensions must be equal".into() });
    }
    check_dense_limit(psi.dim())?;
    let mut worst = (SubsystemSet::empty(), f64::NEG_INFINITY);
    for set in SubsystemSet::all_nonempty(n) {
        if set.len() > n / 2 {
            continue;
        }
        let deficit = set.len() as f64 * (d as f64).log2() - subsystem_entropy(psi, &set)?;
        if deficit > worst.1 {
            worst = (set, deficit);
        }
    }
    Ok(AmeReport { is_ame: worst.1 <= ENTROPY_SLACK, worst_bipartition: worst.0, deficit: worst.1, local_dim: d })
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportResult {
    pub outcome: u8,
    #[serde(skip)]
    pub post_state: StateVector,
    /// Amplitudes of the post-measurement qubit as `[re, im]` pairs.
    pub post_amplitudes: Vec<[f64; 2]>,
    pub probability: f64,
}

/// CZ on `ψ ⊗ |+⟩`, then qubit 0 is measured in the X basis with outcome `m`.
/// The second qubit is left in `X^m H ψ`.
pub fn one_bit_teleport(psi: &StateVector, m: u8) -> Result<TeleportResult> {
    if psi.dims() != [2] {
        return Err(Error::UnsupportedDims { dims: psi.dims().to_vec(), reason: "expected a single qubit".into() });
    }
    if m > 1 {
        return Err(Error::InvalidArgument(format!("outcome must be 0 or 1, got {m}")));
    }
    let joint = apply_cz(&tensor_product(psi, &StateVector::plus())?, 0, 1)?;
    let a = joint.amps();
    let sign = if m == 0 { 1.0 } else { -1.0 };
    let out = [
        (a[0] + a[2].scale(sign)).scale(FRAC_1_SQRT_2),
        (a[1] + a[3].scale(sign)).scale(FRAC_1_SQRT_2),
    ];
    let probability = out.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let post_state = StateVector::normalized(vec![2], out.to_vec())?;
    let post_amplitudes = post_state.amps().iter().map(|z| [z.re, z.im]).collect();
    Ok(TeleportResult { outcome: m, post_state, post_amplitudes, probability })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RamseyScheme {
    Product,
    Ghz,
}

impl RamseyScheme {
    /// Phase multiplier of the fringe for `n` ions.
    fn fringe_factor(self, n: usize) -> f64 {
        match self {
            RamseyScheme::Product => 1.0,
            RamseyScheme::Ghz => n as f64,
        }
    }
}

impl fmt::Display for RamseyScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RamseyScheme::Product => "product",
            RamseyScheme::Ghz => "ghz",
        })
    }
}

impl FromStr for RamseyScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "product" => Ok(RamseyScheme::Product),
            "ghz" => Ok(RamseyScheme::Ghz),
            other => Err(Error::InvalidArgument(format!("unknown Ramsey scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamseyParams {
    pub n_ions: usize,
    pub scheme: RamseyScheme,
    /// Free evolution time per cycle.
    pub t: f64,
    /// Total time budget; the run has `⌊T/t⌋` cycles.
    pub total_time: f64,
    /// True detuning `ω − ω₀`, also the linearization point of the estimator.
    pub detuning: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Detuning at which the fringe slope is largest.
pub fn optimal_detuning(n_ions: usize, scheme: RamseyScheme, t: f64) -> f64 {
    PI / (2.0 * scheme.fringe_factor(n_ions) * t)
}

#[derive(Debug, Clone, Serialize)]
pub struct RamseyReport {
    pub params: RamseyParams,
    pub cycles: u64,
    pub mean_estimate: f64,
    /// Spread of the per-trial estimates.
    pub estimated_std: f64,
    /// `(NTt)^{-1/2}` for the product scheme, `(Tt)^{-1/2}/N` for GHZ.
    pub predicted_std: f64,
}

/// Monte Carlo of repeated Ramsey runs. Each trial counts the bright outcomes
/// over all cycles and inverts the fringe linearly around the operating point.
pub fn ramsey_simulation(p: &RamseyParams) -> Result<RamseyReport> {
    if p.n_ions == 0 {
        return Err(Error::InvalidArgument("n_ions must be positive".into()));
    }
    if !(p.t > 0.0 && p.t.is_finite() && p.total_time.is_finite() && p.detuning.is_finite()) {
        return Err(Error::InvalidArgument("t, T and detuning must be finite with t > 0".into()));
    }
    if p.trials < 1000 {
        return Err(Error::InvalidArgument(format!("need at least 1000 trials, got {}", p.trials)));
    }
    let cycles = (p.total_time / p.t).floor();
    if cycles < 1.0 || cycles > u64::MAX as f64 {
        return Err(Error::InvalidArgument("total time must cover at least one cycle".into()));
    }
    let cycles = cycles as u64;
    let k = p.scheme.fringe_factor(p.n_ions);
    let phase = k * p.detuning * p.t;
    let prob = 0.5 * (1.0 + phase.cos());
    let slope = -0.5 * k * p.t * phase.sin();
    if phase.sin().abs() < VALIDITY {
        return Err(Error::InvalidArgument(format!("zero fringe slope at detuning {}", p.detuning)));
    }
    let shots = match p.scheme {
        RamseyScheme::Product => cycles.checked_mul(p.n_ions as u64),
        RamseyScheme::Ghz => Some(cycles),
    }
    .ok_or_else(|| Error::InvalidArgument("too many shots".into()))?;
    let dist = Binomial::new(shots, prob.clamp(0.0, 1.0)).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let estimates: Vec<f64> = (0..p.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let bright = dist.sample(&mut rng_for(p.seed, trial));
            p.detuning + (bright as f64 / shots as f64 - prob) / slope
        })
        .collect();
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let tt = p.total_time * p.t;
    let predicted_std = match p.scheme {
        RamseyScheme::Product => 1.0 / (p.n_ions as f64 * tt).sqrt(),
        RamseyScheme::Ghz => 1.0 / (tt.sqrt() * p.n_ions as f64),
    };
    Ok(RamseyReport { params: *p, cycles, mean_estimate: mean, estimated_std: var.sqrt(), predicted_std })
}
