//! Command-line front end. Each subcommand loads its inputs, calls one library
//! analysis and prints a JSON report.
//!
//! Exit codes: 0 success, 1 analysis error, 2 usage error, 3 malformed input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bipartite::{bipartite_report, concurrence, mixed_concurrence};
use crate::error::{Error, Result};
use crate::gaussian::{three_mode_family_report, williamson_report, CovarianceKind};
use crate::info::{check_ssa, entropy_vector};
use crate::io::{self, Config, CovarianceInput, StateInput};
use crate::measures::{geometric_measure, schmidt_measure};
use crate::mps::{cut_entropies, dense_to_mps};
use crate::protocols::{
    ame_check, classical_bruteforce, ghz_game, one_bit_teleport, optimal_detuning, ramsey_simulation,
    secret_sharing_check, GhzGameStrategy, RamseyParams, RamseyScheme,
};
use crate::stabilizer::{graph_stabilizers, graph_state, verify_stabilized};
use crate::tensor::SubsystemSet;
use crate::threequbit::classify;
use crate::tolerance::Tolerances;
use crate::witness::hierarchy_report;

pub const EXIT_ANALYSIS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "entangle", version, about = "Multipartite entanglement analysis")]
struct Cli {
    /// JSON config with tolerances, optimizer settings and seed.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// SLOCC class, 3-tangle, tensor rank and Acín form of a three-qubit state.
    Classify { state: PathBuf },
    /// Entanglement measures of a pure state.
    Measure {
        state: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        /// Cut for the entropy of entanglement, e.g. `1,2`.
        #[arg(long, default_value = "1")]
        cut: SubsystemSet,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// A_GHZ and A_W witness report.
    Witness { state: PathBuf },
    /// Graph states and their stabilizer generators.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Matrix product state compression.
    #[command(subcommand)]
    Mps(MpsCommand),
    /// Gaussian covariance matrices.
    #[command(subcommand)]
    Gaussian(GaussianCommand),
    /// Entropy vectors and strong subadditivity.
    #[command(subcommand)]
    Entropy(EntropyCommand),
    /// Nonlocal games.
    #[command(subcommand)]
    Game(GameCommand),
    /// Protocol simulators.
    #[command(subcommand)]
    Protocol(ProtocolCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    Entropy,
    Geometric,
    Schmidt,
    Concurrence,
}

#[derive(Debug, Subcommand)]
enum GraphCommand {
    /// Graph state from CZ gates on |+…+⟩.
    Synth { graph: PathBuf },
    /// Stabilizer generators K_v = X_v Π Z_w.
    Stabilizers { graph: PathBuf },
}

#[derive(Debug, Subcommand)]
enum MpsCommand {
    /// Convert a dense state to an MPS with bond cap and SVD truncation.
    Compress {
        state: PathBuf,
        #[arg(long, default_value_t = usize::MAX)]
        max_bond: usize,
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
enum GaussianCommand {
    /// Symplectic eigenvalues and Williamson form of a covariance file.
    Williamson { cov: PathBuf },
    /// Pure three-mode family with diagonal entry `a > 1`.
    Family { a: f64 },
}

#[derive(Debug, Subcommand)]
enum EntropyCommand {
    /// Entropies of every nonempty subsystem subset.
    Vector {
        state: PathBuf,
    },
    /// Check S(AB) + S(BC) ≥ S(ABC) + S(B).
    Ssa {
        state: PathBuf,
        #[arg(long, default_value = "1")]
        a: SubsystemSet,
        #[arg(long, default_value = "2")]
        b: SubsystemSet,
        #[arg(long, default_value = "3")]
        c: SubsystemSet,
    },
}

#[derive(Debug, Subcommand)]
enum GameCommand {
    /// Mermin GHZ game.
    Ghz(GhzArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct GhzArgs {
    /// Best deterministic strategy by exhaustive search.
    #[arg(long)]
    classical_bruteforce: bool,
    #[arg(long)]
    quantum: bool,
    /// Six response bits a0 a1 b0 b1 c0 c1, e.g. `010110`.
    #[arg(long, value_parser = parse_bits)]
    strategy: Option<[bool; 6]>,
}

#[derive(Debug, Subcommand)]
enum ProtocolCommand {
    /// One-bit teleportation of a single-qubit state.
    Teleport {
        state: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        m: u8,
    },
    /// GHZ secret sharing among `n` parties.
    Secret {
        #[arg(long)]
        n: usize,
    },
    /// Absolutely-maximally-entangled check over all balanced bipartitions.
    Ame {
        state: PathBuf,
    },
    /// Ramsey spectroscopy with product or GHZ probes.
    Ramsey {
        #[arg(long)]
        n_ions: usize,
        #[arg(long)]
        scheme: RamseyScheme,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        total_time: f64,
        /// Defaults to the maximal-slope operating point.
        #[arg(long)]
        detuning: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

fn parse_bits(s: &str) -> std::result::Result<[bool; 6], String> {
    let bits: Vec<bool> = s
        .chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(format!("expected 0 or 1, got {other:?}")),
        })
        .collect::<std::result::Result<_, _>>()?;
    bits.try_into().map_err(|_| "expected exactly six bits".to_string())
}

#[derive(Debug, Serialize)]
struct Meta {
    tool: &'static str,
    version: &'static str,
    command: String,
    input_sha256: String,
    tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

/// Tracks the bytes of every file read so the report can carry their hash.
struct Inputs {
    hasher: Sha256,
    any: bool,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        self.hasher.update(text.as_bytes());
        self.any = true;
        Ok(text)
    }

    fn state(&mut self, path: &Path) -> Result<StateInput> {
        io::parse_state(&self.read(path)?)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            return report_error(err, EXIT_USAGE, "usage", &e.render().to_string());
        }
    };
    let pretty = cli.pretty;
    match execute(cli, &args) {
        Ok(report) => {
            let text = if pretty {
                serde_json::to_string_pretty(&report)
            } else {
                serde_json::to_string(&report)
            }
            .expect("reports serialize to JSON");
            let _ = writeln!(out, "{text}");
            0
        }
        Err(e) if e.is_input_error() => report_error(err, EXIT_INPUT, "input", &e.to_string()),
        Err(e) => report_error(err, EXIT_ANALYSIS, "analysis", &e.to_string()),
    }
}

fn report_error(err: &mut dyn Write, code: i32, kind: &str, message: &str) -> i32 {
    let body = json!({ "error": { "kind": kind, "message": message.trim_end() }, "exit_code": code });
    let _ = writeln!(err, "{body}");
    code
}

fn execute(cli: Cli, args: &[OsString]) -> Result<Value> {
    let mut inputs = Inputs { hasher: Sha256::new(), any: false };
    let config = match &cli.config {
        Some(p) => io::parse_config(&inputs.read(p)?)?,
        None => Config::default(),
    };
    let seed = cli.seed.or(config.seed);
    let tol = config.tolerances;
    let mut optimizer = config.optimizer;
    if let Some(s) = seed {
        optimizer.seed = s;
    }

    let (name, report, used_seed) = match cli.command {
        Command::Classify { state } => {
            let psi = inputs.state(&state)?;
            ("classify", to_value(&classify(psi.pure()?, &tol)?), None)
        }
        Command::Measure { state, which, cut, restarts } => {
            let s = inputs.state(&state)?;
            if let Some(r) = restarts {
                optimizer.restarts = r;
            }
            match which {
                Which::Entropy => ("measure entropy", to_value(&bipartite_report(s.pure()?, &cut)?), None),
                Which::Geometric => {
                    ("measure geometric", to_value(&geometric_measure(s.pure()?, &optimizer)?), Some(optimizer.seed))
                }
                Which::Schmidt => ("measure schmidt", to_value(&schmidt_measure(s.pure()?)?), None),
                Which::Concurrence => {
                    let value = match &s {
                        StateInput::Pure(psi) => concurrence(psi)?,
                        StateInput::Mixed(rho) => mixed_concurrence(rho)?,
                    };
                    ("measure concurrence", json!({ "concurrence": value }), None)
                }
            }
        }
        Command::Witness { state } => {
            let rho = inputs.state(&state)?.to_density();
            ("witness", to_value(&hierarchy_report(&rho)?), None)
        }
        Command::Graph(GraphCommand::Synth { graph }) => {
            let g = io::parse_graph(&inputs.read(&graph)?)?;
            let psi = graph_state(&g)?;
            ("graph synth", json!({ "graph": g, "state": io::state_to_json(&psi) }), None)
        }
        Command::Graph(GraphCommand::Stabilizers { graph }) => {
            let g = io::parse_graph(&inputs.read(&graph)?)?;
            let group = graph_stabilizers(&g);
            let verified = verify_stabilized(&group, &graph_state(&g)?)?;
            ("graph stabilizers", json!({ "graph": g, "generators": group, "verified": verified }), None)
        }
        Command::Mps(MpsCommand::Compress { state, max_bond, tol: cutoff }) => {
            let psi = inputs.state(&state)?;
            let comp = dense_to_mps(psi.pure()?, max_bond, cutoff)?;
            let report = json!({
                "bond_dims": comp.mps.bond_dims(),
                "bond_dimension": comp.mps.bond_dimension(),
                "fidelity": comp.fidelity,
                "discarded_weight": comp.discarded_weight,
                "cut_entropies": cut_entropies(&comp.mps)?,
                "mps": io::mps_to_json(&comp.mps),
            });
            ("mps compress", report, None)
        }
        Command::Gaussian(GaussianCommand::Williamson { cov }) => match io::parse_covariance(&inputs.read(&cov)?)? {
            CovarianceInput::Bosonic(g) => ("gaussian williamson", to_value(&williamson_report(&g)?), None),
            CovarianceInput::Fermionic(_) => {
                return Err(Error::InvalidArgument("Williamson normal form needs a bosonic covariance matrix".into()))
            }
        },
        Command::Gaussian(GaussianCommand::Family { a }) => {
            let r = three_mode_family_report(a)?;
            let mut v = to_value(&r);
            v["covariance"] = io::covariance_to_json(&r.covariance, CovarianceKind::Bosonic);
            ("gaussian family", v, None)
        }
        Command::Entropy(EntropyCommand::Vector { state }) => {
            let report = match inputs.state(&state)? {
                StateInput::Pure(psi) => entropy_vector(&psi)?,
                StateInput::Mixed(rho) => entropy_vector(&rho)?,
            };
            ("entropy vector", to_value(&report), None)
        }
        Command::Entropy(EntropyCommand::Ssa { state, a, b, c }) => {
            let report = match inputs.state(&state)? {
                StateInput::Pure(psi) => check_ssa(&psi, &a, &b, &c)?,
                StateInput::Mixed(rho) => check_ssa(&rho, &a, &b, &c)?,
            };
            ("entropy ssa", to_value(&report), None)
        }
        Command::Game(GameCommand::Ghz(g)) => {
            if g.classical_bruteforce {
                ("game ghz", to_value(&classical_bruteforce()), None)
            } else if g.quantum {
                ("game ghz", to_value(&ghz_game(&GhzGameStrategy::Quantum)?), None)
            } else {
                let bits = g.strategy.expect("clap enforces one strategy flag");
                ("game ghz", to_value(&ghz_game(&GhzGameStrategy::Classical { bits })?), None)
            }
        }
        Command::Protocol(ProtocolCommand::Teleport { state, m }) => {
            let psi = inputs.state(&state)?;
            ("protocol teleport", to_value(&one_bit_teleport(psi.pure()?, m)?), None)
        }
        Command::Protocol(ProtocolCommand::Secret { n }) => ("protocol secret", to_value(&secret_sharing_check(n)?), None),
        Command::Protocol(ProtocolCommand::Ame { state }) => {
            let psi = inputs.state(&state)?;
            ("protocol ame", to_value(&ame_check(psi.pure()?)?), None)
        }
        Command::Protocol(ProtocolCommand::Ramsey { n_ions, scheme, t, total_time, detuning, trials }) => {
            let seed = seed.unwrap_or(0);
            let params = RamseyParams {
                n_ions,
                scheme,
                t,
                total_time,
                detuning: detuning.unwrap_or_else(|| optimal_detuning(n_ions, scheme, t)),
                trials,
                seed,
            };
            ("protocol ramsey", to_value(&ramsey_simulation(&params)?), Some(seed))
        }
    };

    if !inputs.any {
        // no input file: hash the arguments after the program name
        for a in args.iter().skip(1) {
            inputs.hasher.update(a.to_string_lossy().as_bytes());
            inputs.hasher.update([0u8]);
        }
    }
    let meta = Meta {
        tool: "entangle",
        version: env!("CARGO_PKG_VERSION"),
        command: name.to_string(),
        input_sha256: hex(&inputs.hasher.finalize()),
        tolerances: tol,
        seed: used_seed,
    };
    let mut report = match report {
        Value::Object(map) => Value::Object(map),
        other => json!({ "result": other }),
    };
    report["meta"] = to_value(&meta);
    Ok(report)
}
