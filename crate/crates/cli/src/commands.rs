use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qvar_core::entanglement::{CriterionReport, PptCriterion, SeparabilityCriterion};
use qvar_core::generators::{build_generators, build_star_tensor};
use qvar_core::oracle::oracle_min;
use qvar_core::qp::{solve_general, Diagnostics, SolutionStratum, SolverConfig};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::io::{
    matrix_to_grid, parse_json, read_bytes, sha256_hex, ComplexGrid, LocalPairsFile,
    ObservableFile, StateFile,
};
use crate::verify::{run_suite, Check, Suite};

#[derive(Debug, Parser)]
#[command(
    name = "qvar",
    version,
    about = "Tight lower bounds for sums of variances of qudit observables"
)]
pub struct Cli {
    /// Maximum number of worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal variance sum for the observables in a JSON file.
    Bound(BoundArgs),
    /// Run a golden-value suite.
    Verify(VerifyArgs),
    /// Print generators or structure tensors as JSON.
    Dump(DumpArgs),
    /// Independent brute-force minimum over pure states.
    Oracle(OracleArgs),
    /// Test a bipartite state for entanglement.
    Entangle(EntangleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Random seed for all stochastic stages.
    #[arg(long, env = "QVAR_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Radius slices for the qutrit search.
    #[arg(long = "grid-n", default_value_t = SolverConfig::default().grid_n)]
    pub grid_n: usize,
    /// Samples per radius slice and branch.
    #[arg(long, default_value_t = SolverConfig::default().samples_per_slice)]
    pub samples: usize,
    /// Random starts for the pure-state descent (dimension >= 4).
    #[arg(long, default_value_t = SolverConfig::default().restarts)]
    pub restarts: usize,
}

impl SolverArgs {
    pub fn config(&self) -> SolverConfig {
        SolverConfig {
            seed: self.seed,
            grid_n: self.grid_n,
            samples_per_slice: self.samples,
            restarts: self.restarts,
            ..Default::default()
        }
    }
}

impl Default for SolverArgs {
    fn default() -> Self {
        let c = SolverConfig::default();
        Self {
            seed: c.seed,
            grid_n: c.grid_n,
            samples: c.samples_per_slice,
            restarts: c.restarts,
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Observable file: `{"n": N, "observables": [[[re, im], ...], ...]}`.
    pub input: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DumpWhat {
    Generators,
    Dtensor,
    Startensor,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[arg(long, value_enum)]
    pub what: DumpWhat,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, env = "QVAR_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntangleMode {
    /// Local observables on each factor: `{"first": ..., "second": ...}`.
    Sum,
    /// Global observables evaluated on the partial transpose.
    Ppt,
}

#[derive(Debug, Args)]
pub struct EntangleArgs {
    /// State file: `{"dims": [m, n], "rho": grid}` or `{"dims": [m, n], "psi": [[re, im], ...]}`.
    pub state: PathBuf,
    pub observables: PathBuf,
    #[arg(long, value_enum, default_value_t = EntangleMode::Sum)]
    pub mode: EntangleMode,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultDocument {
    pub input_digest: String,
    pub config: SolverConfig,
    pub m: f64,
    pub ell: f64,
    pub r_min: Vec<f64>,
    pub rho_min: ComplexGrid,
    pub stratum: SolutionStratum,
    pub diagnostics: Diagnostics,
    pub wall_time_s: f64,
}

fn write_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out).map_err(|e| CliError::Io {
        path: "<output>".into(),
        source: e,
    })
}

pub fn compute_bound(input: &Path, solver: &SolverArgs) -> CliResult<ResultDocument> {
    let start = Instant::now();
    let bytes = read_bytes(input)?;
    let file: ObservableFile = parse_json(&bytes)?;
    let obs = file.matrices()?;
    let cfg = solver.config();
    let r = solve_general(&obs, &cfg)?;
    Ok(ResultDocument {
        input_digest: sha256_hex(&bytes),
        config: cfg,
        m: r.m,
        ell: r.ell,
        r_min: r.r_min.as_slice().to_vec(),
        rho_min: matrix_to_grid(&r.rho_min),
        stratum: r.stratum,
        diagnostics: r.diagnostics,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Writes the result document; a non-converged solve is still reported
/// but turns into exit code 4.
pub fn cmd_bound<W: Write>(args: &BoundArgs, out: &mut W) -> CliResult<ResultDocument> {
    let doc = compute_bound(&args.input, &args.solver)?;
    match &args.json_out {
        Some(path) => {
            let mut f = std::fs::File::create(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            write_json(&mut f, &doc)?;
        }
        None => write_json(out, &doc)?,
    }
    if !doc.diagnostics.converged {
        return Err(CliError::Solver("local refinement did not converge".into()));
    }
    Ok(doc)
}

pub fn cmd_verify<W: Write>(args: &VerifyArgs, out: &mut W) -> CliResult<Vec<Check>> {
    let checks = run_suite(args.suite, &args.solver.config())?;
    for c in &checks {
        let _ = writeln!(out, "{}", c.line());
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{} passed, {} failed", checks.len() - failed, failed);
    if failed > 0 {
        return Err(CliError::Verify(failed));
    }
    Ok(checks)
}

#[derive(Debug, Serialize)]
struct DEntry {
    i: usize,
    j: usize,
    k: usize,
    value: f64,
}

#[derive(Debug, Serialize)]
struct TensorDump {
    n: usize,
    /// Nonzero `d_ijk` with `i <= j <= k`, 1-based.
    d: Vec<DEntry>,
    /// Nonzero `f_ijk` with `i < j < k`, 1-based.
    f: Vec<DEntry>,
}

#[derive(Debug, Serialize)]
struct StarDump {
    n: usize,
    matrices: Vec<Vec<Vec<f64>>>,
}

pub fn cmd_dump<W: Write>(args: &DumpArgs, out: &mut W) -> CliResult<()> {
    let gens = build_generators(args.n)?;
    match args.what {
        DumpWhat::Generators => write_json(
            out,
            &ObservableFile::from_matrices(args.n, gens.generators()),
        ),
        DumpWhat::Dtensor => {
            let m = gens.len();
            let mut dump = TensorDump {
                n: args.n,
                d: Vec::new(),
                f: Vec::new(),
            };
            for i in 0..m {
                for j in i..m {
                    for k in j..m {
                        let d = gens.d(i, j, k);
                        if d.abs() > 1e-14 {
                            dump.d.push(DEntry {
                                i: i + 1,
                                j: j + 1,
                                k: k + 1,
                                value: d,
                            });
                        }
                        let f = gens.f(i, j, k);
                        if i < j && j < k && f.abs() > 1e-14 {
                            dump.f.push(DEntry {
                                i: i + 1,
                                j: j + 1,
                                k: k + 1,
                                value: f,
                            });
                        }
                    }
                }
            }
            write_json(out, &dump)
        }
        DumpWhat::Startensor => {
            let st = build_star_tensor(&gens);
            let matrices = st
                .matrices()
                .iter()
                .map(|d| {
                    (0..d.nrows())
                        .map(|i| d.row(i).iter().copied().collect())
                        .collect()
                })
                .collect();
            write_json(
                out,
                &StarDump {
                    n: args.n,
                    matrices,
                },
            )
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OracleDocument {
    pub input_digest: String,
    pub value: f64,
    pub psi: Vec<[f64; 2]>,
    pub restarts_used: usize,
    pub converged: bool,
    pub seed: u64,
}

pub fn cmd_oracle<W: Write>(args: &OracleArgs, out: &mut W) -> CliResult<OracleDocument> {
    let bytes = read_bytes(&args.input)?;
    let file: ObservableFile = parse_json(&bytes)?;
    let r = oracle_min(&file.matrices()?, args.restarts, args.seed)?;
    let doc = OracleDocument {
        input_digest: sha256_hex(&bytes),
        value: r.value,
        psi: r.psi.iter().map(|z| [z.re, z.im]).collect(),
        restarts_used: r.restarts_used,
        converged: r.converged,
        seed: args.seed,
    };
    write_json(out, &doc)?;
    Ok(doc)
}

#[derive(Debug, Serialize)]
pub struct EntangleDocument {
    pub mode: &'static str,
    #[serde(flatten)]
    pub report: CriterionReport,
    pub config: SolverConfig,
}

pub fn cmd_entangle<W: Write>(args: &EntangleArgs, out: &mut W) -> CliResult<EntangleDocument> {
    let state_file: StateFile = parse_json(&read_bytes(&args.state)?)?;
    let state = state_file.state()?;
    let obs_bytes = read_bytes(&args.observables)?;
    let cfg = args.solver.config();
    let (mode, report) = match args.mode {
        EntangleMode::Sum => {
            let pairs: LocalPairsFile = parse_json(&obs_bytes)?;
            let crit = SeparabilityCriterion::new(
                &pairs.first.matrices()?,
                &pairs.second.matrices()?,
                &cfg,
            )?;
            ("sum", crit.evaluate(&state)?)
        }
        EntangleMode::Ppt => {
            let file: ObservableFile = parse_json(&obs_bytes)?;
            let crit = PptCriterion::new(&file.matrices()?, &cfg)?;
            ("ppt", crit.evaluate(&state)?)
        }
    };
    let doc = EntangleDocument {
        mode,
        report,
        config: cfg,
    };
    write_json(out, &doc)?;
    Ok(doc)
}

/// Dispatches a parsed command line.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        // Only the first call can size the global pool; later calls keep it.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global();
    }
    match &cli.command {
        Command::Bound(a) => cmd_bound(a, out).map(|_| ()),
        Command::Verify(a) => cmd_verify(a, out).map(|_| ()),
        Command::Dump(a) => cmd_dump(a, out),
        Command::Oracle(a) => cmd_oracle(a, out).map(|_| ()),
        Command::Entangle(a) => cmd_entangle(a, out).map(|_| ()),
    }
}
