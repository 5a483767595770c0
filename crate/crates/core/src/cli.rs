//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or I/O problems, 2 invalid input (not
//! unitary, malformed rule, failed relation, ...), 3 precision target missed.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dilation::{dilate, DilationPipeline, Method};
use crate::error::{Error, Result};
use crate::models::qtm::{self, QtmInput, QtmMethod, QtmRunOptions, TransitionRule};
use crate::models::symrep::{symrep_check, YoungTableauBasis, BASIS_ORDER};
use crate::models::walk::{WalkConfig, WalkMethod};
use crate::sparse::{distance, mtx, random_sparse_unitary, SparseMatrix, StateVector, C64};
use crate::trotter::{exact_evolution, read_manifest, trotterize, write_manifest, Order};

#[derive(Debug, Parser)]
#[command(name = "sparse-unitary", version, about = "Implement sparse unitaries through Hermitian dilation and product formulas")]
pub struct Cli {
    /// Also write a JSON record of this invocation to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    pub run_manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the Hermitian dilation of a Matrix Market matrix.
    Dilate { input: PathBuf, output: PathBuf },
    /// Factor exp(-i H t) into sparse unitaries meeting an error target.
    Evolve {
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply a unitary to a state through its dilation.
    Implement {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value_t = ImplementMethod::Trotter)]
        method: ImplementMethod,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
        #[arg(long)]
        keep_phase: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the spectral-norm distance between stored factors and the exact evolution.
    Verify {
        /// The evolved Hamiltonian, or a unitary whose dilation was evolved.
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        factors: PathBuf,
        #[arg(long)]
        phase_invariant: bool,
        /// Target; defaults to the epsilon recorded in the manifest.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Quantum Turing machines.
    Qtm {
        #[command(subcommand)]
        command: QtmCommand,
    },
    /// Coined quantum walk on a cycle.
    Walk {
        #[command(subcommand)]
        command: WalkCommand,
    },
    /// Young's orthogonal form of the symmetric group.
    Symrep {
        /// Comma-separated, e.g. `2,1`.
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<usize>,
        /// Emit the matrix of s_j as Matrix Market.
        #[arg(long)]
        generator: Option<usize>,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random sparse unitary.
    RandomUnitary {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum QtmCommand {
    /// Run a machine for a number of steps from a tape and start state.
    Run {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long)]
        steps: usize,
        /// Defaults to steps + 1.
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, value_enum, default_value_t = RunMethod::Direct)]
        method: RunMethod,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        /// Comma-separated symbols written from cell 0.
        #[arg(long, value_delimiter = ',')]
        tape: Vec<String>,
        /// Defaults to the first state.
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check normalization and interior unitarity of a rule.
    Validate {
        #[arg(long)]
        rule: PathBuf,
        #[arg(long, default_value_t = 3)]
        probe_t: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum WalkCommand {
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = RunMethod::Direct)]
        method: RunMethod,
        #[arg(long, default_value_t = 1e-4)]
        epsilon: f64,
        /// `.csv` gives `x,probability` rows; anything else JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ImplementMethod {
    Analytic,
    Trotter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RunMethod {
    Direct,
    Dilation,
}

/// Record of one invocation. Everything except `wall_time_s` is a function
/// of the arguments and input files.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub parameters: BTreeMap<String, Value>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certified_error: Option<f64>,
    pub exit_code: i32,
    pub wall_time_s: f64,
}

impl RunManifest {
    fn new(command: &str) -> Self {
        Self { command: command.to_string(), ..Default::default() }
    }

    fn input(&mut self, key: &str, p: &Path) {
        self.inputs.insert(key.to_string(), p.display().to_string());
    }

    fn param(&mut self, key: &str, v: impl Serialize) {
        self.parameters.insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub manifest: Option<RunManifest>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BoundViolated { .. } | Error::Leakage { .. } | Error::RepetitionCap { .. } => 3,
        Error::NotUnitary { .. }
        | Error::NotHermitian { .. }
        | Error::NotInvolutory
        | Error::UnnormalizedRule { .. }
        | Error::InvalidRule(_)
        | Error::InvalidPartition(_)
        | Error::RelationFailure { .. }
        | Error::DuplicateEntry { .. }
        | Error::OracleContract { .. }
        | Error::IndexOutOfRange { .. }
        | Error::DimensionMismatch { .. }
        | Error::Parse { .. }
        | Error::Json(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (program name first), runs the command, and reports on `out` / `err`.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return Outcome { exit_code: code, manifest: None };
        }
    };
    let start = Instant::now();
    let mut manifest = RunManifest::default();
    let result = run(&cli.command, &mut manifest, out);
    manifest.exit_code = match &result {
        Ok(code) => *code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(e)
        }
    };
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    if let Some(path) = &cli.run_manifest {
        let written = serde_json::to_string_pretty(&manifest)
            .map_err(Error::from)
            .and_then(|s| fs::write(path, s + "\n").map_err(Error::from));
        if let Err(e) = written {
            let _ = writeln!(err, "error: cannot write run manifest {}: {e}", path.display());
            if manifest.exit_code == 0 {
                manifest.exit_code = 1;
            }
        }
    }
    Outcome { exit_code: manifest.exit_code, manifest: Some(manifest) }
}

fn order_of(o: u8) -> Order {
    if o == 1 {
        Order::First
    } else {
        Order::Second
    }
}

fn read_json(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| Error::invalid(format!("cannot read {}: {e}", p.display())))
}

fn read_mtx(p: &Path) -> Result<SparseMatrix> {
    match mtx::read(p) {
        Err(Error::Io(e)) => Err(Error::invalid(format!("cannot read {}: {e}", p.display()))),
        Err(Error::Parse { line, reason }) => Err(Error::Parse { line, reason: format!("{}: {reason}", p.display()) }),
        other => other,
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write, m: &mut RunManifest) -> Result<()> {
    match path {
        Some(p) => {
            fs::write(p, text)?;
            m.outputs.push(p.display().to_string());
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cmd: &Command, m: &mut RunManifest, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Dilate { input, output } => {
            *m = RunManifest::new("dilate");
            m.input("matrix", input);
            let d = dilate(&read_mtx(input)?)?;
            mtx::write(&d.h, output)?;
            m.outputs.push(output.display().to_string());
            writeln!(out, "dilation {}x{} nnz {} involutory {}", d.h.dim(), d.h.dim(), d.h.nnz(), d.involutory)?;
            Ok(0)
        }
        Command::Evolve { h, t, epsilon, order, out: path } => {
            *m = RunManifest::new("evolve");
            m.input("h", h);
            m.param("t", t);
            m.param("epsilon", epsilon);
            m.param("order", order);
            let f = trotterize(&read_mtx(h)?, *t, *epsilon, order_of(*order))?;
            let written = write_manifest(&f, path)?;
            let dir = path.parent().unwrap_or(Path::new(""));
            m.outputs.extend(written.factor_files.iter().map(|n| dir.join(n).display().to_string()));
            m.outputs.push(path.display().to_string());
            m.certified_error = f.certified_error;
            let bound = f.certified_error.map_or("uncertified".to_string(), |e| format!("{e:.6e}"));
            writeln!(out, "r = {}, {} factors per slice, certified error {bound}", f.r, f.slice().len())?;
            Ok(0)
        }
        Command::Implement { u, state, method, epsilon, order, keep_phase, out: path } => {
            *m = RunManifest::new("implement");
            m.input("u", u);
            m.input("state", state);
            let method = match method {
                ImplementMethod::Analytic => {
                    m.param("method", "analytic");
                    Method::Analytic
                }
                ImplementMethod::Trotter => {
                    m.param("method", "trotter");
                    m.param("epsilon", epsilon);
                    m.param("order", order);
                    Method::Trotter { epsilon: *epsilon, order: order_of(*order) }
                }
            };
            m.param("keep_phase", keep_phase);
            let psi = StateVector::from_json(&read_json(state)?)?;
            let pipeline = DilationPipeline::new(&read_mtx(u)?, method)?.keep_phase(*keep_phase);
            m.certified_error = pipeline.evolution().and_then(|f| f.certified_error);
            let result = pipeline.apply(&psi)?;
            emit(&(result.state.to_json()? + "\n"), path.as_deref(), out, m)?;
            Ok(0)
        }
        Command::Verify { u, factors, phase_invariant, epsilon } => {
            *m = RunManifest::new("verify");
            m.input("u", u);
            m.input("factors", factors);
            m.param("phase_invariant", phase_invariant);
            let f = read_manifest(factors)?;
            let src = read_mtx(u)?;
            let h = if src.dim() == f.dim {
                src
            } else if 2 * src.dim() == f.dim {
                dilate(&src)?.h
            } else {
                return Err(Error::DimensionMismatch { expected: f.dim, found: src.dim() });
            };
            let target = epsilon.or(f.epsilon);
            m.param("epsilon", target);
            let product = f.dense_product()?;
            let exact = exact_evolution(&h, f.target_t)?;
            let dist = distance(&product, &exact, *phase_invariant)?;
            m.certified_error = Some(dist);
            writeln!(out, "distance {dist:.6e}")?;
            match target {
                Some(eps) if dist > eps => {
                    writeln!(out, "target {eps:.6e} not met")?;
                    Ok(3)
                }
                _ => Ok(0),
            }
        }
        Command::Qtm { command } => run_qtm(command, m, out),
        Command::Walk { command: WalkCommand::Run { config, method, epsilon, out: path } } => {
            *m = RunManifest::new("walk run");
            m.input("config", config);
            let cfg: WalkConfig = serde_json::from_str(&read_json(config)?)?;
            let method = match method {
                RunMethod::Direct => {
                    m.param("method", "direct");
                    WalkMethod::Direct
                }
                RunMethod::Dilation => {
                    m.param("method", "dilation");
                    m.param("epsilon", epsilon);
                    WalkMethod::Dilation { epsilon: *epsilon }
                }
            };
            let run = cfg.run(method)?;
            let is_csv = path.as_ref().and_then(|p| p.extension()).is_some_and(|e| e == "csv");
            let text = if is_csv {
                let mut s = String::from("x,probability\n");
                for (x, p) in run.distribution.iter().enumerate() {
                    s.push_str(&format!("{x},{p:.17e}\n"));
                }
                s
            } else {
                let v = json!({ "n": cfg.n, "steps": cfg.steps, "distribution": run.distribution });
                serde_json::to_string_pretty(&v)? + "\n"
            };
            emit(&text, path.as_deref(), out, m)?;
            Ok(0)
        }
        Command::Symrep { partition, generator, check, out: path } => {
            *m = RunManifest::new("symrep");
            m.param("partition", partition);
            m.param("basis_order", BASIS_ORDER);
            let basis = YoungTableauBasis::new(partition)?;
            if let Some(j) = generator {
                m.param("generator", j);
                let g = basis.generator(*j)?;
                emit(&mtx::to_string(&g), path.as_deref(), out, m)?;
            }
            if *check {
                let report = symrep_check(partition)?;
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            }
            if generator.is_none() && !check {
                let tableaux: Vec<Vec<Vec<usize>>> = basis.tableaux().iter().map(|t| t.rows()).collect();
                let v = json!({
                    "partition": partition,
                    "dim": basis.dim(),
                    "basis_order": BASIS_ORDER,
                    "basis": tableaux,
                });
                emit(&(serde_json::to_string_pretty(&v)? + "\n"), path.as_deref(), out, m)?;
            }
            Ok(0)
        }
        Command::RandomUnitary { n, d, seed, out: path } => {
            *m = RunManifest::new("random-unitary");
            m.param("n", n);
            m.param("d", d);
            m.param("seed", seed);
            let u = random_sparse_unitary(*n, *d, *seed)?;
            emit(&mtx::to_string(&u), path.as_deref(), out, m)?;
            Ok(0)
        }
    }
}

fn run_qtm(cmd: &QtmCommand, m: &mut RunManifest, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        QtmCommand::Validate { rule, probe_t } => {
            *m = RunManifest::new("qtm validate");
            m.input("rule", rule);
            m.param("probe_t", probe_t);
            let r = TransitionRule::from_json(&read_json(rule)?)?;
            let report = qtm::qtm_validate(&r, *probe_t)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(if report.interior_unitary { 0 } else { 2 })
        }
        QtmCommand::Run { rule, steps, radius, method, epsilon, tape, start, out: path } => {
            *m = RunManifest::new("qtm run");
            m.input("rule", rule);
            m.param("steps", steps);
            m.param("tape", tape);
            let r = TransitionRule::from_json(&read_json(rule)?)?;
            let tape: Vec<usize> = tape.iter().filter(|s| !s.is_empty()).map(|s| r.symbol_index(s)).collect::<Result<_>>()?;
            let state = match start {
                Some(name) => r.state_index(name)?,
                None => 0,
            };
            m.param("start", &r.states()[state]);
            let method = match method {
                RunMethod::Direct => {
                    m.param("method", "direct");
                    QtmMethod::Direct
                }
                RunMethod::Dilation => {
                    m.param("method", "dilation");
                    m.param("epsilon", epsilon);
                    QtmMethod::Dilation { epsilon: *epsilon, order: Order::Second }
                }
            };
            let opts = QtmRunOptions { radius: *radius, method, ..Default::default() };
            let run = qtm::qtm_run(&r, &QtmInput { tape, state }, *steps, &opts)?;
            m.param("radius", run.radius());
            let support: Vec<Value> = run
                .state
                .amps()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm() > 1e-14)
                .map(|(idx, &a): (usize, &C64)| {
                    let c = run.machine.decode(idx);
                    let cells: Vec<&str> = c.tape.iter().map(|&s| r.alphabet()[s].as_str()).collect();
                    json!({
                        "head": c.head,
                        "state": r.states()[c.state],
                        "tape": cells,
                        "amp": [a.re, a.im],
                    })
                })
                .collect();
            let v = json!({
                "radius": run.radius(),
                "steps": steps,
                "norm": run.state.norm(),
                "norm_deviation": run.norm_deviation,
                "bound": run.bound,
                "support": support,
            });
            emit(&(serde_json::to_string_pretty(&v)? + "\n"), path.as_deref(), out, m)?;
            Ok(0)
        }
    }
}
