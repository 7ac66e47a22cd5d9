//! Command-line front end: instance file ingestion, deterministic random
//! instance generation, synthesis reports, trajectory emission and
//! end-to-end verification.
//!
//! Instance files are JSON documents with integer fields `n`, `m`, `kf`
//! and nested row-major arrays `A`, `B`, `Q`, `R`, `S`. Reports are JSON
//! in the same format family. Exit status is 0 exactly when every
//! evaluated residual is within its tolerance.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{
    hamiltonian_residual, trajectory_xp, trajectory_xpu, HamiltonianResiduals, ModeParams,
    Trajectory,
};
use crate::matrix::{spectral_radius_estimate, Matrix};
use crate::oracle::{compare_solution_sets, SubspaceComparison, DEFAULT_NULL_SPACE_TOL};
use crate::synthesis::{
    synthesize, verify_identities, IdentityReport, ProblemInstance, SynthesisResult,
};

pub const DEFAULT_IDENTITY_TOL: f64 = 1e-8;
pub const DEFAULT_TRAJECTORY_TOL: f64 = 1e-8;
/// One digit looser than the identity tolerance: the null-space projection
/// accumulates more rounding.
pub const DEFAULT_CONTAINMENT_TOL: f64 = 1e-7;

#[derive(Parser, Debug)]
#[command(
    name = "singular-lq",
    about = "Synthesize and verify solution families of singular discrete-time LQ Hamiltonian systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Synthesize P+, K+, A+, W, Kbar+ and check the structural identities
    Solve(SolveArgs),
    /// Emit a parametrized trajectory as a delimited table
    Trajectory(TrajectoryArgs),
    /// Run synthesis, trajectory residuals and optionally the null-space oracle
    Verify(VerifyArgs),
    /// Generate a deterministic random instance file
    Generate(GenerateArgs),
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Instance file to read
    #[arg(long)]
    pub input: PathBuf,
    /// Report file; stdout when omitted
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Pass/fail tolerance on the identity residuals
    #[arg(long, default_value_t = DEFAULT_IDENTITY_TOL)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct TrajectoryArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Comma-separated alpha vector of length n
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Comma-separated beta vector of length n
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    /// xp: states and costates over 0..kf; xpu: with inputs over 0..kf-1
    #[arg(long, default_value = "xpu")]
    pub mode: TrajectoryMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TrajectoryMode {
    Xp,
    Xpu,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    /// Also run the brute-force null-space comparison
    #[arg(long)]
    pub with_oracle: bool,
    #[arg(long, default_value_t = DEFAULT_IDENTITY_TOL)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub kf: usize,
    #[arg(long)]
    pub output: PathBuf,
}

/// On-disk instance document.
#[derive(Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub m: usize,
    pub kf: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
    #[serde(rename = "R")]
    pub r: Vec<Vec<f64>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<f64>>,
}

impl InstanceFile {
    pub fn from_instance(inst: &ProblemInstance) -> Self {
        Self {
            n: inst.n,
            m: inst.m,
            kf: inst.k_f,
            a: inst.a.to_rows(),
            b: inst.b.to_rows(),
            q: inst.q.to_rows(),
            r: inst.r.to_rows(),
            s: inst.s.to_rows(),
        }
    }

    pub fn into_instance(self) -> Result<ProblemInstance> {
        let field = |name: &str, rows: &[Vec<f64>], r: usize, c: usize| -> Result<Matrix> {
            let mat = Matrix::from_rows(rows)
                .map_err(|e| Error::Parse(format!("field {name}: {e}")))?;
            if mat.rows() != r || mat.cols() != c {
                return Err(Error::Parse(format!(
                    "field {name}: expected shape {r}x{c}, got {}x{}",
                    mat.rows(),
                    mat.cols()
                )));
            }
            Ok(mat)
        };
        let (n, m) = (self.n, self.m);
        ProblemInstance::new(
            self.kf,
            field("A", &self.a, n, n)?,
            field("B", &self.b, n, m)?,
            field("Q", &self.q, n, n)?,
            field("R", &self.r, m, m)?,
            field("S", &self.s, n, m)?,
        )
    }
}

/// Structured report emitted by `solve` and `verify`.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub synthesis: SynthesisResult,
    pub identities: IdentityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonianResiduals>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<SubspaceComparison>,
    pub tolerance: f64,
    pub verdict: &'static str,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

pub fn load_instance(path: &Path) -> Result<ProblemInstance> {
    let text = fs::read_to_string(path)?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    file.into_instance()
}

pub fn write_instance(inst: &ProblemInstance, path: &Path) -> Result<()> {
    let doc = InstanceFile::from_instance(inst);
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::Parse(format!("serialize: {e}")))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn parse_vector(name: &str, text: &str, expected_len: usize) -> Result<Vec<f64>> {
    let values: std::result::Result<Vec<f64>, _> = text
        .split(',')
        .map(|tok| tok.trim().parse::<f64>())
        .collect();
    let values = values.map_err(|e| Error::Parse(format!("--{name}: {e}")))?;
    if values.len() != expected_len {
        return Err(Error::DimensionMismatch {
            context: "parameter vector",
            expected: format!("{expected_len} components"),
            got: format!("{} in --{name}", values.len()),
        });
    }
    Ok(values)
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn report_to_json(report: &RunReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serialization");
    text.push('\n');
    text
}

/// `solve`: synthesis plus the identity suite.
pub fn cmd_solve(args: &SolveArgs) -> Result<RunReport> {
    let inst = load_instance(&args.input)?;
    let syn = synthesize(&inst)?;
    let identities = verify_identities(&inst, &syn);
    let pass = identities.max_residual() <= args.tol;
    let report = RunReport {
        synthesis: syn,
        identities,
        hamiltonian: None,
        oracle: None,
        tolerance: args.tol,
        verdict: if pass { "pass" } else { "fail" },
    };
    emit(args.output.as_deref(), &report_to_json(&report))?;
    Ok(report)
}

fn format_table(traj: &Trajectory, n: usize, m: usize, mode: TrajectoryMode) -> String {
    let mut out = String::new();
    out.push('k');
    for i in 0..n {
        out.push_str(&format!("\tx{i}"));
    }
    for i in 0..n {
        out.push_str(&format!("\tp{i}"));
    }
    if mode == TrajectoryMode::Xpu {
        for i in 0..m {
            out.push_str(&format!("\tu{i}"));
        }
    }
    out.push('\n');
    let last = match mode {
        TrajectoryMode::Xp => traj.k_f(),
        TrajectoryMode::Xpu => traj.k_f() - 1,
    };
    for k in 0..=last {
        out.push_str(&format!("{k}"));
        for i in 0..n {
            out.push_str(&format!("\t{:.16e}", traj.x[k][(i, 0)]));
        }
        for i in 0..n {
            out.push_str(&format!("\t{:.16e}", traj.p[k][(i, 0)]));
        }
        if let (TrajectoryMode::Xpu, Some(u)) = (mode, traj.u.as_ref()) {
            for i in 0..m {
                out.push_str(&format!("\t{:.16e}", u[k][(i, 0)]));
            }
        }
        out.push('\n');
    }
    out
}

/// `trajectory`: emit the parametrized family member for given (alpha, beta).
pub fn cmd_trajectory(args: &TrajectoryArgs) -> Result<()> {
    let inst = load_instance(&args.input)?;
    let alpha = parse_vector("alpha", &args.alpha, inst.n)?;
    let beta = parse_vector("beta", &args.beta, inst.n)?;
    let params = ModeParams::from_slices(&alpha, &beta)?;
    let syn = synthesize(&inst)?;
    let traj = match args.mode {
        TrajectoryMode::Xp => trajectory_xp(&inst, &syn, &params)?,
        TrajectoryMode::Xpu => trajectory_xpu(&inst, &syn, &params)?,
    };
    let table = format_table(&traj, inst.n, inst.m, args.mode);
    emit(args.output.as_deref(), &table)
}

/// `verify`: synthesis, identities, trajectory residuals and (optionally)
/// the null-space oracle, folded into a single verdict.
pub fn cmd_verify(args: &VerifyArgs) -> Result<RunReport> {
    let inst = load_instance(&args.input)?;
    let alpha = parse_vector("alpha", &args.alpha, inst.n)?;
    let beta = parse_vector("beta", &args.beta, inst.n)?;
    let params = ModeParams::from_slices(&alpha, &beta)?;
    let syn = synthesize(&inst)?;
    let identities = verify_identities(&inst, &syn);
    let traj = trajectory_xpu(&inst, &syn, &params)?;
    let residuals = hamiltonian_residual(&inst, &traj)?;
    let oracle = if args.with_oracle {
        Some(compare_solution_sets(&inst, &syn, DEFAULT_NULL_SPACE_TOL)?)
    } else {
        None
    };

    let mut pass = identities.max_residual() <= args.tol
        && residuals.max_residual() <= DEFAULT_TRAJECTORY_TOL.max(args.tol);
    if let Some(cmp) = &oracle {
        pass = pass && cmp.dims_match && cmp.containment_residual <= DEFAULT_CONTAINMENT_TOL;
    }
    let report = RunReport {
        synthesis: syn,
        identities,
        hamiltonian: Some(residuals),
        oracle,
        tolerance: args.tol,
        verdict: if pass { "pass" } else { "fail" },
    };
    emit(args.output.as_deref(), &report_to_json(&report))?;
    Ok(report)
}

/// Deterministic instance generator.
///
/// A is drawn with independent uniform entries, then rescaled so a
/// power-iteration estimate of its spectral radius is 0.9. The compound
/// cost [[Q, S], [S', R]] is formed as L L' from a random L, after which R
/// gets a 1e-6 ridge so the inner-matrix invertibility precondition is
/// generically met.
pub fn generate_instance(seed: u64, n: usize, m: usize, kf: usize) -> Result<ProblemInstance> {
    if n < 1 || m < 1 || kf < 1 {
        return Err(Error::InstanceInvalid(
            "generate requires n, m, kf >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |rows: usize, cols: usize| -> Matrix {
        let entries: Vec<f64> = (0..rows * cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Matrix::new(rows, cols, entries).expect("finite random entries")
    };

    let raw_a = draw(n, n);
    let rho = spectral_radius_estimate(&raw_a, 200);
    let a = if rho > 0.0 {
        raw_a.scale(0.9 / rho)
    } else {
        raw_a
    };
    let b = draw(n, m);

    let l = draw(n + m, n + m);
    let compound = &l * &l.transpose();
    let q = compound.block(0, 0, n, n);
    let s = compound.block(0, n, n, m);
    let r = &compound.block(n, n, m, m) + &Matrix::identity(m).scale(1e-6);

    ProblemInstance::new(kf, a, b, q, r, s)
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let inst = generate_instance(args.seed, args.n, args.m, args.kf)?;
    write_instance(&inst, &args.output)
}

/// Dispatch a parsed command line; the returned flag is the exit verdict
/// (true = status 0).
pub fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Solve(args) => cmd_solve(args).map(|r| r.passed()),
        Command::Trajectory(args) => cmd_trajectory(args).map(|_| true),
        Command::Verify(args) => cmd_verify(args).map(|r| r.passed()),
        Command::Generate(args) => cmd_generate(args).map(|_| true),
    }
}
