//! Command-line front-end.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 property-suite failure.
//! Machine outputs carry 17 significant digits, human summaries 6.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::analysis::{
    entropy_minimizer, epsilon_separation, marginal_distance, partial_transpose_min_eig,
    von_neumann_entropy,
};
use crate::bloch::{bloch_decompose, BlochVector};
use crate::covmap::{apply, critical_points, region_scan, Interval};
use crate::error::Error;
use crate::linalg;
use crate::processes::{
    cloning_output, cloning_params, cloning_probability, entangled_output, entangling_params,
    optimal_entropy,
};
use crate::state::DensityMatrix;
use crate::verify::{run_suite, Suite};

/// Largest N whose entropy is computed from the spectrum in `entropy-table`.
pub const SPECTRAL_TABLE_LIMIT: usize = 32;

#[derive(Debug, Parser)]
#[command(
    name = "qcovmap",
    version,
    about = "Covariant two-particle quantum maps: cloning and entanglement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan the physical region in the (beta·m11, C) plane.
    Region(RegionArgs),
    /// Report on the optimal entangler output.
    Entangle(EntangleArgs),
    /// Report on the optimal cloner output.
    Clone(CloneArgs),
    /// Run a seeded property suite.
    Verify(VerifyArgs),
    /// Entropy of the entangler output against ln N².
    EntropyTable(EntropyTableArgs),
    /// Grid-search the minimum-entropy point of the alpha = 0 slice.
    Minimize(MinimizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// Single-particle dimension.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// The bare alpha coefficient (not multiplied by m11).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Lower end of the beta·m11 axis.
    #[arg(long, default_value_t = -0.3, allow_negative_numbers = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub x_max: f64,
    /// Lower end of the C axis.
    #[arg(long, default_value_t = -0.3, allow_negative_numbers = true)]
    pub y_min: f64,
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub y_max: f64,
    /// Grid points per axis.
    #[arg(long, default_value_t = 201)]
    pub resolution: usize,
    /// csv or json.
    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    pub emit: Emit,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EntangleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    pub emit: Emit,
    /// Seed for the random input used to cross-check the map.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CloneArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    pub emit: Emit,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// covariance, linearity, marginals, spectrum, permutation, generators, roundtrip or all
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Random inputs per suite.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    pub emit: Emit,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EntropyTableArgs {
    /// Tabulate N = 2..=n_max.
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    pub emit: Emit,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    #[arg(long)]
    pub n: usize,
    /// Coarse grid points per axis before local refinement.
    #[arg(long, default_value_t = 400)]
    pub resolution: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Failure(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(io) => CliError::Io(io),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

/// Six significant digits for human-readable summaries.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        format!("{:.*}", (5 - mag).max(0) as usize, v)
    } else {
        format!("{v:.5e}")
    }
}

/// Seventeen significant digits for machine outputs.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

fn require_dim(n: usize) -> CliResult {
    if n < 2 {
        Err(CliError::Usage(format!("--n must be at least 2, got {n}")))
    } else {
        Ok(())
    }
}

fn require_emit(emit: Emit, allowed: &[Emit], cmd: &str) -> CliResult {
    if allowed.contains(&emit) {
        Ok(())
    } else {
        Err(CliError::Usage(
            format!("{cmd} does not support --emit {emit:?}").to_lowercase(),
        ))
    }
}

/// Runs `f` against `--out` if given, otherwise against `stdout`.
fn with_sink(
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> CliResult {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => f(stdout)?,
    }
    Ok(())
}

pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    match &cli.command {
        Command::Region(a) => cmd_region(a, stdout, stderr),
        Command::Entangle(a) => cmd_entangle(a, stdout),
        Command::Clone(a) => cmd_clone(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::EntropyTable(a) => cmd_entropy_table(a, stdout),
        Command::Minimize(a) => cmd_minimize(a, stdout),
    }
}

pub fn cmd_region(a: &RegionArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    require_dim(a.n)?;
    require_emit(a.emit, &[Emit::Csv, Emit::Json], "region")?;
    let xr = Interval::new(a.x_min, a.x_max)?;
    let yr = Interval::new(a.y_min, a.y_max)?;
    let scan = region_scan(a.n, a.alpha, xr, yr, a.resolution)?;
    let vertices: Vec<_> = critical_points(a.n, a.alpha)?
        .into_iter()
        .filter(|p| xr.contains(p.x) && yr.contains(p.y))
        .collect();

    with_sink(&a.out, stdout, |w| match a.emit {
        Emit::Json => {
            let doc = json!({
                "N": scan.n,
                "alpha": scan.alpha,
                "resolution": scan.resolution,
                "points": scan.points,
                "critical_points": vertices,
            });
            writeln!(
                w,
                "{}",
                serde_json::to_string(&doc).map_err(io::Error::other)?
            )
        }
        _ => scan.write_csv(w),
    })?;

    writeln!(
        stderr,
        "region N={} alpha={}: {} of {} grid points physical, {} disagreements with the eigenvalue oracle",
        scan.n,
        sig6(scan.alpha),
        scan.physical_count(),
        scan.points.len(),
        scan.disagreements().len()
    )?;
    match vertices.iter().find(|p| p.all_constraints_active()) {
        Some(p) => writeln!(
            stderr,
            "boundary point with all constraints active: x = {}, y = {} (margin {})",
            sig6(p.x),
            sig6(p.y),
            sig6(p.margin)
        )?,
        None => writeln!(
            stderr,
            "no point with all constraints active in this window"
        )?,
    }
    Ok(())
}

pub fn cmd_entangle(a: &EntangleArgs, stdout: &mut dyn Write) -> CliResult {
    require_dim(a.n)?;
    require_emit(a.emit, &[Emit::Text, Emit::Json], "entangle")?;
    let n = a.n;
    let params = entangling_params(n)?;
    let rho = entangled_output(n)?;
    let entropy = von_neumann_entropy(&rho)?;
    let closed = optimal_entropy(n)?;
    let ppt = partial_transpose_min_eig(&rho)?;
    let eps = epsilon_separation(&rho)?;
    let marg = marginal_distance(&rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let m = bloch_decompose(&DensityMatrix::random_pure(n, &mut rng))?;
    let map_dev = linalg::max_abs_diff(apply(&params, &m)?.matrix(), rho.matrix());

    with_sink(&a.out, stdout, |w| match a.emit {
        Emit::Json => {
            let doc = json!({
                "params": params,
                "entropy": entropy,
                "entropy_closed_form": closed,
                "ppt_min_eig": ppt,
                "epsilon": eps,
                "marginal_distance": marg,
                "map_deviation": map_dev,
                "state": rho.to_json(),
            });
            writeln!(
                w,
                "{}",
                serde_json::to_string(&doc).map_err(io::Error::other)?
            )
        }
        _ => {
            writeln!(w, "N                     {n}")?;
            writeln!(w, "C                     {}", sig6(params.c))?;
            writeln!(w, "entropy               {}", sig6(entropy))?;
            writeln!(w, "entropy (ln C(N,2))   {}", sig6(closed))?;
            writeln!(w, "PPT min eigenvalue    {}", sig6(ppt))?;
            writeln!(w, "epsilon               {}", sig6(eps))?;
            writeln!(w, "marginal distance     {}", sig6(marg))?;
            writeln!(w, "map deviation         {}", sig6(map_dev))
        }
    })
}

pub fn cmd_clone(a: &CloneArgs, stdout: &mut dyn Write) -> CliResult {
    require_dim(a.n)?;
    require_emit(a.emit, &[Emit::Text, Emit::Json], "clone")?;
    let n = a.n;
    let params = cloning_params(n)?;
    let out = apply(&params, &BlochVector::canonical(n)?)?;
    let p_map = out.entry(0, 0).re;
    let p_closed = cloning_probability(n)?;
    let diff = (p_map - p_closed).abs();
    let state_dev = linalg::max_abs_diff(out.matrix(), cloning_output(n)?.matrix());

    with_sink(&a.out, stdout, |w| match a.emit {
        Emit::Json => {
            let doc = json!({
                "params": params,
                "p11_map": p_map,
                "p11_closed_form": p_closed,
                "difference": diff,
                "state_deviation": state_dev,
            });
            writeln!(
                w,
                "{}",
                serde_json::to_string(&doc).map_err(io::Error::other)?
            )
        }
        _ => {
            writeln!(w, "N                     {n}")?;
            writeln!(w, "P11 (map)             {}", sig6(p_map))?;
            writeln!(w, "P11 (2/(N+1))         {}", sig6(p_closed))?;
            writeln!(w, "difference            {}", sig6(diff))?;
            writeln!(w, "state deviation       {}", sig6(state_dev))
        }
    })
}

pub fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> CliResult {
    require_dim(a.n)?;
    require_emit(a.emit, &[Emit::Text, Emit::Json], "verify")?;
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a
            .suite
            .parse()
            .map_err(|e: Error| CliError::Usage(e.to_string()))?]
    };
    let reports = suites
        .into_iter()
        .map(|s| run_suite(s, a.n, a.trials, a.seed))
        .collect::<crate::Result<Vec<_>>>()?;

    with_sink(&a.out, stdout, |w| {
        if a.emit == Emit::Json {
            return writeln!(
                w,
                "{}",
                serde_json::to_string(&reports).map_err(io::Error::other)?
            );
        }
        for r in &reports {
            writeln!(
                w,
                "suite {} N={} trials={} seed={}",
                r.suite,
                r.n,
                r.deviations.len(),
                r.seed
            )?;
            for (k, d) in r.deviations.iter().enumerate() {
                writeln!(w, "  trial {:>4}  max deviation {}", k + 1, sig6(*d))?;
            }
            writeln!(
                w,
                "{} {}: max deviation {} (tolerance {})",
                if r.passed { "PASS" } else { "FAIL" },
                r.suite,
                sig6(r.max_deviation),
                sig6(r.tolerance)
            )?;
        }
        Ok(())
    })?;

    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.suite.to_string())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!(
            "property suite failed: {}",
            failed.join(", ")
        )))
    }
}

pub fn cmd_entropy_table(a: &EntropyTableArgs, stdout: &mut dyn Write) -> CliResult {
    require_dim(a.n_max)?;
    require_emit(a.emit, &[Emit::Csv, Emit::Json], "entropy-table")?;
    let rows = (2..=a.n_max)
        .map(|n| {
            let closed = optimal_entropy(n)?;
            let spectral = if n <= SPECTRAL_TABLE_LIMIT {
                von_neumann_entropy(&entangled_output(n)?)?
            } else {
                closed
            };
            let gap = 2.0 * (n as f64).ln() - spectral;
            Ok((n, spectral, closed, gap))
        })
        .collect::<crate::Result<Vec<_>>>()?;

    with_sink(&a.out, stdout, |w| {
        if a.emit == Emit::Json {
            let doc: Vec<_> = rows
                .iter()
                .map(|&(n, s, c, g)| json!({"N": n, "spectral_entropy": s, "closed_form": c, "gap": g}))
                .collect();
            return writeln!(
                w,
                "{}",
                serde_json::to_string(&doc).map_err(io::Error::other)?
            );
        }
        writeln!(w, "N,spectral_entropy,closed_form,gap")?;
        for &(n, s, c, g) in &rows {
            writeln!(w, "{n},{},{},{}", sig17(s), sig17(c), sig17(g))?;
        }
        Ok(())
    })
}

pub fn cmd_minimize(a: &MinimizeArgs, stdout: &mut dyn Write) -> CliResult {
    require_dim(a.n)?;
    let res = entropy_minimizer(a.n, a.resolution)?;
    with_sink(&a.out, stdout, |w| {
        writeln!(
            w,
            "{}",
            serde_json::to_string(&res).map_err(io::Error::other)?
        )
    })
}
