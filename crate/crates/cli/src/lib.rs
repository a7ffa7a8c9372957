//! Batch experiment runner: subcommands, text configs, CSV/JSON output and run manifests.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub use commands::{cmd_decay, cmd_lemma, cmd_multiplier, cmd_polydeg, cmd_verify};
pub use config::Config;
pub use error::CliError;
pub use output::{RunManifest, RunOutput, Table};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Command {
    Multiplier,
    Decay,
    Lemma,
    Polydeg,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Multiplier => "multiplier",
            Command::Decay => "decay",
            Command::Lemma => "lemma",
            Command::Polydeg => "polydeg",
            Command::Verify => "verify",
        }
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunContext {
    pub seed: u64,
    /// Relative perturbation of K₂ inside the split check; 0 outside negative-control runs.
    pub perturb_k2: f64,
}

impl Default for RunContext {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, perturb_k2: 0.0 }
    }
}

/// Seed from the `run` section unless `override_seed` is given.
pub fn resolve_seed(config: &Config, override_seed: Option<u64>) -> Result<u64, CliError> {
    let run = config.section("run");
    let seed = run.get("seed", DEFAULT_SEED)?;
    run.finish()?;
    Ok(override_seed.unwrap_or(seed))
}

pub fn run_command(cmd: Command, config: &Config, ctx: &RunContext) -> Result<RunOutput, CliError> {
    let known = ["run", cmd.name()];
    if let Some(other) = config.section_names().find(|n| !known.contains(n)) {
        return Err(CliError::InvalidConfig(format!("section [{other}] does not belong to '{}'", cmd.name())));
    }
    match cmd {
        Command::Multiplier => cmd_multiplier(config, ctx),
        Command::Decay => cmd_decay(config, ctx),
        Command::Lemma => cmd_lemma(config, ctx),
        Command::Polydeg => cmd_polydeg(config, ctx),
        Command::Verify => cmd_verify(config, ctx),
    }
}

/// Outcome of a run written to disk.
#[derive(Debug, Clone)]
pub struct Written {
    pub output: RunOutput,
    pub manifest: RunManifest,
    pub files: BTreeMap<String, Vec<u8>>,
}

/// Runs `cmd`, writes its files and manifest into `out_dir`.
pub fn execute(cmd: Command, config: &Config, ctx: &RunContext, threads: usize, out_dir: &Path) -> Result<Written, CliError> {
    let start = Instant::now();
    let output = run_command(cmd, config, ctx)?;
    let files = output::render_files(&output)?;
    let manifest = RunManifest {
        command: cmd.name().into(),
        version: format!("pcarleson {} / cli {}", pcarleson::VERSION, env!("CARGO_PKG_VERSION")),
        seed: ctx.seed,
        threads,
        wall_time_s: start.elapsed().as_secs_f64(),
        config: config.to_string(),
        checksums: output::checksums(&files),
    };
    output::write_run(out_dir, &files, &manifest)?;
    Ok(Written { output, manifest, files })
}

/// Stored checksums for the default configuration of each command.
pub fn default_golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

pub fn golden_path(dir: &Path, cmd: Command) -> PathBuf {
    dir.join(format!("{}.sha256", cmd.name()))
}
