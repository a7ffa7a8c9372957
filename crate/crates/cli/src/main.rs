use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pcarleson_cli::output::{parse_golden, golden_mismatches};
use pcarleson_cli::{execute, golden_path, resolve_seed, CliError, Command, Config, RunContext};

#[derive(Parser)]
#[command(version, about = "Numerical experiments for maximal modulations of the parabolic Hilbert transform")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Config file (flat key = value with [sections]); defaults are used when absent
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides `seed` in the config
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Compare table checksums against the stored goldens
    #[arg(long)]
    golden: bool,
    /// Directory holding `<command>.sha256` golden files
    #[arg(long)]
    golden_dir: Option<PathBuf>,
    /// Write the current checksums as the new goldens
    #[arg(long, hide = true)]
    bless: bool,
    /// Relative perturbation of K2 in the verify split check (negative control)
    #[arg(long, hide = true, default_value_t = 0.0)]
    perturb_k2: f64,
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let text = match &cli.config {
        Some(p) => fs::read_to_string(p)?,
        None => String::new(),
    };
    let config = Config::parse(&text)?;
    let seed = resolve_seed(&config, cli.seed)?;
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::InvalidConfig(format!("thread pool: {e}")))?;
    }
    let threads = rayon::current_num_threads();
    let ctx = RunContext { seed, perturb_k2: cli.perturb_k2 };
    let w = execute(cli.command, &config, &ctx, threads, &cli.out)?;
    println!("{}", serde_json::to_string_pretty(&w.output.summary)?);
    let mut ok = w.output.passed;

    let dir = cli.golden_dir.clone().unwrap_or_else(pcarleson_cli::default_golden_dir);
    let path = golden_path(&dir, cli.command);
    if cli.bless {
        fs::create_dir_all(&dir)?;
        let body: String = w.manifest.checksums.iter().filter(|(k, _)| k.ends_with(".csv")).map(|(k, v)| format!("{k} = {v}\n")).collect();
        fs::write(&path, body)?;
        log::info!("wrote {}", path.display());
    }
    if cli.golden {
        let golden = parse_golden(&fs::read_to_string(&path)?);
        let bad = golden_mismatches(&w.manifest.checksums, &golden);
        if golden.is_empty() || !bad.is_empty() {
            eprintln!("golden mismatch: {}", if bad.is_empty() { "no golden entries".to_string() } else { bad.join(", ") });
            ok = false;
        } else {
            eprintln!("golden checksums match");
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
