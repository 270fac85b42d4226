use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use apsim::engine::{compare_antennas, run, variant_from_label, EngineError};
use apsim::report::{emit_comparison_summary, emit_csv, emit_summary, emit_trace};
use apsim::scenario::{parse_scenario, validate, ScenarioConfig, ScenarioError};

/// Environment variable that overrides the output directory.
const OUT_DIR_ENV: &str = "APSIM_OUT_DIR";

#[derive(Parser)]
#[command(name = "apsim", about = "Roadside broadcast link simulator with steerable antennas and a mobile jammer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a scenario file without running it.
    Validate { scenario: PathBuf },
    /// Run a scenario and write per-receiver CSV files and a summary.
    Run {
        scenario: PathBuf,
        /// Error-allocation seed; defaults to the scenario's `seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default `out`, or $APSIM_OUT_DIR).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the per-stage reception trace.
        #[arg(long)]
        trace: bool,
    },
    /// Run a scenario once per antenna pattern on the compared receiver.
    Compare {
        scenario: PathBuf,
        /// Comma-separated list drawn from iso, dir, cone.
        #[arg(long, value_delimiter = ',', default_value = "iso,dir,cone")]
        antennas: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the version.
    Version,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(PathBuf, io::Error),
    Scenario(ScenarioError),
    Invalid(String),
    Engine(EngineError),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(..) => "io",
            CliError::Scenario(_) => "parse",
            CliError::Invalid(_) => "invalid",
            CliError::Engine(_) => "engine",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) => m.clone(),
            CliError::Io(path, e) => format!("{}: {e}", path.display()),
            CliError::Scenario(e) => e.to_string(),
            CliError::Engine(e) => e.to_string(),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Engine(e)
    }
}

fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    let config = parse_scenario(&text).map_err(CliError::Scenario)?;
    let violations = validate(&config);
    if let Some(first) = violations.first() {
        return Err(CliError::Invalid(first.to_string()));
    }
    Ok(config)
}

fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("out"))
}

fn create(path: PathBuf) -> Result<(BufWriter<File>, PathBuf), CliError> {
    match File::create(&path) {
        Ok(f) => Ok((BufWriter::new(f), path)),
        Err(e) => Err(CliError::Io(path, e)),
    }
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn execute(command: Command) -> Result<(), CliError> {
    let stdout = io::stdout();
    match command {
        Command::Version => {
            println!("apsim {}", env!("CARGO_PKG_VERSION"));
        }
        Command::Validate { scenario } => {
            let config = load(&scenario)?;
            println!("{}: ok ({} nodes, {} channels)", scenario.display(), config.nodes.len(), config.channels.len());
        }
        Command::Run { scenario, seed, out, trace } => {
            let config = load(&scenario)?;
            let stats = run(&config, seed.unwrap_or(config.seed))?;
            let dir = out_dir(out);
            fs::create_dir_all(&dir).map_err(|e| CliError::Io(dir.clone(), e))?;
            for rx in &stats.receivers {
                let (mut w, path) = create(dir.join(format!("{}_{}.csv", config.name, rx.node_id)))?;
                emit_csv(rx, &mut w).map_err(|e| CliError::Io(path.clone(), e))?;
                finish(w, &path)?;
                println!("wrote {}", path.display());
            }
            if trace || config.stats.trace {
                let (mut w, path) = create(dir.join(format!("{}_trace.csv", config.name)))?;
                emit_trace(&stats, &mut w).map_err(|e| CliError::Io(path.clone(), e))?;
                finish(w, &path)?;
                println!("wrote {}", path.display());
            }
            let (mut w, path) = create(dir.join(format!("{}_summary.txt", config.name)))?;
            emit_summary(&stats, &mut w).map_err(|e| CliError::Io(path.clone(), e))?;
            finish(w, &path)?;
            emit_summary(&stats, stdout.lock()).map_err(|e| CliError::Io("<stdout>".into(), e))?;
        }
        Command::Compare { scenario, antennas, seed, out } => {
            let config = load(&scenario)?;
            let variants = antennas
                .iter()
                .map(|label| variant_from_label(&config, label))
                .collect::<Result<Vec<_>, _>>()?;
            if variants.is_empty() {
                return Err(CliError::Usage("--antennas needs at least one variant".into()));
            }
            let cmp = compare_antennas(&config, &variants, seed.unwrap_or(config.seed))?;
            let dir = out_dir(out);
            fs::create_dir_all(&dir).map_err(|e| CliError::Io(dir.clone(), e))?;
            for v in &cmp.variants {
                if let Some(rx) = v.series.receiver(&cmp.node) {
                    let (mut w, path) = create(dir.join(format!("{}_{}_{}.csv", config.name, v.label, rx.node_id)))?;
                    emit_csv(rx, &mut w).map_err(|e| CliError::Io(path.clone(), e))?;
                    finish(w, &path)?;
                }
            }
            let (mut w, path) = create(dir.join(format!("{}_compare.txt", config.name)))?;
            emit_comparison_summary(&cmp, &mut w).map_err(|e| CliError::Io(path.clone(), e))?;
            finish(w, &path)?;
            emit_comparison_summary(&cmp, stdout.lock()).map_err(|e| CliError::Io("<stdout>".into(), e))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ");
            eprintln!("apsim: error[usage]: {first}");
            return ExitCode::from(2);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = e.message().replace('\n', " ");
            eprintln!("apsim: error[{}]: {message}", e.kind());
            ExitCode::FAILURE
        }
    }
}
