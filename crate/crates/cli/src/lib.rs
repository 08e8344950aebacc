//! Command-line driver: parses flags, runs one command, writes its outputs
//! and optionally records the run in the content-addressed store.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
pub mod config;
pub mod store;

use store::{sha256_hex, Artifact, Inputs, Manifest, Store};

#[derive(Debug, Parser)]
#[command(name = "chaindyn", version, about = "Chain dynamics on finite approximations of dynamical systems")]
pub struct Cli {
    /// Write outputs into this directory instead of printing the first one.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record the run in the store (`$CHAINDYN_STORE`).
    #[arg(long, global = true)]
    pub store: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphEmit {
    Json,
    Dot,
}

#[derive(Clone, Debug, Args)]
pub struct Grid {
    #[arg(long)]
    pub system: PathBuf,
    /// Number of boxes; word depth for subshifts.
    #[arg(long)]
    pub boxes: Option<usize>,
    /// Chain tolerance `p/q`; defaults to one box width.
    #[arg(long)]
    pub delta: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the δ-chain graph of a system.
    Discretize {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, value_enum, default_value = "json")]
        emit: GraphEmit,
    },
    /// Chain-recurrent components, periods and cyclic classes.
    Decompose {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, value_enum, default_value = "json")]
        emit: GraphEmit,
    },
    /// Whether two points are chain related across a resolution schedule.
    Relate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Comma-separated `δ` or `boxes:δ` entries, coarse to fine.
        #[arg(long)]
        schedule: String,
        /// Box count for entries that give only `δ`.
        #[arg(long)]
        boxes: Option<usize>,
    },
    /// Search for two equal-length, pointwise separated cycles.
    Pstar {
        #[command(flatten)]
        grid: Grid,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        r: String,
    },
    /// Block schedules, ξ orbits, statistics, certificates, factor maps.
    Dc1 {
        #[command(subcommand)]
        command: Dc1Command,
    },
    /// Running tracking averages of a pseudo-orbit, as CSV.
    Track {
        #[arg(long)]
        system: PathBuf,
        /// JSON lines, one point per line.
        #[arg(long)]
        po: PathBuf,
        #[arg(long)]
        horizon: usize,
        /// Tracking point; subshifts default to the read-off shadow.
        #[arg(long)]
        y: Option<String>,
    },
    /// Proximal / distal / Li–Yorke evidence for a pair.
    Classify {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        horizon: usize,
        #[arg(long, default_value = "1/256")]
        low: String,
        #[arg(long, default_value = "1/4")]
        high: String,
        /// Also extract a recurrent pair with a property* witness.
        #[arg(long)]
        extract: bool,
        /// Resolution `boxes:δ` for the extraction witness (box systems).
        #[arg(long)]
        grid: Option<String>,
        /// Also relate a recurrent pair across this schedule.
        #[arg(long)]
        relate: Option<String>,
    },
    /// Run-length profile of a 0/1 file.
    Thick {
        #[arg(long)]
        bits: PathBuf,
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Re-execute a stored run and compare its outputs.
    Replay { hash: String },
}

#[derive(Clone, Debug, Args)]
pub struct Dc1Args {
    #[arg(long)]
    pub system: PathBuf,
    /// Defaults to the constant sequence 0 on subshifts.
    #[arg(long)]
    pub z: Option<String>,
    /// Defaults to the constant sequence 1 on subshifts.
    #[arg(long)]
    pub w: Option<String>,
    #[arg(long)]
    pub r: String,
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Per-level `boxes:δ` list for box systems.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Dc1Command {
    Gather(#[command(flatten)] Dc1Args),
    Schedule(#[command(flatten)] Dc1Args),
    BuildXi {
        #[command(flatten)]
        dc1: Dc1Args,
        #[arg(long)]
        u: String,
    },
    Stats {
        #[command(flatten)]
        dc1: Dc1Args,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        /// Comma-separated δ grid; default `2^-1, …, 2^-10`.
        #[arg(long)]
        deltas: Option<String>,
        /// Also emit a gnuplot script for the profiles.
        #[arg(long)]
        plot: bool,
    },
    Certify {
        #[command(flatten)]
        dc1: Dc1Args,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        deltas: Option<String>,
    },
    Factor {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        epsilon: String,
        /// Binary word to push through the factor map.
        #[arg(long)]
        s: Option<String>,
        /// Also certify a nearby DC1-evidence pair with this many levels.
        #[arg(long)]
        near: Option<usize>,
    },
}

/// What a command produced.
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub summary: Vec<(String, String)>,
}

const RESOLUTION_FLAGS: [&str; 4] = ["--boxes", "--delta", "--schedule", "--grid"];

/// Arguments that determine the outputs: everything but `--out` and `--store`.
fn recorded_args(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--store" || a.starts_with("--out=") {
            continue;
        }
        if a == "--out" {
            it.next();
            continue;
        }
        out.push(a.clone());
    }
    out
}

fn resolution_of(args: &[String]) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    for w in args.windows(2) {
        if RESOLUTION_FLAGS.contains(&w[0].as_str()) {
            m.insert(w[0].trim_start_matches('-').to_string(), w[1].clone());
        }
    }
    m
}

fn system_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Discretize { grid, .. } | Command::Decompose { grid, .. } | Command::Pstar { grid, .. } => {
            Some(&grid.system)
        }
        Command::Relate { system, .. } | Command::Track { system, .. } | Command::Classify { system, .. } => {
            Some(system)
        }
        Command::Dc1 { command } => Some(match command {
            Dc1Command::Gather(d) | Dc1Command::Schedule(d) => &d.system,
            Dc1Command::BuildXi { dc1, .. } | Dc1Command::Stats { dc1, .. } | Dc1Command::Certify { dc1, .. } => {
                &dc1.system
            }
            Dc1Command::Factor { system, .. } => system,
        }),
        Command::Thick { .. } | Command::Replay { .. } => None,
    }
}

fn write_outputs(cli: &Cli, outcome: &Outcome, out: &mut dyn Write) -> Result<()> {
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for a in &outcome.artifacts {
                std::fs::write(dir.join(&a.name), &a.bytes)?;
            }
        }
        None => {
            if let Some(a) = outcome.artifacts.first() {
                out.write_all(&a.bytes)?;
            }
        }
    }
    Ok(())
}

fn print_summary(rows: &[(String, String)], err: &mut dyn Write) -> Result<()> {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in rows {
        writeln!(err, "{k:<width$}  {v}")?;
    }
    Ok(())
}

fn replay(store: &Store, hash: &str) -> Result<Outcome> {
    let (manifest, stored) = store.load(hash)?;
    let mut argv = vec!["chaindyn".to_string()];
    argv.extend(manifest.args.iter().cloned());
    let cli = Cli::try_parse_from(&argv)?;
    if matches!(cli.command, Command::Replay { .. }) {
        bail!("a stored run cannot itself be a replay");
    }
    let mut inputs = Inputs::replaying(manifest.inputs.clone());
    let fresh = commands::execute(&cli.command, &mut inputs)?;
    let mut differences = Vec::new();
    let by_name: BTreeMap<&str, &Artifact> = fresh.artifacts.iter().map(|a| (a.name.as_str(), a)).collect();
    for a in &stored {
        match by_name.get(a.name.as_str()) {
            None => differences.push(format!("{}: missing on replay", a.name)),
            Some(b) if b.bytes != a.bytes => differences.push(format!("{}: bytes differ", a.name)),
            _ => {}
        }
    }
    for a in &fresh.artifacts {
        if !manifest.outputs.contains_key(&a.name) {
            differences.push(format!("{}: not in the stored run", a.name));
        }
    }
    let report = serde_json::json!({
        "hash": hash,
        "args": manifest.args,
        "identical": differences.is_empty(),
        "differences": differences,
    });
    let mut summary = vec![("replay".to_string(), hash.to_string())];
    summary.push((
        "diff".into(),
        if differences.is_empty() { "empty".into() } else { format!("{} differences", differences.len()) },
    ));
    if !differences.is_empty() {
        bail!("replay of {hash} differs: {}", differences.join("; "));
    }
    Ok(Outcome { artifacts: vec![Artifact::new("replay.json", serde_json::to_string_pretty(&report)? + "\n")], summary })
}

fn run_inner(args: Vec<String>, store: &Store, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let cli = Cli::try_parse_from(&args).map_err(CliUsage)?;
    let start = Instant::now();
    if let Command::Replay { hash } = &cli.command {
        let outcome = replay(store, hash)?;
        write_outputs(&cli, &outcome, out)?;
        return print_summary(&outcome.summary, err);
    }
    let mut inputs = Inputs::default();
    let mut outcome = commands::execute(&cli.command, &mut inputs)?;
    write_outputs(&cli, &outcome, out)?;
    if cli.store {
        let system_hash = system_path(&cli.command)
            .and_then(|p| inputs.files().get(p.to_string_lossy().as_ref()))
            .map(|t| sha256_hex(t.as_bytes()));
        let recorded = recorded_args(&args[1..]);
        let manifest = Manifest {
            tool: "chaindyn".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            resolution: resolution_of(&recorded),
            args: recorded,
            inputs: inputs.files().clone(),
            system_hash,
            outputs: outcome.artifacts.iter().map(|a| (a.name.clone(), sha256_hex(&a.bytes))).collect(),
            wall_clock_ms: start.elapsed().as_millis() as u64,
        };
        let key = store.persist(&manifest, &outcome.artifacts)?;
        outcome.summary.push(("stored".into(), key));
    }
    print_summary(&outcome.summary, err)
}

/// Marks clap failures so they map to exit status 2.
#[derive(Debug)]
struct CliUsage(clap::Error);

impl std::fmt::Display for CliUsage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for CliUsage {}

/// Runs one command line. Returns the exit status: 0 on success (including
/// inconclusive results), 1 on validation failures, 2 on usage errors.
pub fn run<I, T>(args: I, store: &Store, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = args.into_iter().map(|a| a.into().to_string_lossy().into_owned()).collect();
    match run_inner(args, store, out, err) {
        Ok(()) => 0,
        Err(e) => match e.downcast_ref::<CliUsage>() {
            Some(CliUsage(c)) if !c.use_stderr() => {
                let _ = write!(out, "{c}");
                0
            }
            Some(CliUsage(c)) => {
                let _ = write!(err, "{c}");
                2
            }
            None => {
                let _ = writeln!(err, "error: {e:#}");
                1
            }
        },
    }
}
