//! Command-line driver: argument parsing, run manifests, exit codes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use psa_audit::counterfactual::DispositionPolicy;
use psa_audit::stats::{GroupRule, DEFAULT_ALPHA};
use psa_audit::EngineConfig;

mod commands;
pub mod output;

use output::{file_digest, Outputs};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const CONFIG_FILES: [&str; 4] = ["catalog.toml", "dmf.toml", "weights.toml", "disposition.toml"];

pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const SCHEMA: u8 = 3;
    pub const PARTIAL: u8 = 4;
    pub const EMPTY: u8 = 5;
    pub const REPLAY_MISMATCH: u8 = 6;
}

#[derive(Debug, Parser)]
#[command(name = "psa-audit", version, about = "Pre-trial risk scoring and booking-vs-conviction audit")]
pub struct Cli {
    /// Print the input and output file schemas and exit.
    #[arg(long)]
    pub schema: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct Common {
    /// Directory holding catalog.toml, dmf.toml, weights.toml and
    /// disposition.toml; missing files fall back to the built-in defaults.
    #[arg(long)]
    pub config_dir: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Score every assessment row from its recorded sub-scores and booking charges.
    Score {
        #[arg(long)]
        psa: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Filter incomplete rows and remove duplicate assessments.
    Dedupe {
        #[arg(long)]
        psa: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Link assessments to court cases.
    Link {
        #[arg(long)]
        psa: PathBuf,
        #[arg(long)]
        court: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Full pipeline: link, score under booking and conviction charges, compare.
    Audit {
        #[arg(long)]
        psa: PathBuf,
        #[arg(long)]
        court: PathBuf,
        /// Add a table set without records closed by a plea on another case.
        #[arg(long)]
        sensitivity: bool,
        /// Group rule: any-b or linked.
        #[arg(long, default_value_t = GroupRule::AnyB)]
        #[serde(with = "group_rule")]
        group_by: GroupRule,
        /// Family-wise significance level, split over the four components.
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduce the recorded components and report agreement.
    Validate {
        #[arg(long)]
        psa: PathBuf,
        /// Take booking charges from linked court cases instead of the form.
        #[arg(long)]
        court: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Race-label consistency across a person's court cases.
    Consistency {
        #[arg(long)]
        court: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Generate a synthetic dataset with ground truth.
    Simulate {
        /// Generator settings (TOML); defaults apply to missing keys.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Assessment rows to write.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Re-run the command recorded in a manifest and compare output hashes.
    Replay {
        #[arg(long)]
        manifest: PathBuf,
        /// Where to write the re-run; defaults to the recorded directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

mod group_rule {
    use psa_audit::stats::GroupRule;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &GroupRule, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GroupRule, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Score { .. } => "score",
            Command::Dedupe { .. } => "dedupe",
            Command::Link { .. } => "link",
            Command::Audit { .. } => "audit",
            Command::Validate { .. } => "validate",
            Command::Consistency { .. } => "consistency",
            Command::Simulate { .. } => "simulate",
            Command::Replay { .. } => "replay",
        }
    }

    fn common(&self) -> Option<&Common> {
        match self {
            Command::Score { common, .. }
            | Command::Dedupe { common, .. }
            | Command::Link { common, .. }
            | Command::Audit { common, .. }
            | Command::Validate { common, .. }
            | Command::Consistency { common, .. }
            | Command::Simulate { common, .. } => Some(common),
            Command::Replay { .. } => None,
        }
    }

    fn common_mut(&mut self) -> Option<&mut Common> {
        match self {
            Command::Score { common, .. }
            | Command::Dedupe { common, .. }
            | Command::Link { common, .. }
            | Command::Audit { common, .. }
            | Command::Validate { common, .. }
            | Command::Consistency { common, .. }
            | Command::Simulate { common, .. } => Some(common),
            Command::Replay { .. } => None,
        }
    }

    /// Input files the command reads, not counting configuration.
    fn inputs(&self) -> Vec<&Path> {
        match self {
            Command::Score { psa, .. } | Command::Dedupe { psa, .. } => vec![psa],
            Command::Link { psa, court, .. } | Command::Audit { psa, court, .. } => vec![psa, court],
            Command::Validate { psa, court, .. } => {
                let mut v = vec![psa.as_path()];
                v.extend(court.as_deref());
                v
            }
            Command::Consistency { court, .. } => vec![court],
            Command::Simulate { config, .. } => config.iter().map(PathBuf::as_path).collect(),
            Command::Replay { manifest, .. } => vec![manifest],
        }
    }

    /// Makes every path absolute so the command can be re-run from anywhere.
    fn canonicalize(&mut self) -> Result<(), CliError> {
        fn abs(p: &mut PathBuf) -> Result<(), CliError> {
            *p = fs::canonicalize(&*p).map_err(|e| CliError::io(p, e))?;
            Ok(())
        }
        match self {
            Command::Score { psa, .. } | Command::Dedupe { psa, .. } => abs(psa)?,
            Command::Link { psa, court, .. } | Command::Audit { psa, court, .. } => {
                abs(psa)?;
                abs(court)?;
            }
            Command::Validate { psa, court, .. } => {
                abs(psa)?;
                if let Some(c) = court {
                    abs(c)?;
                }
            }
            Command::Consistency { court, .. } => abs(court)?,
            Command::Simulate { config, .. } => {
                if let Some(c) = config {
                    abs(c)?;
                }
            }
            Command::Replay { manifest, .. } => abs(manifest)?,
        }
        if let Some(common) = self.common_mut() {
            if let Some(dir) = &mut common.config_dir {
                abs(dir)?;
            }
            fs::create_dir_all(&common.out).map_err(|e| CliError::io(&common.out, e))?;
            abs(&mut common.out)?;
        }
        Ok(())
    }
}

/// Everything needed to repeat a run: the command with absolute paths, and
/// hashes of what it read and wrote. Holds no timestamps.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub tool_version: String,
    pub subcommand: String,
    pub command: Command,
    pub seed: Option<u64>,
    pub output_dir: PathBuf,
    /// Input path to SHA-256.
    pub inputs: BTreeMap<String, String>,
    /// Config file name to SHA-256, or "default" when the built-in is used.
    pub configs: BTreeMap<String, String>,
    /// Output file name to SHA-256; the manifest itself is not listed.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<RunManifest, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Manifest(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] psa_audit::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{name}: {source}")]
    Csv {
        name: String,
        #[source]
        source: csv::Error,
    },
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("{0}")]
    Usage(String),
    #[error("replayed outputs differ from the manifest: {0}")]
    ReplayMismatch(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn csv(name: &str, source: csv::Error) -> CliError {
        CliError::Csv {
            name: name.to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(psa_audit::Error::Schema { .. } | psa_audit::Error::Csv { .. }) => exit::SCHEMA,
            CliError::Usage(_) => exit::USAGE,
            CliError::ReplayMismatch(_) => exit::REPLAY_MISMATCH,
            _ => exit::FAILURE,
        }
    }
}

/// How a command that produced its outputs went.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Some rows failed and were reported; the rest were processed.
    Partial,
    /// Nothing to report on.
    Empty,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => exit::OK,
            Status::Partial => exit::PARTIAL,
            Status::Empty => exit::EMPTY,
        }
    }
}

/// Engine and disposition settings for one run.
pub struct Settings {
    pub engine: EngineConfig,
    pub policy: DispositionPolicy,
    pub hashes: BTreeMap<String, String>,
}

impl Settings {
    pub fn load(dir: Option<&Path>) -> Result<Settings, CliError> {
        let engine = match dir {
            Some(d) => EngineConfig::from_dir(d)?,
            None => EngineConfig::shipped(),
        };
        let mut policy = DispositionPolicy::default();
        let mut hashes = BTreeMap::new();
        for name in CONFIG_FILES {
            let path = dir.map(|d| d.join(name)).filter(|p| p.exists());
            let digest = match &path {
                Some(p) => file_digest(p)?,
                None => "default".to_string(),
            };
            if name == "disposition.toml" {
                if let Some(p) = &path {
                    policy = DispositionPolicy::load(p)?;
                }
            }
            hashes.insert(name.to_string(), digest);
        }
        Ok(Settings { engine, policy, hashes })
    }
}

/// Result of one invocation: an exit code and a line for the terminal.
pub struct RunReport {
    pub code: u8,
    pub message: String,
}

/// Parses arguments and runs; never panics on user input.
pub fn main_with_args<I, T>(args: I) -> RunReport
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            return RunReport {
                code,
                message: e.to_string(),
            };
        }
    };
    if cli.schema {
        return RunReport {
            code: exit::OK,
            message: commands::schema_text(),
        };
    }
    let Some(command) = cli.command else {
        return RunReport {
            code: exit::USAGE,
            message: "no subcommand given; see --help".to_string(),
        };
    };
    match run(command) {
        Ok((status, message)) => RunReport {
            code: status.code(),
            message,
        },
        Err(e) => RunReport {
            code: e.exit_code(),
            message: format!("error: {e}"),
        },
    }
}

/// Runs one command, writing its outputs and manifest.
pub fn run(mut command: Command) -> Result<(Status, String), CliError> {
    if let Command::Replay { manifest, out } = command {
        return replay(&manifest, out.as_deref());
    }
    command.canonicalize()?;
    let common = command.common().expect("non-replay commands carry common flags").clone();
    let settings = Settings::load(common.config_dir.as_deref())?;
    let mut inputs = BTreeMap::new();
    for p in command.inputs() {
        inputs.insert(p.display().to_string(), file_digest(p)?);
    }
    let mut outputs = Outputs::create(&common.out)?;
    let (status, message, seed) = commands::execute(&command, &settings, &mut outputs)?;
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        subcommand: command.name().to_string(),
        command: command.clone(),
        seed,
        output_dir: common.out.clone(),
        inputs,
        configs: settings.hashes,
        outputs: outputs.written.clone(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Manifest(e.to_string()))?;
    let path = common.out.join(MANIFEST_FILE);
    fs::write(&path, json + "\n").map_err(|e| CliError::io(&path, e))?;
    Ok((status, message))
}

fn replay(manifest_path: &Path, out: Option<&Path>) -> Result<(Status, String), CliError> {
    let recorded = RunManifest::load(manifest_path)?;
    for (path, digest) in &recorded.inputs {
        let now = file_digest(Path::new(path))?;
        if &now != digest {
            return Err(CliError::Manifest(format!("input {path} changed since the recorded run")));
        }
    }
    let mut command = recorded.command.clone();
    if let (Some(dir), Some(common)) = (out, command.common_mut()) {
        common.out = dir.to_path_buf();
    }
    let out_dir = command.common().map(|c| c.out.clone()).unwrap_or_default();
    let (status, _) = run(command)?;
    let rerun = RunManifest::load(&fs::canonicalize(&out_dir).map_err(|e| CliError::io(&out_dir, e))?.join(MANIFEST_FILE))?;
    if rerun.configs != recorded.configs {
        return Err(CliError::ReplayMismatch("configuration files changed".to_string()));
    }
    let differing: Vec<&str> = recorded
        .outputs
        .keys()
        .chain(rerun.outputs.keys())
        .filter(|k| recorded.outputs.get(*k) != rerun.outputs.get(*k))
        .map(String::as_str)
        .collect();
    if !differing.is_empty() {
        return Err(CliError::ReplayMismatch(differing.join(", ")));
    }
    Ok((
        status,
        format!("replayed {}: {} outputs identical", recorded.subcommand, rerun.outputs.len()),
    ))
}
