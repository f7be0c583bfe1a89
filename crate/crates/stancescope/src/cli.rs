//! Command-line driver: `build` turns a labeled dataset into a snapshot
//! file, `serve` exposes snapshot files over HTTP.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stancescope_core::{build_snapshot, BuildError, DatasetId, DEFAULT_MIN_COUNT};
use thiserror::Error;
use tower_http::services::ServeDir;

use crate::api::{router, Catalog};
use crate::config::{ServiceConfig, DEFAULT_LISTEN};
use crate::ingest::{parse_dataset, IngestError, InputFormat};
use crate::wire::export_snapshot;

#[derive(Debug, Parser)]
#[command(
    name = "stancescope",
    version,
    about = "Cumulative stance and topic snapshots for labeled tweet datasets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a snapshot file from a labeled dataset.
    Build(BuildArgs),
    /// Serve snapshot files over a read-only HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DatasetArg {
    Motivating,
    Demotivating,
}

impl From<DatasetArg> for DatasetId {
    fn from(d: DatasetArg) -> Self {
        match d {
            DatasetArg::Motivating => DatasetId::Motivating,
            DatasetArg::Demotivating => DatasetId::Demotivating,
        }
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Labeled dataset file.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Input format; inferred from the extension (.csv, .jsonl, .ndjson) when omitted.
    #[arg(long, short)]
    pub format: Option<InputFormat>,
    /// Motivation class of every record in the input.
    #[arg(long, short)]
    pub dataset: DatasetArg,
    /// Minimum tweets per author.
    #[arg(long, default_value_t = DEFAULT_MIN_COUNT, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub min_count: usize,
    /// Snapshot file to write.
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "STANCESCOPE_LISTEN", default_value = DEFAULT_LISTEN)]
    pub listen: SocketAddr,
    /// Snapshot files; repeat the flag or give a comma-separated list.
    #[arg(
        long = "snapshot",
        env = "STANCESCOPE_SNAPSHOTS",
        value_delimiter = ',',
        required = true
    )]
    pub snapshots: Vec<PathBuf>,
    /// Directory holding the UI bundle.
    #[arg(long, env = "STANCESCOPE_STATIC_DIR")]
    pub static_dir: Option<PathBuf>,
}

impl From<ServeArgs> for ServiceConfig {
    fn from(a: ServeArgs) -> Self {
        ServiceConfig {
            listen: a.listen,
            snapshots: a.snapshots,
            static_dir: a.static_dir,
        }
    }
}

#[derive(Debug, Error)]
pub enum BuildCommandError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot infer input format of {0}; pass --format")]
    UnknownFormat(PathBuf),
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: IngestError },
    #[error("{path}: {source}")]
    Build { path: PathBuf, source: BuildError },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

impl BuildCommandError {
    /// 2 for unreadable or invalid input, 3 when the activity filter leaves
    /// nothing, 4 when the output cannot be written.
    pub fn exit_code(&self) -> i32 {
        match self {
            BuildCommandError::Read { .. }
            | BuildCommandError::UnknownFormat(_)
            | BuildCommandError::Parse { .. } => 2,
            BuildCommandError::Build { source, .. } => match source {
                BuildError::EmptyAfterFilter { .. } => 3,
                BuildError::MixedMotivation { .. } => 2,
            },
            BuildCommandError::Write { .. } => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildSummary {
    pub records: usize,
    pub points: usize,
    pub authors: usize,
    pub months: usize,
}

pub fn run_build(args: &BuildArgs) -> Result<BuildSummary, BuildCommandError> {
    let path = &args.input;
    let format = args
        .format
        .or_else(|| InputFormat::from_path(path))
        .ok_or_else(|| BuildCommandError::UnknownFormat(path.clone()))?;
    let file = File::open(path).map_err(|source| BuildCommandError::Read {
        path: path.clone(),
        source,
    })?;
    let records = parse_dataset(BufReader::new(file), format).map_err(|source| match source {
        IngestError::Io(source) => BuildCommandError::Read {
            path: path.clone(),
            source,
        },
        source => BuildCommandError::Parse {
            path: path.clone(),
            source,
        },
    })?;
    let snapshot = build_snapshot(&records, args.dataset.into(), args.min_count).map_err(|source| {
        BuildCommandError::Build {
            path: path.clone(),
            source,
        }
    })?;

    let write_err = |source| BuildCommandError::Write {
        path: args.output.clone(),
        source,
    };
    let out = File::create(&args.output).map_err(write_err)?;
    let mut out = BufWriter::new(out);
    export_snapshot(&snapshot, &mut out).map_err(write_err)?;
    out.into_inner()
        .map_err(|e| e.into_error())
        .and_then(|f| f.sync_all())
        .map_err(write_err)?;

    Ok(BuildSummary {
        records: records.len(),
        points: snapshot.points.len(),
        authors: snapshot.authors.len(),
        months: snapshot.months.len(),
    })
}

/// Loads the snapshots and serves them until ctrl-c.
pub async fn serve(config: ServiceConfig) -> anyhow::Result<()> {
    config.validate()?;
    let catalog = Arc::new(Catalog::load(&config.snapshots)?);
    let mut app = router(catalog.clone());
    if let Some(dir) = &config.static_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    let listener = tokio::net::TcpListener::bind(config.listen).await?;
    tracing::info!(
        addr = %listener.local_addr()?,
        datasets = catalog.datasets().len(),
        "serving snapshots"
    );
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

pub fn main_with(cli: Cli) -> i32 {
    match cli.command {
        Command::Build(args) => match run_build(&args) {
            Ok(s) => {
                let _ = writeln!(
                    io::stderr(),
                    "wrote {}: {} points from {} authors over {} months ({} input records)",
                    args.output.display(),
                    s.points,
                    s.authors,
                    s.months,
                    s.records
                );
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Command::Serve(args) => {
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(rt) => rt,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 1;
                }
            };
            match runtime.block_on(serve(args.into())) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    1
                }
            }
        }
    }
}
