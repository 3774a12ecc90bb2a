//! Command-line front end: `cluster`, `experiments`, `compare` and
//! `export-formats`.

pub mod config;
pub mod ingest;
pub mod pipeline;

use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use wardhc::analysis::{compare_heights, topology_equal, HeightMap};
use wardhc::engine::Algorithm;
use wardhc::experiments::run_experiments;
use wardhc::export::{from_json, Format};
use wardhc::{LinkageMethod, Scale};

use config::{InputKind, RunConfig, Source};

#[derive(Debug, Parser)]
#[command(name = "wardhc", version, about = "Ward hierarchical clustering (ward.D and ward.D2)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster a data matrix or dissimilarity file and export the dendrogram.
    Cluster(ClusterArgs),
    /// Check the ward.D / ward.D2 identities on seeded random data.
    Experiments(ExperimentArgs),
    /// Compare two dendrograms exported as json.
    Compare(CompareArgs),
    /// List the supported export formats.
    ExportFormats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Data,
    Dissim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Plain,
    Squared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapArg {
    Identity,
    Sqrt,
    Square,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Input file; omit to cluster seeded uniform data of shape --n x --p.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "data")]
    pub kind: KindArg,
    /// Scale of a dissimilarity file.
    #[arg(long, value_enum, default_value = "plain")]
    pub input_scale: ScaleArg,
    #[arg(long, default_value = "ward.D2")]
    pub method: LinkageMethod,
    /// Square the distances before agglomerating.
    #[arg(long)]
    pub square_input: bool,
    /// Report the square roots of the merge heights.
    #[arg(long)]
    pub sqrt_heights: bool,
    /// Run even when the input scale does not suit the method.
    #[arg(long)]
    pub force_scale: bool,
    #[arg(long, default_value = "naive")]
    pub algorithm: Algorithm,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub p: usize,
    /// Output file, or a directory when several formats are requested;
    /// standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// merge-table, newick, json or svg; repeat or comma-separate for several.
    #[arg(long, value_delimiter = ',', default_value = "merge-table")]
    pub format: Vec<Format>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub p: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// text or json.
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Applied to the first tree's heights before comparing.
    #[arg(long, value_enum, default_value = "identity")]
    pub map: MapArg,
    /// Largest accepted relative height deviation.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

impl ClusterArgs {
    pub fn to_config(&self) -> RunConfig {
        RunConfig {
            source: match &self.input {
                Some(path) => Source::File(path.clone()),
                None => Source::Synthetic { n: self.n, p: self.p },
            },
            kind: match self.kind {
                KindArg::Data => InputKind::DataMatrix,
                KindArg::Dissim => InputKind::Dissimilarity,
            },
            input_scale: match self.input_scale {
                ScaleArg::Plain => Scale::Plain,
                ScaleArg::Squared => Scale::Squared,
            },
            method: self.method,
            square_input: self.square_input,
            sqrt_heights: self.sqrt_heights,
            force_scale: self.force_scale,
            algorithm: self.algorithm,
            seed: self.seed,
            formats: self.format.clone(),
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cluster(args: &ClusterArgs) -> anyhow::Result<Outcome> {
    let config = args.to_config();
    let run = pipeline::run_cluster(&config)?;
    for warning in &run.metadata.warnings {
        eprintln!("warning: {warning}");
    }
    let mut formats = config.formats.clone();
    formats.dedup();
    match (&args.out, formats.as_slice()) {
        (out, [single]) => emit(out.as_ref(), &pipeline::render(&run, *single))?,
        (Some(dir), many) => {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            for &f in many {
                emit(Some(&dir.join(format!("dendrogram.{}", f.extension()))), &pipeline::render(&run, f))?;
            }
        }
        (None, many) => {
            for &f in many {
                print!("{}", pipeline::render(&run, f));
            }
        }
    }
    Ok(Outcome::Success)
}

fn experiments(args: &ExperimentArgs) -> anyhow::Result<Outcome> {
    let report = run_experiments(args.n, args.p, args.seed)?;
    let text = match args.format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
    };
    emit(args.out.as_ref(), &text)?;
    for failure in report.failures() {
        eprintln!("failed identity: {}", failure.name);
    }
    Ok(if report.passed() { Outcome::Success } else { Outcome::VerificationFailed })
}

fn compare(args: &CompareArgs) -> anyhow::Result<Outcome> {
    let load = |path: &PathBuf| -> anyhow::Result<_> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Ok(from_json(&text).with_context(|| format!("{} is not a dendrogram export", path.display()))?.dendrogram)
    };
    let (a, b) = (load(&args.first)?, load(&args.second)?);
    if a.n() != b.n() {
        println!("leaf counts differ: {} vs {}", a.n(), b.n());
        return Ok(Outcome::VerificationFailed);
    }
    let map = match args.map {
        MapArg::Identity => HeightMap::Identity,
        MapArg::Sqrt => HeightMap::Sqrt,
        MapArg::Square => HeightMap::Square,
    };
    if !topology_equal(&a, &b)? {
        println!("topology: different");
        return Ok(Outcome::VerificationFailed);
    }
    let dev = compare_heights(&a, &b, map)?;
    println!("topology: equal");
    println!("max relative height deviation: {dev:e}");
    Ok(if dev <= args.tol { Outcome::Success } else { Outcome::VerificationFailed })
}

fn export_formats() -> Outcome {
    for f in Format::ALL {
        println!("{:<12} {}", f.name(), f.description());
    }
    Outcome::Success
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Cluster(args) => cluster(args),
        Command::Experiments(args) => experiments(args),
        Command::Compare(args) => compare(args),
        Command::ExportFormats => Ok(export_formats()),
    }
}
