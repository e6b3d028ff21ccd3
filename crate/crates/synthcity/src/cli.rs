//! Subcommands and their wiring. Generation parameters come from config
//! files; flags pick files, override seeds and size the worker pool.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use rayon::prelude::*;
use serde::Serialize;
use synthcity_core::dataset::{mixed_batch_stream, subsample, training_schedule, BatchStream, DatasetManifest, Model};
use synthcity_core::eval::{dataset_stats, render_table, stratified_report, Aggregation, DatasetStats};

use crate::config::{self, GenerateConfig, PoolConfig};
use crate::error::CliError;
use crate::export::{out_dir_or, run_generate, write_json};
use crate::{evaldir, imageio, manifest_io, pool};

pub const LOG_ENV: &str = "SYNTHCITY_LOG";

#[derive(Debug, Parser)]
#[command(name = "synthcity", version, about = "Synthetic overhead imagery with building masks")]
pub struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one world from a config and export its tiles.
    Generate(GenerateArgs),
    /// Export an equal number of tiles for each of several styles.
    Pool(PoolArgs),
    /// Keep a seeded random fraction of a manifest.
    Subsample(SubsampleArgs),
    /// Write a mixed real/synthetic batch plan and optionally a training schedule.
    Batchplan(BatchplanArgs),
    /// Score predicted masks against ground truth.
    Eval(EvalArgs),
    /// Tile count, covered area and building fraction of a dataset.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Replaces the world seed of the config.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PoolArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Replaces the base seed of the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated style ids replacing the configured list.
    #[arg(long, value_delimiter = ',')]
    pub styles: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct SubsampleArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output manifest; its record paths are rewritten relative to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Unet,
    Deeplabv3,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Unet => Model::Unet,
            ModelArg::Deeplabv3 => Model::Deeplabv3,
        }
    }
}

#[derive(Debug, Args)]
pub struct BatchplanArgs {
    /// Real ids: a manifest or a text file with one id per line.
    #[arg(long)]
    pub real: PathBuf,
    /// Synthetic ids, same formats as `--real`.
    #[arg(long)]
    pub synth: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub batches: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 7)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 6)]
    pub real_per_batch: usize,
    #[arg(long, default_value_t = 1)]
    pub synth_per_batch: usize,
    /// Plan file, one JSON batch per line.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the training schedule for this model.
    #[arg(long)]
    pub model: Option<ModelArg>,
    /// Schedule path; defaults to `schedule.json` beside the plan.
    #[arg(long, requires = "model")]
    pub schedule: Option<PathBuf>,
    /// Schedule for real data only (no fine-tune stage).
    #[arg(long, requires = "model")]
    pub real_only: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub gt: PathBuf,
    /// Average IoU over tiles instead of pooling pixel counts.
    #[arg(long)]
    pub per_tile: bool,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// JSON output path; printed to stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(summary) => {
            if !summary.is_empty() {
                print!("{summary}");
            }
            0
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

fn worker_pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    if workers == Some(0) {
        return Err(CliError::Usage("--workers must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Operation(format!("thread pool: {e}")))
}

/// Executes a parsed command; the returned text goes to stdout.
pub fn execute(cli: Cli) -> Result<String, CliError> {
    let workers = worker_pool(cli.workers)?;
    match cli.command {
        Command::Generate(a) => generate(a, &workers),
        Command::Pool(a) => make_pool(a, &workers),
        Command::Subsample(a) => subsample_cmd(a),
        Command::Batchplan(a) => batchplan(a),
        Command::Eval(a) => eval(a, &workers),
        Command::Stats(a) => stats(a, &workers),
    }
}

fn config_dir(path: &Path) -> &Path {
    manifest_io::base_dir(path)
}

fn generate(a: GenerateArgs, workers: &rayon::ThreadPool) -> Result<String, CliError> {
    let mut cfg: GenerateConfig = config::load(&a.config)?;
    if let Some(s) = a.seed {
        cfg.world.seed = s;
    }
    let base = config_dir(&a.config);
    let plan = cfg.resolve(base)?;
    let out = out_dir_or(a.out, plan.out_dir.clone(), base)?;
    let report = run_generate(&plan, &out, workers)?;
    Ok(format!(
        "{} tiles ({:.3} km²) in {}; {:.3} km² world in {:.1}s ({:.2} km²/min)\n",
        report.tiles,
        report.tile_area_km2,
        out.display(),
        report.world_km2,
        report.total_s,
        report.km2_per_minute
    ))
}

fn make_pool(a: PoolArgs, workers: &rayon::ThreadPool) -> Result<String, CliError> {
    let mut cfg: PoolConfig = config::load(&a.config)?;
    if let Some(s) = a.seed {
        cfg.base_seed = s;
    }
    if let Some(styles) = a.styles {
        cfg.styles = styles;
    }
    let base = config_dir(&a.config);
    let plan = cfg.resolve(base)?;
    let out = out_dir_or(a.out, plan.out_dir.clone(), base)?;
    let m = pool::make_style_pool(&plan, &out, workers)?;
    let mut s = format!("{} tiles in {}\n", m.len(), out.display());
    for (style, n) in m.style_counts() {
        let _ = writeln!(s, "  {style}: {n}");
    }
    Ok(s)
}

/// Rewrites record paths of a manifest in `from` so they resolve from `to`.
fn rebase(m: &mut DatasetManifest, from: &Path, to: &Path) {
    if same_dir(from, to) {
        return;
    }
    for r in &mut m.records {
        for p in [&mut r.rgb, &mut r.mask] {
            *p = relative_to(&from.join(&*p), to).to_string_lossy().into_owned();
        }
    }
}

fn same_dir(a: &Path, b: &Path) -> bool {
    absolute(a) == absolute(b)
}

fn absolute(p: &Path) -> PathBuf {
    let p = if p.as_os_str().is_empty() { Path::new(".") } else { p };
    std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf())
}

fn relative_to(target: &Path, dir: &Path) -> PathBuf {
    let (t, d) = (absolute(target), absolute(dir));
    let common = t.components().zip(d.components()).take_while(|(x, y)| x == y).count();
    let mut out = PathBuf::new();
    for _ in d.components().skip(common) {
        out.push("..");
    }
    for c in t.components().skip(common) {
        out.push(c);
    }
    out
}

fn subsample_cmd(a: SubsampleArgs) -> Result<String, CliError> {
    let m = manifest_io::read(&a.manifest)?;
    let mut kept = subsample(&m, a.fraction, a.seed)?;
    rebase(&mut kept, manifest_io::base_dir(&a.manifest), manifest_io::base_dir(&a.out));
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    }
    manifest_io::write(&a.out, &kept)?;
    Ok(format!("kept {} of {} records\n", kept.len(), m.len()))
}

/// Tile ids of a manifest, or the non-empty lines of a text file.
pub fn read_ids(path: &Path) -> Result<Vec<String>, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    if serde_json::from_str::<synthcity_core::dataset::ManifestHeader>(first).is_ok() {
        let m = manifest_io::from_jsonl(&text).map_err(|e| CliError::format(path, e))?;
        return Ok(m.records.into_iter().map(|r| r.tile_id).collect());
    }
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect())
}

#[derive(Serialize)]
struct PlanLine<'a> {
    batch: u64,
    real: &'a [String],
    synth: &'a [String],
}

fn batchplan(a: BatchplanArgs) -> Result<String, CliError> {
    let real = read_ids(&a.real)?;
    let synth = read_ids(&a.synth)?;
    let spec = BatchStream {
        batch_size: a.batch_size,
        real_per_batch: a.real_per_batch,
        synth_per_batch: a.synth_per_batch,
        seed: a.seed,
    };
    let stream = mixed_batch_stream(real, synth, spec)?;
    let mut text = String::new();
    for (i, b) in stream.take(a.batches as usize).enumerate() {
        let line = PlanLine { batch: i as u64, real: &b.real, synth: &b.synth };
        let _ = writeln!(text, "{}", serde_json::to_string(&line).expect("plan line serializes"));
    }
    fs::write(&a.out, text).map_err(CliError::io(&a.out))?;
    let mut s = format!("{} batches of {} written to {}\n", a.batches, a.batch_size, a.out.display());
    if let Some(m) = a.model {
        let path = a.schedule.unwrap_or_else(|| manifest_io::base_dir(&a.out).join("schedule.json"));
        write_json(&path, &training_schedule(m.into(), !a.real_only))?;
        let _ = writeln!(s, "schedule written to {}", path.display());
    }
    Ok(s)
}

fn eval(a: EvalArgs, workers: &rayon::ThreadPool) -> Result<String, CliError> {
    let pairs = evaldir::load_pairs(&a.pred, &a.gt, workers)?;
    let report = stratified_report(&pairs)?;
    let agg = if a.per_tile { Aggregation::PerTile } else { Aggregation::Pooled };
    let name = a.pred.file_name().map_or_else(|| "pred".into(), |n| n.to_string_lossy().into_owned());
    if let Some(out) = &a.out {
        write_json(out, &serde_json::json!({ "aggregation": agg, "report": report }))?;
    }
    Ok(render_table(&[(name.as_str(), &report)], agg))
}

fn stats(a: StatsArgs, workers: &rayon::ThreadPool) -> Result<String, CliError> {
    let m = manifest_io::read(&a.manifest)?;
    let base = manifest_io::base_dir(&a.manifest);
    let counts: Vec<_> = workers.install(|| {
        m.records
            .par_iter()
            .map(|r| match imageio::read_mask(&base.join(&r.mask)) {
                Ok(mask) => Some((mask.count_foreground() as u64, mask.pixels().len() as u64)),
                Err(e) => {
                    info!("{e}");
                    None
                }
            })
            .collect()
    });
    let s: DatasetStats = dataset_stats(&m, counts);
    match &a.out {
        Some(out) => {
            write_json(out, &s)?;
            Ok(format!("{} tiles, {:.2} km²\n", s.tiles, s.area_km2))
        }
        None => Ok(serde_json::to_string_pretty(&s).expect("stats serialize") + "\n"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths() {
        assert_eq!(relative_to(Path::new("/d/rgb/x.png"), Path::new("/d/sub")), PathBuf::from("../rgb/x.png"));
        assert_eq!(relative_to(Path::new("/d/rgb/x.png"), Path::new("/d")), PathBuf::from("rgb/x.png"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["synthcity", "frobnicate"]), 2);
        assert_eq!(run(["synthcity", "subsample", "--fraction", "0.5"]), 2);
        assert_eq!(run(["synthcity", "--help"]), 0);
    }
}
