use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use emovad::clustering::{kmeans_seeded, ClusterModel};
use emovad::config::Settings;
use emovad::harness::pipeline::{self, fit_or_load, load_space, read_embeddings, read_manifest, read_predictions};
use emovad::harness::report::{render_summary, to_structured};
use emovad::harness::{
    emit_report, labels_to_vad, parse_report, run_open_vocab, split_manifest, summarize_dataset, transcode_predictions,
    write_manifest, ReportFormat,
};
use emovad::lexicon::NativeScale;
use emovad::space::{EmotionSpace, VadPoint};
use emovad::{BasicEmotion, Error, Result};

#[derive(Parser)]
#[command(name = "emovad", version, about = "Valence-arousal-dominance emotion space toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the polar emotion space from a lexicon
    BuildSpace {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit the seeded six-cluster model
    FitClusters {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Map predicted VAD points to labels, or manifest labels to VAD points
    Transcode {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, required_unless_present = "manifest", conflicts_with = "manifest")]
        predictions: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emotion terms within a radius of each predicted point
    OpenVocab {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        radius: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Smallest radius whose mean neighborhood size reaches the target
    CalibrateRadius {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 5.0)]
        target_mean: f64,
        /// Probe at these predicted points instead of the lexicon points
        #[arg(long)]
        predictions: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stratified train/val/test assignment
    Split {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value = "0.7,0.15,0.15", value_parser = parse_ratios)]
        ratios: [f64; 3],
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score predictions against a manifest
    Evaluate {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        radius: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Per-emotion counts, split sizes and averages of a manifest
    Summarize {
        #[arg(long)]
        manifest: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Re-render a structured evaluation report
    Report {
        /// Structured report produced by `evaluate`
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct SpaceArgs {
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long)]
    subset: Option<PathBuf>,
    #[arg(long, value_enum)]
    scale: Option<Scale>,
    /// TOML settings file
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Structured)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scale {
    Unit,
    Polar,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Structured,
    Table,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Structured => ReportFormat::Structured,
            Format::Table => ReportFormat::Table,
        }
    }
}

fn parse_ratios(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected three comma-separated ratios, got {}", v.len()))
}

impl SpaceArgs {
    fn settings(&self, radius: Option<f64>) -> Result<Settings> {
        let mut settings = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        if let Some(scale) = self.scale {
            settings.scale = match scale {
                Scale::Unit => NativeScale::Unit,
                Scale::Polar => NativeScale::Polar,
            };
        }
        if let Some(subset) = &self.subset {
            settings.subset = Some(subset.clone());
        }
        if let Some(r) = radius {
            settings.radius = r;
        }
        settings.validate()?;
        Ok(settings)
    }

    fn load(&self, radius: Option<f64>) -> Result<(Settings, EmotionSpace)> {
        let settings = self.settings(radius)?;
        let space = load_space(&self.lexicon, &settings)?;
        Ok((settings, space))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn json_lines<T: Serialize>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| serde_json::to_string(i).expect("serializable") + "\n")
        .collect()
}

#[derive(Serialize)]
struct SpaceDocument<'a> {
    terms: usize,
    subset_hash: String,
    seeds: Vec<(BasicEmotion, VadPoint)>,
    entries: &'a [(String, VadPoint)],
}

fn render_clusters(model: &ClusterModel) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{} iterations, wcss {:.6}\n",
        model.iterations_run, model.final_wcss
    ));
    for (i, members) in model.members().iter().enumerate() {
        out.push_str(&format!(
            "{:<10} {}  {} terms: {}\n",
            model.label(i).name(),
            model.centroids[i],
            members.len(),
            members.join(", ")
        ));
    }
    out
}

#[derive(Serialize)]
struct CalibrationDocument {
    probes: &'static str,
    probe_count: usize,
    #[serde(flatten)]
    calibration: emovad::space::RadiusCalibration,
    default_radius: f64,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::BuildSpace { space, output } => {
            let (_, space) = space.load(None)?;
            let text = match output.format {
                Format::Table => space.to_tsv(),
                Format::Structured => to_structured(&SpaceDocument {
                    terms: space.len(),
                    subset_hash: space.term_hash(),
                    seeds: BasicEmotion::ALL.iter().map(|&e| (e, space.seed(e))).collect(),
                    entries: space.entries(),
                }),
            };
            emit(output.out.as_deref(), &text)
        }
        Command::FitClusters { space, output } => {
            let (settings, space) = space.load(None)?;
            let model = kmeans_seeded(&space, &settings.clustering)?;
            let text = match output.format {
                Format::Structured => model.to_json(),
                Format::Table => render_clusters(&model),
            };
            emit(output.out.as_deref(), &text)
        }
        Command::Transcode {
            space,
            model,
            predictions,
            manifest,
            out,
        } => {
            let (settings, space) = space.load(None)?;
            let text = match (predictions, manifest) {
                (Some(p), _) => {
                    let model = fit_or_load(&space, &settings, model.as_deref())?;
                    json_lines(&transcode_predictions(&model, &read_predictions(&p)?))
                }
                (None, Some(m)) => json_lines(&labels_to_vad(&space, &read_manifest(&m)?)?),
                (None, None) => unreachable!("clap requires one input"),
            };
            emit(out.as_deref(), &text)
        }
        Command::OpenVocab {
            space,
            predictions,
            manifest,
            embeddings,
            radius,
            output,
        } => {
            let (settings, space) = space.load(radius)?;
            let predictions = read_predictions(&predictions)?;
            let manifest = manifest.as_deref().map(read_manifest).transpose()?;
            let table = embeddings.as_deref().map(read_embeddings).transpose()?;
            let run = run_open_vocab(
                manifest.as_deref(),
                &predictions,
                &space,
                settings.radius,
                &settings.exclude,
                table.as_ref(),
            )?;
            let text = match output.format {
                Format::Structured => to_structured(&run),
                Format::Table => {
                    let mut s = String::new();
                    for sample in &run.samples {
                        let terms: Vec<String> = sample
                            .result
                            .terms
                            .iter()
                            .map(|n| format!("{} ({:.3})", n.term, n.distance))
                            .collect();
                        let flag = if sample.result.fallback_applied { " [nearest]" } else { "" };
                        s.push_str(&format!("{}{}: {}\n", sample.result.sample_id, flag, terms.join(", ")));
                    }
                    s
                }
            };
            emit(output.out.as_deref(), &text)
        }
        Command::CalibrateRadius {
            space,
            target_mean,
            predictions,
            out,
        } => {
            let (settings, space) = space.load(None)?;
            let (label, probes): (_, Vec<VadPoint>) = match predictions {
                Some(p) => ("predictions", read_predictions(&p)?.iter().map(|r| r.pred_vad).collect()),
                None => ("lexicon", space.entries().iter().map(|(_, p)| *p).collect()),
            };
            let calibration = space.calibrate_radius(&probes, target_mean)?;
            emit(
                out.as_deref(),
                &to_structured(&CalibrationDocument {
                    probes: label,
                    probe_count: probes.len(),
                    calibration,
                    default_radius: settings.radius,
                }),
            )
        }
        Command::Split {
            manifest,
            ratios,
            seed,
            out,
        } => {
            let records = split_manifest(&read_manifest(&manifest)?, ratios, seed)?;
            emit(out.as_deref(), &write_manifest(&records))
        }
        Command::Evaluate {
            space,
            model,
            manifest,
            predictions,
            embeddings,
            radius,
            output,
        } => {
            let (settings, space) = space.load(radius)?;
            let model = fit_or_load(&space, &settings, model.as_deref())?;
            let manifest = read_manifest(&manifest)?;
            let predictions = read_predictions(&predictions)?;
            let table = embeddings.as_deref().map(read_embeddings).transpose()?;
            let report = pipeline::evaluate(&space, &model, &settings, &manifest, &predictions, table.as_ref())?;
            emit(output.out.as_deref(), &emit_report(&report, output.format.into()))
        }
        Command::Summarize { manifest, output } => {
            let summary = summarize_dataset(&read_manifest(&manifest)?);
            let text = match output.format {
                Format::Structured => to_structured(&summary),
                Format::Table => render_summary(&summary),
            };
            emit(output.out.as_deref(), &text)
        }
        Command::Report { input, output } => {
            let text = std::fs::read_to_string(&input).map_err(|e| Error::io(&input, e))?;
            let report = parse_report(&text)?;
            emit(output.out.as_deref(), &emit_report(&report, output.format.into()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
