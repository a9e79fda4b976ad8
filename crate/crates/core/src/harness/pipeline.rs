//! File-level plumbing shared by the CLI commands.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use super::dataset::summarize_dataset;
use super::evaluate::{evaluate_continuous, evaluate_discrete, run_open_vocab};
use super::records::{load_manifest, load_predictions, PredictionRecord, SampleRecord};
use super::report::{EvaluationReport, OpenVocabSummary, Provenance, TOOL_VERSION};
use crate::clustering::{kmeans_seeded, ClusterModel};
use crate::config::Settings;
use crate::error::{Error, Result};
use crate::lexicon::{build_space, parse_lexicon, parse_subset};
use crate::similarity::{load_embeddings, EmbeddingTable};
use crate::space::EmotionSpace;

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

/// Parses the lexicon and optional subset named in `settings` and builds the space.
pub fn load_space(lexicon: &Path, settings: &Settings) -> Result<EmotionSpace> {
    let entries = parse_lexicon(open(lexicon)?, settings.scale)?;
    let subset = settings
        .subset
        .as_deref()
        .map(|p| parse_subset(open(p)?))
        .transpose()?;
    build_space(&entries, &settings.lexicon_config(subset))
}

pub fn read_manifest(path: &Path) -> Result<Vec<SampleRecord>> {
    load_manifest(open(path)?)
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRecord>> {
    load_predictions(open(path)?)
}

pub fn read_embeddings(path: &Path) -> Result<EmbeddingTable> {
    load_embeddings(open(path)?)
}

/// Loads a saved model, checking it was fitted on the same term set.
pub fn read_model(path: &Path, space: &EmotionSpace) -> Result<ClusterModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let model = ClusterModel::from_json(&text)?;
    if model.subset_hash != space.term_hash() {
        return Err(Error::InvalidModel(format!(
            "{} was fitted on a different term set",
            path.display()
        )));
    }
    Ok(model)
}

pub fn fit_or_load(space: &EmotionSpace, settings: &Settings, model: Option<&Path>) -> Result<ClusterModel> {
    match model {
        Some(path) => read_model(path, space),
        None => kmeans_seeded(space, &settings.clustering),
    }
}

pub fn provenance(settings: &Settings, space: &EmotionSpace, model: &ClusterModel) -> Provenance {
    Provenance {
        tool_version: TOOL_VERSION.to_string(),
        config_hash: settings.hash(),
        subset_hash: space.term_hash(),
        model_params: model.params,
        radius: settings.radius,
    }
}

/// Runs continuous, discrete and open-vocabulary evaluation into one report.
pub fn evaluate(
    space: &EmotionSpace,
    model: &ClusterModel,
    settings: &Settings,
    manifest: &[SampleRecord],
    predictions: &[PredictionRecord],
    embeddings: Option<&EmbeddingTable>,
) -> Result<EvaluationReport> {
    let continuous = evaluate_continuous(manifest, predictions, space)?;
    let discrete = evaluate_discrete(manifest, predictions, model)?;
    let ov = run_open_vocab(
        Some(manifest),
        predictions,
        space,
        settings.radius,
        &settings.exclude,
        embeddings,
    )?;
    Ok(EvaluationReport {
        provenance: provenance(settings, space, model),
        dataset_summary: summarize_dataset(manifest),
        joined_predictions: continuous.n_samples,
        clamped_predictions: predictions.iter().filter(|p| p.clamped).count(),
        continuous,
        discrete,
        open_vocab: Some(OpenVocabSummary {
            radius: ov.radius,
            samples: ov.samples.len(),
            fallback_count: ov.fallback_count,
            mean_terms: ov.mean_terms,
            scored_samples: ov.scored_samples,
            unscorable_samples: ov.unscorable_samples,
            similarity: ov.mean_similarity,
        }),
    })
}
