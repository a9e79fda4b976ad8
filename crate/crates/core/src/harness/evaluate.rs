//! Joins predictions to a manifest and runs the metric suite over them.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::records::{PredictionRecord, SampleRecord};
use crate::clustering::ClusterModel;
use crate::emotion::BasicEmotion;
use crate::error::{Error, Result};
use crate::metrics::{continuous_eval, discrete_eval, ContinuousEval, DiscreteEval};
use crate::similarity::{set_similarity, EmbeddingTable, SetSimilarity};
use crate::space::{EmotionSpace, VadPoint};
use crate::transcode::{discrete_to_vad, open_vocab_excluding, vad_to_discrete, OpenVocabResult};

/// Pairs every prediction with its manifest record, sorted by `sample_id`.
/// Any prediction without a manifest record is an error, never a silent drop.
pub fn join<'a>(
    manifest: &'a [SampleRecord],
    predictions: &'a [PredictionRecord],
) -> Result<Vec<(&'a SampleRecord, &'a PredictionRecord)>> {
    let index: HashMap<&str, &SampleRecord> = manifest.iter().map(|r| (r.sample_id.as_str(), r)).collect();
    let mut joined = Vec::with_capacity(predictions.len());
    let mut unmatched = Vec::new();
    for p in predictions {
        match index.get(p.sample_id.as_str()) {
            Some(r) => joined.push((*r, p)),
            None => unmatched.push(p.sample_id.clone()),
        }
    }
    if !unmatched.is_empty() {
        unmatched.sort();
        return Err(Error::UnmatchedSampleId(unmatched));
    }
    if joined.is_empty() {
        return Err(Error::NoJoinedRecords);
    }
    joined.sort_by(|a, b| a.1.sample_id.cmp(&b.1.sample_id));
    Ok(joined)
}

fn truth_label(record: &SampleRecord) -> Result<BasicEmotion> {
    record
        .discrete_label
        .ok_or_else(|| Error::MissingLabels(record.sample_id.clone()))
}

/// Continuous metrics against truth points derived from the discrete labels.
pub fn evaluate_continuous(
    manifest: &[SampleRecord],
    predictions: &[PredictionRecord],
    space: &EmotionSpace,
) -> Result<ContinuousEval> {
    let joined = join(manifest, predictions)?;
    let mut truth = Vec::with_capacity(joined.len());
    let mut pred = Vec::with_capacity(joined.len());
    for (record, p) in joined {
        truth.push(discrete_to_vad(space, truth_label(record)?));
        pred.push(p.pred_vad);
    }
    continuous_eval(&truth, &pred)
}

/// The label a prediction stands for: its explicit discrete label if given,
/// else the cluster its VAD point falls into.
pub fn predicted_label(model: &ClusterModel, prediction: &PredictionRecord) -> BasicEmotion {
    prediction
        .pred_discrete
        .unwrap_or_else(|| vad_to_discrete(model, prediction.pred_vad))
}

pub fn evaluate_discrete(
    manifest: &[SampleRecord],
    predictions: &[PredictionRecord],
    model: &ClusterModel,
) -> Result<DiscreteEval> {
    let joined = join(manifest, predictions)?;
    let mut truth = Vec::with_capacity(joined.len());
    let mut pred = Vec::with_capacity(joined.len());
    for (record, p) in joined {
        truth.push(truth_label(record)?);
        pred.push(predicted_label(model, p));
    }
    discrete_eval(&truth, &pred)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpenVocabSample {
    #[serde(flatten)]
    pub result: OpenVocabResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub similarity: Option<SetSimilarity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpenVocabRun {
    pub radius: f64,
    pub samples: Vec<OpenVocabSample>,
    pub fallback_count: usize,
    pub mean_terms: f64,
    /// Mean score and coverage over samples that were scored.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_similarity: Option<SetSimilarity>,
    pub scored_samples: usize,
    /// Samples with reference labels whose terms all fell outside the embedding table.
    pub unscorable_samples: usize,
}

/// Open-vocabulary sets for every prediction, scored against the manifest's
/// open labels when both those and an embedding table are available.
/// A sample whose generated or reference terms are all out of vocabulary is
/// left unscored and counted in `unscorable_samples`.
pub fn run_open_vocab(
    manifest: Option<&[SampleRecord]>,
    predictions: &[PredictionRecord],
    space: &EmotionSpace,
    radius: f64,
    exclude: &[String],
    embeddings: Option<&EmbeddingTable>,
) -> Result<OpenVocabRun> {
    let pairs: Vec<(Option<&SampleRecord>, &PredictionRecord)> = match manifest {
        Some(m) => join(m, predictions)?.into_iter().map(|(r, p)| (Some(r), p)).collect(),
        None => {
            let mut v: Vec<_> = predictions.iter().map(|p| (None, p)).collect();
            v.sort_by(|a, b| a.1.sample_id.cmp(&b.1.sample_id));
            v
        }
    };
    if pairs.is_empty() {
        return Err(Error::NoJoinedRecords);
    }

    let mut samples = Vec::with_capacity(pairs.len());
    let mut unscorable = 0;
    for (record, p) in pairs {
        let result = open_vocab_excluding(space, p.pred_vad, radius, &p.sample_id, exclude)?;
        let reference = record.and_then(|r| r.open_labels.clone()).filter(|l| !l.is_empty());
        let similarity = match (&reference, embeddings) {
            (Some(labels), Some(table)) => match set_similarity(&result.term_names(), labels, table) {
                Ok(s) => Some(s),
                Err(Error::NoOverlapWithVocabulary) => {
                    unscorable += 1;
                    None
                }
                Err(e) => return Err(e),
            },
            _ => None,
        };
        samples.push(OpenVocabSample {
            result,
            reference,
            similarity,
        });
    }

    let scored: Vec<SetSimilarity> = samples.iter().filter_map(|s| s.similarity).collect();
    let mean_similarity = (!scored.is_empty()).then(|| {
        let n = scored.len() as f64;
        SetSimilarity {
            score: scored.iter().map(|s| s.score).sum::<f64>() / n,
            coverage: scored.iter().map(|s| s.coverage).sum::<f64>() / n,
        }
    });
    let total_terms: usize = samples.iter().map(|s| s.result.terms.len()).sum();
    Ok(OpenVocabRun {
        radius,
        fallback_count: samples.iter().filter(|s| s.result.fallback_applied).count(),
        mean_terms: total_terms as f64 / samples.len() as f64,
        scored_samples: scored.len(),
        unscorable_samples: unscorable,
        mean_similarity,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscodedPrediction {
    pub sample_id: String,
    pub pred_vad: VadPoint,
    pub clamped: bool,
    pub label: BasicEmotion,
    pub cluster: usize,
}

pub fn transcode_predictions(model: &ClusterModel, predictions: &[PredictionRecord]) -> Vec<TranscodedPrediction> {
    predictions
        .iter()
        .map(|p| {
            let cluster = crate::clustering::assign(model, p.pred_vad);
            TranscodedPrediction {
                sample_id: p.sample_id.clone(),
                pred_vad: p.pred_vad,
                clamped: p.clamped,
                label: model.label(cluster),
                cluster,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelPoint {
    pub sample_id: String,
    pub label: BasicEmotion,
    pub vad: VadPoint,
}

/// Discrete manifest labels mapped to their VAD points. Unlabeled records are an error.
pub fn labels_to_vad(space: &EmotionSpace, manifest: &[SampleRecord]) -> Result<Vec<LabelPoint>> {
    manifest
        .iter()
        .map(|r| {
            let label = truth_label(r)?;
            Ok(LabelPoint {
                sample_id: r.sample_id.clone(),
                label,
                vad: discrete_to_vad(space, label),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pred(id: &str, v: f64, a: f64, d: f64) -> PredictionRecord {
        PredictionRecord {
            sample_id: id.into(),
            pred_vad: VadPoint::new(v, a, d).unwrap(),
            clamped: false,
            pred_discrete: None,
        }
    }

    #[test]
    fn join_sorts_and_rejects_unknown_ids() {
        let manifest = vec![
            SampleRecord::labeled("b", BasicEmotion::Sad),
            SampleRecord::labeled("a", BasicEmotion::Happy),
        ];
        let preds = vec![pred("b", 0.0, 0.0, 0.0), pred("a", 0.0, 0.0, 0.0)];
        let joined = join(&manifest, &preds).unwrap();
        assert_eq!(joined[0].0.sample_id, "a");
        assert_eq!(joined.len(), 2);

        let stray = vec![pred("a", 0.0, 0.0, 0.0), pred("z", 0.0, 0.0, 0.0), pred("y", 0.0, 0.0, 0.0)];
        assert_eq!(
            join(&manifest, &stray).unwrap_err(),
            Error::UnmatchedSampleId(vec!["y".into(), "z".into()])
        );
        assert_eq!(join(&manifest, &[]).unwrap_err(), Error::NoJoinedRecords);
    }
}
