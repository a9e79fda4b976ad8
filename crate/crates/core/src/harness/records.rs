//! Line-delimited JSON manifests and prediction files.
//!
//! Manifest line:
//! `{"sample_id": "s1", "discrete_label": "happy", "open_labels": ["glad"], "clip_seconds": 3.2, "word_count": 12, "split": "train"}`
//! with every field but `sample_id` optional.
//!
//! Prediction line:
//! `{"sample_id": "s1", "pred_vad": [0.7, 0.3, 0.4], "pred_discrete": "happy"}`
//! with `pred_discrete` optional.

use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::emotion::BasicEmotion;
use crate::error::{Error, Result};
use crate::space::VadPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub sample_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrete_label: Option<BasicEmotion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub open_labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clip_seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
}

impl SampleRecord {
    pub fn labeled(sample_id: impl Into<String>, label: BasicEmotion) -> Self {
        SampleRecord {
            sample_id: sample_id.into(),
            discrete_label: Some(label),
            open_labels: None,
            clip_seconds: None,
            word_count: None,
            split: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSample {
    sample_id: String,
    #[serde(default)]
    discrete_label: Option<String>,
    #[serde(default)]
    open_labels: Option<Vec<String>>,
    #[serde(default)]
    clip_seconds: Option<f64>,
    #[serde(default)]
    word_count: Option<u64>,
    #[serde(default)]
    split: Option<Split>,
}

fn json_lines<R: BufRead, T, F>(source: R, mut convert: F) -> Result<Vec<T>>
where
    T: Sized,
    F: FnMut(usize, &str) -> Result<T>,
{
    let mut out = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::MalformedRecord {
            line: line_no,
            reason: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(convert(line_no, &line)?);
    }
    Ok(out)
}

fn malformed(line: usize) -> impl Fn(serde_json::Error) -> Error {
    move |e| Error::MalformedRecord {
        line,
        reason: e.to_string(),
    }
}

pub fn load_manifest<R: BufRead>(source: R) -> Result<Vec<SampleRecord>> {
    let mut seen = HashSet::new();
    json_lines(source, |line_no, line| {
        let raw: RawSample = serde_json::from_str(line).map_err(malformed(line_no))?;
        if raw.sample_id.is_empty() {
            return Err(Error::MalformedRecord {
                line: line_no,
                reason: "empty sample_id".into(),
            });
        }
        if !seen.insert(raw.sample_id.clone()) {
            return Err(Error::DuplicateSampleId(raw.sample_id));
        }
        if let Some(c) = raw.clip_seconds {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::MalformedRecord {
                    line: line_no,
                    reason: format!("clip_seconds must be positive, got {c}"),
                });
            }
        }
        let discrete_label = raw.discrete_label.as_deref().map(BasicEmotion::from_str).transpose()?;
        let open_labels = raw
            .open_labels
            .map(|labels| labels.into_iter().map(|l| l.trim().to_lowercase()).collect());
        Ok(SampleRecord {
            sample_id: raw.sample_id,
            discrete_label,
            open_labels,
            clip_seconds: raw.clip_seconds,
            word_count: raw.word_count,
            split: raw.split,
        })
    })
}

pub fn write_manifest(records: &[SampleRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
        .collect()
}

/// One model output, with out-of-range components clamped into `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionRecord {
    pub sample_id: String,
    pub pred_vad: VadPoint,
    /// True when `pred_vad` was clamped at ingestion.
    pub clamped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pred_discrete: Option<BasicEmotion>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPrediction {
    sample_id: String,
    pred_vad: [f64; 3],
    #[serde(default)]
    pred_discrete: Option<String>,
}

pub fn load_predictions<R: BufRead>(source: R) -> Result<Vec<PredictionRecord>> {
    let mut seen = HashSet::new();
    json_lines(source, |line_no, line| {
        let raw: RawPrediction = serde_json::from_str(line).map_err(malformed(line_no))?;
        if !seen.insert(raw.sample_id.clone()) {
            return Err(Error::DuplicateSampleId(raw.sample_id));
        }
        let [v, a, d] = raw.pred_vad;
        let (pred_vad, clamped) = VadPoint::clamped(v, a, d).map_err(|e| Error::MalformedRecord {
            line: line_no,
            reason: e.to_string(),
        })?;
        let pred_discrete = raw.pred_discrete.as_deref().map(BasicEmotion::from_str).transpose()?;
        Ok(PredictionRecord {
            sample_id: raw.sample_id,
            pred_vad,
            clamped,
            pred_discrete,
        })
    })
}
