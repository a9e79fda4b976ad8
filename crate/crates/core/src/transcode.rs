//! Discrete label ⇄ VAD point conversion and open-vocabulary retrieval.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::clustering::{assign, ClusterModel};
use crate::emotion::BasicEmotion;
use crate::error::{Error, Result};
use crate::space::{EmotionSpace, Neighbor, VadPoint};

pub const DEFAULT_RADIUS: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpenVocabResult {
    pub sample_id: String,
    pub terms: Vec<Neighbor>,
    pub radius_used: f64,
    /// Set when nothing lay within the radius and the single nearest term was returned instead.
    pub fallback_applied: bool,
}

impl OpenVocabResult {
    pub fn term_names(&self) -> Vec<String> {
        self.terms.iter().map(|n| n.term.clone()).collect()
    }
}

pub fn discrete_to_vad(space: &EmotionSpace, label: BasicEmotion) -> VadPoint {
    space.seed(label)
}

pub fn vad_to_discrete(model: &ClusterModel, point: VadPoint) -> BasicEmotion {
    model.label(assign(model, point))
}

/// Lexicon terms within `radius` of `point`; never empty.
pub fn open_vocab(space: &EmotionSpace, point: VadPoint, radius: f64, sample_id: &str) -> Result<OpenVocabResult> {
    open_vocab_excluding(space, point, radius, sample_id, &[])
}

/// As [`open_vocab`], with `exclude` removed from the candidate terms.
pub fn open_vocab_excluding(
    space: &EmotionSpace,
    point: VadPoint,
    radius: f64,
    sample_id: &str,
    exclude: &[String],
) -> Result<OpenVocabResult> {
    let excluded: HashSet<String> = exclude.iter().map(|t| t.to_lowercase()).collect();
    let keep = |n: &Neighbor| !excluded.contains(&n.term);

    let terms: Vec<Neighbor> = space.neighbors_within(point, radius)?.into_iter().filter(keep).collect();
    if !terms.is_empty() {
        return Ok(OpenVocabResult {
            sample_id: sample_id.to_string(),
            terms,
            radius_used: radius,
            fallback_applied: false,
        });
    }

    let nearest = if excluded.is_empty() {
        space.nearest(point, 1)?
    } else {
        space
            .nearest(point, space.len().max(1))?
            .into_iter()
            .find(keep)
            .into_iter()
            .collect()
    };
    if nearest.is_empty() {
        return Err(Error::InvalidConfig("exclusion list removes every term".into()));
    }
    Ok(OpenVocabResult {
        sample_id: sample_id.to_string(),
        terms: nearest,
        radius_used: radius,
        fallback_applied: true,
    })
}
