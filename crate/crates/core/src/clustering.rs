//! Seeded k-means (Lloyd's algorithm) with k fixed at six.
//!
//! Centroid `i` is initialized at the seed of `BasicEmotion::from_index(i)` and
//! keeps that label for life. A cluster that loses all members keeps its
//! previous centroid, so the label mapping stays a bijection.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::emotion::BasicEmotion;
use crate::error::{Error, Result};
use crate::space::{l2_distance, EmotionSpace, VadPoint};

pub const K: usize = BasicEmotion::COUNT;

pub const MODEL_FORMAT: &str = "emovad-cluster-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KMeansParams {
    pub max_iterations: usize,
    /// Stop once no centroid moves by this much or more.
    pub tolerance: f64,
    /// Keep the neutral centroid fixed at its seed.
    #[serde(default)]
    pub pin_neutral: bool,
}

impl Default for KMeansParams {
    fn default() -> Self {
        KMeansParams {
            max_iterations: 300,
            tolerance: 1e-9,
            pin_neutral: false,
        }
    }
}

/// A fitted six-cluster classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    pub centroids: [VadPoint; K],
    /// `label_of[i]` is the emotion whose seed initialized centroid `i`.
    pub label_of: [BasicEmotion; K],
    pub assignments: BTreeMap<String, usize>,
    pub iterations_run: usize,
    pub final_wcss: f64,
    pub params: KMeansParams,
    pub subset_hash: String,
}

/// Nearest centroid, ties going to the lowest index.
pub fn nearest_centroid(centroids: &[VadPoint; K], point: VadPoint) -> usize {
    let mut best = 0;
    let mut best_distance = l2_distance(point, centroids[0]);
    for (i, c) in centroids.iter().enumerate().skip(1) {
        let d = l2_distance(point, *c);
        if d < best_distance {
            best = i;
            best_distance = d;
        }
    }
    best
}

fn assign_all(points: &[VadPoint], centroids: &[VadPoint; K]) -> Vec<usize> {
    points.iter().map(|&p| nearest_centroid(centroids, p)).collect()
}

fn objective(points: &[VadPoint], labels: &[usize], centroids: &[VadPoint; K]) -> f64 {
    points
        .iter()
        .zip(labels)
        .map(|(&p, &i)| {
            let d = l2_distance(p, centroids[i]);
            d * d
        })
        .sum()
}

fn update_centroids(
    points: &[VadPoint],
    labels: &[usize],
    previous: &[VadPoint; K],
    pin_neutral: bool,
) -> [VadPoint; K] {
    let mut sums = [[0.0f64; 3]; K];
    let mut counts = [0usize; K];
    for (&p, &i) in points.iter().zip(labels) {
        let a = p.to_array();
        for axis in 0..3 {
            sums[i][axis] += a[axis];
        }
        counts[i] += 1;
    }
    let mut next = *previous;
    for i in 0..K {
        if counts[i] == 0 || (pin_neutral && i == BasicEmotion::Neutral.index()) {
            continue;
        }
        let n = counts[i] as f64;
        next[i] = VadPoint::from_array(sums[i].map(|s| s / n));
    }
    next
}

fn check_seeds(seeds: &[VadPoint; K]) -> Result<()> {
    for i in 0..K {
        for j in i + 1..K {
            if seeds[i] == seeds[j] {
                return Err(Error::DegenerateSeeds(
                    BasicEmotion::ALL[i].name().into(),
                    BasicEmotion::ALL[j].name().into(),
                ));
            }
        }
    }
    Ok(())
}

/// Fits the classifier. See [`kmeans_seeded_traced`] for the objective trace.
pub fn kmeans_seeded(space: &EmotionSpace, params: &KMeansParams) -> Result<ClusterModel> {
    kmeans_seeded_traced(space, params).map(|(model, _)| model)
}

/// Fits the classifier and also returns the within-cluster sum of squares
/// after every half-step (initial assignment, then each update and
/// reassignment). The trace is non-increasing.
pub fn kmeans_seeded_traced(
    space: &EmotionSpace,
    params: &KMeansParams,
) -> Result<(ClusterModel, Vec<f64>)> {
    if space.len() < K {
        return Err(Error::EmptySpace(space.len()));
    }
    let seeds = *space.seeds();
    check_seeds(&seeds)?;

    let points: Vec<VadPoint> = space.entries().iter().map(|(_, p)| *p).collect();
    let mut centroids = seeds;
    let mut labels = assign_all(&points, &centroids);
    let mut trace = vec![objective(&points, &labels, &centroids)];
    let mut iterations_run = 0;

    while iterations_run < params.max_iterations {
        let next = update_centroids(&points, &labels, &centroids, params.pin_neutral);
        let movement = centroids
            .iter()
            .zip(&next)
            .map(|(a, b)| l2_distance(*a, *b))
            .fold(0.0, f64::max);
        centroids = next;
        iterations_run += 1;
        trace.push(objective(&points, &labels, &centroids));
        labels = assign_all(&points, &centroids);
        trace.push(objective(&points, &labels, &centroids));
        if movement < params.tolerance {
            break;
        }
    }

    let final_wcss = *trace.last().expect("trace starts non-empty");
    let assignments = space
        .terms()
        .zip(&labels)
        .map(|(t, &i)| (t.to_string(), i))
        .collect();
    let model = ClusterModel {
        centroids,
        label_of: BasicEmotion::ALL,
        assignments,
        iterations_run,
        final_wcss,
        params: *params,
        subset_hash: space.term_hash(),
    };
    Ok((model, trace))
}

/// Index of the cluster `point` falls into.
pub fn assign(model: &ClusterModel, point: VadPoint) -> usize {
    nearest_centroid(&model.centroids, point)
}

/// Sum over space terms of the squared distance to their assigned centroid.
pub fn wcss(space: &EmotionSpace, model: &ClusterModel) -> Result<f64> {
    let mut total = 0.0;
    for (term, p) in space.entries() {
        let &i = model
            .assignments
            .get(term)
            .ok_or_else(|| Error::AssignmentMismatch(term.clone()))?;
        let d = l2_distance(*p, model.centroids[i]);
        total += d * d;
    }
    Ok(total)
}

impl ClusterModel {
    pub fn label(&self, cluster: usize) -> BasicEmotion {
        self.label_of[cluster]
    }

    /// Members of each cluster, in term order.
    pub fn members(&self) -> [Vec<&str>; K] {
        let mut out: [Vec<&str>; K] = Default::default();
        for (term, &i) in &self.assignments {
            out[i].push(term.as_str());
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&ModelDocument::from(self))
            .expect("model document is always serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument =
            serde_json::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))?;
        doc.try_into()
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    format: String,
    version: u32,
    params: KMeansParams,
    subset_hash: String,
    iterations_run: usize,
    final_wcss: f64,
    clusters: Vec<ClusterDocument>,
    assignments: BTreeMap<String, usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusterDocument {
    index: usize,
    label: BasicEmotion,
    centroid: VadPoint,
}

impl From<&ClusterModel> for ModelDocument {
    fn from(m: &ClusterModel) -> Self {
        ModelDocument {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            params: m.params,
            subset_hash: m.subset_hash.clone(),
            iterations_run: m.iterations_run,
            final_wcss: m.final_wcss,
            clusters: (0..K)
                .map(|i| ClusterDocument {
                    index: i,
                    label: m.label_of[i],
                    centroid: m.centroids[i],
                })
                .collect(),
            assignments: m.assignments.clone(),
        }
    }
}

impl TryFrom<ModelDocument> for ClusterModel {
    type Error = Error;

    fn try_from(doc: ModelDocument) -> Result<Self> {
        if doc.format != MODEL_FORMAT {
            return Err(Error::InvalidModel(format!("unexpected format `{}`", doc.format)));
        }
        if doc.version != MODEL_VERSION {
            return Err(Error::InvalidModel(format!("unsupported version {}", doc.version)));
        }
        if doc.clusters.len() != K {
            return Err(Error::InvalidModel(format!("expected {K} clusters, found {}", doc.clusters.len())));
        }
        let mut centroids = [VadPoint::ORIGIN; K];
        let mut label_of = BasicEmotion::ALL;
        let mut seen_index = [false; K];
        let mut seen_label = [false; K];
        for c in &doc.clusters {
            if c.index >= K || seen_index[c.index] {
                return Err(Error::InvalidModel(format!("bad cluster index {}", c.index)));
            }
            if seen_label[c.label.index()] {
                return Err(Error::InvalidModel(format!("label `{}` used twice", c.label)));
            }
            seen_index[c.index] = true;
            seen_label[c.label.index()] = true;
            centroids[c.index] = c.centroid;
            label_of[c.index] = c.label;
        }
        if let Some((term, i)) = doc.assignments.iter().find(|(_, &i)| i >= K) {
            return Err(Error::InvalidModel(format!("term `{term}` assigned to cluster {i}")));
        }
        Ok(ClusterModel {
            centroids,
            label_of,
            assignments: doc.assignments,
            iterations_run: doc.iterations_run,
            final_wcss: doc.final_wcss,
            params: doc.params,
            subset_hash: doc.subset_hash,
        })
    }
}
