//! Stratified splitting and per-emotion dataset summaries.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::records::{SampleRecord, Split};
use crate::emotion::BasicEmotion;
use crate::error::{Error, Result};

const RATIO_TOLERANCE: f64 = 1e-9;

/// Largest-remainder apportionment of `n` items over `ratios`.
/// Equal remainders favour the earlier split.
pub fn apportion(n: usize, ratios: [f64; 3]) -> [usize; 3] {
    let quotas = ratios.map(|r| n as f64 * r);
    let mut counts = quotas.map(|q| q.floor() as usize);
    let assigned: usize = counts.iter().sum();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - quotas[a].floor();
        let fb = quotas[b] - quotas[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

fn check_ratios(ratios: [f64; 3]) -> Result<()> {
    if ratios.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(Error::InvalidRatios(format!("{ratios:?} contains a negative or non-finite value")));
    }
    let sum: f64 = ratios.iter().sum();
    if (sum - 1.0).abs() > RATIO_TOLERANCE {
        return Err(Error::InvalidRatios(format!("{ratios:?} sums to {sum}, not 1")));
    }
    Ok(())
}

/// Assigns train/val/test per discrete label.
///
/// Within each label, records are ordered by `sample_id`, shuffled with a
/// ChaCha8 stream seeded by `seed` (labels visited in `BasicEmotion` order)
/// and cut at the apportioned sizes. The output keeps the input order.
pub fn split_manifest(records: &[SampleRecord], ratios: [f64; 3], seed: u64) -> Result<Vec<SampleRecord>> {
    check_ratios(ratios)?;
    if let Some(r) = records.iter().find(|r| r.discrete_label.is_none()) {
        return Err(Error::MissingLabels(r.sample_id.clone()));
    }
    let mut out = records.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for emotion in BasicEmotion::ALL {
        let mut group: Vec<usize> = (0..out.len())
            .filter(|&i| out[i].discrete_label == Some(emotion))
            .collect();
        group.sort_by(|&a, &b| out[a].sample_id.cmp(&out[b].sample_id));
        group.shuffle(&mut rng);
        let counts = apportion(group.len(), ratios);
        let mut cursor = group.into_iter();
        for (split, count) in Split::ALL.into_iter().zip(counts) {
            for i in cursor.by_ref().take(count) {
                out[i].split = Some(split);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub emotion: BasicEmotion,
    pub total: usize,
    pub train: usize,
    pub val: usize,
    pub test: usize,
    /// Records without a split assignment.
    pub unassigned: usize,
    /// Mean clip duration in seconds over records that carry one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clip_seconds_avg: Option<f64>,
    /// Mean word count over records that carry one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_count_avg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub total: usize,
    /// Records without a discrete label; `total` = sum of row totals + `unlabeled`.
    pub unlabeled: usize,
    pub rows: Vec<SummaryRow>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn summarize_dataset(records: &[SampleRecord]) -> DatasetSummary {
    let rows = BasicEmotion::ALL
        .iter()
        .map(|&emotion| {
            let group: Vec<&SampleRecord> = records.iter().filter(|r| r.discrete_label == Some(emotion)).collect();
            let in_split = |s: Split| group.iter().filter(|r| r.split == Some(s)).count();
            SummaryRow {
                emotion,
                total: group.len(),
                train: in_split(Split::Train),
                val: in_split(Split::Val),
                test: in_split(Split::Test),
                unassigned: group.iter().filter(|r| r.split.is_none()).count(),
                clip_seconds_avg: mean(group.iter().filter_map(|r| r.clip_seconds)),
                word_count_avg: mean(group.iter().filter_map(|r| r.word_count.map(|w| w as f64))),
            }
        })
        .collect();
    DatasetSummary {
        total: records.len(),
        unlabeled: records.iter().filter(|r| r.discrete_label.is_none()).count(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled(n: usize, label: BasicEmotion, prefix: &str) -> Vec<SampleRecord> {
        (0..n)
            .map(|i| SampleRecord::labeled(format!("{prefix}{i:05}"), label))
            .collect()
    }

    #[test]
    fn largest_remainder_rounding() {
        // 931 * (0.7, 0.15, 0.15) = 651.7, 139.65, 139.65; two seats left go to
        // the largest remainder (train) then the earlier of the tied pair (val)
        assert_eq!(apportion(931, [0.7, 0.15, 0.15]), [652, 140, 139]);
        assert_eq!(apportion(10, [1.0, 0.0, 0.0]), [10, 0, 0]);
        assert_eq!(apportion(0, [0.7, 0.15, 0.15]), [0, 0, 0]);
        assert_eq!(apportion(3, [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]), [1, 1, 1]);
    }

    #[test]
    fn stratified_split_sizes() {
        let records = labeled(931, BasicEmotion::Happy, "h");
        let out = split_manifest(&records, [0.7, 0.15, 0.15], 7).unwrap();
        let summary = summarize_dataset(&out);
        let happy = &summary.rows[0];
        assert_eq!((happy.train, happy.val, happy.test), (652, 140, 139));
        assert!(out.iter().zip(&records).all(|(a, b)| a.sample_id == b.sample_id));
    }

    #[test]
    fn split_is_deterministic_and_order_free() {
        let mut records = labeled(10, BasicEmotion::Sad, "s");
        records.extend(labeled(7, BasicEmotion::Angry, "a"));
        let a = split_manifest(&records, [0.7, 0.15, 0.15], 42).unwrap();
        let b = split_manifest(&records, [0.7, 0.15, 0.15], 42).unwrap();
        assert_eq!(a, b);

        let mut reversed = records.clone();
        reversed.reverse();
        let c = split_manifest(&reversed, [0.7, 0.15, 0.15], 42).unwrap();
        for r in &a {
            let twin = c.iter().find(|x| x.sample_id == r.sample_id).unwrap();
            assert_eq!(twin.split, r.split);
        }
        let d = split_manifest(&records, [0.7, 0.15, 0.15], 43).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn all_train() {
        let records = labeled(10, BasicEmotion::Worried, "w");
        let out = split_manifest(&records, [1.0, 0.0, 0.0], 1).unwrap();
        assert!(out.iter().all(|r| r.split == Some(Split::Train)));
    }

    #[test]
    fn split_errors() {
        let records = labeled(3, BasicEmotion::Happy, "h");
        assert!(matches!(split_manifest(&records, [0.5, 0.2, 0.2], 0), Err(Error::InvalidRatios(_))));
        assert!(matches!(split_manifest(&records, [1.2, -0.1, -0.1], 0), Err(Error::InvalidRatios(_))));
        let mut unlabeled = records.clone();
        unlabeled[1].discrete_label = None;
        assert_eq!(
            split_manifest(&unlabeled, [0.7, 0.15, 0.15], 0).unwrap_err(),
            Error::MissingLabels("h00001".into())
        );
    }

    #[test]
    fn summary_of_empty_manifest() {
        let s = summarize_dataset(&[]);
        assert_eq!(s.total, 0);
        assert!(s.rows.iter().all(|r| r.total == 0 && r.clip_seconds_avg.is_none() && r.word_count_avg.is_none()));
    }

    #[test]
    fn clip_average() {
        let mut records = labeled(2, BasicEmotion::Surprised, "x");
        records[0].clip_seconds = Some(2.0);
        records[1].clip_seconds = Some(4.0);
        records.push(SampleRecord {
            discrete_label: None,
            ..SampleRecord::labeled("u", BasicEmotion::Happy)
        });
        let s = summarize_dataset(&records);
        assert_eq!(s.rows[BasicEmotion::Surprised.index()].clip_seconds_avg, Some(3.0));
        assert_eq!(s.rows[BasicEmotion::Surprised.index()].word_count_avg, None);
        assert_eq!(s.unlabeled, 1);
        assert_eq!(s.rows.iter().map(|r| r.total).sum::<usize>() + s.unlabeled, s.total);
    }
}
