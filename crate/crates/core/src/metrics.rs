//! Evaluation metrics for continuous (VAD) and discrete (six-class) predictions.
//!
//! Continuous errors average over all `3N` scalars. Pearson correlation is
//! reported per dimension, as their mean, and over the flattened `3N` values.
//! Precision, recall and F1 use 0 for an empty denominator.

use serde::{Deserialize, Serialize};

use crate::emotion::BasicEmotion;
use crate::error::{Error, Result};
use crate::space::{l2_distance, VadPoint};

const CE_FLOOR: f64 = 1e-12;
const PROB_TOLERANCE: f64 = 1e-9;

fn check_lengths(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::LengthMismatch { left, right });
    }
    if left == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

fn componentwise(truth: &[VadPoint], pred: &[VadPoint], f: impl Fn(f64) -> f64) -> Result<f64> {
    check_lengths(truth.len(), pred.len())?;
    let mut total = 0.0;
    for (t, p) in truth.iter().zip(pred) {
        let (t, p) = (t.to_array(), p.to_array());
        for axis in 0..3 {
            total += f(t[axis] - p[axis]);
        }
    }
    Ok(total / (3 * truth.len()) as f64)
}

/// Mean squared error over all 3N components.
pub fn mse(truth: &[VadPoint], pred: &[VadPoint]) -> Result<f64> {
    componentwise(truth, pred, |e| e * e)
}

/// Mean absolute error over all 3N components.
pub fn mae(truth: &[VadPoint], pred: &[VadPoint]) -> Result<f64> {
    componentwise(truth, pred, f64::abs)
}

/// Mean Euclidean distance between paired points.
pub fn mean_l2(truth: &[VadPoint], pred: &[VadPoint]) -> Result<f64> {
    check_lengths(truth.len(), pred.len())?;
    let total: f64 = truth.iter().zip(pred).map(|(t, p)| l2_distance(*t, *p)).sum();
    Ok(total / truth.len() as f64)
}

/// Pearson correlation. `None` when either sequence has zero variance.
pub fn pcc(truth: &[f64], pred: &[f64]) -> Result<Option<f64>> {
    if truth.len() != pred.len() {
        return Err(Error::LengthMismatch {
            left: truth.len(),
            right: pred.len(),
        });
    }
    if truth.len() < 2 {
        return Err(Error::TooFewSamples(truth.len()));
    }
    let n = truth.len() as f64;
    let mean_t = truth.iter().sum::<f64>() / n;
    let mean_p = pred.iter().sum::<f64>() / n;
    let (mut cov, mut var_t, mut var_p) = (0.0, 0.0, 0.0);
    for (&t, &p) in truth.iter().zip(pred) {
        let (dt, dp) = (t - mean_t, p - mean_p);
        cov += dt * dp;
        var_t += dt * dt;
        var_p += dp * dp;
    }
    if var_t == 0.0 || var_p == 0.0 {
        return Ok(None);
    }
    Ok(Some((cov / (var_t.sqrt() * var_p.sqrt())).clamp(-1.0, 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerDimension {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arousal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dominance: Option<f64>,
}

impl PerDimension {
    pub fn to_array(self) -> [Option<f64>; 3] {
        [self.valence, self.arousal, self.dominance]
    }
}

/// Per-dimension correlations and the mean of the defined ones.
pub fn pcc_vad(truth: &[VadPoint], pred: &[VadPoint]) -> Result<(PerDimension, Option<f64>)> {
    let mut dims = [None; 3];
    for (axis, slot) in dims.iter_mut().enumerate() {
        let t: Vec<f64> = truth.iter().map(|p| p.to_array()[axis]).collect();
        let q: Vec<f64> = pred.iter().map(|p| p.to_array()[axis]).collect();
        *slot = pcc(&t, &q)?;
    }
    let defined: Vec<f64> = dims.iter().flatten().copied().collect();
    let mean = (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);
    let per_dim = PerDimension {
        valence: dims[0],
        arousal: dims[1],
        dominance: dims[2],
    };
    Ok((per_dim, mean))
}

/// Correlation over all 3N values laid end to end.
pub fn pcc_flat(truth: &[VadPoint], pred: &[VadPoint]) -> Result<Option<f64>> {
    let t: Vec<f64> = truth.iter().flat_map(|p| p.to_array()).collect();
    let q: Vec<f64> = pred.iter().flat_map(|p| p.to_array()).collect();
    pcc(&t, &q)
}

/// Mean of `-ln p(true class)` over samples, with probabilities floored at 1e-12.
pub fn cross_entropy(truth_onehot: &[[f64; 6]], pred_prob: &[[f64; 6]]) -> Result<f64> {
    check_lengths(truth_onehot.len(), pred_prob.len())?;
    let mut total = 0.0;
    for (row, (y, p)) in truth_onehot.iter().zip(pred_prob).enumerate() {
        let sum: f64 = p.iter().sum();
        if p.iter().any(|&x| !x.is_finite() || x < 0.0) || (sum - 1.0).abs() > PROB_TOLERANCE {
            return Err(Error::NotAProbability(row));
        }
        let ones = y.iter().filter(|&&v| v == 1.0).count();
        let zeros = y.iter().filter(|&&v| v == 0.0).count();
        if ones != 1 || zeros != 5 {
            return Err(Error::NotOneHot(row));
        }
        let class = y.iter().position(|&v| v == 1.0).expect("one-hot row");
        total -= p[class].max(CE_FLOOR).ln();
    }
    Ok(total / truth_onehot.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousEval {
    pub n_samples: usize,
    pub mean_l2: f64,
    pub mse: f64,
    pub mae: f64,
    pub pcc_per_dim: PerDimension,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pcc_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pcc_flat: Option<f64>,
}

/// Full continuous report. Correlations are left undefined for fewer than two samples.
pub fn continuous_eval(truth: &[VadPoint], pred: &[VadPoint]) -> Result<ContinuousEval> {
    let (pcc_per_dim, pcc_mean, pcc_flat) = if truth.len() >= 2 {
        let (dims, mean) = pcc_vad(truth, pred)?;
        (dims, mean, pcc_flat(truth, pred)?)
    } else {
        (PerDimension::default(), None, None)
    };
    Ok(ContinuousEval {
        n_samples: truth.len(),
        mean_l2: mean_l2(truth, pred)?,
        mse: mse(truth, pred)?,
        mae: mae(truth, pred)?,
        pcc_per_dim,
        pcc_mean,
        pcc_flat,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub emotion: BasicEmotion,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    pub predicted: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteEval {
    pub n_samples: usize,
    /// Rows are truth, columns are predictions, both in `BasicEmotion` order.
    pub confusion: [[u64; 6]; 6],
    pub per_class: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
    pub micro_f1: f64,
    pub accuracy: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

pub fn discrete_eval(truth: &[BasicEmotion], pred: &[BasicEmotion]) -> Result<DiscreteEval> {
    check_lengths(truth.len(), pred.len())?;
    let mut confusion = [[0u64; 6]; 6];
    for (t, p) in truth.iter().zip(pred) {
        confusion[t.index()][p.index()] += 1;
    }
    let total = truth.len() as u64;

    let per_class: Vec<ClassMetrics> = BasicEmotion::ALL
        .iter()
        .map(|&e| {
            let i = e.index();
            let tp = confusion[i][i];
            let support: u64 = confusion[i].iter().sum();
            let predicted: u64 = confusion.iter().map(|row| row[i]).sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            ClassMetrics {
                emotion: e,
                precision,
                recall,
                f1: harmonic(precision, recall),
                support,
                predicted,
            }
        })
        .collect();

    let macro_of = |f: fn(&ClassMetrics) -> f64| per_class.iter().map(f).sum::<f64>() / 6.0;
    let weighted_of = |f: fn(&ClassMetrics) -> f64| {
        per_class.iter().map(|c| f(c) * c.support as f64).sum::<f64>() / total as f64
    };

    let correct: u64 = (0..6).map(|i| confusion[i][i]).sum();
    let micro_p = ratio(correct, per_class.iter().map(|c| c.predicted).sum());
    let micro_r = ratio(correct, per_class.iter().map(|c| c.support).sum());
    // equal inputs give the harmonic mean exactly; avoid the rounding of the general formula
    let micro_f1 = if micro_p == micro_r { micro_p } else { harmonic(micro_p, micro_r) };

    Ok(DiscreteEval {
        n_samples: truth.len(),
        confusion,
        macro_precision: macro_of(|c| c.precision),
        macro_recall: macro_of(|c| c.recall),
        macro_f1: macro_of(|c| c.f1),
        weighted_precision: weighted_of(|c| c.precision),
        weighted_recall: weighted_of(|c| c.recall),
        weighted_f1: weighted_of(|c| c.f1),
        micro_f1,
        accuracy: ratio(correct, total),
        per_class,
    })
}
