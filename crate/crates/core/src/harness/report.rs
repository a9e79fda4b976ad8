//! Evaluation report: structured JSON for machines, aligned text tables for people.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::dataset::DatasetSummary;
use crate::clustering::KMeansParams;
use crate::error::{Error, Result};
use crate::metrics::{ContinuousEval, DiscreteEval};
use crate::similarity::SetSimilarity;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Structured,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool_version: String,
    pub config_hash: String,
    pub subset_hash: String,
    pub model_params: KMeansParams,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenVocabSummary {
    pub radius: f64,
    pub samples: usize,
    pub fallback_count: usize,
    pub mean_terms: f64,
    pub scored_samples: usize,
    pub unscorable_samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub similarity: Option<SetSimilarity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationReport {
    pub provenance: Provenance,
    pub dataset_summary: DatasetSummary,
    pub joined_predictions: usize,
    pub clamped_predictions: usize,
    pub continuous: ContinuousEval,
    pub discrete: DiscreteEval,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open_vocab: Option<OpenVocabSummary>,
}

pub fn to_structured<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn parse_report(text: &str) -> Result<EvaluationReport> {
    serde_json::from_str(text).map_err(|e| Error::MalformedRecord {
        line: e.line(),
        reason: e.to_string(),
    })
}

pub fn emit_report(report: &EvaluationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Structured => to_structured(report),
        ReportFormat::Table => render_report(report),
    }
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.digits$}"))
}

fn title(name: &str) -> String {
    let mut c = name.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

/// Per-emotion counts and averages, one row per emotion.
pub fn render_summary(summary: &DatasetSummary) -> String {
    let mut out = String::new();
    writeln!(out, "Dataset distribution ({} records, {} unlabeled)", summary.total, summary.unlabeled).unwrap();
    writeln!(
        out,
        "{:<10} {:>6} {:>6} {:>6} {:>6} {:>8} {:>8}",
        "Emotion", "Total", "Train", "Val", "Test", "C-Avg", "W-Avg"
    )
    .unwrap();
    for r in &summary.rows {
        let c_avg = r.clip_seconds_avg.map_or_else(|| "n/a".into(), |c| format!("{c:.2}s"));
        writeln!(
            out,
            "{:<10} {:>6} {:>6} {:>6} {:>6} {:>8} {:>8}",
            title(r.emotion.name()),
            r.total,
            r.train,
            r.val,
            r.test,
            c_avg,
            opt(r.word_count_avg, 2)
        )
        .unwrap();
    }
    out
}

pub fn render_continuous(c: &ContinuousEval) -> String {
    let mut out = String::new();
    writeln!(out, "Continuous evaluation ({} samples)", c.n_samples).unwrap();
    writeln!(out, "{:<12} {:>8} {:>8} {:>8}", "L2 distance", "MSE", "MAE", "PCC").unwrap();
    writeln!(
        out,
        "{:<12.4} {:>8.4} {:>8.4} {:>8}",
        c.mean_l2,
        c.mse,
        c.mae,
        opt(c.pcc_mean, 4)
    )
    .unwrap();
    writeln!(
        out,
        "PCC valence {}  arousal {}  dominance {}  flattened {}",
        opt(c.pcc_per_dim.valence, 4),
        opt(c.pcc_per_dim.arousal, 4),
        opt(c.pcc_per_dim.dominance, 4),
        opt(c.pcc_flat, 4)
    )
    .unwrap();
    out
}

pub fn render_discrete(d: &DiscreteEval) -> String {
    let mut out = String::new();
    writeln!(out, "Discrete evaluation ({} samples)", d.n_samples).unwrap();
    writeln!(out, "{:<10} {:>8} {:>10} {:>8}", "Average", "F1", "Precision", "Recall").unwrap();
    writeln!(
        out,
        "{:<10} {:>8.4} {:>10.4} {:>8.4}",
        "macro", d.macro_f1, d.macro_precision, d.macro_recall
    )
    .unwrap();
    writeln!(
        out,
        "{:<10} {:>8.4} {:>10.4} {:>8.4}",
        "weighted", d.weighted_f1, d.weighted_precision, d.weighted_recall
    )
    .unwrap();
    writeln!(out, "Accuracy {:.4}", d.accuracy).unwrap();
    writeln!(out).unwrap();
    writeln!(
        out,
        "{:<10} {:>8} {:>10} {:>8} {:>8}",
        "Class", "F1", "Precision", "Recall", "Support"
    )
    .unwrap();
    for c in &d.per_class {
        writeln!(
            out,
            "{:<10} {:>8.4} {:>10.4} {:>8.4} {:>8}",
            title(c.emotion.name()),
            c.f1,
            c.precision,
            c.recall,
            c.support
        )
        .unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "Confusion matrix (rows = truth, columns = prediction)").unwrap();
    write!(out, "{:<10}", "").unwrap();
    for c in &d.per_class {
        write!(out, " {:>9}", title(c.emotion.name())).unwrap();
    }
    writeln!(out).unwrap();
    for (c, row) in d.per_class.iter().zip(&d.confusion) {
        write!(out, "{:<10}", title(c.emotion.name())).unwrap();
        for v in row {
            write!(out, " {v:>9}").unwrap();
        }
        writeln!(out).unwrap();
    }
    out
}

fn render_report(r: &EvaluationReport) -> String {
    let mut out = String::new();
    let p = &r.provenance;
    writeln!(out, "emovad {}", p.tool_version).unwrap();
    writeln!(out, "config {}", p.config_hash).unwrap();
    writeln!(out, "subset {}", p.subset_hash).unwrap();
    writeln!(
        out,
        "k-means max_iterations={} tolerance={:e} pin_neutral={}  radius {}",
        p.model_params.max_iterations, p.model_params.tolerance, p.model_params.pin_neutral, p.radius
    )
    .unwrap();
    writeln!(
        out,
        "{} predictions joined, {} clamped",
        r.joined_predictions, r.clamped_predictions
    )
    .unwrap();
    writeln!(out).unwrap();
    out.push_str(&render_summary(&r.dataset_summary));
    writeln!(out).unwrap();
    out.push_str(&render_continuous(&r.continuous));
    writeln!(out).unwrap();
    out.push_str(&render_discrete(&r.discrete));
    if let Some(ov) = &r.open_vocab {
        writeln!(out).unwrap();
        writeln!(
            out,
            "Open vocabulary: radius {}, {} samples, {:.2} terms on average, {} fallbacks",
            ov.radius, ov.samples, ov.mean_terms, ov.fallback_count
        )
        .unwrap();
        if let Some(s) = ov.similarity {
            writeln!(
                out,
                "Set similarity {:.4} (coverage {:.4}) over {} samples, {} unscorable",
                s.score, s.coverage, ov.scored_samples, ov.unscorable_samples
            )
            .unwrap();
        }
    }
    out
}
