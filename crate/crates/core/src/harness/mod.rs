//! Dataset manifests, splits, evaluation runs and reports.

pub mod dataset;
pub mod evaluate;
pub mod pipeline;
pub mod records;
pub mod report;

pub use dataset::{apportion, split_manifest, summarize_dataset, DatasetSummary, SummaryRow};
pub use evaluate::{
    evaluate_continuous, evaluate_discrete, join, labels_to_vad, predicted_label, run_open_vocab,
    transcode_predictions, OpenVocabRun, OpenVocabSample,
};
pub use records::{load_manifest, load_predictions, write_manifest, PredictionRecord, SampleRecord, Split};
pub use report::{emit_report, parse_report, EvaluationReport, ReportFormat};
