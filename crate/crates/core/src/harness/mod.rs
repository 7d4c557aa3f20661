//! Synthetic corpora, evaluation metrics and run-file formats.

mod io;
mod metrics;
mod synth;

pub use io::{
    load_corpus, read_metrics_csv, read_trace_jsonl, write_metrics_csv, write_trace_jsonl,
    MetricsRow,
};
pub use metrics::{
    evaluate_decision_list, gold_indices, precision_throughput, CurvePoint, DecisionListEval,
};
pub use synth::{synth_corpus, SynthOutput, SynthSpec, SynthTruth};
