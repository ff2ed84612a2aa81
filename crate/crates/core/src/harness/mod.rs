//! Experiment grid, record files and the aggregations built on them.

mod analysis;
mod config;
mod records;
mod run;
mod stats;

pub use analysis::{
    aggregate_bias, bias_tests, dataset_max_evi, filter_datasets, median_correlations,
    success_rates, threshold_datasets, two_level_median, write_reports, BiasRow, BiasTest,
    CorrelationRow, Evi, RateRow, Task,
};
pub use config::{
    k_window, AlgorithmSpec, BatterySpec, DatasetSpec, ExperimentConfig, FileFormat, KRule,
    ParadigmSpec, Scaling, SCHEMA_VERSION,
};
pub use records::{
    CsvRecordWriter, ExperimentRecord, IndexValues, IndexVariant, RecordSchema, RecordSet,
    RecordSink,
};
pub use run::{cell_seed, cluster_with, record_schema, run_experiment, run_to_records, RunSummary};
pub use stats::{
    degradation_curve, ks_statistic, sample_null_distribution, wilcoxon_signed_rank, Alternative,
    DegradationPoint, Histogram, NullDistribution, NullMode,
};

use std::path::PathBuf;

use crate::dataset::DatasetError;
use crate::distances::DistanceError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("dataset {name}: {source}")]
    Dataset {
        name: String,
        #[source]
        source: DatasetError,
    },
    #[error("dataset {dataset}, paradigm {paradigm}: {source}")]
    Distance {
        dataset: String,
        paradigm: String,
        #[source]
        source: DistanceError,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("record file: {0}")]
    Records(String),
    #[error("statistics: {0}")]
    Stats(String),
}
