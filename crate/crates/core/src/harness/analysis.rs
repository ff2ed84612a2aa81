//! Aggregations over a record set: evaluation bias (mean OWM), coincidence
//! success rates, two-level median correlations and EVI thresholding.
//!
//! Every aggregation groups records by key into ordered maps and sorts the
//! members of each slice, so the results do not depend on record order.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use super::records::{ExperimentRecord, RecordSet};
use super::stats::{wilcoxon_signed_rank, Alternative};
use super::HarnessError;
use crate::schemes::{co_flag, pearson_defined};

/// Which partitions a selection task compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    /// Vary k with dataset, algorithm and paradigm fixed.
    KSelection,
    /// Vary the paradigm with dataset, algorithm and k fixed.
    SpSelection,
}

impl Task {
    pub const ALL: [Task; 2] = [Task::KSelection, Task::SpSelection];

    pub fn name(self) -> &'static str {
        match self {
            Task::KSelection => "k_selection",
            Task::SpSelection => "sp_selection",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Evi {
    Ari,
    Ami,
}

impl Evi {
    pub const ALL: [Evi; 2] = [Evi::Ari, Evi::Ami];

    pub fn name(self) -> &'static str {
        match self {
            Evi::Ari => "ari",
            Evi::Ami => "ami",
        }
    }

    fn of(self, r: &ExperimentRecord) -> Option<f64> {
        match self {
            Evi::Ari => r.ari,
            Evi::Ami => r.ami,
        }
    }
}

/// Mean OWM of one index variant over the partitions a paradigm produced
/// on one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasRow {
    pub dataset: String,
    pub rvi: String,
    pub paradigm: String,
    pub partitions: usize,
    pub mean_owm: f64,
    /// Expected mean under no bias: one over the number of paradigms.
    pub reference: f64,
}

pub fn aggregate_bias(set: &RecordSet) -> Vec<BiasRow> {
    let reference = 1.0 / set.schema.paradigms.len() as f64;
    let mut groups: BTreeMap<(String, usize, String), (usize, usize)> = BTreeMap::new();
    for r in &set.records {
        for (vi, v) in r.values.iter().enumerate() {
            if let Some(flag) = v.owm {
                let e = groups
                    .entry((r.dataset.clone(), vi, r.paradigm.clone()))
                    .or_default();
                e.0 += 1;
                e.1 += usize::from(flag);
            }
        }
    }
    groups
        .into_iter()
        .map(|((dataset, vi, paradigm), (n, hits))| BiasRow {
            dataset,
            rvi: set.schema.variants[vi].name(),
            paradigm,
            partitions: n,
            mean_owm: hits as f64 / n as f64,
            reference,
        })
        .collect()
}

/// One-sided Wilcoxon tests of mean OWM values against the reference.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasTest {
    pub rvi: String,
    /// A paradigm name (one sample per dataset), or `all` (one sample per
    /// dataset and paradigm).
    pub paradigm: String,
    pub samples: usize,
    pub mean: f64,
    pub reference: f64,
    /// `None` when the test is not applicable (too few non-tied samples).
    pub p_greater: Option<f64>,
    pub p_less: Option<f64>,
}

/// Tests the bias means of each index, per paradigm and pooled over
/// paradigms.
pub fn bias_tests(rows: &[BiasRow]) -> Vec<BiasTest> {
    let mut groups: BTreeMap<(String, String), (f64, Vec<f64>)> = BTreeMap::new();
    for r in rows {
        for paradigm in [r.paradigm.clone(), "all".to_string()] {
            let e = groups
                .entry((r.rvi.clone(), paradigm))
                .or_insert((r.reference, Vec::new()));
            e.1.push(r.mean_owm);
        }
    }
    groups
        .into_iter()
        .map(|((rvi, paradigm), (reference, mut sample))| {
            sample.sort_by(f64::total_cmp);
            let mean = sample.iter().sum::<f64>() / sample.len() as f64;
            BiasTest {
                rvi,
                paradigm,
                samples: sample.len(),
                mean,
                reference,
                p_greater: wilcoxon_signed_rank(&sample, reference, Alternative::Greater).ok(),
                p_less: wilcoxon_signed_rank(&sample, reference, Alternative::Less).ok(),
            }
        })
        .collect()
}

/// Slices of a task: ordered groups of records, members in a fixed order.
fn slices<'a>(set: &'a RecordSet, task: Task) -> Vec<(String, Vec<&'a ExperimentRecord>)> {
    let paradigm_pos = |p: &str| {
        set.schema
            .paradigms
            .iter()
            .position(|x| x == p)
            .unwrap_or(usize::MAX)
    };
    let mut groups: BTreeMap<(String, String, String), Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in &set.records {
        let key = match task {
            Task::KSelection => (r.dataset.clone(), r.algorithm.clone(), r.paradigm.clone()),
            Task::SpSelection => (
                r.dataset.clone(),
                r.algorithm.clone(),
                format!("{:020}", r.k),
            ),
        };
        groups.entry(key).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((dataset, _, _), mut members)| {
            match task {
                Task::KSelection => members.sort_by_key(|r| r.k),
                Task::SpSelection => members.sort_by_key(|r| paradigm_pos(&r.paradigm)),
            }
            (dataset, members)
        })
        .collect()
}

/// Scheme column of variant `vi` over the members of a slice, together with
/// the EVI values, restricted to members whose EVI is defined.
fn slice_columns(
    members: &[&ExperimentRecord],
    vi: usize,
    evi: Evi,
    schemes: usize,
) -> (Vec<Vec<Option<f64>>>, Vec<f64>) {
    let kept: Vec<&&ExperimentRecord> = members.iter().filter(|r| evi.of(r).is_some()).collect();
    let evis = kept.iter().map(|r| evi.of(r).expect("filtered")).collect();
    let cols = (0..schemes)
        .map(|s| {
            kept.iter()
                .map(|r| r.values[vi].schemes().nth(s).flatten())
                .collect()
        })
        .collect();
    (cols, evis)
}

/// Coincidence success rate for one task, index variant and scheme.
/// `scheme` is a paradigm name, `mean`, `match`, or `all` for the rate
/// pooled over every scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub task: Task,
    pub evi: Evi,
    pub rvi: String,
    pub scheme: String,
    pub slices: usize,
    pub rate: Option<f64>,
}

pub fn success_rates(set: &RecordSet, task: Task, evi: Evi) -> Vec<RateRow> {
    let names = set.scheme_names();
    let task_slices = slices(set, task);
    let mut out = Vec::new();
    for (vi, v) in set.schema.variants.iter().enumerate() {
        let mut hits = vec![0usize; names.len()];
        let mut counts = vec![0usize; names.len()];
        for (_, members) in &task_slices {
            let (cols, evis) = slice_columns(members, vi, evi, names.len());
            if evis.len() < 2 {
                continue;
            }
            for (s, col) in cols.iter().enumerate() {
                if let Ok(flag) = co_flag(col, &evis, v.kind.direction()) {
                    counts[s] += 1;
                    hits[s] += usize::from(flag);
                }
            }
        }
        let row = |scheme: String, h: usize, c: usize| RateRow {
            task,
            evi,
            rvi: v.name(),
            scheme,
            slices: c,
            rate: (c > 0).then(|| h as f64 / c as f64),
        };
        for (s, name) in names.iter().enumerate() {
            out.push(row(name.clone(), hits[s], counts[s]));
        }
        out.push(row("all".into(), hits.iter().sum(), counts.iter().sum()));
    }
    out
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Median over datasets of the per-dataset median correlation.
pub fn two_level_median(per_dataset: &BTreeMap<String, Vec<f64>>) -> Option<f64> {
    let mut medians: Vec<f64> = per_dataset
        .values()
        .filter(|v| !v.is_empty())
        .map(|v| {
            let mut v = v.clone();
            v.sort_by(f64::total_cmp);
            median(&v)
        })
        .collect();
    if medians.is_empty() {
        return None;
    }
    medians.sort_by(f64::total_cmp);
    Some(median(&medians))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRow {
    pub task: Task,
    pub evi: Evi,
    pub rvi: String,
    pub scheme: String,
    /// Datasets with at least one defined correlation.
    pub datasets: usize,
    pub correlations: usize,
    /// Slices whose correlation was undefined and therefore excluded.
    pub undefined: usize,
    pub median: Option<f64>,
}

pub fn median_correlations(set: &RecordSet, task: Task, evi: Evi) -> Vec<CorrelationRow> {
    let names = set.scheme_names();
    let task_slices = slices(set, task);
    let mut out = Vec::new();
    for (vi, v) in set.schema.variants.iter().enumerate() {
        let mut per_scheme: Vec<BTreeMap<String, Vec<f64>>> = vec![BTreeMap::new(); names.len()];
        let mut undefined = vec![0usize; names.len()];
        for (dataset, members) in &task_slices {
            let (cols, evis) = slice_columns(members, vi, evi, names.len());
            for (s, col) in cols.iter().enumerate() {
                match pearson_defined(col, &evis, v.kind.direction())
                    .ok()
                    .flatten()
                {
                    Some(r) => per_scheme[s].entry(dataset.clone()).or_default().push(r),
                    None => undefined[s] += 1,
                }
            }
        }
        for (s, name) in names.iter().enumerate() {
            out.push(CorrelationRow {
                task,
                evi,
                rvi: v.name(),
                scheme: name.clone(),
                datasets: per_scheme[s].len(),
                correlations: per_scheme[s].values().map(Vec::len).sum(),
                undefined: undefined[s],
                median: two_level_median(&per_scheme[s]),
            });
        }
    }
    out
}

/// Largest EVI over each dataset's partitions; `None` when no record of
/// the dataset has one.
pub fn dataset_max_evi(set: &RecordSet, evi: Evi) -> BTreeMap<String, Option<f64>> {
    let mut out: BTreeMap<String, Option<f64>> = BTreeMap::new();
    for r in &set.records {
        let e = out.entry(r.dataset.clone()).or_insert(None);
        if let Some(v) = evi.of(r) {
            *e = Some(e.map_or(v, |m: f64| m.max(v)));
        }
    }
    out
}

/// Datasets whose best ARI strictly exceeds `evi_min`.
pub fn threshold_datasets(set: &RecordSet, evi_min: f64) -> BTreeSet<String> {
    dataset_max_evi(set, Evi::Ari)
        .into_iter()
        .filter(|(_, m)| m.is_some_and(|m| m > evi_min))
        .map(|(d, _)| d)
        .collect()
}

/// The records of the given datasets only.
pub fn filter_datasets(set: &RecordSet, keep: &BTreeSet<String>) -> RecordSet {
    RecordSet {
        schema: set.schema.clone(),
        records: set
            .records
            .iter()
            .filter(|r| keep.contains(&r.dataset))
            .cloned()
            .collect(),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

/// Writes `bias.csv`, `bias_tests.csv`, `success_rates.csv`,
/// `median_correlations.csv` and `thresholded_datasets.csv` into `out`.
/// When `restrict` is set, every aggregation except the threshold listing
/// uses only the datasets whose best ARI exceeds `threshold`.
pub fn write_reports(
    set: &RecordSet,
    out: &Path,
    threshold: f64,
    restrict: bool,
) -> Result<Vec<String>, HarnessError> {
    fs::create_dir_all(out).map_err(|source| HarnessError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let open = |name: &str| -> Result<csv::Writer<fs::File>, HarnessError> {
        let path = out.join(name);
        let file = fs::File::create(&path).map_err(|source| HarnessError::Io { path, source })?;
        Ok(csv::Writer::from_writer(file))
    };
    let retained = threshold_datasets(set, threshold);
    let filtered;
    let data = if restrict {
        filtered = filter_datasets(set, &retained);
        &filtered
    } else {
        set
    };

    let bias = aggregate_bias(data);
    let mut w = open("bias.csv")?;
    w.write_record([
        "dataset",
        "rvi",
        "paradigm",
        "partitions",
        "mean_owm",
        "reference",
    ])?;
    for r in &bias {
        w.write_record([
            r.dataset.clone(),
            r.rvi.clone(),
            r.paradigm.clone(),
            r.partitions.to_string(),
            r.mean_owm.to_string(),
            r.reference.to_string(),
        ])?;
    }
    w.flush().map_err(|e| HarnessError::Csv(e.into()))?;

    let mut w = open("bias_tests.csv")?;
    w.write_record([
        "rvi",
        "paradigm",
        "samples",
        "mean",
        "reference",
        "p_greater",
        "p_less",
    ])?;
    for t in bias_tests(&bias) {
        w.write_record([
            t.rvi,
            t.paradigm,
            t.samples.to_string(),
            t.mean.to_string(),
            t.reference.to_string(),
            opt(t.p_greater),
            opt(t.p_less),
        ])?;
    }
    w.flush().map_err(|e| HarnessError::Csv(e.into()))?;

    let mut w = open("success_rates.csv")?;
    w.write_record(["task", "evi", "rvi", "scheme", "slices", "rate"])?;
    for task in Task::ALL {
        for evi in Evi::ALL {
            for r in success_rates(data, task, evi) {
                w.write_record([
                    task.name(),
                    evi.name(),
                    &r.rvi,
                    &r.scheme,
                    &r.slices.to_string(),
                    &opt(r.rate),
                ])?;
            }
        }
    }
    w.flush().map_err(|e| HarnessError::Csv(e.into()))?;

    let mut w = open("median_correlations.csv")?;
    w.write_record([
        "task",
        "evi",
        "rvi",
        "scheme",
        "datasets",
        "correlations",
        "undefined",
        "median",
    ])?;
    for task in Task::ALL {
        for evi in Evi::ALL {
            for r in median_correlations(data, task, evi) {
                w.write_record([
                    task.name(),
                    evi.name(),
                    &r.rvi,
                    &r.scheme,
                    &r.datasets.to_string(),
                    &r.correlations.to_string(),
                    &r.undefined.to_string(),
                    &opt(r.median),
                ])?;
            }
        }
    }
    w.flush().map_err(|e| HarnessError::Csv(e.into()))?;

    let mut w = open("thresholded_datasets.csv")?;
    w.write_record(["dataset", "max_ari", "retained"])?;
    for (d, m) in dataset_max_evi(set, Evi::Ari) {
        let keep = u8::from(retained.contains(&d)).to_string();
        w.write_record([d, opt(m), keep])?;
    }
    w.flush().map_err(|e| HarnessError::Csv(e.into()))?;

    Ok([
        "bias.csv",
        "bias_tests.csv",
        "success_rates.csv",
        "median_correlations.csv",
        "thresholded_datasets.csv",
    ]
    .map(String::from)
    .to_vec())
}
