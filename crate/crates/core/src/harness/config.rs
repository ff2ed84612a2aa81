//! Experiment configuration, read from TOML.
//!
//! ```toml
//! schema_version = 1
//! seed = 42
//! rvis = ["swc", "aucc"]          # optional, defaults to all seven
//! tie_mode = "random"             # or "lowest_index"
//! pbm_scalings = ["max", "global"] # optional extra PBM variants
//!
//! [k_range]
//! rule = "fixed_range"            # or "window21" / "window11"
//! min = 2
//! max = 12
//!
//! [[datasets]]
//! name = "blobs"
//! source = "vendramin"
//! n_objects = 200
//! dims = 2
//! k_star = 4
//! balance = "balanced"
//! seed = 1
//!
//! [[datasets]]
//! name = "gunpoint"
//! source = "file"
//! path = "GunPoint_TRAIN.tsv"
//! format = "ucr_tsv"
//!
//! [vendramin_battery]             # optional, expands to generated datasets
//! count = 20
//! n_objects = 200
//! dims = [2, 3]
//! k_star = [2, 4, 6]
//! balance = ["balanced"]
//! seed = 7
//!
//! [[paradigms]]
//! name = "ED"
//! measure = "euclidean"
//! normalisation = { procedure = "z_norm" }   # optional
//!
//! [[paradigms]]
//! name = "DTW"
//! measure = "dtw"
//! window_frac = 0.1
//!
//! [[algorithms]]
//! kind = "agglomerative"
//! linkage = "ward"
//!
//! [[algorithms]]
//! kind = "pam"
//! n_init = 30
//! max_iter = 100
//! ```

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::dataset::{
    generate_vendramin, load_matrix, Axis, Balance, DataKind, DataMatrix, InputFormat, LabelSet,
    Normalisation, VendraminConfig,
};
use crate::distances::Measure;
use crate::partitions::{Linkage, TieMode};
use crate::rvi::RviKind;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "all_rvis")]
    pub rvis: Vec<RviKind>,
    #[serde(default = "default_tie_mode")]
    pub tie_mode: TieMode,
    #[serde(default)]
    pub pbm_scalings: Vec<Scaling>,
    pub k_range: KRule,
    #[serde(default)]
    pub datasets: Vec<DatasetSpec>,
    #[serde(default)]
    pub vendramin_battery: Option<BatterySpec>,
    pub paradigms: Vec<ParadigmSpec>,
    pub algorithms: Vec<AlgorithmSpec>,
}

fn all_rvis() -> Vec<RviKind> {
    RviKind::ALL.to_vec()
}

fn default_tie_mode() -> TieMode {
    TieMode::Random
}

/// Rescaling applied to each evaluating matrix before computing PBM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// Divide by the largest dissimilarity.
    Max,
    /// Divide by the total dissimilarity to the grand medoid.
    Global,
}

impl Scaling {
    pub fn name(self) -> &'static str {
        match self {
            Scaling::Max => "max",
            Scaling::Global => "global",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum KRule {
    FixedRange { min: usize, max: usize },
    Window21,
    Window11,
}

/// Inclusive k range for a dataset with the given ground-truth cluster
/// counts (one per labelling).
pub fn k_window(k_stars: &[usize], rule: KRule) -> Result<(usize, usize), HarnessError> {
    if let KRule::FixedRange { min, max } = rule {
        return Ok((min, max));
    }
    let lo = *k_stars
        .iter()
        .min()
        .ok_or_else(|| HarnessError::Config("k window needs a ground-truth k".into()))?;
    let hi = *k_stars.iter().max().expect("non-empty");
    let centre = (lo + hi).div_ceil(2);
    Ok(match rule {
        KRule::Window21 => ((centre.saturating_sub(10)).max(2), (centre + 10).max(22)),
        KRule::Window11 => ((centre.saturating_sub(5)).max(2), (centre + 5).max(12)),
        KRule::FixedRange { .. } => unreachable!(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetSpec {
    Vendramin {
        name: String,
        n_objects: usize,
        dims: usize,
        k_star: usize,
        #[serde(default = "default_balance")]
        balance: Balance,
        seed: u64,
    },
    File {
        name: String,
        path: PathBuf,
        format: FileFormat,
        #[serde(default)]
        label_files: Vec<PathBuf>,
        #[serde(default)]
        kind: Option<DataKind>,
    },
}

fn default_balance() -> Balance {
    Balance::Balanced
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileFormat {
    UcrTsv,
    CsvWithLabels,
    MatrixPlusLabels,
}

impl DatasetSpec {
    pub fn name(&self) -> &str {
        match self {
            DatasetSpec::Vendramin { name, .. } | DatasetSpec::File { name, .. } => name,
        }
    }

    /// Loads or generates the data; relative paths resolve against `base`.
    pub fn load(&self, base: &Path) -> Result<(DataMatrix, LabelSet), HarnessError> {
        let wrap = |e| HarnessError::Dataset {
            name: self.name().to_string(),
            source: e,
        };
        match self {
            DatasetSpec::Vendramin {
                n_objects,
                dims,
                k_star,
                balance,
                seed,
                ..
            } => generate_vendramin(&VendraminConfig {
                n_objects: *n_objects,
                dims: *dims,
                k_star: *k_star,
                balance: *balance,
                seed: *seed,
            })
            .map_err(wrap),
            DatasetSpec::File {
                path,
                format,
                label_files,
                kind,
                ..
            } => {
                let format = match format {
                    FileFormat::UcrTsv => InputFormat::UcrTsv,
                    FileFormat::CsvWithLabels => InputFormat::CsvWithLabels,
                    FileFormat::MatrixPlusLabels => InputFormat::MatrixPlusLabelFiles {
                        label_files: label_files.iter().map(|p| base.join(p)).collect(),
                        kind: kind.unwrap_or(DataKind::FeatureVectors),
                    },
                };
                load_matrix(&base.join(path), &format).map_err(wrap)
            }
        }
    }
}

/// Compact description of a generated battery. Dataset `i` takes
/// `dims[i % dims.len()]`, `k_star[(i / dims.len()) % k_star.len()]` and
/// `balance[i % balance.len()]`, so the first `dims.len() * k_star.len()`
/// datasets cover every dims/k_star combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatterySpec {
    pub count: usize,
    pub n_objects: usize,
    pub dims: Vec<usize>,
    pub k_star: Vec<usize>,
    #[serde(default = "default_balances")]
    pub balance: Vec<Balance>,
    pub seed: u64,
    #[serde(default = "default_prefix")]
    pub prefix: String,
}

fn default_balances() -> Vec<Balance> {
    vec![Balance::Balanced]
}

fn default_prefix() -> String {
    "vendramin".into()
}

impl BatterySpec {
    pub fn expand(&self) -> Vec<DatasetSpec> {
        (0..self.count)
            .map(|i| DatasetSpec::Vendramin {
                name: format!("{}-{:03}", self.prefix, i),
                n_objects: self.n_objects,
                dims: self.dims[i % self.dims.len()],
                k_star: self.k_star[(i / self.dims.len()) % self.k_star.len()],
                balance: self.balance[i % self.balance.len()],
                seed: self.seed.wrapping_mul(1_000_003).wrapping_add(i as u64),
            })
            .collect()
    }
}

/// A named similarity paradigm: optional normalisation plus a measure.
/// Measure fields sit at the top level of the table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParadigmSpec {
    pub name: String,
    #[serde(flatten)]
    pub measure: Measure,
    #[serde(default)]
    pub normalisation: Option<Normalisation>,
    #[serde(default)]
    pub axis: Option<Axis>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    Agglomerative {
        linkage: Linkage,
        #[serde(default)]
        name: Option<String>,
    },
    Pam {
        #[serde(default = "default_n_init")]
        n_init: usize,
        #[serde(default = "default_max_iter")]
        max_iter: usize,
        #[serde(default)]
        name: Option<String>,
    },
}

fn default_n_init() -> usize {
    30
}

fn default_max_iter() -> usize {
    100
}

impl AlgorithmSpec {
    pub fn name(&self) -> String {
        match self {
            AlgorithmSpec::Agglomerative { linkage, name } => {
                name.clone().unwrap_or_else(|| linkage.name().to_string())
            }
            AlgorithmSpec::Pam { name, .. } => name.clone().unwrap_or_else(|| "pam".to_string()),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let config: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Explicit datasets followed by any generated battery.
    pub fn all_datasets(&self) -> Vec<DatasetSpec> {
        let mut out = self.datasets.clone();
        if let Some(b) = &self.vendramin_battery {
            out.extend(b.expand());
        }
        out
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        let datasets = self.all_datasets();
        if datasets.is_empty() {
            return bad("no datasets configured".into());
        }
        if self.paradigms.is_empty() || self.algorithms.is_empty() || self.rvis.is_empty() {
            return bad("need at least one paradigm, algorithm and index".into());
        }
        unique("dataset", datasets.iter().map(|d| d.name().to_string()))?;
        unique("paradigm", self.paradigms.iter().map(|p| p.name.clone()))?;
        unique("algorithm", self.algorithms.iter().map(AlgorithmSpec::name))?;
        unique("index", self.rvis.iter().map(|r| r.name().to_string()))?;
        for p in &self.paradigms {
            if p.name.is_empty()
                || p.name.contains([',', '"', '\n'])
                || p.name == "mean"
                || p.name == "match"
            {
                return bad(format!(
                    "paradigm name {:?} is empty, reserved or contains a delimiter",
                    p.name
                ));
            }
            p.measure
                .validate()
                .map_err(|e| HarnessError::Config(format!("paradigm {}: {e}", p.name)))?;
        }
        for d in &datasets {
            if d.name().is_empty() || d.name().contains([',', '"', '\n']) {
                return bad(format!(
                    "dataset name {:?} is empty or contains a delimiter",
                    d.name()
                ));
            }
        }
        if let Some(b) = &self.vendramin_battery {
            if b.dims.is_empty() || b.k_star.is_empty() || b.balance.is_empty() {
                return bad("vendramin_battery lists must be non-empty".into());
            }
        }
        for a in &self.algorithms {
            if let AlgorithmSpec::Pam {
                n_init, max_iter, ..
            } = a
            {
                if *n_init == 0 || *max_iter == 0 {
                    return bad("pam needs n_init >= 1 and max_iter >= 1".into());
                }
            }
        }
        if let KRule::FixedRange { min, max } = self.k_range {
            if min < 2 || max < min {
                return bad(format!(
                    "k range [{min}, {max}] must satisfy 2 <= min <= max"
                ));
            }
        }
        if !self.pbm_scalings.is_empty() && !self.rvis.contains(&RviKind::Pbm) {
            return bad("pbm_scalings requires pbm in rvis".into());
        }
        Ok(())
    }
}

fn unique(what: &str, names: impl Iterator<Item = String>) -> Result<(), HarnessError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.clone()) {
            return Err(HarnessError::Config(format!("duplicate {what} name {n:?}")));
        }
    }
    Ok(())
}
