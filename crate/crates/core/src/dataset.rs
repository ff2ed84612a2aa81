//! Labelled datasets: file ingestion, normalisation, synthetic Gaussian
//! batteries and controlled label degradation.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Errors raised while loading or generating datasets.
#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: file contains no data rows")]
    Empty { path: PathBuf },
    #[error("{path}:{line}: ragged row, expected {expected} values but found {found}")]
    RaggedRow {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{path}:{line}:{column}: non-numeric cell {cell:?}")]
    NonNumeric {
        path: PathBuf,
        line: usize,
        column: usize,
        cell: String,
    },
    #[error("{path}:{line}:{column}: non-finite value {cell:?}")]
    NonFinite {
        path: PathBuf,
        line: usize,
        column: usize,
        cell: String,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("dataset needs at least 2 objects and 1 value per object, got {n}x{d}")]
    TooSmall { n: usize, d: usize },
    #[error("label file {path} has {found} labels, data has {expected} rows")]
    LabelCountMismatch {
        path: PathBuf,
        expected: usize,
        found: usize,
    },
    #[error("k_star = {k_star} exceeds n_objects = {n_objects}")]
    TooManyClusters { k_star: usize, n_objects: usize },
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
}

/// Whether rows are unordered feature vectors or equal-length series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    FeatureVectors,
    TimeSeries,
}

/// Dense row-major `n x d` matrix of finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<f64>,
    n: usize,
    d: usize,
    kind: DataKind,
}

impl DataMatrix {
    pub fn new(values: Vec<f64>, n: usize, d: usize, kind: DataKind) -> Result<Self, DatasetError> {
        if n < 2 || d < 1 || values.len() != n * d {
            return Err(DatasetError::TooSmall { n, d });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(DatasetError::NonFinite {
                path: PathBuf::new(),
                line: pos / d + 1,
                column: pos % d + 1,
                cell: values[pos].to_string(),
            });
        }
        Ok(Self { values, n, d, kind })
    }

    pub fn from_rows(rows: &[Vec<f64>], kind: DataKind) -> Result<Self, DatasetError> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            let (line, r) = rows.iter().enumerate().find(|(_, r)| r.len() != d).unwrap();
            return Err(DatasetError::RaggedRow {
                path: PathBuf::new(),
                line: line + 1,
                expected: d,
                found: r.len(),
            });
        }
        Self::new(rows.concat(), rows.len(), d, kind)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> DataKind {
        self.kind
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.d)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// One or more ground-truth labellings of the same objects.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabelSet {
    labellings: Vec<Vec<usize>>,
    cluster_counts: Vec<usize>,
}

impl LabelSet {
    /// Adds a labelling, remapping arbitrary integer labels to `0..k`
    /// in ascending order of the original values.
    pub fn push_raw(&mut self, raw: &[i64]) {
        let (labels, k) = remap_labels(raw);
        self.labellings.push(labels);
        self.cluster_counts.push(k);
    }

    pub fn from_labellings(labellings: Vec<Vec<usize>>) -> Self {
        let mut set = Self::default();
        for l in labellings {
            let raw: Vec<i64> = l.iter().map(|&v| v as i64).collect();
            set.push_raw(&raw);
        }
        set
    }

    pub fn labellings(&self) -> &[Vec<usize>] {
        &self.labellings
    }

    pub fn cluster_counts(&self) -> &[usize] {
        &self.cluster_counts
    }

    pub fn is_empty(&self) -> bool {
        self.labellings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.labellings.len()
    }
}

fn remap_labels(raw: &[i64]) -> (Vec<usize>, usize) {
    let mut map = BTreeMap::new();
    for &v in raw {
        map.entry(v).or_insert(0usize);
    }
    for (idx, slot) in map.values_mut().enumerate() {
        *slot = idx;
    }
    (raw.iter().map(|v| map[v]).collect(), map.len())
}

/// Supported on-disk dataset layouts.
#[derive(Debug, Clone, PartialEq)]
pub enum InputFormat {
    /// Tab-separated; first field is the integer class label.
    UcrTsv,
    /// Comma-separated with a header whose final column is `label`.
    CsvWithLabels,
    /// Whitespace-delimited matrix plus one label file per labelling.
    MatrixPlusLabelFiles {
        label_files: Vec<PathBuf>,
        kind: DataKind,
    },
}

pub fn load_matrix(
    path: &Path,
    format: &InputFormat,
) -> Result<(DataMatrix, LabelSet), DatasetError> {
    let text = fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    match format {
        InputFormat::UcrTsv => parse_labelled(path, &text, '\t', false, DataKind::TimeSeries),
        InputFormat::CsvWithLabels => {
            parse_labelled(path, &text, ',', true, DataKind::FeatureVectors)
        }
        InputFormat::MatrixPlusLabelFiles { label_files, kind } => {
            let rows = parse_matrix(path, &text)?;
            let data = with_path(DataMatrix::from_rows(&rows, *kind), path)?;
            let mut labels = LabelSet::default();
            for lf in label_files {
                let raw = load_label_file(lf)?;
                if raw.len() != data.n() {
                    return Err(DatasetError::LabelCountMismatch {
                        path: lf.clone(),
                        expected: data.n(),
                        found: raw.len(),
                    });
                }
                labels.push_raw(&raw);
            }
            Ok((data, labels))
        }
    }
}

fn with_path<T>(r: Result<T, DatasetError>, path: &Path) -> Result<T, DatasetError> {
    r.map_err(|e| match e {
        DatasetError::RaggedRow {
            line,
            expected,
            found,
            ..
        } => DatasetError::RaggedRow {
            path: path.to_path_buf(),
            line,
            expected,
            found,
        },
        DatasetError::NonFinite {
            line, column, cell, ..
        } => DatasetError::NonFinite {
            path: path.to_path_buf(),
            line,
            column,
            cell,
        },
        other => other,
    })
}

fn parse_value(path: &Path, line: usize, column: usize, cell: &str) -> Result<f64, DatasetError> {
    let cell = cell.trim();
    let v: f64 = cell.parse().map_err(|_| DatasetError::NonNumeric {
        path: path.to_path_buf(),
        line,
        column,
        cell: cell.to_string(),
    })?;
    if !v.is_finite() {
        return Err(DatasetError::NonFinite {
            path: path.to_path_buf(),
            line,
            column,
            cell: cell.to_string(),
        });
    }
    Ok(v)
}

fn parse_label(path: &Path, line: usize, column: usize, cell: &str) -> Result<i64, DatasetError> {
    let cell = cell.trim();
    if let Ok(v) = cell.parse::<i64>() {
        return Ok(v);
    }
    // Older archive files store labels as floats, e.g. "1.0000000e+00".
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() && v.fract() == 0.0 => Ok(v as i64),
        _ => Err(DatasetError::NonNumeric {
            path: path.to_path_buf(),
            line,
            column,
            cell: cell.to_string(),
        }),
    }
}

fn parse_labelled(
    path: &Path,
    text: &str,
    sep: char,
    header: bool,
    kind: DataKind,
) -> Result<(DataMatrix, LabelSet), DatasetError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let label_first = !header;
    if header {
        let (ln, h) = lines.next().ok_or_else(|| DatasetError::Empty {
            path: path.to_path_buf(),
        })?;
        let last = h.split(sep).last().unwrap_or("").trim();
        if last != "label" {
            return Err(DatasetError::Parse {
                path: path.to_path_buf(),
                line: ln + 1,
                message: format!("final header column must be \"label\", found {last:?}"),
            });
        }
    }
    let mut rows = Vec::new();
    let mut raw_labels = Vec::new();
    let mut width = None;
    for (ln, line) in lines {
        let line_no = ln + 1;
        let cells: Vec<&str> = line.trim_end_matches('\r').split(sep).collect();
        if cells.len() < 2 {
            return Err(DatasetError::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: "row needs a label and at least one value".into(),
            });
        }
        let expected = *width.get_or_insert(cells.len());
        if cells.len() != expected {
            return Err(DatasetError::RaggedRow {
                path: path.to_path_buf(),
                line: line_no,
                expected: expected - 1,
                found: cells.len() - 1,
            });
        }
        let (label_col, value_cells) = if label_first {
            (1, &cells[1..])
        } else {
            (cells.len(), &cells[..cells.len() - 1])
        };
        let label_cell = if label_first {
            cells[0]
        } else {
            cells[cells.len() - 1]
        };
        raw_labels.push(parse_label(path, line_no, label_col, label_cell)?);
        let offset = usize::from(label_first);
        let row = value_cells
            .iter()
            .enumerate()
            .map(|(c, cell)| parse_value(path, line_no, c + 1 + offset, cell))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(DatasetError::Empty {
            path: path.to_path_buf(),
        });
    }
    let data = with_path(DataMatrix::from_rows(&rows, kind), path)?;
    let mut labels = LabelSet::default();
    labels.push_raw(&raw_labels);
    Ok((data, labels))
}

fn parse_matrix(path: &Path, text: &str) -> Result<Vec<Vec<f64>>, DatasetError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .enumerate()
            .map(|(c, cell)| parse_value(path, ln + 1, c + 1, cell))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(DatasetError::RaggedRow {
                    path: path.to_path_buf(),
                    line: ln + 1,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(DatasetError::Empty {
            path: path.to_path_buf(),
        });
    }
    Ok(rows)
}

pub fn load_label_file(path: &Path) -> Result<Vec<i64>, DatasetError> {
    let text = fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let labels = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(ln, l)| parse_label(path, ln + 1, 1, l))
        .collect::<Result<Vec<_>, _>>()?;
    if labels.is_empty() {
        return Err(DatasetError::Empty {
            path: path.to_path_buf(),
        });
    }
    Ok(labels)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "procedure")]
pub enum Normalisation {
    ZNorm,
    MinMax,
    UnitNorm { p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    PerFeature,
    PerObject,
}

impl Axis {
    /// Feature vectors are normalised per column, series per row.
    pub fn default_for(kind: DataKind) -> Self {
        match kind {
            DataKind::FeatureVectors => Axis::PerFeature,
            DataKind::TimeSeries => Axis::PerObject,
        }
    }
}

/// Normalises every slice along `axis`. Constant slices map to zeros under
/// z-normalisation and min-max scaling; all-zero slices stay zero under the
/// unit-norm procedure. Standard deviations are population (divide by n).
pub fn normalise(data: &DataMatrix, procedure: Normalisation, axis: Axis) -> DataMatrix {
    let (n, d) = (data.n, data.d);
    let mut out = data.values.clone();
    let (slices, len) = match axis {
        Axis::PerObject => (n, d),
        Axis::PerFeature => (d, n),
    };
    let index = |s: usize, t: usize| match axis {
        Axis::PerObject => s * d + t,
        Axis::PerFeature => t * d + s,
    };
    let mut buf = vec![0.0; len];
    for s in 0..slices {
        for (t, b) in buf.iter_mut().enumerate() {
            *b = out[index(s, t)];
        }
        normalise_slice(&mut buf, procedure);
        for (t, b) in buf.iter().enumerate() {
            out[index(s, t)] = *b;
        }
    }
    DataMatrix {
        values: out,
        n,
        d,
        kind: data.kind,
    }
}

fn normalise_slice(x: &mut [f64], procedure: Normalisation) {
    let len = x.len() as f64;
    match procedure {
        Normalisation::ZNorm => {
            let mean = x.iter().sum::<f64>() / len;
            let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / len;
            let sd = var.sqrt();
            if sd == 0.0 || !sd.is_finite() {
                x.fill(0.0);
            } else {
                x.iter_mut().for_each(|v| *v = (*v - mean) / sd);
            }
        }
        Normalisation::MinMax => {
            let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                x.iter_mut().for_each(|v| *v = (*v - lo) / (hi - lo));
            } else {
                x.fill(0.0);
            }
        }
        Normalisation::UnitNorm { p } => {
            let norm = x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p);
            if norm > 0.0 {
                x.iter_mut().for_each(|v| *v /= norm);
            }
        }
    }
}

/// How objects are distributed between the generated clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Balance {
    Balanced,
    SmallCluster10Pct,
    DominantCluster,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VendraminConfig {
    pub n_objects: usize,
    pub dims: usize,
    pub k_star: usize,
    pub balance: Balance,
    pub seed: u64,
}

/// Minimum distance between generated cluster means, in units of sigma.
pub const MEAN_SEPARATION: f64 = 6.0;
/// Per-coordinate truncation radius of the within-cluster normal, in sigma.
pub const TRUNCATION: f64 = 1.5;

pub(crate) fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Cluster sizes for a balance mode. The first cluster is the special one
/// (10% or dominant); remaining objects are spread as evenly as possible.
pub fn cluster_sizes(n: usize, k: usize, balance: Balance) -> Vec<usize> {
    fn even(total: usize, parts: usize) -> Vec<usize> {
        (0..parts)
            .map(|j| total / parts + usize::from(j < total % parts))
            .collect()
    }
    if k == 1 {
        return vec![n];
    }
    let special = match balance {
        Balance::Balanced => return even(n, k),
        Balance::SmallCluster10Pct => round_half_up(0.1 * n as f64),
        // 60% for small k*, 20% once k* reaches 12.
        Balance::DominantCluster if k < 12 => round_half_up(0.6 * n as f64),
        Balance::DominantCluster => round_half_up(0.2 * n as f64),
    };
    let special = special.clamp(1, n - (k - 1));
    let mut sizes = vec![special];
    sizes.extend(even(n - special, k - 1));
    sizes
}

/// Draws well-separated, compact Gaussian clusters: means uniform in a
/// hypercube with pairwise separation at least [`MEAN_SEPARATION`], unit
/// diagonal covariance, every coordinate truncated to [`TRUNCATION`] by
/// rejection. Rows are grouped by cluster; output is a pure function of
/// the config.
pub fn generate_vendramin(
    config: &VendraminConfig,
) -> Result<(DataMatrix, LabelSet), DatasetError> {
    let VendraminConfig {
        n_objects: n,
        dims,
        k_star: k,
        balance,
        seed,
    } = *config;
    if k > n {
        return Err(DatasetError::TooManyClusters {
            k_star: k,
            n_objects: n,
        });
    }
    if k == 0 || dims == 0 || n < 2 {
        return Err(DatasetError::InvalidConfig(format!(
            "n_objects={n}, dims={dims}, k_star={k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let means = place_means(&mut rng, k, dims);
    let sizes = cluster_sizes(n, k, balance);

    let mut values = Vec::with_capacity(n * dims);
    let mut labels = Vec::with_capacity(n);
    for (j, (&size, mean)) in sizes.iter().zip(&means).enumerate() {
        for _ in 0..size {
            for &m in mean {
                let z = loop {
                    let z: f64 = rng.sample(StandardNormal);
                    if z.abs() <= TRUNCATION {
                        break z;
                    }
                };
                values.push(m + z);
            }
            labels.push(j);
        }
    }
    let data = DataMatrix::new(values, n, dims, DataKind::FeatureVectors)?;
    Ok((data, LabelSet::from_labellings(vec![labels])))
}

fn place_means(rng: &mut ChaCha8Rng, k: usize, dims: usize) -> Vec<Vec<f64>> {
    // Offset keeps every truncated coordinate strictly positive, which the
    // Canberra and Bray-Curtis measures need to behave.
    let offset = TRUNCATION + 1.5;
    let mut side = 2.0 * MEAN_SEPARATION * (k as f64).powf(1.0 / dims as f64);
    'restart: loop {
        let mut means: Vec<Vec<f64>> = Vec::with_capacity(k);
        while means.len() < k {
            let mut placed = false;
            for _ in 0..10_000 {
                let cand: Vec<f64> = (0..dims)
                    .map(|_| offset + rng.random::<f64>() * side)
                    .collect();
                let ok = means.iter().all(|m| {
                    m.iter()
                        .zip(&cand)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                        >= MEAN_SEPARATION
                });
                if ok {
                    means.push(cand);
                    placed = true;
                    break;
                }
            }
            if !placed {
                side *= 1.25;
                continue 'restart;
            }
        }
        return means;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegradeMode {
    Shuffle,
    Replace,
}

/// Tampers with `round(fraction * n)` positions chosen uniformly without
/// replacement. Shuffle permutes the chosen values among themselves; replace
/// draws fresh labels uniformly from `0..k*` where `k* = max label + 1`.
pub fn degrade_labels<R: Rng + ?Sized>(
    labels: &[usize],
    fraction: f64,
    mode: DegradeMode,
    rng: &mut R,
) -> Vec<usize> {
    let n = labels.len();
    let count = round_half_up(fraction.clamp(0.0, 1.0) * n as f64).min(n);
    let mut out = labels.to_vec();
    if count == 0 {
        return out;
    }
    let positions = sample(rng, n, count).into_vec();
    match mode {
        DegradeMode::Shuffle => {
            let mut vals: Vec<usize> = positions.iter().map(|&p| labels[p]).collect();
            vals.shuffle(rng);
            for (&p, v) in positions.iter().zip(vals) {
                out[p] = v;
            }
        }
        DegradeMode::Replace => {
            let k = labels.iter().max().map_or(1, |m| m + 1);
            for &p in &positions {
                out[p] = rng.random_range(0..k);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn ucr_tsv_parses_and_remaps() {
        let f = write_tmp("1\t0.0\t1.0\n2\t5.0\t6.0\n1\t0.1\t1.1\n");
        let (data, labels) = load_matrix(f.path(), &InputFormat::UcrTsv).unwrap();
        assert_eq!((data.n(), data.width()), (3, 2));
        assert_eq!(data.kind(), DataKind::TimeSeries);
        assert_eq!(labels.labellings()[0], vec![0, 1, 0]);
        assert_eq!(data.row(1), &[5.0, 6.0]);
    }

    #[test]
    fn ragged_row_is_reported_with_line() {
        let f = write_tmp("1\t0.0\t1.0\n2\t5.0\n");
        match load_matrix(f.path(), &InputFormat::UcrTsv) {
            Err(DatasetError::RaggedRow {
                line,
                expected,
                found,
                ..
            }) => {
                assert_eq!((line, expected, found), (2, 2, 1));
            }
            other => panic!("expected ragged row, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_and_empty_are_distinct_errors() {
        let f = write_tmp("1\t0.0\tabc\n");
        assert!(matches!(
            load_matrix(f.path(), &InputFormat::UcrTsv),
            Err(DatasetError::NonNumeric {
                line: 1,
                column: 3,
                ..
            })
        ));
        let f = write_tmp("\n\n");
        assert!(matches!(
            load_matrix(f.path(), &InputFormat::UcrTsv),
            Err(DatasetError::Empty { .. })
        ));
        let f = write_tmp("1\t0.0\tNaN\n2\t1.0\t2.0\n");
        assert!(matches!(
            load_matrix(f.path(), &InputFormat::UcrTsv),
            Err(DatasetError::NonFinite { .. })
        ));
    }

    #[test]
    fn csv_labels_remapped() {
        let f = write_tmp("a,b,label\n1,2,7\n3,4,7\n5,6,9\n");
        let (data, labels) = load_matrix(f.path(), &InputFormat::CsvWithLabels).unwrap();
        assert_eq!(data.kind(), DataKind::FeatureVectors);
        assert_eq!(labels.labellings()[0], vec![0, 0, 1]);
        assert_eq!(labels.cluster_counts(), &[2]);
    }

    #[test]
    fn csv_requires_label_column() {
        let f = write_tmp("a,b,c\n1,2,7\n3,4,7\n");
        assert!(matches!(
            load_matrix(f.path(), &InputFormat::CsvWithLabels),
            Err(DatasetError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn matrix_with_two_labellings() {
        let m = write_tmp("0 1\n2 3\n4   5\n");
        let l1 = write_tmp("3\n3\n1\n");
        let l2 = write_tmp("0\n1\n2\n");
        let fmt = InputFormat::MatrixPlusLabelFiles {
            label_files: vec![l1.path().into(), l2.path().into()],
            kind: DataKind::FeatureVectors,
        };
        let (data, labels) = load_matrix(m.path(), &fmt).unwrap();
        assert_eq!(data.n(), 3);
        assert_eq!(labels.labellings(), &[vec![1, 1, 0], vec![0, 1, 2]]);
        let short = write_tmp("1\n2\n");
        let fmt = InputFormat::MatrixPlusLabelFiles {
            label_files: vec![short.path().into()],
            kind: DataKind::FeatureVectors,
        };
        assert!(matches!(
            load_matrix(m.path(), &fmt),
            Err(DatasetError::LabelCountMismatch { .. })
        ));
    }

    #[test]
    fn znorm_per_object() {
        let d = DataMatrix::from_rows(
            &[vec![1.0, 2.0, 3.0], vec![0.0, 0.0, 1.0]],
            DataKind::TimeSeries,
        )
        .unwrap();
        let z = normalise(&d, Normalisation::ZNorm, Axis::PerObject);
        let expect = 1.5f64.sqrt(); // 1 / sqrt(2/3)
        assert!((z.row(0)[0] + expect).abs() < 1e-12);
        assert_eq!(z.row(0)[1], 0.0);
        assert!((z.row(0)[2] - expect).abs() < 1e-12);
        assert!((expect - 1.224_744_871).abs() < 1e-9);
    }

    #[test]
    fn degenerate_slices() {
        let d = DataMatrix::from_rows(
            &[vec![5.0, 5.0, 5.0], vec![3.0, 4.0, 0.0]],
            DataKind::TimeSeries,
        )
        .unwrap();
        let mm = normalise(&d, Normalisation::MinMax, Axis::PerObject);
        assert_eq!(mm.row(0), &[0.0, 0.0, 0.0]);
        let z = normalise(&d, Normalisation::ZNorm, Axis::PerObject);
        assert_eq!(z.row(0), &[0.0, 0.0, 0.0]);
        let u = normalise(&d, Normalisation::UnitNorm { p: 2.0 }, Axis::PerObject);
        assert!((u.row(1)[0] - 0.6).abs() < 1e-15 && (u.row(1)[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn per_feature_axis_normalises_columns() {
        let d = DataMatrix::from_rows(
            &[vec![0.0, 10.0], vec![2.0, 10.0], vec![4.0, 10.0]],
            DataKind::FeatureVectors,
        )
        .unwrap();
        let mm = normalise(&d, Normalisation::MinMax, Axis::PerFeature);
        assert_eq!(mm.values(), &[0.0, 0.0, 0.5, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn vendramin_sizes() {
        let cfg = VendraminConfig {
            n_objects: 500,
            dims: 2,
            k_star: 4,
            balance: Balance::Balanced,
            seed: 1,
        };
        let (data, labels) = generate_vendramin(&cfg).unwrap();
        assert_eq!(data.n(), 500);
        let mut counts = vec![0; 4];
        labels.labellings()[0].iter().for_each(|&l| counts[l] += 1);
        assert_eq!(counts, vec![125; 4]);

        for k in [2, 4, 6] {
            let sizes = cluster_sizes(500, k, Balance::DominantCluster);
            assert_eq!(sizes[0], 300);
            assert_eq!(sizes.iter().sum::<usize>(), 500);
        }
        assert_eq!(cluster_sizes(500, 14, Balance::DominantCluster)[0], 100);
        assert_eq!(
            cluster_sizes(500, 4, Balance::SmallCluster10Pct),
            vec![50, 150, 150, 150]
        );
        assert_eq!(cluster_sizes(7, 3, Balance::Balanced), vec![3, 2, 2]);
    }

    #[test]
    fn vendramin_is_deterministic_and_positive() {
        let cfg = VendraminConfig {
            n_objects: 200,
            dims: 3,
            k_star: 6,
            balance: Balance::DominantCluster,
            seed: 9,
        };
        let a = generate_vendramin(&cfg).unwrap();
        let b = generate_vendramin(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.0.values().iter().all(|&v| v > 0.0));
        let other = generate_vendramin(&VendraminConfig { seed: 10, ..cfg }).unwrap();
        assert_ne!(a.0, other.0);
    }

    #[test]
    fn vendramin_rejects_too_many_clusters() {
        let cfg = VendraminConfig {
            n_objects: 3,
            dims: 2,
            k_star: 4,
            balance: Balance::Balanced,
            seed: 0,
        };
        assert!(matches!(
            generate_vendramin(&cfg),
            Err(DatasetError::TooManyClusters { .. })
        ));
    }

    #[test]
    fn degrade_edge_fractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let labels: Vec<usize> = (0..40).map(|i| i % 4).collect();
        assert_eq!(
            degrade_labels(&labels, 0.0, DegradeMode::Shuffle, &mut rng),
            labels
        );
        assert_eq!(
            degrade_labels(&labels, 0.0, DegradeMode::Replace, &mut rng),
            labels
        );
        let mut shuffled = degrade_labels(&labels, 1.0, DegradeMode::Shuffle, &mut rng);
        assert_ne!(shuffled, labels);
        shuffled.sort_unstable();
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        assert_eq!(shuffled, sorted);
        let replaced = degrade_labels(&labels, 1.0, DegradeMode::Replace, &mut rng);
        assert!(replaced.iter().all(|&l| l < 4));
    }

    #[test]
    fn degrade_touches_rounded_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let labels = vec![0usize; 10];
        // Replace on an all-zero labelling with k*=1 never changes values, so
        // count via a labelling where every position is unique.
        let unique: Vec<usize> = (0..10).collect();
        let out = degrade_labels(&unique, 0.25, DegradeMode::Shuffle, &mut rng);
        let changed = out.iter().zip(&unique).filter(|(a, b)| a != b).count();
        assert!(changed <= 3); // round(2.5) = 3 positions selected
        assert_eq!(
            degrade_labels(&labels, 0.5, DegradeMode::Replace, &mut rng),
            labels
        );
    }

    proptest::proptest! {
        #[test]
        fn znorm_idempotent(rows in proptest::collection::vec(proptest::collection::vec(-100.0f64..100.0, 5), 2..6)) {
            let d = DataMatrix::from_rows(&rows, DataKind::TimeSeries).unwrap();
            let once = normalise(&d, Normalisation::ZNorm, Axis::PerObject);
            let twice = normalise(&once, Normalisation::ZNorm, Axis::PerObject);
            for (a, b) in once.values().iter().zip(twice.values()) {
                proptest::prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn shuffle_preserves_multiset(labels in proptest::collection::vec(0usize..5, 1..60), frac in 0.0f64..=1.0, seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = degrade_labels(&labels, frac, DegradeMode::Shuffle, &mut rng);
            let mut inp = labels.clone();
            out.sort_unstable();
            inp.sort_unstable();
            proptest::prop_assert_eq!(out, inp);
        }

        #[test]
        fn generated_sizes_sum(n in 20usize..300, k in 1usize..8, b in 0usize..3) {
            let balance = [Balance::Balanced, Balance::SmallCluster10Pct, Balance::DominantCluster][b];
            let sizes = cluster_sizes(n, k, balance);
            proptest::prop_assert_eq!(sizes.len(), k);
            proptest::prop_assert_eq!(sizes.iter().sum::<usize>(), n);
            proptest::prop_assert!(sizes.iter().all(|&s| s >= 1));
        }
    }
}
