//! Hard partitions and the procedures that produce them: agglomerative
//! clustering, PAM k-medoids, uniform random set partitions, plus medoid
//! prototype extraction.

mod agglomerative;
mod pam;
mod sampling;

use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distances::DistanceMatrix;

pub use agglomerative::{agglomerative, linkage, Dendrogram, Linkage, Merge};
pub use pam::{kmedoids_pam, pam_run, PamInit, PamResult, PamRun};
pub use sampling::{
    bell_number, log_stirling2, sample_partition_fixed_k, sample_partition_uniform, stirling2,
};

#[derive(Debug, thiserror::Error)]
pub enum PartitionError {
    #[error("k = {k} is outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("partition has {partition} objects, matrix has {matrix}")]
    SizeMismatch { partition: usize, matrix: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: cannot parse label {cell:?}")]
    Parse { line: usize, cell: String },
}

/// A hard assignment of `n` objects to `k` non-empty clusters. Labels are
/// always canonical: clusters are numbered `0..k` by first appearance, so
/// equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Canonicalises arbitrary labels.
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|&l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Self {
            labels,
            k: map.len(),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Members of each cluster, in ascending object order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    pub fn write_labels<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for l in &self.labels {
            writeln!(w, "{l}")?;
        }
        Ok(())
    }

    pub fn read_labels<R: BufRead>(r: R) -> Result<Self, PartitionError> {
        let mut raw = Vec::new();
        for (ln, line) in r.lines().enumerate() {
            let line = line?;
            let cell = line.trim();
            if cell.is_empty() {
                continue;
            }
            let v: i64 = cell.parse().map_err(|_| PartitionError::Parse {
                line: ln + 1,
                cell: cell.to_string(),
            })?;
            raw.push(v);
        }
        let mut sorted = raw.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let mapped: Vec<usize> = raw
            .iter()
            .map(|v| sorted.binary_search(v).unwrap())
            .collect();
        Ok(Self::from_labels(&mapped))
    }

    /// Renders the labels as a single CSV column with the given header.
    pub fn to_csv_column(&self, header: &str) -> String {
        let mut s = String::from(header);
        s.push('\n');
        for l in &self.labels {
            s.push_str(&l.to_string());
            s.push('\n');
        }
        s
    }
}

/// How to resolve several objects sharing the minimal distance sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieMode {
    Random,
    LowestIndex,
}

/// One medoid per cluster (indexed by canonical label) plus the grand
/// medoid of the whole object set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrototypeSet {
    pub medoids: Vec<usize>,
    pub grand_medoid: usize,
}

fn pick_min<R: Rng + ?Sized>(
    candidates: impl Iterator<Item = (usize, f64)>,
    tie_mode: TieMode,
    rng: &mut R,
) -> usize {
    let mut best = f64::INFINITY;
    let mut ties: Vec<usize> = Vec::new();
    for (idx, sum) in candidates {
        if sum < best {
            best = sum;
            ties.clear();
            ties.push(idx);
        } else if sum == best {
            ties.push(idx);
        }
    }
    match (tie_mode, ties.len()) {
        (TieMode::Random, len) if len > 1 => ties[rng.random_range(0..len)],
        _ => ties[0],
    }
}

/// Medoid of a set of objects: the member minimising the summed
/// dissimilarity to all other members.
pub fn medoid_of<R: Rng + ?Sized>(
    d: &DistanceMatrix,
    members: &[usize],
    tie_mode: TieMode,
    rng: &mut R,
) -> usize {
    pick_min(
        members
            .iter()
            .map(|&i| (i, members.iter().map(|&j| d.get(i, j)).sum::<f64>())),
        tie_mode,
        rng,
    )
}

pub fn grand_medoid<R: Rng + ?Sized>(d: &DistanceMatrix, tie_mode: TieMode, rng: &mut R) -> usize {
    pick_min(
        (0..d.n()).map(|i| (i, d.row(i).iter().sum::<f64>())),
        tie_mode,
        rng,
    )
}

pub fn medoids<R: Rng + ?Sized>(
    d: &DistanceMatrix,
    p: &Partition,
    tie_mode: TieMode,
    rng: &mut R,
) -> Result<PrototypeSet, PartitionError> {
    if p.n() != d.n() {
        return Err(PartitionError::SizeMismatch {
            partition: p.n(),
            matrix: d.n(),
        });
    }
    let medoids = p
        .clusters()
        .iter()
        .map(|c| medoid_of(d, c, tie_mode, rng))
        .collect();
    let grand_medoid = grand_medoid(d, tie_mode, rng);
    Ok(PrototypeSet {
        medoids,
        grand_medoid,
    })
}
