//! Relative validity indices computed from a dissimilarity matrix and a
//! hard partition. CHI, DBI and PBM additionally need cluster prototypes;
//! medoids are used throughout (with `p = 1` for CHI and PBM) so that every
//! index is defined for arbitrary dissimilarities.
//!
//! A degenerate input that makes an index meaningless (zero divisor, no
//! within-cluster pairs, ...) yields an `RviScore` whose value is `None`.
//! Violated preconditions such as `k < 2` are errors.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distances::DistanceMatrix;
use crate::partitions::{medoids, Partition, PrototypeSet, TieMode};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RviError {
    #[error("relative validity needs at least 2 clusters, got {0}")]
    TooFewClusters(usize),
    #[error("partition has {partition} objects, matrix has {matrix}")]
    SizeMismatch { partition: usize, matrix: usize },
    #[error("{0} needs cluster prototypes")]
    MissingPrototypes(RviKind),
    #[error("prototype set has {got} medoids for {k} clusters")]
    PrototypeMismatch { got: usize, k: usize },
    #[error("unknown index {0:?}")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Maximise,
    Minimise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RviKind {
    Swc,
    Dunn,
    CIndex,
    Aucc,
    Chi,
    Dbi,
    Pbm,
}

impl RviKind {
    pub const ALL: [RviKind; 7] = [
        RviKind::Swc,
        RviKind::Dunn,
        RviKind::CIndex,
        RviKind::Aucc,
        RviKind::Chi,
        RviKind::Dbi,
        RviKind::Pbm,
    ];

    pub fn direction(self) -> Direction {
        match self {
            RviKind::Dbi | RviKind::CIndex => Direction::Minimise,
            _ => Direction::Maximise,
        }
    }

    pub fn prototype_sensitive(self) -> bool {
        matches!(self, RviKind::Chi | RviKind::Dbi | RviKind::Pbm)
    }

    pub fn name(self) -> &'static str {
        match self {
            RviKind::Swc => "swc",
            RviKind::Dunn => "dunn",
            RviKind::CIndex => "c_index",
            RviKind::Aucc => "aucc",
            RviKind::Chi => "chi",
            RviKind::Dbi => "dbi",
            RviKind::Pbm => "pbm",
        }
    }

    /// The value oriented so that larger is always better.
    pub fn oriented(self, value: f64) -> f64 {
        match self.direction() {
            Direction::Maximise => value,
            Direction::Minimise => -value,
        }
    }
}

impl fmt::Display for RviKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RviKind {
    type Err = RviError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "swc" | "silhouette" => Ok(RviKind::Swc),
            "dunn" | "di" => Ok(RviKind::Dunn),
            "c_index" | "c-index" | "cindex" | "ci" => Ok(RviKind::CIndex),
            "aucc" => Ok(RviKind::Aucc),
            "chi" => Ok(RviKind::Chi),
            "dbi" => Ok(RviKind::Dbi),
            "pbm" => Ok(RviKind::Pbm),
            _ => Err(RviError::Unknown(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RviScore {
    pub kind: RviKind,
    pub value: Option<f64>,
}

impl RviScore {
    fn new(kind: RviKind, value: Option<f64>) -> Self {
        Self { kind, value }
    }

    pub fn is_defined(&self) -> bool {
        self.value.is_some()
    }
}

fn check(d: &DistanceMatrix, p: &Partition) -> Result<(), RviError> {
    if p.n() != d.n() {
        return Err(RviError::SizeMismatch {
            partition: p.n(),
            matrix: d.n(),
        });
    }
    if p.k() < 2 {
        return Err(RviError::TooFewClusters(p.k()));
    }
    Ok(())
}

fn check_protos(p: &Partition, proto: &PrototypeSet) -> Result<(), RviError> {
    if proto.medoids.len() != p.k() {
        return Err(RviError::PrototypeMismatch {
            got: proto.medoids.len(),
            k: p.k(),
        });
    }
    Ok(())
}

/// Per-object silhouette widths; singletons get 0.
pub fn silhouette_widths(d: &DistanceMatrix, p: &Partition) -> Result<Vec<f64>, RviError> {
    check(d, p)?;
    let sizes = p.sizes();
    let labels = p.labels();
    let mut sums = vec![0.0; p.k()];
    Ok((0..d.n())
        .map(|i| {
            let own = labels[i];
            if sizes[own] == 1 {
                return 0.0;
            }
            sums.fill(0.0);
            for (j, &v) in d.row(i).iter().enumerate() {
                sums[labels[j]] += v;
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..p.k())
                .filter(|&c| c != own)
                .map(|c| sums[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let denom = a.max(b);
            if denom > 0.0 {
                (b - a) / denom
            } else {
                0.0
            }
        })
        .collect())
}

pub fn swc(d: &DistanceMatrix, p: &Partition) -> Result<RviScore, RviError> {
    let widths = silhouette_widths(d, p)?;
    Ok(RviScore::new(
        RviKind::Swc,
        Some(widths.iter().sum::<f64>() / widths.len() as f64),
    ))
}

pub fn dunn(d: &DistanceMatrix, p: &Partition) -> Result<RviScore, RviError> {
    check(d, p)?;
    let labels = p.labels();
    let mut min_between = f64::INFINITY;
    let mut max_diameter: f64 = 0.0;
    for i in 0..d.n() {
        for j in i + 1..d.n() {
            let v = d.get(i, j);
            if labels[i] == labels[j] {
                max_diameter = max_diameter.max(v);
            } else {
                min_between = min_between.min(v);
            }
        }
    }
    let value = (max_diameter > 0.0).then(|| min_between / max_diameter);
    Ok(RviScore::new(RviKind::Dunn, value))
}

pub fn c_index(d: &DistanceMatrix, p: &Partition) -> Result<RviScore, RviError> {
    check(d, p)?;
    let omega: usize = p.sizes().iter().map(|&s| s * (s - 1) / 2).sum();
    if omega == 0 {
        return Ok(RviScore::new(RviKind::CIndex, None));
    }
    let labels = p.labels();
    let mut theta = 0.0;
    for i in 0..d.n() {
        for j in i + 1..d.n() {
            if labels[i] == labels[j] {
                theta += d.get(i, j);
            }
        }
    }
    let stats = d.pair_stats();
    let total = stats.sorted.len();
    let min_theta = stats.prefix[omega];
    let max_theta = stats.prefix[total] - stats.prefix[total - omega];
    if max_theta <= min_theta {
        return Ok(RviScore::new(RviKind::CIndex, None));
    }
    let value = ((theta - min_theta) / (max_theta - min_theta)).clamp(0.0, 1.0);
    Ok(RviScore::new(RviKind::CIndex, Some(value)))
}

/// Probability that a random within-cluster pair is strictly closer than a
/// random between-cluster pair, ties counting one half.
pub fn aucc(d: &DistanceMatrix, p: &Partition) -> Result<RviScore, RviError> {
    check(d, p)?;
    let labels = p.labels();
    let ranks = &d.pair_stats().ranks;
    let (mut n_within, mut rank_sum) = (0usize, 0.0);
    let mut idx = 0;
    for i in 0..d.n() {
        for j in i + 1..d.n() {
            if labels[i] == labels[j] {
                n_within += 1;
                rank_sum += ranks[idx];
            }
            idx += 1;
        }
    }
    let n_between = ranks.len() - n_within;
    if n_within == 0 || n_between == 0 {
        return Ok(RviScore::new(RviKind::Aucc, None));
    }
    // Mann-Whitney U for "within larger than between".
    let u = rank_sum - (n_within * (n_within + 1)) as f64 / 2.0;
    let value = 1.0 - u / (n_within as f64 * n_between as f64);
    Ok(RviScore::new(RviKind::Aucc, Some(value)))
}

/// `(Tr(W), Tr(T))`: summed distances to the cluster medoids and to the
/// grand medoid.
fn traces(d: &DistanceMatrix, p: &Partition, proto: &PrototypeSet) -> (f64, f64) {
    let labels = p.labels();
    let w = (0..d.n()).map(|i| d.get(i, proto.medoids[labels[i]])).sum();
    let t = d.row(proto.grand_medoid).iter().sum();
    (w, t)
}

pub fn chi(d: &DistanceMatrix, p: &Partition, proto: &PrototypeSet) -> Result<RviScore, RviError> {
    check(d, p)?;
    check_protos(p, proto)?;
    let (w, t) = traces(d, p, proto);
    let (n, k) = (d.n() as f64, p.k() as f64);
    let value = (w > 0.0).then(|| (t - w) / w * (n - k) / (k - 1.0));
    Ok(RviScore::new(RviKind::Chi, value))
}

pub fn dbi(d: &DistanceMatrix, p: &Partition, proto: &PrototypeSet) -> Result<RviScore, RviError> {
    check(d, p)?;
    check_protos(p, proto)?;
    let clusters = p.clusters();
    let spread: Vec<f64> = clusters
        .iter()
        .zip(&proto.medoids)
        .map(|(c, &m)| c.iter().map(|&i| d.get(i, m)).sum::<f64>() / c.len() as f64)
        .collect();
    let k = p.k();
    let mut total = 0.0;
    for j in 0..k {
        let mut worst = f64::NEG_INFINITY;
        for l in (0..k).filter(|&l| l != j) {
            let sep = d.get(proto.medoids[j], proto.medoids[l]);
            if sep <= 0.0 {
                return Ok(RviScore::new(RviKind::Dbi, None));
            }
            worst = worst.max((spread[j] + spread[l]) / sep);
        }
        total += worst;
    }
    Ok(RviScore::new(RviKind::Dbi, Some(total / k as f64)))
}

/// Largest distance between any two cluster medoids.
pub fn max_medoid_separation(d: &DistanceMatrix, proto: &PrototypeSet) -> f64 {
    let m = &proto.medoids;
    let mut best: f64 = 0.0;
    for a in 0..m.len() {
        for b in a + 1..m.len() {
            best = best.max(d.get(m[a], m[b]));
        }
    }
    best
}

pub fn pbm(d: &DistanceMatrix, p: &Partition, proto: &PrototypeSet) -> Result<RviScore, RviError> {
    check(d, p)?;
    check_protos(p, proto)?;
    let (e_k, e_1) = traces(d, p, proto);
    let d_k = max_medoid_separation(d, proto);
    let value = (e_k > 0.0).then(|| d_k / e_k * e_1 / p.k() as f64);
    Ok(RviScore::new(RviKind::Pbm, value))
}

/// Evaluates any index; `proto` is required for the prototype-sensitive
/// three and ignored otherwise.
pub fn compute(
    kind: RviKind,
    d: &DistanceMatrix,
    p: &Partition,
    proto: Option<&PrototypeSet>,
) -> Result<RviScore, RviError> {
    let need = || proto.ok_or(RviError::MissingPrototypes(kind));
    match kind {
        RviKind::Swc => swc(d, p),
        RviKind::Dunn => dunn(d, p),
        RviKind::CIndex => c_index(d, p),
        RviKind::Aucc => aucc(d, p),
        RviKind::Chi => chi(d, p, need()?),
        RviKind::Dbi => dbi(d, p, need()?),
        RviKind::Pbm => pbm(d, p, need()?),
    }
}

/// Like [`compute`], extracting medoids from `d` when the index needs them.
pub fn compute_with_medoids<R: Rng + ?Sized>(
    kind: RviKind,
    d: &DistanceMatrix,
    p: &Partition,
    tie_mode: TieMode,
    rng: &mut R,
) -> Result<RviScore, RviError> {
    check(d, p)?;
    if kind.prototype_sensitive() {
        let proto = medoids(d, p, tie_mode, rng).expect("sizes checked");
        compute(kind, d, p, Some(&proto))
    } else {
        compute(kind, d, p, None)
    }
}
