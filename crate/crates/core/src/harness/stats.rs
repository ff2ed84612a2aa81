//! Statistical helpers: the one-sample Wilcoxon signed-rank test, the
//! two-sample Kolmogorov–Smirnov statistic, RVI null distributions over
//! random partitions, and label-degradation curves.

use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use super::HarnessError;
use crate::dataset::{degrade_labels, DegradeMode};
use crate::distances::DistanceMatrix;
use crate::evi::ari;
use crate::partitions::{sample_partition_fixed_k, sample_partition_uniform, Partition, TieMode};
use crate::rvi::{compute_with_medoids, RviKind};

/// Direction of the alternative hypothesis relative to `mu0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alternative {
    Greater,
    Less,
}

/// Largest number of non-zero differences handled by the exact null
/// distribution; larger samples use the normal approximation.
const EXACT_LIMIT: usize = 20;

fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = r;
        }
        i = j + 1;
    }
    ranks
}

/// One-sided p-value of the Wilcoxon signed-rank test of `sample - mu0`.
///
/// Zero differences are dropped and tied magnitudes share their midrank.
/// Up to 20 remaining differences the p-value is exact (enumerating sign
/// assignments over the observed ranks); beyond that a tie-corrected normal
/// approximation is used.
pub fn wilcoxon_signed_rank(
    sample: &[f64],
    mu0: f64,
    alternative: Alternative,
) -> Result<f64, HarnessError> {
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(HarnessError::Stats(
            "sample contains non-finite values".into(),
        ));
    }
    let diffs: Vec<f64> = sample
        .iter()
        .map(|x| x - mu0)
        .filter(|&d| d != 0.0)
        .collect();
    let m = diffs.len();
    if m < 5 {
        return Err(HarnessError::Stats(format!(
            "{m} non-zero differences; at least 5 are needed"
        )));
    }
    let ranks = midranks(&diffs.iter().map(|d| d.abs()).collect::<Vec<_>>());
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();

    if m <= EXACT_LIMIT {
        // Midranks are multiples of 1/2, so doubled ranks are integers.
        let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
        let total: usize = doubled.iter().sum();
        let mut counts = vec![0.0f64; total + 1];
        counts[0] = 1.0;
        for &r in &doubled {
            for s in (r..=total).rev() {
                counts[s] += counts[s - r];
            }
        }
        let all = 2f64.powi(m as i32);
        let w = (w_plus * 2.0).round() as usize;
        let tail: f64 = match alternative {
            Alternative::Greater => counts[w..].iter().sum(),
            Alternative::Less => counts[..=w].iter().sum(),
        };
        return Ok((tail / all).min(1.0));
    }

    let mf = m as f64;
    let mean = mf * (mf + 1.0) / 4.0;
    let mut tie_term = 0.0;
    let mut sorted = ranks.clone();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = mf * (mf + 1.0) * (2.0 * mf + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return Err(HarnessError::Stats("zero variance".into()));
    }
    let z = (w_plus - mean) / var.sqrt();
    let normal = Normal::standard();
    Ok(match alternative {
        Alternative::Greater => normal.sf(z),
        Alternative::Less => normal.cdf(z),
    })
}

/// Two-sample Kolmogorov–Smirnov statistic: the largest gap between the
/// empirical CDFs.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.len() == b.len() { 0.0 } else { 1.0 };
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (mut i, mut j, mut best) = (0, 0, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = if x[i] <= y[j] { x[i] } else { y[j] };
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        best = best.max((i as f64 / x.len() as f64 - j as f64 / y.len() as f64).abs());
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullMode {
    /// Uniform over all set partitions of the objects.
    Uniform,
    /// Uniform over partitions with exactly this many clusters.
    FixedK(usize),
}

/// Values of an RVI on random partitions. Samples where the index is
/// undefined (including single-cluster partitions) are counted separately.
#[derive(Debug, Clone, PartialEq)]
pub struct NullDistribution {
    pub values: Vec<f64>,
    pub undefined: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `counts.len() + 1` bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// Writes `bin_lower,bin_upper,count`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), HarnessError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["bin_lower", "bin_upper", "count"])?;
        for (i, c) in self.counts.iter().enumerate() {
            out.write_record([
                self.edges[i].to_string(),
                self.edges[i + 1].to_string(),
                c.to_string(),
            ])?;
        }
        out.flush().map_err(|e| HarnessError::Csv(e.into()))
    }
}

impl NullDistribution {
    pub fn mean(&self) -> Option<f64> {
        (!self.values.is_empty())
            .then(|| self.values.iter().sum::<f64>() / self.values.len() as f64)
    }

    /// Equal-width histogram over the observed range. The last bin is closed.
    pub fn histogram(&self, bins: usize) -> Histogram {
        let bins = bins.max(1);
        if self.values.is_empty() {
            return Histogram {
                edges: vec![0.0; bins + 1],
                counts: vec![0; bins],
            };
        }
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self
            .values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let width = if hi > lo {
            (hi - lo) / bins as f64
        } else {
            1.0
        };
        let edges = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![0; bins];
        for &v in &self.values {
            let b = (((v - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
        Histogram { edges, counts }
    }
}

/// Samples `n_samples` random partitions of the objects of `d` and records
/// the index on each.
pub fn sample_null_distribution<R: Rng + ?Sized>(
    d: &DistanceMatrix,
    rvi: RviKind,
    n_samples: usize,
    mode: NullMode,
    tie_mode: TieMode,
    rng: &mut R,
) -> Result<NullDistribution, HarnessError> {
    let n = d.n();
    let mut values = Vec::with_capacity(n_samples);
    let mut undefined = 0;
    for _ in 0..n_samples {
        let p = match mode {
            NullMode::Uniform => sample_partition_uniform(n, rng),
            NullMode::FixedK(k) => sample_partition_fixed_k(n, k, rng)
                .map_err(|e| HarnessError::Stats(e.to_string()))?,
        };
        if p.k() < 2 {
            undefined += 1;
            continue;
        }
        match compute_with_medoids(rvi, d, &p, tie_mode, rng)
            .map_err(|e| HarnessError::Stats(e.to_string()))?
            .value
        {
            Some(v) => values.push(v),
            None => undefined += 1,
        }
    }
    Ok(NullDistribution { values, undefined })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegradationPoint {
    pub fraction: f64,
    pub mean_ari: f64,
    pub sd: f64,
}

/// Mean and sample standard deviation of ARI between the ground truth and
/// `reps` degraded copies, per fraction.
pub fn degradation_curve<R: Rng + ?Sized>(
    labels: &[usize],
    fractions: &[f64],
    mode: DegradeMode,
    reps: usize,
    rng: &mut R,
) -> Result<Vec<DegradationPoint>, HarnessError> {
    if reps == 0 {
        return Err(HarnessError::Stats(
            "degradation needs at least one repetition".into(),
        ));
    }
    let truth = Partition::from_labels(labels);
    fractions
        .iter()
        .map(|&fraction| {
            let scores: Vec<f64> = (0..reps)
                .map(|_| {
                    let degraded =
                        Partition::from_labels(&degrade_labels(labels, fraction, mode, rng));
                    ari(&truth, &degraded).map_err(|e| HarnessError::Stats(e.to_string()))
                })
                .collect::<Result<_, _>>()?;
            let mean = scores.iter().sum::<f64>() / reps as f64;
            let sd = if reps > 1 {
                (scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt()
            } else {
                0.0
            };
            Ok(DegradationPoint {
                fraction,
                mean_ari: mean,
                sd,
            })
        })
        .collect()
}
