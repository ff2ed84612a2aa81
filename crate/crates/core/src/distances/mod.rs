//! Pairwise dissimilarity matrices for every supported similarity paradigm,
//! plus the two global rescalings used for the scale-variant PBM index.
//!
//! Binary layout written by [`DistanceMatrix::write_binary`]: an 8-byte
//! little-endian `u64` holding `n`, followed by `n * n` little-endian `f64`
//! values in row-major order. The CSV layout is `n` lines of `n`
//! comma-separated values, no header.

mod elastic;
mod vector;

use std::fmt;
use std::io::{Read, Write};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{DataKind, DataMatrix};

pub use elastic::{dtw, dtw_window, msm, sbd, twed};
pub use vector::{vector_distance, VectorMeasure};

#[derive(Debug, thiserror::Error)]
pub enum DistanceError {
    #[error("series/vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    Empty,
    #[error("shape-based distance is undefined for an all-zero series")]
    ZeroNorm,
    #[error("invalid measure parameter: {0}")]
    InvalidParameter(String),
    #[error("{measure} is an elastic measure and needs time-series data")]
    IncompatibleKind { measure: String },
    #[error("matrix is not a valid dissimilarity matrix: {0}")]
    Invalid(String),
    #[error("cannot rescale: {0}")]
    ZeroDivisor(&'static str),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A dissimilarity measure together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "measure", rename_all = "snake_case")]
pub enum Measure {
    Euclidean,
    Manhattan,
    Chebyshev,
    Canberra,
    Braycurtis,
    Cosine,
    Dtw { window_frac: f64 },
    Msm { cost: f64 },
    Twed { nu: f64, lambda: f64 },
    Sbd,
}

impl Measure {
    pub fn as_vector(&self) -> Option<VectorMeasure> {
        Some(match self {
            Measure::Euclidean => VectorMeasure::Euclidean,
            Measure::Manhattan => VectorMeasure::Manhattan,
            Measure::Chebyshev => VectorMeasure::Chebyshev,
            Measure::Canberra => VectorMeasure::Canberra,
            Measure::Braycurtis => VectorMeasure::Braycurtis,
            Measure::Cosine => VectorMeasure::Cosine,
            _ => return None,
        })
    }

    pub fn is_elastic(&self) -> bool {
        self.as_vector().is_none()
    }

    pub fn validate(&self) -> Result<(), DistanceError> {
        let bad = match *self {
            Measure::Dtw { window_frac } => !(0.0..=1.0).contains(&window_frac),
            Measure::Msm { cost } => !(cost > 0.0 && cost.is_finite()),
            Measure::Twed { nu, lambda } => {
                !(nu >= 0.0 && lambda >= 0.0 && nu.is_finite() && lambda.is_finite())
            }
            _ => false,
        };
        if bad {
            return Err(DistanceError::InvalidParameter(self.to_string()));
        }
        Ok(())
    }

    /// Scalar dissimilarity between two objects.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> Result<f64, DistanceError> {
        match *self {
            Measure::Dtw { window_frac } => dtw(a, b, window_frac),
            Measure::Msm { cost } => msm(a, b, cost),
            Measure::Twed { nu, lambda } => twed(a, b, nu, lambda),
            Measure::Sbd => sbd(a, b),
            _ => vector_distance(a, b, self.as_vector().expect("vector measure")),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Euclidean => write!(f, "euclidean"),
            Measure::Manhattan => write!(f, "manhattan"),
            Measure::Chebyshev => write!(f, "chebyshev"),
            Measure::Canberra => write!(f, "canberra"),
            Measure::Braycurtis => write!(f, "braycurtis"),
            Measure::Cosine => write!(f, "cosine"),
            Measure::Dtw { window_frac } => write!(f, "dtw(window_frac={window_frac})"),
            Measure::Msm { cost } => write!(f, "msm(c={cost})"),
            Measure::Twed { nu, lambda } => write!(f, "twed(nu={nu},lambda={lambda})"),
            Measure::Sbd => write!(f, "sbd"),
        }
    }
}

/// Order statistics over the strict upper triangle, shared by the
/// rank-based indices. Built lazily once per matrix.
#[derive(Debug, Clone)]
pub(crate) struct PairStats {
    /// Upper-triangle values sorted ascending.
    pub sorted: Vec<f64>,
    /// `prefix[i]` = sum of the `i` smallest values.
    pub prefix: Vec<f64>,
    /// Average (mid-)rank, 1-based, of each upper-triangle pair in
    /// row-major `(i, j > i)` order.
    pub ranks: Vec<f64>,
}

impl PairStats {
    fn build(d: &DistanceMatrix) -> Self {
        let n = d.n;
        let mut pairs: Vec<(f64, usize)> = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((d.get(i, j), pairs.len()));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut ranks = vec![0.0; pairs.len()];
        let mut start = 0;
        while start < pairs.len() {
            let mut end = start + 1;
            while end < pairs.len() && pairs[end].0 == pairs[start].0 {
                end += 1;
            }
            let mid = (start + 1 + end) as f64 / 2.0;
            for p in &pairs[start..end] {
                ranks[p.1] = mid;
            }
            start = end;
        }
        let sorted: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let mut prefix = Vec::with_capacity(sorted.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for v in &sorted {
            acc += v;
            prefix.push(acc);
        }
        PairStats {
            sorted,
            prefix,
            ranks,
        }
    }
}

/// Symmetric, zero-diagonal, non-negative `n x n` dissimilarities. The
/// triangle inequality is not assumed.
pub struct DistanceMatrix {
    values: Vec<f64>,
    n: usize,
    paradigm_id: String,
    pair_stats: OnceLock<PairStats>,
}

impl Clone for DistanceMatrix {
    fn clone(&self) -> Self {
        Self {
            values: self.values.clone(),
            n: self.n,
            paradigm_id: self.paradigm_id.clone(),
            pair_stats: OnceLock::new(),
        }
    }
}

impl PartialEq for DistanceMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.values == other.values && self.paradigm_id == other.paradigm_id
    }
}

impl fmt::Debug for DistanceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistanceMatrix")
            .field("n", &self.n)
            .field("paradigm_id", &self.paradigm_id)
            .finish_non_exhaustive()
    }
}

impl DistanceMatrix {
    /// Validates and wraps a row-major `n x n` buffer.
    pub fn from_full(
        values: Vec<f64>,
        n: usize,
        paradigm_id: impl Into<String>,
    ) -> Result<Self, DistanceError> {
        if n == 0 || values.len() != n * n {
            return Err(DistanceError::Invalid(format!(
                "expected {n}x{n} values, got {}",
                values.len()
            )));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(DistanceError::Invalid(format!("non-zero diagonal at {i}")));
            }
            for j in i + 1..n {
                let (a, b) = (values[i * n + j], values[j * n + i]);
                if !a.is_finite() || !b.is_finite() || a < 0.0 || b < 0.0 {
                    return Err(DistanceError::Invalid(format!(
                        "entry ({i},{j}) is negative or non-finite"
                    )));
                }
                if (a - b).abs() > 1e-9 * a.abs().max(b.abs()).max(1.0) {
                    return Err(DistanceError::Invalid(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self::from_full_unchecked(values, n, paradigm_id.into()))
    }

    pub(crate) fn from_full_unchecked(values: Vec<f64>, n: usize, paradigm_id: String) -> Self {
        Self {
            values,
            n,
            paradigm_id,
            pair_stats: OnceLock::new(),
        }
    }

    /// Builds a matrix from a function evaluated on the upper triangle only.
    pub fn from_fn(
        n: usize,
        paradigm_id: impl Into<String>,
        f: impl Fn(usize, usize) -> f64,
    ) -> Result<Self, DistanceError> {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Self::from_full(values, n, paradigm_id)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn paradigm_id(&self) -> &str {
        &self.paradigm_id
    }

    pub fn with_paradigm_id(mut self, id: impl Into<String>) -> Self {
        self.paradigm_id = id.into();
        self
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Every entry multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self::from_full_unchecked(
            self.values.iter().map(|v| v * c).collect(),
            self.n,
            self.paradigm_id.clone(),
        )
    }

    /// The same dissimilarities under a permutation of the objects:
    /// object `i` of the result is object `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        Self::from_full_unchecked(values, n, self.paradigm_id.clone())
    }

    pub(crate) fn pair_stats(&self) -> &PairStats {
        self.pair_stats.get_or_init(|| PairStats::build(self))
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<(), DistanceError> {
        w.write_all(&(self.n as u64).to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(
        mut r: R,
        paradigm_id: impl Into<String>,
    ) -> Result<Self, DistanceError> {
        let mut header = [0u8; 8];
        r.read_exact(&mut header)?;
        let n = u64::from_le_bytes(header) as usize;
        let mut values = Vec::with_capacity(n * n);
        let mut buf = [0u8; 8];
        for _ in 0..n * n {
            r.read_exact(&mut buf)?;
            values.push(f64::from_le_bytes(buf));
        }
        Self::from_full(values, n, paradigm_id)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), DistanceError> {
        for row in self.values.chunks_exact(self.n) {
            let line: Vec<String> = row.iter().map(f64::to_string).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(
        mut r: R,
        paradigm_id: impl Into<String>,
    ) -> Result<Self, DistanceError> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        let mut values = Vec::new();
        let mut n = 0;
        for (ln, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let row = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| DistanceError::Parse {
                    line: ln + 1,
                    message: e.to_string(),
                })?;
            values.extend(row);
            n += 1;
        }
        Self::from_full(values, n, paradigm_id)
    }
}

/// Assembles the full matrix from the scalar measure. Only the upper
/// triangle is evaluated and mirrored, so the result is exactly symmetric
/// and independent of the number of worker threads.
pub fn pairwise(data: &DataMatrix, measure: &Measure) -> Result<DistanceMatrix, DistanceError> {
    measure.validate()?;
    if measure.is_elastic() && data.kind() != DataKind::TimeSeries {
        return Err(DistanceError::IncompatibleKind {
            measure: measure.to_string(),
        });
    }
    let n = data.n();
    let sbd_norms: Option<Vec<f64>> = if matches!(measure, Measure::Sbd) {
        let norms: Vec<f64> = data
            .rows()
            .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
            .collect();
        if norms.iter().any(|&v| v == 0.0) {
            return Err(DistanceError::ZeroNorm);
        }
        Some(norms)
    } else {
        None
    };
    let eval = |i: usize, j: usize| -> f64 {
        let (a, b) = (data.row(i), data.row(j));
        match *measure {
            Measure::Dtw { window_frac } => elastic::dtw_unchecked(a, b, window_frac),
            Measure::Msm { cost } => elastic::msm_unchecked(a, b, cost),
            Measure::Twed { nu, lambda } => elastic::twed_unchecked(a, b, nu, lambda),
            Measure::Sbd => {
                let norms = sbd_norms.as_ref().expect("norms computed for sbd");
                elastic::sbd_unchecked(a, b, norms[i] * norms[j])
            }
            _ => vector::vector_distance_unchecked(
                a,
                b,
                measure.as_vector().expect("vector measure"),
            ),
        }
    };
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).map(|j| eval(i, j)).collect())
        .collect();
    let mut values = vec![0.0; n * n];
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let j = i + 1 + off;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    DistanceMatrix::from_full(values, n, measure.to_string())
}

/// Divides every entry by the largest one.
pub fn scale_max(d: &DistanceMatrix) -> Result<DistanceMatrix, DistanceError> {
    let max = d.max_value();
    if max <= 0.0 {
        return Err(DistanceError::ZeroDivisor("all-zero matrix"));
    }
    Ok(DistanceMatrix::from_full_unchecked(
        d.values.iter().map(|v| v / max).collect(),
        d.n,
        d.paradigm_id.clone(),
    ))
}

/// Divides every entry by the total dissimilarity to the grand prototype,
/// `sum_i d(x_i, grand_medoid)`.
pub fn scale_global(
    d: &DistanceMatrix,
    grand_medoid: usize,
) -> Result<DistanceMatrix, DistanceError> {
    let divisor = global_dispersion(d, grand_medoid);
    if divisor <= 0.0 {
        return Err(DistanceError::ZeroDivisor(
            "zero total dispersion about the grand prototype",
        ));
    }
    Ok(DistanceMatrix::from_full_unchecked(
        d.values.iter().map(|v| v / divisor).collect(),
        d.n,
        d.paradigm_id.clone(),
    ))
}

pub fn global_dispersion(d: &DistanceMatrix, grand_medoid: usize) -> f64 {
    (0..d.n).map(|i| d.get(i, grand_medoid)).sum()
}
