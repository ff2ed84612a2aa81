//! Dissimilarities between equal-length feature vectors.

use serde::{Deserialize, Serialize};

use super::DistanceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorMeasure {
    Euclidean,
    Manhattan,
    Chebyshev,
    Canberra,
    Braycurtis,
    Cosine,
}

pub fn vector_distance(x: &[f64], y: &[f64], kind: VectorMeasure) -> Result<f64, DistanceError> {
    if x.len() != y.len() {
        return Err(DistanceError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(DistanceError::Empty);
    }
    Ok(vector_distance_unchecked(x, y, kind))
}

pub(crate) fn vector_distance_unchecked(x: &[f64], y: &[f64], kind: VectorMeasure) -> f64 {
    if x == y {
        return 0.0;
    }
    let pairs = x.iter().zip(y);
    match kind {
        VectorMeasure::Euclidean => pairs.map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
        VectorMeasure::Manhattan => pairs.map(|(a, b)| (a - b).abs()).sum(),
        VectorMeasure::Chebyshev => pairs.map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
        VectorMeasure::Canberra => pairs
            .map(|(a, b)| {
                let den = a.abs() + b.abs();
                // 0/0 terms contribute nothing
                if den == 0.0 {
                    0.0
                } else {
                    (a - b).abs() / den
                }
            })
            .sum(),
        VectorMeasure::Braycurtis => {
            let (num, den) = pairs.fold((0.0, 0.0), |(n, d), (a, b)| {
                (n + (a - b).abs(), d + (a + b).abs())
            });
            if den == 0.0 {
                0.0
            } else {
                num / den
            }
        }
        VectorMeasure::Cosine => {
            let (mut dot, mut nx, mut ny) = (0.0, 0.0, 0.0);
            for (a, b) in pairs {
                dot += a * b;
                nx += a * a;
                ny += b * b;
            }
            if nx == 0.0 && ny == 0.0 {
                0.0
            } else if nx == 0.0 || ny == 0.0 {
                1.0
            } else {
                (1.0 - dot / (nx.sqrt() * ny.sqrt())).clamp(0.0, 2.0)
            }
        }
    }
}
