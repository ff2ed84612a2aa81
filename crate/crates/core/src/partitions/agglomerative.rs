//! Lance-Williams agglomerative clustering on a precomputed matrix.
//!
//! Clusters live in "slots": merging slots `a < b` stores the union in `a`
//! and retires `b`, so a slot index is always the smallest member of its
//! cluster. Among equally close pairs the lexicographically smallest
//! `(a, b)` merges first.

use serde::{Deserialize, Serialize};

use super::{Partition, PartitionError};
use crate::distances::DistanceMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linkage {
    Single,
    Complete,
    Average,
    Weighted,
    Ward,
}

impl Linkage {
    pub const ALL: [Linkage; 5] = [
        Linkage::Single,
        Linkage::Complete,
        Linkage::Average,
        Linkage::Weighted,
        Linkage::Ward,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Linkage::Single => "single",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
            Linkage::Weighted => "weighted",
            Linkage::Ward => "ward",
        }
    }

    /// Dissimilarity between slot `x` and the union of `a` and `b`.
    #[inline]
    fn update(self, d_xa: f64, d_xb: f64, d_ab: f64, n_a: f64, n_b: f64, n_x: f64) -> f64 {
        match self {
            Linkage::Single => d_xa.min(d_xb),
            Linkage::Complete => d_xa.max(d_xb),
            Linkage::Average => (n_a * d_xa + n_b * d_xb) / (n_a + n_b),
            Linkage::Weighted => 0.5 * (d_xa + d_xb),
            Linkage::Ward => {
                let t = n_a + n_b + n_x;
                (((n_a + n_x) * d_xa * d_xa + (n_b + n_x) * d_xb * d_xb - n_x * d_ab * d_ab) / t)
                    .max(0.0)
                    .sqrt()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub kept: usize,
    pub retired: usize,
    pub height: f64,
    pub size: usize,
}

/// The full merge sequence over `n` objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

impl Dendrogram {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Partition after the first `n - k` merges.
    pub fn cut(&self, k: usize) -> Result<Partition, PartitionError> {
        if k == 0 || k > self.n {
            return Err(PartitionError::KOutOfRange { k, n: self.n });
        }
        let mut slot_of: Vec<usize> = (0..self.n).collect();
        for m in &self.merges[..self.n - k] {
            for s in slot_of.iter_mut() {
                if *s == m.retired {
                    *s = m.kept;
                }
            }
        }
        Ok(Partition::from_labels(&slot_of))
    }
}

pub fn linkage(d: &DistanceMatrix, method: Linkage) -> Dendrogram {
    let n = d.n();
    let mut dist = d.values().to_vec();
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    // Row minimum over active columns c > r, ties to the smallest c.
    let mut row_min = vec![f64::INFINITY; n];
    let mut row_arg = vec![usize::MAX; n];

    let rescan =
        |r: usize, dist: &[f64], active: &[bool], row_min: &mut [f64], row_arg: &mut [usize]| {
            row_min[r] = f64::INFINITY;
            row_arg[r] = usize::MAX;
            for c in r + 1..n {
                if active[c] && dist[r * n + c] < row_min[r] {
                    row_min[r] = dist[r * n + c];
                    row_arg[r] = c;
                }
            }
        };
    for r in 0..n {
        rescan(r, &dist, &active, &mut row_min, &mut row_arg);
    }

    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for _ in 1..n {
        let mut a = usize::MAX;
        for r in 0..n {
            if active[r] && row_arg[r] != usize::MAX && (a == usize::MAX || row_min[r] < row_min[a])
            {
                a = r;
            }
        }
        let b = row_arg[a];
        let d_ab = dist[a * n + b];
        let (n_a, n_b) = (size[a] as f64, size[b] as f64);
        for x in 0..n {
            if !active[x] || x == a || x == b {
                continue;
            }
            let v = method.update(
                dist[x * n + a],
                dist[x * n + b],
                d_ab,
                n_a,
                n_b,
                size[x] as f64,
            );
            dist[x * n + a] = v;
            dist[a * n + x] = v;
        }
        active[b] = false;
        size[a] += size[b];
        merges.push(Merge {
            kept: a,
            retired: b,
            height: d_ab,
            size: size[a],
        });

        for r in 0..n {
            if !active[r] || r == a {
                continue;
            }
            if r < a {
                if row_arg[r] == a || row_arg[r] == b {
                    rescan(r, &dist, &active, &mut row_min, &mut row_arg);
                } else {
                    let v = dist[r * n + a];
                    if v < row_min[r] || (v == row_min[r] && a < row_arg[r]) {
                        row_min[r] = v;
                        row_arg[r] = a;
                    }
                }
            } else if r < b && row_arg[r] == b {
                rescan(r, &dist, &active, &mut row_min, &mut row_arg);
            }
        }
        rescan(a, &dist, &active, &mut row_min, &mut row_arg);
    }
    Dendrogram { n, merges }
}

/// Exact dendrogram cut at `k` clusters.
pub fn agglomerative(
    d: &DistanceMatrix,
    method: Linkage,
    k: usize,
) -> Result<Partition, PartitionError> {
    if k == 0 || k > d.n() {
        return Err(PartitionError::KOutOfRange { k, n: d.n() });
    }
    linkage(d, method).cut(k)
}
