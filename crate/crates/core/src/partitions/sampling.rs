//! Uniform sampling of set partitions.
//!
//! Unrestricted partitions use Stam's urn scheme: the number of urns `K`
//! is drawn with `P(K = m) = m^n / (e * m! * B_n)` (Dobinski's series),
//! every object is dropped into one of the `K` urns uniformly, and empty
//! urns are discarded. Fixed-`k` partitions are built element by element
//! from the Stirling recurrence `S(n, k) = k S(n-1, k) + S(n-1, k-1)`.

use rand::Rng;

use super::{Partition, PartitionError};

fn log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|i| (i as f64).ln()).sum()
}

/// Bell number by the Bell triangle; exact for `n <= 25`.
pub fn bell_number(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

/// Stirling number of the second kind by the standard recurrence.
pub fn stirling2(n: usize, k: usize) -> u128 {
    let mut table = vec![vec![0u128; k + 1]; n + 1];
    table[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            table[i][j] = j as u128 * table[i - 1][j] + table[i - 1][j - 1];
        }
    }
    table[n][k]
}

/// `ln S(i, j)` for all `i <= n`, `j <= k`.
pub fn log_stirling2(n: usize, k: usize) -> Vec<Vec<f64>> {
    let mut t = vec![vec![f64::NEG_INFINITY; k + 1]; n + 1];
    t[0][0] = 0.0;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            let a = (j as f64).ln() + t[i - 1][j];
            t[i][j] = log_sum_exp(a, t[i - 1][j - 1]);
        }
    }
    t
}

/// Draws the urn count from the Dobinski weights `m^n / m!`, truncating
/// the series once terms fall below 1e-20 of the running total.
fn draw_urn_count<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    let log_w = |m: usize| n as f64 * (m as f64).ln() - ln_factorial(m);
    let mut weights = Vec::new();
    let mut peak = f64::NEG_INFINITY;
    let mut m = 1;
    loop {
        let lw = log_w(m);
        peak = peak.max(lw);
        weights.push(lw);
        if m > n && lw - peak < (1e-20f64).ln() {
            break;
        }
        m += 1;
    }
    let probs: Vec<f64> = weights.iter().map(|lw| (lw - peak).exp()).collect();
    let total: f64 = probs.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (idx, p) in probs.iter().enumerate() {
        if u < *p {
            return idx + 1;
        }
        u -= p;
    }
    probs.len()
}

/// Uniform over all `B_n` set partitions of `n` objects.
pub fn sample_partition_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Partition {
    if n == 0 {
        return Partition::from_labels(&[]);
    }
    let urns = draw_urn_count(n, rng);
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..urns)).collect();
    Partition::from_labels(&labels)
}

/// Uniform over all `S(n, k)` partitions of `n` objects into exactly `k`
/// non-empty clusters.
pub fn sample_partition_fixed_k<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<Partition, PartitionError> {
    if k == 0 || k > n {
        return Err(PartitionError::KOutOfRange { k, n });
    }
    let table = log_stirling2(n, k);
    // Walk from the last object down: object m either opens its own block
    // (probability S(m-1, j-1) / S(m, j)) or joins one of the j blocks of
    // the first m-1 objects.
    let mut choice = vec![None; n];
    let mut j = k;
    for m in (1..=n).rev() {
        if m == j {
            break; // all remaining objects are singletons
        }
        let p_new = if j == 0 {
            0.0
        } else {
            (table[m - 1][j - 1] - table[m][j]).exp()
        };
        if rng.random::<f64>() < p_new {
            j -= 1;
        } else {
            choice[m - 1] = Some(rng.random_range(0..j));
        }
    }
    let mut labels = Vec::with_capacity(n);
    let mut blocks = 0;
    for c in choice {
        match c {
            Some(b) => labels.push(b),
            None => {
                labels.push(blocks);
                blocks += 1;
            }
        }
    }
    debug_assert_eq!(blocks, k);
    Ok(Partition::from_labels(&labels))
}
