//! External validity: agreement between a partition and ground truth.

use crate::dataset::LabelSet;
use crate::partitions::Partition;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum EviError {
    #[error("partitions have {0} and {1} objects")]
    LengthMismatch(usize, usize),
    #[error("no ground-truth labelling supplied")]
    NoLabellings,
}

/// Cross-tabulation of two partitions of the same objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<usize>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    n: usize,
}

impl ContingencyTable {
    pub fn new(a: &Partition, b: &Partition) -> Result<Self, EviError> {
        if a.n() != b.n() {
            return Err(EviError::LengthMismatch(a.n(), b.n()));
        }
        let (ka, kb) = (a.k(), b.k());
        let mut counts = vec![0; ka * kb];
        for (&x, &y) in a.labels().iter().zip(b.labels()) {
            counts[x * kb + y] += 1;
        }
        Ok(Self {
            counts,
            rows: a.sizes(),
            cols: b.sizes(),
            n: a.n(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.counts[i * self.cols.len() + j]
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.rows
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.cols
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.iter().copied().filter(|&c| c > 0)
    }
}

fn pairs(x: usize) -> f64 {
    (x as f64) * (x as f64 - 1.0) / 2.0
}

/// Adjusted Rand index. Two identical trivial partitions (one cluster, or
/// all singletons) score 1.
pub fn ari(a: &Partition, b: &Partition) -> Result<f64, EviError> {
    let t = ContingencyTable::new(a, b)?;
    let index: f64 = t.cells().map(pairs).sum();
    let sa: f64 = t.rows.iter().map(|&x| pairs(x)).sum();
    let sb: f64 = t.cols.iter().map(|&x| pairs(x)).sum();
    let total = pairs(t.n);
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = sa * sb / total;
    let max = 0.5 * (sa + sb);
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

fn entropy(sizes: &[usize], n: usize) -> f64 {
    let n = n as f64;
    sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            -p * p.ln()
        })
        .sum()
}

fn mutual_information(t: &ContingencyTable) -> f64 {
    let n = t.n as f64;
    let kb = t.cols.len();
    let mut mi = 0.0;
    for (idx, &c) in t.counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (i, j) = (idx / kb, idx % kb);
        let c = c as f64;
        mi += c / n * (n * c / (t.rows[i] as f64 * t.cols[j] as f64)).ln();
    }
    mi.max(0.0)
}

/// Expected mutual information under the hypergeometric model with both
/// marginals fixed.
fn expected_mutual_information(t: &ContingencyTable) -> f64 {
    let n = t.n;
    let mut ln_fact = vec![0.0; n + 1];
    for i in 1..=n {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let nf = n as f64;
    let mut emi = 0.0;
    for &a in &t.rows {
        for &b in &t.cols {
            let lo = (a + b).saturating_sub(n).max(1);
            let hi = a.min(b);
            let fixed = ln_fact[a] + ln_fact[b] + ln_fact[n - a] + ln_fact[n - b] - ln_fact[n];
            for nij in lo..=hi {
                let x = nij as f64;
                let term = x / nf * (nf * x / (a as f64 * b as f64)).ln();
                let ln_p = fixed
                    - ln_fact[nij]
                    - ln_fact[a - nij]
                    - ln_fact[b - nij]
                    - ln_fact[n + nij - a - b];
                emi += term * ln_p.exp();
            }
        }
    }
    emi
}

/// Adjusted mutual information with the arithmetic-mean normaliser and
/// natural-log entropies. When the normaliser equals the expected mutual
/// information (both partitions trivial in the same way) the score is 1
/// for identical partitions and 0 otherwise.
pub fn ami(a: &Partition, b: &Partition) -> Result<f64, EviError> {
    let t = ContingencyTable::new(a, b)?;
    let h = 0.5 * (entropy(&t.rows, t.n) + entropy(&t.cols, t.n));
    let mi = mutual_information(&t);
    let emi = expected_mutual_information(&t);
    let denom = h - emi;
    if denom.abs() < 1e-12 {
        return Ok(if a == b { 1.0 } else { 0.0 });
    }
    Ok(((mi - emi) / denom).min(1.0))
}

/// Best ARI and best AMI over every ground-truth labelling; the two maxima
/// may come from different labellings.
pub fn best_match(p: &Partition, labels: &LabelSet) -> Result<(f64, f64), EviError> {
    if labels.is_empty() {
        return Err(EviError::NoLabellings);
    }
    let mut best = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for l in labels.labellings() {
        let truth = Partition::from_labels(l);
        best.0 = best.0.max(ari(p, &truth)?);
        best.1 = best.1.max(ami(p, &truth)?);
    }
    Ok(best)
}
