//! Slow, direct reference computations used to cross-check the library.

use spbench_core::distances::DistanceMatrix;
use spbench_core::partitions::{Linkage, Partition};

/// AUCC by looping over every (within pair, between pair) combination.
pub fn aucc_pairs(d: &DistanceMatrix, labels: &[usize]) -> Option<f64> {
    let n = labels.len();
    let (mut within, mut between) = (Vec::new(), Vec::new());
    for i in 0..n {
        for j in i + 1..n {
            if labels[i] == labels[j] {
                within.push(d.get(i, j));
            } else {
                between.push(d.get(i, j));
            }
        }
    }
    if within.is_empty() || between.is_empty() {
        return None;
    }
    let mut score = 0.0;
    for &w in &within {
        for &b in &between {
            if w < b {
                score += 1.0;
            } else if w == b {
                score += 0.5;
            }
        }
    }
    Some(score / (within.len() * between.len()) as f64)
}

/// ARI from agreement counts over all object pairs.
pub fn ari_pairs(a: &[usize], b: &[usize]) -> Option<f64> {
    let n = a.len();
    let (mut n11, mut n10, mut n01, mut n00) = (0.0f64, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => n11 += 1.0,
                (true, false) => n10 += 1.0,
                (false, true) => n01 += 1.0,
                (false, false) => n00 += 1.0,
            }
        }
    }
    let denom = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
    (denom != 0.0).then(|| 2.0 * (n00 * n11 - n01 * n10) / denom)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn choose(n: usize, k: usize) -> f64 {
    if k > n {
        0.0
    } else {
        factorial(n) / (factorial(k) * factorial(n - k))
    }
}

fn counts(labels: &[usize]) -> Vec<usize> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut c = vec![0; k];
    for &l in labels {
        c[l] += 1;
    }
    c.into_iter().filter(|&x| x > 0).collect()
}

fn entropy(c: &[usize], n: f64) -> f64 {
    c.iter()
        .map(|&x| x as f64 / n)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// AMI (arithmetic-mean normaliser) with the expected mutual information
/// summed term by term over hypergeometric cell probabilities. `None` when
/// the normaliser is (numerically) degenerate.
pub fn ami_direct(a: &[usize], b: &[usize]) -> Option<f64> {
    let n = a.len();
    let nf = n as f64;
    let ka = a.iter().max().unwrap() + 1;
    let kb = b.iter().max().unwrap() + 1;
    let mut table = vec![vec![0usize; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1;
    }
    let rows: Vec<usize> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<usize> = (0..kb).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let mut mi = 0.0;
    for i in 0..ka {
        for j in 0..kb {
            let nij = table[i][j] as f64;
            if nij > 0.0 {
                mi += nij / nf * (nf * nij / (rows[i] as f64 * cols[j] as f64)).ln();
            }
        }
    }
    let mut emi = 0.0;
    for &ai in rows.iter().filter(|&&x| x > 0) {
        for &bj in cols.iter().filter(|&&x| x > 0) {
            let lo = (ai + bj).saturating_sub(n).max(1);
            for nij in lo..=ai.min(bj) {
                let p = choose(bj, nij) * choose(n - bj, ai - nij) / choose(n, ai);
                let x = nij as f64;
                emi += p * x / nf * (nf * x / (ai as f64 * bj as f64)).ln();
            }
        }
    }
    let h = (entropy(&counts(a), nf) + entropy(&counts(b), nf)) / 2.0;
    let denom = h - emi;
    (denom.abs() > 1e-9).then(|| (mi - emi) / denom)
}

/// Agglomerative clustering by repeatedly scanning every cluster pair and
/// recomputing the linkage from its definition.
pub fn agglomerative_naive(d: &DistanceMatrix, method: Linkage, k: usize) -> Partition {
    let n = d.n();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    // Weighted linkage depends on merge history, so its values are carried
    // along per pair of current clusters.
    let mut weighted: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| d.get(i, j)).collect())
        .collect();
    let sq = |x: &[usize], y: &[usize]| -> f64 {
        x.iter()
            .flat_map(|&i| y.iter().map(move |&j| d.get(i, j).powi(2)))
            .sum()
    };
    while clusters.len() > k {
        let mut best = (f64::INFINITY, 0, 0);
        for x in 0..clusters.len() {
            for y in x + 1..clusters.len() {
                let (a, b) = (&clusters[x], &clusters[y]);
                let pairs = || a.iter().flat_map(|&i| b.iter().map(move |&j| d.get(i, j)));
                let v = match method {
                    Linkage::Single => pairs().fold(f64::INFINITY, f64::min),
                    Linkage::Complete => pairs().fold(0.0, f64::max),
                    Linkage::Average => pairs().sum::<f64>() / (a.len() * b.len()) as f64,
                    Linkage::Weighted => weighted[x][y],
                    Linkage::Ward => {
                        let (na, nb) = (a.len() as f64, b.len() as f64);
                        let gap = sq(a, b) / (na * nb)
                            - sq(a, a) / (2.0 * na * na)
                            - sq(b, b) / (2.0 * nb * nb);
                        (2.0 * na * nb / (na + nb) * gap).max(0.0).sqrt()
                    }
                };
                if v < best.0 {
                    best = (v, x, y);
                }
            }
        }
        let (_, x, y) = best;
        for o in 0..clusters.len() {
            let v = 0.5 * (weighted[x][o] + weighted[y][o]);
            weighted[x][o] = v;
            weighted[o][x] = v;
        }
        weighted.remove(y);
        for row in &mut weighted {
            row.remove(y);
        }
        let moved = clusters.remove(y);
        clusters[x].extend(moved);
    }
    let mut labels = vec![0; n];
    for (c, members) in clusters.iter().enumerate() {
        for &i in members {
            labels[i] = c;
        }
    }
    Partition::from_labels(&labels)
}

/// Smallest k-medoids inertia over every k-subset of objects.
pub fn best_inertia_exhaustive(d: &DistanceMatrix, k: usize) -> f64 {
    let n = d.n();
    let mut best = f64::INFINITY;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let cost: f64 = (0..n)
            .map(|i| {
                subset
                    .iter()
                    .map(|&m| d.get(i, m))
                    .fold(f64::INFINITY, f64::min)
            })
            .sum();
        best = best.min(cost);
        // next combination in lexicographic order
        let mut i = k;
        while i > 0 && subset[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return best;
        }
        subset[i - 1] += 1;
        for j in i..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Relabels so clusters are numbered by first appearance.
pub fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

/// Every set partition of `n` objects, as first-appearance label vectors.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                let k = p.iter().max().map_or(0, |m| m + 1);
                (0..=k).map(move |l| {
                    let mut q = p.clone();
                    q.push(l);
                    q
                })
            })
            .collect();
    }
    out
}

/// Upper 1% point of the chi-square distribution for small degrees of
/// freedom (standard table values).
pub fn chi2_crit_1pct(df: usize) -> f64 {
    match df {
        4 => 13.277,
        14 => 29.141,
        _ => panic!("no table value for df = {df}"),
    }
}
