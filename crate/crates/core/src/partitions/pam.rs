//! Partitioning Around Medoids: BUILD or random initialisation followed by
//! best-improvement SWAP. Swap gains for every medoid are evaluated in one
//! pass per candidate (the FastPAM1 bookkeeping), which selects exactly the
//! swap classic PAM would.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Partition, PartitionError};
use crate::distances::DistanceMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PamInit {
    Build,
    Random,
}

/// Outcome of one initialisation followed by SWAP.
#[derive(Debug, Clone, PartialEq)]
pub struct PamRun {
    pub medoids: Vec<usize>,
    pub inertia: f64,
    /// Inertia after initialisation, then after every accepted swap.
    pub inertia_history: Vec<f64>,
    pub swaps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PamResult {
    pub partition: Partition,
    pub medoids: Vec<usize>,
    pub inertia: f64,
    /// Index of the winning restart.
    pub best_init: usize,
    pub runs: Vec<PamRun>,
}

#[derive(Clone, Copy)]
struct Assign {
    near: usize,
    d_near: f64,
    d_second: f64,
}

fn assign_all(d: &DistanceMatrix, medoids: &[usize]) -> Vec<Assign> {
    (0..d.n())
        .map(|o| {
            let mut a = Assign {
                near: 0,
                d_near: f64::INFINITY,
                d_second: f64::INFINITY,
            };
            for (mi, &m) in medoids.iter().enumerate() {
                let v = if m == o { 0.0 } else { d.get(o, m) };
                if v < a.d_near || (m == o && v <= a.d_near) {
                    a.d_second = a.d_near;
                    a.d_near = v;
                    a.near = mi;
                } else if v < a.d_second {
                    a.d_second = v;
                }
            }
            a
        })
        .collect()
}

fn build(d: &DistanceMatrix, k: usize) -> Vec<usize> {
    let n = d.n();
    let first = (0..n)
        .map(|i| (i, d.row(i).iter().sum::<f64>()))
        .fold((usize::MAX, f64::INFINITY), |best, (i, s)| {
            if s < best.1 {
                (i, s)
            } else {
                best
            }
        })
        .0;
    let mut medoids = vec![first];
    let mut nearest: Vec<f64> = (0..n).map(|o| d.get(o, first)).collect();
    let mut is_medoid = vec![false; n];
    is_medoid[first] = true;
    while medoids.len() < k {
        let mut best = (usize::MAX, f64::NEG_INFINITY);
        for c in (0..n).filter(|&c| !is_medoid[c]) {
            let gain: f64 = (0..n).map(|o| (nearest[o] - d.get(o, c)).max(0.0)).sum();
            if gain > best.1 {
                best = (c, gain);
            }
        }
        let c = best.0;
        is_medoid[c] = true;
        medoids.push(c);
        for (o, v) in nearest.iter_mut().enumerate() {
            *v = v.min(d.get(o, c));
        }
    }
    medoids
}

/// Runs SWAP from a given initial medoid set.
fn swap(d: &DistanceMatrix, mut medoids: Vec<usize>, max_iter: usize) -> PamRun {
    let n = d.n();
    let k = medoids.len();
    let mut assign = assign_all(d, &medoids);
    let mut inertia: f64 = assign.iter().map(|a| a.d_near).sum();
    let mut history = vec![inertia];
    let mut is_medoid = vec![false; n];
    medoids.iter().for_each(|&m| is_medoid[m] = true);
    let mut swaps = 0;
    let mut removal = vec![0.0; k];
    let mut delta = vec![0.0; k];

    for _ in 0..max_iter {
        removal.fill(0.0);
        for a in &assign {
            removal[a.near] += a.d_second - a.d_near;
        }
        let mut best = (0.0f64, usize::MAX, usize::MAX);
        for h in (0..n).filter(|&h| !is_medoid[h]) {
            delta.copy_from_slice(&removal);
            let mut shared = 0.0;
            for (o, a) in assign.iter().enumerate() {
                let d_oh = d.get(o, h);
                if d_oh < a.d_near {
                    shared += d_oh - a.d_near;
                    delta[a.near] += a.d_near - a.d_second;
                } else if d_oh < a.d_second {
                    delta[a.near] += d_oh - a.d_second;
                }
            }
            for (mi, &dm) in delta.iter().enumerate() {
                let total = dm + shared;
                if total < best.0 {
                    best = (total, mi, h);
                }
            }
        }
        let (gain, mi, h) = best;
        if mi == usize::MAX || gain >= -1e-12 * (1.0 + inertia.abs()) {
            break;
        }
        is_medoid[medoids[mi]] = false;
        is_medoid[h] = true;
        medoids[mi] = h;
        assign = assign_all(d, &medoids);
        inertia = assign.iter().map(|a| a.d_near).sum();
        history.push(inertia);
        swaps += 1;
    }
    PamRun {
        medoids,
        inertia,
        inertia_history: history,
        swaps,
    }
}

/// One PAM run from the given initialisation.
pub fn pam_run<R: Rng + ?Sized>(
    d: &DistanceMatrix,
    k: usize,
    init: PamInit,
    max_iter: usize,
    rng: &mut R,
) -> Result<PamRun, PartitionError> {
    if k == 0 || k > d.n() {
        return Err(PartitionError::KOutOfRange { k, n: d.n() });
    }
    let start = match init {
        PamInit::Build => build(d, k),
        PamInit::Random => sample(rng, d.n(), k).into_vec(),
    };
    Ok(swap(d, start, max_iter))
}

/// Labels every object with its nearest medoid; medoids always label
/// themselves so no cluster is empty even with duplicate objects.
fn partition_from_medoids(d: &DistanceMatrix, medoids: &[usize]) -> Partition {
    let mut order: Vec<usize> = medoids.to_vec();
    order.sort_unstable();
    let labels: Vec<usize> = (0..d.n())
        .map(|o| {
            if let Some(pos) = order.iter().position(|&m| m == o) {
                return pos;
            }
            let mut best = (0, f64::INFINITY);
            for (pos, &m) in order.iter().enumerate() {
                let v = d.get(o, m);
                if v < best.1 {
                    best = (pos, v);
                }
            }
            best.0
        })
        .collect();
    Partition::from_labels(&labels)
}

/// Best of `n_init` PAM runs by inertia. Run 0 starts from BUILD, the rest
/// from uniformly random medoid sets; each restart draws its own stream
/// seeded from `rng`. Ties go to the lowest restart index.
pub fn kmedoids_pam<R: Rng + ?Sized>(
    d: &DistanceMatrix,
    k: usize,
    n_init: usize,
    max_iter: usize,
    rng: &mut R,
) -> Result<PamResult, PartitionError> {
    if k == 0 || k > d.n() {
        return Err(PartitionError::KOutOfRange { k, n: d.n() });
    }
    if n_init == 0 || max_iter == 0 {
        return Err(PartitionError::InvalidParameter(format!(
            "n_init={n_init}, max_iter={max_iter}"
        )));
    }
    let seeds: Vec<u64> = (0..n_init).map(|_| rng.next_u64()).collect();
    let runs: Vec<PamRun> = seeds
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut stream = ChaCha8Rng::seed_from_u64(s);
            let init = if i == 0 {
                PamInit::Build
            } else {
                PamInit::Random
            };
            pam_run(d, k, init, max_iter, &mut stream)
        })
        .collect::<Result<_, _>>()?;
    let best_init = runs.iter().enumerate().fold(0, |best, (i, r)| {
        if r.inertia < runs[best].inertia {
            i
        } else {
            best
        }
    });
    let best = &runs[best_init];
    Ok(PamResult {
        partition: partition_from_medoids(d, &best.medoids),
        medoids: best.medoids.clone(),
        inertia: best.inertia,
        best_init,
        runs,
    })
}
