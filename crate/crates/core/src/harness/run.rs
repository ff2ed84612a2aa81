//! Executes the experiment grid.
//!
//! Datasets are processed one at a time in name order. Within a dataset,
//! clustering runs in parallel over (paradigm, algorithm) and k, and
//! evaluation runs in parallel over (algorithm, k). Every random draw comes
//! from a stream seeded by hashing `(seed, dataset, paradigm, algorithm, k)`
//! plus a stage tag, so output does not depend on scheduling. Records of a
//! dataset are sorted before they reach the sink.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{k_window, AlgorithmSpec, DatasetSpec, ExperimentConfig, Scaling};
use super::records::{
    ExperimentRecord, IndexValues, IndexVariant, RecordSchema, RecordSet, RecordSink,
};
use super::HarnessError;
use crate::dataset::{normalise, Axis, DataMatrix, LabelSet};
use crate::distances::{pairwise, scale_global, scale_max, DistanceMatrix};
use crate::evi::best_match;
use crate::partitions::{
    agglomerative, grand_medoid, kmedoids_pam, linkage, medoids, Partition, TieMode,
};
use crate::rvi::{self, RviKind};
use crate::schemes::RviValueTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunSummary {
    pub datasets: usize,
    pub records: usize,
    pub excluded: usize,
}

/// Stable 64-bit seed for one grid cell and stage.
pub fn cell_seed(
    seed: u64,
    dataset: &str,
    paradigm: &str,
    algorithm: &str,
    k: usize,
    stage: &str,
) -> u64 {
    // FNV-1a over the fields with a separator byte, then a SplitMix64
    // finaliser to spread the bits.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes.iter().chain(&[0xff]) {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    eat(&seed.to_le_bytes());
    eat(dataset.as_bytes());
    eat(paradigm.as_bytes());
    eat(algorithm.as_bytes());
    eat(&(k as u64).to_le_bytes());
    eat(stage.as_bytes());
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Column layout of the records a config produces.
pub fn record_schema(config: &ExperimentConfig) -> RecordSchema {
    let mut variants: Vec<IndexVariant> = config
        .rvis
        .iter()
        .map(|&k| IndexVariant::plain(k))
        .collect();
    for &s in &config.pbm_scalings {
        variants.push(IndexVariant {
            kind: RviKind::Pbm,
            scaling: Some(s),
        });
    }
    RecordSchema {
        paradigms: config.paradigms.iter().map(|p| p.name.clone()).collect(),
        variants,
    }
}

/// Runs the whole grid, handing sorted records to `sink`. Relative dataset
/// paths resolve against `base`.
pub fn run_experiment(
    config: &ExperimentConfig,
    base: &Path,
    sink: &mut dyn RecordSink,
) -> Result<RunSummary, HarnessError> {
    config.validate()?;
    let schema = record_schema(config);
    let mut datasets = config.all_datasets();
    datasets.sort_by(|a, b| a.name().cmp(b.name()));
    let mut summary = RunSummary::default();
    for spec in &datasets {
        let records = run_dataset(config, &schema, spec, base)?;
        summary.datasets += 1;
        for r in &records {
            summary.records += 1;
            summary.excluded += usize::from(!r.excluded_reason.is_empty());
            sink.accept(r)?;
        }
    }
    Ok(summary)
}

/// Convenience wrapper collecting every record in memory.
pub fn run_to_records(
    config: &ExperimentConfig,
    base: &Path,
) -> Result<(RecordSet, RunSummary), HarnessError> {
    let mut records = Vec::new();
    let summary = run_experiment(config, base, &mut records)?;
    Ok((
        RecordSet {
            schema: record_schema(config),
            records,
        },
        summary,
    ))
}

/// The distance matrix of one paradigm plus any rescaled copies for PBM.
struct ParadigmMatrices {
    base: DistanceMatrix,
    scaled: Vec<(Scaling, DistanceMatrix)>,
}

fn build_matrices(
    config: &ExperimentConfig,
    name: &str,
    data: &DataMatrix,
) -> Result<Vec<ParadigmMatrices>, HarnessError> {
    config
        .paradigms
        .iter()
        .map(|p| {
            let wrap = |source| HarnessError::Distance {
                dataset: name.to_string(),
                paradigm: p.name.clone(),
                source,
            };
            let prepared = match p.normalisation {
                Some(proc) => normalise(
                    data,
                    proc,
                    p.axis.unwrap_or_else(|| Axis::default_for(data.kind())),
                ),
                None => data.clone(),
            };
            let base = pairwise(&prepared, &p.measure)
                .map_err(wrap)?
                .with_paradigm_id(p.name.clone());
            let scaled = config
                .pbm_scalings
                .iter()
                .map(|&s| {
                    let m = match s {
                        Scaling::Max => scale_max(&base),
                        Scaling::Global => {
                            // Every grand-medoid candidate has the same minimal row sum.
                            let g = grand_medoid(
                                &base,
                                TieMode::LowestIndex,
                                &mut ChaCha8Rng::seed_from_u64(0),
                            );
                            scale_global(&base, g)
                        }
                    };
                    m.map(|m| (s, m)).map_err(wrap)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ParadigmMatrices { base, scaled })
        })
        .collect()
}

type Clustering = Result<Partition, String>;

/// Partitions indexed `[algorithm][k - k_min][paradigm]`.
fn cluster_all(
    config: &ExperimentConfig,
    dataset: &str,
    mats: &[ParadigmMatrices],
    ks: &[usize],
) -> Vec<Vec<Vec<Clustering>>> {
    let pairs: Vec<(usize, usize)> = (0..config.algorithms.len())
        .flat_map(|a| (0..mats.len()).map(move |p| (a, p)))
        .collect();
    let per_pair: Vec<Vec<Clustering>> = pairs
        .par_iter()
        .map(|&(a, p)| {
            let d = &mats[p].base;
            let paradigm = &config.paradigms[p].name;
            let algorithm = &config.algorithms[a];
            match algorithm {
                AlgorithmSpec::Agglomerative {
                    linkage: method, ..
                } => {
                    let dendro = linkage(d, *method);
                    ks.iter()
                        .map(|&k| dendro.cut(k).map_err(|e| e.to_string()))
                        .collect()
                }
                AlgorithmSpec::Pam {
                    n_init, max_iter, ..
                } => {
                    let name = algorithm.name();
                    ks.par_iter()
                        .map(|&k| {
                            let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(
                                config.seed,
                                dataset,
                                paradigm,
                                &name,
                                k,
                                "cluster",
                            ));
                            kmedoids_pam(d, k, *n_init, *max_iter, &mut rng)
                                .map(|r| r.partition)
                                .map_err(|e| e.to_string())
                        })
                        .collect()
                }
            }
        })
        .collect();
    let mut out: Vec<Vec<Vec<Clustering>>> = (0..config.algorithms.len())
        .map(|_| {
            (0..ks.len())
                .map(|_| Vec::with_capacity(mats.len()))
                .collect()
        })
        .collect();
    for ((a, _), parts) in pairs.into_iter().zip(per_pair) {
        for (ki, part) in parts.into_iter().enumerate() {
            out[a][ki].push(part);
        }
    }
    out
}

/// Cells of every variant for one clustering row, evaluated under every
/// paradigm. Returns `[variant][column]`.
fn evaluate_row(
    config: &ExperimentConfig,
    schema: &RecordSchema,
    mats: &[ParadigmMatrices],
    p: &Partition,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<Option<f64>>>, HarnessError> {
    let needs_protos = schema.variants.iter().any(|v| v.kind.prototype_sensitive());
    let mut cells = vec![Vec::with_capacity(mats.len()); schema.variants.len()];
    for m in mats {
        let protos = if needs_protos {
            Some(
                medoids(&m.base, p, config.tie_mode, rng)
                    .map_err(|e| HarnessError::Records(e.to_string()))?,
            )
        } else {
            None
        };
        for (vi, v) in schema.variants.iter().enumerate() {
            let d = match v.scaling {
                None => &m.base,
                Some(s) => {
                    &m.scaled
                        .iter()
                        .find(|(x, _)| *x == s)
                        .expect("scaled matrix built")
                        .1
                }
            };
            let score = rvi::compute(v.kind, d, p, protos.as_ref())
                .map_err(|e| HarnessError::Records(e.to_string()))?;
            cells[vi].push(score.value);
        }
    }
    Ok(cells)
}

fn run_dataset(
    config: &ExperimentConfig,
    schema: &RecordSchema,
    spec: &DatasetSpec,
    base: &Path,
) -> Result<Vec<ExperimentRecord>, HarnessError> {
    let name = spec.name();
    let (data, labels) = spec.load(base)?;
    let (k_min, k_max) = k_window(labels.cluster_counts(), config.k_range)?;
    let ks: Vec<usize> = (k_min..=k_max).collect();
    let mats = build_matrices(config, name, &data)?;
    let partitions = cluster_all(config, name, &mats, &ks);

    let groups: Vec<(usize, usize)> = (0..config.algorithms.len())
        .flat_map(|a| (0..ks.len()).map(move |ki| (a, ki)))
        .collect();
    let per_group: Vec<Vec<ExperimentRecord>> = groups
        .par_iter()
        .map(|&(a, ki)| {
            evaluate_group(
                config,
                schema,
                name,
                &labels,
                &mats,
                &partitions[a][ki],
                a,
                ks[ki],
            )
        })
        .collect::<Result<_, _>>()?;
    let mut records: Vec<ExperimentRecord> = per_group.into_iter().flatten().collect();
    records.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    Ok(records)
}

#[allow(clippy::too_many_arguments)]
fn evaluate_group(
    config: &ExperimentConfig,
    schema: &RecordSchema,
    dataset: &str,
    labels: &LabelSet,
    mats: &[ParadigmMatrices],
    parts: &[Clustering],
    a: usize,
    k: usize,
) -> Result<Vec<ExperimentRecord>, HarnessError> {
    let algorithm = config.algorithms[a].name();
    let n_par = mats.len();
    // rows[s][variant][column]
    let mut rows: Vec<Option<Vec<Vec<Option<f64>>>>> = Vec::with_capacity(n_par);
    let mut evis: Vec<(Option<f64>, Option<f64>)> = Vec::with_capacity(n_par);
    for (s, part) in parts.iter().enumerate() {
        match part {
            Ok(p) if p.k() >= 2 => {
                let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(
                    config.seed,
                    dataset,
                    &config.paradigms[s].name,
                    &algorithm,
                    k,
                    "evaluate",
                ));
                rows.push(Some(evaluate_row(config, schema, mats, p, &mut rng)?));
                let evi = if labels.is_empty() {
                    (None, None)
                } else {
                    let (ari, ami) =
                        best_match(p, labels).map_err(|e| HarnessError::Records(e.to_string()))?;
                    (Some(ari), Some(ami))
                };
                evis.push(evi);
            }
            _ => {
                rows.push(None);
                evis.push((None, None));
            }
        }
    }
    let ids: Vec<String> = config.paradigms.iter().map(|p| p.name.clone()).collect();
    let ari_col: Vec<f64> = evis.iter().map(|e| e.0.unwrap_or(f64::NAN)).collect();
    let mut values: Vec<Vec<IndexValues>> = vec![Vec::with_capacity(schema.variants.len()); n_par];
    for (vi, v) in schema.variants.iter().enumerate() {
        let cells: Vec<Vec<Option<f64>>> = rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .map_or_else(|| vec![None; n_par], |r| r[vi].clone())
            })
            .collect();
        let table = RviValueTable::from_cells(v.kind, ids.clone(), cells, ari_col.clone())
            .map_err(|e| HarnessError::Records(e.to_string()))?;
        let owm = table.owm_flags();
        for s in 0..n_par {
            values[s].push(IndexValues {
                fixed: table.row(s).to_vec(),
                mean: table.mean_value(s),
                matching: table.matching_value(s),
                owm: owm[s],
            });
        }
    }
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(s, vals)| {
            let excluded_reason = match &parts[s] {
                Err(e) => format!("clustering_failed: {e}"),
                Ok(p) if p.k() < 2 => "trivial_partition".to_string(),
                Ok(_) => {
                    let undefined: Vec<String> = schema
                        .variants
                        .iter()
                        .zip(&vals)
                        .filter(|(_, iv)| iv.schemes().any(|x| x.is_none()))
                        .map(|(v, _)| v.name())
                        .collect();
                    if undefined.is_empty() {
                        String::new()
                    } else {
                        format!("undefined_rvi: {}", undefined.join(";"))
                    }
                }
            };
            ExperimentRecord {
                dataset: dataset.to_string(),
                paradigm: config.paradigms[s].name.clone(),
                algorithm: algorithm.clone(),
                k,
                ari: evis[s].0,
                ami: evis[s].1,
                values: vals,
                excluded_reason,
            }
        })
        .collect())
}

/// Clusters one distance matrix into `k` clusters with a configured algorithm.
pub fn cluster_with(
    d: &DistanceMatrix,
    algorithm: &AlgorithmSpec,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Partition, String> {
    match algorithm {
        AlgorithmSpec::Agglomerative {
            linkage: method, ..
        } => agglomerative(d, *method, k).map_err(|e| e.to_string()),
        AlgorithmSpec::Pam {
            n_init, max_iter, ..
        } => kmedoids_pam(d, k, *n_init, *max_iter, rng)
            .map(|r| r.partition)
            .map_err(|e| e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_stable_and_distinct() {
        let a = cell_seed(1, "d", "ED", "ward", 3, "cluster");
        assert_eq!(a, cell_seed(1, "d", "ED", "ward", 3, "cluster"));
        assert_ne!(a, cell_seed(1, "d", "ED", "ward", 4, "cluster"));
        assert_ne!(a, cell_seed(2, "d", "ED", "ward", 3, "cluster"));
        assert_ne!(a, cell_seed(1, "d", "ED", "ward", 3, "evaluate"));
        // field boundaries matter
        assert_ne!(
            cell_seed(1, "ab", "c", "x", 2, "s"),
            cell_seed(1, "a", "bc", "x", 2, "s")
        );
    }
}
