//! Evaluation schemes over a square table of index values.
//!
//! Row `s` holds the partition produced under paradigm `s`; column `t`
//! holds the index evaluated under paradigm `t`. From this table come the
//! fixed (one column), matching (diagonal) and mean (row average) values,
//! the optimal-when-matching flag per row, and the coincidence of optima
//! and Pearson correlation of each column against an external index.
//!
//! Optima are compared by exact floating-point equality, and a tie that
//! includes the reference optimum counts as a hit.

use std::io::Write;

use rand::Rng;

use crate::distances::DistanceMatrix;
use crate::partitions::{Partition, TieMode};
use crate::rvi::{self, Direction, RviError, RviKind};

#[derive(Debug, thiserror::Error)]
pub enum SchemeError {
    #[error("{what}: expected {expected} entries, got {got}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("paradigm ids differ between partitions and matrices")]
    IdMismatch,
    #[error("need at least {0} values")]
    TooShort(usize),
    #[error("every index value is undefined")]
    AllUndefined,
    #[error(transparent)]
    Rvi(#[from] RviError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// One index evaluated for every (clustering paradigm, evaluation
/// paradigm) pair of a single (dataset, algorithm, k) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RviValueTable {
    rvi: RviKind,
    ids: Vec<String>,
    cells: Vec<Option<f64>>,
    evi_per_row: Vec<f64>,
}

/// Which single value of a table row a scheme uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Fixed(usize),
    Mean,
    Match,
}

/// Everything derived from one table against its external index.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionOutcome {
    /// Per row; `None` when the matching cell is undefined.
    pub owm: Vec<Option<bool>>,
    /// Per column followed by mean and match; `None` when every value in
    /// the column is undefined.
    pub co: Vec<Option<bool>>,
    /// Same layout as `co`.
    pub correlation: Vec<Option<f64>>,
}

impl RviValueTable {
    /// Evaluates partition `s` (produced under paradigm `s`) with matrix `t`
    /// for every `s, t`. Medoids for prototype-sensitive indices come from
    /// the evaluating matrix. `evi_per_row` starts as zeros; attach real
    /// values with [`RviValueTable::with_evi`].
    pub fn build<R: Rng + ?Sized>(
        partitions: &[(String, Partition)],
        matrices: &[DistanceMatrix],
        rvi: RviKind,
        tie_mode: TieMode,
        rng: &mut R,
    ) -> Result<Self, SchemeError> {
        if partitions.len() != matrices.len() {
            return Err(SchemeError::ShapeMismatch {
                what: "matrices",
                expected: partitions.len(),
                got: matrices.len(),
            });
        }
        if partitions
            .iter()
            .zip(matrices)
            .any(|((id, _), m)| id != m.paradigm_id())
        {
            return Err(SchemeError::IdMismatch);
        }
        let mut cells = Vec::with_capacity(partitions.len() * matrices.len());
        for (_, p) in partitions {
            for d in matrices {
                cells.push(rvi::compute_with_medoids(rvi, d, p, tie_mode, rng)?.value);
            }
        }
        let ids = partitions.iter().map(|(id, _)| id.clone()).collect();
        Ok(Self {
            rvi,
            ids,
            cells,
            evi_per_row: vec![0.0; partitions.len()],
        })
    }

    /// Builds a table from precomputed rows of cells.
    pub fn from_cells(
        rvi: RviKind,
        ids: Vec<String>,
        rows: Vec<Vec<Option<f64>>>,
        evi: Vec<f64>,
    ) -> Result<Self, SchemeError> {
        let m = ids.len();
        if rows.len() != m {
            return Err(SchemeError::ShapeMismatch {
                what: "rows",
                expected: m,
                got: rows.len(),
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(SchemeError::ShapeMismatch {
                what: "row cells",
                expected: m,
                got: bad.len(),
            });
        }
        if evi.len() != m {
            return Err(SchemeError::ShapeMismatch {
                what: "evi values",
                expected: m,
                got: evi.len(),
            });
        }
        Ok(Self {
            rvi,
            ids,
            cells: rows.concat(),
            evi_per_row: evi,
        })
    }

    pub fn with_evi(mut self, evi: Vec<f64>) -> Result<Self, SchemeError> {
        if evi.len() != self.ids.len() {
            return Err(SchemeError::ShapeMismatch {
                what: "evi values",
                expected: self.ids.len(),
                got: evi.len(),
            });
        }
        self.evi_per_row = evi;
        Ok(self)
    }

    pub fn rvi(&self) -> RviKind {
        self.rvi
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn evi(&self) -> &[f64] {
        &self.evi_per_row
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<f64> {
        self.cells[row * self.ids.len() + col]
    }

    pub fn row(&self, row: usize) -> &[Option<f64>] {
        let m = self.ids.len();
        &self.cells[row * m..(row + 1) * m]
    }

    pub fn matching_value(&self, row: usize) -> Option<f64> {
        self.cell(row, row)
    }

    /// Mean over the defined cells of the row.
    pub fn mean_value(&self, row: usize) -> Option<f64> {
        let defined: Vec<f64> = self.row(row).iter().flatten().copied().collect();
        (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64)
    }

    /// True when the mean of this row skipped at least one undefined cell.
    pub fn mean_is_partial(&self, row: usize) -> bool {
        self.row(row).iter().any(Option::is_none)
    }

    pub fn value(&self, row: usize, scheme: Scheme) -> Option<f64> {
        match scheme {
            Scheme::Fixed(col) => self.cell(row, col),
            Scheme::Mean => self.mean_value(row),
            Scheme::Match => self.matching_value(row),
        }
    }

    /// The fixed columns in id order, then mean, then match.
    pub fn schemes(&self) -> Vec<Scheme> {
        let mut out: Vec<Scheme> = (0..self.ids.len()).map(Scheme::Fixed).collect();
        out.push(Scheme::Mean);
        out.push(Scheme::Match);
        out
    }

    pub fn column(&self, scheme: Scheme) -> Vec<Option<f64>> {
        (0..self.ids.len()).map(|r| self.value(r, scheme)).collect()
    }

    /// Whether each row's matching cell attains the best value of its row.
    pub fn owm_flags(&self) -> Vec<Option<bool>> {
        (0..self.ids.len())
            .map(|r| {
                let own = self.rvi.oriented(self.matching_value(r)?);
                let best = self
                    .row(r)
                    .iter()
                    .flatten()
                    .map(|&v| self.rvi.oriented(v))
                    .fold(f64::NEG_INFINITY, f64::max);
                Some(own >= best)
            })
            .collect()
    }

    pub fn outcome(&self) -> SelectionOutcome {
        let dir = self.rvi.direction();
        let mut co = Vec::new();
        let mut correlation = Vec::new();
        for scheme in self.schemes() {
            let col = self.column(scheme);
            co.push(co_flag(&col, &self.evi_per_row, dir).ok());
            correlation.push(pearson_defined(&col, &self.evi_per_row, dir).ok().flatten());
        }
        SelectionOutcome {
            owm: self.owm_flags(),
            co,
            correlation,
        }
    }

    /// Writes the table as CSV: one row per partition with its fixed
    /// values, mean, match, external index and OWM flag, then a `co` row
    /// and a `corr` row over the value columns. `decimals` rounds the
    /// printed index values.
    pub fn write_csv<W: Write>(
        &self,
        mut w: W,
        evi_name: &str,
        decimals: Option<usize>,
    ) -> Result<(), SchemeError> {
        let fmt = |v: Option<f64>| match (v, decimals) {
            (None, _) => String::new(),
            (Some(x), Some(d)) => format!("{x:.d$}"),
            (Some(x), None) => x.to_string(),
        };
        let flag = |b: Option<bool>| b.map_or(String::new(), |b| u8::from(b).to_string());
        let mut header = vec!["partition".to_string()];
        header.extend(self.ids.iter().cloned());
        header.extend([
            "mean".into(),
            "match".into(),
            evi_name.to_string(),
            "owm".into(),
        ]);
        writeln!(w, "{}", header.join(","))?;
        let owm = self.owm_flags();
        for r in 0..self.ids.len() {
            let mut line = vec![self.ids[r].clone()];
            line.extend(self.schemes().into_iter().map(|s| fmt(self.value(r, s))));
            line.push(fmt(Some(self.evi_per_row[r])));
            line.push(flag(owm[r]));
            writeln!(w, "{}", line.join(","))?;
        }
        let outcome = self.outcome();
        let mut co = vec!["co".to_string()];
        co.extend(outcome.co.iter().map(|&b| flag(b)));
        co.extend([String::new(), String::new()]);
        writeln!(w, "{}", co.join(","))?;
        let mut corr = vec!["corr".to_string()];
        corr.extend(outcome.correlation.iter().map(|&c| fmt(c)));
        corr.extend([String::new(), String::new()]);
        writeln!(w, "{}", corr.join(","))?;
        Ok(())
    }
}

/// Indices of the maximal entries, comparing exactly.
fn argmax_set(values: impl Iterator<Item = (usize, f64)>) -> Vec<usize> {
    let mut best = f64::NEG_INFINITY;
    let mut idx = Vec::new();
    for (i, v) in values {
        if v > best {
            best = v;
            idx.clear();
            idx.push(i);
        } else if v == best {
            idx.push(i);
        }
    }
    idx
}

/// Coincidence of optima: whether some partition optimal for the index is
/// also optimal for the external index. Undefined index values never win.
pub fn co_flag(
    rvi_values: &[Option<f64>],
    evi_values: &[f64],
    direction: Direction,
) -> Result<bool, SchemeError> {
    if rvi_values.len() != evi_values.len() {
        return Err(SchemeError::ShapeMismatch {
            what: "evi values",
            expected: rvi_values.len(),
            got: evi_values.len(),
        });
    }
    if rvi_values.len() < 2 {
        return Err(SchemeError::TooShort(2));
    }
    let oriented = rvi_values.iter().enumerate().filter_map(|(i, v)| {
        v.map(|x| {
            (
                i,
                if direction == Direction::Maximise {
                    x
                } else {
                    -x
                },
            )
        })
    });
    let rvi_best = argmax_set(oriented);
    if rvi_best.is_empty() {
        return Err(SchemeError::AllUndefined);
    }
    let evi_best = argmax_set(evi_values.iter().copied().enumerate());
    Ok(rvi_best.iter().any(|i| evi_best.contains(i)))
}

/// Pearson correlation with minimisation indices negated first. `None`
/// when either vector is constant.
pub fn pearson(
    rvi_values: &[f64],
    evi_values: &[f64],
    direction: Direction,
) -> Result<Option<f64>, SchemeError> {
    if rvi_values.len() != evi_values.len() {
        return Err(SchemeError::ShapeMismatch {
            what: "evi values",
            expected: rvi_values.len(),
            got: evi_values.len(),
        });
    }
    let n = rvi_values.len();
    if n < 2 {
        return Err(SchemeError::TooShort(2));
    }
    let sign = if direction == Direction::Maximise {
        1.0
    } else {
        -1.0
    };
    let mx = rvi_values.iter().sum::<f64>() / n as f64;
    let my = evi_values.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in rvi_values.iter().zip(evi_values) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    Ok(Some(
        (sign * sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0),
    ))
}

/// [`pearson`] over the positions where the index value is defined.
pub fn pearson_defined(
    rvi_values: &[Option<f64>],
    evi_values: &[f64],
    direction: Direction,
) -> Result<Option<f64>, SchemeError> {
    if rvi_values.len() != evi_values.len() {
        return Err(SchemeError::ShapeMismatch {
            what: "evi values",
            expected: rvi_values.len(),
            got: evi_values.len(),
        });
    }
    let (x, y): (Vec<f64>, Vec<f64>) = rvi_values
        .iter()
        .zip(evi_values)
        .filter_map(|(r, &e)| r.map(|v| (v, e)))
        .unzip();
    if x.len() < 2 {
        return Ok(None);
    }
    pearson(&x, &y, direction)
}
