//! `records.csv`: one row per (dataset, paradigm, algorithm, k).
//!
//! Columns: `dataset, paradigm, algorithm, k, ari, ami`, then for every
//! index variant `v` the fixed columns `v_<paradigm>` in paradigm order
//! followed by `v_mean` and `v_match`, then one `owm_<v>` per variant, and
//! finally `excluded_reason`. Undefined values are empty cells; OWM flags
//! are `1`/`0`.

use std::io::{Read, Write};

use super::config::Scaling;
use super::HarnessError;
use crate::rvi::RviKind;

/// An index as recorded: a plain RVI, or PBM under a global rescaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexVariant {
    pub kind: RviKind,
    pub scaling: Option<Scaling>,
}

impl IndexVariant {
    pub fn plain(kind: RviKind) -> Self {
        Self {
            kind,
            scaling: None,
        }
    }

    pub fn name(&self) -> String {
        match self.scaling {
            None => self.kind.name().to_string(),
            Some(s) => format!("{}_{}", self.kind.name(), s.name()),
        }
    }

    fn parse(name: &str) -> Option<Self> {
        for kind in RviKind::ALL {
            if name == kind.name() {
                return Some(Self::plain(kind));
            }
            for s in [Scaling::Max, Scaling::Global] {
                if name == format!("{}_{}", kind.name(), s.name()) {
                    return Some(Self {
                        kind,
                        scaling: Some(s),
                    });
                }
            }
        }
        None
    }
}

/// Column layout shared by every record of a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordSchema {
    pub paradigms: Vec<String>,
    pub variants: Vec<IndexVariant>,
}

impl RecordSchema {
    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["dataset", "paradigm", "algorithm", "k", "ari", "ami"]
            .map(String::from)
            .to_vec();
        for v in &self.variants {
            let name = v.name();
            h.extend(self.paradigms.iter().map(|p| format!("{name}_{p}")));
            h.push(format!("{name}_mean"));
            h.push(format!("{name}_match"));
        }
        h.extend(self.variants.iter().map(|v| format!("owm_{}", v.name())));
        h.push("excluded_reason".into());
        h
    }

    fn from_header(header: &[String]) -> Result<Self, HarnessError> {
        let bad = |m: &str| HarnessError::Records(m.to_string());
        let fixed = ["dataset", "paradigm", "algorithm", "k", "ari", "ami"];
        if header.len() < 7
            || header[..6] != fixed.map(String::from)
            || header.last().unwrap() != "excluded_reason"
        {
            return Err(bad("header does not start with dataset,paradigm,algorithm,k,ari,ami and end with excluded_reason"));
        }
        let variants: Vec<IndexVariant> = header
            .iter()
            .filter_map(|c| c.strip_prefix("owm_"))
            .map(|v| {
                IndexVariant::parse(v).ok_or_else(|| bad(&format!("unknown index variant {v:?}")))
            })
            .collect::<Result<_, _>>()?;
        if variants.is_empty() {
            return Err(bad("no owm_ columns"));
        }
        let value_cols = header.len() - 7 - variants.len();
        if value_cols % variants.len() != 0 || value_cols / variants.len() < 3 {
            return Err(bad("value column count does not match the owm_ columns"));
        }
        let first = variants[0].name();
        let per = value_cols / variants.len();
        let paradigms: Vec<String> = header[6..6 + per - 2]
            .iter()
            .map(|c| {
                c.strip_prefix(&format!("{first}_"))
                    .map(String::from)
                    .ok_or_else(|| bad(&format!("unexpected column {c:?}")))
            })
            .collect::<Result<_, _>>()?;
        let schema = Self {
            paradigms,
            variants,
        };
        if schema.header() != header {
            return Err(bad("header columns are not in the expected order"));
        }
        Ok(schema)
    }
}

/// Fixed, mean and matching values plus the OWM flag of one index for one
/// record.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexValues {
    pub fixed: Vec<Option<f64>>,
    pub mean: Option<f64>,
    pub matching: Option<f64>,
    pub owm: Option<bool>,
}

impl IndexValues {
    pub fn undefined(paradigms: usize) -> Self {
        Self {
            fixed: vec![None; paradigms],
            mean: None,
            matching: None,
            owm: None,
        }
    }

    /// Scheme values in column order: fixed paradigms, mean, match.
    pub fn schemes(&self) -> impl Iterator<Item = Option<f64>> + '_ {
        self.fixed.iter().copied().chain([self.mean, self.matching])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub dataset: String,
    pub paradigm: String,
    pub algorithm: String,
    pub k: usize,
    pub ari: Option<f64>,
    pub ami: Option<f64>,
    /// One entry per schema variant, in schema order.
    pub values: Vec<IndexValues>,
    pub excluded_reason: String,
}

impl ExperimentRecord {
    pub fn sort_key(&self) -> (&str, &str, &str, usize) {
        (&self.dataset, &self.paradigm, &self.algorithm, self.k)
    }

    fn to_row(&self) -> Vec<String> {
        let num = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        let mut row = vec![
            self.dataset.clone(),
            self.paradigm.clone(),
            self.algorithm.clone(),
            self.k.to_string(),
        ];
        row.push(num(self.ari));
        row.push(num(self.ami));
        for v in &self.values {
            row.extend(v.schemes().map(num));
        }
        row.extend(
            self.values
                .iter()
                .map(|v| v.owm.map_or(String::new(), |b| u8::from(b).to_string())),
        );
        row.push(self.excluded_reason.clone());
        row
    }

    fn from_row(
        schema: &RecordSchema,
        row: &csv::StringRecord,
        line: usize,
    ) -> Result<Self, HarnessError> {
        let bad = |m: String| HarnessError::Records(format!("line {line}: {m}"));
        let num = |s: &str| -> Result<Option<f64>, HarnessError> {
            if s.is_empty() {
                return Ok(None);
            }
            s.parse::<f64>()
                .map(Some)
                .map_err(|_| bad(format!("bad number {s:?}")))
        };
        let p = schema.paradigms.len();
        let mut values = Vec::with_capacity(schema.variants.len());
        for (vi, _) in schema.variants.iter().enumerate() {
            let base = 6 + vi * (p + 2);
            let fixed = (0..p)
                .map(|j| num(&row[base + j]))
                .collect::<Result<Vec<_>, _>>()?;
            let owm_cell = &row[6 + schema.variants.len() * (p + 2) + vi];
            let owm = match owm_cell {
                "" => None,
                "1" => Some(true),
                "0" => Some(false),
                other => return Err(bad(format!("bad owm flag {other:?}"))),
            };
            values.push(IndexValues {
                fixed,
                mean: num(&row[base + p])?,
                matching: num(&row[base + p + 1])?,
                owm,
            });
        }
        Ok(Self {
            dataset: row[0].to_string(),
            paradigm: row[1].to_string(),
            algorithm: row[2].to_string(),
            k: row[3]
                .parse()
                .map_err(|_| bad(format!("bad k {:?}", &row[3])))?,
            ari: num(&row[4])?,
            ami: num(&row[5])?,
            values,
            excluded_reason: row[row.len() - 1].to_string(),
        })
    }
}

/// A schema with its records.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordSet {
    pub schema: RecordSchema,
    pub records: Vec<ExperimentRecord>,
}

impl RecordSet {
    pub fn new(schema: RecordSchema) -> Self {
        Self {
            schema,
            records: Vec::new(),
        }
    }

    pub fn sort(&mut self) {
        self.records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    }

    /// Position of a variant in the schema.
    pub fn variant_index(&self, v: IndexVariant) -> Option<usize> {
        self.schema.variants.iter().position(|&x| x == v)
    }

    /// Scheme column names in value order: paradigms, `mean`, `match`.
    pub fn scheme_names(&self) -> Vec<String> {
        let mut out = self.schema.paradigms.clone();
        out.push("mean".into());
        out.push("match".into());
        out
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), HarnessError> {
        let mut writer = CsvRecordWriter::new(w, self.schema.clone())?;
        for r in &self.records {
            writer.accept(r)?;
        }
        writer.finish()
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self, HarnessError> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let header: Vec<String> = reader.headers()?.iter().map(String::from).collect();
        let schema = RecordSchema::from_header(&header)?;
        let mut records = Vec::new();
        for (i, row) in reader.records().enumerate() {
            records.push(ExperimentRecord::from_row(&schema, &row?, i + 2)?);
        }
        Ok(Self { schema, records })
    }
}

/// Receives records as the run produces them.
pub trait RecordSink {
    fn accept(&mut self, record: &ExperimentRecord) -> Result<(), HarnessError>;
}

impl RecordSink for Vec<ExperimentRecord> {
    fn accept(&mut self, record: &ExperimentRecord) -> Result<(), HarnessError> {
        self.push(record.clone());
        Ok(())
    }
}

/// Streams records to CSV, writing the header up front.
pub struct CsvRecordWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvRecordWriter<W> {
    pub fn new(w: W, schema: RecordSchema) -> Result<Self, HarnessError> {
        let mut inner = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        inner.write_record(schema.header())?;
        Ok(Self { inner })
    }

    pub fn finish(mut self) -> Result<(), HarnessError> {
        self.inner.flush().map_err(|e| HarnessError::Csv(e.into()))
    }
}

impl<W: Write> RecordSink for CsvRecordWriter<W> {
    fn accept(&mut self, record: &ExperimentRecord) -> Result<(), HarnessError> {
        self.inner.write_record(record.to_row())?;
        Ok(())
    }
}
