//! `spbench`: command-line front end for the clustering-validation harness.
//!
//! Exit codes: 0 success, 2 bad arguments or configuration, 3 I/O failure,
//! 4 computation failure. Each run echoes its resolved settings to stderr.

use std::fmt::Display;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spbench_core::dataset::{
    degrade_labels, load_matrix, normalise, Axis, DataKind, DataMatrix, DatasetError, DegradeMode,
    InputFormat, LabelSet, Normalisation,
};
use spbench_core::distances::{pairwise, DistanceMatrix, Measure};
use spbench_core::harness::{
    cluster_with, degradation_curve, record_schema, run_experiment, sample_null_distribution,
    write_reports, AlgorithmSpec, CsvRecordWriter, ExperimentConfig, HarnessError, NullMode,
    RecordSet,
};
use spbench_core::partitions::{Linkage, Partition, TieMode};
use spbench_core::rvi::{compute_with_medoids, RviKind};

#[derive(Parser)]
#[command(
    name = "spbench",
    version,
    about = "Relative validity indices across similarity paradigms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a pairwise distance matrix.
    Distances(DistancesArgs),
    /// Cluster a dataset into k clusters.
    Cluster(ClusterArgs),
    /// Score a partition with validity indices under one or more measures.
    Evaluate(EvaluateArgs),
    /// Run an experiment grid from a TOML config and write records.csv.
    Run(RunArgs),
    /// Sample an index's distribution over random partitions.
    NullDist(NullDistArgs),
    /// Tamper with ground-truth labels, or trace the ARI degradation curve.
    DegradeLabels(DegradeArgs),
    /// Aggregate a records.csv into the summary tables.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Seed for every random choice made by the command.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    /// Tab-separated, label in the first field (time series).
    UcrTsv,
    /// Comma-separated with a header ending in `label`.
    Csv,
    /// Whitespace-separated matrix without labels.
    Matrix,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Vectors,
    Series,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MeasureArg {
    Euclidean,
    Manhattan,
    Chebyshev,
    Canberra,
    Braycurtis,
    Cosine,
    Dtw,
    Msm,
    Twed,
    Sbd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    ZNorm,
    MinMax,
    UnitNorm,
}

#[derive(Args, Debug)]
struct DataArgs {
    /// Dataset file.
    #[arg(long)]
    data: PathBuf,
    /// File layout (default: from the extension; .tsv is ucr-tsv, .csv is csv).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Row kind for the matrix format.
    #[arg(long, value_enum, default_value_t = KindArg::Vectors)]
    kind: KindArg,
    /// Normalisation applied before measuring.
    #[arg(long, value_enum)]
    normalise: Option<NormArg>,
    /// Exponent for unit-norm normalisation.
    #[arg(long, default_value_t = 2.0)]
    norm_p: f64,
}

#[derive(Args, Debug)]
struct MeasureParams {
    /// Sakoe-Chiba band as a fraction of the series length (dtw).
    #[arg(long, default_value_t = 0.05)]
    window_frac: f64,
    /// Split/merge cost (msm).
    #[arg(long, default_value_t = 1.0)]
    msm_cost: f64,
    /// Stiffness (twed).
    #[arg(long, default_value_t = 0.05)]
    twed_nu: f64,
    /// Edit penalty (twed).
    #[arg(long, default_value_t = 1.0)]
    twed_lambda: f64,
}

impl MeasureParams {
    fn build(&self, m: MeasureArg) -> Measure {
        match m {
            MeasureArg::Euclidean => Measure::Euclidean,
            MeasureArg::Manhattan => Measure::Manhattan,
            MeasureArg::Chebyshev => Measure::Chebyshev,
            MeasureArg::Canberra => Measure::Canberra,
            MeasureArg::Braycurtis => Measure::Braycurtis,
            MeasureArg::Cosine => Measure::Cosine,
            MeasureArg::Dtw => Measure::Dtw {
                window_frac: self.window_frac,
            },
            MeasureArg::Msm => Measure::Msm {
                cost: self.msm_cost,
            },
            MeasureArg::Twed => Measure::Twed {
                nu: self.twed_nu,
                lambda: self.twed_lambda,
            },
            MeasureArg::Sbd => Measure::Sbd,
        }
    }
}

#[derive(Args, Debug)]
struct DistancesArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_enum)]
    measure: MeasureArg,
    #[command(flatten)]
    params: MeasureParams,
    /// Output CSV (full matrix, no header).
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgorithmArg {
    Single,
    Complete,
    Average,
    Weighted,
    Ward,
    Pam,
}

#[derive(Args, Debug)]
struct ClusterArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_enum)]
    measure: MeasureArg,
    #[command(flatten)]
    params: MeasureParams,
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    /// Number of clusters.
    #[arg(long)]
    k: usize,
    /// PAM restarts.
    #[arg(long, default_value_t = 30)]
    n_init: usize,
    /// PAM swap iterations per restart.
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Output label file (one label per line).
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TieArg {
    Random,
    LowestIndex,
}

impl From<TieArg> for TieMode {
    fn from(t: TieArg) -> Self {
        match t {
            TieArg::Random => TieMode::Random,
            TieArg::LowestIndex => TieMode::LowestIndex,
        }
    }
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Partition file (one integer label per line).
    #[arg(long)]
    labels: PathBuf,
    /// Measures to evaluate under; repeat for several.
    #[arg(long, value_enum, required = true)]
    measure: Vec<MeasureArg>,
    #[command(flatten)]
    params: MeasureParams,
    /// Indices to compute (swc, dunn, c_index, aucc, chi, dbi, pbm); repeat for several.
    #[arg(long, required = true)]
    rvi: Vec<RviKind>,
    /// How ties between medoid candidates are broken.
    #[arg(long, value_enum, default_value_t = TieArg::Random)]
    tie_mode: TieArg,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for records.csv and the resolved config.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the seed in the config when given.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NullModeArg {
    Uniform,
    FixedK,
}

#[derive(Args, Debug)]
struct NullDistArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_enum)]
    measure: MeasureArg,
    #[command(flatten)]
    params: MeasureParams,
    /// Name used for the paradigm in the output file name (default: the measure).
    #[arg(long)]
    paradigm: Option<String>,
    #[arg(long)]
    rvi: RviKind,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = NullModeArg::Uniform)]
    mode: NullModeArg,
    /// Cluster count for fixed-k sampling.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 50)]
    bins: usize,
    #[arg(long, value_enum, default_value_t = TieArg::Random)]
    tie_mode: TieArg,
    /// Output directory; the histogram is written as null_hist_<rvi>_<paradigm>.csv.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DegradeArg {
    Shuffle,
    Replace,
}

impl From<DegradeArg> for DegradeMode {
    fn from(d: DegradeArg) -> Self {
        match d {
            DegradeArg::Shuffle => DegradeMode::Shuffle,
            DegradeArg::Replace => DegradeMode::Replace,
        }
    }
}

#[derive(Args, Debug)]
struct DegradeArgs {
    /// Ground-truth label file (one integer label per line).
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, value_enum)]
    mode: Vec<DegradeArg>,
    /// Fraction of labels to tamper with; writes one degraded label file.
    #[arg(long, conflicts_with = "fractions")]
    fraction: Option<f64>,
    /// Comma-separated fractions; writes the mean ARI curve instead.
    #[arg(long, value_delimiter = ',')]
    fractions: Vec<f64>,
    /// Repetitions per fraction for the curve.
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// records.csv written by `run`.
    #[arg(long)]
    records: PathBuf,
    /// Output directory (default: the directory of the records file).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Datasets are retained when their best ARI exceeds this.
    #[arg(long, default_value_t = 0.6)]
    threshold: f64,
    /// Aggregate only the retained datasets.
    #[arg(long)]
    restrict: bool,
    /// Accepted for uniformity; aggregation is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
}

/// A failure with its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Compute(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Compute(m) => m,
        }
    }

    fn io(path: &Path, e: impl Display) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }

    fn compute(e: impl Display) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let msg = e.to_string();
        match e {
            HarnessError::Config(_) => Failure::Usage(msg),
            HarnessError::Io { .. } => Failure::Io(msg),
            HarnessError::Dataset {
                source: DatasetError::Io { .. },
                ..
            } => Failure::Io(msg),
            HarnessError::Csv(ref c) if c.is_io_error() => Failure::Io(msg),
            _ => Failure::Compute(msg),
        }
    }
}

fn init_threads(threads: Option<usize>) -> Result<(), Failure> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(Failure::compute)?;
    }
    Ok(())
}

fn echo(command: &str, settings: &[(&str, String)]) {
    let parts: Vec<String> = settings.iter().map(|(k, v)| format!("{k}={v}")).collect();
    eprintln!("spbench {command}: {}", parts.join(" "));
}

fn load(args: &DataArgs) -> Result<(DataMatrix, LabelSet), Failure> {
    let format =
        args.format
            .unwrap_or_else(|| match args.data.extension().and_then(|e| e.to_str()) {
                Some("tsv") => FormatArg::UcrTsv,
                Some("csv") => FormatArg::Csv,
                _ => FormatArg::Matrix,
            });
    let format = match format {
        FormatArg::UcrTsv => InputFormat::UcrTsv,
        FormatArg::Csv => InputFormat::CsvWithLabels,
        FormatArg::Matrix => InputFormat::MatrixPlusLabelFiles {
            label_files: Vec::new(),
            kind: match args.kind {
                KindArg::Vectors => DataKind::FeatureVectors,
                KindArg::Series => DataKind::TimeSeries,
            },
        },
    };
    let (data, labels) = load_matrix(&args.data, &format).map_err(|e| match e {
        DatasetError::Io { .. } => Failure::Io(e.to_string()),
        other => Failure::Compute(format!("{}: {other}", args.data.display())),
    })?;
    let data = match args.normalise {
        None => data,
        Some(n) => {
            let procedure = match n {
                NormArg::ZNorm => Normalisation::ZNorm,
                NormArg::MinMax => Normalisation::MinMax,
                NormArg::UnitNorm => Normalisation::UnitNorm { p: args.norm_p },
            };
            normalise(&data, procedure, Axis::default_for(data.kind()))
        }
    };
    Ok((data, labels))
}

fn matrix(data: &DataMatrix, measure: &Measure, id: &str) -> Result<DistanceMatrix, Failure> {
    measure
        .validate()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(pairwise(data, measure)
        .map_err(Failure::compute)?
        .with_paradigm_id(id))
}

fn create(path: &Path) -> Result<io::BufWriter<fs::File>, Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Failure::io(parent, e))?;
    }
    fs::File::create(path)
        .map(io::BufWriter::new)
        .map_err(|e| Failure::io(path, e))
}

fn read_partition(path: &Path) -> Result<Partition, Failure> {
    let file = fs::File::open(path).map_err(|e| Failure::io(path, e))?;
    Partition::read_labels(BufReader::new(file))
        .map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))
}

fn distances(a: DistancesArgs) -> Result<(), Failure> {
    init_threads(a.common.threads)?;
    let measure = a.params.build(a.measure);
    echo(
        "distances",
        &[
            ("data", a.data.data.display().to_string()),
            ("measure", measure.to_string()),
            ("seed", a.common.seed.to_string()),
        ],
    );
    let (data, _) = load(&a.data)?;
    let d = matrix(&data, &measure, &measure.to_string())?;
    let mut w = create(&a.out)?;
    d.write_csv(&mut w).map_err(|e| Failure::io(&a.out, e))?;
    w.flush().map_err(|e| Failure::io(&a.out, e))
}

fn cluster(a: ClusterArgs) -> Result<(), Failure> {
    init_threads(a.common.threads)?;
    let measure = a.params.build(a.measure);
    let algorithm = match a.algorithm {
        AlgorithmArg::Pam => AlgorithmSpec::Pam {
            n_init: a.n_init,
            max_iter: a.max_iter,
            name: None,
        },
        other => AlgorithmSpec::Agglomerative {
            linkage: match other {
                AlgorithmArg::Single => Linkage::Single,
                AlgorithmArg::Complete => Linkage::Complete,
                AlgorithmArg::Average => Linkage::Average,
                AlgorithmArg::Weighted => Linkage::Weighted,
                _ => Linkage::Ward,
            },
            name: None,
        },
    };
    echo(
        "cluster",
        &[
            ("data", a.data.data.display().to_string()),
            ("measure", measure.to_string()),
            ("algorithm", algorithm.name()),
            ("k", a.k.to_string()),
            ("seed", a.common.seed.to_string()),
        ],
    );
    let (data, _) = load(&a.data)?;
    let d = matrix(&data, &measure, &measure.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let p = cluster_with(&d, &algorithm, a.k, &mut rng).map_err(Failure::Compute)?;
    let mut w = create(&a.out)?;
    p.write_labels(&mut w).map_err(|e| Failure::io(&a.out, e))?;
    w.flush().map_err(|e| Failure::io(&a.out, e))
}

fn evaluate(a: EvaluateArgs) -> Result<(), Failure> {
    init_threads(a.common.threads)?;
    let measures: Vec<Measure> = a.measure.iter().map(|&m| a.params.build(m)).collect();
    let names: Vec<String> = measures.iter().map(ToString::to_string).collect();
    let rvis: Vec<&str> = a.rvi.iter().map(|r| r.name()).collect();
    echo(
        "evaluate",
        &[
            ("data", a.data.data.display().to_string()),
            ("labels", a.labels.display().to_string()),
            ("measures", names.join(";")),
            ("rvis", rvis.join(";")),
            ("tie_mode", format!("{:?}", a.tie_mode)),
            ("seed", a.common.seed.to_string()),
        ],
    );
    let (data, _) = load(&a.data)?;
    let p = read_partition(&a.labels)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let mut out = csv::Writer::from_writer(io::stdout().lock());
    let stdout_err = |e: csv::Error| Failure::Io(format!("stdout: {e}"));
    out.write_record(["rvi", "measure", "value"])
        .map_err(stdout_err)?;
    for (measure, name) in measures.iter().zip(&names) {
        let d = matrix(&data, measure, name)?;
        for &kind in &a.rvi {
            let score = compute_with_medoids(kind, &d, &p, a.tie_mode.into(), &mut rng)
                .map_err(Failure::compute)?;
            let value = score.value.map_or(String::new(), |v| v.to_string());
            out.write_record([kind.name(), name, &value])
                .map_err(stdout_err)?;
        }
    }
    out.flush().map_err(|e| Failure::Io(format!("stdout: {e}")))
}

fn run(a: RunArgs) -> Result<(), Failure> {
    init_threads(a.threads)?;
    let text = fs::read_to_string(&a.config).map_err(|e| Failure::io(&a.config, e))?;
    let mut config = ExperimentConfig::from_toml(&text)?;
    if let Some(seed) = a.seed {
        config.seed = seed;
    }
    let resolved = config.to_toml();
    eprintln!("spbench run: resolved config\n{resolved}");
    fs::create_dir_all(&a.out).map_err(|e| Failure::io(&a.out, e))?;
    let resolved_path = a.out.join("config.resolved.toml");
    fs::write(&resolved_path, &resolved).map_err(|e| Failure::io(&resolved_path, e))?;
    let base = a.config.parent().unwrap_or(Path::new("."));
    let records_path = a.out.join("records.csv");
    let schema = record_schema(&config);
    let mut writer = CsvRecordWriter::new(create(&records_path)?, schema)?;
    let summary = run_experiment(&config, base, &mut writer)?;
    writer.finish()?;
    eprintln!(
        "spbench run: {} datasets, {} records ({} with an exclusion reason) -> {}",
        summary.datasets,
        summary.records,
        summary.excluded,
        records_path.display()
    );
    Ok(())
}

fn null_dist(a: NullDistArgs) -> Result<(), Failure> {
    init_threads(a.common.threads)?;
    let measure = a.params.build(a.measure);
    let paradigm = a
        .paradigm
        .clone()
        .unwrap_or_else(|| format!("{:?}", a.measure).to_lowercase());
    let mode = match (a.mode, a.k) {
        (NullModeArg::Uniform, _) => NullMode::Uniform,
        (NullModeArg::FixedK, Some(k)) => NullMode::FixedK(k),
        (NullModeArg::FixedK, None) => {
            return Err(Failure::Usage("--mode fixed-k needs --k".into()))
        }
    };
    if a.samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    echo(
        "null-dist",
        &[
            ("data", a.data.data.display().to_string()),
            ("measure", measure.to_string()),
            ("rvi", a.rvi.name().to_string()),
            ("samples", a.samples.to_string()),
            ("mode", format!("{mode:?}")),
            ("seed", a.common.seed.to_string()),
        ],
    );
    let (data, _) = load(&a.data)?;
    let d = matrix(&data, &measure, &paradigm)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let dist = sample_null_distribution(&d, a.rvi, a.samples, mode, a.tie_mode.into(), &mut rng)?;
    fs::create_dir_all(&a.out).map_err(|e| Failure::io(&a.out, e))?;
    let path = a
        .out
        .join(format!("null_hist_{}_{paradigm}.csv", a.rvi.name()));
    let mut w = create(&path)?;
    dist.histogram(a.bins).write_csv(&mut w)?;
    w.flush().map_err(|e| Failure::io(&path, e))?;
    eprintln!(
        "spbench null-dist: {} defined, {} undefined, mean {} -> {}",
        dist.values.len(),
        dist.undefined,
        dist.mean().map_or("n/a".into(), |m| m.to_string()),
        path.display()
    );
    Ok(())
}

fn degrade(a: DegradeArgs) -> Result<(), Failure> {
    init_threads(a.common.threads)?;
    let truth = read_partition(&a.labels)?;
    let modes = if a.mode.is_empty() {
        vec![DegradeArg::Shuffle, DegradeArg::Replace]
    } else {
        a.mode.clone()
    };
    echo(
        "degrade-labels",
        &[
            ("labels", a.labels.display().to_string()),
            ("modes", format!("{modes:?}")),
            ("fraction", format!("{:?}", a.fraction)),
            ("fractions", format!("{:?}", a.fractions)),
            ("reps", a.reps.to_string()),
            ("seed", a.common.seed.to_string()),
        ],
    );
    if let Some(&bad) = a
        .fractions
        .iter()
        .chain(&a.fraction)
        .find(|f| !(0.0..=1.0).contains(*f))
    {
        return Err(Failure::Usage(format!("fraction {bad} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let mut w = create(&a.out)?;
    match a.fraction {
        Some(f) => {
            if modes.len() != 1 {
                return Err(Failure::Usage("--fraction needs exactly one --mode".into()));
            }
            let degraded = degrade_labels(truth.labels(), f, modes[0].into(), &mut rng);
            for l in degraded {
                writeln!(w, "{l}").map_err(|e| Failure::io(&a.out, e))?;
            }
        }
        None => {
            if a.fractions.is_empty() {
                return Err(Failure::Usage("give --fraction or --fractions".into()));
            }
            writeln!(w, "mode,fraction,mean_ari,sd").map_err(|e| Failure::io(&a.out, e))?;
            for m in modes {
                let name = format!("{m:?}").to_lowercase();
                for p in
                    degradation_curve(truth.labels(), &a.fractions, m.into(), a.reps, &mut rng)?
                {
                    writeln!(w, "{name},{},{},{}", p.fraction, p.mean_ari, p.sd)
                        .map_err(|e| Failure::io(&a.out, e))?;
                }
            }
        }
    }
    w.flush().map_err(|e| Failure::io(&a.out, e))
}

fn report(a: ReportArgs) -> Result<(), Failure> {
    init_threads(a.threads)?;
    let out = a
        .out
        .clone()
        .unwrap_or_else(|| a.records.parent().unwrap_or(Path::new(".")).to_path_buf());
    echo(
        "report",
        &[
            ("records", a.records.display().to_string()),
            ("out", out.display().to_string()),
            ("threshold", a.threshold.to_string()),
            ("restrict", a.restrict.to_string()),
            ("seed", a.seed.to_string()),
        ],
    );
    let file = fs::File::open(&a.records).map_err(|e| Failure::io(&a.records, e))?;
    let set = RecordSet::read_csv(BufReader::new(file))?;
    let files = write_reports(&set, &out, a.threshold, a.restrict)?;
    eprintln!(
        "spbench report: wrote {} to {}",
        files.join(", "),
        out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Distances(a) => distances(a),
        Command::Cluster(a) => cluster(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Run(a) => run(a),
        Command::NullDist(a) => null_dist(a),
        Command::DegradeLabels(a) => degrade(a),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("spbench: error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
