//! `gpidiff` command-line front end.
//!
//! Exit codes: 0 success, 1 validation or input error, 2 numerical failure,
//! 3 configuration error.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use gpidiff_core::ingest::{load_documents, read_score_matrix};
use gpidiff_core::{
    analyze, generate, load_score_matrix, render, write_atomic, write_score_matrix,
    AnalysisConfig, CopingLabelSet, Error, ReportFormat, Result, ScoreMatrix, SynthSpec,
};

#[derive(Parser)]
#[command(name = "gpidiff", version, about = "Divergence between two groups' coping-label score matrices")]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the composite divergence report for two score matrices.
    Analyze(AnalyzeArgs),
    /// Generate a seeded synthetic score matrix.
    Synth(SynthArgs),
    /// Score documents with an external classifier adapter.
    Classify(ClassifyArgs),
    /// Check a score matrix file and print its ingest report.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Score matrix CSV for the first group.
    #[arg(long)]
    group_a: PathBuf,
    /// Score matrix CSV for the second group.
    #[arg(long)]
    group_b: PathBuf,
    /// Label file, one label per line, in matrix column order.
    #[arg(long)]
    labels: PathBuf,
    /// Config file (key = value lines or a JSON object).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: json, text or csv.
    #[arg(long)]
    format: Option<String>,
    /// Normalization: row-wise, per-group-column or pooled-column.
    #[arg(long)]
    normalization: Option<String>,
    /// Eigen-shift reduction: l1 or l2.
    #[arg(long)]
    eigen_shift_norm: Option<String>,
    /// Covariance input: normalized or raw.
    #[arg(long)]
    covariance_input: Option<String>,
    /// Degenerate cosine policy: error or zero-distance.
    #[arg(long)]
    degenerate_cosine: Option<String>,
    /// Fractional digits in rendered floats (4-12).
    #[arg(long)]
    precision: Option<usize>,
    /// Add a wall-clock `run.generated_at` stamp to JSON output.
    #[arg(long)]
    timestamp: bool,
}

#[derive(Args)]
struct SynthArgs {
    /// Synthetic spec file (key = value lines or a JSON object).
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    /// Output matrix CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Documents, one JSON record per line with `id` and `text`.
    #[arg(long)]
    docs: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    /// Output matrix CSV.
    #[arg(long)]
    out: PathBuf,
    /// Adapter command; `--docs`, `--labels` and `--out` are appended.
    #[arg(long)]
    adapter: String,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    labels: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: configuration error: --threads: {e}");
            return ExitCode::from(3);
        }
    }
    let result = match cli.command {
        Cmd::Analyze(args) => cmd_analyze(args),
        Cmd::Synth(args) => cmd_synth(args),
        Cmd::Classify(args) => cmd_classify(args),
        Cmd::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_labels(path: &Path) -> Result<CopingLabelSet> {
    CopingLabelSet::from_file(path)
}

fn analysis_config(args: &AnalyzeArgs) -> Result<AnalysisConfig> {
    let mut cfg = match &args.config {
        Some(path) => AnalysisConfig::from_file(path)?,
        None => AnalysisConfig::default(),
    };
    let overrides = [
        ("format", args.format.as_deref()),
        ("normalization", args.normalization.as_deref()),
        ("eigen_shift_norm", args.eigen_shift_norm.as_deref()),
        ("covariance_input", args.covariance_input.as_deref()),
        ("degenerate_cosine", args.degenerate_cosine.as_deref()),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if let Some(p) = args.precision {
        cfg.float_precision = p;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8> {
    let config = analysis_config(&args)?;
    let labels = read_labels(&args.labels)?;
    let a: ScoreMatrix = load_score_matrix(&args.group_a, &labels)?;
    let b: ScoreMatrix = load_score_matrix(&args.group_b, &labels)?;
    let mut report = analyze(&a, &b, &config)?.with_inputs([
        args.group_a.display().to_string(),
        args.group_b.display().to_string(),
        args.labels.display().to_string(),
    ]);
    if args.timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        report.generated_at = Some(secs.to_string());
    }
    let rendered = render(&report, config.report_format);
    match &args.out {
        Some(path) => {
            write_atomic(path, &rendered)?;
            print!(
                "{}",
                String::from_utf8_lossy(&render(&report, ReportFormat::Text))
            );
        }
        None => print!("{}", String::from_utf8_lossy(&rendered)),
    }
    Ok(0)
}

fn cmd_synth(args: SynthArgs) -> Result<u8> {
    let labels = read_labels(&args.labels)?;
    let spec = SynthSpec::from_file(&args.spec, &labels)?;
    let matrix: ScoreMatrix = generate(&spec, &labels)?;
    write_score_matrix(&args.out, &matrix, &labels)?;
    eprintln!("wrote {} rows to {}", matrix.nrows(), args.out.display());
    Ok(0)
}

fn cmd_classify(args: ClassifyArgs) -> Result<u8> {
    let labels = read_labels(&args.labels)?;
    let group = gpidiff_core::ingest::group_id_from_path(&args.docs);
    let (docs, ingest) = load_documents(&args.docs, group)?;
    if !ingest.is_clean() {
        eprint!("{ingest}");
    }
    let mut words = args.adapter.split_whitespace();
    let program = words
        .next()
        .ok_or_else(|| Error::Adapter("empty adapter command".into()))?;

    let out_dir = match args.out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let scratch = tempfile::Builder::new()
        .prefix(".gpidiff-classify")
        .tempdir_in(&out_dir)
        .map_err(|e| Error::Adapter(format!("cannot create scratch directory: {e}")))?;
    let produced = scratch.path().join("scores.csv");

    let status = Command::new(program)
        .args(words)
        .arg("--docs")
        .arg(&args.docs)
        .arg("--labels")
        .arg(&args.labels)
        .arg("--out")
        .arg(&produced)
        .status()
        .map_err(|e| Error::Adapter(format!("cannot run {program:?}: {e}")))?;
    if !status.success() {
        return Err(Error::Adapter(format!("adapter exited with {status}")));
    }
    if !produced.exists() {
        return Err(Error::Adapter("adapter produced no output file".into()));
    }
    let matrix: ScoreMatrix = load_score_matrix(&produced, &labels)?;
    let expected: Vec<&str> = docs.documents().iter().map(|d| d.id.as_str()).collect();
    let found: Vec<&str> = matrix.doc_ids().iter().map(String::as_str).collect();
    if expected != found {
        return Err(Error::Adapter(format!(
            "adapter output has {} rows that do not match the {} input documents in order",
            found.len(),
            expected.len()
        )));
    }
    let bytes = std::fs::read(&produced)
        .map_err(|e| Error::Adapter(format!("cannot read adapter output: {e}")))?;
    write_atomic(&args.out, &bytes)?;
    eprintln!("wrote {} x {} matrix to {}", matrix.nrows(), labels.len(), args.out.display());
    Ok(0)
}

fn cmd_validate(args: ValidateArgs) -> Result<u8> {
    let labels = read_labels(&args.labels)?;
    let (matrix, report) = read_score_matrix::<f64>(&args.matrix, &labels)?;
    print!("{report}");
    match matrix {
        Ok(m) if report.is_clean() => {
            println!("valid: {} rows x {} labels", m.nrows(), m.ncols());
            Ok(0)
        }
        Ok(_) => {
            println!("invalid: {} rejected row(s)", report.rows_rejected);
            Ok(1)
        }
        Err(e) => Err(e),
    }
}
