//! `termweight`: weight, select, classify and evaluate labeled text corpora
//! from the command line.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags, unknown names),
//! 2 on runtime failures (missing files, malformed corpora, training errors).

mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use termweight::corpus::{load_directory_corpus, load_line_corpus, LabeledCorpus};
use termweight::eval::{run_experiment, Classifier, EvalReport, ExperimentConfig};
use termweight::stats::VocabStats;
use termweight::weighting::{
    delta_idf_factor, idf_factor, idf_icf_factor, idfc_rf_factor, igm_factor, igm_imp_factor,
    rf_factor, weigh_document, SchemeKind, SchemeSpec,
};

use config::FileConfig;

#[derive(Parser)]
#[command(
    name = "termweight",
    version,
    about = "Term-weighting text classification toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight every document under one scheme (no cross-validation) and dump
    /// the sparse vectors
    Weigh(WeighArgs),
    /// Run the cross-validated (scheme x feature size x classifier) grid and
    /// write the report CSV
    Run(RunArgs),
    /// Print the collection-factor table for chosen terms
    Factors(FactorsArgs),
}

#[derive(Args)]
struct CorpusOpts {
    /// Corpus location: the root directory for `--format dir`, or the
    /// positive and negative files in that order for `--format lines`
    /// (give the flag twice)
    #[arg(long = "corpus")]
    corpus: Vec<PathBuf>,

    /// Corpus layout: `dir` (one subdirectory per class) or `lines` (one
    /// document per line)
    #[arg(long)]
    format: Option<String>,

    /// Label to treat as the positive class (default: lexicographically last
    /// label for `dir`, `pos` for `lines`)
    #[arg(long)]
    positive_label: Option<String>,

    /// TOML file supplying defaults for any flag; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct WeighArgs {
    #[command(flatten)]
    corpus: CorpusOpts,

    /// Weighting scheme (tf, tf-idf, dtf-idf, tf-idf-icf, tf-rf, tf-igm,
    /// stf-igm, tf-igm-imp, stf-igm-imp, tf-idfc-rf)
    #[arg(long)]
    scheme: Option<String>,

    /// IGM balance coefficient
    #[arg(long)]
    lambda: Option<f64>,

    /// L2-normalize each vector before dumping
    #[arg(long)]
    l2norm: bool,

    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    corpus: CorpusOpts,

    /// Comma-separated scheme names (default: all ten)
    #[arg(long, value_delimiter = ',')]
    schemes: Vec<String>,

    /// IGM balance coefficient
    #[arg(long)]
    lambda: Option<f64>,

    /// Comma-separated feature-selection sizes
    /// (default: 500,1000,2000,4000,6000,8000,10000,12000,14000)
    #[arg(long, value_delimiter = ',')]
    features: Vec<usize>,

    /// Comma-separated classifiers out of {nb, svm} (default: both)
    #[arg(long, value_delimiter = ',')]
    classifiers: Vec<String>,

    /// Number of stratified folds
    #[arg(long)]
    folds: Option<usize>,

    /// Shuffle seed
    #[arg(long)]
    seed: Option<u64>,

    /// Report CSV path
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for fold execution (0 = auto); any value yields the
    /// same report
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct FactorsArgs {
    #[command(flatten)]
    corpus: CorpusOpts,

    /// Comma-separated terms to tabulate
    #[arg(long, value_delimiter = ',')]
    terms: Vec<String>,

    /// IGM balance coefficient (reported factors are the raw per-scheme
    /// values, so lambda only matters for the weigh/run commands)
    #[arg(long)]
    lambda: Option<f64>,

    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn usage(err: impl Into<anyhow::Error>) -> CliError {
    CliError::Usage(err.into())
}

fn runtime(err: impl Into<anyhow::Error>) -> CliError {
    CliError::Runtime(err.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Weigh(args) => cmd_weigh(args),
        Command::Run(args) => cmd_run(args),
        Command::Factors(args) => cmd_factors(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn load_corpus(opts: &CorpusOpts, file: &FileConfig) -> Result<LabeledCorpus, CliError> {
    let paths: Vec<PathBuf> = if opts.corpus.is_empty() {
        file.corpus.clone().unwrap_or_default()
    } else {
        opts.corpus.clone()
    };
    if paths.is_empty() {
        return Err(usage(anyhow!(
            "no corpus given; use --corpus or a config file"
        )));
    }
    let format = opts
        .format
        .clone()
        .or_else(|| file.format.clone())
        .unwrap_or_else(|| "dir".to_owned());
    let corpus = match format.as_str() {
        "dir" => {
            if paths.len() != 1 {
                return Err(usage(anyhow!(
                    "--format dir takes exactly one --corpus path, got {}",
                    paths.len()
                )));
            }
            load_directory_corpus(&paths[0]).map_err(runtime)?
        }
        "lines" => {
            if paths.len() != 2 {
                return Err(usage(anyhow!(
                    "--format lines takes two --corpus paths (positive, negative), got {}",
                    paths.len()
                )));
            }
            load_line_corpus(&paths[0], &paths[1]).map_err(runtime)?
        }
        other => {
            return Err(usage(anyhow!(
                "unknown corpus format {other:?}; expected dir or lines"
            )))
        }
    };
    match opts
        .positive_label
        .clone()
        .or_else(|| file.positive_label.clone())
    {
        Some(label) => corpus.with_positive_label(&label).map_err(usage),
        None => Ok(corpus),
    }
}

fn write_output(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(runtime),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| runtime(anyhow!(e)))
        }
    }
}

fn cmd_weigh(args: WeighArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.corpus.config.as_deref()).map_err(usage)?;
    let scheme_name = args
        .scheme
        .or_else(|| file.scheme.clone())
        .ok_or_else(|| usage(anyhow!("no scheme given; use --scheme")))?;
    let kind = SchemeKind::parse(&scheme_name).map_err(usage)?;
    let lambda = args
        .lambda
        .or(file.lambda)
        .unwrap_or(SchemeSpec::DEFAULT_LAMBDA);
    let scheme = SchemeSpec::with_lambda(kind, lambda).map_err(usage)?;

    let corpus = load_corpus(&args.corpus, &file)?;
    let stats = VocabStats::from_corpus(&corpus).map_err(runtime)?;

    let mut dump = String::new();
    for doc in corpus.documents() {
        let mut vector = weigh_document(doc, &stats, &scheme, None);
        if args.l2norm {
            vector.l2_normalize();
        }
        let _ = writeln!(dump, "{}\t{}", doc.id, vector.dump_entries());
    }
    write_output(args.out.as_ref().or(file.out.as_ref()), &dump)
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.corpus.config.as_deref()).map_err(usage)?;

    let scheme_names: Vec<String> = if args.schemes.is_empty() {
        file.schemes.clone().unwrap_or_else(|| {
            SchemeKind::ALL
                .iter()
                .map(|k| k.name().to_owned())
                .collect()
        })
    } else {
        args.schemes.clone()
    };
    let lambda = args
        .lambda
        .or(file.lambda)
        .unwrap_or(SchemeSpec::DEFAULT_LAMBDA);
    let mut schemes = Vec::with_capacity(scheme_names.len());
    for name in &scheme_names {
        let kind = SchemeKind::parse(name).map_err(usage)?;
        schemes.push(SchemeSpec::with_lambda(kind, lambda).map_err(usage)?);
    }

    let feature_sizes: Vec<usize> = if args.features.is_empty() {
        file.features
            .clone()
            .unwrap_or_else(|| vec![500, 1000, 2000, 4000, 6000, 8000, 10_000, 12_000, 14_000])
    } else {
        args.features.clone()
    };
    if feature_sizes.contains(&0) {
        return Err(usage(anyhow!("feature sizes must be positive")));
    }

    let classifier_names: Vec<String> = if args.classifiers.is_empty() {
        file.classifiers
            .clone()
            .unwrap_or_else(|| vec!["nb".into(), "svm".into()])
    } else {
        args.classifiers.clone()
    };
    let mut classifiers = Vec::with_capacity(classifier_names.len());
    for name in &classifier_names {
        classifiers.push(Classifier::parse(name).map_err(usage)?);
    }

    let folds = args.folds.or(file.folds).unwrap_or(5);
    if folds < 2 {
        return Err(usage(anyhow!("need at least 2 folds, got {folds}")));
    }
    let seed = args.seed.or(file.seed).unwrap_or(42);
    let threads = args.threads.or(file.threads).unwrap_or(0);
    let out = args
        .out
        .clone()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| PathBuf::from("report.csv"));

    let corpus = load_corpus(&args.corpus, &file)?;
    let config = ExperimentConfig {
        schemes,
        feature_sizes: feature_sizes.clone(),
        classifiers: classifiers.clone(),
        folds,
        seed,
        threads,
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&corpus, &config).map_err(runtime)?;

    std::fs::write(&out, report.to_csv())
        .with_context(|| format!("cannot write {}", out.display()))
        .map_err(runtime)?;

    print!("{}", mean_f1_matrix(&report, &config));
    println!("report written to {}", out.display());
    Ok(())
}

/// Per classifier, a (feature size x scheme) table of mean weighted F1 in
/// percent.
fn mean_f1_matrix(report: &EvalReport, config: &ExperimentConfig) -> String {
    let mut out = String::new();
    for &classifier in &config.classifiers {
        let _ = writeln!(out, "mean weighted F1 (%) with {classifier}:");
        let _ = write!(out, "{:>9}", "features");
        for scheme in &config.schemes {
            let _ = write!(out, " {:>11}", scheme.kind.name());
        }
        let _ = writeln!(out);
        for &size in &config.feature_sizes {
            let _ = write!(out, "{size:>9}");
            for scheme in &config.schemes {
                let f1 = report
                    .mean_f1(scheme.kind.name(), size, classifier)
                    .unwrap_or(f64::NAN);
                let _ = write!(out, " {:>11.2}", f1 * 100.0);
            }
            let _ = writeln!(out);
        }
    }
    out
}

fn cmd_factors(args: FactorsArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.corpus.config.as_deref()).map_err(usage)?;
    if args.terms.is_empty() {
        return Err(usage(anyhow!("no terms given; use --terms")));
    }
    let corpus = load_corpus(&args.corpus, &file)?;
    let stats = VocabStats::from_corpus(&corpus).map_err(runtime)?;

    let mut table = String::from("term\tidf\tdelta_idf\tidf_icf\trf\tigm\tigm_imp\tidfc_rf\n");
    for term in &args.terms {
        let row = (|| -> termweight::Result<String> {
            Ok(format!(
                "{term}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\n",
                idf_factor(&stats, term)?,
                delta_idf_factor(&stats, term)?,
                idf_icf_factor(&stats, term)?,
                rf_factor(&stats, term)?,
                igm_factor(&stats, term)?,
                igm_imp_factor(&stats, term)?,
                idfc_rf_factor(&stats, term)?,
            ))
        })()
        .map_err(runtime)?;
        table.push_str(&row);
    }
    write_output(args.out.as_ref().or(file.out.as_ref()), &table)
}
