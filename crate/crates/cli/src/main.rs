//! `idiv` — batch pipeline for interdisciplinarity indicators.
//!
//! Subcommands compose through files: `validate` and `filter` prepare a
//! corpus, `build-disparity` derives the distance matrix from citation
//! records, `score` and `classify` emit per-publication JSONL, `report`
//! turns scores and labels into tables, and `synth` generates a
//! deterministic synthetic dataset with golden expectations. Data goes to
//! the output path, diagnostics to stderr; exit codes are 0 (success),
//! 1 (input error), 2 (internal invariant violation).

use idiv_cli::{report, util};

use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;

use idiv_core::aggregate::{PaperFacts, Provenance};
use idiv_core::classify::{byline_profile, LabelRecord};
use idiv_core::corpus::{
    apply_filters, load_field_scheme, parse_corpus, write_corpus, write_field_scheme,
    write_sc_registry, FieldScheme, FilterConfig, Publication,
};
use idiv_core::disparity::{
    build_cross_citation_matrix, cosine_similarity, to_disparity, CitationRecord,
    DisparityMatrix,
};
use idiv_core::diversity::{score_publication, ScoreRecord};
use idiv_core::synth::{generate_corpus, SynthParams};

use report::{parse_group_spec, ReportOptions};
use util::{open_buf, parse_filter_spec, sha256_hex, write_atomic, CliError};

#[derive(Parser)]
#[command(
    name = "idiv",
    version,
    about = "Interdisciplinarity indicators over publication corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a corpus and report every record error.
    Validate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        sc_registry: PathBuf,
    },
    /// Apply inclusion filters; kept corpus to --out, exclusion report to stderr.
    Filter {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        sc_registry: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// e.g. "doc_types=article|proceedings,require_references=true"
        #[arg(long)]
        filters: Option<String>,
    },
    /// Build the disparity matrix from citation records.
    BuildDisparity {
        /// JSONL records {"citing": \[codes\], "cited": \[codes\]}
        #[arg(long)]
        citations: PathBuf,
        #[arg(long)]
        sc_registry: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score every publication; JSONL ordered by pub_id.
    Score {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        sc_registry: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for scoring; output bytes do not depend on it.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Classify bylines into the three subpopulations; JSONL ordered by pub_id.
    Classify {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        sc_registry: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit all summary tables, statistics and distributions into a directory.
    Report {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Histogram bin width over integrated diversity.
        #[arg(long, default_value_t = 0.25)]
        bin_width: f64,
        /// Size of the top ranking by integrated diversity.
        #[arg(long, default_value_t = 5)]
        top_k: usize,
        /// Extra grouping, e.g. "authors:5", "discipline", "fields-authors".
        #[arg(long)]
        group_by: Option<String>,
        /// Corpus file digested into the provenance header.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Matrix file digested into the provenance header.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Generate a deterministic synthetic dataset with golden scores.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Papers per subpopulation: single-author,multi-author,multi-field.
        #[arg(long, default_value = "400,300,300")]
        pubs: String,
        #[arg(long, default_value_t = 40)]
        n_scs: u32,
        #[arg(long, default_value_t = 8)]
        n_fields: u32,
        #[arg(long, default_value_t = 4)]
        n_disciplines: u32,
        /// Same-discipline disparity level.
        #[arg(long, default_value_t = 0.1)]
        within: f64,
        /// Cross-discipline disparity level.
        #[arg(long, default_value_t = 0.9)]
        across: f64,
        /// Uniform disparity jitter, at most 0.05.
        #[arg(long, default_value_t = 0.02)]
        jitter: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first_line = e.to_string().lines().next().unwrap_or("bad usage").to_owned();
            eprintln!("error: {first_line}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> util::Result<()> {
    match command {
        Command::Validate {
            corpus,
            scheme,
            sc_registry,
        } => cmd_validate(&corpus, &scheme, &sc_registry),
        Command::Filter {
            corpus,
            scheme,
            sc_registry,
            out,
            filters,
        } => cmd_filter(&corpus, &scheme, &sc_registry, &out, filters.as_deref()),
        Command::BuildDisparity {
            citations,
            sc_registry,
            out,
        } => cmd_build_disparity(&citations, &sc_registry, &out),
        Command::Score {
            corpus,
            scheme,
            sc_registry,
            matrix,
            out,
            threads,
        } => cmd_score(&corpus, &scheme, &sc_registry, &matrix, &out, threads),
        Command::Classify {
            corpus,
            scheme,
            sc_registry,
            out,
        } => cmd_classify(&corpus, &scheme, &sc_registry, &out),
        Command::Report {
            scores,
            labels,
            out,
            bin_width,
            top_k,
            group_by,
            corpus,
            matrix,
        } => cmd_report(
            &scores,
            &labels,
            &out,
            bin_width,
            top_k,
            group_by.as_deref(),
            corpus.as_deref(),
            matrix.as_deref(),
        ),
        Command::Synth {
            out,
            seed,
            pubs,
            n_scs,
            n_fields,
            n_disciplines,
            within,
            across,
            jitter,
        } => cmd_synth(
            &out, seed, &pubs, n_scs, n_fields, n_disciplines, within, across, jitter,
        ),
    }
}

fn load_scheme(scheme: &Path, sc_registry: &Path) -> util::Result<FieldScheme> {
    load_field_scheme(open_buf(scheme)?, open_buf(sc_registry)?)
        .map_err(|e| CliError::input(format!("registry: {e}")))
}

/// Parses the corpus, streaming record diagnostics to stderr.
fn read_corpus(path: &Path, scheme: &FieldScheme) -> util::Result<(Vec<Publication>, usize)> {
    let parsed = parse_corpus(open_buf(path)?, scheme)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    for err in &parsed.errors {
        eprintln!("{}", err.diagnostic_line());
    }
    Ok((parsed.publications, parsed.errors.len()))
}

fn cmd_validate(corpus: &Path, scheme: &Path, sc_registry: &Path) -> util::Result<()> {
    let scheme = load_scheme(scheme, sc_registry)?;
    let (pubs, n_errors) = read_corpus(corpus, &scheme)?;
    println!("records={} errors={n_errors}", pubs.len());
    if n_errors > 0 {
        return Err(CliError::input(format!("{n_errors} invalid record(s)")));
    }
    Ok(())
}

fn cmd_filter(
    corpus: &Path,
    scheme: &Path,
    sc_registry: &Path,
    out: &Path,
    filters: Option<&str>,
) -> util::Result<()> {
    util::check_out_path(out)?;
    let scheme = load_scheme(scheme, sc_registry)?;
    let cfg = match filters {
        Some(spec) => parse_filter_spec(spec)?,
        None => FilterConfig::default(),
    };
    let (pubs, _) = read_corpus(corpus, &scheme)?;
    let n_input = pubs.len();
    let (kept, exclusions) = apply_filters(pubs, &cfg);
    let mut bytes = Vec::new();
    write_corpus(&mut bytes, &kept, &scheme)
        .map_err(|e| CliError::internal(format!("serializing corpus: {e}")))?;
    write_atomic(out, &bytes)?;
    for (reason, count) in &exclusions {
        eprintln!("excluded\t{reason}\t{count}");
    }
    eprintln!("kept\t{}\tof\t{n_input}", kept.len());
    Ok(())
}

#[derive(Deserialize)]
struct RawCitation {
    citing: Vec<String>,
    cited: Vec<String>,
}

fn cmd_build_disparity(citations: &Path, sc_registry: &Path, out: &Path) -> util::Result<()> {
    util::check_out_path(out)?;
    let registry = idiv_core::corpus::load_sc_registry(open_buf(sc_registry)?)
        .map_err(|e| CliError::input(format!("registry: {e}")))?;
    let mut records = Vec::new();
    for (idx, line) in open_buf(citations)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawCitation = serde_json::from_str(&line)
            .map_err(|e| CliError::input(format!("citation line {}: {e}", idx + 1)))?;
        let resolve = |codes: &[String]| -> util::Result<Vec<_>> {
            codes
                .iter()
                .map(|c| {
                    registry.id(c).ok_or_else(|| {
                        CliError::input(format!(
                            "citation line {}: unknown subject category '{c}'",
                            idx + 1
                        ))
                    })
                })
                .collect()
        };
        records.push(CitationRecord {
            citing: resolve(&raw.citing)?,
            cited: resolve(&raw.cited)?,
        });
    }
    let counts = build_cross_citation_matrix(records, registry.len())
        .map_err(|e| CliError::input(e.to_string()))?;
    let disparity = to_disparity(&cosine_similarity(&counts));
    let mut bytes = Vec::new();
    disparity
        .save(&mut bytes)
        .map_err(|e| CliError::internal(format!("serializing matrix: {e}")))?;
    write_atomic(out, &bytes)?;
    Ok(())
}

fn load_matrix_checked(matrix: &Path, scheme: &FieldScheme) -> util::Result<DisparityMatrix> {
    let d = DisparityMatrix::load(open_buf(matrix)?)
        .map_err(|e| CliError::input(format!("matrix: {e}")))?;
    if d.dim() != scheme.scs().len() {
        return Err(CliError::input(format!(
            "dimension mismatch: registry has {} subject categories, matrix dim is {}",
            scheme.scs().len(),
            d.dim()
        )));
    }
    Ok(d)
}

fn cmd_score(
    corpus: &Path,
    scheme: &Path,
    sc_registry: &Path,
    matrix: &Path,
    out: &Path,
    threads: Option<usize>,
) -> util::Result<()> {
    util::check_out_path(out)?;
    let scheme = load_scheme(scheme, sc_registry)?;
    let d = load_matrix_checked(matrix, &scheme)?;
    let (pubs, _) = read_corpus(corpus, &scheme)?;

    let score_all = |pubs: &[Publication]| -> Vec<Result<ScoreRecord, String>> {
        pubs.par_iter()
            .map(|p| {
                if p.references.is_empty() {
                    return Err(format!("{}\tskipped: no references to score", p.pub_id));
                }
                score_publication(p, &d)
                    .map(|s| ScoreRecord::new(&p.pub_id, &s))
                    .map_err(|e| format!("{}\tskipped: {e}", p.pub_id))
            })
            .collect()
    };
    let results = match threads {
        None => score_all(&pubs),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::input(format!("cannot build thread pool: {e}")))?;
            pool.install(|| score_all(&pubs))
        }
    };

    let mut records = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(diag) => eprintln!("{diag}"),
        }
    }
    // canonical order: parallelism never changes output bytes
    records.sort_by(|a, b| a.pub_id.cmp(&b.pub_id));
    let mut bytes = Vec::new();
    for rec in &records {
        bytes.extend_from_slice(rec.to_json_line().as_bytes());
        bytes.push(b'\n');
    }
    write_atomic(out, &bytes)?;
    Ok(())
}

fn cmd_classify(
    corpus: &Path,
    scheme: &Path,
    sc_registry: &Path,
    out: &Path,
) -> util::Result<()> {
    util::check_out_path(out)?;
    let scheme = load_scheme(scheme, sc_registry)?;
    let (pubs, _) = read_corpus(corpus, &scheme)?;
    let mut records = Vec::with_capacity(pubs.len());
    for p in &pubs {
        match byline_profile(p, &scheme) {
            Ok(profile) => records.push(LabelRecord::new(&p.pub_id, &profile, &scheme)),
            Err(e) => eprintln!("{}\tskipped: {e}", p.pub_id),
        }
    }
    records.sort_by(|a, b| a.pub_id.cmp(&b.pub_id));
    let mut bytes = Vec::new();
    for rec in &records {
        bytes.extend_from_slice(rec.to_json_line().as_bytes());
        bytes.push(b'\n');
    }
    write_atomic(out, &bytes)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_report(
    scores: &Path,
    labels: &Path,
    out: &Path,
    bin_width: f64,
    top_k: usize,
    group_by: Option<&str>,
    corpus: Option<&Path>,
    matrix: Option<&Path>,
) -> util::Result<()> {
    let score_records = read_jsonl(scores, ScoreRecord::parse_json_line)?;
    if score_records.is_empty() {
        return Err(CliError::input(format!(
            "empty input: no scores in {}",
            scores.display()
        )));
    }
    let label_records = read_jsonl(labels, LabelRecord::parse_json_line)?;
    let facts =
        PaperFacts::join(&score_records, &label_records).map_err(|e| CliError::input(e.to_string()))?;

    let digest = |p: Option<&Path>| -> util::Result<String> {
        p.map(sha256_hex).transpose().map(|d| d.unwrap_or_else(|| "-".into()))
    };
    let prov = Provenance {
        corpus_digest: digest(corpus)?,
        matrix_digest: digest(matrix)?,
        version: idiv_core::VERSION.to_owned(),
    };
    if top_k == 0 {
        return Err(CliError::input("top-k must be at least 1"));
    }
    let options = ReportOptions {
        bin_width,
        top_k,
        custom_group: group_by.map(parse_group_spec).transpose()?,
    };
    let files = report::assemble(&facts, &options, &prov)?;

    std::fs::create_dir_all(out)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", out.display())))?;
    for (name, bytes) in &files {
        write_atomic(&out.join(name), bytes)?;
    }
    eprintln!("wrote\t{}\tfiles\tto\t{}", files.len(), out.display());
    Ok(())
}

fn read_jsonl<T>(
    path: &Path,
    parse: impl Fn(&str) -> Result<T, serde_json::Error>,
) -> util::Result<Vec<T>> {
    let mut out = Vec::new();
    for (idx, line) in open_buf(path)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse(&line).map_err(|e| {
            CliError::input(format!("{} line {}: {e}", path.display(), idx + 1))
        })?);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_synth(
    out: &Path,
    seed: u64,
    pubs: &str,
    n_scs: u32,
    n_fields: u32,
    n_disciplines: u32,
    within: f64,
    across: f64,
    jitter: f64,
) -> util::Result<()> {
    let sizes: Vec<u32> = pubs
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::input(format!("bad --pubs '{pubs}', expected three counts")))?;
    if sizes.len() != 3 {
        return Err(CliError::input(format!(
            "bad --pubs '{pubs}', expected three comma-separated counts"
        )));
    }
    let params = SynthParams {
        seed,
        pubs_per_subpop: [sizes[0], sizes[1], sizes[2]],
        n_scs,
        n_fields,
        n_disciplines,
        within,
        across,
        jitter,
        ..SynthParams::default()
    };
    let output = generate_corpus(&params).map_err(|e| CliError::input(e.to_string()))?;

    std::fs::create_dir_all(out)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", out.display())))?;

    let mut files: BTreeMap<&str, Vec<u8>> = BTreeMap::new();
    let mut buf = Vec::new();
    write_field_scheme(&mut buf, &output.scheme)
        .map_err(|e| CliError::internal(e.to_string()))?;
    files.insert("scheme.tsv", std::mem::take(&mut buf));
    write_sc_registry(&mut buf, output.scheme.scs())
        .map_err(|e| CliError::internal(e.to_string()))?;
    files.insert("sc_registry.tsv", std::mem::take(&mut buf));
    write_corpus(&mut buf, &output.publications, &output.scheme)
        .map_err(|e| CliError::internal(e.to_string()))?;
    files.insert("corpus.jsonl", std::mem::take(&mut buf));
    output
        .disparity
        .save(&mut buf)
        .map_err(|e| CliError::internal(e.to_string()))?;
    files.insert("disparity.txt", std::mem::take(&mut buf));
    let golden: String = output
        .golden
        .iter()
        .map(|g| g.to_json_line() + "\n")
        .collect();
    files.insert("golden_scores.jsonl", golden.into_bytes());

    for (name, bytes) in &files {
        write_atomic(&out.join(name), bytes)?;
    }
    eprintln!(
        "synthesized\t{}\tpublications\tto\t{}",
        output.publications.len(),
        out.display()
    );
    Ok(())
}
