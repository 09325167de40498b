//! Command-line surface: ingest a fault database, run ranked queries,
//! compute string distances, run PageRank and clustering, and emit
//! figure-style chart data.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use symmatch::edit_distance::{
    damerau_levenshtein, hamming, levenshtein, needleman_wunsch, weighted_edit, CostMatrix,
    EditWeights,
};
use symmatch::error::Error;
use symmatch::pagerank::{self, PageGraph};
use symmatch::{
    build_index, cluster, load_index, load_records, rank_query, save_index, IndexConfig, MaxTfMode,
    SimilarityResult, StemTable, StopList, WeightConfig,
};

/// Exit codes, one per error class.
const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_DOMAIN: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser)]
#[command(
    name = "symmatch",
    version,
    about = "Similarity matching toolkit for fault-symptom texts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a persisted index from a fault database TSV.
    Index {
        /// Database file: `attachment<TAB>defect_id<TAB>characteristics`.
        db: PathBuf,
        /// Where to write the index file.
        #[arg(long)]
        out: PathBuf,
        /// Stop list file (one token per line); bundled default if omitted.
        #[arg(long)]
        stopwords: Option<PathBuf>,
        /// Stem table file (`inflected<TAB>root`); bundled default if omitted.
        #[arg(long)]
        stems: Option<PathBuf>,
        /// Index only the characteristics column, ignoring attachments.
        #[arg(long)]
        no_attachment: bool,
    },
    /// Rank stored faults against a queried symptom.
    Query {
        /// Index file produced by `symmatch index`.
        index: PathBuf,
        /// The fault symptom to look up.
        query: String,
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Weight configuration file (alpha overrides, log_base, max_tf_mode).
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Override the max_tf interpretation from the weights file.
        #[arg(long, value_enum)]
        max_tf_mode: Option<MaxTfArg>,
    },
    /// Compute a string distance.
    Distance {
        #[arg(value_enum)]
        metric: Metric,
        s: String,
        t: String,
        /// Cost matrix file (`op<TAB>chars<TAB>cost`), required for `nw`.
        #[arg(long)]
        costs: Option<PathBuf>,
        /// Insertion weight for the `weighted` metric.
        #[arg(long, default_value_t = 1.0)]
        w_insert: f64,
        /// Deletion weight for the `weighted` metric.
        #[arg(long, default_value_t = 1.0)]
        w_delete: f64,
        /// Substitution weight for the `weighted` metric.
        #[arg(long, default_value_t = 1.0)]
        w_substitute: f64,
    },
    /// Rank pages of a link graph by power iteration.
    Pagerank {
        /// Edge list: `source<TAB>target` per line, `node<TAB>` for
        /// isolated nodes.
        edges: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        /// Optional damping factor in [0, 1]; plain recurrence if omitted.
        #[arg(long)]
        damping: Option<f64>,
    },
    /// Group indexed faults into k clusters.
    Cluster {
        /// Index file produced by `symmatch index`.
        index: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Jsonl,
    Bars,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Levenshtein,
    Damerau,
    Nw,
    Hamming,
    Weighted,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MaxTfArg {
    Within,
    Literal,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::Io { .. } => EXIT_IO,
            Error::Parse { .. } => EXIT_PARSE,
            Error::Domain(_) | Error::NotFound(_) => EXIT_DOMAIN,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::from(Error::io(path.display().to_string(), e)))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Index {
            db,
            out,
            stopwords,
            stems,
            no_attachment,
        } => cmd_index(
            &db,
            &out,
            stopwords.as_deref(),
            stems.as_deref(),
            no_attachment,
        ),
        Command::Query {
            index,
            query,
            top_k,
            format,
            weights,
            max_tf_mode,
        } => cmd_query(
            &index,
            &query,
            top_k,
            format,
            weights.as_deref(),
            max_tf_mode,
        ),
        Command::Distance {
            metric,
            s,
            t,
            costs,
            w_insert,
            w_delete,
            w_substitute,
        } => {
            let weights = EditWeights::new(w_insert, w_delete, w_substitute)?;
            cmd_distance(metric, &s, &t, costs.as_deref(), &weights)
        }
        Command::Pagerank {
            edges,
            tol,
            max_iter,
            damping,
        } => cmd_pagerank(&edges, tol, max_iter, damping),
        Command::Cluster {
            index,
            k,
            seed,
            max_iter,
        } => cmd_cluster(&index, k, seed, max_iter),
    }
}

fn cmd_index(
    db: &Path,
    out: &Path,
    stopwords: Option<&Path>,
    stems: Option<&Path>,
    no_attachment: bool,
) -> Result<(), Failure> {
    let stops = match stopwords {
        Some(path) => StopList::parse(&read_file(path)?),
        None => StopList::default_list(),
    };
    let stems = match stems {
        Some(path) => StemTable::parse(&read_file(path)?)
            .map_err(|e| Failure::from(e.with_path(path.display().to_string())))?,
        None => StemTable::default_table(),
    };
    let records = load_records(db)?;
    let config = IndexConfig::new(stops, stems)?.with_attachment(!no_attachment);
    let index = build_index(&records, config)?;
    save_index(&index, out)?;
    eprintln!(
        "indexed {} entries ({} terms) -> {}",
        index.n_docs(),
        index.doc_freq().len(),
        out.display()
    );
    Ok(())
}

#[derive(serde::Serialize)]
struct JsonlRow {
    id: u64,
    score: f64,
    percent: i64,
}

/// A ranked query plus its renderings: `jsonl` carries full-precision
/// scores for machines, `table` and `bars` round to whole percents.
struct QueryReport {
    results: Vec<SimilarityResult>,
}

impl QueryReport {
    fn percent(score: f64) -> i64 {
        (score * 100.0).round() as i64
    }

    fn render(&self, format: Format) {
        match format {
            Format::Jsonl => {
                for r in &self.results {
                    let row = JsonlRow {
                        id: r.id,
                        score: r.score,
                        percent: Self::percent(r.score),
                    };
                    println!("{}", serde_json::to_string(&row).expect("row serializes"));
                }
            }
            Format::Table => {
                println!("{:>10}  {:>12}  {:>7}", "defect_id", "score", "percent");
                for r in &self.results {
                    println!(
                        "{:>10}  {:>12.6}  {:>6}%",
                        r.id,
                        r.score,
                        Self::percent(r.score)
                    );
                }
            }
            Format::Bars => {
                for r in &self.results {
                    let pct = Self::percent(r.score);
                    let width = (pct / 2).clamp(0, 50) as usize;
                    println!("{:>10} |{:<50}| {:>3}%", r.id, "#".repeat(width), pct);
                }
            }
        }
    }
}

fn cmd_query(
    index_path: &Path,
    query: &str,
    top_k: usize,
    format: Format,
    weights: Option<&Path>,
    max_tf_mode: Option<MaxTfArg>,
) -> Result<(), Failure> {
    let index = load_index(index_path)?;
    let mut cfg = match weights {
        Some(path) => WeightConfig::parse(&read_file(path)?)
            .map_err(|e| Failure::from(e.with_path(path.display().to_string())))?,
        None => WeightConfig::default(),
    };
    if let Some(mode) = max_tf_mode {
        cfg.max_tf_mode = match mode {
            MaxTfArg::Within => MaxTfMode::WithinText,
            MaxTfArg::Literal => MaxTfMode::Literal,
        };
    }
    let report = QueryReport {
        results: rank_query(query, &index, &cfg, top_k),
    };
    if report.results.is_empty() {
        eprintln!("warning: query matches nothing (empty or out-of-vocabulary after the pipeline)");
    }
    report.render(format);
    Ok(())
}

fn cmd_distance(
    metric: Metric,
    s: &str,
    t: &str,
    costs: Option<&Path>,
    weights: &EditWeights,
) -> Result<(), Failure> {
    match metric {
        Metric::Levenshtein => println!("{}", levenshtein(s, t)),
        Metric::Damerau => println!("{}", damerau_levenshtein(s, t)),
        Metric::Hamming => println!("{}", hamming(s, t)?),
        Metric::Nw => {
            let path =
                costs.ok_or_else(|| Failure::usage("the `nw` metric requires --costs <FILE>"))?;
            let matrix = CostMatrix::parse(&read_file(path)?)
                .map_err(|e| Failure::from(e.with_path(path.display().to_string())))?;
            println!("{}", needleman_wunsch(s, t, &matrix)?);
        }
        Metric::Weighted => println!("{}", weighted_edit(s, t, weights)),
    }
    Ok(())
}

fn cmd_pagerank(
    edges: &Path,
    tol: f64,
    max_iter: usize,
    damping: Option<f64>,
) -> Result<(), Failure> {
    let graph = PageGraph::parse(&read_file(edges)?)
        .map_err(|e| Failure::from(e.with_path(edges.display().to_string())))?;
    let solved = pagerank::solve(&graph, tol, max_iter, damping)?;
    if solved.converged {
        eprintln!(
            "converged after {} iterations (tol {tol})",
            solved.iterations
        );
    } else {
        eprintln!(
            "did not converge within {} iterations (tol {tol}); reporting best effort",
            solved.iterations
        );
    }
    println!("node,rank");
    for (node, rank) in solved.ranks.ranks() {
        println!("{node},{rank}");
    }
    Ok(())
}

fn cmd_cluster(index_path: &Path, k: usize, seed: u64, max_iter: usize) -> Result<(), Failure> {
    let index = load_index(index_path)?;
    let (_vocab, points) = cluster::doc_points(&index, &WeightConfig::default());
    let model = cluster::kmeans(&points, k, max_iter, seed)?;
    println!("defect_id,cluster");
    for (id, c) in &model.assignments {
        println!("{id},{c}");
    }
    eprintln!(
        "k = {k}, seed = {seed}: objective {:.6} after {} iterations",
        model.objective, model.iterations
    );
    Ok(())
}
