//! `c3rank`: ingest a citation corpus, rank its authors and papers, and
//! export analysis tables.
//!
//! Exit codes: 0 success, 1 usage, 2 input error, 3 non-convergence.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use c3rank::analysis::export_scatter;
use c3rank::analysis::{
    cohort_drift, component_table, h_distribution, temporal_consistency, tie_stats, trajectories,
    write_cohort_drift_csv, write_component_table_csv, write_consistency_csv,
    write_h_distribution_csv, write_tie_stats_csv, write_trajectories_csv, AnalysisError,
    CorrelationMode,
};
use c3rank::corpus::{parse_aminer, parse_jsonl, write_jsonl, Corpus, ParseReport};
use c3rank::export::{write_authors_csv, write_papers_csv, ExportMeta};
use c3rank::graph::{GraphBuildOptions, MultiLayerGraph};
use c3rank::metrics::AuthorBaselines;
use c3rank::solver::{solve, AaiCycleHandling, ConvergenceReport, ScoreSet, SolverConfig};
use c3rank::synth::{generate, SynthParams};

/// Author and paper ranking from the citation and coauthorship structure
/// of a corpus.
#[derive(Parser)]
#[command(name = "c3rank", version, max_term_width = 100)]
struct Cli {
    /// Cap the worker thread count; 1 reproduces any other setting
    /// byte for byte.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a corpus and write it back in canonical JSON-lines form.
    Ingest(IngestArgs),
    /// Rank one snapshot and write authors.csv and papers.csv.
    Rank(RankArgs),
    /// Export one analysis table.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Generate a reproducible synthetic corpus.
    Synth(SynthArgs),
}

#[derive(Args)]
struct InputFlags {
    /// Corpus file.
    input: PathBuf,

    /// Input format.
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    /// Canonical JSON lines, one paper per line.
    Jsonl,
    /// ArnetMiner marker text (#index, #*, #@, #%, #t blocks).
    Aminer,
}

#[derive(Args)]
struct OutDirFlag {
    /// Output directory; defaults to $C3RANK_OUT_DIR, then the working
    /// directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

impl OutDirFlag {
    fn resolve(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os("C3RANK_OUT_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }
}

#[derive(Args)]
struct GraphFlags {
    /// Split author-citation and coauthorship shares over distinct
    /// neighbors instead of edge multiplicities.
    #[arg(long)]
    unweighted: bool,

    /// Keep self-citation pairs in the author citation layer.
    #[arg(long)]
    self_citations: bool,
}

impl GraphFlags {
    fn options(&self) -> GraphBuildOptions {
        GraphBuildOptions {
            weighted: !self.unweighted,
            include_self_citations: self.self_citations,
        }
    }
}

#[derive(Args)]
struct SolverFlags {
    /// Damping factor in [0, 1) (method default).
    #[arg(long, default_value = "0.5")]
    theta: f64,

    /// Coauthor credit exponent; 0 gives equal shares (method default).
    #[arg(long, default_value = "0")]
    alpha: f64,

    /// Convergence tolerance on the max-norm delta (implementation
    /// default).
    #[arg(long, default_value = "1e-9")]
    epsilon: f64,

    /// Iteration cap (implementation default).
    #[arg(long, default_value = "1000")]
    max_iters: u32,

    /// Coauthorship-walk oscillation handling (implementation default:
    /// midpoint).
    #[arg(long, value_enum, default_value_t = CycleMode::Midpoint)]
    cycle: CycleMode,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CycleMode {
    /// Replace the oscillating vector with the midpoint of the last two
    /// iterates.
    Midpoint,
    /// Iterate the literal recurrence to the cap.
    None,
}

impl SolverFlags {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            theta: self.theta,
            alpha: self.alpha,
            epsilon: self.epsilon,
            max_iters: self.max_iters,
            aai_cycle_handling: match self.cycle {
                CycleMode::Midpoint => AaiCycleHandling::Midpoint,
                CycleMode::None => AaiCycleHandling::None,
            },
        }
    }
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    input: InputFlags,

    /// Destination JSON-lines file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    input: InputFlags,

    /// Snapshot bound: keep papers published up to this year (default:
    /// the whole corpus).
    #[arg(long)]
    year: Option<i32>,

    #[command(flatten)]
    graph: GraphFlags,

    #[command(flatten)]
    solver: SolverFlags,

    #[command(flatten)]
    out_dir: OutDirFlag,
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// h-index distribution with cumulative author shares.
    Hist {
        #[command(flatten)]
        input: InputFlags,
        /// Snapshot year.
        #[arg(long)]
        year: i32,
        #[command(flatten)]
        out_dir: OutDirFlag,
    },
    /// Movement of one snapshot's authors across h bins by a later
    /// snapshot.
    Drift {
        #[command(flatten)]
        input: InputFlags,
        /// Base snapshot year.
        #[arg(long)]
        base: i32,
        /// Target snapshot year.
        #[arg(long)]
        target: i32,
        /// Ascending lower bin edges; the last bin is open.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0, 1, 2, 3, 4, 5, 10, 20, 50])]
        edges: Vec<u64>,
        #[command(flatten)]
        out_dir: OutDirFlag,
    },
    /// Distinct composite scores inside each h bin.
    Ties {
        #[command(flatten)]
        input: InputFlags,
        /// Snapshot year.
        #[arg(long)]
        year: i32,
        #[command(flatten)]
        graph: GraphFlags,
        #[command(flatten)]
        solver: SolverFlags,
        #[command(flatten)]
        out_dir: OutDirFlag,
    },
    /// Min-max normalized h versus composite score per author.
    Scatter {
        #[command(flatten)]
        input: InputFlags,
        /// Snapshot year.
        #[arg(long)]
        year: i32,
        #[command(flatten)]
        graph: GraphFlags,
        #[command(flatten)]
        solver: SolverFlags,
        #[command(flatten)]
        out_dir: OutDirFlag,
    },
    /// Pearson correlation of author scores between two snapshots.
    Consistency {
        #[command(flatten)]
        input: InputFlags,
        /// Base snapshot year.
        #[arg(long)]
        base: i32,
        /// Target snapshot year.
        #[arg(long)]
        target: i32,
        /// Restrict the cohort to these base-snapshot h values (default:
        /// everyone).
        #[arg(long, value_delimiter = ',')]
        h_bin: Vec<u64>,
        /// Correlate raw values or rank positions.
        #[arg(long, value_enum, default_value_t = CorrMode::Value)]
        mode: CorrMode,
        #[command(flatten)]
        graph: GraphFlags,
        #[command(flatten)]
        solver: SolverFlags,
        #[command(flatten)]
        out_dir: OutDirFlag,
    },
    /// Per-author h and composite score across snapshot years.
    Trajectory {
        #[command(flatten)]
        input: InputFlags,
        /// Author names, separated by semicolons.
        #[arg(long, value_delimiter = ';', required = true)]
        authors: Vec<String>,
        /// Ascending snapshot years.
        #[arg(long, value_delimiter = ',', required = true)]
        years: Vec<i32>,
        #[command(flatten)]
        graph: GraphFlags,
        #[command(flatten)]
        solver: SolverFlags,
        #[command(flatten)]
        out_dir: OutDirFlag,
    },
    /// Component score breakdown for named authors.
    Table {
        #[command(flatten)]
        input: InputFlags,
        /// Snapshot year.
        #[arg(long)]
        year: i32,
        /// Author names, separated by semicolons.
        #[arg(long, value_delimiter = ';', required = true)]
        authors: Vec<String>,
        #[command(flatten)]
        graph: GraphFlags,
        #[command(flatten)]
        solver: SolverFlags,
        #[command(flatten)]
        out_dir: OutDirFlag,
    },
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CorrMode {
    Value,
    Rank,
}

#[derive(Args)]
struct SynthArgs {
    /// Destination JSON-lines file.
    #[arg(long)]
    out: PathBuf,

    /// Papers to generate.
    #[arg(long, default_value_t = 1000)]
    papers: usize,

    /// Author pool size.
    #[arg(long, default_value_t = 300)]
    authors: usize,

    /// First publication year.
    #[arg(long, default_value_t = 1980)]
    year_start: i32,

    /// Last publication year.
    #[arg(long, default_value_t = 2005)]
    year_end: i32,

    /// Mean references per paper.
    #[arg(long, default_value_t = 4.0)]
    refs_mean: f64,

    /// Mean team size per paper.
    #[arg(long, default_value_t = 2.5)]
    team_mean: f64,

    /// Preferential-attachment strength for citations; 0 cites uniformly.
    #[arg(long, default_value_t = 1.0)]
    bias: f64,

    /// Generator seed; required so two runs agree byte for byte.
    #[arg(long)]
    seed: u64,
}

struct Failure {
    code: i32,
    error: anyhow::Error,
}

impl Failure {
    fn usage(error: impl Into<anyhow::Error>) -> Failure {
        Failure {
            code: 1,
            error: error.into(),
        }
    }

    fn input(error: impl Into<anyhow::Error>) -> Failure {
        Failure {
            code: 2,
            error: error.into(),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Failure {
        match &e {
            AnalysisError::InvalidYearOrder(..)
            | AnalysisError::YearsNotAscending
            | AnalysisError::Solver(_) => Failure::usage(e),
            _ => Failure::input(e),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("c3rank: --threads must be at least 1");
            return 1;
        }
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let result = match cli.command {
        Command::Ingest(args) => cmd_ingest(args),
        Command::Rank(args) => cmd_rank(args),
        Command::Analyze(cmd) => cmd_analyze(cmd),
        Command::Synth(args) => cmd_synth(args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("c3rank: {:#}", f.error);
            f.code
        }
    }
}

fn load_corpus(flags: &InputFlags) -> Result<(Corpus, ParseReport), Failure> {
    let file = fs::File::open(&flags.input)
        .map_err(|e| Failure::input(anyhow!("cannot open {}: {e}", flags.input.display())))?;
    let reader = BufReader::new(file);
    let parsed = match flags.format {
        Format::Aminer => parse_aminer(reader),
        Format::Jsonl => parse_jsonl(reader),
    };
    parsed.map_err(|e| Failure::input(anyhow!("cannot read {}: {e}", flags.input.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::input(anyhow!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, bytes)
        .map_err(|e| Failure::input(anyhow!("cannot write {}: {e}", path.display())))
}

fn year_label(year: Option<i32>) -> String {
    year.map_or_else(|| "all".to_string(), |y| y.to_string())
}

fn cycle_label(cfg: &SolverConfig) -> &'static str {
    match cfg.aai_cycle_handling {
        AaiCycleHandling::Midpoint => "midpoint",
        AaiCycleHandling::None => "none",
    }
}

/// Header pairs shared by every export: the corpus identity, the snapshot
/// bound, and the graph options.
fn base_meta(corpus: &Corpus, year: Option<i32>, options: GraphBuildOptions) -> ExportMeta {
    ExportMeta::new()
        .with("corpus_hash", corpus.content_hash())
        .with("year", year_label(year))
        .with("weighted", options.weighted)
        .with("self_citations", options.include_self_citations)
}

fn solver_meta(meta: ExportMeta, cfg: &SolverConfig) -> ExportMeta {
    meta.with("theta", cfg.theta)
        .with("alpha", cfg.alpha)
        .with("epsilon", format!("{:e}", cfg.epsilon))
        .with("max_iters", cfg.max_iters)
        .with("cycle", cycle_label(cfg))
}

struct Solved {
    graph: MultiLayerGraph,
    scores: ScoreSet,
    report: ConvergenceReport,
    baselines: AuthorBaselines,
}

fn solve_snapshot(
    corpus: &Corpus,
    year: Option<i32>,
    options: GraphBuildOptions,
    cfg: &SolverConfig,
) -> Result<Solved, Failure> {
    let snapshot = corpus.snapshot(year.unwrap_or(i32::MAX));
    if snapshot.corpus().is_empty() {
        eprintln!("warning: no papers at or before {}", year_label(year));
    }
    let (graph, _) = MultiLayerGraph::build(&snapshot, options);
    let (scores, report) = solve(&graph, cfg).map_err(Failure::usage)?;
    let baselines = AuthorBaselines::compute(&graph);
    Ok(Solved {
        graph,
        scores,
        report,
        baselines,
    })
}

fn cmd_ingest(args: IngestArgs) -> Result<i32, Failure> {
    let (corpus, report) = load_corpus(&args.input)?;
    let mut buf = Vec::new();
    write_jsonl(&corpus, &mut buf).expect("in-memory write");
    write_file(&args.out, &buf)?;
    eprintln!("{report}");
    println!("wrote {} papers to {}", corpus.len(), args.out.display());
    Ok(0)
}

fn cmd_rank(args: RankArgs) -> Result<i32, Failure> {
    let (corpus, _) = load_corpus(&args.input)?;
    let cfg = args.solver.config();
    let options = args.graph.options();
    let solved = solve_snapshot(&corpus, args.year, options, &cfg)?;
    let meta = solver_meta(base_meta(&corpus, args.year, options), &cfg)
        .with("converged", solved.report.converged)
        .with("iterations", solved.report.iterations_run)
        .with("final_delta", format!("{:e}", solved.report.final_delta))
        .with("aai_cycle_detected", solved.report.aai_cycle_detected);

    let dir = args.out_dir.resolve();
    let mut buf = Vec::new();
    write_authors_csv(
        &mut buf,
        &solved.graph,
        &solved.scores,
        &solved.baselines,
        &meta,
    )
    .expect("in-memory write");
    write_file(&dir.join("authors.csv"), &buf)?;
    buf.clear();
    write_papers_csv(
        &mut buf,
        &solved.graph,
        &solved.scores,
        &solved.baselines,
        &meta,
    )
    .expect("in-memory write");
    write_file(&dir.join("papers.csv"), &buf)?;

    if solved.report.converged {
        println!(
            "converged in {} iterations (final delta {:e})",
            solved.report.iterations_run, solved.report.final_delta
        );
        Ok(0)
    } else {
        eprintln!(
            "c3rank: no convergence after {} iterations (final delta {:e}); outputs written",
            solved.report.iterations_run, solved.report.final_delta
        );
        Ok(3)
    }
}

fn cmd_analyze(cmd: AnalyzeCmd) -> Result<i32, Failure> {
    match cmd {
        AnalyzeCmd::Hist {
            input,
            year,
            out_dir,
        } => {
            let (corpus, _) = load_corpus(&input)?;
            let snapshot = corpus.snapshot(year);
            let (graph, _) = MultiLayerGraph::build(&snapshot, GraphBuildOptions::default());
            let dist = h_distribution(&AuthorBaselines::compute(&graph));
            let meta = ExportMeta::new()
                .with("corpus_hash", corpus.content_hash())
                .with("year", year);
            let mut buf = Vec::new();
            write_h_distribution_csv(&mut buf, &dist, &meta).expect("in-memory write");
            emit(&out_dir, &format!("hist_{year}.csv"), &buf)
        }
        AnalyzeCmd::Drift {
            input,
            base,
            target,
            edges,
            out_dir,
        } => {
            let (corpus, _) = load_corpus(&input)?;
            let opts = GraphBuildOptions::default();
            let (g1, _) = MultiLayerGraph::build(&corpus.snapshot(base), opts);
            let (g2, _) = MultiLayerGraph::build(&corpus.snapshot(target), opts);
            let b1 = AuthorBaselines::compute(&g1);
            let b2 = AuthorBaselines::compute(&g2);
            let drift = cohort_drift(&g1, &b1, &g2, &b2, &edges)?;
            let meta = ExportMeta::new()
                .with("corpus_hash", corpus.content_hash())
                .with("base_year", base)
                .with("target_year", target);
            let mut buf = Vec::new();
            write_cohort_drift_csv(&mut buf, &drift, &meta).expect("in-memory write");
            emit(&out_dir, &format!("drift_{base}..{target}.csv"), &buf)
        }
        AnalyzeCmd::Ties {
            input,
            year,
            graph,
            solver,
            out_dir,
        } => {
            let (corpus, _) = load_corpus(&input)?;
            let cfg = solver.config();
            let options = graph.options();
            let solved = solve_snapshot(&corpus, Some(year), options, &cfg)?;
            let stats = tie_stats(&solved.scores, &solved.baselines);
            let meta = solver_meta(base_meta(&corpus, Some(year), options), &cfg)
                .with("converged", solved.report.converged);
            let mut buf = Vec::new();
            write_tie_stats_csv(&mut buf, &stats, &meta).expect("in-memory write");
            emit(&out_dir, &format!("ties_{year}.csv"), &buf)?;
            exit_for(&solved.report)
        }
        AnalyzeCmd::Scatter {
            input,
            year,
            graph,
            solver,
            out_dir,
        } => {
            let (corpus, _) = load_corpus(&input)?;
            let cfg = solver.config();
            let options = graph.options();
            let solved = solve_snapshot(&corpus, Some(year), options, &cfg)?;
            let meta = solver_meta(base_meta(&corpus, Some(year), options), &cfg)
                .with("converged", solved.report.converged);
            let mut buf = Vec::new();
            export_scatter(
                &solved.graph,
                &solved.scores,
                &solved.baselines,
                &meta,
                &mut buf,
            )
            .expect("in-memory write");
            emit(&out_dir, &format!("scatter_{year}.csv"), &buf)?;
            exit_for(&solved.report)
        }
        AnalyzeCmd::Consistency {
            input,
            base,
            target,
            h_bin,
            mode,
            graph,
            solver,
            out_dir,
        } => {
            let (corpus, _) = load_corpus(&input)?;
            let cfg = solver.config();
            let options = graph.options();
            let mode = match mode {
                CorrMode::Value => CorrelationMode::Value,
                CorrMode::Rank => CorrelationMode::Rank,
            };
            let result = temporal_consistency(&corpus, base, target, &h_bin, options, &cfg, mode)?;
            let meta = solver_meta(base_meta(&corpus, Some(target), options), &cfg).with(
                "mode",
                if mode == CorrelationMode::Rank {
                    "rank"
                } else {
                    "value"
                },
            );
            let mut buf = Vec::new();
            write_consistency_csv(&mut buf, &result, &meta).expect("in-memory write");
            emit(&out_dir, &format!("consistency_{base}..{target}.csv"), &buf)
        }
        AnalyzeCmd::Trajectory {
            input,
            authors,
            years,
            graph,
            solver,
            out_dir,
        } => {
            let (corpus, _) = load_corpus(&input)?;
            let cfg = solver.config();
            let options = graph.options();
            let paths = trajectories(&corpus, &authors, &years, options, &cfg)?;
            let meta = solver_meta(base_meta(&corpus, None, options), &cfg);
            let mut buf = Vec::new();
            write_trajectories_csv(&mut buf, &paths, &meta).expect("in-memory write");
            let first = years.first().expect("validated non-empty");
            let last = years.last().expect("validated non-empty");
            let name = if first == last {
                format!("trajectory_{first}.csv")
            } else {
                format!("trajectory_{first}..{last}.csv")
            };
            emit(&out_dir, &name, &buf)
        }
        AnalyzeCmd::Table {
            input,
            year,
            authors,
            graph,
            solver,
            out_dir,
        } => {
            let (corpus, _) = load_corpus(&input)?;
            let cfg = solver.config();
            let options = graph.options();
            let solved = solve_snapshot(&corpus, Some(year), options, &cfg)?;
            let rows = component_table(&solved.graph, &solved.scores, &solved.baselines, &authors)?;
            let meta = solver_meta(base_meta(&corpus, Some(year), options), &cfg)
                .with("converged", solved.report.converged);
            let mut buf = Vec::new();
            write_component_table_csv(&mut buf, &rows, &meta).expect("in-memory write");
            emit(&out_dir, &format!("table_{year}.csv"), &buf)?;
            exit_for(&solved.report)
        }
    }
}

fn emit(out_dir: &OutDirFlag, name: &str, bytes: &[u8]) -> Result<i32, Failure> {
    let path = out_dir.resolve().join(name);
    write_file(&path, bytes)?;
    println!("wrote {}", path.display());
    Ok(0)
}

fn exit_for(report: &ConvergenceReport) -> Result<i32, Failure> {
    if report.converged {
        Ok(0)
    } else {
        eprintln!(
            "c3rank: no convergence after {} iterations (final delta {:e}); outputs written",
            report.iterations_run, report.final_delta
        );
        Ok(3)
    }
}

fn cmd_synth(args: SynthArgs) -> Result<i32, Failure> {
    let params = SynthParams {
        n_papers: args.papers,
        n_authors: args.authors,
        year_start: args.year_start,
        year_end: args.year_end,
        refs_per_paper_mean: args.refs_mean,
        authors_per_paper_mean: args.team_mean,
        attachment_bias: args.bias,
        seed: args.seed,
    };
    let corpus = generate(&params).map_err(Failure::usage)?;
    let mut buf = Vec::new();
    write_jsonl(&corpus, &mut buf).expect("in-memory write");
    write_file(&args.out, &buf)?;
    println!(
        "generated {} papers, {} authors -> {}",
        corpus.len(),
        corpus.author_universe().len(),
        args.out.display()
    );
    Ok(0)
}
