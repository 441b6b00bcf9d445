//! Post-processing over solved score sets: distributions, drift,
//! tie-breaking statistics, cross-snapshot rank consistency, trajectories,
//! and component tables.
//!
//! Everything here is pure computation over immutable inputs. Operations
//! that span several snapshots ([`temporal_consistency`], [`trajectories`])
//! cut the snapshots, solve each one, and match authors by name, relying
//! on snapshot monotonicity: an author present at an early year is present
//! at every later one.

use std::collections::HashSet;
use std::io::Write;

use thiserror::Error;

use crate::corpus::Corpus;
use crate::export::{csv_field, format_sig12, ExportMeta};
use crate::graph::{AuthorIdx, GraphBuildOptions, MultiLayerGraph};
use crate::metrics::AuthorBaselines;
use crate::solver::{solve, ScoreSet, SolverConfig, SolverError};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("input vectors differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("correlation undefined: an input has zero variance")]
    ZeroVariance,
    #[error("cohort is empty")]
    EmptyCohort,
    #[error("base year {0} is later than target year {1}")]
    InvalidYearOrder(i32, i32),
    #[error("years must be strictly ascending")]
    YearsNotAscending,
    #[error("no author named {name:?}{}", candidates_note(.candidates))]
    UnknownAuthor {
        name: String,
        /// Authors whose name starts with the requested string.
        candidates: Vec<String>,
    },
    #[error(transparent)]
    Solver(#[from] SolverError),
}

fn candidates_note(candidates: &[String]) -> String {
    if candidates.is_empty() {
        String::new()
    } else {
        format!(" (did you mean one of {candidates:?})")
    }
}

/// Histogram of h-index values: `counts[h]` authors have h-index `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HDistribution {
    pub counts: Vec<u64>,
    pub total_authors: u64,
}

impl HDistribution {
    /// Fraction of authors with h-index ≤ `h`. Zero for an empty table.
    pub fn cumulative_share_at(&self, h: u64) -> f64 {
        if self.total_authors == 0 {
            return 0.0;
        }
        let upto: u64 = self.counts.iter().take(h as usize + 1).sum();
        upto as f64 / self.total_authors as f64
    }
}

/// Counts authors per h-index value.
pub fn h_distribution(baselines: &AuthorBaselines) -> HDistribution {
    let max_h = baselines.h_index.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0u64; (max_h + 1) as usize];
    for &h in &baselines.h_index {
        counts[h as usize] += 1;
    }
    if baselines.h_index.is_empty() {
        counts.clear();
    }
    HDistribution {
        counts,
        total_authors: baselines.h_index.len() as u64,
    }
}

/// Percentage distribution of one author cohort over h-index bins at two
/// snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct CohortDrift {
    /// Ascending lower bin edges; bin `i` covers `edges[i] ..` up to the
    /// next edge, the last bin is open-ended.
    pub edges: Vec<u64>,
    pub pct_t1: Vec<f64>,
    pub pct_t2: Vec<f64>,
    pub cohort_size: u64,
}

/// Distributes the T1 author pool over h bins at T1 and again at T2.
///
/// The cohort is every author of `graph_t1`; each must also appear in
/// `graph_t2` (guaranteed when T2 is a later snapshot of the same corpus).
/// Both percentage vectors sum to 100.
pub fn cohort_drift(
    graph_t1: &MultiLayerGraph,
    baselines_t1: &AuthorBaselines,
    graph_t2: &MultiLayerGraph,
    baselines_t2: &AuthorBaselines,
    edges: &[u64],
) -> Result<CohortDrift, AnalysisError> {
    assert!(
        !edges.is_empty() && edges.windows(2).all(|w| w[0] < w[1]),
        "bin edges must be ascending and non-empty"
    );
    let n = graph_t1.n_authors();
    if n == 0 {
        return Err(AnalysisError::EmptyCohort);
    }
    let bin_of = |h: u64| -> usize {
        match edges.binary_search(&h) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        }
    };
    let mut count_t1 = vec![0u64; edges.len()];
    let mut count_t2 = vec![0u64; edges.len()];
    for j in 0..n {
        let name = graph_t1.author_name(AuthorIdx(j as u32));
        let j2 = graph_t2
            .author_idx(name)
            .ok_or_else(|| AnalysisError::UnknownAuthor {
                name: name.to_string(),
                candidates: Vec::new(),
            })?;
        count_t1[bin_of(baselines_t1.h_index[j])] += 1;
        count_t2[bin_of(baselines_t2.h_index[j2.as_usize()])] += 1;
    }
    let to_pct = |counts: Vec<u64>| -> Vec<f64> {
        counts
            .into_iter()
            .map(|c| 100.0 * c as f64 / n as f64)
            .collect()
    };
    Ok(CohortDrift {
        edges: edges.to_vec(),
        pct_t1: to_pct(count_t1),
        pct_t2: to_pct(count_t2),
        cohort_size: n as u64,
    })
}

/// Tie statistics for one h-index value.
#[derive(Debug, Clone, PartialEq)]
pub struct TieBin {
    pub h: u64,
    pub author_count: u64,
    /// Distinct C³ values at export precision (12 significant digits).
    pub distinct_c3_values: u64,
    /// 1 − distinct/count: the share of authors indistinguishable from an
    /// earlier author in the bin.
    pub tie_fraction: f64,
    pub c3_min: f64,
    pub c3_max: f64,
    pub c3_spread: f64,
}

/// Per-bin tie statistics, ascending h, empty bins omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct TieStats {
    pub bins: Vec<TieBin>,
}

/// Groups authors by h-index and measures how well C³ separates them
/// within each group.
pub fn tie_stats(scores: &ScoreSet, baselines: &AuthorBaselines) -> TieStats {
    let max_h = baselines.h_index.iter().copied().max().unwrap_or(0);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); (max_h + 1) as usize];
    for (j, &h) in baselines.h_index.iter().enumerate() {
        members[h as usize].push(j);
    }
    let bins = members
        .into_iter()
        .enumerate()
        .filter(|(_, m)| !m.is_empty())
        .map(|(h, m)| {
            let mut distinct: HashSet<String> = HashSet::with_capacity(m.len());
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for &j in &m {
                let c3 = scores.c3[j];
                distinct.insert(format_sig12(c3));
                min = min.min(c3);
                max = max.max(c3);
            }
            let count = m.len() as u64;
            let d = distinct.len() as u64;
            TieBin {
                h: h as u64,
                author_count: count,
                distinct_c3_values: d,
                tie_fraction: 1.0 - d as f64 / count as f64,
                c3_min: min,
                c3_max: max,
                c3_spread: max - min,
            }
        })
        .collect();
    TieStats { bins }
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, AnalysisError> {
    if x.len() != y.len() {
        return Err(AnalysisError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(AnalysisError::TooFewPoints(x.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(AnalysisError::ZeroVariance);
    }
    Ok((cov / (var_x * var_y).sqrt()).clamp(-1.0, 1.0))
}

/// Whether correlations run over raw scores or over rank positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorrelationMode {
    /// Pearson over the score values themselves.
    #[default]
    Value,
    /// Pearson over rank positions with ties averaged, i.e. Spearman.
    Rank,
}

/// 1-based rank positions, ties receiving the average of their positions.
fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let avg = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Cross-snapshot score correlation for one author cohort.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyResult {
    pub base_year: i32,
    pub target_year: i32,
    /// h-index values the cohort was filtered to; empty = all authors.
    pub h_bin: Vec<u64>,
    pub pearson_r: f64,
    pub n_common_authors: u64,
}

/// Correlates authors' C³ at `base_year` with their C³ at `target_year`.
///
/// The cohort is the authors present at the base snapshot whose h-index
/// there falls in `h_bin` (empty selects everyone). Scores at both years
/// come from full solves of the respective snapshots.
pub fn temporal_consistency(
    corpus: &Corpus,
    base_year: i32,
    target_year: i32,
    h_bin: &[u64],
    graph_opts: GraphBuildOptions,
    cfg: &SolverConfig,
    mode: CorrelationMode,
) -> Result<ConsistencyResult, AnalysisError> {
    if base_year > target_year {
        return Err(AnalysisError::InvalidYearOrder(base_year, target_year));
    }
    let base_snap = corpus.snapshot(base_year);
    let target_snap = corpus.snapshot(target_year);
    let (g1, _) = MultiLayerGraph::build(&base_snap, graph_opts);
    let (g2, _) = MultiLayerGraph::build(&target_snap, graph_opts);
    let (s1, _) = solve(&g1, cfg)?;
    let (s2, _) = solve(&g2, cfg)?;
    let b1 = AuthorBaselines::compute(&g1);

    let wanted: HashSet<u64> = h_bin.iter().copied().collect();
    let mut base_scores = Vec::new();
    let mut target_scores = Vec::new();
    for j in 0..g1.n_authors() {
        if !wanted.is_empty() && !wanted.contains(&b1.h_index[j]) {
            continue;
        }
        let name = g1.author_name(AuthorIdx(j as u32));
        let Some(j2) = g2.author_idx(name) else {
            continue;
        };
        base_scores.push(s1.c3[j]);
        target_scores.push(s2.c3[j2.as_usize()]);
    }
    if base_scores.len() < 2 {
        return Err(AnalysisError::TooFewPoints(base_scores.len()));
    }
    let r = match mode {
        CorrelationMode::Value => pearson(&base_scores, &target_scores)?,
        CorrelationMode::Rank => {
            pearson(&average_ranks(&base_scores), &average_ranks(&target_scores))?
        }
    };
    Ok(ConsistencyResult {
        base_year,
        target_year,
        h_bin: h_bin.to_vec(),
        pearson_r: r,
        n_common_authors: base_scores.len() as u64,
    })
}

/// Writes `author,h,h_norm,c3,c3_norm` with both axes min-max normalized
/// to [0, 1], rows sorted by author name.
///
/// A degenerate axis (all values equal) normalizes to 0 everywhere and is
/// flagged in the header comment.
pub fn export_scatter<W: Write>(
    graph: &MultiLayerGraph,
    scores: &ScoreSet,
    baselines: &AuthorBaselines,
    meta: &ExportMeta,
    mut w: W,
) -> std::io::Result<()> {
    let n = graph.n_authors();
    let h_min = baselines.h_index.iter().copied().min().unwrap_or(0);
    let h_max = baselines.h_index.iter().copied().max().unwrap_or(0);
    let c3_min = scores.c3.iter().copied().fold(f64::INFINITY, f64::min);
    let c3_max = scores.c3.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let h_degenerate = h_min == h_max;
    let c3_degenerate = n == 0 || c3_min == c3_max;

    let mut meta = meta.clone();
    if h_degenerate {
        meta.push("h_range_degenerate", "true");
    }
    if c3_degenerate {
        meta.push("c3_range_degenerate", "true");
    }
    writeln!(w, "{}", meta.header_line())?;
    writeln!(w, "author,h,h_norm,c3,c3_norm")?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        graph
            .author_name(AuthorIdx(a as u32))
            .cmp(graph.author_name(AuthorIdx(b as u32)))
    });
    for j in order {
        let h = baselines.h_index[j];
        let h_norm = if h_degenerate {
            0.0
        } else {
            (h - h_min) as f64 / (h_max - h_min) as f64
        };
        let c3 = scores.c3[j];
        let c3_norm = if c3_degenerate {
            0.0
        } else {
            (c3 - c3_min) / (c3_max - c3_min)
        };
        writeln!(
            w,
            "{},{},{},{},{}",
            csv_field(graph.author_name(AuthorIdx(j as u32))),
            h,
            format_sig12(h_norm),
            format_sig12(c3),
            format_sig12(c3_norm),
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub year: i32,
    pub h: u64,
    pub c3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuthorTrajectory {
    pub author: String,
    pub points: Vec<TrajectoryPoint>,
}

/// Solves a snapshot per requested year and tracks the named authors'
/// (h, C³) through time.
///
/// Years must be strictly ascending and every author must exist in the
/// earliest snapshot; an unknown name is reported with prefix-matching
/// candidates from that snapshot.
pub fn trajectories(
    corpus: &Corpus,
    author_names: &[String],
    years: &[i32],
    graph_opts: GraphBuildOptions,
    cfg: &SolverConfig,
) -> Result<Vec<AuthorTrajectory>, AnalysisError> {
    if years.is_empty() || years.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AnalysisError::YearsNotAscending);
    }
    let mut result: Vec<AuthorTrajectory> = author_names
        .iter()
        .map(|name| AuthorTrajectory {
            author: name.clone(),
            points: Vec::new(),
        })
        .collect();
    for (yi, &year) in years.iter().enumerate() {
        let snap = corpus.snapshot(year);
        let (graph, _) = MultiLayerGraph::build(&snap, graph_opts);
        let (scores, _) = solve(&graph, cfg)?;
        let baselines = AuthorBaselines::compute(&graph);
        for traj in &mut result {
            let Some(j) = graph.author_idx(&traj.author) else {
                if yi == 0 {
                    return Err(unknown_author(&graph, &traj.author));
                }
                // Present at the earliest year implies present later; an
                // absence here means the first year silently skipped them.
                unreachable!("author lost between snapshots");
            };
            traj.points.push(TrajectoryPoint {
                year,
                h: baselines.h_index[j.as_usize()],
                c3: scores.c3[j.as_usize()],
            });
        }
    }
    Ok(result)
}

fn unknown_author(graph: &MultiLayerGraph, name: &str) -> AnalysisError {
    let mut candidates: Vec<String> = (0..graph.n_authors())
        .map(|j| graph.author_name(AuthorIdx(j as u32)))
        .filter(|n| n.starts_with(name))
        .map(|n| n.to_string())
        .collect();
    candidates.truncate(5);
    AnalysisError::UnknownAuthor {
        name: name.to_string(),
        candidates,
    }
}

/// One row of the per-author component breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentRow {
    pub author: String,
    pub h: u64,
    pub aci: f64,
    pub pci: f64,
    pub aai: f64,
    pub c3: f64,
}

/// Component scores for the named authors, in the requested order.
pub fn component_table(
    graph: &MultiLayerGraph,
    scores: &ScoreSet,
    baselines: &AuthorBaselines,
    author_names: &[String],
) -> Result<Vec<ComponentRow>, AnalysisError> {
    author_names
        .iter()
        .map(|name| {
            let j = graph
                .author_idx(name)
                .ok_or_else(|| unknown_author(graph, name))?
                .as_usize();
            Ok(ComponentRow {
                author: name.clone(),
                h: baselines.h_index[j],
                aci: scores.aci[j],
                pci: scores.pci[j],
                aai: scores.aai[j],
                c3: scores.c3[j],
            })
        })
        .collect()
}

/// `h,author_count,cumulative_share`.
pub fn write_h_distribution_csv<W: Write>(
    mut w: W,
    dist: &HDistribution,
    meta: &ExportMeta,
) -> std::io::Result<()> {
    writeln!(w, "{}", meta.header_line())?;
    writeln!(w, "h,author_count,cumulative_share")?;
    for (h, &count) in dist.counts.iter().enumerate() {
        writeln!(
            w,
            "{},{},{}",
            h,
            count,
            format_sig12(dist.cumulative_share_at(h as u64)),
        )?;
    }
    Ok(())
}

/// `bin_low,pct_base,pct_target`.
pub fn write_cohort_drift_csv<W: Write>(
    mut w: W,
    drift: &CohortDrift,
    meta: &ExportMeta,
) -> std::io::Result<()> {
    writeln!(w, "{}", meta.header_line())?;
    writeln!(w, "bin_low,pct_base,pct_target")?;
    for (i, &edge) in drift.edges.iter().enumerate() {
        writeln!(
            w,
            "{},{},{}",
            edge,
            format_sig12(drift.pct_t1[i]),
            format_sig12(drift.pct_t2[i]),
        )?;
    }
    Ok(())
}

/// `h,author_count,distinct_c3,tie_fraction,c3_min,c3_max,c3_spread`.
pub fn write_tie_stats_csv<W: Write>(
    mut w: W,
    stats: &TieStats,
    meta: &ExportMeta,
) -> std::io::Result<()> {
    writeln!(w, "{}", meta.header_line())?;
    writeln!(
        w,
        "h,author_count,distinct_c3,tie_fraction,c3_min,c3_max,c3_spread"
    )?;
    for bin in &stats.bins {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            bin.h,
            bin.author_count,
            bin.distinct_c3_values,
            format_sig12(bin.tie_fraction),
            format_sig12(bin.c3_min),
            format_sig12(bin.c3_max),
            format_sig12(bin.c3_spread),
        )?;
    }
    Ok(())
}

/// `base_year,target_year,h_bin,pearson_r,n_common_authors`.
pub fn write_consistency_csv<W: Write>(
    mut w: W,
    result: &ConsistencyResult,
    meta: &ExportMeta,
) -> std::io::Result<()> {
    writeln!(w, "{}", meta.header_line())?;
    writeln!(w, "base_year,target_year,h_bin,pearson_r,n_common_authors")?;
    let bin = result
        .h_bin
        .iter()
        .map(|h| h.to_string())
        .collect::<Vec<_>>()
        .join(";");
    writeln!(
        w,
        "{},{},{},{},{}",
        result.base_year,
        result.target_year,
        csv_field(&bin),
        format_sig12(result.pearson_r),
        result.n_common_authors,
    )?;
    Ok(())
}

/// `author,year,h,c3`, authors in input order, years ascending within.
pub fn write_trajectories_csv<W: Write>(
    mut w: W,
    trajectories: &[AuthorTrajectory],
    meta: &ExportMeta,
) -> std::io::Result<()> {
    writeln!(w, "{}", meta.header_line())?;
    writeln!(w, "author,year,h,c3")?;
    for traj in trajectories {
        for point in &traj.points {
            writeln!(
                w,
                "{},{},{},{}",
                csv_field(&traj.author),
                point.year,
                point.h,
                format_sig12(point.c3),
            )?;
        }
    }
    Ok(())
}

/// `author,h,aci,pci,aai,c3`, rows in input order.
pub fn write_component_table_csv<W: Write>(
    mut w: W,
    rows: &[ComponentRow],
    meta: &ExportMeta,
) -> std::io::Result<()> {
    writeln!(w, "{}", meta.header_line())?;
    writeln!(w, "author,h,aci,pci,aai,c3")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            csv_field(&row.author),
            row.h,
            format_sig12(row.aci),
            format_sig12(row.pci),
            format_sig12(row.aai),
            format_sig12(row.c3),
        )?;
    }
    Ok(())
}
