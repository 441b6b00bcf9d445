//! The coupled fixed-point iteration behind the C³ score.
//!
//! Five vectors are iterated in lock step. Within one iteration, PQI, ACI,
//! AAI, and PCI are each computed from the previous iteration's values;
//! C³ is then assembled from the freshly computed components:
//!
//! ```text
//! pqi[i] = (1-θ) + θ · Σ_{k cites i}      pqi'[k] / outdeg(k)
//! aci[j] = (1-θ) + θ · Σ_{k cites j}      w(k,j) · aci'[k] / outdeg(k)
//! aai[j] =             Σ_{k coauthor j}   w(k,j) · aai'[k] / deg(k)
//! pci[j] = (c3'[j])^α · Σ_{k ∈ papers(j)} pqi'[k] / Σ_{l ∈ authors(k)} (c3'[l])^α
//! c3[j]  = (1-θ) + θ · (aci[j] + aai[j] + pci[j])
//! ```
//!
//! Primed values are from the previous iteration. In weighted mode (the
//! graph's build option) each neighbor contributes its edge weight over the
//! node's weighted out-strength; unweighted mode contributes 1 over the
//! distinct-neighbor count. The paper-citation layer is always unweighted.
//!
//! The AAI recurrence carries no damping term, so on bipartite
//! coauthorship components the literal iteration oscillates between two
//! vectors instead of converging. [`solve`] detects the oscillation and,
//! under [`AaiCycleHandling::Midpoint`], replaces the AAI vector with the
//! average of the last two iterates, which on such components is the fixed
//! point of the update. See the `convergence` chapter of the guide for the
//! worked example.
//!
//! All summations run in ascending neighbor order and each output entry is
//! reduced sequentially, so results are bitwise reproducible regardless of
//! thread count.

pub mod oracle;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{AuthorIdx, MultiLayerGraph, PaperIdx};

/// Iteration parameters.
///
/// Weighting is not configured here: the solver follows the `weighted`
/// option the graph was built with.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Damping factor θ in [0, 1).
    pub theta: f64,
    /// Coauthor credit exponent α ≥ 0. Zero splits every paper's score
    /// equally among its authors.
    pub alpha: f64,
    /// Convergence tolerance on the max-norm delta across all five
    /// vectors.
    pub epsilon: f64,
    /// Iteration cap.
    pub max_iters: u32,
    pub aai_cycle_handling: AaiCycleHandling,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            theta: 0.5,
            alpha: 0.0,
            epsilon: 1e-9,
            max_iters: 1000,
            aai_cycle_handling: AaiCycleHandling::Midpoint,
        }
    }
}

/// What to do when the AAI iteration enters a period-two cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AaiCycleHandling {
    /// Replace AAI with the average of the last two iterates and continue.
    #[default]
    Midpoint,
    /// Keep iterating the literal recurrence; the run then ends at the
    /// iteration cap with `converged = false`.
    None,
}

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error("theta must lie in [0, 1), got {0}")]
    InvalidTheta(f64),
    #[error("alpha must be finite and non-negative, got {0}")]
    InvalidAlpha(f64),
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("max_iters must be positive")]
    InvalidMaxIters,
}

/// One iteration's five score vectors.
///
/// `pqi` is indexed by `PaperIdx`; the four author vectors by `AuthorIdx`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSet {
    pub pqi: Vec<f64>,
    pub aci: Vec<f64>,
    pub aai: Vec<f64>,
    pub pci: Vec<f64>,
    pub c3: Vec<f64>,
    /// Iteration number this state belongs to; 0 is the initial state.
    pub iteration: u32,
}

/// How a [`solve`] run ended.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub iterations_run: u32,
    /// Max-norm delta across all five vectors between the last two
    /// iterations.
    pub final_delta: f64,
    pub converged: bool,
    /// Whether a period-two AAI oscillation was ever detected.
    pub aai_cycle_detected: bool,
}

/// The all-ones starting state, iteration 0.
pub fn init_scores(graph: &MultiLayerGraph) -> ScoreSet {
    ScoreSet {
        pqi: vec![1.0; graph.n_papers()],
        aci: vec![1.0; graph.n_authors()],
        aai: vec![1.0; graph.n_authors()],
        pci: vec![1.0; graph.n_authors()],
        c3: vec![1.0; graph.n_authors()],
        iteration: 0,
    }
}

/// One PQI update from the previous iteration's state.
pub fn pqi_step(graph: &MultiLayerGraph, prev: &ScoreSet, cfg: &SolverConfig) -> Vec<f64> {
    let theta = cfg.theta;
    (0..graph.n_papers())
        .into_par_iter()
        .map(|i| {
            let mut sum = 0.0;
            for k in graph.paper_citers(PaperIdx(i as u32)) {
                sum += prev.pqi[k.as_usize()] / graph.out_degree_paper(k) as f64;
            }
            (1.0 - theta) + theta * sum
        })
        .collect()
}

/// One ACI update from the previous iteration's state.
pub fn aci_step(graph: &MultiLayerGraph, prev: &ScoreSet, cfg: &SolverConfig) -> Vec<f64> {
    let theta = cfg.theta;
    let weighted = graph.options().weighted;
    (0..graph.n_authors())
        .into_par_iter()
        .map(|j| {
            let mut sum = 0.0;
            for (k, w) in graph.author_citers(AuthorIdx(j as u32)) {
                let numer = if weighted { w as f64 } else { 1.0 };
                sum += numer * prev.aci[k.as_usize()] / graph.out_strength_author(k) as f64;
            }
            (1.0 - theta) + theta * sum
        })
        .collect()
}

/// One AAI update from the previous iteration's state. No damping term.
pub fn aai_step(graph: &MultiLayerGraph, prev: &ScoreSet, _cfg: &SolverConfig) -> Vec<f64> {
    let weighted = graph.options().weighted;
    (0..graph.n_authors())
        .into_par_iter()
        .map(|j| {
            let mut sum = 0.0;
            for (k, w) in graph.coauthors(AuthorIdx(j as u32)) {
                let numer = if weighted { w as f64 } else { 1.0 };
                sum += numer * prev.aai[k.as_usize()] / graph.strength_coauthor(k) as f64;
            }
            sum
        })
        .collect()
}

/// One PCI update from the previous iteration's state.
///
/// Panics if some paper's author-weight denominator is zero, which cannot
/// happen starting from [`init_scores`] (all c3 values stay at or above
/// 1 − θ).
pub fn pci_step(graph: &MultiLayerGraph, prev: &ScoreSet, cfg: &SolverConfig) -> Vec<f64> {
    let alpha = cfg.alpha;
    // powf(0.0) is exactly 1.0 for every base, including 0^0.
    let denominators: Vec<f64> = (0..graph.n_papers())
        .into_par_iter()
        .map(|k| {
            let d: f64 = graph
                .authors_of(PaperIdx(k as u32))
                .map(|l| prev.c3[l.as_usize()].powf(alpha))
                .sum();
            assert!(d > 0.0, "zero author-weight denominator for paper {k}");
            d
        })
        .collect();
    (0..graph.n_authors())
        .into_par_iter()
        .map(|j| {
            let mut sum = 0.0;
            for k in graph.papers_of(AuthorIdx(j as u32)) {
                sum += prev.pqi[k.as_usize()] / denominators[k.as_usize()];
            }
            prev.c3[j].powf(alpha) * sum
        })
        .collect()
}

/// Assembles C³ from the current iteration's components.
pub fn c3_step(aci: &[f64], aai: &[f64], pci: &[f64], cfg: &SolverConfig) -> Vec<f64> {
    let theta = cfg.theta;
    aci.iter()
        .zip(aai)
        .zip(pci)
        .map(|((a, b), c)| (1.0 - theta) + theta * (a + b + c))
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn validate(cfg: &SolverConfig) -> Result<(), SolverError> {
    if !(0.0..1.0).contains(&cfg.theta) {
        return Err(SolverError::InvalidTheta(cfg.theta));
    }
    if !cfg.alpha.is_finite() || cfg.alpha < 0.0 {
        return Err(SolverError::InvalidAlpha(cfg.alpha));
    }
    if cfg.epsilon.is_nan() || cfg.epsilon <= 0.0 {
        return Err(SolverError::InvalidEpsilon(cfg.epsilon));
    }
    if cfg.max_iters == 0 {
        return Err(SolverError::InvalidMaxIters);
    }
    Ok(())
}

/// Runs the lock-step iteration to the fixed point.
///
/// Stops when the max-norm delta across all five vectors drops below
/// `cfg.epsilon`, or at `cfg.max_iters` with `converged = false`. A
/// period-two AAI oscillation is detected when the new AAI vector matches
/// the one from two iterations back (within epsilon) while still differing
/// from the last; the configured [`AaiCycleHandling`] decides what happens
/// then.
pub fn solve(
    graph: &MultiLayerGraph,
    cfg: &SolverConfig,
) -> Result<(ScoreSet, ConvergenceReport), SolverError> {
    validate(cfg)?;
    let mut scores = init_scores(graph);
    let mut aai_two_back: Option<Vec<f64>> = None;
    let mut report = ConvergenceReport {
        iterations_run: 0,
        final_delta: 0.0,
        converged: false,
        aai_cycle_detected: false,
    };

    for t in 1..=cfg.max_iters {
        let pqi = pqi_step(graph, &scores, cfg);
        let aci = aci_step(graph, &scores, cfg);
        let mut aai = aai_step(graph, &scores, cfg);
        let pci = pci_step(graph, &scores, cfg);

        if let Some(two_back) = &aai_two_back {
            let return_delta = max_abs_diff(&aai, two_back);
            let step_delta = max_abs_diff(&aai, &scores.aai);
            if return_delta < cfg.epsilon && step_delta >= cfg.epsilon {
                report.aai_cycle_detected = true;
                if cfg.aai_cycle_handling == AaiCycleHandling::Midpoint {
                    for (m, last) in aai.iter_mut().zip(&scores.aai) {
                        *m = 0.5 * (*m + last);
                    }
                }
            }
        }

        let c3 = c3_step(&aci, &aai, &pci, cfg);

        let delta = max_abs_diff(&pqi, &scores.pqi)
            .max(max_abs_diff(&aci, &scores.aci))
            .max(max_abs_diff(&aai, &scores.aai))
            .max(max_abs_diff(&pci, &scores.pci))
            .max(max_abs_diff(&c3, &scores.c3));

        aai_two_back = Some(std::mem::take(&mut scores.aai));
        scores = ScoreSet {
            pqi,
            aci,
            aai,
            pci,
            c3,
            iteration: t,
        };
        report.iterations_run = t;
        report.final_delta = delta;
        if delta < cfg.epsilon {
            report.converged = true;
            break;
        }
    }
    Ok((scores, report))
}
