//! Dense brute-force reimplementation of the fixed point, for verifying
//! the sparse solver.
//!
//! The oracle rebuilds explicit dense update matrices from the public
//! edge-list dumps rather than touching the solver's adjacency structures,
//! then iterates the same schedule with the same cycle handling. It shares
//! no arithmetic with [`solve`](super::solve) beyond the two type
//! definitions, so agreement between the two is meaningful evidence.
//!
//! Quadratic in nodes and only for tests; guarded to small graphs.

use crate::graph::{Layer, MultiLayerGraph};
use crate::solver::{AaiCycleHandling, ScoreSet, SolverConfig};

const MAX_ORACLE_NODES: usize = 200;

/// Runs the reference iteration. Panics if the graph exceeds the size
/// guard or the config is invalid.
pub fn dense_oracle(graph: &MultiLayerGraph, cfg: &SolverConfig) -> ScoreSet {
    let n_p = graph.n_papers();
    let n_a = graph.n_authors();
    assert!(
        n_p + n_a <= MAX_ORACLE_NODES,
        "oracle limited to {MAX_ORACLE_NODES} nodes, got {}",
        n_p + n_a
    );
    assert!((0.0..1.0).contains(&cfg.theta) && cfg.alpha >= 0.0 && cfg.epsilon > 0.0);
    let weighted = graph.options().weighted;

    // paper_matrix[i][k]: mass flowing from citer k to cited paper i.
    let mut paper_matrix = vec![vec![0.0f64; n_p]; n_p];
    {
        let edges = graph.edge_list(Layer::PaperCitation);
        let mut outdeg = vec![0u64; n_p];
        for &(src, _, _) in &edges {
            outdeg[src] += 1;
        }
        for &(src, dst, _) in &edges {
            paper_matrix[dst][src] = 1.0 / outdeg[src] as f64;
        }
    }

    let mut author_matrix = vec![vec![0.0f64; n_a]; n_a];
    {
        let edges = graph.edge_list(Layer::AuthorCitation);
        let mut out = vec![0u64; n_a];
        for &(src, _, w) in &edges {
            out[src] += if weighted { w } else { 1 };
        }
        for &(src, dst, w) in &edges {
            let numer = if weighted { w as f64 } else { 1.0 };
            author_matrix[dst][src] = numer / out[src] as f64;
        }
    }

    let mut coauthor_matrix = vec![vec![0.0f64; n_a]; n_a];
    {
        // The dump lists each unordered pair once; symmetrize here.
        let edges = graph.edge_list(Layer::Coauthorship);
        let mut strength = vec![0u64; n_a];
        for &(u, v, w) in &edges {
            let inc = if weighted { w } else { 1 };
            strength[u] += inc;
            strength[v] += inc;
        }
        for &(u, v, w) in &edges {
            let numer = if weighted { w as f64 } else { 1.0 };
            coauthor_matrix[v][u] = numer / strength[u] as f64;
            coauthor_matrix[u][v] = numer / strength[v] as f64;
        }
    }

    let mut papers_of = vec![Vec::new(); n_a];
    let mut authors_of = vec![Vec::new(); n_p];
    for &(a, p, _) in &graph.edge_list(Layer::Authorship) {
        papers_of[a].push(p);
        authors_of[p].push(a);
    }

    let theta = cfg.theta;
    let mut state = ScoreSet {
        pqi: vec![1.0; n_p],
        aci: vec![1.0; n_a],
        aai: vec![1.0; n_a],
        pci: vec![1.0; n_a],
        c3: vec![1.0; n_a],
        iteration: 0,
    };
    let mut aai_two_back: Option<Vec<f64>> = None;

    for t in 1..=cfg.max_iters {
        let matvec = |m: &Vec<Vec<f64>>, x: &[f64]| -> Vec<f64> {
            m.iter()
                .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
                .collect()
        };
        let pqi: Vec<f64> = matvec(&paper_matrix, &state.pqi)
            .into_iter()
            .map(|s| (1.0 - theta) + theta * s)
            .collect();
        let aci: Vec<f64> = matvec(&author_matrix, &state.aci)
            .into_iter()
            .map(|s| (1.0 - theta) + theta * s)
            .collect();
        let mut aai = matvec(&coauthor_matrix, &state.aai);

        let denom: Vec<f64> = (0..n_p)
            .map(|p| {
                authors_of[p]
                    .iter()
                    .map(|&l| state.c3[l].powf(cfg.alpha))
                    .sum()
            })
            .collect();
        let pci: Vec<f64> = (0..n_a)
            .map(|j| {
                let share: f64 = papers_of[j].iter().map(|&p| state.pqi[p] / denom[p]).sum();
                state.c3[j].powf(cfg.alpha) * share
            })
            .collect();

        if let Some(two_back) = &aai_two_back {
            let ret = diff(&aai, two_back);
            let step = diff(&aai, &state.aai);
            if ret < cfg.epsilon
                && step >= cfg.epsilon
                && cfg.aai_cycle_handling == AaiCycleHandling::Midpoint
            {
                for (m, last) in aai.iter_mut().zip(&state.aai) {
                    *m = 0.5 * (*m + last);
                }
            }
        }

        let c3: Vec<f64> = (0..n_a)
            .map(|j| (1.0 - theta) + theta * (aci[j] + aai[j] + pci[j]))
            .collect();

        let delta = diff(&pqi, &state.pqi)
            .max(diff(&aci, &state.aci))
            .max(diff(&aai, &state.aai))
            .max(diff(&pci, &state.pci))
            .max(diff(&c3, &state.c3));

        aai_two_back = Some(std::mem::take(&mut state.aai));
        state = ScoreSet {
            pqi,
            aci,
            aai,
            pci,
            c3,
            iteration: t,
        };
        if delta < cfg.epsilon {
            break;
        }
    }
    state
}

fn diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
