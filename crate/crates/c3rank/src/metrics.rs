//! Citation-count baselines: per-paper citation counts, per-author totals,
//! and the h-index. All counts are scoped to the graph's snapshot.

use crate::graph::{AuthorIdx, MultiLayerGraph, PaperIdx};

/// Per-author baseline metrics plus the per-paper counts they derive from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorBaselines {
    /// Citations received by each paper, indexed by `PaperIdx`.
    pub paper_citations: Vec<u64>,
    /// Sum of the author's papers' citation counts, indexed by `AuthorIdx`.
    pub total_citations: Vec<u64>,
    /// Largest h with at least h papers of at least h citations each.
    pub h_index: Vec<u64>,
}

impl AuthorBaselines {
    pub fn compute(graph: &MultiLayerGraph) -> AuthorBaselines {
        let paper_citations = paper_citation_counts(graph);
        let h_index = author_h_index(graph, &paper_citations);
        let total_citations = (0..graph.n_authors())
            .map(|a| {
                graph
                    .papers_of(AuthorIdx(a as u32))
                    .map(|p| paper_citations[p.as_usize()])
                    .sum()
            })
            .collect();
        AuthorBaselines {
            paper_citations,
            total_citations,
            h_index,
        }
    }
}

/// In-degree of every paper in the citation layer.
pub fn paper_citation_counts(graph: &MultiLayerGraph) -> Vec<u64> {
    (0..graph.n_papers())
        .map(|p| graph.paper_citers(PaperIdx(p as u32)).count() as u64)
        .collect()
}

/// h-index of one citation-count multiset: sort descending; h is the
/// largest position i (1-based) with count ≥ i.
pub fn h_from_counts(counts: &[u64]) -> u64 {
    let mut counts = counts.to_vec();
    counts.sort_unstable_by(|x, y| y.cmp(x));
    let mut h = 0u64;
    for (i, &c) in counts.iter().enumerate() {
        if c >= (i + 1) as u64 {
            h = (i + 1) as u64;
        } else {
            break;
        }
    }
    h
}

/// h-index per author over the author's papers in the graph.
pub fn author_h_index(graph: &MultiLayerGraph, paper_citations: &[u64]) -> Vec<u64> {
    (0..graph.n_authors())
        .map(|a| {
            let counts: Vec<u64> = graph
                .papers_of(AuthorIdx(a as u32))
                .map(|p| paper_citations[p.as_usize()])
                .collect();
            h_from_counts(&counts)
        })
        .collect()
}
