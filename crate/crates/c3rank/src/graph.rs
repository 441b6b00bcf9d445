//! The three-layer author/paper network.
//!
//! A [`MultiLayerGraph`] is built once from a [`Snapshot`](crate::corpus::Snapshot)
//! and is immutable afterwards. It holds four adjacency structures:
//!
//! | layer            | nodes   | direction  | weights                          |
//! |------------------|---------|------------|----------------------------------|
//! | paper citation   | papers  | directed   | none                             |
//! | author citation  | authors | directed   | citing (paper, paper) pair count |
//! | coauthorship     | authors | undirected | papers coauthored                |
//! | authorship       | both    | bipartite  | none                             |
//!
//! Authors and papers are addressed by dense indices ([`AuthorIdx`],
//! [`PaperIdx`]); lookup tables map back to names and ids. All neighbor
//! lists are sorted ascending by index, so iteration order (and therefore
//! every floating-point sum downstream) is deterministic.

use std::collections::HashMap;
use std::io::Write;

use crate::corpus::Snapshot;

/// Dense index of an author within one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuthorIdx(pub u32);

/// Dense index of a paper within one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PaperIdx(pub u32);

impl AuthorIdx {
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }
}

impl PaperIdx {
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }
}

/// Options fixed at build time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphBuildOptions {
    /// Use edge weights in degree and contribution computations. With
    /// `false`, every accessor counts distinct neighbors instead, which is
    /// the unit-weight reading of the update rules.
    pub weighted: bool,
    /// Keep author-citation self-loops (an author citing their own work).
    pub include_self_citations: bool,
}

impl Default for GraphBuildOptions {
    fn default() -> Self {
        GraphBuildOptions {
            weighted: true,
            include_self_citations: false,
        }
    }
}

/// Layer selector for edge-list dumps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    /// Directed paper-to-paper edges, weight always 1.
    PaperCitation,
    /// Directed author-to-author edges with pair-count weights.
    AuthorCitation,
    /// Undirected author pairs, each emitted once with the smaller index
    /// first.
    Coauthorship,
    /// Author-to-paper incidence links, weight always 1.
    Authorship,
}

/// Node and edge counts recorded during construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub n_papers: usize,
    pub n_authors: usize,
    /// Directed paper-citation edges.
    pub paper_citation_edges: usize,
    /// Distinct directed author-citation edges after weight collapsing.
    pub author_citation_edges: usize,
    /// Distinct unordered coauthor pairs.
    pub coauthorship_edges: usize,
    /// (author, paper) incidence links.
    pub authorship_links: usize,
    /// Author-citation pair instances dropped because citing and cited
    /// author coincide. Counts weight mass, not collapsed edges.
    pub self_citations_dropped: u64,
}

/// Compressed sparse rows. `weights` is either empty (every edge counts 1)
/// or parallel to `targets`. Row targets are strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<u64>,
    /// Per-row weight sum; equals row length for unweighted layers.
    strengths: Vec<u64>,
}

impl Csr {
    /// Builds from directed edges without weights. Pairs must be distinct.
    fn unweighted(n: usize, mut pairs: Vec<(u32, u32)>) -> Csr {
        pairs.sort_unstable();
        debug_assert!(pairs.windows(2).all(|w| w[0] != w[1]));
        let mut offsets = vec![0usize; n + 1];
        for &(src, _) in &pairs {
            offsets[src as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.iter().map(|&(_, dst)| dst).collect();
        let strengths = (0..n)
            .map(|i| (offsets[i + 1] - offsets[i]) as u64)
            .collect();
        Csr {
            offsets,
            targets,
            weights: Vec::new(),
            strengths,
        }
    }

    /// Builds from directed edges, collapsing repeated pairs into integer
    /// weights.
    fn weighted(n: usize, mut pairs: Vec<(u32, u32)>) -> Csr {
        pairs.sort_unstable();
        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (src, dst) = pairs[i];
            let mut w = 0u64;
            while i < pairs.len() && pairs[i] == (src, dst) {
                w += 1;
                i += 1;
            }
            offsets[src as usize + 1] += 1;
            targets.push(dst);
            weights.push(w);
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut strengths = vec![0u64; n];
        for row in 0..n {
            strengths[row] = weights[offsets[row]..offsets[row + 1]].iter().sum();
        }
        Csr {
            offsets,
            targets,
            weights,
            strengths,
        }
    }

    fn row(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Neighbor count, ignoring weights.
    fn degree(&self, u: usize) -> u64 {
        (self.offsets[u + 1] - self.offsets[u]) as u64
    }

    /// Sum of incident weights (equals degree when unweighted).
    fn strength(&self, u: usize) -> u64 {
        self.strengths[u]
    }

    /// Iterates `(target, weight)` in ascending target order.
    fn neighbors(&self, u: usize) -> impl Iterator<Item = (u32, u64)> + '_ {
        let lo = self.offsets[u];
        let hi = self.offsets[u + 1];
        let targets = self.targets[lo..hi].iter().copied();
        let weights: &[u64] = if self.weights.is_empty() {
            &[]
        } else {
            &self.weights[lo..hi]
        };
        targets
            .enumerate()
            .map(move |(i, t)| (t, weights.get(i).copied().unwrap_or(1)))
    }

    fn transposed_pairs(&self) -> Vec<(u32, u32, u64)> {
        let mut out = Vec::with_capacity(self.targets.len());
        for src in 0..self.offsets.len() - 1 {
            for (dst, w) in self.neighbors(src) {
                out.push((dst, src as u32, w));
            }
        }
        out
    }

    /// Builds from `(src, dst, weight)` triples with distinct `(src, dst)`.
    fn from_triples(n: usize, mut triples: Vec<(u32, u32, u64)>) -> Csr {
        triples.sort_unstable();
        debug_assert!(triples
            .windows(2)
            .all(|w| (w[0].0, w[0].1) != (w[1].0, w[1].1)));
        let mut offsets = vec![0usize; n + 1];
        for &(src, _, _) in &triples {
            offsets[src as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = triples.iter().map(|&(_, dst, _)| dst).collect();
        let weights: Vec<u64> = triples.iter().map(|&(_, _, w)| w).collect();
        let mut strengths = vec![0u64; n];
        for row in 0..n {
            strengths[row] = weights[offsets[row]..offsets[row + 1]].iter().sum();
        }
        Csr {
            offsets,
            targets,
            weights,
            strengths,
        }
    }
}

/// The immutable three-layer network plus authorship links.
///
/// Degree accessors respect the build-time `weighted` option: weighted mode
/// returns summed edge weights, unweighted mode counts distinct neighbors.
/// The paper-citation layer carries no weights either way.
#[derive(Debug, Clone)]
pub struct MultiLayerGraph {
    options: GraphBuildOptions,
    paper_ids: Vec<String>,
    author_names: Vec<String>,
    paper_by_id: HashMap<String, u32>,
    author_by_name: HashMap<String, u32>,
    /// Paper out-references (the papers each paper cites).
    paper_out: Csr,
    /// Transpose: the papers citing each paper.
    paper_in: Csr,
    author_cite_out: Csr,
    author_cite_in: Csr,
    coauthor: Csr,
    author_papers: Csr,
    paper_authors: Csr,
}

impl MultiLayerGraph {
    /// Builds the network from a snapshot.
    ///
    /// Panics if the snapshot violates corpus invariants (an unresolved
    /// reference or an authorless paper); both are unreachable through the
    /// `corpus` constructors.
    pub fn build(snapshot: &Snapshot, options: GraphBuildOptions) -> (Self, BuildReport) {
        let papers = snapshot.corpus().papers();
        let paper_ids: Vec<String> = papers.iter().map(|p| p.id.clone()).collect();
        let author_names: Vec<String> = snapshot.corpus().author_universe().to_vec();
        let n_papers = paper_ids.len();
        let n_authors = author_names.len();

        let paper_by_id: HashMap<String, u32> = paper_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i as u32))
            .collect();
        let author_by_name: HashMap<String, u32> = author_names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), i as u32))
            .collect();

        let mut cite_pairs: Vec<(u32, u32)> = Vec::new();
        let mut authorship_pairs: Vec<(u32, u32)> = Vec::new();
        for (i, paper) in papers.iter().enumerate() {
            let src = i as u32;
            for r in &paper.refs {
                let dst = *paper_by_id
                    .get(r.as_str())
                    .expect("snapshot reference set is closed");
                cite_pairs.push((src, dst));
            }
            assert!(!paper.authors.is_empty(), "paper without authors");
            for name in &paper.authors {
                let a = author_by_name[name.as_str()];
                authorship_pairs.push((a, src));
            }
        }

        let mut coauthor_pairs: Vec<(u32, u32)> = Vec::new();
        for paper in papers {
            let idxs: Vec<u32> = paper
                .authors
                .iter()
                .map(|name| author_by_name[name.as_str()])
                .collect();
            for (i, &u) in idxs.iter().enumerate() {
                for &v in &idxs[i + 1..] {
                    coauthor_pairs.push((u, v));
                    coauthor_pairs.push((v, u));
                }
            }
        }

        let mut self_citations_dropped = 0u64;
        let mut author_cite_pairs: Vec<(u32, u32)> = Vec::new();
        for &(citing, cited) in &cite_pairs {
            let citing_authors = &papers[citing as usize].authors;
            let cited_authors = &papers[cited as usize].authors;
            for ka in citing_authors {
                let k = author_by_name[ka.as_str()];
                for ja in cited_authors {
                    let j = author_by_name[ja.as_str()];
                    if k == j && !options.include_self_citations {
                        self_citations_dropped += 1;
                    } else {
                        author_cite_pairs.push((k, j));
                    }
                }
            }
        }

        let paper_out = Csr::unweighted(n_papers, cite_pairs);
        let paper_in = Csr::from_triples(n_papers, paper_out.transposed_pairs());
        let author_papers = Csr::unweighted(n_authors, authorship_pairs);
        let paper_authors = Csr::from_triples(n_papers, author_papers.transposed_pairs());
        let coauthor = Csr::weighted(n_authors, coauthor_pairs);
        let author_cite_out = Csr::weighted(n_authors, author_cite_pairs);
        let author_cite_in = Csr::from_triples(n_authors, author_cite_out.transposed_pairs());

        let report = BuildReport {
            n_papers,
            n_authors,
            paper_citation_edges: paper_out.targets.len(),
            author_citation_edges: author_cite_out.targets.len(),
            coauthorship_edges: coauthor.targets.len() / 2,
            authorship_links: author_papers.targets.len(),
            self_citations_dropped,
        };

        let graph = MultiLayerGraph {
            options,
            paper_ids,
            author_names,
            paper_by_id,
            author_by_name,
            paper_out,
            paper_in,
            author_cite_out,
            author_cite_in,
            coauthor,
            author_papers,
            paper_authors,
        };
        (graph, report)
    }

    pub fn options(&self) -> GraphBuildOptions {
        self.options
    }

    pub fn n_papers(&self) -> usize {
        self.paper_ids.len()
    }

    pub fn n_authors(&self) -> usize {
        self.author_names.len()
    }

    pub fn paper_id(&self, p: PaperIdx) -> &str {
        &self.paper_ids[p.as_usize()]
    }

    pub fn author_name(&self, a: AuthorIdx) -> &str {
        &self.author_names[a.as_usize()]
    }

    pub fn paper_idx(&self, id: &str) -> Option<PaperIdx> {
        self.paper_by_id.get(id).map(|&i| PaperIdx(i))
    }

    pub fn author_idx(&self, name: &str) -> Option<AuthorIdx> {
        self.author_by_name.get(name).map(|&i| AuthorIdx(i))
    }

    /// Papers cited by `p`.
    pub fn paper_refs(&self, p: PaperIdx) -> impl Iterator<Item = PaperIdx> + '_ {
        self.paper_out
            .row(p.as_usize())
            .iter()
            .map(|&t| PaperIdx(t))
    }

    /// Papers citing `p`.
    pub fn paper_citers(&self, p: PaperIdx) -> impl Iterator<Item = PaperIdx> + '_ {
        self.paper_in.row(p.as_usize()).iter().map(|&t| PaperIdx(t))
    }

    /// Number of papers `p` cites. Never weighted.
    pub fn out_degree_paper(&self, p: PaperIdx) -> u64 {
        self.paper_out.degree(p.as_usize())
    }

    /// Authors citing `a`, with collapsed pair-count weights.
    pub fn author_citers(&self, a: AuthorIdx) -> impl Iterator<Item = (AuthorIdx, u64)> + '_ {
        self.author_cite_in
            .neighbors(a.as_usize())
            .map(|(t, w)| (AuthorIdx(t), w))
    }

    /// Authors cited by `a`, with collapsed pair-count weights.
    pub fn author_cited(&self, a: AuthorIdx) -> impl Iterator<Item = (AuthorIdx, u64)> + '_ {
        self.author_cite_out
            .neighbors(a.as_usize())
            .map(|(t, w)| (AuthorIdx(t), w))
    }

    /// Out-degree of `a` in the author-citation layer, honoring the
    /// `weighted` option.
    pub fn out_strength_author(&self, a: AuthorIdx) -> u64 {
        if self.options.weighted {
            self.author_cite_out.strength(a.as_usize())
        } else {
            self.author_cite_out.degree(a.as_usize())
        }
    }

    /// Coauthors of `a` with shared-paper-count weights.
    pub fn coauthors(&self, a: AuthorIdx) -> impl Iterator<Item = (AuthorIdx, u64)> + '_ {
        self.coauthor
            .neighbors(a.as_usize())
            .map(|(t, w)| (AuthorIdx(t), w))
    }

    /// Degree of `a` in the coauthorship layer, honoring the `weighted`
    /// option.
    pub fn strength_coauthor(&self, a: AuthorIdx) -> u64 {
        if self.options.weighted {
            self.coauthor.strength(a.as_usize())
        } else {
            self.coauthor.degree(a.as_usize())
        }
    }

    /// Papers written by `a`.
    pub fn papers_of(&self, a: AuthorIdx) -> impl Iterator<Item = PaperIdx> + '_ {
        self.author_papers
            .row(a.as_usize())
            .iter()
            .map(|&t| PaperIdx(t))
    }

    /// Authors of `p`.
    pub fn authors_of(&self, p: PaperIdx) -> impl Iterator<Item = AuthorIdx> + '_ {
        self.paper_authors
            .row(p.as_usize())
            .iter()
            .map(|&t| AuthorIdx(t))
    }

    pub fn author_count_of_paper(&self, p: PaperIdx) -> usize {
        self.paper_authors.row(p.as_usize()).len()
    }

    /// Dumps one layer as `(src, dst, weight)` triples, sorted.
    ///
    /// Directed layers emit every edge; the coauthorship layer emits each
    /// unordered pair once with `src < dst`. The dense verification oracle
    /// rebuilds its matrices from exactly this view.
    pub fn edge_list(&self, layer: Layer) -> Vec<(usize, usize, u64)> {
        let dump = |csr: &Csr, half: bool| {
            let mut out = Vec::new();
            for src in 0..csr.offsets.len() - 1 {
                for (dst, w) in csr.neighbors(src) {
                    if half && dst as usize <= src {
                        continue;
                    }
                    out.push((src, dst as usize, w));
                }
            }
            out
        };
        match layer {
            Layer::PaperCitation => dump(&self.paper_out, false),
            Layer::AuthorCitation => dump(&self.author_cite_out, false),
            Layer::Coauthorship => dump(&self.coauthor, true),
            Layer::Authorship => dump(&self.author_papers, false),
        }
    }

    /// Writes one layer as CSV (`src,dst,weight` header, same rows as
    /// [`edge_list`](Self::edge_list)).
    pub fn write_layer_csv<W: Write>(&self, layer: Layer, mut writer: W) -> std::io::Result<()> {
        writeln!(writer, "src,dst,weight")?;
        for (src, dst, w) in self.edge_list(layer) {
            writeln!(writer, "{src},{dst},{w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, PaperRecord, ParseReport};
    use proptest::prelude::*;

    fn record(id: &str, year: i32, authors: &[&str], refs: &[&str]) -> PaperRecord {
        PaperRecord {
            id: id.to_string(),
            title: String::new(),
            year,
            authors: authors.iter().map(|s| s.to_string()).collect(),
            refs: refs.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn graph_of(
        records: Vec<PaperRecord>,
        options: GraphBuildOptions,
    ) -> (MultiLayerGraph, BuildReport) {
        let corpus = Corpus::from_records(records, &mut ParseReport::default());
        let snapshot = corpus.snapshot(i32::MAX);
        MultiLayerGraph::build(&snapshot, options)
    }

    fn a(g: &MultiLayerGraph, name: &str) -> AuthorIdx {
        g.author_idx(name).unwrap()
    }

    #[test]
    fn single_coauthored_paper() {
        let (g, report) = graph_of(
            vec![record("p", 2000, &["X", "Y"], &[])],
            GraphBuildOptions::default(),
        );
        let x = a(&g, "X");
        let y = a(&g, "Y");
        assert_eq!(g.coauthors(x).collect::<Vec<_>>(), vec![(y, 1)]);
        assert_eq!(g.coauthors(y).collect::<Vec<_>>(), vec![(x, 1)]);
        assert_eq!(report.author_citation_edges, 0);
        assert_eq!(report.authorship_links, 2);
        let p = g.paper_idx("p").unwrap();
        assert_eq!(g.papers_of(x).collect::<Vec<_>>(), vec![p]);
        assert_eq!(g.authors_of(p).count(), 2);
    }

    #[test]
    fn citation_induces_author_edge() {
        let (g, _) = graph_of(
            vec![
                record("p1", 1995, &["X"], &[]),
                record("p2", 1998, &["Y"], &["p1"]),
            ],
            GraphBuildOptions::default(),
        );
        let x = a(&g, "X");
        let y = a(&g, "Y");
        assert_eq!(g.author_citers(x).collect::<Vec<_>>(), vec![(y, 1)]);
        assert_eq!(g.author_cited(y).collect::<Vec<_>>(), vec![(x, 1)]);
        let p1 = g.paper_idx("p1").unwrap();
        let p2 = g.paper_idx("p2").unwrap();
        assert_eq!(g.paper_citers(p1).collect::<Vec<_>>(), vec![p2]);
        assert_eq!(g.out_degree_paper(p2), 1);
    }

    #[test]
    fn self_citation_dropped_by_default() {
        // p3 by {X, Y} cites p1 by {X}: the X to X pair is a self-citation.
        let records = vec![
            record("p1", 1995, &["X"], &[]),
            record("p3", 1999, &["X", "Y"], &["p1"]),
        ];
        let (g, report) = graph_of(records.clone(), GraphBuildOptions::default());
        let x = a(&g, "X");
        let y = a(&g, "Y");
        assert_eq!(g.author_citers(x).collect::<Vec<_>>(), vec![(y, 1)]);
        assert_eq!(report.self_citations_dropped, 1);

        let (g2, report2) = graph_of(
            records,
            GraphBuildOptions {
                include_self_citations: true,
                ..GraphBuildOptions::default()
            },
        );
        let x2 = a(&g2, "X");
        let y2 = a(&g2, "Y");
        assert_eq!(
            g2.author_citers(x2).collect::<Vec<_>>(),
            vec![(x2, 1), (y2, 1)]
        );
        assert_eq!(report2.self_citations_dropped, 0);
    }

    #[test]
    fn triangle_from_three_author_paper() {
        let (g, report) = graph_of(
            vec![record("p", 2000, &["X", "Y", "Z"], &[])],
            GraphBuildOptions::default(),
        );
        for name in ["X", "Y", "Z"] {
            assert_eq!(g.strength_coauthor(a(&g, name)), 2);
        }
        assert_eq!(report.coauthorship_edges, 3);
    }

    #[test]
    fn weighted_vs_unweighted_strength() {
        // X coauthors with Y on two papers and with Z on three.
        let records = vec![
            record("p1", 2000, &["X", "Y"], &[]),
            record("p2", 2001, &["X", "Y"], &[]),
            record("p3", 2002, &["X", "Z"], &[]),
            record("p4", 2003, &["X", "Z"], &[]),
            record("p5", 2004, &["X", "Z"], &[]),
        ];
        let (g, _) = graph_of(records.clone(), GraphBuildOptions::default());
        assert_eq!(g.strength_coauthor(a(&g, "X")), 5);
        let (g, _) = graph_of(
            records,
            GraphBuildOptions {
                weighted: false,
                ..GraphBuildOptions::default()
            },
        );
        assert_eq!(g.strength_coauthor(a(&g, "X")), 2);
    }

    #[test]
    fn isolated_author_has_zero_strength() {
        let (g, _) = graph_of(
            vec![record("p", 2000, &["Solo"], &[])],
            GraphBuildOptions::default(),
        );
        let s = a(&g, "Solo");
        assert_eq!(g.strength_coauthor(s), 0);
        assert_eq!(g.out_strength_author(s), 0);
    }

    #[test]
    fn repeated_citation_pairs_collapse_to_weight() {
        // Both of k's papers cite j's paper: edge weight 2.
        let (g, _) = graph_of(
            vec![
                record("j1", 1990, &["J"], &[]),
                record("k1", 1995, &["K"], &["j1"]),
                record("k2", 1996, &["K"], &["j1"]),
            ],
            GraphBuildOptions::default(),
        );
        let j = a(&g, "J");
        let k = a(&g, "K");
        assert_eq!(g.author_citers(j).collect::<Vec<_>>(), vec![(k, 2)]);
        assert_eq!(g.out_strength_author(k), 2);
    }

    #[test]
    fn empty_snapshot_builds_empty_graph() {
        let corpus = Corpus::from_records(Vec::new(), &mut ParseReport::default());
        let (g, report) =
            MultiLayerGraph::build(&corpus.snapshot(2000), GraphBuildOptions::default());
        assert_eq!(g.n_papers(), 0);
        assert_eq!(g.n_authors(), 0);
        assert_eq!(report, BuildReport::default());
    }

    #[test]
    fn edge_list_csv_roundtrip_shape() {
        let (g, _) = graph_of(
            vec![
                record("p1", 1995, &["X"], &[]),
                record("p2", 1998, &["X", "Y"], &["p1"]),
            ],
            GraphBuildOptions::default(),
        );
        let mut buf = Vec::new();
        g.write_layer_csv(Layer::Coauthorship, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("src,dst,weight"));
        assert_eq!(lines.next(), Some("0,1,1"));
        assert_eq!(lines.next(), None);
    }

    // Random small corpora for the structural invariants. Refs may dangle
    // or self-refer; corpus validation cleans them up before the build.
    fn arb_records() -> impl Strategy<Value = Vec<PaperRecord>> {
        proptest::collection::vec(
            (
                1990..2010i32,
                proptest::collection::vec(0usize..6, 1..4),
                proptest::collection::vec(0usize..14, 0..5),
            ),
            1..12,
        )
        .prop_map(|specs| {
            specs
                .into_iter()
                .enumerate()
                .map(|(i, (year, authors, refs))| PaperRecord {
                    id: format!("p{i:02}"),
                    title: String::new(),
                    year,
                    authors: authors.iter().map(|a| format!("a{a}")).collect(),
                    refs: refs.iter().map(|r| format!("p{r:02}")).collect(),
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn coauthorship_is_symmetric(records in arb_records()) {
            let (g, _) = graph_of(records, GraphBuildOptions::default());
            for u in 0..g.n_authors() {
                for (v, w) in g.coauthors(AuthorIdx(u as u32)) {
                    let back = g.coauthors(v).find(|&(t, _)| t == AuthorIdx(u as u32));
                    prop_assert_eq!(back, Some((AuthorIdx(u as u32), w)));
                }
            }
        }

        #[test]
        fn handshake_sum(records in arb_records()) {
            let (g, _) = graph_of(records, GraphBuildOptions::default());
            let total: u64 = (0..g.n_authors())
                .map(|u| g.strength_coauthor(AuthorIdx(u as u32)))
                .sum();
            let edge_weight: u64 = g
                .edge_list(Layer::Coauthorship)
                .iter()
                .map(|&(_, _, w)| w)
                .sum();
            prop_assert_eq!(total, 2 * edge_weight);
        }

        #[test]
        fn author_citation_weight_matches_author_counts(records in arb_records()) {
            // With self-citations kept, every citation edge a->b contributes
            // |authors(a)| * |authors(b)| pair instances.
            let (g, _) = graph_of(
                records,
                GraphBuildOptions { include_self_citations: true, ..GraphBuildOptions::default() },
            );
            let total: u64 = g
                .edge_list(Layer::AuthorCitation)
                .iter()
                .map(|&(_, _, w)| w)
                .sum();
            let expected: u64 = g
                .edge_list(Layer::PaperCitation)
                .iter()
                .map(|&(src, dst, _)| {
                    g.author_count_of_paper(PaperIdx(src as u32)) as u64
                        * g.author_count_of_paper(PaperIdx(dst as u32)) as u64
                })
                .sum();
            prop_assert_eq!(total, expected);
        }

        #[test]
        fn cited_by_out_reference_duality(records in arb_records()) {
            let (g, _) = graph_of(records, GraphBuildOptions::default());
            for p in 0..g.n_papers() {
                let p = PaperIdx(p as u32);
                for q in g.paper_refs(p) {
                    prop_assert!(g.paper_citers(q).any(|c| c == p));
                }
                for q in g.paper_citers(p) {
                    prop_assert!(g.paper_refs(q).any(|c| c == p));
                }
            }
        }

        #[test]
        fn input_order_does_not_change_graph(records in arb_records()) {
            let (g1, r1) = graph_of(records.clone(), GraphBuildOptions::default());
            let mut reversed = records;
            reversed.reverse();
            let (g2, r2) = graph_of(reversed, GraphBuildOptions::default());
            prop_assert_eq!(r1, r2);
            prop_assert_eq!(g1.edge_list(Layer::AuthorCitation), g2.edge_list(Layer::AuthorCitation));
            prop_assert_eq!(g1.edge_list(Layer::Coauthorship), g2.edge_list(Layer::Coauthorship));
            prop_assert_eq!(g1.edge_list(Layer::PaperCitation), g2.edge_list(Layer::PaperCitation));
        }

        #[test]
        fn dropped_self_citations_account_for_missing_weight(records in arb_records()) {
            let (g, report) = graph_of(records, GraphBuildOptions::default());
            let kept: u64 = g
                .edge_list(Layer::AuthorCitation)
                .iter()
                .map(|&(_, _, w)| w)
                .sum();
            // Total pair instances = kept weight + dropped self-citations.
            let all_pairs: u64 = g
                .edge_list(Layer::PaperCitation)
                .iter()
                .map(|&(src, dst, _)| {
                    g.author_count_of_paper(PaperIdx(src as u32)) as u64
                        * g.author_count_of_paper(PaperIdx(dst as u32)) as u64
                })
                .sum();
            prop_assert_eq!(kept + report.self_citations_dropped, all_pairs);
        }
    }
}
