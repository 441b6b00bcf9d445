//! Acceptance gate: one test per shipping criterion, each printing a
//! single `[acceptance] Cn ...: PASS|FAIL` line.
//!
//! Run `cargo test --test acceptance -- --nocapture` to see the lines for
//! passing criteria too. C10 needs the real ArnetMiner corpus and is
//! ignored unless requested.

use std::fs;
use std::panic::AssertUnwindSafe;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use c3rank::analysis::{h_distribution, tie_stats};
use c3rank::corpus::{parse_aminer, Corpus, PaperRecord, ParseReport};
use c3rank::graph::{AuthorIdx, GraphBuildOptions, MultiLayerGraph};
use c3rank::metrics::{h_from_counts, AuthorBaselines};
use c3rank::solver::oracle::dense_oracle;
use c3rank::solver::{
    aai_step, aci_step, c3_step, init_scores, pci_step, pqi_step, solve, AaiCycleHandling,
    ScoreSet, SolverConfig,
};
use c3rank::synth::{generate, SynthParams};

fn criterion(n: u32, what: &str, f: impl FnOnce()) {
    match std::panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(()) => println!("[acceptance] C{n} {what}: PASS"),
        Err(cause) => {
            println!("[acceptance] C{n} {what}: FAIL");
            std::panic::resume_unwind(cause);
        }
    }
}

fn record(id: &str, year: i32, authors: &[&str], refs: &[&str]) -> PaperRecord {
    PaperRecord {
        id: id.to_string(),
        title: String::new(),
        year,
        authors: authors.iter().map(|s| s.to_string()).collect(),
        refs: refs.iter().map(|s| s.to_string()).collect(),
    }
}

fn graph_of(records: Vec<PaperRecord>, options: GraphBuildOptions) -> MultiLayerGraph {
    let corpus = Corpus::from_records(records, &mut ParseReport::default());
    MultiLayerGraph::build(&corpus.snapshot(i32::MAX), options).0
}

/// X wrote p1, Y wrote p2, p2 cites p1.
fn two_author_fixture() -> MultiLayerGraph {
    graph_of(
        vec![
            record("p1", 1995, &["X"], &[]),
            record("p2", 1997, &["Y"], &["p1"]),
        ],
        GraphBuildOptions::default(),
    )
}

/// Coauthorship path A-B-C with no citations; its undamped walk has
/// period two.
fn path_fixture() -> MultiLayerGraph {
    graph_of(
        vec![
            record("q1", 2000, &["A", "B"], &[]),
            record("q2", 2001, &["B", "C"], &[]),
        ],
        GraphBuildOptions::default(),
    )
}

fn small_synth(seed: u64) -> MultiLayerGraph {
    let n_papers = 12 + (seed as usize * 7) % 49;
    let n_authors = 6 + (seed as usize * 5) % 25;
    let corpus = generate(&SynthParams {
        n_papers,
        n_authors,
        refs_per_paper_mean: 3.0,
        seed,
        ..SynthParams::default()
    })
    .expect("generator params are valid");
    let options = GraphBuildOptions {
        weighted: seed.is_multiple_of(2),
        include_self_citations: seed.is_multiple_of(4),
    };
    MultiLayerGraph::build(&corpus.snapshot(i32::MAX), options).0
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn score_gap(a: &ScoreSet, b: &ScoreSet) -> f64 {
    [
        max_diff(&a.pqi, &b.pqi),
        max_diff(&a.aci, &b.aci),
        max_diff(&a.aai, &b.aai),
        max_diff(&a.pci, &b.pci),
        max_diff(&a.c3, &b.c3),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

#[test]
fn c01_solver_matches_dense_oracle_on_100_seeded_graphs() {
    criterion(1, "oracle agreement on 100 seeded graphs", || {
        let started = Instant::now();
        for seed in 0..100u64 {
            let graph = small_synth(seed);
            assert!(graph.n_papers() <= 60 && graph.n_authors() <= 30);
            let cfg = SolverConfig {
                alpha: [0.0, 0.5, 1.0][(seed % 3) as usize],
                ..SolverConfig::default()
            };
            let (scores, conv) = solve(&graph, &cfg).expect("valid config");
            assert!(conv.converged, "seed {seed} did not converge");
            let oracle = dense_oracle(&graph, &cfg);
            let gap = score_gap(&scores, &oracle);
            assert!(gap <= 1e-9, "seed {seed}: solver-oracle gap {gap}");
        }
        let elapsed = started.elapsed();
        assert!(elapsed.as_secs() < 60, "campaign took {elapsed:?}");
    });
}

#[test]
fn c02_two_author_fixture_reaches_the_hand_computed_fixed_point() {
    criterion(2, "hand-computed two-author fixed point", || {
        let graph = two_author_fixture();
        let (s, conv) = solve(&graph, &SolverConfig::default()).unwrap();
        assert!(conv.converged);
        let x = graph.author_idx("X").unwrap().as_usize();
        let y = graph.author_idx("Y").unwrap().as_usize();
        let p1 = graph.paper_idx("p1").unwrap().as_usize();
        let p2 = graph.paper_idx("p2").unwrap().as_usize();
        for (got, want) in [
            (s.pqi[p1], 0.75),
            (s.pqi[p2], 0.5),
            (s.aci[x], 0.75),
            (s.aci[y], 0.5),
            (s.aai[x], 0.0),
            (s.aai[y], 0.0),
            (s.pci[x], 0.75),
            (s.pci[y], 0.5),
            (s.c3[x], 1.25),
            (s.c3[y], 1.0),
        ] {
            assert!((got - want).abs() <= 1e-9, "got {got}, want {want}");
        }
    });
}

#[test]
fn c03_deltas_contract_and_convergence_stays_under_35_iterations() {
    // The update matrices have column sums at most 1, which bounds the
    // 1-norm of consecutive deltas by theta per iteration. The max norm
    // carries no such factor (a paper cited by two leaves already breaks
    // it), so the contraction check runs in the 1-norm; the iteration
    // budget is still measured on the solver's own max-norm stop rule.
    criterion(
        3,
        "1-norm delta contraction, convergence within 35 iterations",
        || {
            let hub = graph_of(
                vec![
                    record("p0", 1990, &["H"], &[]),
                    record("p1", 1995, &["U"], &["p0"]),
                    record("p2", 1995, &["V"], &["p0"]),
                ],
                GraphBuildOptions::default(),
            );
            let mut graphs = vec![two_author_fixture(), path_fixture(), hub];
            graphs.extend((0..40).map(small_synth));

            let cfg = SolverConfig::default();
            let l1 =
                |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum() };
            for (i, graph) in graphs.iter().enumerate() {
                let mut state = init_scores(graph);
                let mut prev: Option<(f64, f64)> = None;
                let mut last = (f64::INFINITY, f64::INFINITY);
                for t in 1..=35 {
                    let pqi = pqi_step(graph, &state, &cfg);
                    let aci = aci_step(graph, &state, &cfg);
                    let aai = aai_step(graph, &state, &cfg);
                    let pci = pci_step(graph, &state, &cfg);
                    let deltas = (l1(&pqi, &state.pqi), l1(&aci, &state.aci));
                    if let Some((p, a)) = prev {
                        assert!(
                            deltas.0 <= cfg.theta * p + 1e-12,
                            "graph {i}, iteration {t}: pqi delta {} exceeds θ·{p}",
                            deltas.0
                        );
                        assert!(
                            deltas.1 <= cfg.theta * a + 1e-12,
                            "graph {i}, iteration {t}: aci delta {} exceeds θ·{a}",
                            deltas.1
                        );
                    }
                    prev = Some(deltas);
                    last = (max_diff(&pqi, &state.pqi), max_diff(&aci, &state.aci));
                    let c3 = c3_step(&aci, &aai, &pci, &cfg);
                    state = ScoreSet {
                        pqi,
                        aci,
                        aai,
                        pci,
                        c3,
                        iteration: t,
                    };
                }
                // Both citation subsystems are inside epsilon by iteration 35;
                // the coauthorship walk converges at its own spectral rate and
                // is bounded only by the solver cap.
                assert!(
                    last.0 < 1e-9,
                    "graph {i}: pqi delta {} after 35 iterations",
                    last.0
                );
                assert!(
                    last.1 < 1e-9,
                    "graph {i}: aci delta {} after 35 iterations",
                    last.1
                );

                let (_, conv) = solve(graph, &cfg).unwrap();
                assert!(conv.converged, "graph {i} did not converge");
            }
        },
    );
}

#[test]
fn c04_bipartite_oscillation_is_detected_and_midpointed() {
    criterion(
        4,
        "period-two coauthorship walk: detection and midpoint value",
        || {
            let graph = path_fixture();

            let literal = SolverConfig {
                aai_cycle_handling: AaiCycleHandling::None,
                max_iters: 60,
                ..SolverConfig::default()
            };
            let (_, conv) = solve(&graph, &literal).unwrap();
            assert!(conv.aai_cycle_detected);
            assert!(!conv.converged);
            assert_eq!(conv.iterations_run, 60);

            let (s, conv) = solve(&graph, &SolverConfig::default()).unwrap();
            assert!(conv.converged && conv.aai_cycle_detected);
            let aai_of = |name: &str| s.aai[graph.author_idx(name).unwrap().as_usize()];
            assert!((aai_of("A") - 0.75).abs() <= 1e-12);
            assert!((aai_of("B") - 1.5).abs() <= 1e-12);
            assert!((aai_of("C") - 0.75).abs() <= 1e-12);
        },
    );
}

#[test]
fn c05_mass_conservation_holds_at_every_iteration() {
    criterion(
        5,
        "paper-credit and coauthorship-walk mass conservation",
        || {
            for seed in 0..12u64 {
                let graph = small_synth(seed);
                let components = coauthor_components(&graph);
                for alpha in [0.0, 0.5, 1.0] {
                    let cfg = SolverConfig {
                        alpha,
                        ..SolverConfig::default()
                    };
                    let mut state = init_scores(&graph);
                    for t in 1..=10 {
                        let pqi = pqi_step(&graph, &state, &cfg);
                        let aci = aci_step(&graph, &state, &cfg);
                        let aai = aai_step(&graph, &state, &cfg);
                        let pci = pci_step(&graph, &state, &cfg);

                        let held: f64 = state.pqi.iter().sum();
                        let distributed: f64 = pci.iter().sum();
                        assert!(
                        (distributed - held).abs() <= 1e-9 * held.max(1.0),
                        "seed {seed} α={alpha} iteration {t}: Σpci {distributed} vs Σpqi {held}"
                    );

                        for comp in &components {
                            if comp.len() < 2 {
                                continue;
                            }
                            let before: f64 = comp.iter().map(|&j| state.aai[j]).sum();
                            let after: f64 = comp.iter().map(|&j| aai[j]).sum();
                            assert!(
                                (after - before).abs() <= 1e-9 * comp.len() as f64,
                                "seed {seed} iteration {t}: component mass {before} -> {after}"
                            );
                        }

                        let c3 = c3_step(&aci, &aai, &pci, &cfg);
                        state = ScoreSet {
                            pqi,
                            aci,
                            aai,
                            pci,
                            c3,
                            iteration: t,
                        };
                    }
                }
            }
        },
    );
}

#[test]
fn c06_h_index_matches_its_definition_and_grows_with_snapshots() {
    criterion(
        6,
        "h-index against brute force and snapshot monotonicity",
        || {
            let brute = |counts: &[u64]| -> u64 {
                let mut h = 0;
                for candidate in 0..=counts.len() as u64 {
                    if counts.iter().filter(|&&c| c >= candidate).count() as u64 >= candidate {
                        h = candidate;
                    }
                }
                h
            };

            let mut rng = ChaCha8Rng::seed_from_u64(6);
            for case in 0..10_000 {
                let len = (rng.next_u64() % 60) as usize;
                let counts: Vec<u64> = (0..len).map(|_| rng.next_u64() % 200).collect();
                assert_eq!(
                    h_from_counts(&counts),
                    brute(&counts),
                    "case {case}: {counts:?}"
                );
            }
            assert_eq!(h_from_counts(&[10, 8, 5, 4, 3]), 4);

            let corpus = generate(&SynthParams {
                n_papers: 2000,
                n_authors: 500,
                seed: 17,
                ..SynthParams::default()
            })
            .unwrap();
            let at = |year: i32| {
                let graph =
                    MultiLayerGraph::build(&corpus.snapshot(year), GraphBuildOptions::default()).0;
                let baselines = AuthorBaselines::compute(&graph);
                (graph, baselines)
            };
            let years = [1992, 1999, 2005];
            let snapshots: Vec<_> = years.iter().map(|&y| at(y)).collect();
            for pair in snapshots.windows(2) {
                let (early_graph, early) = &pair[0];
                let (late_graph, late) = &pair[1];
                for a in 0..early_graph.n_authors() {
                    let name = early_graph.author_name(AuthorIdx(a as u32));
                    let b = late_graph
                        .author_idx(name)
                        .expect("author persists")
                        .as_usize();
                    assert!(early.h_index[a] <= late.h_index[b], "{name} lost h");
                }
            }
        },
    );
}

#[test]
fn c07_composite_scores_stay_dispersed_inside_h_bins() {
    criterion(
        7,
        "distinct scores cover 90% of every populated h bin",
        || {
            let corpus = generate(&SynthParams {
                n_papers: 16_800,
                n_authors: 5_600,
                refs_per_paper_mean: 5.0,
                attachment_bias: 2.0,
                seed: 11,
                ..SynthParams::default()
            })
            .unwrap();
            let graph =
                MultiLayerGraph::build(&corpus.snapshot(i32::MAX), GraphBuildOptions::default()).0;
            assert!(
                graph.n_authors() >= 5_000,
                "only {} authors",
                graph.n_authors()
            );
            let (scores, conv) = solve(&graph, &SolverConfig::default()).unwrap();
            assert!(conv.converged);
            let baselines = AuthorBaselines::compute(&graph);
            let stats = tie_stats(&scores, &baselines);

            let mut populated = 0;
            for bin in &stats.bins {
                if bin.author_count < 10 {
                    continue;
                }
                populated += 1;
                assert!(
                    bin.distinct_c3_values as f64 >= 0.9 * bin.author_count as f64,
                    "h={}: {} distinct over {} authors",
                    bin.h,
                    bin.distinct_c3_values,
                    bin.author_count
                );
            }
            assert!(populated >= 5, "only {populated} bins had 10+ authors");
        },
    );
}

fn run_cli(dir: &Path, args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_c3rank"))
        .args(args)
        .current_dir(dir)
        .env_remove("C3RANK_OUT_DIR")
        .output()
        .expect("spawn c3rank");
    assert!(
        out.status.code() == Some(0),
        "c3rank {args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn c08_thread_count_never_changes_output_bytes() {
    criterion(
        8,
        "byte-identical CSVs for --threads 1 and --threads 8",
        || {
            let dir = tempfile::tempdir().unwrap();
            run_cli(
                dir.path(),
                &[
                    "synth",
                    "--papers",
                    "3000",
                    "--authors",
                    "900",
                    "--seed",
                    "21",
                    "--refs-mean",
                    "4",
                    "--bias",
                    "1.5",
                    "--out",
                    "corpus.jsonl",
                ],
            );
            for threads in ["1", "8"] {
                let out = format!("t{threads}");
                run_cli(
                    dir.path(),
                    &[
                        "rank",
                        "corpus.jsonl",
                        "--threads",
                        threads,
                        "--out-dir",
                        &out,
                    ],
                );
                run_cli(
                    dir.path(),
                    &[
                        "analyze",
                        "ties",
                        "corpus.jsonl",
                        "--year",
                        "2005",
                        "--threads",
                        threads,
                        "--out-dir",
                        &out,
                    ],
                );
            }
            for name in ["authors.csv", "papers.csv", "ties_2005.csv"] {
                let a = fs::read(dir.path().join("t1").join(name)).unwrap();
                let b = fs::read(dir.path().join("t8").join(name)).unwrap();
                assert_eq!(a, b, "{name} differs between thread counts");
            }
        },
    );
}

fn max_child_rss_bytes() -> u64 {
    let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
    let rc = unsafe { libc::getrusage(libc::RUSAGE_CHILDREN, &mut usage) };
    assert_eq!(rc, 0, "getrusage failed");
    usage.ru_maxrss as u64 * 1024
}

#[test]
fn c09_ranks_200k_papers_within_time_and_memory_budget() {
    criterion(
        9,
        "200k-paper corpus ranked under 2 minutes and 4 GB",
        || {
            let dir = tempfile::tempdir().unwrap();
            run_cli(
                dir.path(),
                &[
                    "synth",
                    "--papers",
                    "200000",
                    "--authors",
                    "80000",
                    "--seed",
                    "5",
                    "--refs-mean",
                    "5",
                    "--bias",
                    "2",
                    "--year-start",
                    "1970",
                    "--year-end",
                    "2010",
                    "--out",
                    "big.jsonl",
                ],
            );

            let started = Instant::now();
            let out = Command::new(env!("CARGO_BIN_EXE_c3rank"))
                .args(["rank", "big.jsonl", "--out-dir", "ranked"])
                .current_dir(dir.path())
                .output()
                .expect("spawn c3rank");
            let elapsed = started.elapsed();
            assert_eq!(
                out.status.code(),
                Some(0),
                "{}",
                String::from_utf8_lossy(&out.stderr)
            );
            assert!(String::from_utf8_lossy(&out.stdout).contains("converged in"));

            let peak = max_child_rss_bytes();
            println!(
                "[acceptance] C9 measured: rank wall time {:.1}s, peak child rss {:.2} GiB",
                elapsed.as_secs_f64(),
                peak as f64 / (1u64 << 30) as f64
            );
            assert!(elapsed.as_secs() < 120, "rank took {elapsed:?}");
            assert!(peak < 4 * (1u64 << 30), "peak child rss {peak} bytes");

            // A few authors from the 80k pool never land on a team; everyone
            // who published is ranked.
            let authors = fs::read_to_string(dir.path().join("ranked/authors.csv")).unwrap();
            let ranked = authors.lines().count() - 2;
            assert!(
                (79_000..=80_000).contains(&ranked),
                "{ranked} authors ranked"
            );
        },
    );
}

#[test]
#[ignore = "needs the ArnetMiner corpus; set C3RANK_AMINER_PATH and run with --ignored"]
fn c10_arnetminer_snapshot_reproduces_the_published_shape() {
    criterion(
        10,
        "ArnetMiner 2008: h<=2 share in [0.70, 0.90], ACI > PCI > AAI",
        || {
            let path = std::env::var("C3RANK_AMINER_PATH")
                .expect("set C3RANK_AMINER_PATH to the ArnetMiner text file");
            let file = fs::File::open(&path).expect("open corpus");
            let (corpus, report) =
                parse_aminer(std::io::BufReader::new(file)).expect("read corpus");
            eprintln!("{report}");

            let snapshot = corpus.snapshot(2008);
            let (graph, _) = MultiLayerGraph::build(&snapshot, GraphBuildOptions::default());
            let baselines = AuthorBaselines::compute(&graph);
            let share = h_distribution(&baselines).cumulative_share_at(2);
            assert!(
                (0.70..=0.90).contains(&share),
                "cumulative share at h<=2 is {share}"
            );

            let (scores, conv) = solve(&graph, &SolverConfig::default()).unwrap();
            assert!(conv.converged);
            for (exact, surname) in [
                ("Ben Shneiderman", "Shneiderman"),
                ("Ronald L. Rivest", "Rivest"),
            ] {
                let j = graph
                    .author_idx(exact)
                    .map(|i| i.as_usize())
                    .or_else(|| {
                        (0..graph.n_authors())
                            .find(|&j| graph.author_name(AuthorIdx(j as u32)).contains(surname))
                    })
                    .unwrap_or_else(|| panic!("{surname} not found in corpus"));
                assert!(
                    scores.aci[j] > scores.pci[j] && scores.pci[j] > scores.aai[j],
                    "{surname}: aci {} pci {} aai {}",
                    scores.aci[j],
                    scores.pci[j],
                    scores.aai[j]
                );
            }
        },
    );
}

/// Connected components of the coauthorship layer.
fn coauthor_components(graph: &MultiLayerGraph) -> Vec<Vec<usize>> {
    let n = graph.n_authors();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = vec![start];
        let mut comp = Vec::new();
        while let Some(u) = queue.pop() {
            comp.push(u);
            for (v, _) in graph.coauthors(AuthorIdx(u as u32)) {
                if !seen[v.as_usize()] {
                    seen[v.as_usize()] = true;
                    queue.push(v.as_usize());
                }
            }
        }
        components.push(comp);
    }
    components
}
