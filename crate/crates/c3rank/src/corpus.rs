//! Bibliographic corpora: parsing, validation, snapshots.
//!
//! Two input formats are supported. The plain-text citation format uses
//! marker lines within blank-line-separated record blocks:
//!
//! ```text
//! #*      title
//! #@      authors, separated by `;` or `,`
//! #t      publication year
//! #c      venue (parsed and discarded)
//! #index  record id
//! #%      id of one referenced record (repeatable)
//! #!      abstract (parsed and discarded)
//! ```
//!
//! The canonical persistence format is JSON lines: one object per line with
//! keys exactly `id, title, year, authors, refs`. [`write_jsonl`] emits it
//! deterministically (papers sorted by id, keys in that order) and
//! [`parse_jsonl`] inverts it exactly.
//!
//! Every parse funnels through the same validation: author names are
//! trimmed and internal whitespace runs collapsed, duplicate names within a
//! record are dropped, records without an id, a positive year, or at least
//! one author are rejected, self-references and duplicate references are
//! dropped, and references to ids absent from the corpus are removed so the
//! resulting reference set is closed. [`ParseReport`] counts all of it.

use std::collections::BTreeSet;
use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// One publication record.
///
/// Field order matters: it is the canonical key order of the JSON-lines
/// format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaperRecord {
    pub id: String,
    pub title: String,
    pub year: i32,
    pub authors: Vec<String>,
    pub refs: Vec<String>,
}

/// Counters accumulated while reading and validating a corpus.
///
/// `records_read` counts record blocks (or lines) seen; the `rejected_*`
/// counters partition the records that were dropped. The remaining fields
/// count repairs applied to records that were kept.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub records_read: u64,
    /// Lines/blocks that could not be decoded at all (JSON syntax errors).
    pub rejected_malformed: u64,
    pub rejected_missing_id: u64,
    /// Missing, unparseable, or non-positive year.
    pub rejected_missing_year: u64,
    /// No valid author name left after normalization.
    pub rejected_no_authors: u64,
    /// Same id as an earlier record; the first occurrence wins.
    pub rejected_duplicate_id: u64,
    /// References to ids not present in the corpus.
    pub dangling_refs_dropped: u64,
    /// References from a paper to itself.
    pub self_refs_dropped: u64,
    /// Repeated reference ids within one record.
    pub duplicate_refs_dropped: u64,
    /// Repeated author names within one record.
    pub duplicate_authors_collapsed: u64,
}

impl ParseReport {
    /// Total records dropped, over all rejection reasons.
    pub fn rejected_total(&self) -> u64 {
        self.rejected_malformed
            + self.rejected_missing_id
            + self.rejected_missing_year
            + self.rejected_no_authors
            + self.rejected_duplicate_id
    }

    /// Records that made it into the corpus.
    pub fn records_kept(&self) -> u64 {
        self.records_read - self.rejected_total()
    }
}

impl fmt::Display for ParseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "records: {} read, {} kept, {} rejected",
            self.records_read,
            self.records_kept(),
            self.rejected_total()
        )?;
        if self.rejected_total() > 0 {
            writeln!(
                f,
                "  rejected: {} malformed, {} missing id, {} missing/invalid year, {} without authors, {} duplicate id",
                self.rejected_malformed,
                self.rejected_missing_id,
                self.rejected_missing_year,
                self.rejected_no_authors,
                self.rejected_duplicate_id
            )?;
        }
        write!(
            f,
            "refs dropped: {} dangling, {} self, {} duplicate; authors collapsed: {}",
            self.dangling_refs_dropped,
            self.self_refs_dropped,
            self.duplicate_refs_dropped,
            self.duplicate_authors_collapsed
        )
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unreadable input: {0}")]
    Io(#[from] std::io::Error),
}

/// A validated, closed set of papers.
///
/// Closed means every reference resolves to a paper in the corpus. Papers
/// are held sorted by id, which makes serialization and graph construction
/// deterministic. The author universe is the deduplicated union of all
/// author lists, sorted by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    papers: Vec<PaperRecord>,
    author_universe: Vec<String>,
}

impl Corpus {
    /// Validates raw records into a corpus, counting every repair and
    /// rejection into `report`.
    ///
    /// This is the single validation path behind both parsers and the
    /// synthetic generator.
    pub fn from_records(records: Vec<PaperRecord>, report: &mut ParseReport) -> Corpus {
        let mut papers: Vec<PaperRecord> = Vec::with_capacity(records.len());
        let mut seen_ids: HashSet<String> = HashSet::with_capacity(records.len());

        for mut rec in records {
            rec.id = rec.id.trim().to_string();
            if rec.id.is_empty() {
                report.rejected_missing_id += 1;
                continue;
            }
            if rec.year <= 0 {
                report.rejected_missing_year += 1;
                continue;
            }

            let mut authors = Vec::with_capacity(rec.authors.len());
            let mut seen_authors: HashSet<String> = HashSet::new();
            for raw in &rec.authors {
                let name = normalize_author_name(raw);
                if name.is_empty() {
                    continue;
                }
                if seen_authors.insert(name.clone()) {
                    authors.push(name);
                } else {
                    report.duplicate_authors_collapsed += 1;
                }
            }
            if authors.is_empty() {
                report.rejected_no_authors += 1;
                continue;
            }
            rec.authors = authors;

            if !seen_ids.insert(rec.id.clone()) {
                report.rejected_duplicate_id += 1;
                continue;
            }

            let mut refs = Vec::with_capacity(rec.refs.len());
            let mut seen_refs: HashSet<String> = HashSet::new();
            for raw in &rec.refs {
                let r = raw.trim().to_string();
                if r == rec.id {
                    report.self_refs_dropped += 1;
                } else if seen_refs.insert(r.clone()) {
                    refs.push(r);
                } else {
                    report.duplicate_refs_dropped += 1;
                }
            }
            rec.refs = refs;

            papers.push(rec);
        }

        // Close the reference set: drop refs whose target id is absent.
        for paper in &mut papers {
            let before = paper.refs.len();
            paper.refs.retain(|r| seen_ids.contains(r));
            report.dangling_refs_dropped += (before - paper.refs.len()) as u64;
        }

        papers.sort_by(|a, b| a.id.cmp(&b.id));

        let author_universe: BTreeSet<String> = papers
            .iter()
            .flat_map(|p| p.authors.iter().cloned())
            .collect();

        Corpus {
            papers,
            author_universe: author_universe.into_iter().collect(),
        }
    }

    /// Papers, sorted by id.
    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    /// All distinct author names, sorted.
    pub fn author_universe(&self) -> &[String] {
        &self.author_universe
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    /// Looks a paper up by id.
    pub fn get(&self, id: &str) -> Option<&PaperRecord> {
        self.papers
            .binary_search_by(|p| p.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.papers[i])
    }

    /// SHA-256 of the canonical JSON-lines serialization, as lowercase hex.
    ///
    /// Because the serialization is deterministic, equal corpora hash
    /// equally regardless of how they were ingested.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for paper in &self.papers {
            // Serialization of a plain struct cannot fail.
            hasher.update(serde_json::to_vec(paper).unwrap());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }

    /// Restricts the corpus to evidence up to and including `year`.
    ///
    /// Papers published later are removed, and references to removed papers
    /// are dropped with them, so the snapshot is again closed. A bound
    /// earlier than every paper yields an empty snapshot.
    pub fn snapshot(&self, year: i32) -> Snapshot {
        let kept: HashSet<&str> = self
            .papers
            .iter()
            .filter(|p| p.year <= year)
            .map(|p| p.id.as_str())
            .collect();
        let papers: Vec<PaperRecord> = self
            .papers
            .iter()
            .filter(|p| kept.contains(p.id.as_str()))
            .map(|p| {
                let mut paper = p.clone();
                paper.refs.retain(|r| kept.contains(r.as_str()));
                paper
            })
            .collect();
        let author_universe: BTreeSet<String> = papers
            .iter()
            .flat_map(|p| p.authors.iter().cloned())
            .collect();
        Snapshot {
            year_bound: year,
            corpus: Corpus {
                papers,
                author_universe: author_universe.into_iter().collect(),
            },
        }
    }
}

/// A corpus restricted to papers published up to a bound year.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    year_bound: i32,
    corpus: Corpus,
}

impl Snapshot {
    pub fn year_bound(&self) -> i32 {
        self.year_bound
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }
}

/// Normalizes an author name: trims the ends and collapses internal
/// whitespace runs to a single space. No case folding, no disambiguation:
/// author identity is the exact normalized string.
pub fn normalize_author_name(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut in_gap = false;
    for ch in raw.trim().chars() {
        if ch.is_whitespace() {
            in_gap = true;
        } else {
            if in_gap && !out.is_empty() {
                out.push(' ');
            }
            in_gap = false;
            out.push(ch);
        }
    }
    out
}

/// Parses the plain-text citation format.
///
/// Record blocks are separated by blank lines; unknown marker lines and
/// stray text are ignored. A block that never names an id (or fails
/// validation) is rejected and counted, and parsing continues. Only an
/// unreadable stream is a fatal error.
pub fn parse_aminer<R: BufRead>(reader: R) -> Result<(Corpus, ParseReport), CorpusError> {
    let mut report = ParseReport::default();
    let mut records: Vec<PaperRecord> = Vec::new();

    let mut current: Option<RawAminerRecord> = None;
    for line in reader.lines() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            if let Some(rec) = current.take() {
                report.records_read += 1;
                push_aminer_record(rec, &mut records, &mut report);
            }
            continue;
        }
        let rec = current.get_or_insert_with(RawAminerRecord::default);
        if let Some(rest) = line.strip_prefix("#index") {
            rec.id = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("#*") {
            rec.title = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("#@") {
            rec.authors
                .extend(rest.split([';', ',']).map(|s| s.to_string()));
        } else if let Some(rest) = line.strip_prefix("#%") {
            rec.refs.push(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("#t") {
            rec.year = Some(rest.trim().to_string());
        } else {
            // `#c`, `#!`, unknown markers, continuation text: ignored.
        }
    }
    if let Some(rec) = current.take() {
        report.records_read += 1;
        push_aminer_record(rec, &mut records, &mut report);
    }

    let corpus = Corpus::from_records(records, &mut report);
    Ok((corpus, report))
}

#[derive(Default)]
struct RawAminerRecord {
    id: Option<String>,
    title: Option<String>,
    year: Option<String>,
    authors: Vec<String>,
    refs: Vec<String>,
}

fn push_aminer_record(
    raw: RawAminerRecord,
    records: &mut Vec<PaperRecord>,
    report: &mut ParseReport,
) {
    let Some(id) = raw.id.filter(|id| !id.is_empty()) else {
        report.rejected_missing_id += 1;
        return;
    };
    let year = match raw.year.as_deref().map(str::parse::<i32>) {
        Some(Ok(y)) => y,
        _ => {
            report.rejected_missing_year += 1;
            return;
        }
    };
    records.push(PaperRecord {
        id,
        title: raw.title.unwrap_or_default(),
        year,
        authors: raw.authors,
        refs: raw.refs,
    });
}

/// Parses the canonical JSON-lines format.
///
/// Each non-blank line must be one object with keys exactly
/// `id, title, year, authors, refs`; lines that fail to decode are rejected
/// and counted. Validation afterwards matches [`parse_aminer`].
pub fn parse_jsonl<R: BufRead>(reader: R) -> Result<(Corpus, ParseReport), CorpusError> {
    let mut report = ParseReport::default();
    let mut records: Vec<PaperRecord> = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        report.records_read += 1;
        match serde_json::from_str::<PaperRecord>(&line) {
            Ok(rec) => records.push(rec),
            Err(_) => report.rejected_malformed += 1,
        }
    }
    let corpus = Corpus::from_records(records, &mut report);
    Ok((corpus, report))
}

/// Writes the canonical JSON-lines serialization.
///
/// Output is deterministic: papers in id order, keys in the fixed order
/// `id, title, year, authors, refs`, one object per line.
pub fn write_jsonl<W: Write>(corpus: &Corpus, mut writer: W) -> std::io::Result<()> {
    for paper in corpus.papers() {
        serde_json::to_writer(&mut writer, paper)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
