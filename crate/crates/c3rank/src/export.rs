//! Deterministic CSV output.
//!
//! Every file starts with a one-line `#` comment recording the corpus
//! content hash and the effective configuration, so any export can be
//! regenerated exactly. Floats are printed with [`format_sig12`], rows are
//! sorted on fixed keys, and fields are quoted only when they need to be:
//! identical inputs produce byte-identical files.

use std::io::Write;

use crate::graph::{AuthorIdx, MultiLayerGraph, PaperIdx};
use crate::metrics::AuthorBaselines;
use crate::solver::ScoreSet;

/// Key-value pairs for the `#` header line, emitted in insertion order.
#[derive(Debug, Clone, Default)]
pub struct ExportMeta {
    pairs: Vec<(String, String)>,
}

impl ExportMeta {
    pub fn new() -> ExportMeta {
        ExportMeta::default()
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.pairs.push((key.to_string(), value.to_string()));
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> ExportMeta {
        self.push(key, value);
        self
    }

    pub fn header_line(&self) -> String {
        let mut line = String::from("#");
        for (k, v) in &self.pairs {
            line.push(' ');
            line.push_str(k);
            line.push('=');
            line.push_str(v);
        }
        line
    }
}

/// Formats with exactly 12 significant digits in plain decimal notation.
///
/// This is both the export format and the equality key for tie counting:
/// two scores are "the same" exactly when they print the same.
pub fn format_sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let x = if x == 0.0 { 0.0 } else { x };
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat(-point as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        format!(
            "{}.{}",
            &digits[..point as usize],
            &digits[point as usize..]
        )
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Quotes a CSV field when it contains a delimiter, quote, or line break.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `author,aci,aai,pci,c3,h_index,total_citations`, sorted by descending
/// c3 then ascending author name.
pub fn write_authors_csv<W: Write>(
    mut w: W,
    graph: &MultiLayerGraph,
    scores: &ScoreSet,
    baselines: &AuthorBaselines,
    meta: &ExportMeta,
) -> std::io::Result<()> {
    writeln!(w, "{}", meta.header_line())?;
    writeln!(w, "author,aci,aai,pci,c3,h_index,total_citations")?;
    let mut order: Vec<usize> = (0..graph.n_authors()).collect();
    order.sort_by(|&a, &b| {
        scores.c3[b].total_cmp(&scores.c3[a]).then_with(|| {
            graph
                .author_name(AuthorIdx(a as u32))
                .cmp(graph.author_name(AuthorIdx(b as u32)))
        })
    });
    for j in order {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            csv_field(graph.author_name(AuthorIdx(j as u32))),
            format_sig12(scores.aci[j]),
            format_sig12(scores.aai[j]),
            format_sig12(scores.pci[j]),
            format_sig12(scores.c3[j]),
            baselines.h_index[j],
            baselines.total_citations[j],
        )?;
    }
    Ok(())
}

/// `paper,pqi,citations`, sorted by descending pqi then ascending paper id.
pub fn write_papers_csv<W: Write>(
    mut w: W,
    graph: &MultiLayerGraph,
    scores: &ScoreSet,
    baselines: &AuthorBaselines,
    meta: &ExportMeta,
) -> std::io::Result<()> {
    writeln!(w, "{}", meta.header_line())?;
    writeln!(w, "paper,pqi,citations")?;
    let mut order: Vec<usize> = (0..graph.n_papers()).collect();
    order.sort_by(|&a, &b| {
        scores.pqi[b].total_cmp(&scores.pqi[a]).then_with(|| {
            graph
                .paper_id(PaperIdx(a as u32))
                .cmp(graph.paper_id(PaperIdx(b as u32)))
        })
    });
    for p in order {
        writeln!(
            w,
            "{},{},{}",
            csv_field(graph.paper_id(PaperIdx(p as u32))),
            format_sig12(scores.pqi[p]),
            baselines.paper_citations[p],
        )?;
    }
    Ok(())
}

/// `author,h_index,total_citations`, sorted by author name.
pub fn write_baselines_csv<W: Write>(
    mut w: W,
    graph: &MultiLayerGraph,
    baselines: &AuthorBaselines,
    meta: &ExportMeta,
) -> std::io::Result<()> {
    writeln!(w, "{}", meta.header_line())?;
    writeln!(w, "author,h_index,total_citations")?;
    for j in 0..graph.n_authors() {
        writeln!(
            w,
            "{},{},{}",
            csv_field(graph.author_name(AuthorIdx(j as u32))),
            baselines.h_index[j],
            baselines.total_citations[j],
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_plain_values() {
        assert_eq!(format_sig12(1.25), "1.25000000000");
        assert_eq!(format_sig12(0.5), "0.500000000000");
        assert_eq!(format_sig12(0.0), "0.00000000000");
        assert_eq!(format_sig12(-0.0), "0.00000000000");
        assert_eq!(format_sig12(1234.56), "1234.56000000");
        assert_eq!(format_sig12(-2.5), "-2.50000000000");
    }

    #[test]
    fn sig12_small_and_large_magnitudes() {
        assert_eq!(format_sig12(0.001), "0.00100000000000");
        assert_eq!(format_sig12(1e13), "10000000000000");
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
    }

    #[test]
    fn sig12_distinguishes_at_twelfth_digit() {
        let a = 1.00000000000;
        let b = 1.00000000001;
        assert_ne!(format_sig12(a), format_sig12(b));
        let c = 1.000000000000001;
        assert_eq!(format_sig12(a), format_sig12(c));
    }

    #[test]
    fn field_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a, b"), "\"a, b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn meta_header_line() {
        let meta = ExportMeta::new()
            .with("corpus", "abc123")
            .with("theta", 0.5);
        assert_eq!(meta.header_line(), "# corpus=abc123 theta=0.5");
    }
}
