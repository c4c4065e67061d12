//! Flat TSV formats for every intermediate artifact, and the SVG renderers.
//!
//! All files are tab-separated with a header row.
//!
//! Signal store: a `# text_length <N>` line, then `word frequency positions`
//! rows with comma-separated positions, e.g. `Governor 3 2380,2390,2463`.
//! Lexicon: `score source target direction mutual_best [normalized_score]`.
//! Dots: `pos_a pos_b score`. Path: a `# lengths <A> <B>` line, then the dots header.

use std::fmt::Write as _;

use crate::anchor::{AlignmentPath, AnchorDot};
use crate::error::{Error, Result};
use crate::kvec::KvecPair;
use crate::lexicon::LexiconEntry;
use crate::signal::{plot_rows, WordSignal};

const LEXICON_HEADER: &str = "score\tsource\ttarget\tdirection\tmutual_best";
const DOTS_HEADER: &str = "pos_a\tpos_b\tscore";
const STORE_HEADER: &str = "word\tfrequency\tpositions";

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn field<T: std::str::FromStr>(s: Option<&str>, line: usize, what: &str) -> Result<T> {
    s.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("bad {what}")))
}

/// Non-comment, non-header lines with their 1-based line numbers.
fn data_lines<'a>(text: &'a str, header: &'a str) -> impl Iterator<Item = (usize, &'a str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(move |(_, l)| !l.is_empty() && !l.starts_with('#') && !l.starts_with(header))
}

pub fn write_signal_store(signals: &[WordSignal], text_length: usize) -> String {
    let mut out = format!("# text_length\t{text_length}\n{STORE_HEADER}\n");
    for s in signals {
        let positions: Vec<String> = s.positions.iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "{}\t{}\t{}",
            s.word,
            s.frequency(),
            positions.join(",")
        );
    }
    out
}

pub fn read_signal_store(text: &str) -> Result<(usize, Vec<WordSignal>)> {
    let first = text.lines().next().unwrap_or_default();
    let text_length: usize = first
        .strip_prefix("# text_length\t")
        .ok_or_else(|| parse_err(1, "expected `# text_length` line"))?
        .trim()
        .parse()
        .map_err(|_| parse_err(1, "bad text length"))?;
    let mut signals = Vec::new();
    for (n, line) in data_lines(text, STORE_HEADER) {
        let mut cols = line.split('\t');
        let word: String = field(cols.next(), n, "word")?;
        let freq: usize = field(cols.next(), n, "frequency")?;
        let positions = cols
            .next()
            .ok_or_else(|| parse_err(n, "missing positions"))?
            .split(',')
            .map(|p| p.parse::<usize>().map_err(|_| parse_err(n, "bad position")))
            .collect::<Result<Vec<_>>>()?;
        if positions.len() != freq {
            return Err(parse_err(n, "frequency does not match position count"));
        }
        let record = crate::corpus::WordOccurrenceRecord { word, positions };
        if !record.positions.windows(2).all(|w| w[0] < w[1]) {
            return Err(parse_err(n, "positions not strictly increasing"));
        }
        signals.push(crate::signal::build_signal(&record, text_length)?);
    }
    Ok((text_length, signals))
}

pub fn write_lexicon(entries: &[LexiconEntry], normalized: Option<&[f64]>) -> String {
    let mut out = String::from(LEXICON_HEADER);
    if normalized.is_some() {
        out.push_str("\tnormalized_score");
    }
    out.push('\n');
    for (k, e) in entries.iter().enumerate() {
        let _ = write!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            e.score, e.source, e.target, e.direction, e.mutual_best
        );
        if let Some(ns) = normalized {
            let _ = write!(out, "\t{:.6}", ns[k]);
        }
        out.push('\n');
    }
    out
}

pub fn read_lexicon(text: &str) -> Result<Vec<LexiconEntry>> {
    data_lines(text, LEXICON_HEADER)
        .map(|(n, line)| {
            let mut cols = line.split('\t');
            Ok(LexiconEntry {
                score: field(cols.next(), n, "score")?,
                source: field(cols.next(), n, "source")?,
                target: field(cols.next(), n, "target")?,
                direction: field(cols.next(), n, "direction")?,
                mutual_best: field(cols.next(), n, "mutual_best")?,
            })
        })
        .collect()
}

/// The baseline's lexicon, in the same column layout with the t-score as score.
pub fn write_kvec_lexicon(pairs: &[KvecPair]) -> String {
    let mut out = format!("{LEXICON_HEADER}\tmutual_information\n");
    for p in pairs {
        let _ = writeln!(
            out,
            "{:.6}\t{}\t{}\tboth\ttrue\t{:.6}",
            p.correlation.t_score, p.source, p.target, p.correlation.mutual_information
        );
    }
    out
}

pub fn write_dots(dots: &[AnchorDot]) -> String {
    let mut out = format!("{DOTS_HEADER}\n");
    for d in dots {
        let _ = writeln!(out, "{}\t{}\t{}", d.pos_a, d.pos_b, d.score);
    }
    out
}

pub fn read_dots(text: &str) -> Result<Vec<AnchorDot>> {
    data_lines(text, DOTS_HEADER)
        .map(|(n, line)| {
            let mut cols = line.split('\t');
            Ok(AnchorDot {
                pos_a: field(cols.next(), n, "pos_a")?,
                pos_b: field(cols.next(), n, "pos_b")?,
                score: field(cols.next(), n, "score")?,
            })
        })
        .collect()
}

pub fn write_path(path: &AlignmentPath) -> String {
    format!(
        "# lengths\t{}\t{}\n{}",
        path.length_a,
        path.length_b,
        write_dots(&path.anchors)
    )
}

pub fn read_path(text: &str) -> Result<AlignmentPath> {
    let first = text.lines().next().unwrap_or_default();
    let mut lens = first
        .strip_prefix("# lengths\t")
        .ok_or_else(|| parse_err(1, "expected `# lengths` line"))?
        .split('\t');
    let length_a = field(lens.next(), 1, "length_a")?;
    let length_b = field(lens.next(), 1, "length_b")?;
    Ok(AlignmentPath::new(read_dots(text)?, length_a, length_b))
}

fn svg_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

const PANEL: f64 = 360.0;
const MARGIN: f64 = 40.0;

fn panel_frame(out: &mut String, x0: f64, title: &str, la: usize, lb: usize) {
    let _ = writeln!(
        out,
        r##"<g transform="translate({x0},{MARGIN})"><rect width="{PANEL}" height="{PANEL}" fill="none" stroke="#444"/><line x1="0" y1="{PANEL}" x2="{PANEL}" y2="0" stroke="#bbb" stroke-dasharray="4 4"/><text x="{h}" y="-12" text-anchor="middle" font-size="14">{t}</text><text x="{h}" y="{lx}" text-anchor="middle" font-size="11">text A (0..{la})</text><text transform="translate(-10,{h}) rotate(-90)" text-anchor="middle" font-size="11">text B (0..{lb})</text>"##,
        h = PANEL / 2.0,
        lx = PANEL + 18.0,
        t = svg_escape(title),
    );
}

/// Two panels: the dot plot, and the traced path through it.
pub fn render_alignment_svg(dots: &[AnchorDot], path: &AlignmentPath) -> String {
    let (la, lb) = (path.length_a.max(1) as f64, path.length_b.max(1) as f64);
    let sx = |a: usize| a as f64 / la * PANEL;
    let sy = |b: usize| PANEL - b as f64 / lb * PANEL;
    let width = 2.0 * PANEL + 3.0 * MARGIN;
    let height = PANEL + 2.0 * MARGIN;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" font-family=\"sans-serif\">\n"
    );
    panel_frame(
        &mut out,
        MARGIN,
        "anchor dots",
        path.length_a,
        path.length_b,
    );
    for d in dots {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="1.2" fill="#1f5fbf"/>"##,
            sx(d.pos_a),
            sy(d.pos_b)
        );
    }
    out.push_str("</g>\n");
    panel_frame(
        &mut out,
        2.0 * MARGIN + PANEL,
        "alignment path",
        path.length_a,
        path.length_b,
    );
    let mut pts = vec![(0.0, PANEL)];
    pts.extend(path.anchors.iter().map(|d| (sx(d.pos_a), sy(d.pos_b))));
    pts.push((PANEL, 0.0));
    let poly: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
        poly.join(" ")
    );
    out.push_str("</g>\n</svg>\n");
    out
}

/// Recency signals over text position, one polyline per signal.
pub fn render_signals_svg(signals: &[&WordSignal]) -> String {
    const COLORS: [&str; 6] = [
        "#1f5fbf", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#16a085",
    ];
    let (w, h) = (2.0 * PANEL, PANEL);
    let max_y = signals
        .iter()
        .flat_map(|s| s.recency.iter().copied())
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\">\n<g transform=\"translate({MARGIN},{MARGIN})\"><rect width=\"{w}\" height=\"{h}\" fill=\"none\" stroke=\"#444\"/>\n",
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN,
    );
    for (k, s) in signals.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        // Each side is scaled to its own text length so the curves overlay.
        let pts: Vec<String> = plot_rows(s)
            .iter()
            .map(|&(x, y)| {
                format!(
                    "{:.2},{:.2}",
                    x as f64 / s.text_length as f64 * w,
                    h - y as f64 / max_y * h
                )
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1"/><text x="{}" y="{}" font-size="12" fill="{color}">{}</text>"#,
            pts.join(" "),
            w - 120.0,
            16.0 + 14.0 * k as f64,
            svg_escape(&s.word)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}
