//! From anchor lexicon to alignment: dots at corresponding occurrence
//! positions, a monotone path traced through them, and the piecewise-linear
//! offset map that path induces.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dtw::{dtw_with, DtwOptions};
use crate::error::{Error, Result};
use crate::lexicon::LexiconEntry;
use crate::signal::WordSignal;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnchorDot {
    pub pos_a: usize,
    pub pos_b: usize,
    pub score: u64,
}

/// One dot per occurrence pair on each entry's warp path, plus the pair of
/// first occurrences. Sorted by `(pos_a, pos_b, score)`.
pub fn generate_dots(
    lexicon: &[LexiconEntry],
    signals_a: &[WordSignal],
    signals_b: &[WordSignal],
    dtw: &DtwOptions,
) -> Result<Vec<AnchorDot>> {
    let index_a: HashMap<&str, &WordSignal> =
        signals_a.iter().map(|s| (s.word.as_str(), s)).collect();
    let index_b: HashMap<&str, &WordSignal> =
        signals_b.iter().map(|s| (s.word.as_str(), s)).collect();

    let mut dots = Vec::new();
    for e in lexicon {
        let sa = index_a
            .get(e.source.as_str())
            .ok_or_else(|| Error::MissingSignal {
                word: e.source.clone(),
                side: 'A',
            })?;
        let sb = index_b
            .get(e.target.as_str())
            .ok_or_else(|| Error::MissingSignal {
                word: e.target.clone(),
                side: 'B',
            })?;
        let warp = dtw_with(&sa.recency, &sb.recency, dtw)?;
        dots.push(AnchorDot {
            pos_a: sa.positions[0],
            pos_b: sb.positions[0],
            score: e.score,
        });
        dots.extend(warp.path.iter().map(|&(i, j)| AnchorDot {
            pos_a: sa.positions[i + 1],
            pos_b: sb.positions[j + 1],
            score: e.score,
        }));
    }
    dots.sort_by_key(|x| (x.pos_a, x.pos_b, x.score));
    Ok(dots)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DotWeighting {
    #[default]
    Uniform,
    /// `1 / (1 + score)`
    InverseScore,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    pub weighting: DotWeighting,
    /// Drop dots whose relative positions differ by more than this before tracing.
    pub corridor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentPath {
    pub anchors: Vec<AnchorDot>,
    pub length_a: usize,
    pub length_b: usize,
}

impl AlignmentPath {
    pub fn new(anchors: Vec<AnchorDot>, length_a: usize, length_b: usize) -> Self {
        Self {
            anchors,
            length_a,
            length_b,
        }
    }

    /// Strictly increasing in A, non-decreasing in B, inside both texts.
    pub fn is_monotone(&self) -> bool {
        self.anchors
            .windows(2)
            .all(|w| w[0].pos_a < w[1].pos_a && w[0].pos_b <= w[1].pos_b)
            && self
                .anchors
                .iter()
                .all(|d| d.pos_a < self.length_a && d.pos_b < self.length_b)
    }

    /// Knots of the interpolant: the anchors framed by (0, 0) and (length_a, length_b).
    fn knots(&self) -> Vec<(f64, f64)> {
        let mut k = Vec::with_capacity(self.anchors.len() + 2);
        if self.anchors.first().is_none_or(|d| d.pos_a > 0) {
            k.push((0.0, 0.0));
        }
        k.extend(
            self.anchors
                .iter()
                .map(|d| (d.pos_a as f64, d.pos_b as f64)),
        );
        k.push((self.length_a as f64, self.length_b as f64));
        k
    }

    /// Maps a position in text A to text B by linear interpolation between anchors.
    pub fn offset_map(&self, pos_a: f64) -> Result<f64> {
        if !(0.0..=self.length_a as f64).contains(&pos_a) {
            return Err(Error::OutOfRange {
                pos: pos_a,
                len: self.length_a,
            });
        }
        Ok(interpolate(&self.knots(), pos_a))
    }

    /// Evaluates the offset map at every integer position `0..=length_a`.
    pub fn offset_table(&self) -> Vec<f64> {
        let knots = self.knots();
        let mut out = Vec::with_capacity(self.length_a + 1);
        let mut seg = 0;
        for p in 0..=self.length_a {
            let x = p as f64;
            while seg + 2 < knots.len() && knots[seg + 1].0 <= x {
                seg += 1;
            }
            out.push(lerp(knots[seg], knots[seg + 1], x));
        }
        out
    }
}

fn lerp(a: (f64, f64), b: (f64, f64), x: f64) -> f64 {
    if b.0 == a.0 {
        return a.1;
    }
    a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
}

fn interpolate(knots: &[(f64, f64)], x: f64) -> f64 {
    // first knot with knot.x >= x
    let hi = knots.partition_point(|k| k.0 < x);
    if hi == 0 {
        return knots[0].1;
    }
    if hi == knots.len() {
        return knots[knots.len() - 1].1;
    }
    if knots[hi].0 == x {
        return knots[hi].1;
    }
    lerp(knots[hi - 1], knots[hi], x)
}

/// Best chain so far: higher weight wins, then lower deviation from the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Chain {
    weight: f64,
    deviation: f64,
    end: Option<usize>,
}

impl Chain {
    const EMPTY: Chain = Chain {
        weight: 0.0,
        deviation: 0.0,
        end: None,
    };

    fn better_than(&self, other: &Chain) -> bool {
        self.weight > other.weight
            || (self.weight == other.weight && self.deviation < other.deviation)
    }
}

/// Prefix-maximum Fenwick tree over B-position ranks.
struct PrefixBest {
    tree: Vec<Chain>,
}

impl PrefixBest {
    fn new(n: usize) -> Self {
        Self {
            tree: vec![Chain::EMPTY; n + 1],
        }
    }

    fn update(&mut self, rank: usize, c: Chain) {
        let mut i = rank + 1;
        while i < self.tree.len() {
            if c.better_than(&self.tree[i]) {
                self.tree[i] = c;
            }
            i += i & i.wrapping_neg();
        }
    }

    /// Best chain ending at a rank `<= rank`.
    fn query(&self, rank: usize) -> Chain {
        let mut best = Chain::EMPTY;
        let mut i = rank + 1;
        while i > 0 {
            if self.tree[i].better_than(&best) {
                best = self.tree[i];
            }
            i -= i & i.wrapping_neg();
        }
        best
    }
}

/// Traces the maximum-weight monotone chain through `dots` (strictly
/// increasing A, non-decreasing B). Among equal-weight chains the one with the
/// smallest summed distance from the global diagonal wins.
pub fn trace_alignment_path(
    dots: &[AnchorDot],
    length_a: usize,
    length_b: usize,
    opts: &TraceOptions,
) -> AlignmentPath {
    let deviation =
        |d: &AnchorDot| (d.pos_a as f64 / length_a as f64 - d.pos_b as f64 / length_b as f64).abs();
    let mut kept: Vec<AnchorDot> = dots
        .iter()
        .filter(|d| opts.corridor.is_none_or(|c| deviation(d) <= c))
        .copied()
        .collect();
    kept.sort_by_key(|x| (x.pos_a, x.pos_b, x.score));
    kept.dedup_by(|x, y| x.pos_a == y.pos_a && x.pos_b == y.pos_b);
    if kept.is_empty() {
        return AlignmentPath::new(Vec::new(), length_a, length_b);
    }

    let mut ranks: Vec<usize> = kept.iter().map(|d| d.pos_b).collect();
    ranks.sort_unstable();
    ranks.dedup();
    let rank_of = |b: usize| ranks.binary_search(&b).expect("rank present");

    let weight = |d: &AnchorDot| match opts.weighting {
        DotWeighting::Uniform => 1.0,
        DotWeighting::InverseScore => 1.0 / (1.0 + d.score as f64),
    };

    let mut tree = PrefixBest::new(ranks.len());
    let mut prev: Vec<Option<usize>> = vec![None; kept.len()];
    let mut best_at: Vec<Chain> = vec![Chain::EMPTY; kept.len()];
    let mut start = 0;
    while start < kept.len() {
        let mut end = start;
        while end < kept.len() && kept[end].pos_a == kept[start].pos_a {
            end += 1;
        }
        // Dots sharing a position in A cannot chain to each other.
        for k in start..end {
            let before = tree.query(rank_of(kept[k].pos_b));
            prev[k] = before.end;
            best_at[k] = Chain {
                weight: before.weight + weight(&kept[k]),
                deviation: before.deviation + deviation(&kept[k]),
                end: Some(k),
            };
        }
        for k in start..end {
            tree.update(rank_of(kept[k].pos_b), best_at[k]);
        }
        start = end;
    }

    let mut best = Chain::EMPTY;
    for c in &best_at {
        if c.better_than(&best) {
            best = *c;
        }
    }
    let mut anchors = Vec::new();
    let mut cur = best.end;
    while let Some(k) = cur {
        anchors.push(kept[k]);
        cur = prev[k];
    }
    anchors.reverse();
    AlignmentPath::new(anchors, length_a, length_b)
}
