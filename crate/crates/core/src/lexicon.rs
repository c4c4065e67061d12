//! Anchor lexicon induction: score every filtered word pair with DTW, keep
//! each word's best partner, combine the two search directions and threshold.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dtw::{dtw_score_with, filter_pair, DtwOptions, FilterParams};
use crate::error::{Error, Result};
use crate::signal::WordSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    AtoB,
    BtoA,
    Both,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AtoB => "AtoB",
            Self::BtoA => "BtoA",
            Self::Both => "both",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "AtoB" => Ok(Self::AtoB),
            "BtoA" => Ok(Self::BtoA),
            "both" => Ok(Self::Both),
            other => Err(Error::Config(format!("unknown direction `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub source: String,
    pub target: String,
    pub score: u64,
    pub mutual_best: bool,
    pub direction: Direction,
}

impl LexiconEntry {
    fn rank_cmp(&self, other: &Self) -> Ordering {
        self.score
            .cmp(&other.score)
            .then_with(|| self.source.cmp(&other.source))
            .then_with(|| self.target.cmp(&other.target))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombineMode {
    Union,
    #[default]
    MutualBest,
}

impl FromStr for CombineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "union" => Ok(Self::Union),
            "mutual" | "mutual-best" | "mutual_best" => Ok(Self::MutualBest),
            other => Err(Error::Config(format!("unknown combine mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchOptions {
    pub filter: FilterParams,
    pub dtw: DtwOptions,
}

/// DTW scores for every (A, B) signal pair; `None` where the pair was filtered out.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    rows: usize,
    cols: usize,
    scores: Vec<Option<u64>>,
}

impl ScoreTable {
    /// Scores all pairs. Rows are computed in parallel on the current rayon
    /// pool; the result does not depend on the pool size.
    pub fn compute(a: &[WordSignal], b: &[WordSignal], opts: &MatchOptions) -> Self {
        let scores = a
            .par_iter()
            .flat_map_iter(|sa| {
                b.iter().map(move |sb| {
                    filter_pair(sa, sb, &opts.filter)
                        .passed
                        .then(|| dtw_score_with(&sa.recency, &sb.recency, &opts.dtw).ok())
                        .flatten()
                })
            })
            .collect();
        Self {
            rows: a.len(),
            cols: b.len(),
            scores,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u64> {
        self.scores[i * self.cols + j]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Best target for every row, as `AtoB` entries sorted by rank.
    pub fn best_for_rows(&self, a: &[WordSignal], b: &[WordSignal]) -> Vec<LexiconEntry> {
        best_of(
            self.rows,
            self.cols,
            |i, j| self.get(i, j),
            |i| &a[i].word,
            |j| &b[j].word,
            Direction::AtoB,
        )
    }

    /// Best row for every column: the reverse search, with B words as sources.
    pub fn best_for_cols(&self, a: &[WordSignal], b: &[WordSignal]) -> Vec<LexiconEntry> {
        best_of(
            self.cols,
            self.rows,
            |j, i| self.get(i, j),
            |j| &b[j].word,
            |i| &a[i].word,
            Direction::BtoA,
        )
    }
}

fn best_of<'a>(
    n_src: usize,
    n_tgt: usize,
    score: impl Fn(usize, usize) -> Option<u64>,
    src_word: impl Fn(usize) -> &'a String,
    tgt_word: impl Fn(usize) -> &'a String,
    direction: Direction,
) -> Vec<LexiconEntry> {
    let mut out: Vec<LexiconEntry> = (0..n_src)
        .filter_map(|s| {
            (0..n_tgt)
                .filter_map(|t| score(s, t).map(|sc| (sc, tgt_word(t), t)))
                .min_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(y.1)))
                .map(|(sc, tw, _)| LexiconEntry {
                    source: src_word(s).clone(),
                    target: tw.clone(),
                    score: sc,
                    mutual_best: false,
                    direction,
                })
        })
        .collect();
    out.sort_by(LexiconEntry::rank_cmp);
    out
}

/// For each source signal, its minimal-score target among pairs that pass the filters.
pub fn best_matches(
    source: &[WordSignal],
    target: &[WordSignal],
    opts: &MatchOptions,
) -> Vec<LexiconEntry> {
    ScoreTable::compute(source, target, opts).best_for_rows(source, target)
}

/// Merges an A→B and a B→A best-match list into one list keyed `(A word, B word)`.
///
/// `ba` is taken as produced by [`best_matches`] with the sides swapped, so its
/// sources are B words.
pub fn combine_bidirectional(
    ab: &[LexiconEntry],
    ba: &[LexiconEntry],
    mode: CombineMode,
) -> Vec<LexiconEntry> {
    let mut merged: BTreeMap<(String, String), LexiconEntry> = BTreeMap::new();
    for e in ab {
        merged.insert(
            (e.source.clone(), e.target.clone()),
            LexiconEntry {
                direction: Direction::AtoB,
                mutual_best: false,
                ..e.clone()
            },
        );
    }
    for e in ba {
        let key = (e.target.clone(), e.source.clone());
        match merged.get_mut(&key) {
            Some(existing) => {
                existing.direction = Direction::Both;
                existing.mutual_best = true;
                existing.score = existing.score.min(e.score);
            }
            None => {
                merged.insert(
                    key.clone(),
                    LexiconEntry {
                        source: key.0,
                        target: key.1,
                        score: e.score,
                        mutual_best: false,
                        direction: Direction::BtoA,
                    },
                );
            }
        }
    }
    let mut out: Vec<LexiconEntry> = merged
        .into_values()
        .filter(|e| mode == CombineMode::Union || e.mutual_best)
        .collect();
    out.sort_by(LexiconEntry::rank_cmp);
    out
}

/// Keeps entries scoring at most `max_score`, then the first `top_k` of them.
pub fn threshold_lexicon(
    entries: &[LexiconEntry],
    max_score: Option<u64>,
    top_k: Option<usize>,
) -> Vec<LexiconEntry> {
    entries
        .iter()
        .filter(|e| max_score.is_none_or(|m| e.score <= m))
        .take(top_k.unwrap_or(usize::MAX))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::WordOccurrenceRecord;
    use crate::signal::build_signal;

    fn sig(word: &str, positions: &[usize], len: usize) -> WordSignal {
        build_signal(&WordOccurrenceRecord::new(word, positions.to_vec()), len).unwrap()
    }

    fn entry(s: &str, t: &str, score: u64) -> LexiconEntry {
        LexiconEntry {
            source: s.into(),
            target: t.into(),
            score,
            mutual_best: false,
            direction: Direction::AtoB,
        }
    }

    #[test]
    fn identical_signal_matches_at_zero() {
        let a = vec![sig("gov", &[10, 20, 50, 90], 100)];
        let b = vec![
            sig("zongdu", &[10, 20, 50, 90], 100),
            sig("far", &[80, 85, 90, 95], 100),
            sig("dense", &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10], 100),
        ];
        let m = best_matches(&a, &b, &MatchOptions::default());
        assert_eq!(m, vec![entry("gov", "zongdu", 0)]);
    }

    #[test]
    fn fully_filtered_source_has_no_entry() {
        let a = vec![sig("early", &[0, 1, 2], 100)];
        let b = vec![sig("late", &[90, 91, 92], 100)];
        assert!(best_matches(&a, &b, &MatchOptions::default()).is_empty());
    }

    #[test]
    fn ties_break_on_target_word() {
        let a = vec![sig("x", &[0, 10, 20], 100)];
        let b = vec![sig("q", &[0, 10, 20], 100), sig("p", &[5, 15, 25], 100)];
        let m = best_matches(&a, &b, &MatchOptions::default());
        assert_eq!(m[0].target, "p");
    }

    #[test]
    fn many_sources_may_share_a_target() {
        let a = vec![
            sig("carbon", &[0, 10, 30], 100),
            sig("monoxide", &[1, 11, 31], 100),
        ];
        let b = vec![sig("co", &[0, 10, 30], 100)];
        let m = best_matches(&a, &b, &MatchOptions::default());
        assert_eq!(m.len(), 2);
        assert!(m.iter().all(|e| e.target == "co" && e.score == 0));
    }

    #[test]
    fn combine_marks_agreement() {
        let ab = vec![entry("u", "v", 5)];
        let ba = vec![entry("v", "u", 5)];
        let c = combine_bidirectional(&ab, &ba, CombineMode::MutualBest);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].direction, Direction::Both);
        assert!(c[0].mutual_best);
        assert_eq!((c[0].source.as_str(), c[0].target.as_str()), ("u", "v"));
    }

    #[test]
    fn combine_without_agreement() {
        let ab = vec![entry("u", "v", 5)];
        let ba = vec![entry("v", "w", 4)];
        assert!(combine_bidirectional(&ab, &ba, CombineMode::MutualBest).is_empty());
        let union = combine_bidirectional(&ab, &ba, CombineMode::Union);
        assert_eq!(union.len(), 2);
        assert_eq!(union[0].source, "w");
        assert_eq!(union[0].direction, Direction::BtoA);
        assert_eq!(union[1].direction, Direction::AtoB);
    }

    #[test]
    fn thresholding() {
        let e = vec![entry("a", "x", 0), entry("b", "y", 3), entry("c", "z", 9)];
        assert_eq!(threshold_lexicon(&e, Some(0), None), vec![e[0].clone()]);
        assert!(threshold_lexicon(&e, None, Some(0)).is_empty());
        assert_eq!(threshold_lexicon(&e, Some(5), Some(42)).len(), 2);
        assert_eq!(threshold_lexicon(&e, None, Some(2)), e[..2].to_vec());
    }

    #[test]
    fn parse_modes() {
        assert_eq!("union".parse::<CombineMode>().unwrap(), CombineMode::Union);
        assert_eq!(
            "mutual".parse::<CombineMode>().unwrap(),
            CombineMode::MutualBest
        );
        assert_eq!("both".parse::<Direction>().unwrap(), Direction::Both);
    }
}
