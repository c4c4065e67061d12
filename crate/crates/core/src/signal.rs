//! Recency signals: the arrival intervals between successive occurrences of a word.

use serde::{Deserialize, Serialize};

use crate::corpus::WordOccurrenceRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSignal {
    pub word: String,
    pub positions: Vec<usize>,
    /// `recency[k] = positions[k + 1] - positions[k]`; one shorter than `positions`.
    pub recency: Vec<u64>,
    pub text_length: usize,
}

impl WordSignal {
    pub fn first_position(&self) -> usize {
        self.positions[0]
    }

    pub fn frequency(&self) -> usize {
        self.positions.len()
    }

    /// First occurrence as a fraction of the host text length.
    pub fn relative_start(&self) -> f64 {
        self.first_position() as f64 / self.text_length as f64
    }

    /// Rebuilds the position vector from the first position and the intervals.
    pub fn reconstruct_positions(&self) -> Vec<usize> {
        let mut pos = self.first_position();
        std::iter::once(pos)
            .chain(self.recency.iter().map(|&d| {
                pos += d as usize;
                pos
            }))
            .collect()
    }
}

/// Turns a position vector into a recency signal. Needs at least two occurrences.
pub fn build_signal(record: &WordOccurrenceRecord, text_length: usize) -> Result<WordSignal> {
    if record.frequency() < 2 {
        return Err(Error::DegenerateSignal {
            word: record.word.clone(),
            frequency: record.frequency(),
        });
    }
    if let Some(&last) = record.positions.last() {
        if last >= text_length {
            return Err(Error::OutOfRange {
                pos: last as f64,
                len: text_length,
            });
        }
    }
    let recency = record
        .positions
        .windows(2)
        .map(|w| {
            debug_assert!(w[1] > w[0], "positions must be strictly increasing");
            (w[1] - w[0]) as u64
        })
        .collect();
    Ok(WordSignal {
        word: record.word.clone(),
        positions: record.positions.clone(),
        recency,
        text_length,
    })
}

/// Builds signals for every record with at least two occurrences, keeping input order.
pub fn build_signals(records: &[WordOccurrenceRecord], text_length: usize) -> Vec<WordSignal> {
    records
        .iter()
        .filter(|r| r.frequency() >= 2)
        .filter_map(|r| build_signal(r, text_length).ok())
        .collect()
}

/// `(position, interval)` rows for plotting: x is the later occurrence of each interval.
pub fn plot_rows(signal: &WordSignal) -> Vec<(usize, u64)> {
    signal.positions[1..]
        .iter()
        .copied()
        .zip(signal.recency.iter().copied())
        .collect()
}

/// Two-column TSV of [`plot_rows`] with a header.
pub fn plot_tsv(signal: &WordSignal) -> String {
    let mut out = String::from("position\tinterval\n");
    for (x, y) in plot_rows(signal) {
        out.push_str(&format!("{x}\t{y}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(p: &[usize]) -> WordOccurrenceRecord {
        WordOccurrenceRecord::new("w", p.to_vec())
    }

    #[test]
    fn two_occurrences() {
        let s = build_signal(&rec(&[0, 5]), 10).unwrap();
        assert_eq!(s.recency, vec![5]);
        assert_eq!(s.first_position(), 0);
        assert_eq!(plot_rows(&s), vec![(5, 5)]);
        assert_eq!(plot_tsv(&s), "position\tinterval\n5\t5\n");
    }

    #[test]
    fn single_occurrence_is_degenerate() {
        assert!(matches!(
            build_signal(&rec(&[3]), 10),
            Err(Error::DegenerateSignal { frequency: 1, .. })
        ));
    }

    #[test]
    fn positions_must_fit_text() {
        assert!(matches!(
            build_signal(&rec(&[3, 10]), 10),
            Err(Error::OutOfRange { .. })
        ));
    }

    fn positions_strategy() -> impl Strategy<Value = Vec<usize>> {
        prop::collection::btree_set(0usize..5_000, 2..60).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn recency_invariants(p in positions_strategy()) {
            let s = build_signal(&rec(&p), 5_000).unwrap();
            prop_assert_eq!(s.recency.len(), p.len() - 1);
            prop_assert!(s.recency.iter().all(|&d| d >= 1 && d as usize <= s.text_length));
            prop_assert_eq!(s.reconstruct_positions(), p.clone());
            prop_assert_eq!(plot_rows(&s).len(), s.recency.len());
        }

        #[test]
        fn shift_invariance(p in positions_strategy(), c in 0usize..1_000) {
            let base = build_signal(&rec(&p), 6_000).unwrap();
            let shifted: Vec<usize> = p.iter().map(|x| x + c).collect();
            let moved = build_signal(&rec(&shifted), 6_000).unwrap();
            prop_assert_eq!(&moved.recency, &base.recency);
            prop_assert_eq!(moved.first_position(), base.first_position() + c);
        }

        #[test]
        fn scale_covariance(p in positions_strategy(), k in 1usize..5) {
            let base = build_signal(&rec(&p), 25_000).unwrap();
            let scaled: Vec<usize> = p.iter().map(|x| x * k).collect();
            let s = build_signal(&rec(&scaled), 25_000).unwrap();
            let expect: Vec<u64> = base.recency.iter().map(|d| d * k as u64).collect();
            prop_assert_eq!(s.recency, expect);
        }
    }
}
