//! K-vec baseline: each word becomes a binary vector over K equal segments of
//! its text, and word pairs are scored by segment co-occurrence using mutual
//! information and t-score over the 2x2 contingency table.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{select_frequency_band, FrequencyBand, TokenizedText};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KVec {
    pub word: String,
    pub bits: Vec<bool>,
}

impl KVec {
    pub fn k(&self) -> usize {
        self.bits.len()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Segment index of `pos` when `len` tokens are cut into `k` spans, the first
/// `len % k` of them one token longer.
pub fn segment_of(pos: usize, len: usize, k: usize) -> usize {
    let base = len / k;
    let rem = len % k;
    let boundary = rem * (base + 1);
    if pos < boundary {
        pos / (base + 1)
    } else {
        rem + (pos - boundary) / base
    }
}

pub fn build_kvecs(text: &TokenizedText, k: usize, band: FrequencyBand) -> Result<Vec<KVec>> {
    if k == 0 || k > text.len() {
        return Err(Error::Config(format!(
            "K = {k} must be in [1, {}]",
            text.len()
        )));
    }
    Ok(select_frequency_band(text, band)
        .into_iter()
        .map(|rec| {
            let mut bits = vec![false; k];
            for &p in &rec.positions {
                bits[segment_of(p, text.len(), k)] = true;
            }
            KVec {
                word: rec.word,
                bits,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub mutual_information: f64,
    pub t_score: f64,
}

/// `None` when the two words never share a segment.
pub fn kvec_correlation(a: &KVec, b: &KVec) -> Option<Correlation> {
    assert_eq!(a.k(), b.k(), "K-vecs must share K");
    let k = a.k() as f64;
    let n11 = a
        .bits
        .iter()
        .zip(&b.bits)
        .filter(|(x, y)| **x && **y)
        .count();
    if n11 == 0 {
        return None;
    }
    let p11 = n11 as f64 / k;
    let pa = a.ones() as f64 / k;
    let pb = b.ones() as f64 / k;
    Some(Correlation {
        mutual_information: (p11 / (pa * pb)).log2(),
        t_score: (p11 - pa * pb) / (n11 as f64 / (k * k)).sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KvecPair {
    pub source: String,
    pub target: String,
    pub correlation: Correlation,
}

fn best_by_t(
    n_src: usize,
    n_tgt: usize,
    corr: impl Fn(usize, usize) -> Option<Correlation>,
) -> Vec<Option<(usize, Correlation)>> {
    (0..n_src)
        .map(|s| {
            let mut best: Option<(usize, Correlation)> = None;
            for t in 0..n_tgt {
                if let Some(c) = corr(s, t) {
                    if best.is_none_or(|(_, b)| c.t_score > b.t_score) {
                        best = Some((t, c));
                    }
                }
            }
            best
        })
        .collect()
}

/// Baseline lexicon: pairs that are each other's highest-t-score partner,
/// ordered by descending t-score.
pub fn kvec_lexicon(a: &[KVec], b: &[KVec]) -> Vec<KvecPair> {
    let table: Vec<Option<Correlation>> = a
        .par_iter()
        .flat_map_iter(|va| b.iter().map(move |vb| kvec_correlation(va, vb)))
        .collect();
    let get = |i: usize, j: usize| table[i * b.len() + j];
    let ab = best_by_t(a.len(), b.len(), get);
    let ba = best_by_t(b.len(), a.len(), |j, i| get(i, j));

    let mut out: Vec<KvecPair> = ab
        .iter()
        .enumerate()
        .filter_map(|(i, best)| {
            let (j, c) = (*best)?;
            matches!(ba[j], Some((back, _)) if back == i).then(|| KvecPair {
                source: a[i].word.clone(),
                target: b[j].word.clone(),
                correlation: c,
            })
        })
        .collect();
    out.sort_by(|x, y| {
        y.correlation
            .t_score
            .total_cmp(&x.correlation.t_score)
            .then_with(|| x.source.cmp(&y.source))
            .then_with(|| x.target.cmp(&y.target))
    });
    out
}
