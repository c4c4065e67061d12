//! Scoring a run against the synthetic ground truth.

use serde::{Deserialize, Serialize};

use crate::anchor::AlignmentPath;
use crate::error::{Error, Result};
use crate::kvec::{build_kvecs, kvec_lexicon};
use crate::lexicon::{combine_bidirectional, CombineMode, LexiconEntry};
use crate::pipeline::{self, PipelineConfig};
use crate::synth::{generate_bitext, GroundTruth, SynthConfig};

/// Fraction of the first `at_k` pairs (or all of them, if fewer) that are true translations.
pub fn score_pairs<'a>(
    pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    truth: &GroundTruth,
    at_k: usize,
) -> Result<f64> {
    if at_k == 0 {
        return Err(Error::UndefinedMetric("precision at K = 0"));
    }
    let (mut seen, mut hits) = (0usize, 0usize);
    for (a, b) in pairs.into_iter().take(at_k) {
        seen += 1;
        hits += usize::from(truth.is_translation(a, b));
    }
    Ok(if seen == 0 {
        0.0
    } else {
        hits as f64 / seen as f64
    })
}

pub fn score_lexicon(entries: &[LexiconEntry], truth: &GroundTruth, at_k: usize) -> Result<f64> {
    score_pairs(
        entries
            .iter()
            .map(|e| (e.source.as_str(), e.target.as_str())),
        truth,
        at_k,
    )
}

/// Mean absolute difference, in B tokens, between the path's offset map and
/// the true one over every A position.
pub fn score_alignment(path: &AlignmentPath, truth: &GroundTruth) -> f64 {
    let predicted = path.offset_table();
    let n = predicted.len().min(truth.offsets.len());
    let total: f64 = predicted[..n]
        .iter()
        .zip(&truth.offsets[..n])
        .map(|(p, &t)| (p - t as f64).abs())
        .sum();
    total / n as f64
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    pub synth: SynthConfig,
    pub pipeline: PipelineConfig,
    pub at_k: usize,
    pub kvec_segments: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            synth: SynthConfig::default(),
            pipeline: PipelineConfig::default(),
            at_k: 40,
            kvec_segments: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub length_a: usize,
    pub length_b: usize,
    pub signals_a: usize,
    pub signals_b: usize,
    pub at_k: usize,
    pub mutual_best_entries: usize,
    pub union_entries: usize,
    pub precision_mutual_best: f64,
    pub precision_union: f64,
    pub precision_kvec: f64,
    pub kvec_entries: usize,
    pub dots: usize,
    pub anchors: usize,
    pub alignment_mae: f64,
    pub alignment_mae_fraction: f64,
}

pub fn evaluate(cfg: &EvalConfig) -> Result<EvalReport> {
    let bt = generate_bitext(&cfg.synth)?;
    let out = pipeline::run(&bt.text_a, &bt.text_b, &cfg.pipeline)?;
    let mutual = combine_bidirectional(&out.matches.ab, &out.matches.ba, CombineMode::MutualBest);
    let union = combine_bidirectional(&out.matches.ab, &out.matches.ba, CombineMode::Union);

    let band = cfg.pipeline.band;
    let kv_a = build_kvecs(&bt.text_a, cfg.kvec_segments, band)?;
    let kv_b = build_kvecs(&bt.text_b, cfg.kvec_segments, band)?;
    let kv = kvec_lexicon(&kv_a, &kv_b);

    let mae = score_alignment(&out.path, &bt.truth);
    Ok(EvalReport {
        length_a: bt.text_a.len(),
        length_b: bt.text_b.len(),
        signals_a: out.signals_a.len(),
        signals_b: out.signals_b.len(),
        at_k: cfg.at_k,
        mutual_best_entries: mutual.len(),
        union_entries: union.len(),
        precision_mutual_best: score_lexicon(&mutual, &bt.truth, cfg.at_k)?,
        precision_union: score_lexicon(&union, &bt.truth, cfg.at_k)?,
        precision_kvec: score_pairs(
            kv.iter().map(|p| (p.source.as_str(), p.target.as_str())),
            &bt.truth,
            cfg.at_k,
        )?,
        kvec_entries: kv.len(),
        dots: out.dots.len(),
        anchors: out.path.anchors.len(),
        alignment_mae: mae,
        alignment_mae_fraction: mae / bt.text_b.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anchor::AnchorDot;
    use crate::lexicon::Direction;
    use std::collections::BTreeMap;

    fn truth(n: usize) -> GroundTruth {
        GroundTruth {
            lexicon: BTreeMap::from([("a1".into(), "b1".into()), ("a2".into(), "b2".into())]),
            offsets: (0..=n).collect(),
        }
    }

    fn e(s: &str, t: &str) -> LexiconEntry {
        LexiconEntry {
            source: s.into(),
            target: t.into(),
            score: 0,
            mutual_best: true,
            direction: Direction::Both,
        }
    }

    #[test]
    fn precision_counts() {
        let t = truth(10);
        assert_eq!(
            score_lexicon(&[e("a1", "b1"), e("a2", "b2")], &t, 2).unwrap(),
            1.0
        );
        assert_eq!(
            score_lexicon(&[e("a1", "b2"), e("a2", "b2")], &t, 2).unwrap(),
            0.5
        );
        assert_eq!(
            score_lexicon(&[e("a1", "b2"), e("a2", "b2")], &t, 1).unwrap(),
            0.0
        );
        assert_eq!(score_lexicon(&[], &t, 5).unwrap(), 0.0);
        assert!(score_lexicon(&[e("a1", "b1")], &t, 0).is_err());
    }

    #[test]
    fn identity_alignment_has_no_error() {
        let t = truth(100);
        let no_anchors = AlignmentPath::new(vec![], 100, 100);
        assert_eq!(score_alignment(&no_anchors, &t), 0.0);
        let anchors = (0..100)
            .step_by(7)
            .map(|p| AnchorDot {
                pos_a: p,
                pos_b: p,
                score: 0,
            })
            .collect();
        assert_eq!(
            score_alignment(&AlignmentPath::new(anchors, 100, 100), &t),
            0.0
        );
    }
}
