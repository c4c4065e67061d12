//! Seeded synthetic bitexts with a known lexicon and position correspondence.
//!
//! Text A draws words i.i.d. from a Zipf distribution over `a0..a{V-1}`. Text
//! B is the same core sequence relabeled through a random bijection onto
//! `b0..b{V-1}`, with each token displaced by at most `local_jitter` slots.
//! Either side then receives contiguous noise blocks (words `xa*` / `xb*`
//! that have no translation) with geometric sizes.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, WeightedIndex};
use serde::{Deserialize, Serialize};

use crate::corpus::TokenizedText;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub vocab_size: usize,
    /// Token count of text A, noise included.
    pub length_a: usize,
    pub zipf_exponent: f64,
    /// Inserted noise tokens per shared token, on each side.
    pub insertion_rate_a: f64,
    pub insertion_rate_b: f64,
    pub block_size_mean: f64,
    pub local_jitter: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            vocab_size: 500,
            length_a: 50_000,
            zipf_exponent: 1.0,
            insertion_rate_a: 0.1,
            insertion_rate_b: 0.1,
            block_size_mean: 100.0,
            local_jitter: 3,
            seed: 1994,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.vocab_size < 2 {
            return bad(format!("vocab_size {} < 2", self.vocab_size));
        }
        for (name, r) in [
            ("insertion_rate_a", self.insertion_rate_a),
            ("insertion_rate_b", self.insertion_rate_b),
        ] {
            if !(0.0..1.0).contains(&r) {
                return bad(format!("{name} {r} not in [0, 1)"));
            }
        }
        if self.length_a < 2 {
            return bad(format!("length_a {} < 2", self.length_a));
        }
        if !(self.zipf_exponent.is_finite() && self.zipf_exponent >= 0.0) {
            return bad(format!("zipf_exponent {} must be >= 0", self.zipf_exponent));
        }
        if self.block_size_mean.is_nan() || self.block_size_mean < 1.0 {
            return bad(format!("block_size_mean {} < 1", self.block_size_mean));
        }
        Ok(())
    }
}

/// The generator's record of what corresponds to what.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// A word → B word; bijective over the shared vocabulary.
    pub lexicon: BTreeMap<String, String>,
    /// `offsets[p]` is the B position corresponding to A position `p`, for
    /// `p` in `0..=length_a`; non-decreasing.
    pub offsets: Vec<usize>,
}

impl GroundTruth {
    pub fn is_translation(&self, a: &str, b: &str) -> bool {
        self.lexicon.get(a).is_some_and(|t| t == b)
    }

    pub fn offset(&self, pos_a: usize) -> usize {
        self.offsets[pos_a]
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticBitext {
    pub text_a: TokenizedText,
    pub text_b: TokenizedText,
    pub truth: GroundTruth,
}

fn block_sampler(rate: f64, mean: f64) -> (f64, Geometric) {
    // 1 + Geometric(1/mean) has mean `mean`; starting a block with probability
    // rate/mean per slot inserts `rate` noise tokens per shared token on average.
    let size = Geometric::new(1.0 / mean).expect("valid geometric parameter");
    ((rate / mean).min(1.0), size)
}

/// Noise token counts before each of `core` shared slots, plus the tail.
fn noise_layout(rng: &mut ChaCha8Rng, core: usize, rate: f64, mean: f64) -> Vec<usize> {
    let mut before = vec![0; core + 1];
    if rate <= 0.0 {
        return before;
    }
    let (start_prob, size) = block_sampler(rate, mean);
    for slot in before.iter_mut() {
        if rng.gen_bool(start_prob) {
            *slot += 1 + size.sample(rng) as usize;
        }
    }
    before
}

/// Like [`noise_layout`], but keeps placing slots until exactly `total`
/// tokens (shared plus noise) exist. The last entry is the tail block.
fn noise_layout_exact(rng: &mut ChaCha8Rng, total: usize, rate: f64, mean: f64) -> Vec<usize> {
    let (start_prob, size) = block_sampler(rate, mean);
    let mut before = Vec::new();
    let mut placed = 0;
    loop {
        let mut block = 0;
        if rng.gen_bool(start_prob) {
            // leave room for at least one shared token
            let room = total - placed - usize::from(before.is_empty());
            block = (1 + size.sample(rng) as usize).min(room);
        }
        placed += block;
        before.push(block);
        if placed == total {
            return before;
        }
        placed += 1;
    }
}

fn zipf_weights(n: usize, s: f64) -> Vec<f64> {
    (1..=n).map(|r| (r as f64).powf(-s)).collect()
}

fn interleave(
    core: &[String],
    before: &[usize],
    noise: &WeightedIndex<f64>,
    prefix: &str,
    rng: &mut ChaCha8Rng,
) -> (Vec<String>, Vec<usize>) {
    let total = core.len() + before.iter().sum::<usize>();
    let mut tokens = Vec::with_capacity(total);
    let mut slot_pos = Vec::with_capacity(core.len());
    for (c, tok) in core.iter().enumerate() {
        for _ in 0..before[c] {
            tokens.push(format!("{prefix}{}", noise.sample(rng)));
        }
        slot_pos.push(tokens.len());
        tokens.push(tok.clone());
    }
    for _ in 0..before[core.len()] {
        tokens.push(format!("{prefix}{}", noise.sample(rng)));
    }
    (tokens, slot_pos)
}

pub fn generate_bitext(cfg: &SynthConfig) -> Result<SyntheticBitext> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let before_a = noise_layout_exact(
        &mut rng,
        cfg.length_a,
        cfg.insertion_rate_a,
        cfg.block_size_mean,
    );
    let core_len = before_a.len() - 1;

    let words = WeightedIndex::new(zipf_weights(cfg.vocab_size, cfg.zipf_exponent))
        .map_err(|e| Error::Config(e.to_string()))?;
    let core_ids: Vec<usize> = (0..core_len).map(|_| words.sample(&mut rng)).collect();

    let mut perm: Vec<usize> = (0..cfg.vocab_size).collect();
    perm.shuffle(&mut rng);
    let lexicon: BTreeMap<String, String> = (0..cfg.vocab_size)
        .map(|i| (format!("a{i}"), format!("b{}", perm[i])))
        .collect();

    // A token at core index c lands in slot c + u, u ~ U{0..=jitter}; ties keep
    // core order, so no token moves more than `jitter` slots.
    let mut order: Vec<(usize, usize)> = (0..core_len)
        .map(|c| (c + rng.gen_range(0..=cfg.local_jitter), c))
        .collect();
    order.sort_unstable();

    let core_a: Vec<String> = core_ids.iter().map(|&w| format!("a{w}")).collect();
    let core_b: Vec<String> = order
        .iter()
        .map(|&(_, c)| format!("b{}", perm[core_ids[c]]))
        .collect();

    let before_b = noise_layout(
        &mut rng,
        core_len,
        cfg.insertion_rate_b,
        cfg.block_size_mean,
    );
    let noise = WeightedIndex::new(zipf_weights(cfg.vocab_size, cfg.zipf_exponent))
        .map_err(|e| Error::Config(e.to_string()))?;
    let (tokens_a, slots_a) = interleave(&core_a, &before_a, &noise, "xa", &mut rng);
    let (tokens_b, slots_b) = interleave(&core_b, &before_b, &noise, "xb", &mut rng);

    // A noise maps to where the next shared slot sits in B.
    let (len_a, len_b) = (tokens_a.len(), tokens_b.len());
    let mut offsets = vec![len_b; len_a + 1];
    let mut c = core_len;
    for p in (0..len_a).rev() {
        if c > 0 && slots_a[c - 1] == p {
            c -= 1;
        }
        offsets[p] = if c < core_len { slots_b[c] } else { len_b };
    }

    Ok(SyntheticBitext {
        text_a: TokenizedText::from_tokens(tokens_a)?,
        text_b: TokenizedText::from_tokens(tokens_b)?,
        truth: GroundTruth { lexicon, offsets },
    })
}

/// Renders a token sequence one token per line.
pub fn to_lines(text: &TokenizedText) -> String {
    let mut out = String::with_capacity(text.len() * 6);
    for t in text.tokens() {
        out.push_str(t);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SynthConfig {
        SynthConfig {
            vocab_size: 50,
            length_a: 2_000,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn clean_config_is_pure_relabeling() {
        let cfg = SynthConfig {
            insertion_rate_a: 0.0,
            insertion_rate_b: 0.0,
            local_jitter: 0,
            ..small(3)
        };
        let bt = generate_bitext(&cfg).unwrap();
        assert_eq!(bt.text_a.len(), bt.text_b.len());
        for (a, b) in bt.text_a.tokens().iter().zip(bt.text_b.tokens()) {
            assert!(bt.truth.is_translation(a, b), "{a} -> {b}");
        }
        let identity: Vec<usize> = (0..=bt.text_a.len()).collect();
        assert_eq!(bt.truth.offsets, identity);
    }

    #[test]
    fn same_seed_same_output() {
        let x = generate_bitext(&small(9)).unwrap();
        let y = generate_bitext(&small(9)).unwrap();
        assert_eq!(x.text_a, y.text_a);
        assert_eq!(x.text_b, y.text_b);
        assert_eq!(x.truth, y.truth);
        let z = generate_bitext(&small(10)).unwrap();
        assert_ne!(x.text_b, z.text_b);
    }

    #[test]
    fn jitter_is_bounded() {
        let cfg = SynthConfig {
            insertion_rate_a: 0.0,
            insertion_rate_b: 0.0,
            local_jitter: 3,
            ..small(5)
        };
        let bt = generate_bitext(&cfg).unwrap();
        let n = bt.text_a.len();
        let a = bt.text_a.tokens();
        let b = bt.text_b.tokens();
        for (p, tok) in b.iter().enumerate() {
            let lo = p.saturating_sub(3);
            let hi = (p + 3).min(n - 1);
            assert!((lo..=hi).any(|q| bt.truth.is_translation(&a[q], tok)));
        }
    }

    #[test]
    fn lexicon_is_bijective() {
        let bt = generate_bitext(&small(1)).unwrap();
        let mut targets: Vec<&String> = bt.truth.lexicon.values().collect();
        targets.sort();
        targets.dedup();
        assert_eq!(targets.len(), 50);
    }

    #[test]
    fn offsets_are_monotone_and_bounded() {
        for seed in 0..5 {
            let bt = generate_bitext(&small(seed)).unwrap();
            let o = &bt.truth.offsets;
            assert_eq!(bt.text_a.len(), 2_000);
            assert_eq!(o.len(), bt.text_a.len() + 1);
            assert!(o.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(*o.last().unwrap(), bt.text_b.len());
        }
    }

    #[test]
    fn shared_tokens_map_to_their_slot() {
        let bt = generate_bitext(&SynthConfig {
            local_jitter: 0,
            ..small(4)
        })
        .unwrap();
        for (p, tok) in bt.text_a.tokens().iter().enumerate() {
            if tok.starts_with('a') {
                let q = bt.truth.offset(p);
                assert!(bt.truth.is_translation(tok, &bt.text_b.tokens()[q]));
            }
        }
    }

    #[test]
    fn insertion_rate_inflates_length() {
        let mut ratios = Vec::new();
        for seed in 0..20 {
            let cfg = SynthConfig {
                vocab_size: 100,
                length_a: 20_000,
                insertion_rate_a: 0.0,
                insertion_rate_b: 0.1,
                block_size_mean: 50.0,
                seed,
                ..Default::default()
            };
            let bt = generate_bitext(&cfg).unwrap();
            ratios.push(bt.text_b.len() as f64 / bt.text_a.len() as f64);
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        assert!((mean - 1.1).abs() < 0.01, "mean ratio {mean}");
    }

    #[test]
    fn invalid_configs() {
        for cfg in [
            SynthConfig {
                vocab_size: 1,
                ..small(0)
            },
            SynthConfig {
                insertion_rate_a: 1.0,
                ..small(0)
            },
            SynthConfig {
                insertion_rate_b: -0.1,
                ..small(0)
            },
            SynthConfig {
                block_size_mean: 0.5,
                ..small(0)
            },
        ] {
            assert!(matches!(generate_bitext(&cfg), Err(Error::Config(_))));
        }
    }
}
