//! One side of a bitext: the token sequence and a per-word index of where
//! each word occurs.
//!
//! Positions are 0-based token offsets. CJK text is expected either
//! pre-segmented one token per line ([`TokenizerMode::Lines`]) or split into
//! single characters ([`TokenizerMode::Chars`]).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenizerMode {
    /// Split on Unicode whitespace.
    #[default]
    Whitespace,
    /// One token per line; surrounding whitespace is trimmed and blank lines skipped.
    Lines,
    /// Every non-whitespace character is its own token.
    Chars,
}

impl FromStr for TokenizerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "whitespace" | "ws" => Ok(Self::Whitespace),
            "lines" | "line" => Ok(Self::Lines),
            "chars" | "char" => Ok(Self::Chars),
            other => Err(Error::Config(format!("unknown tokenizer mode `{other}`"))),
        }
    }
}

impl fmt::Display for TokenizerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Whitespace => "whitespace",
            Self::Lines => "lines",
            Self::Chars => "chars",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TokenizeOptions {
    pub mode: TokenizerMode,
    pub case_fold: bool,
}

impl TokenizeOptions {
    pub fn new(mode: TokenizerMode) -> Self {
        Self {
            mode,
            case_fold: false,
        }
    }
}

/// A tokenized text with its word → positions index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedText {
    tokens: Vec<String>,
    positions_by_word: BTreeMap<String, Vec<usize>>,
}

impl TokenizedText {
    /// Builds the index over an already tokenized sequence.
    pub fn from_tokens(tokens: Vec<String>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut positions_by_word: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (pos, tok) in tokens.iter().enumerate() {
            debug_assert!(!tok.is_empty());
            match positions_by_word.get_mut(tok.as_str()) {
                Some(list) => list.push(pos),
                None => {
                    positions_by_word.insert(tok.clone(), vec![pos]);
                }
            }
        }
        Ok(Self {
            tokens,
            positions_by_word,
        })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Total token count; the upper bound on positions.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn positions_by_word(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.positions_by_word
    }

    pub fn positions(&self, word: &str) -> Option<&[usize]> {
        self.positions_by_word.get(word).map(Vec::as_slice)
    }

    pub fn frequency(&self, word: &str) -> usize {
        self.positions(word).map_or(0, <[usize]>::len)
    }

    pub fn vocabulary_size(&self) -> usize {
        self.positions_by_word.len()
    }

    pub fn record(&self, word: &str) -> Option<WordOccurrenceRecord> {
        self.positions_by_word
            .get_key_value(word)
            .map(|(w, p)| WordOccurrenceRecord::new(w.clone(), p.clone()))
    }
}

/// Tokenizes raw bytes, which must be UTF-8.
pub fn tokenize(raw: &[u8], opts: TokenizeOptions) -> Result<TokenizedText> {
    let text = std::str::from_utf8(raw).map_err(|e| Error::Decode {
        offset: e.valid_up_to(),
    })?;
    let fold = |s: &str| {
        if opts.case_fold {
            s.to_lowercase()
        } else {
            s.to_owned()
        }
    };
    let tokens: Vec<String> = match opts.mode {
        TokenizerMode::Whitespace => text.split_whitespace().map(fold).collect(),
        TokenizerMode::Lines => text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(fold)
            .collect(),
        TokenizerMode::Chars => {
            let mut buf = [0u8; 4];
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| fold(c.encode_utf8(&mut buf)))
                .collect()
        }
    };
    TokenizedText::from_tokens(tokens)
}

/// A word together with every position it occupies in its text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordOccurrenceRecord {
    pub word: String,
    pub positions: Vec<usize>,
}

impl WordOccurrenceRecord {
    pub fn new(word: impl Into<String>, positions: Vec<usize>) -> Self {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        Self {
            word: word.into(),
            positions,
        }
    }

    pub fn frequency(&self) -> usize {
        self.positions.len()
    }
}

/// Inclusive frequency range `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyBand {
    min: usize,
    max: usize,
}

impl FrequencyBand {
    pub fn new(min: usize, max: usize) -> Result<Self> {
        if min == 0 || min > max {
            return Err(Error::InvalidBand { min, max });
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> usize {
        self.min
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn contains(&self, freq: usize) -> bool {
        (self.min..=self.max).contains(&freq)
    }
}

impl Default for FrequencyBand {
    fn default() -> Self {
        Self { min: 10, max: 300 }
    }
}

/// Words whose frequency lies in `band`, most frequent first, ties by word.
pub fn select_frequency_band(
    text: &TokenizedText,
    band: FrequencyBand,
) -> Vec<WordOccurrenceRecord> {
    let mut out: Vec<WordOccurrenceRecord> = text
        .positions_by_word
        .iter()
        .filter(|(_, p)| band.contains(p.len()))
        .map(|(w, p)| WordOccurrenceRecord::new(w.clone(), p.clone()))
        .collect();
    out.sort_by(|a, b| {
        b.frequency()
            .cmp(&a.frequency())
            .then_with(|| a.word.cmp(&b.word))
    });
    out
}
