//! End-to-end run: band selection, signals, all-pairs matching in both
//! directions, combination, thresholding, dots and the traced path.

use serde::{Deserialize, Serialize};

use crate::anchor::{generate_dots, trace_alignment_path, AlignmentPath, AnchorDot, TraceOptions};
use crate::corpus::{select_frequency_band, FrequencyBand, TokenizedText};
use crate::dtw::{DtwOptions, FilterParams};
use crate::error::Result;
use crate::lexicon::{
    combine_bidirectional, threshold_lexicon, CombineMode, LexiconEntry, MatchOptions, ScoreTable,
};
use crate::signal::{build_signals, WordSignal};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub band: FrequencyBand,
    pub filter: FilterParams,
    pub dtw: DtwOptions,
    pub combine: CombineMode,
    pub top_k: Option<usize>,
    pub max_score: Option<u64>,
    pub trace: TraceOptions,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            band: FrequencyBand::default(),
            filter: FilterParams::default(),
            dtw: DtwOptions::default(),
            combine: CombineMode::MutualBest,
            top_k: Some(100),
            max_score: None,
            trace: TraceOptions::default(),
        }
    }
}

impl PipelineConfig {
    pub fn match_options(&self) -> MatchOptions {
        MatchOptions {
            filter: self.filter,
            dtw: self.dtw,
        }
    }
}

pub fn extract_signals(text: &TokenizedText, band: FrequencyBand) -> Vec<WordSignal> {
    build_signals(&select_frequency_band(text, band), text.len())
}

#[derive(Debug, Clone)]
pub struct MatchOutput {
    pub ab: Vec<LexiconEntry>,
    /// Sources are B words.
    pub ba: Vec<LexiconEntry>,
    /// Both directions combined under the configured mode, before thresholding.
    pub combined: Vec<LexiconEntry>,
    pub lexicon: Vec<LexiconEntry>,
}

pub fn match_signals(
    signals_a: &[WordSignal],
    signals_b: &[WordSignal],
    cfg: &PipelineConfig,
) -> MatchOutput {
    // DTW and the filters are symmetric, so one table serves both directions.
    let table = ScoreTable::compute(signals_a, signals_b, &cfg.match_options());
    let ab = table.best_for_rows(signals_a, signals_b);
    let ba = table.best_for_cols(signals_a, signals_b);
    let combined = combine_bidirectional(&ab, &ba, cfg.combine);
    let lexicon = threshold_lexicon(&combined, cfg.max_score, cfg.top_k);
    MatchOutput {
        ab,
        ba,
        combined,
        lexicon,
    }
}

pub fn align(
    lexicon: &[LexiconEntry],
    signals_a: &[WordSignal],
    signals_b: &[WordSignal],
    length_a: usize,
    length_b: usize,
    cfg: &PipelineConfig,
) -> Result<(Vec<AnchorDot>, AlignmentPath)> {
    let dots = generate_dots(lexicon, signals_a, signals_b, &cfg.dtw)?;
    let path = trace_alignment_path(&dots, length_a, length_b, &cfg.trace);
    Ok((dots, path))
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub signals_a: Vec<WordSignal>,
    pub signals_b: Vec<WordSignal>,
    pub matches: MatchOutput,
    pub dots: Vec<AnchorDot>,
    pub path: AlignmentPath,
}

pub fn run(
    text_a: &TokenizedText,
    text_b: &TokenizedText,
    cfg: &PipelineConfig,
) -> Result<PipelineOutput> {
    let signals_a = extract_signals(text_a, cfg.band);
    let signals_b = extract_signals(text_b, cfg.band);
    let matches = match_signals(&signals_a, &signals_b, cfg);
    let (dots, path) = align(
        &matches.lexicon,
        &signals_a,
        &signals_b,
        text_a.len(),
        text_b.len(),
        cfg,
    )?;
    Ok(PipelineOutput {
        signals_a,
        signals_b,
        matches,
        dots,
        path,
    })
}
