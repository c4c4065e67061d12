//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain strings/numbers and returns a JSON string, so the
//! page needs no generated TypeScript glue beyond `wasm-bindgen --target web`.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use dkvec_core::anchor::AnchorDot;
use dkvec_core::corpus::{tokenize, TokenizeOptions, TokenizerMode};
use dkvec_core::dtw::{dtw, filter_pair, FilterParams, FilterReason};
use dkvec_core::eval::{score_alignment, score_lexicon};
use dkvec_core::pipeline::{self, PipelineConfig};
use dkvec_core::signal::{build_signal, plot_rows};
use dkvec_core::synth::{generate_bitext, SynthConfig};

#[derive(Serialize)]
struct SignalCurve {
    word: String,
    text_length: usize,
    frequency: usize,
    points: Vec<(usize, u64)>,
}

#[derive(Serialize)]
struct SignalComparison {
    a: SignalCurve,
    b: SignalCurve,
    filter: FilterReason,
    score: u64,
    normalized_score: f64,
}

/// Recency curves of `word_a` in `text_a` and `word_b` in `text_b`, with their DTW score.
pub fn compare_signals_json(
    text_a: &str,
    text_b: &str,
    word_a: &str,
    word_b: &str,
    mode_a: &str,
    mode_b: &str,
) -> Result<String, String> {
    let side = |text: &str, word: &str, mode: &str| -> Result<_, String> {
        let mode: TokenizerMode = mode.parse().map_err(|e| format!("{e}"))?;
        let t = tokenize(text.as_bytes(), TokenizeOptions::new(mode)).map_err(|e| e.to_string())?;
        let rec = t
            .record(word)
            .ok_or_else(|| format!("`{word}` does not occur"))?;
        build_signal(&rec, t.len()).map_err(|e| e.to_string())
    };
    let sa = side(text_a, word_a, mode_a)?;
    let sb = side(text_b, word_b, mode_b)?;
    let warp = dtw(&sa.recency, &sb.recency).map_err(|e| e.to_string())?;
    let curve = |s: &dkvec_core::signal::WordSignal| SignalCurve {
        word: s.word.clone(),
        text_length: s.text_length,
        frequency: s.frequency(),
        points: plot_rows(s),
    };
    to_json(&SignalComparison {
        a: curve(&sa),
        b: curve(&sb),
        filter: filter_pair(&sa, &sb, &FilterParams::default()).reason,
        score: warp.score,
        normalized_score: warp.normalized_score(),
    })
}

#[derive(Serialize)]
struct Trellis {
    x: Vec<u64>,
    y: Vec<u64>,
    /// `cost[i][j] = |x[i] - y[j]|`
    cost: Vec<Vec<u64>>,
    path: Vec<(usize, usize)>,
    score: u64,
}

fn parse_vector(s: &str) -> Result<Vec<u64>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| format!("not a non-negative integer: `{t}`"))
        })
        .collect()
}

/// Full DTW trellis for two comma- or space-separated integer vectors.
pub fn dtw_trellis_json(x: &str, y: &str) -> Result<String, String> {
    let (x, y) = (parse_vector(x)?, parse_vector(y)?);
    if x.len() * y.len() > 250_000 {
        return Err("trellis too large to display".into());
    }
    let r = dtw(&x, &y).map_err(|e| e.to_string())?;
    let cost = x
        .iter()
        .map(|&a| y.iter().map(|&b| a.abs_diff(b)).collect())
        .collect();
    to_json(&Trellis {
        x,
        y,
        cost,
        path: r.path,
        score: r.score,
    })
}

#[derive(Serialize)]
struct PairRow {
    source: String,
    target: String,
    score: u64,
    correct: bool,
}

#[derive(Serialize)]
struct AlignmentDemo {
    length_a: usize,
    length_b: usize,
    lexicon: Vec<PairRow>,
    precision_at_40: f64,
    dots: Vec<(usize, usize)>,
    path: Vec<(usize, usize)>,
    truth: Vec<(usize, usize)>,
    mean_abs_error: f64,
}

/// Generates a synthetic bitext and runs the whole pipeline on it.
pub fn synthetic_alignment_json(
    seed: u64,
    length_a: usize,
    insertion_rate: f64,
    block_size_mean: f64,
    jitter: usize,
    top_k: usize,
) -> Result<String, String> {
    let cfg = SynthConfig {
        length_a,
        insertion_rate_a: insertion_rate,
        insertion_rate_b: insertion_rate,
        block_size_mean,
        local_jitter: jitter,
        seed,
        ..SynthConfig::default()
    };
    let bt = generate_bitext(&cfg).map_err(|e| e.to_string())?;
    let pcfg = PipelineConfig {
        top_k: Some(top_k),
        ..PipelineConfig::default()
    };
    let out = pipeline::run(&bt.text_a, &bt.text_b, &pcfg).map_err(|e| e.to_string())?;
    let lexicon = &out.matches.lexicon;
    let pairs = |dots: &[AnchorDot]| dots.iter().map(|d| (d.pos_a, d.pos_b)).collect();
    // ~400 points is plenty for the truth curve
    let step = (bt.text_a.len() / 400).max(1);
    to_json(&AlignmentDemo {
        length_a: bt.text_a.len(),
        length_b: bt.text_b.len(),
        lexicon: lexicon
            .iter()
            .map(|e| PairRow {
                source: e.source.clone(),
                target: e.target.clone(),
                score: e.score,
                correct: bt.truth.is_translation(&e.source, &e.target),
            })
            .collect(),
        precision_at_40: score_lexicon(lexicon, &bt.truth, 40).map_err(|e| e.to_string())?,
        dots: pairs(&out.dots),
        path: pairs(&out.path.anchors),
        truth: (0..=bt.text_a.len())
            .step_by(step)
            .map(|p| (p, bt.truth.offset(p)))
            .collect(),
        mean_abs_error: score_alignment(&out.path, &bt.truth),
    })
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn js<T>(r: Result<T, String>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = compareSignals)]
pub fn compare_signals(
    text_a: &str,
    text_b: &str,
    word_a: &str,
    word_b: &str,
    mode_a: &str,
    mode_b: &str,
) -> Result<String, JsValue> {
    js(compare_signals_json(
        text_a, text_b, word_a, word_b, mode_a, mode_b,
    ))
}

#[wasm_bindgen(js_name = dtwTrellis)]
pub fn dtw_trellis(x: &str, y: &str) -> Result<String, JsValue> {
    js(dtw_trellis_json(x, y))
}

#[wasm_bindgen(js_name = syntheticAlignment)]
pub fn synthetic_alignment(
    seed: u32,
    length_a: u32,
    insertion_rate: f64,
    block_size_mean: f64,
    jitter: u32,
    top_k: u32,
) -> Result<String, JsValue> {
    js(synthetic_alignment_json(
        u64::from(seed),
        length_a as usize,
        insertion_rate,
        block_size_mean,
        jitter as usize,
        top_k as usize,
    ))
}
