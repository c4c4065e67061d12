//! `dkvec`: extract recency signals, match them into an anchor lexicon, trace
//! the alignment, and evaluate on synthetic bitexts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dkvec_core::anchor::{DotWeighting, TraceOptions};
use dkvec_core::corpus::{tokenize, FrequencyBand, TokenizeOptions, TokenizedText, TokenizerMode};
use dkvec_core::dtw::{dtw, DtwOptions, FilterParams};
use dkvec_core::eval::{evaluate, EvalConfig};
use dkvec_core::io;
use dkvec_core::kvec::{build_kvecs, kvec_lexicon};
use dkvec_core::lexicon::{CombineMode, LexiconEntry};
use dkvec_core::pipeline::{self, PipelineConfig};
use dkvec_core::signal::{plot_tsv, WordSignal};
use dkvec_core::synth::{generate_bitext, to_lines, SynthConfig};

const SIGNALS_A: &str = "signals_a.tsv";
const SIGNALS_B: &str = "signals_b.tsv";

/// Exit status for a run that succeeded but produced nothing.
const EXIT_EMPTY: u8 = 2;

#[derive(Parser)]
#[command(
    name = "dkvec",
    version,
    about = "Align noisy parallel texts through recency-signal anchors"
)]
struct Cli {
    /// Worker threads for pair scoring (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tokenize both texts and write per-side signal stores.
    Extract(ExtractArgs),
    /// Score signal pairs with DTW and write the lexicons.
    Match(MatchArgs),
    /// Generate anchor dots from the lexicon and trace the alignment path.
    Align(AlignArgs),
    /// Print one word's (position, interval) plot data.
    Signal(SignalArgs),
    /// Build the K-vec baseline lexicon for two texts.
    Kvec(KvecArgs),
    /// Write a synthetic bitext and its ground truth.
    Synth(SynthArgs),
    /// Generate a synthetic bitext, run everything, and report metrics as JSON.
    Eval(EvalArgs),
}

#[derive(Args)]
struct OutDir {
    /// Directory for all artifacts.
    #[arg(long, env = "DKVEC_OUT_DIR", default_value = "dkvec-out")]
    out: PathBuf,
}

#[derive(Args)]
struct TextArgs {
    #[arg(long)]
    text_a: PathBuf,
    #[arg(long)]
    text_b: PathBuf,
    /// whitespace | lines | chars
    #[arg(long, default_value = "whitespace")]
    mode_a: TokenizerMode,
    #[arg(long, default_value = "whitespace")]
    mode_b: TokenizerMode,
    #[arg(long)]
    case_fold: bool,
}

#[derive(Args, Clone, Copy)]
struct BandArgs {
    #[arg(long, default_value_t = 10)]
    min_freq: usize,
    #[arg(long, default_value_t = 300)]
    max_freq: usize,
}

impl BandArgs {
    fn band(&self) -> Result<FrequencyBand> {
        Ok(FrequencyBand::new(self.min_freq, self.max_freq)?)
    }
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    texts: TextArgs,
    #[command(flatten)]
    band: BandArgs,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Args, Clone)]
struct MatchParams {
    /// Relative first-occurrence gap at which a pair is rejected.
    #[arg(long, default_value_t = 0.5)]
    start_gap: f64,
    /// Frequency ratio at which a pair is rejected.
    #[arg(long, default_value_t = 2.0)]
    freq_ratio: f64,
    /// Optional DTW corridor half-width.
    #[arg(long)]
    dtw_band: Option<usize>,
    #[arg(long, default_value_t = 100)]
    top_k: usize,
    #[arg(long)]
    max_score: Option<u64>,
    /// mutual | union
    #[arg(long, default_value = "mutual")]
    combine: CombineMode,
}

#[derive(Args, Clone, Copy)]
struct TraceParams {
    /// Weight dots by 1/(1+score) instead of uniformly.
    #[arg(long)]
    inverse_score_weights: bool,
    /// Drop dots further than this from the diagonal (relative units) before tracing.
    #[arg(long)]
    corridor: Option<f64>,
}

impl TraceParams {
    fn options(&self) -> TraceOptions {
        TraceOptions {
            weighting: if self.inverse_score_weights {
                DotWeighting::InverseScore
            } else {
                DotWeighting::Uniform
            },
            corridor: self.corridor,
        }
    }
}

fn pipeline_config(
    band: FrequencyBand,
    m: &MatchParams,
    t: &TraceParams,
) -> Result<PipelineConfig> {
    if !(m.start_gap > 0.0 && m.freq_ratio > 0.0) {
        bail!("thresholds must be positive");
    }
    Ok(PipelineConfig {
        band,
        filter: FilterParams {
            start_gap: m.start_gap,
            freq_ratio: m.freq_ratio,
        },
        dtw: DtwOptions { band: m.dtw_band },
        combine: m.combine,
        top_k: Some(m.top_k),
        max_score: m.max_score,
        trace: t.options(),
    })
}

#[derive(Args)]
struct MatchArgs {
    #[command(flatten)]
    params: MatchParams,
    /// Add a path-length normalized score column.
    #[arg(long)]
    normalized: bool,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Args)]
struct AlignArgs {
    #[command(flatten)]
    trace: TraceParams,
    #[arg(long)]
    dtw_band: Option<usize>,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Args)]
struct SignalArgs {
    /// Signal store to read.
    #[arg(long)]
    store: PathBuf,
    #[arg(long)]
    word: String,
    /// Also render an SVG, overlaying `--compare-word` from `--compare-store` if given.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, requires = "compare_word")]
    compare_store: Option<PathBuf>,
    #[arg(long, requires = "compare_store")]
    compare_word: Option<String>,
}

#[derive(Args)]
struct KvecArgs {
    #[command(flatten)]
    texts: TextArgs,
    #[command(flatten)]
    band: BandArgs,
    #[arg(long, default_value_t = 100)]
    segments: usize,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Args, Clone)]
struct SynthParams {
    /// Flat key=value file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    vocab_size: Option<usize>,
    #[arg(long)]
    length_a: Option<usize>,
    #[arg(long)]
    zipf_exponent: Option<f64>,
    #[arg(long)]
    insertion_rate_a: Option<f64>,
    #[arg(long)]
    insertion_rate_b: Option<f64>,
    #[arg(long)]
    block_size_mean: Option<f64>,
    #[arg(long)]
    local_jitter: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl SynthParams {
    fn config(&self) -> Result<SynthConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => SynthConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { cfg.$f = v; })* };
        }
        set!(
            vocab_size,
            length_a,
            zipf_exponent,
            insertion_rate_a,
            insertion_rate_b,
            block_size_mean,
            local_jitter,
            seed
        );
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    synth: SynthParams,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    synth: SynthParams,
    #[command(flatten)]
    band: BandArgs,
    #[command(flatten)]
    params: MatchParams,
    #[command(flatten)]
    trace: TraceParams,
    #[arg(long, default_value_t = 40)]
    at_k: usize,
    #[arg(long, default_value_t = 100)]
    kvec_segments: usize,
    /// Also write the report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Writes to stdout; a reader that closed the pipe early (`| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn read_text(path: &Path, mode: TokenizerMode, case_fold: bool) -> Result<TokenizedText> {
    let raw = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    tokenize(&raw, TokenizeOptions { mode, case_fold })
        .with_context(|| format!("tokenizing {}", path.display()))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn read_store(path: &Path) -> Result<Store> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    io::read_signal_store(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Text length and signals, as read from one store file.
type Store = (usize, Vec<WordSignal>);

fn read_stores(dir: &Path) -> Result<(Store, Store)> {
    Ok((
        read_store(&dir.join(SIGNALS_A))?,
        read_store(&dir.join(SIGNALS_B))?,
    ))
}

fn cmd_extract(args: &ExtractArgs) -> Result<ExitCode> {
    let band = args.band.band()?;
    let t = &args.texts;
    let a = read_text(&t.text_a, t.mode_a, t.case_fold)?;
    let b = read_text(&t.text_b, t.mode_b, t.case_fold)?;
    let sa = pipeline::extract_signals(&a, band);
    let sb = pipeline::extract_signals(&b, band);
    fs::create_dir_all(&args.out.out)?;
    write(
        &args.out.out,
        SIGNALS_A,
        &io::write_signal_store(&sa, a.len()),
    )?;
    write(
        &args.out.out,
        SIGNALS_B,
        &io::write_signal_store(&sb, b.len()),
    )?;
    eprintln!(
        "text A: {} tokens, {} signals; text B: {} tokens, {} signals",
        a.len(),
        sa.len(),
        b.len(),
        sb.len()
    );
    if sa.is_empty() || sb.is_empty() {
        eprintln!(
            "warning: no words in frequency band [{}, {}] on at least one side",
            band.min(),
            band.max()
        );
        return Ok(ExitCode::from(EXIT_EMPTY));
    }
    Ok(ExitCode::SUCCESS)
}

fn normalized_scores(
    entries: &[LexiconEntry],
    source: &[WordSignal],
    target: &[WordSignal],
) -> Result<Vec<f64>> {
    let find = |set: &[WordSignal], w: &str| set.iter().position(|s| s.word == w);
    entries
        .iter()
        .map(|e| {
            let (Some(i), Some(j)) = (find(source, &e.source), find(target, &e.target)) else {
                bail!(
                    "lexicon word missing from signal store: {} / {}",
                    e.source,
                    e.target
                );
            };
            Ok(dtw(&source[i].recency, &target[j].recency)?.normalized_score())
        })
        .collect()
}

fn cmd_match(args: &MatchArgs) -> Result<ExitCode> {
    let ((_, sa), (_, sb)) = read_stores(&args.out.out)?;
    if sa.is_empty() || sb.is_empty() {
        eprintln!("signal stores are empty; nothing to match");
        return Ok(ExitCode::from(EXIT_EMPTY));
    }
    let cfg = pipeline_config(
        FrequencyBand::default(),
        &args.params,
        &TraceParams {
            inverse_score_weights: false,
            corridor: None,
        },
    )?;
    let m = pipeline::match_signals(&sa, &sb, &cfg);
    let norm = |entries: &[LexiconEntry],
                src: &[WordSignal],
                tgt: &[WordSignal]|
     -> Result<Option<Vec<f64>>> {
        args.normalized
            .then(|| normalized_scores(entries, src, tgt))
            .transpose()
    };
    let dir = &args.out.out;
    write(
        dir,
        "lexicon_ab.tsv",
        &io::write_lexicon(&m.ab, norm(&m.ab, &sa, &sb)?.as_deref()),
    )?;
    write(
        dir,
        "lexicon_ba.tsv",
        &io::write_lexicon(&m.ba, norm(&m.ba, &sb, &sa)?.as_deref()),
    )?;
    write(
        dir,
        "lexicon.tsv",
        &io::write_lexicon(&m.lexicon, norm(&m.lexicon, &sa, &sb)?.as_deref()),
    )?;
    eprintln!(
        "{} A->B, {} B->A, {} combined, {} kept",
        m.ab.len(),
        m.ba.len(),
        m.combined.len(),
        m.lexicon.len()
    );
    Ok(if m.lexicon.is_empty() {
        ExitCode::from(EXIT_EMPTY)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_align(args: &AlignArgs) -> Result<ExitCode> {
    let dir = &args.out.out;
    let ((la, sa), (lb, sb)) = read_stores(dir)?;
    let lex_path = dir.join("lexicon.tsv");
    let lexicon = io::read_lexicon(
        &fs::read_to_string(&lex_path)
            .with_context(|| format!("reading {}", lex_path.display()))?,
    )?;
    let cfg = PipelineConfig {
        dtw: DtwOptions {
            band: args.dtw_band,
        },
        trace: args.trace.options(),
        ..Default::default()
    };
    let (dots, path) = pipeline::align(&lexicon, &sa, &sb, la, lb, &cfg)?;
    write(dir, "dots.tsv", &io::write_dots(&dots))?;
    write(dir, "path.tsv", &io::write_path(&path))?;
    write(
        dir,
        "alignment.svg",
        &io::render_alignment_svg(&dots, &path),
    )?;
    eprintln!(
        "{} dots, {} anchors on the path",
        dots.len(),
        path.anchors.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_signal(args: &SignalArgs) -> Result<ExitCode> {
    let (_, signals) = read_store(&args.store)?;
    let pick = |set: Vec<WordSignal>, word: &str, store: &Path| -> Result<WordSignal> {
        set.into_iter()
            .find(|s| s.word == word)
            .ok_or_else(|| anyhow::anyhow!("`{word}` not in {}", store.display()))
    };
    let main = pick(signals, &args.word, &args.store)?;
    emit(&plot_tsv(&main))?;
    if let Some(svg) = &args.svg {
        let mut shown = vec![main.clone()];
        if let (Some(store), Some(word)) = (&args.compare_store, &args.compare_word) {
            shown.push(pick(read_store(store)?.1, word, store)?);
        }
        let refs: Vec<&WordSignal> = shown.iter().collect();
        fs::write(svg, io::render_signals_svg(&refs))
            .with_context(|| format!("writing {}", svg.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_kvec(args: &KvecArgs) -> Result<ExitCode> {
    let band = args.band.band()?;
    let t = &args.texts;
    let a = read_text(&t.text_a, t.mode_a, t.case_fold)?;
    let b = read_text(&t.text_b, t.mode_b, t.case_fold)?;
    let pairs = kvec_lexicon(
        &build_kvecs(&a, args.segments, band)?,
        &build_kvecs(&b, args.segments, band)?,
    );
    fs::create_dir_all(&args.out.out)?;
    write(
        &args.out.out,
        "kvec_lexicon.tsv",
        &io::write_kvec_lexicon(&pairs),
    )?;
    Ok(if pairs.is_empty() {
        ExitCode::from(EXIT_EMPTY)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_synth(args: &SynthArgs) -> Result<ExitCode> {
    let cfg = args.synth.config()?;
    let bt = generate_bitext(&cfg)?;
    let dir = &args.out.out;
    fs::create_dir_all(dir)?;
    write(dir, "corpus_a.txt", &to_lines(&bt.text_a))?;
    write(dir, "corpus_b.txt", &to_lines(&bt.text_b))?;
    let mut lex = String::from("word_a\tword_b\n");
    for (a, b) in &bt.truth.lexicon {
        lex.push_str(&format!("{a}\t{b}\n"));
    }
    write(dir, "truth_lexicon.tsv", &lex)?;
    let mut offsets = String::from("pos_a\tpos_b\n");
    for (p, q) in bt.truth.offsets.iter().enumerate() {
        offsets.push_str(&format!("{p}\t{q}\n"));
    }
    write(dir, "truth_offsets.tsv", &offsets)?;
    eprintln!(
        "text A: {} tokens; text B: {} tokens",
        bt.text_a.len(),
        bt.text_b.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(args: &EvalArgs) -> Result<ExitCode> {
    let cfg = EvalConfig {
        synth: args.synth.config()?,
        pipeline: pipeline_config(args.band.band()?, &args.params, &args.trace)?,
        at_k: args.at_k,
        kvec_segments: args.kvec_segments,
    };
    let report = evaluate(&cfg)?;
    let json = serde_json::to_string_pretty(&report)?;
    emit(&format!("{json}\n"))?;
    if let Some(path) = &args.report {
        fs::write(path, format!("{json}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Extract(a) => cmd_extract(a),
        Command::Match(a) => cmd_match(a),
        Command::Align(a) => cmd_align(a),
        Command::Signal(a) => cmd_signal(a),
        Command::Kvec(a) => cmd_kvec(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Eval(a) => cmd_eval(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let result = match pool.build() {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => Err(e.into()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
