//! Aligning noisy parallel texts without sentence boundaries.
//!
//! Each word in a frequency band becomes a recency signal: the gaps between
//! its successive occurrences. Signals from the two languages are compared
//! with Dynamic Time Warping, and the closest mutually agreeing pairs form a
//! small anchor lexicon. The occurrences of those anchor words, paired along
//! their warp paths, give a dot plot through which a monotone alignment path
//! is traced.
//!
//! ```
//! use dkvec_core::{corpus, pipeline};
//!
//! let a = corpus::tokenize(b"x y x z x y x", Default::default()).unwrap();
//! let b = corpus::tokenize(b"p q p r p q p", Default::default()).unwrap();
//! let cfg = pipeline::PipelineConfig {
//!     band: corpus::FrequencyBand::new(2, 10).unwrap(),
//!     ..Default::default()
//! };
//! let out = pipeline::run(&a, &b, &cfg).unwrap();
//! assert_eq!(out.matches.lexicon[0].source, "x");
//! assert_eq!(out.matches.lexicon[0].target, "p");
//! assert_eq!(out.matches.lexicon[0].score, 0);
//! ```

pub mod anchor;
pub mod corpus;
pub mod dtw;
pub mod error;
pub mod eval;
pub mod io;
pub mod kvec;
pub mod lexicon;
pub mod pipeline;
pub mod signal;
pub mod synth;

pub use error::{Error, Result};
