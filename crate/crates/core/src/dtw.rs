//! Dynamic Time Warping over recency vectors, plus the start-position and
//! frequency pre-filters applied before a pair is scored.
//!
//! The local continuity constraint allows steps (1,0), (0,1) and (1,1) only,
//! with cell cost `|x[i] - y[j]|`. Scores are raw accumulated costs: lower is a
//! closer match.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::WordSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterReason {
    Ok,
    StartTooFar,
    FrequencyMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterVerdict {
    pub passed: bool,
    pub reason: FilterReason,
}

impl FilterVerdict {
    fn from_reason(reason: FilterReason) -> Self {
        Self {
            passed: reason == FilterReason::Ok,
            reason,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterParams {
    /// Reject when relative first positions differ by at least this much.
    pub start_gap: f64,
    /// Reject when one recency vector is shorter than the other divided by this.
    pub freq_ratio: f64,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            start_gap: 0.5,
            freq_ratio: 2.0,
        }
    }
}

pub fn filter_pair(a: &WordSignal, b: &WordSignal, params: &FilterParams) -> FilterVerdict {
    // |pa/la - pb/lb| from one integer numerator, so the gap is correctly
    // rounded and the threshold comparison is exact for representable gaps.
    let num = (a.first_position() as u128 * b.text_length as u128)
        .abs_diff(b.first_position() as u128 * a.text_length as u128);
    let gap = num as f64 / (a.text_length as u128 * b.text_length as u128) as f64;
    if gap >= params.start_gap {
        return FilterVerdict::from_reason(FilterReason::StartTooFar);
    }
    let (la, lb) = (a.recency.len(), b.recency.len());
    let (short, long) = (la.min(lb) as f64, la.max(lb) as f64);
    if short < long / params.freq_ratio {
        return FilterVerdict::from_reason(FilterReason::FrequencyMismatch);
    }
    FilterVerdict::from_reason(FilterReason::Ok)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtwResult {
    pub score: u64,
    /// Index pairs from `(0, 0)` to `(x.len() - 1, y.len() - 1)`.
    pub path: Vec<(usize, usize)>,
}

impl DtwResult {
    pub fn path_length(&self) -> usize {
        self.path.len()
    }

    pub fn normalized_score(&self) -> f64 {
        self.score as f64 / self.path.len() as f64
    }
}

/// Optional global band. `None` searches the full trellis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtwOptions {
    pub band: Option<usize>,
}

#[inline]
fn cost(a: u64, b: u64) -> u64 {
    a.abs_diff(b)
}

/// Sakoe-Chiba style corridor around the line from (0,0) to (n-1,m-1):
/// `|j*(n-1) - i*(m-1)| <= width * max(n-1, m-1)`. A width of at least one
/// keeps the corridor connected for any slope.
#[derive(Clone, Copy)]
struct Corridor {
    n1: u64,
    m1: u64,
    width: u64,
}

impl Corridor {
    fn new(n: usize, m: usize, band: Option<usize>) -> Option<Self> {
        let w = band?;
        if n < 2 || m < 2 {
            return None;
        }
        Some(Self {
            n1: (n - 1) as u64,
            m1: (m - 1) as u64,
            width: (w as u64).max(1),
        })
    }

    fn allows(&self, i: usize, j: usize) -> bool {
        (i as u64 * self.m1).abs_diff(j as u64 * self.n1) <= self.width * self.n1.max(self.m1)
    }
}

fn check_nonempty(x: &[u64], y: &[u64]) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyVector {
            x: x.len(),
            y: y.len(),
        });
    }
    Ok(())
}

/// Minimal accumulated cost only, in O(min) memory.
pub fn dtw_score(x: &[u64], y: &[u64]) -> Result<u64> {
    dtw_score_with(x, y, &DtwOptions::default())
}

pub fn dtw_score_with(x: &[u64], y: &[u64], opts: &DtwOptions) -> Result<u64> {
    check_nonempty(x, y)?;
    let corridor = Corridor::new(x.len(), y.len(), opts.band);
    let allowed = |i: usize, j: usize| corridor.is_none_or(|c| c.allows(i, j));
    let m = y.len();
    let mut prev = vec![u64::MAX; m];
    let mut cur = vec![u64::MAX; m];
    for (i, &xi) in x.iter().enumerate() {
        for j in 0..m {
            if !allowed(i, j) {
                cur[j] = u64::MAX;
                continue;
            }
            let best = if i == 0 && j == 0 {
                0
            } else {
                let diag = if i > 0 && j > 0 {
                    prev[j - 1]
                } else {
                    u64::MAX
                };
                let right = if i > 0 { prev[j] } else { u64::MAX };
                let up = if j > 0 { cur[j - 1] } else { u64::MAX };
                diag.min(right).min(up)
            };
            cur[j] = if best == u64::MAX {
                u64::MAX
            } else {
                best + cost(xi, y[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[m - 1])
}

/// Full DTW with backtrace. Ties prefer the diagonal step, then (1,0), then (0,1).
pub fn dtw(x: &[u64], y: &[u64]) -> Result<DtwResult> {
    dtw_with(x, y, &DtwOptions::default())
}

pub fn dtw_with(x: &[u64], y: &[u64], opts: &DtwOptions) -> Result<DtwResult> {
    check_nonempty(x, y)?;
    let (n, m) = (x.len(), y.len());
    let corridor = Corridor::new(n, m, opts.band);
    let allowed = |i: usize, j: usize| corridor.is_none_or(|c| c.allows(i, j));
    let mut acc = vec![u64::MAX; n * m];
    let at = |i: usize, j: usize| i * m + j;
    for i in 0..n {
        for j in 0..m {
            if !allowed(i, j) {
                continue;
            }
            let best = if i == 0 && j == 0 {
                0
            } else {
                let diag = if i > 0 && j > 0 {
                    acc[at(i - 1, j - 1)]
                } else {
                    u64::MAX
                };
                let right = if i > 0 { acc[at(i - 1, j)] } else { u64::MAX };
                let up = if j > 0 { acc[at(i, j - 1)] } else { u64::MAX };
                diag.min(right).min(up)
            };
            if best != u64::MAX {
                acc[at(i, j)] = best + cost(x[i], y[j]);
            }
        }
    }

    let mut path = Vec::with_capacity(n + m - 1);
    let (mut i, mut j) = (n - 1, m - 1);
    path.push((i, j));
    while (i, j) != (0, 0) {
        let diag = if i > 0 && j > 0 {
            acc[at(i - 1, j - 1)]
        } else {
            u64::MAX
        };
        let right = if i > 0 { acc[at(i - 1, j)] } else { u64::MAX };
        let up = if j > 0 { acc[at(i, j - 1)] } else { u64::MAX };
        if diag <= right && diag <= up {
            i -= 1;
            j -= 1;
        } else if right <= up {
            i -= 1;
        } else {
            j -= 1;
        }
        path.push((i, j));
    }
    path.reverse();
    Ok(DtwResult {
        score: acc[at(n - 1, m - 1)],
        path,
    })
}

/// Sum of cell costs along `path`.
pub fn path_cost(x: &[u64], y: &[u64], path: &[(usize, usize)]) -> u64 {
    path.iter().map(|&(i, j)| cost(x[i], y[j])).sum()
}

/// Checks endpoints and that every step is (1,0), (0,1) or (1,1).
pub fn is_valid_warp_path(path: &[(usize, usize)], n: usize, m: usize) -> bool {
    if path.first() != Some(&(0, 0)) || path.last() != Some(&(n.wrapping_sub(1), m.wrapping_sub(1)))
    {
        return false;
    }
    path.windows(2).all(|w| {
        let (di, dj) = (w[1].0.wrapping_sub(w[0].0), w[1].1.wrapping_sub(w[0].1));
        matches!((di, dj), (1, 0) | (0, 1) | (1, 1))
    })
}
