//! Brute-force reference implementations shared by the integration tests.

#![allow(dead_code)]

use dkvec_core::anchor::AnchorDot;
use dkvec_core::dtw::FilterReason;
use dkvec_core::signal::WordSignal;

/// Visits every monotone warp path from (0,0) to (n-1,m-1).
pub fn for_each_warp_path(n: usize, m: usize, f: &mut impl FnMut(&[(usize, usize)])) {
    fn go(
        path: &mut Vec<(usize, usize)>,
        n: usize,
        m: usize,
        f: &mut impl FnMut(&[(usize, usize)]),
    ) {
        let (i, j) = *path.last().unwrap();
        if (i, j) == (n - 1, m - 1) {
            f(path);
            return;
        }
        for (di, dj) in [(1, 1), (1, 0), (0, 1)] {
            if i + di < n && j + dj < m {
                path.push((i + di, j + dj));
                go(path, n, m, f);
                path.pop();
            }
        }
    }
    go(&mut vec![(0, 0)], n, m, f);
}

/// Minimum total |x_i - y_j| over all warp paths, by enumeration.
pub fn brute_dtw(x: &[u64], y: &[u64]) -> u64 {
    let mut best = u64::MAX;
    for_each_warp_path(x.len(), y.len(), &mut |p| {
        let c = p.iter().map(|&(i, j)| x[i].abs_diff(y[j])).sum();
        best = best.min(c);
    });
    best
}

/// Filter verdict computed directly from first positions and frequencies,
/// in exact rational arithmetic.
pub fn brute_filter(a: &WordSignal, b: &WordSignal) -> FilterReason {
    let (pa, la) = (a.positions[0] as u128, a.text_length as u128);
    let (pb, lb) = (b.positions[0] as u128, b.text_length as u128);
    // |pa/la - pb/lb| >= 1/2  <=>  2 |pa*lb - pb*la| >= la*lb
    if 2 * (pa * lb).abs_diff(pb * la) >= la * lb {
        return FilterReason::StartTooFar;
    }
    let (fa, fb) = (a.positions.len() - 1, b.positions.len() - 1);
    // min < max / 2  <=>  2 min < max
    if 2 * fa.min(fb) < fa.max(fb) {
        return FilterReason::FrequencyMismatch;
    }
    FilterReason::Ok
}

/// Best chain by exhaustive subset search: maximum total weight, then
/// minimum summed diagonal deviation. Returns (weight, deviation).
pub fn brute_chain(
    dots: &[AnchorDot],
    length_a: usize,
    length_b: usize,
    weight: impl Fn(&AnchorDot) -> f64,
) -> (f64, f64) {
    let dev =
        |d: &AnchorDot| (d.pos_a as f64 / length_a as f64 - d.pos_b as f64 / length_b as f64).abs();
    let mut sorted = dots.to_vec();
    sorted.sort_by_key(|d| (d.pos_a, d.pos_b));
    let mut best = (0.0_f64, 0.0_f64);
    for mask in 1u32..(1 << sorted.len()) {
        let chosen: Vec<&AnchorDot> = (0..sorted.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| &sorted[k])
            .collect();
        let ok = chosen
            .windows(2)
            .all(|w| w[0].pos_a < w[1].pos_a && w[0].pos_b <= w[1].pos_b);
        if !ok {
            continue;
        }
        let w: f64 = chosen.iter().map(|d| weight(d)).sum();
        let v: f64 = chosen.iter().map(|d| dev(d)).sum();
        if w > best.0 + 1e-12 || ((w - best.0).abs() <= 1e-12 && v < best.1 - 1e-12) {
            best = (w, v);
        }
    }
    best
}
