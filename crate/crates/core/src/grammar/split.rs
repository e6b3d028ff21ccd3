use alloc::vec::Vec;

use thiserror::Error;

/// Relative tolerance on the absolute-sum checks.
pub const SPLIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitSize {
    Absolute(f64),
    /// Weight of a share of the residual.
    Relative(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SplitError {
    #[error("split length must be positive and finite, got {0}")]
    NonPositiveLength(f64),
    #[error("split needs at least one entry")]
    EmptySpec,
    #[error("split entry {index} is invalid: {value}")]
    InvalidEntry { index: usize, value: f64 },
    #[error("absolute sizes sum to {absolute} m, more than the {length} m available")]
    Overflow { absolute: f64, length: f64 },
    #[error("absolute sizes sum to {absolute} m of {length} m and there is no relative entry to take the rest")]
    Underflow { absolute: f64, length: f64 },
}

fn fold_sum(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |a, &x| a + x)
}

/// Largest move, in ulps, applied to an entry other than the last.
pub const NUDGE_ULPS: i64 = 4;

/// Sizes along a scope of length `len`. Absolute entries are kept as given;
/// the residual is shared among relative entries by weight. The last entry
/// absorbs rounding so that the left-to-right sum of the output equals
/// `len` exactly. When no value of the last entry reaches `len`, one earlier
/// entry (relative ones first) moves by at most [`NUDGE_ULPS`] ulps.
pub fn apply_split(len: f64, spec: &[SplitSize]) -> Result<Vec<f64>, SplitError> {
    if !(len > 0.0) || !len.is_finite() {
        return Err(SplitError::NonPositiveLength(len));
    }
    if spec.is_empty() {
        return Err(SplitError::EmptySpec);
    }
    let mut absolute = 0.0;
    let mut weights = 0.0;
    for (index, s) in spec.iter().enumerate() {
        match *s {
            SplitSize::Absolute(v) if v >= 0.0 && v.is_finite() => absolute += v,
            SplitSize::Relative(w) if w > 0.0 && w.is_finite() => weights += w,
            SplitSize::Absolute(value) | SplitSize::Relative(value) => {
                return Err(SplitError::InvalidEntry { index, value })
            }
        }
    }
    if absolute > len * (1.0 + SPLIT_TOLERANCE) {
        return Err(SplitError::Overflow { absolute, length: len });
    }
    if weights == 0.0 && absolute < len * (1.0 - SPLIT_TOLERANCE) {
        return Err(SplitError::Underflow { absolute, length: len });
    }
    let residual = (len - absolute).max(0.0);
    let mut out: Vec<f64> = spec
        .iter()
        .map(|s| match *s {
            SplitSize::Absolute(v) => v,
            SplitSize::Relative(w) => residual * (w / weights),
        })
        .collect();
    settle(&mut out, spec, len);
    Ok(out)
}

fn settle(out: &mut [f64], spec: &[SplitSize], len: f64) {
    let n = out.len();
    out[n - 1] = absorb(fold_sum(&out[..n - 1]), len);
    if fold_sum(out) == len {
        return;
    }
    let relative = |i: &usize| matches!(spec[*i], SplitSize::Relative(_));
    let order = (0..n - 1).rev().filter(relative).chain((0..n - 1).rev().filter(|i| !relative(i)));
    for i in order {
        let orig = out[i];
        for k in (1..=NUDGE_ULPS).flat_map(|k| [k, -k]) {
            let cand = unkey(key(orig) + k);
            if cand < 0.0 {
                continue;
            }
            out[i] = cand;
            let head = fold_sum(&out[..n - 1]);
            let last = absorb(head, len);
            if head + last == len {
                out[n - 1] = last;
                return;
            }
        }
        out[i] = orig;
    }
    out[n - 1] = absorb(fold_sum(&out[..n - 1]), len);
}

/// A value `x` making `head + x` as close to `len` as floating point allows:
/// equal whenever some `x` reaches it, otherwise one ulp away (when `head`
/// sits half an ulp off the grid of `len`, round-half-even skips `len`).
fn absorb(head: f64, len: f64) -> f64 {
    let x0 = len - head;
    if head + x0 == len {
        return x0;
    }
    // f(x) = head + x is monotone; bisect over the ordered bit patterns of
    // a bracket a few ulps wide for the smallest x with f(x) >= len.
    let ulp = len.next_up() - len;
    let (mut lo, mut hi) = (key(x0 - 4.0 * ulp), key(x0 + 4.0 * ulp));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if head + unkey(mid) >= len {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let below = unkey(lo - 1);
    let at = unkey(lo);
    if head + at - len <= len - (head + below) {
        at
    } else {
        below
    }
}

/// Order-preserving map from floats to integers; its own inverse.
fn key(x: f64) -> i64 {
    flip(x.to_bits() as i64)
}

fn unkey(k: i64) -> f64 {
    f64::from_bits(flip(k) as u64)
}

fn flip(b: i64) -> i64 {
    b ^ (((b >> 63) as u64) >> 1) as i64
}
