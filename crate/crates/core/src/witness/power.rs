//! p-power detection.
//!
//! Two scans: [`leftmost_power`] walks each candidate period once and keeps
//! a running count of letters that agree with the letter one period ahead;
//! [`leftmost_power_naive`] compares every candidate occurrence letter by
//! letter and serves as the reference.

/// Leftmost p-power in `s`, shortest base among the leftmost.
///
/// Returns `(start, base_len)` with a 0-based start. A factor of length
/// `p * l` is a p-power iff it has period `l`, i.e. `s[k] == s[k + l]` for
/// the `(p - 1) * l` positions `k` at its front.
pub(crate) fn leftmost_power(s: &[u8], p: usize) -> Option<(usize, usize)> {
    let n = s.len();
    let mut best: Option<(usize, usize)> = None;
    for l in 1..=n / p {
        let need = (p - 1) * l;
        let mut run = 0;
        // a run completing at k starts at k + 1 - need; only starts before the best matter
        let limit = best.map_or(n - l, |(b, _)| (n - l).min(b + need - 1));
        for k in 0..limit {
            if s[k] == s[k + l] {
                run += 1;
                if run >= need {
                    best = Some((k + 1 - need, l));
                    break;
                }
            } else {
                run = 0;
            }
        }
    }
    best
}

pub(crate) fn leftmost_power_naive(s: &[u8], p: usize) -> Option<(usize, usize)> {
    let n = s.len();
    for i in 0..n {
        for l in 1..=(n - i) / p {
            let base = &s[i..i + l];
            if (1..p).all(|r| &s[i + r * l..i + (r + 1) * l] == base) {
                return Some((i, l));
            }
        }
    }
    None
}

/// Shortest base of a p-power that is a suffix of `s`.
pub(crate) fn power_suffix(s: &[u8], p: usize) -> Option<usize> {
    let n = s.len();
    (1..=n / p).find(|&l| {
        let tail = &s[n - p * l..];
        (0..tail.len() - l).all(|k| tail[k] == tail[k + l])
    })
}
