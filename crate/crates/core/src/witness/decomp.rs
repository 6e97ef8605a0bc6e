//! q-decomposition checks and split search over raw rank slices.

use std::cmp::Ordering;

use itertools::Itertools;

/// Split search ran past its node budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct OverBudget;

/// Node counter shared across one search.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SplitCounter {
    pub examined: u64,
    pub limit: u64,
}

impl SplitCounter {
    pub fn new(limit: u64) -> Self {
        SplitCounter { examined: 0, limit }
    }

    fn tick(&mut self) -> Result<(), OverBudget> {
        self.examined += 1;
        if self.examined > self.limit {
            Err(OverBudget)
        } else {
            Ok(())
        }
    }
}

/// Strict domination of the permuted concatenation by the identity one.
///
/// All permutations have the same total length, so deg-lex reduces to
/// lexicographic order with rank 1 largest: the identity wins iff its ranks
/// compare `Less` at the first difference.
fn dominates<'a>(identity: impl Iterator<Item = &'a u8>, permuted: impl Iterator<Item = &'a u8>) -> bool {
    identity.cmp(permuted) == Ordering::Less
}

/// True iff every non-identity permutation of `factors` concatenates to a
/// deg-lex smaller word.
pub(crate) fn is_decomposition(factors: &[&[u8]]) -> bool {
    let q = factors.len();
    (0..q).permutations(q).all(|perm| {
        perm.iter().enumerate().all(|(i, &j)| i == j)
            || dominates(
                factors.iter().flat_map(|f| f.iter()),
                perm.iter().flat_map(|&j| factors[j].iter()),
            )
    })
}

/// `(q - 1) * length(f) < total` for every factor.
pub(crate) fn is_strong(lengths: impl IntoIterator<Item = usize>, q: usize, total: usize) -> bool {
    lengths.into_iter().all(|l| (q - 1) * l < total)
}

/// Lexicographically earliest vector of factor lengths splitting `s` into a
/// q-decomposition (strong when asked), if any.
///
/// Factors are placed left to right. After each placement every
/// transposition ending at the new factor is checked, which is a necessary
/// condition and prunes most of the tree; complete splits get the full
/// permutation check.
pub(crate) fn earliest_split(
    s: &[u8],
    q: usize,
    strong: bool,
    counter: &mut SplitCounter,
) -> Result<Option<Vec<usize>>, OverBudget> {
    if q < 2 || s.len() < q {
        return Ok(None);
    }
    let mut offsets = Vec::with_capacity(q + 1);
    offsets.push(0);
    if place(s, q, strong, &mut offsets, counter)? {
        Ok(Some(offsets.windows(2).map(|w| w[1] - w[0]).collect()))
    } else {
        Ok(None)
    }
}

fn place(
    s: &[u8],
    q: usize,
    strong: bool,
    offsets: &mut Vec<usize>,
    counter: &mut SplitCounter,
) -> Result<bool, OverBudget> {
    let n = s.len();
    let k = offsets.len() - 1;
    let start = offsets[k];
    let remaining_after = q - 1 - k;
    let lengths: Vec<usize> = if remaining_after == 0 {
        vec![n - start]
    } else {
        (1..=n - start - remaining_after).collect()
    };
    for len in lengths {
        if strong && (q - 1) * len >= n {
            break;
        }
        counter.tick()?;
        offsets.push(start + len);
        if transpositions_hold(s, offsets) {
            let done = if remaining_after == 0 {
                let factors: Vec<&[u8]> = offsets.windows(2).map(|w| &s[w[0]..w[1]]).collect();
                is_decomposition(&factors)
            } else {
                place(s, q, strong, offsets, counter)?
            };
            if done {
                return Ok(true);
            }
        }
        offsets.pop();
    }
    Ok(false)
}

/// Swapping the newest factor with any earlier one must give a smaller word.
fn transpositions_hold(s: &[u8], offsets: &[usize]) -> bool {
    let k = offsets.len() - 2;
    let newest = &s[offsets[k]..offsets[k + 1]];
    (0..k).all(|i| {
        let left = &s[offsets[i]..offsets[i + 1]];
        let middle = &s[offsets[i + 1]..offsets[k]];
        let identity = &s[offsets[i]..offsets[k + 1]];
        dominates(identity.iter(), newest.iter().chain(middle).chain(left))
    })
}
