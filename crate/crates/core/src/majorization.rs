//! Integer-vector majorization, the order that decides whether one slot
//! vector can be covered by another after rearrangement.
//!
//! For equal-length vectors `a`, `b` with non-increasing rearrangements
//! `a↓`, `b↓`, we say `a` is *weakly majorized below* `b` when every tail
//! of `a↓` is dominated:
//!
//! ```text
//! Σ_{s≥t} a↓_s  ≤  Σ_{s≥t} b↓_s     for every tail start t,
//! ```
//!
//! and *majorized below* `b` when additionally the totals agree. In the
//! scheduling reading, the deep tails are the scarce resource: a demand
//! vector sits below a supply vector exactly when the supply's small slots
//! can still cover the demand's long-duration residue (see [`crate::adequacy`]).
//!
//! The order is generated by single-unit "Robin Hood" transfers — take one
//! unit from a richer entry, give it to a poorer one — and [`rh_chain`]
//! constructs an explicit witness chain of such moves between any two
//! ordered vectors.
//!
//! All indices in this API are 0-based.

use crate::error::{Error, Result};

/// Non-increasing rearrangement `v↓`.
pub fn sort_desc(v: &[u32]) -> Vec<u32> {
    let mut out = v.to_vec();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Suffix sums of an already-sorted vector: `tails[t] = Σ_{s≥t} v[s]`.
fn tail_sums(sorted: &[u32]) -> Vec<u64> {
    let mut tails = vec![0u64; sorted.len() + 1];
    for t in (0..sorted.len()).rev() {
        tails[t] = tails[t + 1] + u64::from(sorted[t]);
    }
    tails.pop();
    tails
}

fn check_lengths(a: &[u32], b: &[u32]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// First tail of `a↓` whose sum exceeds the matching tail of `b↓`, scanning
/// from the whole vector (t = 0) toward the deepest suffix. `None` means
/// every tail of `a` is dominated, i.e. `a` is weakly majorized below `b`.
pub fn first_tail_violation(a: &[u32], b: &[u32]) -> Result<Option<usize>> {
    check_lengths(a, b)?;
    let ta = tail_sums(&sort_desc(a));
    let tb = tail_sums(&sort_desc(b));
    Ok((0..a.len()).find(|&t| ta[t] > tb[t]))
}

/// True iff every tail sum of `a↓` is at most the matching tail sum of `b↓`.
pub fn weakly_majorizes(a: &[u32], b: &[u32]) -> Result<bool> {
    Ok(first_tail_violation(a, b)?.is_none())
}

/// True iff `a` is weakly majorized below `b` and the totals agree.
pub fn majorizes(a: &[u32], b: &[u32]) -> Result<bool> {
    check_lengths(a, b)?;
    let sum = |v: &[u32]| v.iter().map(|&x| u64::from(x)).sum::<u64>();
    Ok(sum(a) == sum(b) && weakly_majorizes(a, b)?)
}

/// One Robin Hood move against the *current sorted* vector: take a unit from
/// position `from`, give it to position `to`. Chains from [`rh_chain`] are
/// replayed by applying each transfer and re-sorting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RhTransfer {
    pub from: usize,
    pub to: usize,
}

/// Moves one unit from `v[from]` to `v[to]` and returns the re-sorted result.
/// Requires `v[from] > v[to]`; the output always sits above the input in the
/// majorization order (`majorizes(v, result)`).
pub fn rh_transfer(v: &[u32], from: usize, to: usize) -> Result<Vec<u32>> {
    for &i in [from, to].iter() {
        if i >= v.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: v.len(),
            });
        }
    }
    if v[from] <= v[to] {
        return Err(Error::TransferNotDecreasing { from, to });
    }
    let mut out = v.to_vec();
    out[from] -= 1;
    out[to] += 1;
    out.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert_eq!(majorizes(v, &out), Ok(true));
    Ok(out)
}

/// Builds a transfer chain carrying `sort_desc(a)` to `sort_desc(b)`.
///
/// Requires `majorizes(a, b)`. Each step follows the same constructive rule:
/// at the first position where the running vector `v` and the target differ,
/// `v` is strictly larger; move one unit from there to the first later
/// position lower by more than one. Every intermediate vector stays between
/// `a` and `b` in the order, which the replay tests assert.
pub fn rh_chain(a: &[u32], b: &[u32]) -> Result<Vec<RhTransfer>> {
    if !majorizes(a, b)? {
        return Err(Error::NotMajorized);
    }
    let mut v = sort_desc(a);
    let target = sort_desc(b);
    let mut chain = Vec::new();
    loop {
        let Some(from) = (0..v.len()).find(|&t| v[t] != target[t]) else {
            return Ok(chain);
        };
        // Majorization plus an equal prefix forces v[from] > target[from],
        // and some later entry must sit more than one unit below v[from]:
        // otherwise the tail from `from` could not stay within the target's.
        let to = (from + 1..v.len())
            .find(|&s| v[from] - v[s] > 1)
            .expect("majorized target admits a receiving slot");
        chain.push(RhTransfer { from, to });
        v = rh_transfer(&v, from, to)?;
        debug_assert_eq!(majorizes(&v, &target), Ok(true));
    }
}
