//! Ground-truth brute force and exact uniform sampling.
//!
//! A non-decreasing integer vector `s` is a score sequence on `K_n` exactly
//! when every prefix sum meets `Σ_{i≤k} s_i >= C(k,2)`, with equality at
//! `k = n` (Landau's characterization). The enumeration here is the oracle
//! every counting module is checked against; the completion-count dynamic
//! program extends exact uniform sampling beyond the enumeration guard.
//!
//! An index `k` where the prefix sum *equals* `C(k,2)` closes an irreducible
//! block; `k = n` always qualifies, so every sequence has at least one block
//! and `(0, 1, …, n−1)` has `n`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::{Error, Result};

/// Largest `n` accepted by the exhaustive enumeration routines.
pub const ENUMERATION_MAX: usize = 13;

/// Largest `n` accepted by the completion-count dynamic program.
pub const SAMPLER_MAX: usize = 40;

fn choose2(k: usize) -> u64 {
    (k as u64) * (k as u64).saturating_sub(1) / 2
}

/// Landau's check on a raw vector: non-decreasing, prefix sums at least
/// `C(k,2)`, total exactly `C(n,2)`. Negative entries simply fail.
pub fn is_score_sequence(s: &[i64]) -> bool {
    let n = s.len();
    let mut prefix: i64 = 0;
    for (i, &v) in s.iter().enumerate() {
        if v < 0 || (i > 0 && v < s[i - 1]) {
            return false;
        }
        prefix += v;
        let bound = choose2(i + 1) as i64;
        if prefix < bound {
            return false;
        }
    }
    prefix == choose2(n) as i64
}

/// A validated tournament score sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScoreSequence {
    scores: Vec<u64>,
}

impl ScoreSequence {
    /// Validate and wrap; rejects anything failing Landau's condition.
    pub fn new(scores: &[i64]) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::domain("score sequence must be non-empty"));
        }
        if !is_score_sequence(scores) {
            return Err(Error::domain(format!(
                "not a score sequence: {scores:?}"
            )));
        }
        let n = scores.len() as u64;
        let converted: Vec<u64> = scores.iter().map(|&v| v as u64).collect();
        // 0 <= s_i <= n−1 is implied by Landau; assert it stays true.
        debug_assert!(converted.iter().all(|&v| v <= n - 1));
        Ok(ScoreSequence { scores: converted })
    }

    pub fn n(&self) -> usize {
        self.scores.len()
    }

    pub fn scores(&self) -> &[u64] {
        &self.scores
    }
}

/// Number of irreducible blocks: indices `k` with prefix sum equal to
/// `C(k,2)`. Always at least 1 because `k = n` qualifies.
pub fn irreducible_count(s: &ScoreSequence) -> usize {
    let mut prefix = 0u64;
    let mut count = 0;
    for (i, &v) in s.scores.iter().enumerate() {
        prefix += v;
        if prefix == choose2(i + 1) {
            count += 1;
        }
    }
    count
}

/// A sequence is strong when its only irreducible block is the whole thing.
pub fn is_strong(s: &ScoreSequence) -> bool {
    irreducible_count(s) == 1
}

/// All score sequences on `K_n` in lexicographic order (`n <= 13`).
pub fn enumerate_scores(n: usize) -> Result<Vec<ScoreSequence>> {
    if n == 0 {
        return Err(Error::domain("enumerate_scores requires n >= 1"));
    }
    if n > ENUMERATION_MAX {
        return Err(Error::guard(format!(
            "enumerate_scores refuses n={n} > {ENUMERATION_MAX}"
        )));
    }
    let total = choose2(n);
    let max_entry = (n - 1) as u64;
    let mut out = Vec::new();
    let mut current: Vec<u64> = Vec::with_capacity(n);

    fn recurse(
        current: &mut Vec<u64>,
        n: usize,
        prefix: u64,
        total: u64,
        max_entry: u64,
        out: &mut Vec<ScoreSequence>,
    ) {
        let i = current.len();
        if i == n {
            if prefix == total {
                out.push(ScoreSequence {
                    scores: current.clone(),
                });
            }
            return;
        }
        let low = current.last().copied().unwrap_or(0);
        let remaining = (n - i - 1) as u64;
        for v in low..=max_entry {
            let p = prefix + v;
            // prefix bound now, and reachability of the final total later
            if p < choose2(i + 1) {
                continue;
            }
            if p + remaining * v > total {
                break; // later values only grow
            }
            if p + remaining * max_entry < total {
                continue;
            }
            current.push(v);
            recurse(current, n, p, total, max_entry, out);
            current.pop();
        }
    }
    recurse(&mut current, n, 0, total, max_entry, &mut out);
    Ok(out)
}

/// The subset `{s_1+1, s_2+2, …, s_n+n}` of `{1, …, 2n−1}` attached to a
/// score sequence; it has `n` elements and sums to `n²`, both asserted.
pub fn score_to_subset(s: &ScoreSequence) -> Result<Vec<u64>> {
    let n = s.n() as u64;
    let subset: Vec<u64> = s
        .scores
        .iter()
        .enumerate()
        .map(|(i, &v)| v + i as u64 + 1)
        .collect();
    // Strictly increasing (s non-decreasing plus the index), hence distinct.
    for w in subset.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::consistency(
                "subset-distinct",
                format!("non-increasing subset from {:?}", s.scores),
            ));
        }
    }
    if subset.iter().any(|&v| v < 1 || v > 2 * n - 1) {
        return Err(Error::consistency(
            "subset-range",
            format!("subset escapes 1..=2n-1 for {:?}", s.scores),
        ));
    }
    let sum: u64 = subset.iter().sum();
    if sum != n * n {
        return Err(Error::consistency(
            "subset-sum",
            format!("subset sums to {sum}, expected n² = {}", n * n),
        ));
    }
    Ok(subset)
}

/// Histogram of [`irreducible_count`] over all score sequences on `K_n`.
pub fn count_by_subscores_brute(n: usize) -> Result<BTreeMap<usize, BigInt>> {
    let mut hist = BTreeMap::new();
    for s in enumerate_scores(n)? {
        *hist.entry(irreducible_count(&s)).or_insert_with(BigInt::zero) += 1;
    }
    Ok(hist)
}

/// Completion counts for the sequential sampler.
///
/// `count(i, last, t)` is the number of ways to extend a partial sequence of
/// `i` placed scores, last value `last` and prefix sum `t`, to a full score
/// sequence on `K_n`. In particular `count(0, 0, 0)` is the total count.
#[derive(Debug)]
pub struct CompletionCounts {
    n: usize,
    // layers[i][last][t] with t <= C(n,2)
    layers: Vec<Vec<Vec<BigInt>>>,
}

impl CompletionCounts {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, placed: usize, last: u64, prefix: u64) -> &BigInt {
        &self.layers[placed][last as usize][prefix as usize]
    }

    /// Total number of score sequences on `K_n`.
    pub fn total(&self) -> &BigInt {
        self.count(0, 0, 0)
    }
}

/// Build the completion-count table (`1 <= n <= 40`).
pub fn completion_counts(n: usize) -> Result<CompletionCounts> {
    if n == 0 || n > SAMPLER_MAX {
        return Err(Error::guard(format!(
            "completion_counts supports 1..={SAMPLER_MAX}, got {n}"
        )));
    }
    let total = choose2(n) as usize;
    let max_entry = n - 1;
    // layers[i][last][t]; last in 0..=n−1, t in 0..=C(n,2)
    let mut layers =
        vec![vec![vec![BigInt::zero(); total + 1]; max_entry + 1]; n + 1];
    for last in 0..=max_entry {
        layers[n][last][total] = BigInt::one();
    }
    for i in (0..n).rev() {
        let bound = choose2(i + 1) as usize;
        for last in 0..=max_entry {
            for t in 0..=total {
                let mut acc = BigInt::zero();
                for v in last..=max_entry {
                    let t2 = t + v;
                    if t2 > total {
                        break;
                    }
                    if t2 < bound {
                        continue;
                    }
                    acc += &layers[i + 1][v][t2];
                }
                layers[i][last][t] = acc;
            }
        }
    }
    Ok(CompletionCounts { n, layers })
}

/// Uniform random big integer below `bound` by rejection on random bits.
fn uniform_below(rng: &mut ChaCha12Rng, bound: &BigInt) -> BigInt {
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess_bits = (bytes as u64) * 8 - bits;
    let mask: u8 = 0xffu8 >> excess_bits;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[0] &= mask;
        let candidate = BigInt::from_bytes_be(Sign::Plus, &buf);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Draw `count` exactly-uniform score sequences on `K_n`, deterministically
/// from `seed`.
///
/// Randomness comes from a ChaCha12 stream seeded via `seed_from_u64`;
/// uniformity is exact because every choice is a big-integer threshold
/// comparison against completion counts, never a floating-point weight.
pub fn sample_uniform(n: usize, seed: u64, count: usize) -> Result<Vec<ScoreSequence>> {
    let table = completion_counts(n)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut scores = Vec::with_capacity(n);
        let mut last = 0u64;
        let mut prefix = 0u64;
        for i in 0..n {
            let total_here = table.count(i, last, prefix);
            debug_assert!(!total_here.is_zero());
            let mut draw = uniform_below(&mut rng, total_here);
            let bound = choose2(i + 1);
            let mut chosen = None;
            for v in last..=(n as u64 - 1) {
                let t2 = prefix + v;
                if t2 > choose2(n) {
                    break;
                }
                if t2 < bound {
                    continue;
                }
                let ways = table.count(i + 1, v, t2);
                if &draw < ways {
                    chosen = Some(v);
                    break;
                }
                draw -= ways;
            }
            let v = chosen.expect("completion counts are consistent");
            scores.push(v);
            prefix += v;
            last = v;
        }
        debug_assert!(is_score_sequence(
            &scores.iter().map(|&v| v as i64).collect::<Vec<_>>()
        ));
        out.push(ScoreSequence { scores });
    }
    Ok(out)
}
