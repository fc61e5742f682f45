//! Exact enumeration of `mcp(G)` — the set of color profiles realized by the
//! perfect matchings of `G` — at sizes where exhaustive computation is honest.
//!
//! Profiles live in `{0, …, n}^q` (zero coordinates are allowed; a color may
//! simply be absent from a perfect matching). Two independent algorithms are
//! provided so they can cross-check each other: plain backtracking over all
//! perfect matchings, and a subset DP over B-sets that also yields witness
//! matchings for membership queries.

use crate::error::{Error, Result};
use crate::graph::ColoredBipartiteGraph;
use crate::matching::{ColorProfile, Matching};
use serde::Serialize;
use std::collections::HashSet;

/// Largest `n` the backtracking enumerator accepts by default.
pub const DEFAULT_BRUTEFORCE_CAP: usize = 10;

/// Largest `n` the subset DP accepts by default.
pub const DEFAULT_DP_CAP: usize = 14;

/// The subset DP packs a truncated profile into a `u64` at 8 bits per color,
/// which caps the color count it can handle.
pub const DP_MAX_COLORS: usize = 9;

/// A set of color profiles, kept lexicographically sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ProfileSet {
    profiles: Vec<ColorProfile>,
}

impl ProfileSet {
    pub fn new(mut profiles: Vec<ColorProfile>) -> Self {
        profiles.sort();
        profiles.dedup();
        ProfileSet { profiles }
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn contains(&self, p: &ColorProfile) -> bool {
        self.profiles.binary_search(p).is_ok()
    }

    pub fn profiles(&self) -> &[ColorProfile] {
        &self.profiles
    }

    pub fn iter(&self) -> impl Iterator<Item = &ColorProfile> {
        self.profiles.iter()
    }
}

fn check_cap(n: usize, cap: usize, algo: &str) -> Result<()> {
    if n > cap {
        return Err(Error::Argument(format!(
            "n = {n} exceeds the {algo} cap of {cap}; pass a larger cap explicitly to override"
        )));
    }
    Ok(())
}

/// `mcp(G)` by backtracking over every perfect matching.
/// Refuses `n` above [`DEFAULT_BRUTEFORCE_CAP`].
pub fn mcp_bruteforce(g: &ColoredBipartiteGraph) -> Result<ProfileSet> {
    mcp_bruteforce_with_cap(g, DEFAULT_BRUTEFORCE_CAP)
}

/// `mcp(G)` by backtracking, with an explicit size cap.
pub fn mcp_bruteforce_with_cap(g: &ColoredBipartiteGraph, cap: usize) -> Result<ProfileSet> {
    check_cap(g.n(), cap.min(32), "brute force")?;
    let mut found: HashSet<Vec<usize>> = HashSet::new();
    let mut counts = vec![0usize; g.q()];

    fn rec(
        g: &ColoredBipartiteGraph,
        a: usize,
        used: u32,
        counts: &mut Vec<usize>,
        found: &mut HashSet<Vec<usize>>,
    ) {
        if a == g.n() {
            found.insert(counts.clone());
            return;
        }
        for &(b, c) in g.adj_a(a) {
            if used & (1 << b) == 0 {
                counts[c as usize] += 1;
                rec(g, a + 1, used | (1 << b), counts, found);
                counts[c as usize] -= 1;
            }
        }
    }
    rec(g, 0, 0, &mut counts, &mut found);

    Ok(ProfileSet::new(
        found.into_iter().map(ColorProfile::new).collect(),
    ))
}

/// Truncated-profile encoding for the DP: 8 bits per color, first `q − 1`
/// colors only (the last count is implied by the number of matched vertices).
fn encode(counts: &[usize], q: usize) -> u64 {
    let mut code = 0u64;
    for (i, &c) in counts.iter().take(q - 1).enumerate() {
        code |= (c as u64) << (8 * i);
    }
    code
}

fn decode(code: u64, q: usize, total: usize) -> Vec<usize> {
    let mut counts = vec![0usize; q];
    let mut sum = 0;
    for (i, slot) in counts.iter_mut().take(q - 1).enumerate() {
        *slot = ((code >> (8 * i)) & 0xff) as usize;
        sum += *slot;
    }
    counts[q - 1] = total - sum;
    counts
}

/// The DP table: for every B-subset `mask`, the truncated profiles of perfect
/// matchings between the first `popcount(mask)` A-vertices and `mask`.
fn dp_table(g: &ColoredBipartiteGraph) -> Vec<HashSet<u64>> {
    let n = g.n();
    let full = (1u32 << n) - 1;
    let mut dp: Vec<HashSet<u64>> = vec![HashSet::new(); 1 << n];
    dp[0].insert(0);
    for mask in 0..full {
        if dp[mask as usize].is_empty() {
            continue;
        }
        let a = mask.count_ones() as usize; // next A-vertex to match
        let codes: Vec<u64> = dp[mask as usize].iter().copied().collect();
        for &(b, c) in g.adj_a(a) {
            if mask & (1 << b) != 0 {
                continue;
            }
            let next = (mask | (1 << b)) as usize;
            let bump = if (c as usize) < g.q() - 1 {
                1u64 << (8 * c as usize)
            } else {
                0
            };
            for &code in &codes {
                dp[next].insert(code + bump);
            }
        }
    }
    dp
}

fn check_dp_limits(g: &ColoredBipartiteGraph, cap: usize) -> Result<()> {
    check_cap(g.n(), cap.min(24), "subset DP")?;
    if g.q() > DP_MAX_COLORS {
        return Err(Error::Argument(format!(
            "subset DP supports at most {DP_MAX_COLORS} colors, graph has {}",
            g.q()
        )));
    }
    Ok(())
}

/// `mcp(G)` by dynamic programming over B-subsets.
/// Refuses `n` above [`DEFAULT_DP_CAP`] and `q` above [`DP_MAX_COLORS`].
pub fn mcp_subset_dp(g: &ColoredBipartiteGraph) -> Result<ProfileSet> {
    mcp_subset_dp_with_cap(g, DEFAULT_DP_CAP)
}

/// Subset-DP `mcp(G)` with an explicit size cap.
pub fn mcp_subset_dp_with_cap(g: &ColoredBipartiteGraph, cap: usize) -> Result<ProfileSet> {
    check_dp_limits(g, cap)?;
    let dp = dp_table(g);
    let full = (1usize << g.n()) - 1;
    Ok(ProfileSet::new(
        dp[full]
            .iter()
            .map(|&code| ColorProfile::new(decode(code, g.q(), g.n())))
            .collect(),
    ))
}

/// Membership query with witness: is `target` the profile of some perfect
/// matching of `g`? Returns that matching (reconstructed from the DP table)
/// when the answer is yes.
///
/// A target whose coordinates do not sum to `n` is simply not a member; a
/// target with the wrong number of colors is an argument error. Size limits
/// are those of [`mcp_subset_dp`].
pub fn contains_profile(
    g: &ColoredBipartiteGraph,
    target: &ColorProfile,
) -> Result<Option<Matching>> {
    contains_profile_with_cap(g, target, DEFAULT_DP_CAP)
}

/// [`contains_profile`] with an explicit size cap.
pub fn contains_profile_with_cap(
    g: &ColoredBipartiteGraph,
    target: &ColorProfile,
    cap: usize,
) -> Result<Option<Matching>> {
    check_dp_limits(g, cap)?;
    if target.q() != g.q() {
        return Err(Error::Argument(format!(
            "profile has {} colors, graph has {}",
            target.q(),
            g.q()
        )));
    }
    let n = g.n();
    if target.sum() != n {
        return Ok(None);
    }
    let dp = dp_table(g);
    let full = (1u32 << n) - 1;
    if !dp[full as usize].contains(&encode(target.counts(), g.q())) {
        return Ok(None);
    }

    // Walk the table backwards, committing one edge per A-vertex.
    let mut rem: Vec<usize> = target.counts().to_vec();
    let mut mask = full;
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n);
    for a in (0..n).rev() {
        let mut committed = false;
        for &(b, c) in g.adj_a(a) {
            let (b, c) = (b as usize, c as usize);
            if mask & (1 << b) == 0 || rem[c] == 0 {
                continue;
            }
            rem[c] -= 1;
            let prev = mask & !(1 << b as u32);
            if dp[prev as usize].contains(&encode(&rem, g.q())) {
                pairs.push((a, b));
                mask = prev;
                committed = true;
                break;
            }
            rem[c] += 1;
        }
        debug_assert!(committed, "DP backtrace lost membership at vertex {a}");
        if !committed {
            return Err(Error::Consistency(
                "DP backtrace failed despite positive membership".into(),
            ));
        }
    }
    Ok(Some(Matching::from_pairs(n, &pairs)?))
}
