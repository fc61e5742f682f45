//! Matchings, maximum matching, and color profiles.

use crate::error::{Error, Result};
use crate::graph::ColoredBipartiteGraph;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::fmt::Write as _;

/// A matching, stored as the partial map `A → B`.
///
/// Serializes as a list of 1-based `[a, b]` pairs in ascending `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    mate_of_a: Vec<Option<u32>>,
}

impl Serialize for Matching {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.size()))?;
        for (a, b) in self.pairs() {
            seq.serialize_element(&[a + 1, b + 1])?;
        }
        seq.end()
    }
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching {
            mate_of_a: vec![None; n],
        }
    }

    /// Matching from explicit `(a, b)` pairs (0-based); rejects repeated
    /// vertices on either side and out-of-range indices.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Matching::empty(n);
        let mut b_used = vec![false; n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Argument(format!(
                    "pair ({a}, {b}) out of range for n = {n}"
                )));
            }
            if m.mate_of_a[a].is_some() {
                return Err(Error::Argument(format!("vertex {a} in A matched twice")));
            }
            if b_used[b] {
                return Err(Error::Argument(format!("vertex {b} in B matched twice")));
            }
            m.mate_of_a[a] = Some(b as u32);
            b_used[b] = true;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.mate_of_a.len()
    }

    pub fn size(&self) -> usize {
        self.mate_of_a.iter().flatten().count()
    }

    pub fn is_perfect(&self) -> bool {
        self.mate_of_a.iter().all(Option::is_some)
    }

    /// Partner of `a ∈ A`, if matched.
    pub fn mate_of_a(&self, a: usize) -> Option<usize> {
        self.mate_of_a[a].map(|b| b as usize)
    }

    /// The inverse map `B → A`.
    pub fn mates_of_b(&self) -> Vec<Option<u32>> {
        let mut inv = vec![None; self.mate_of_a.len()];
        for (a, b) in self.pairs() {
            inv[b] = Some(a as u32);
        }
        inv
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mate_of_a
            .iter()
            .enumerate()
            .filter_map(|(a, b)| b.map(|b| (a, b as usize)))
    }

    pub(crate) fn set(&mut self, a: usize, b: Option<u32>) {
        self.mate_of_a[a] = b;
    }

    /// Check that every matched pair is an edge of `g` (injectivity is
    /// structural for `from_pairs` matchings, but re-checked here for
    /// hand-built ones).
    pub fn validate(&self, g: &ColoredBipartiteGraph) -> Result<()> {
        if self.mate_of_a.len() != g.n() {
            return Err(Error::Consistency(format!(
                "matching is over n = {}, graph has n = {}",
                self.mate_of_a.len(),
                g.n()
            )));
        }
        let mut b_used = vec![false; g.n()];
        for (a, b) in self.pairs() {
            if b_used[b] {
                return Err(Error::Consistency(format!("vertex {b} in B matched twice")));
            }
            b_used[b] = true;
            if !g.has_edge(a, b) {
                return Err(Error::Consistency(format!(
                    "matched pair ({a}, {b}) is not an edge"
                )));
            }
        }
        Ok(())
    }

    /// Text form: one 1-based `a b` line per matched pair, ascending in `a`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (a, b) in self.pairs() {
            let _ = writeln!(out, "{} {}", a + 1, b + 1);
        }
        out
    }

    /// Parse the text form for a graph on `n` vertices per side. Comments
    /// (`#`) and blank lines are allowed; duplicates and out-of-range
    /// vertices are parse errors naming the line.
    pub fn from_text(n: usize, text: &str) -> Result<Self> {
        let mut m = Matching::empty(n);
        let mut b_used = vec![false; n];
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let bad = |msg: String| Error::Parse { line, msg };
            let data = raw.split('#').next().unwrap_or("").trim();
            if data.is_empty() {
                continue;
            }
            let toks: Vec<&str> = data.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(bad(format!("matching line must be `a b`, got {data:?}")));
            }
            let a: usize = toks[0]
                .parse()
                .map_err(|_| bad(format!("a must be an integer, got {:?}", toks[0])))?;
            let b: usize = toks[1]
                .parse()
                .map_err(|_| bad(format!("b must be an integer, got {:?}", toks[1])))?;
            if a < 1 || a > n || b < 1 || b > n {
                return Err(bad(format!("pair ({a}, {b}) out of range for n = {n}")));
            }
            if m.mate_of_a[a - 1].is_some() {
                return Err(bad(format!("vertex {a} in A matched twice")));
            }
            if b_used[b - 1] {
                return Err(bad(format!("vertex {b} in B matched twice")));
            }
            m.mate_of_a[a - 1] = Some((b - 1) as u32);
            b_used[b - 1] = true;
        }
        Ok(m)
    }
}

/// Per-color edge counts of a matching. Serializes as a plain array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ColorProfile {
    counts: Vec<usize>,
}

impl ColorProfile {
    pub fn new(counts: Vec<usize>) -> Self {
        ColorProfile { counts }
    }

    pub fn zeros(q: usize) -> Self {
        ColorProfile {
            counts: vec![0; q],
        }
    }

    pub fn q(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, color: usize) -> usize {
        self.counts[color]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn sum(&self) -> usize {
        self.counts.iter().sum()
    }

    pub(crate) fn bump(&mut self, color: usize) {
        self.counts[color] += 1;
    }
}

impl std::fmt::Display for ColorProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Color profile of `m` in `g`: entry `i` counts the matching edges of color
/// `i`. Every matched pair must be an edge of `g`.
pub fn profile(g: &ColoredBipartiteGraph, m: &Matching) -> Result<ColorProfile> {
    m.validate(g)?;
    let mut prof = ColorProfile::zeros(g.q());
    for (a, b) in m.pairs() {
        // validate() guarantees the edge exists
        let c = g.color_of(a, b).expect("validated pair is an edge");
        prof.bump(c);
    }
    Ok(prof)
}

/// Maximum matching via Hopcroft–Karp, `O(E √n)`.
///
/// Fully deterministic: free vertices enter the BFS in ascending order and
/// augmenting DFS scans adjacency in the canonical `(a, b)` order, so equal
/// graphs always yield the same matching.
pub fn maximum_matching(g: &ColoredBipartiteGraph) -> Matching {
    let n = g.n();
    const FREE: u32 = u32::MAX;
    let mut mate_a = vec![FREE; n]; // a -> b
    let mut mate_b = vec![FREE; n]; // b -> a
    let mut dist = vec![u32::MAX; n];
    let mut queue = Vec::with_capacity(n);

    loop {
        // BFS layers from free A-vertices.
        queue.clear();
        for a in 0..n {
            if mate_a[a] == FREE {
                dist[a] = 0;
                queue.push(a as u32);
            } else {
                dist[a] = u32::MAX;
            }
        }
        let mut found_augmenting = false;
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head] as usize;
            head += 1;
            for &(b, _) in g.adj_a(a) {
                let next = mate_b[b as usize];
                if next == FREE {
                    found_augmenting = true;
                } else if dist[next as usize] == u32::MAX {
                    dist[next as usize] = dist[a] + 1;
                    queue.push(next);
                }
            }
        }
        if !found_augmenting {
            break;
        }

        // Augment along shortest paths, vertices in ascending order.
        fn dfs(
            a: usize,
            g: &ColoredBipartiteGraph,
            dist: &mut [u32],
            mate_a: &mut [u32],
            mate_b: &mut [u32],
        ) -> bool {
            for &(b, _) in g.adj_a(a) {
                let next = mate_b[b as usize];
                let ok = if next == FREE {
                    true
                } else if dist[next as usize] == dist[a] + 1
                    && dfs(next as usize, g, dist, mate_a, mate_b)
                {
                    true
                } else {
                    false
                };
                if ok {
                    mate_a[a] = b;
                    mate_b[b as usize] = a as u32;
                    return true;
                }
            }
            dist[a] = u32::MAX;
            false
        }
        for a in 0..n {
            if mate_a[a] == FREE {
                dfs(a, g, &mut dist, &mut mate_a, &mut mate_b);
            }
        }
    }

    let mut m = Matching::empty(n);
    for (a, &b) in mate_a.iter().enumerate() {
        if b != FREE {
            m.set(a, Some(b));
        }
    }
    m
}
