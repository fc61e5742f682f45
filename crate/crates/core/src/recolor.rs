//! Alternating-cycle recoloring: the local move that trades one matching
//! edge of a source color for one of a destination color, and the greedy
//! walk that chains such moves toward a target profile.
//!
//! The move is an alternating cycle `x_1, y_1, x_2, y_2, …, x_ℓ, y_ℓ` on a
//! perfect matching `M`: the matching edges `e_i = (x_i, y_i)` with `e_1`
//! colored `src` and every other `e_i` colored `dst`, and the non-matching
//! edges `f_i = {y_i, x_{i+1 mod ℓ}}` all colored `dst`. Replacing the `e`'s
//! by the `f`'s keeps the matching perfect and shifts its profile by exactly
//! `−1` in `src` and `+1` in `dst`. A simple graph forces `ℓ ≥ 2` (a
//! length-1 cycle would need a second, parallel edge on a matched pair).

use crate::error::{Error, Result};
use crate::graph::ColoredBipartiteGraph;
use crate::matching::{profile, ColorProfile, Matching};
use crate::ser;
use serde::Serialize;

/// An alternating cycle, `xs[i]` matched to `ys[i]`. Serializes with 1-based
/// vertices and colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlternatingCycle {
    #[serde(serialize_with = "ser::one_based")]
    pub src: usize,
    #[serde(serialize_with = "ser::one_based")]
    pub dst: usize,
    #[serde(serialize_with = "ser::one_based_vec")]
    pub xs: Vec<usize>,
    #[serde(serialize_with = "ser::one_based_vec")]
    pub ys: Vec<usize>,
}

impl AlternatingCycle {
    /// Number of matching edges on the cycle.
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Check every invariant of the definition against a concrete graph and
    /// matching; any violation is a consistency error naming the failed
    /// invariant.
    pub fn validate(&self, g: &ColoredBipartiteGraph, m: &Matching) -> Result<()> {
        let bad = |msg: String| Err(Error::Consistency(msg));
        let ell = self.xs.len();
        if ell < 2 {
            return bad(format!("cycle length {ell} is below the minimum of 2"));
        }
        if self.ys.len() != ell {
            return bad(format!(
                "cycle has {ell} A-vertices but {} B-vertices",
                self.ys.len()
            ));
        }
        if self.src >= g.q() || self.dst >= g.q() {
            return bad(format!(
                "cycle colors ({}, {}) out of range for q = {}",
                self.src,
                self.dst,
                g.q()
            ));
        }
        if self.src == self.dst {
            return bad("cycle colors src and dst must differ".into());
        }
        let mut seen_x = vec![false; g.n()];
        let mut seen_y = vec![false; g.n()];
        for (&x, &y) in self.xs.iter().zip(&self.ys) {
            if x >= g.n() || y >= g.n() {
                return bad(format!("cycle vertex ({x}, {y}) out of range"));
            }
            if std::mem::replace(&mut seen_x[x], true) {
                return bad(format!("A-vertex {x} appears twice on the cycle"));
            }
            if std::mem::replace(&mut seen_y[y], true) {
                return bad(format!("B-vertex {y} appears twice on the cycle"));
            }
        }
        for (i, (&x, &y)) in self.xs.iter().zip(&self.ys).enumerate() {
            if m.mate_of_a(x) != Some(y) {
                return bad(format!("edge e_{} = ({x}, {y}) is not in the matching", i + 1));
            }
            let want = if i == 0 { self.src } else { self.dst };
            match g.color_of(x, y) {
                Some(c) if c == want => {}
                got => {
                    return bad(format!(
                        "matching edge e_{} = ({x}, {y}) must have color {want}, got {got:?}",
                        i + 1
                    ))
                }
            }
        }
        for i in 0..ell {
            let y = self.ys[i];
            let x_next = self.xs[(i + 1) % ell];
            if m.mate_of_a(x_next) == Some(y) {
                return bad(format!(
                    "cycle edge f_{} = ({x_next}, {y}) lies in the matching",
                    i + 1
                ));
            }
            match g.color_of(x_next, y) {
                Some(c) if c == self.dst => {}
                got => {
                    return bad(format!(
                        "cycle edge f_{} = ({x_next}, {y}) must be a color-{} edge, got {got:?}",
                        i + 1,
                        self.dst
                    ))
                }
            }
        }
        Ok(())
    }
}

/// Find an alternating cycle for `src → dst` on a perfect matching, or
/// `None` when no such cycle exists anywhere in the graph.
///
/// Deterministic search policy: candidate first edges (the `src`-colored
/// matching edges) are tried in ascending order of their A-vertex, and for
/// each candidate a BFS over matching edges returns a shortest cycle through
/// it; the first candidate with any cycle wins. Worst case `O(n (n + E))`.
pub fn find_swap_cycle(
    g: &ColoredBipartiteGraph,
    m: &Matching,
    src: usize,
    dst: usize,
) -> Result<Option<AlternatingCycle>> {
    if src >= g.q() || dst >= g.q() {
        return Err(Error::Argument(format!(
            "colors ({src}, {dst}) out of range for q = {}",
            g.q()
        )));
    }
    if src == dst {
        return Err(Error::Argument("src and dst colors must differ".into()));
    }
    m.validate(g)?;
    if !m.is_perfect() {
        return Err(Error::Argument(
            "cycle search needs a perfect matching".into(),
        ));
    }

    let n = g.n();
    // Color of each vertex's matching edge, indexed by A-vertex.
    let edge_color: Vec<usize> = (0..n)
        .map(|a| {
            let b = m.mate_of_a(a).expect("perfect");
            g.color_of(a, b).expect("validated")
        })
        .collect();

    let mut visited = vec![u32::MAX; n]; // stamp = start index
    let mut parent = vec![0u32; n];
    let mut queue: Vec<u32> = Vec::with_capacity(n);

    for start in (0..n).filter(|&a| edge_color[a] == src) {
        let stamp = start as u32;
        queue.clear();
        visited[start] = stamp;
        queue.push(start as u32);
        let mut head = 0;
        let mut closed: Option<usize> = None;

        'bfs: while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            let y = m.mate_of_a(u).expect("perfect");
            for &(v, c) in g.adj_b(y) {
                let v = v as usize;
                if c as usize != dst {
                    continue;
                }
                // v == u would be the matching edge itself; its color is
                // src at the start and already-visited elsewhere.
                if v == start {
                    closed = Some(u);
                    break 'bfs;
                }
                if visited[v] != stamp && edge_color[v] == dst {
                    visited[v] = stamp;
                    parent[v] = u as u32;
                    queue.push(v as u32);
                }
            }
        }

        if let Some(last) = closed {
            let mut xs = vec![last];
            let mut u = last;
            while u != start {
                u = parent[u] as usize;
                xs.push(u);
            }
            xs.reverse();
            let ys = xs.iter().map(|&x| m.mate_of_a(x).expect("perfect")).collect();
            return Ok(Some(AlternatingCycle {
                src,
                dst,
                xs,
                ys,
            }));
        }
    }
    Ok(None)
}

/// Apply an alternating cycle to a perfect matching, returning the new
/// matching. The cycle is re-validated first; applying shifts the profile by
/// `−1` in `cycle.src` and `+1` in `cycle.dst`.
pub fn apply_cycle(
    g: &ColoredBipartiteGraph,
    m: &Matching,
    cycle: &AlternatingCycle,
) -> Result<Matching> {
    cycle.validate(g, m)?;
    let ell = cycle.len();
    let mut out = m.clone();
    for i in 0..ell {
        let x_next = cycle.xs[(i + 1) % ell];
        out.set(x_next, Some(cycle.ys[i] as u32));
    }
    Ok(out)
}

/// One executed step of a recoloring walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecolorStep {
    #[serde(serialize_with = "ser::one_based")]
    pub src: usize,
    #[serde(serialize_with = "ser::one_based")]
    pub dst: usize,
    pub cycle: AlternatingCycle,
}

/// Where and how a recoloring walk got stuck.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecolorFailure {
    #[serde(serialize_with = "ser::one_based")]
    pub src: usize,
    #[serde(serialize_with = "ser::one_based")]
    pub dst: usize,
    pub profile_reached: ColorProfile,
}

/// Full record of a recoloring walk: the final matching, every step with its
/// cycle, the profile after every step, and the dead-end report if the walk
/// failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecolorOutcome {
    pub matching: Matching,
    pub steps: Vec<RecolorStep>,
    pub trajectory: Vec<ColorProfile>,
    pub failure: Option<RecolorFailure>,
}

impl RecolorOutcome {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }

    pub fn final_profile(&self) -> &ColorProfile {
        self.trajectory.last().expect("trajectory starts non-empty")
    }
}

/// Walk from the profile of `m` to `target` by repeated single swaps.
///
/// Each step moves one unit from the color with the largest surplus over the
/// target to the color with the largest deficit (lowest index on ties), via
/// [`find_swap_cycle`]. Since every step shifts exactly one unit, the walk
/// either reaches the target in `Σ_i max(μ_i − target_i, 0)` steps or stops
/// at the first pair with no available cycle — a structured failure recorded
/// in the outcome, not an error. The trajectory includes the starting
/// profile, so it always has `steps + 1` entries.
pub fn recolor_to_target(
    g: &ColoredBipartiteGraph,
    m: &Matching,
    target: &ColorProfile,
) -> Result<RecolorOutcome> {
    m.validate(g)?;
    if !m.is_perfect() {
        return Err(Error::Argument(
            "recoloring needs a perfect matching".into(),
        ));
    }
    if target.q() != g.q() {
        return Err(Error::Argument(format!(
            "target has {} colors, graph has {}",
            target.q(),
            g.q()
        )));
    }
    if target.sum() != g.n() {
        return Err(Error::Argument(format!(
            "target profile sums to {}, need n = {}",
            target.sum(),
            g.n()
        )));
    }

    let mut cur = m.clone();
    let mut prof = profile(g, &cur)?;
    let mut steps = Vec::new();
    let mut trajectory = vec![prof.clone()];
    let mut failure = None;

    while &prof != target {
        let (mut src, mut dst) = (0usize, 0usize);
        let mut best_over = 0isize;
        let mut best_under = 0isize;
        for i in 0..g.q() {
            let d = prof.count(i) as isize - target.count(i) as isize;
            if d > best_over {
                best_over = d;
                src = i;
            }
            if d < best_under {
                best_under = d;
                dst = i;
            }
        }
        debug_assert!(best_over > 0 && best_under < 0);

        match find_swap_cycle(g, &cur, src, dst)? {
            None => {
                failure = Some(RecolorFailure {
                    src,
                    dst,
                    profile_reached: prof.clone(),
                });
                break;
            }
            Some(cycle) => {
                cur = apply_cycle(g, &cur, &cycle)?;
                prof = profile(g, &cur)?;
                steps.push(RecolorStep { src, dst, cycle });
                trajectory.push(prof.clone());
            }
        }
    }

    Ok(RecolorOutcome {
        matching: cur,
        steps,
        trajectory,
        failure,
    })
}
