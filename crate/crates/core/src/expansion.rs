//! Expansion-layer diagnostic: executes, on a concrete graph and perfect
//! matching, the set construction that underlies the existence proof for
//! alternating cycles — the pruned core `R₀` reached via the sets `D₀′`,
//! `D₀` and the absorbing sequence `W₀ ⊆ W₁ ⊆ …`, then the grown layers
//! `X₀, Y₀, X₁, …` from a seed vertex, on both sides of the bipartition.
//!
//! All thresholds (`k₀`, the low-degree cutoff, the growth factor, the layer
//! goal) are real-valued functions of `(n, α_dst, β)` that only bind
//! asymptotically; at desk scales they are usually degenerate — `k₀` exceeds
//! every vertex degree (so the `W`-sequence stops immediately) and the layer
//! goal is below 1 (so the seed layer already meets it). The trace records
//! what actually happened, including those degenerate outcomes.

use crate::error::{Error, Result};
use crate::graph::{ColoredBipartiteGraph, Side};
use crate::matching::{profile, Matching};
use crate::ser;
use serde::Serialize;

/// The construction's thresholds, evaluated at real-valued `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionConstants {
    /// `k₀ = 10 ln n / ln ln n` — degree cutoff for `D₀` and the `W`-steps.
    pub k0: f64,
    /// `α_dst β ln n / 10` — minimum useful `dst`-degree (defines `D₀′`).
    pub low_degree_threshold: f64,
    /// `α_dst β ln n / 25` — per-layer growth the construction expects.
    pub growth_factor: f64,
    /// `α_dst β n / 5000` — layer size at which growing stops.
    pub layer_goal: f64,
    /// `n / (200 ln n)` — layer size up to which the growth claim applies.
    pub hypothesis_bound: f64,
}

impl ExpansionConstants {
    /// Requires `n ≥ 3` (so `ln ln n > 0`), `α_dst ∈ (0, 1]`, `β ∈ (0, 1)`.
    pub fn new(n: f64, alpha_dst: f64, beta: f64) -> Result<Self> {
        if !(n.is_finite() && n >= 3.0) {
            return Err(Error::Argument(format!(
                "expansion constants need n >= 3, got {n}"
            )));
        }
        if !(alpha_dst.is_finite() && alpha_dst > 0.0 && alpha_dst <= 1.0) {
            return Err(Error::Argument(format!(
                "alpha_dst must lie in (0, 1], got {alpha_dst}"
            )));
        }
        if !(beta.is_finite() && beta > 0.0 && beta < 1.0) {
            return Err(Error::Argument(format!(
                "beta must lie in (0, 1), got {beta}"
            )));
        }
        let ln_n = n.ln();
        Ok(ExpansionConstants {
            k0: 10.0 * ln_n / ln_n.ln(),
            low_degree_threshold: alpha_dst * beta * ln_n / 10.0,
            growth_factor: alpha_dst * beta * ln_n / 25.0,
            layer_goal: alpha_dst * beta * n / 5000.0,
            hypothesis_bound: n / (200.0 * ln_n),
        })
    }
}

/// One layer-to-layer growth step and how it compares to the expected
/// factor. The growth claim is conditional: it only speaks about layers no
/// larger than the hypothesis bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LayerTransition {
    pub from_size: usize,
    pub to_size: usize,
    pub required_factor: f64,
    /// Whether `from_size ≤ n / (200 ln n)`, i.e. the claim applies.
    pub hypothesis_applies: bool,
    /// Whether `to_size ≥ required_factor · from_size`.
    pub met: bool,
}

/// The construction carried out with one side of the bipartition as the
/// primary side (`A` for the forward run seeded at `a₀`, `B` for the
/// mirrored run seeded at `b₀ = M(a₀)`). All vertex lists are sorted and
/// serialize 1-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideTrace {
    /// The primary side the sets below live on.
    pub side: Side,
    /// High-`dst`-degree `dst`-matched vertices (`D₀′`).
    #[serde(serialize_with = "ser::one_based_vec")]
    pub d0_prime: Vec<usize>,
    /// `src`-matched vertices with few `dst`-edges into the mates of the
    /// low-degree remainder (`D₀`).
    #[serde(serialize_with = "ser::one_based_vec")]
    pub d0: Vec<usize>,
    /// `W₀`: the `src`-matched vertices outside `D₀`.
    #[serde(serialize_with = "ser::one_based_vec")]
    pub w0: Vec<usize>,
    /// Vertices absorbed by the `W`-sequence, in absorption order.
    #[serde(serialize_with = "ser::one_based_vec")]
    pub w_added: Vec<usize>,
    /// Number of absorption steps `t*`.
    pub t_star: usize,
    /// The pruned core `R₀`: `dst`-matched vertices never absorbed.
    #[serde(serialize_with = "ser::one_based_vec")]
    pub r0: Vec<usize>,
    /// The seed vertex the layers grow from.
    #[serde(serialize_with = "ser::one_based")]
    pub seed: usize,
    /// Whether the seed survived into `R₀`; if not, no layers are grown.
    pub seed_in_r0: bool,
    /// The grown layers (`X_i` forward, `Ŷ_i` mirrored), on the primary side.
    #[serde(serialize_with = "ser::one_based_nested")]
    pub layers: Vec<Vec<usize>>,
    /// Their `dst`-neighborhoods (`Y_i` forward, `X̂_i` mirrored), on the
    /// opposite side; always the same length as `layers`.
    #[serde(serialize_with = "ser::one_based_nested")]
    pub neighbor_layers: Vec<Vec<usize>>,
    pub transitions: Vec<LayerTransition>,
    /// Whether some layer reached the goal size.
    pub goal_met: bool,
    /// Index of the first layer at or above the goal, if any.
    pub goal_layer: Option<usize>,
    /// Whether growing died out (an empty next layer) before the goal.
    pub stalled: bool,
}

/// The full diagnostic: both side constructions plus the constants used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionTrace {
    pub n: usize,
    #[serde(serialize_with = "ser::one_based")]
    pub src: usize,
    #[serde(serialize_with = "ser::one_based")]
    pub dst: usize,
    pub beta: f64,
    pub alpha_dst: f64,
    pub constants: ExpansionConstants,
    pub forward: SideTrace,
    pub mirror: SideTrace,
}

/// Primary-side view: adjacency, mates, and matching-edge colors, with the
/// roles of `A` and `B` swappable so both constructions share one code path.
struct SideView<'a> {
    g: &'a ColoredBipartiteGraph,
    side: Side,
    /// Mate of a primary-side vertex (on the secondary side).
    mate_p: Vec<usize>,
    /// Mate of a secondary-side vertex (on the primary side).
    mate_s: Vec<usize>,
    /// Matching-edge color per primary-side vertex.
    edge_color: Vec<usize>,
}

impl<'a> SideView<'a> {
    fn new(g: &'a ColoredBipartiteGraph, m: &Matching, side: Side) -> Self {
        let n = g.n();
        let a_to_b: Vec<usize> = (0..n).map(|a| m.mate_of_a(a).expect("perfect")).collect();
        let mut b_to_a = vec![0usize; n];
        for (a, &b) in a_to_b.iter().enumerate() {
            b_to_a[b] = a;
        }
        let color_by_a: Vec<usize> = (0..n)
            .map(|a| g.color_of(a, a_to_b[a]).expect("matching edge"))
            .collect();
        let (mate_p, mate_s, edge_color) = match side {
            Side::A => (a_to_b.clone(), b_to_a, color_by_a),
            Side::B => {
                let color_by_b: Vec<usize> = (0..n).map(|b| color_by_a[b_to_a[b]]).collect();
                (b_to_a, a_to_b, color_by_b)
            }
        };
        SideView {
            g,
            side,
            mate_p,
            mate_s,
            edge_color,
        }
    }

    fn adj_p(&self, v: usize) -> &[(u32, u32)] {
        match self.side {
            Side::A => self.g.adj_a(v),
            Side::B => self.g.adj_b(v),
        }
    }

    /// Number of `color`-neighbors of primary vertex `v` inside the
    /// secondary-side mask.
    fn deg_into(&self, v: usize, color: usize, mask: &[bool]) -> usize {
        self.adj_p(v)
            .iter()
            .filter(|&&(w, c)| c as usize == color && mask[w as usize])
            .count()
    }
}

fn sorted_from_mask(mask: &[bool]) -> Vec<usize> {
    (0..mask.len()).filter(|&v| mask[v]).collect()
}

/// Run the whole construction on one primary side.
fn build_side(
    view: &SideView,
    src: usize,
    dst: usize,
    consts: &ExpansionConstants,
    seed: usize,
) -> SideTrace {
    let n = view.g.n();
    let p_src: Vec<usize> = (0..n).filter(|&v| view.edge_color[v] == src).collect();
    let p_dst: Vec<usize> = (0..n).filter(|&v| view.edge_color[v] == dst).collect();

    // Secondary-side mask of dst-matched vertices (the mates of p_dst).
    let mut s_dst_mask = vec![false; n];
    for &v in &p_dst {
        s_dst_mask[view.mate_p[v]] = true;
    }

    // D₀′: dst-matched vertices with enough dst-edges into the dst-matched
    // part of the secondary side.
    let d0_prime: Vec<usize> = p_dst
        .iter()
        .copied()
        .filter(|&v| (view.deg_into(v, dst, &s_dst_mask) as f64) >= consts.low_degree_threshold)
        .collect();
    let mut d0_prime_mask = vec![false; n];
    for &v in &d0_prime {
        d0_prime_mask[v] = true;
    }

    // Mates of the low-degree remainder, on the secondary side.
    let mut low_mates_mask = vec![false; n];
    for &v in &p_dst {
        if !d0_prime_mask[v] {
            low_mates_mask[view.mate_p[v]] = true;
        }
    }

    // D₀: src-matched vertices with at most k₀ dst-edges into those mates.
    let d0: Vec<usize> = p_src
        .iter()
        .copied()
        .filter(|&v| (view.deg_into(v, dst, &low_mates_mask) as f64) <= consts.k0)
        .collect();
    let mut d0_mask = vec![false; n];
    for &v in &d0 {
        d0_mask[v] = true;
    }

    // W-sequence: start from W₀ = p_src \ D₀, then repeatedly absorb the
    // lowest-index dst-matched vertex with at least k₀ dst-edges into the
    // mates of the current W.
    let w0: Vec<usize> = p_src.iter().copied().filter(|&v| !d0_mask[v]).collect();
    let mut w_mask = vec![false; n];
    let mut w_mates_mask = vec![false; n];
    for &v in &w0 {
        w_mask[v] = true;
        w_mates_mask[view.mate_p[v]] = true;
    }
    let mut w_added = Vec::new();
    loop {
        let next = p_dst.iter().copied().find(|&v| {
            !w_mask[v] && (view.deg_into(v, dst, &w_mates_mask) as f64) >= consts.k0
        });
        match next {
            Some(v) => {
                w_mask[v] = true;
                w_mates_mask[view.mate_p[v]] = true;
                w_added.push(v);
            }
            None => break,
        }
    }
    let t_star = w_added.len();

    let r0: Vec<usize> = p_dst.iter().copied().filter(|&v| !w_mask[v]).collect();
    let mut r0_mask = vec![false; n];
    for &v in &r0 {
        r0_mask[v] = true;
    }

    // Layers from the seed, while it made it into R₀.
    let seed_in_r0 = r0_mask[seed];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    let mut neighbor_layers: Vec<Vec<usize>> = Vec::new();
    let mut transitions = Vec::new();
    let mut goal_met = false;
    let mut goal_layer = None;
    let mut stalled = false;

    if seed_in_r0 {
        let mut used_mask = vec![false; n];
        used_mask[seed] = true;
        layers.push(vec![seed]);
        loop {
            let i = layers.len() - 1;
            let cur = &layers[i];

            // dst-neighborhood of the current layer, on the secondary side.
            let mut nbr_mask = vec![false; n];
            for &v in cur {
                for &(w, c) in view.adj_p(v) {
                    if c as usize == dst {
                        nbr_mask[w as usize] = true;
                    }
                }
            }
            let nbrs = sorted_from_mask(&nbr_mask);

            if (cur.len() as f64) >= consts.layer_goal {
                goal_met = true;
                goal_layer = Some(i);
                neighbor_layers.push(nbrs);
                break;
            }
            neighbor_layers.push(nbrs.clone());

            let next: Vec<usize> = nbrs
                .iter()
                .map(|&w| view.mate_s[w])
                .filter(|&v| r0_mask[v] && !used_mask[v])
                .collect();
            let mut next = next;
            next.sort_unstable();

            transitions.push(LayerTransition {
                from_size: cur.len(),
                to_size: next.len(),
                required_factor: consts.growth_factor,
                hypothesis_applies: (cur.len() as f64) <= consts.hypothesis_bound,
                met: (next.len() as f64) >= consts.growth_factor * cur.len() as f64,
            });

            if next.is_empty() {
                stalled = true;
                break;
            }
            for &v in &next {
                used_mask[v] = true;
            }
            layers.push(next);
        }
    }

    SideTrace {
        side: view.side,
        d0_prime,
        d0,
        w0,
        w_added,
        t_star,
        r0,
        seed,
        seed_in_r0,
        layers,
        neighbor_layers,
        transitions,
        goal_met,
        goal_layer,
        stalled,
    }
}

/// Execute the full two-sided construction for the color pair `(src, dst)`
/// seeded at the `dst`-matched vertex `a0 ∈ A`.
///
/// Preconditions (argument errors): `m` is a valid perfect matching; `src ≠
/// dst` are colors of `g`; the matching carries at least `βn` edges of each
/// of the two colors; the matching edge at `a0` has color `dst`; `n ≥ 3`.
/// The mirrored run is seeded at `b0 = M(a0)`.
pub fn expansion_trace(
    g: &ColoredBipartiteGraph,
    m: &Matching,
    src: usize,
    dst: usize,
    beta: f64,
    alpha_dst: f64,
    a0: usize,
) -> Result<ExpansionTrace> {
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
            "the expansion construction needs a perfect matching".into(),
        ));
    }
    let consts = ExpansionConstants::new(g.n() as f64, alpha_dst, beta)?;

    let prof = profile(g, m)?;
    let need = beta * g.n() as f64;
    for (name, color) in [("src", src), ("dst", dst)] {
        if (prof.count(color) as f64) < need {
            return Err(Error::Argument(format!(
                "matching carries {} edges of the {name} color, below βn = {need}",
                prof.count(color)
            )));
        }
    }
    if a0 >= g.n() {
        return Err(Error::Argument(format!(
            "a0 = {a0} out of range for n = {}",
            g.n()
        )));
    }
    let b0 = m.mate_of_a(a0).expect("perfect");
    if g.color_of(a0, b0) != Some(dst) {
        return Err(Error::Argument(format!(
            "the matching edge at a0 = {a0} must have the dst color {dst}"
        )));
    }

    let forward = build_side(&SideView::new(g, m, Side::A), src, dst, &consts, a0);
    let mirror = build_side(&SideView::new(g, m, Side::B), src, dst, &consts, b0);

    Ok(ExpansionTrace {
        n: g.n(),
        src,
        dst,
        beta,
        alpha_dst,
        constants: consts,
        forward,
        mirror,
    })
}
