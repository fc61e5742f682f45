//! Finite-`n` audit of the six structural predicates that hold w.h.p. in the
//! random model: exact evaluation of each predicate on explicit witness
//! sets, and a randomized search for violating witnesses.
//!
//! The predicates are asymptotic statements about all vertex sets of certain
//! sizes; at a concrete `n` the audit samples candidate witnesses (uniform
//! ones plus adversarial heuristics where a worst case is cheap to build)
//! and reports every violation found. Some witness-size constraints are
//! outright infeasible below astronomical `n` — e.g. conditions (b) and (c)
//! need `ln n ≥ γ_b` — and the audit reports that as a structured
//! infeasibility instead of quietly testing nothing.
//!
//! All thresholds use natural logarithms and are kept real-valued; only
//! witness-set sizes are integers (with the explicit ceilings noted below).

use crate::error::{Error, Result};
use crate::graph::{ColoredBipartiteGraph, Side};
use crate::rng::{self, Stream};
use crate::ser;
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

/// The six audited conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::A,
        Condition::B,
        Condition::C,
        Condition::D,
        Condition::E,
        Condition::F,
    ];

    pub fn letter(self) -> char {
        match self {
            Condition::A => 'a',
            Condition::B => 'b',
            Condition::C => 'c',
            Condition::D => 'd',
            Condition::E => 'e',
            Condition::F => 'f',
        }
    }
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl std::str::FromStr for Condition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Condition::A),
            "b" => Ok(Condition::B),
            "c" => Ok(Condition::C),
            "d" => Ok(Condition::D),
            "e" => Ok(Condition::E),
            "f" => Ok(Condition::F),
            other => Err(Error::Argument(format!(
                "unknown condition {other:?}, expected one of a-f"
            ))),
        }
    }
}

/// Parameters the audited predicates are stated in: the profile margin `β`,
/// the condition-(a) constant `η`, the condition-(e) constants `δ` and `γ`,
/// and the color `i` under audit (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaParams {
    pub beta: f64,
    pub eta: f64,
    pub delta: f64,
    pub gamma: f64,
    #[serde(serialize_with = "ser::one_based")]
    pub color: usize,
}

impl LemmaParams {
    /// Validated constructor; `q` is the color count of the graphs this will
    /// be used with. Requires `0 < β < 1/q` (the regime the predicates serve)
    /// and positive `η`, `δ`, `γ`.
    pub fn new(
        beta: f64,
        eta: f64,
        delta: f64,
        gamma: f64,
        color: usize,
        q: usize,
    ) -> Result<Self> {
        if q == 0 {
            return Err(Error::Argument("q must be at least 1".into()));
        }
        if !(beta > 0.0 && beta < 1.0 / q as f64) {
            return Err(Error::Argument(format!(
                "beta must lie in (0, 1/q) = (0, {}), got {beta}",
                1.0 / q as f64
            )));
        }
        for (name, v) in [("eta", eta), ("delta", delta), ("gamma", gamma)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Argument(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        if color >= q {
            return Err(Error::Argument(format!(
                "color {color} out of range for q = {q}"
            )));
        }
        Ok(LemmaParams {
            beta,
            eta,
            delta,
            gamma,
            color,
        })
    }
}

/// The derived constants of the audited predicates and of the expansion
/// construction, evaluated at a real-valued `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdConstants {
    /// `γ_a = η / (20 α_i)` — condition (a) size window.
    pub gamma_a: f64,
    /// `γ_b = 10 ln(e/β) / α_i` — conditions (b), (c).
    pub gamma_b: f64,
    /// `γ_d = (4/α_i) ln(e/β)` — condition (d).
    pub gamma_d: f64,
    /// `k = k₀ = 10 ln n / ln ln n` — condition (c) and the expansion cutoff.
    pub k: f64,
    /// `α_i β ln n / 10` — low-degree cutoff of the expansion construction.
    pub low_degree_threshold: f64,
    /// `α_i β ln n / 25` — required per-layer growth factor.
    pub growth_factor: f64,
    /// `α_i β n / 5000` — layer size at which expansion stops.
    pub layer_goal: f64,
}

/// Evaluate all derived constants at `n` (real-valued — the formulas are
/// meaningful at non-integer `n`; callers pass graph sizes as `f64`).
/// Requires `n ≥ 3` so that `ln ln n > 0`, and `α_i ∈ (0, 1]`.
pub fn threshold_constants(n: f64, alpha_i: f64, params: &LemmaParams) -> Result<ThresholdConstants> {
    if !(n.is_finite() && n >= 3.0) {
        return Err(Error::Argument(format!(
            "constants need n >= 3 (so ln ln n > 0), got {n}"
        )));
    }
    if !(alpha_i.is_finite() && alpha_i > 0.0 && alpha_i <= 1.0) {
        return Err(Error::Argument(format!(
            "alpha_i must lie in (0, 1], got {alpha_i}"
        )));
    }
    let ln_n = n.ln();
    let beta = params.beta;
    Ok(ThresholdConstants {
        gamma_a: params.eta / (20.0 * alpha_i),
        gamma_b: 10.0 * (std::f64::consts::E / beta).ln() / alpha_i,
        gamma_d: (4.0 / alpha_i) * (std::f64::consts::E / beta).ln(),
        k: 10.0 * ln_n / ln_n.ln(),
        low_degree_threshold: alpha_i * beta * ln_n / 10.0,
        growth_factor: alpha_i * beta * ln_n / 25.0,
        layer_goal: alpha_i * beta * n / 5000.0,
    })
}

/// Witness sets for one condition: `s ⊆ A`, `t ⊆ B`, and where applicable
/// `x ⊆ s`, `z ⊆ t`. Serializes 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSets {
    #[serde(serialize_with = "ser::one_based_vec")]
    pub s: Vec<usize>,
    #[serde(serialize_with = "ser::one_based_vec")]
    pub t: Vec<usize>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser::one_based_vec_opt"
    )]
    pub x: Option<Vec<usize>>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser::one_based_vec_opt"
    )]
    pub z: Option<Vec<usize>>,
}

impl WitnessSets {
    pub fn new(s: Vec<usize>, t: Vec<usize>) -> Self {
        WitnessSets {
            s,
            t,
            x: None,
            z: None,
        }
    }

    pub fn with_x(mut self, x: Vec<usize>) -> Self {
        self.x = Some(x);
        self
    }

    pub fn with_z(mut self, z: Vec<usize>) -> Self {
        self.z = Some(z);
        self
    }
}

/// Result of evaluating one condition on one witness.
///
/// `observed` vs `threshold` per condition:
/// * (a) color-`i` edge count `e_i(S,T)` vs `2 α_i η |S| ln n`; holds when
///   `observed ≤ threshold`.
/// * (b) number of `x ∈ X` with fewer than `α_i β ln n / 10` color-`i`
///   neighbors in `T`, vs `|X|`; holds when `observed < threshold` (the
///   violation needs *every* `x` to be low-degree).
/// * (c) number of `x ∈ X` with at least `k` color-`i` neighbors in `Z`, vs
///   `|X|`; holds when `observed < threshold`.
/// * (d) number of `t ∈ T` with no color-`i` neighbor in `S`, vs
///   `γ_d n / ln n`; holds when `observed ≤ threshold`.
/// * (e) `e_i(S,T)` vs `δ |S| ln n / ln ln n`; holds when
///   `observed < threshold`.
/// * (f) `e_i(S,T)` vs the minimum count 1; holds when
///   `observed ≥ threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionEval {
    pub condition: Condition,
    pub holds: bool,
    pub observed: f64,
    pub threshold: f64,
}

fn checked_mask(
    g: &ColoredBipartiteGraph,
    set: &[usize],
    what: &str,
) -> Result<Vec<bool>> {
    let mut mask = vec![false; g.n()];
    for &v in set {
        if v >= g.n() {
            return Err(Error::Argument(format!(
                "{what} contains vertex {v}, out of range for n = {}",
                g.n()
            )));
        }
        if std::mem::replace(&mut mask[v], true) {
            return Err(Error::Argument(format!("{what} contains vertex {v} twice")));
        }
    }
    Ok(mask)
}

fn require_subset(sub: &[usize], sup_mask: &[bool], sub_name: &str, sup_name: &str) -> Result<()> {
    for &v in sub {
        if !sup_mask[v] {
            return Err(Error::Argument(format!(
                "{sub_name} must be a subset of {sup_name}; vertex {v} is not in {sup_name}"
            )));
        }
    }
    Ok(())
}

fn require_size(
    cond: Condition,
    name: &str,
    got: usize,
    want: usize,
) -> Result<()> {
    if got != want {
        return Err(Error::Argument(format!(
            "condition ({cond}) requires |{name}| = {want}, got {got}"
        )));
    }
    Ok(())
}

fn require_min_size(cond: Condition, name: &str, got: usize, bound: f64) -> Result<()> {
    if (got as f64) < bound {
        return Err(Error::Argument(format!(
            "condition ({cond}) requires |{name}| >= {bound}, got {got}"
        )));
    }
    Ok(())
}

fn count_color_edges_sets(
    g: &ColoredBipartiteGraph,
    s: &[usize],
    t_mask: &[bool],
    color: usize,
) -> usize {
    s.iter()
        .map(|&a| {
            g.adj_a(a)
                .iter()
                .filter(|&&(b, c)| c as usize == color && t_mask[b as usize])
                .count()
        })
        .sum()
}

/// Evaluate one condition's predicate on explicit witness sets.
///
/// The witness must satisfy the condition's size constraints *exactly* (the
/// ceilings below); anything else is an argument error naming the violated
/// constraint, since evaluating the predicate on sets it does not quantify
/// over would be meaningless. Sizes, with `L = ln n`:
/// * (a) `γ_a L ≤ |S| ≤ γ_a n/L` and `|T| ≤ α_i η |S| L`;
/// * (b) `|S|, |T| ≥ βn` and `X ⊆ S`, `|X| = ⌈γ_b |S| / L⌉`;
/// * (c) `|S|, |T| ≥ βn`, `X ⊆ S`, `|X| = ⌈|S| / L⌉`, `Z ⊆ T`,
///   `|Z| = ⌈γ_b n / L⌉`;
/// * (d) `|S|, |T| ≥ βn`;
/// * (e) `|S| = |T| = ⌈γ n / L⌉`;
/// * (f) `|S|, |T| ≥ βn / 10`.
pub fn evaluate_condition(
    g: &ColoredBipartiteGraph,
    condition: Condition,
    sets: &WitnessSets,
    params: &LemmaParams,
    alpha_i: f64,
) -> Result<ConditionEval> {
    if params.color >= g.q() {
        return Err(Error::Argument(format!(
            "params color {} out of range for q = {}",
            params.color,
            g.q()
        )));
    }
    let n = g.n() as f64;
    let consts = threshold_constants(n, alpha_i, params)?;
    let ln_n = n.ln();
    let i = params.color;

    let s_mask = checked_mask(g, &sets.s, "S")?;
    let t_mask = checked_mask(g, &sets.t, "T")?;
    let (s_len, t_len) = (sets.s.len(), sets.t.len());

    let eval = |holds: bool, observed: f64, threshold: f64| ConditionEval {
        condition,
        holds,
        observed,
        threshold,
    };

    match condition {
        Condition::A => {
            let lo = consts.gamma_a * ln_n;
            let hi = consts.gamma_a * n / ln_n;
            if !((s_len as f64) >= lo && (s_len as f64) <= hi) {
                return Err(Error::Argument(format!(
                    "condition (a) requires γ_a ln n = {lo} <= |S| <= γ_a n/ln n = {hi}, got {s_len}"
                )));
            }
            let t_cap = alpha_i * params.eta * s_len as f64 * ln_n;
            if (t_len as f64) > t_cap {
                return Err(Error::Argument(format!(
                    "condition (a) requires |T| <= α_i η |S| ln n = {t_cap}, got {t_len}"
                )));
            }
            let observed = count_color_edges_sets(g, &sets.s, &t_mask, i) as f64;
            let threshold = 2.0 * alpha_i * params.eta * s_len as f64 * ln_n;
            Ok(eval(observed <= threshold, observed, threshold))
        }
        Condition::B => {
            require_min_size(condition, "S", s_len, params.beta * n)?;
            require_min_size(condition, "T", t_len, params.beta * n)?;
            let x = sets.x.as_deref().ok_or_else(|| {
                Error::Argument("condition (b) needs a witness set X".into())
            })?;
            require_subset(x, &s_mask, "X", "S")?;
            checked_mask(g, x, "X")?;
            let want = (consts.gamma_b * s_len as f64 / ln_n).ceil() as usize;
            require_size(condition, "X", x.len(), want)?;
            let cutoff = consts.low_degree_threshold;
            let observed = x
                .iter()
                .filter(|&&v| {
                    let deg = g
                        .adj_a(v)
                        .iter()
                        .filter(|&&(b, c)| c as usize == i && t_mask[b as usize])
                        .count();
                    (deg as f64) < cutoff
                })
                .count() as f64;
            let threshold = x.len() as f64;
            Ok(eval(observed < threshold, observed, threshold))
        }
        Condition::C => {
            require_min_size(condition, "S", s_len, params.beta * n)?;
            require_min_size(condition, "T", t_len, params.beta * n)?;
            let x = sets.x.as_deref().ok_or_else(|| {
                Error::Argument("condition (c) needs a witness set X".into())
            })?;
            let z = sets.z.as_deref().ok_or_else(|| {
                Error::Argument("condition (c) needs a witness set Z".into())
            })?;
            require_subset(x, &s_mask, "X", "S")?;
            require_subset(z, &t_mask, "Z", "T")?;
            checked_mask(g, x, "X")?;
            let z_mask = checked_mask(g, z, "Z")?;
            require_size(condition, "X", x.len(), (s_len as f64 / ln_n).ceil() as usize)?;
            require_size(
                condition,
                "Z",
                z.len(),
                (consts.gamma_b * n / ln_n).ceil() as usize,
            )?;
            let observed = x
                .iter()
                .filter(|&&v| {
                    let deg = g
                        .adj_a(v)
                        .iter()
                        .filter(|&&(b, c)| c as usize == i && z_mask[b as usize])
                        .count();
                    (deg as f64) >= consts.k
                })
                .count() as f64;
            let threshold = x.len() as f64;
            Ok(eval(observed < threshold, observed, threshold))
        }
        Condition::D => {
            require_min_size(condition, "S", s_len, params.beta * n)?;
            require_min_size(condition, "T", t_len, params.beta * n)?;
            let observed = sets
                .t
                .iter()
                .filter(|&&v| {
                    !g.adj_b(v)
                        .iter()
                        .any(|&(a, c)| c as usize == i && s_mask[a as usize])
                })
                .count() as f64;
            let threshold = consts.gamma_d * n / ln_n;
            Ok(eval(observed <= threshold, observed, threshold))
        }
        Condition::E => {
            let want = (params.gamma * n / ln_n).ceil() as usize;
            require_size(condition, "S", s_len, want)?;
            require_size(condition, "T", t_len, want)?;
            let observed = count_color_edges_sets(g, &sets.s, &t_mask, i) as f64;
            let threshold = params.delta * s_len as f64 * ln_n / ln_n.ln();
            Ok(eval(observed < threshold, observed, threshold))
        }
        Condition::F => {
            require_min_size(condition, "S", s_len, params.beta * n / 10.0)?;
            require_min_size(condition, "T", t_len, params.beta * n / 10.0)?;
            if s_len == 0 || t_len == 0 {
                return Err(Error::Argument(
                    "condition (f) needs non-empty S and T".into(),
                ));
            }
            let observed = count_color_edges_sets(g, &sets.s, &t_mask, i) as f64;
            Ok(eval(observed >= 1.0, observed, 1.0))
        }
    }
}

/// Why no valid witness of a condition exists at this `n`, or `None` when
/// witnesses exist.
pub fn witness_infeasibility(
    n: usize,
    condition: Condition,
    params: &LemmaParams,
    alpha_i: f64,
) -> Result<Option<String>> {
    let consts = threshold_constants(n as f64, alpha_i, params)?;
    let ln_n = (n as f64).ln();
    Ok(match condition {
        Condition::A => {
            let lo = (consts.gamma_a * ln_n).ceil() as usize;
            let hi = (consts.gamma_a * n as f64 / ln_n).floor().min(n as f64) as usize;
            (lo.max(1) > hi).then(|| {
                format!(
                    "condition (a) size window [γ_a ln n, γ_a n/ln n] = \
                     [{}, {}] contains no feasible |S|",
                    consts.gamma_a * ln_n,
                    consts.gamma_a * n as f64 / ln_n
                )
            })
        }
        Condition::B => (consts.gamma_b > ln_n).then(|| {
            format!(
                "condition (b) needs |X| = ⌈γ_b |S|/ln n⌉ <= |S|, i.e. ln n >= γ_b, \
                 but ln n = {ln_n} < γ_b = {}; smallest feasible n is about e^γ_b",
                consts.gamma_b
            )
        }),
        Condition::C => (consts.gamma_b > ln_n).then(|| {
            format!(
                "condition (c) needs |Z| = ⌈γ_b n/ln n⌉ <= n, i.e. ln n >= γ_b, \
                 but ln n = {ln_n} < γ_b = {}; smallest feasible n is about e^γ_b",
                consts.gamma_b
            )
        }),
        Condition::D => None,
        Condition::E => (params.gamma > ln_n).then(|| {
            format!(
                "condition (e) needs |S| = ⌈γ n/ln n⌉ <= n, i.e. ln n >= γ = {}",
                params.gamma
            )
        }),
        Condition::F => None,
    })
}

/// Configuration of a randomized violation hunt.
#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub condition: Condition,
    pub params: LemmaParams,
    /// Color probability `α_i` for the audited color (enters the thresholds).
    pub alpha_i: f64,
    pub trials: u64,
    pub seed: u64,
    /// Extra witnesses evaluated before the random trials — the adversarial
    /// pool. Must satisfy the condition's size constraints exactly.
    pub planted: Vec<WitnessSets>,
}

/// One violating witness found by the audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationRecord {
    /// Trial index, or `None` for a planted witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
    /// Index into the planted pool, for planted witnesses.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planted_index: Option<usize>,
    pub sets: WitnessSets,
    pub observed: f64,
    pub threshold: f64,
}

/// The audit's full findings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    pub condition: Condition,
    pub n: usize,
    pub params: LemmaParams,
    pub alpha_i: f64,
    pub seed: u64,
    pub trials_requested: u64,
    pub trials_executed: u64,
    pub planted_evaluated: usize,
    /// Whether witnesses of this condition exist at this `n` at all.
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infeasible_reason: Option<String>,
    pub violations: Vec<ViolationRecord>,
}

/// Vertices of one side ordered by (color-`i` degree, index) ascending.
fn by_ascending_color_degree(g: &ColoredBipartiteGraph, side: Side, color: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..g.n()).collect();
    idx.sort_by_key(|&v| (g.color_degree(side, v, color), v));
    idx
}

fn uniform_subset(rng: &mut Stream, n: usize, k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = rand::seq::index::sample(rng, n, k).into_iter().collect();
    v.sort_unstable();
    v
}

fn uniform_subset_of(rng: &mut Stream, pool: &[usize], k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = rand::seq::index::sample(rng, pool.len(), k)
        .into_iter()
        .map(|j| pool[j])
        .collect();
    v.sort_unstable();
    v
}

struct Sampler<'a> {
    g: &'a ColoredBipartiteGraph,
    params: &'a LemmaParams,
    alpha_i: f64,
    consts: ThresholdConstants,
    ln_n: f64,
    /// A-side and B-side vertices by ascending color-i degree.
    low_a: Vec<usize>,
    low_b: Vec<usize>,
}

impl<'a> Sampler<'a> {
    fn new(g: &'a ColoredBipartiteGraph, params: &'a LemmaParams, alpha_i: f64) -> Result<Self> {
        let consts = threshold_constants(g.n() as f64, alpha_i, params)?;
        Ok(Sampler {
            g,
            params,
            alpha_i,
            consts,
            ln_n: (g.n() as f64).ln(),
            low_a: by_ascending_color_degree(g, Side::A, params.color),
            low_b: by_ascending_color_degree(g, Side::B, params.color),
        })
    }

    fn coin(&self, rng: &mut Stream) -> bool {
        rng.random_range(0..2u32) == 1
    }

    /// A set of `k` vertices: uniform, or the `k` of lowest color-i degree.
    fn side_set(&self, rng: &mut Stream, side: Side, k: usize, adversarial: bool) -> Vec<usize> {
        if adversarial {
            let pool = match side {
                Side::A => &self.low_a,
                Side::B => &self.low_b,
            };
            let mut v: Vec<usize> = pool[..k].to_vec();
            v.sort_unstable();
            v
        } else {
            uniform_subset(rng, self.g.n(), k)
        }
    }

    /// The `k` members of `s` with fewest color-i neighbors in `t` (ties by
    /// index), for condition (b)'s low-degree witness X.
    fn lowest_degree_into(&self, s: &[usize], t_mask: &[bool], k: usize) -> Vec<usize> {
        let mut keyed: Vec<(usize, usize)> = s
            .iter()
            .map(|&v| {
                let deg = self
                    .g
                    .adj_a(v)
                    .iter()
                    .filter(|&&(b, c)| c as usize == self.params.color && t_mask[b as usize])
                    .count();
                (deg, v)
            })
            .collect();
        keyed.sort_unstable();
        let mut out: Vec<usize> = keyed[..k].iter().map(|&(_, v)| v).collect();
        out.sort_unstable();
        out
    }

    /// Sample one witness for `condition`. The caller guarantees
    /// feasibility. Uniform sizes in the allowed windows; where a condition
    /// has a natural adversarial heuristic — (a) `T = N_i(S)` truncated to
    /// the cap by most S-edges, (b)/(d) sets built from lowest
    /// color-i-degree vertices — a coin decides between uniform and
    /// adversarial.
    fn sample(&self, condition: Condition, rng: &mut Stream) -> WitnessSets {
        let n = self.g.n();
        let nf = n as f64;
        let beta_n = self.params.beta * nf;
        let i = self.params.color;
        match condition {
            Condition::A => {
                let lo = ((self.consts.gamma_a * self.ln_n).ceil() as usize).max(1);
                let hi = ((self.consts.gamma_a * nf / self.ln_n).floor() as usize).min(n);
                let s_size = rng.random_range(lo..=hi);
                let s = uniform_subset(rng, n, s_size);
                let t_cap =
                    ((self.alpha_i * self.params.eta * s_size as f64 * self.ln_n).floor()
                        as usize)
                        .min(n);
                let t = if self.coin(rng) {
                    // Adversarial: all color-i neighbors of S, truncated to
                    // the cap by descending S-edge count.
                    let nbrs = self
                        .g
                        .neighbors_colored(Side::A, &s, i)
                        .expect("sampled sets are valid");
                    if nbrs.len() <= t_cap {
                        nbrs
                    } else {
                        let s_mask = {
                            let mut m = vec![false; n];
                            for &v in &s {
                                m[v] = true;
                            }
                            m
                        };
                        let mut keyed: Vec<(usize, usize)> = nbrs
                            .iter()
                            .map(|&b| {
                                let cnt = self
                                    .g
                                    .adj_b(b)
                                    .iter()
                                    .filter(|&&(a, c)| {
                                        c as usize == i && s_mask[a as usize]
                                    })
                                    .count();
                                (cnt, b)
                            })
                            .collect();
                        keyed.sort_unstable_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
                        let mut t: Vec<usize> =
                            keyed[..t_cap].iter().map(|&(_, b)| b).collect();
                        t.sort_unstable();
                        t
                    }
                } else if t_cap == 0 {
                    Vec::new()
                } else {
                    let t_size = rng.random_range(1..=t_cap);
                    uniform_subset(rng, n, t_size)
                };
                WitnessSets::new(s, t)
            }
            Condition::B => {
                let lo = (beta_n.ceil() as usize).max(1);
                let s_size = rng.random_range(lo..=n);
                let t_size = rng.random_range(lo..=n);
                let adv_s = self.coin(rng);
                let s = self.side_set(rng, Side::A, s_size, adv_s);
                let adv_t = self.coin(rng);
                let t = self.side_set(rng, Side::B, t_size, adv_t);
                let x_size = (self.consts.gamma_b * s_size as f64 / self.ln_n).ceil() as usize;
                let x = if self.coin(rng) {
                    let mut t_mask = vec![false; n];
                    for &v in &t {
                        t_mask[v] = true;
                    }
                    self.lowest_degree_into(&s, &t_mask, x_size)
                } else {
                    uniform_subset_of(rng, &s, x_size)
                };
                WitnessSets::new(s, t).with_x(x)
            }
            Condition::C => {
                let lo = (beta_n.ceil() as usize).max(1);
                let z_size = (self.consts.gamma_b * nf / self.ln_n).ceil() as usize;
                let s_size = rng.random_range(lo..=n);
                let t_size = rng.random_range(lo.max(z_size)..=n);
                let s = uniform_subset(rng, n, s_size);
                let t = uniform_subset(rng, n, t_size);
                let x_size = (s_size as f64 / self.ln_n).ceil() as usize;
                let x = uniform_subset_of(rng, &s, x_size);
                let z = uniform_subset_of(rng, &t, z_size);
                WitnessSets::new(s, t).with_x(x).with_z(z)
            }
            Condition::D => {
                let lo = (beta_n.ceil() as usize).max(1);
                let s_size = rng.random_range(lo..=n);
                let t_size = rng.random_range(lo..=n);
                let adv_s = self.coin(rng);
                let s = self.side_set(rng, Side::A, s_size, adv_s);
                let adv_t = self.coin(rng);
                let t = self.side_set(rng, Side::B, t_size, adv_t);
                WitnessSets::new(s, t)
            }
            Condition::E => {
                let size = (self.params.gamma * nf / self.ln_n).ceil() as usize;
                let s = uniform_subset(rng, n, size);
                let t = uniform_subset(rng, n, size);
                WitnessSets::new(s, t)
            }
            Condition::F => {
                let lo = ((beta_n / 10.0).ceil() as usize).max(1);
                let s_size = rng.random_range(lo..=n);
                let t_size = rng.random_range(lo..=n);
                let s = uniform_subset(rng, n, s_size);
                let t = uniform_subset(rng, n, t_size);
                WitnessSets::new(s, t)
            }
        }
    }
}

/// Hunt for witnesses violating one condition: evaluate the planted pool,
/// then `trials` sampled witnesses (trial `j` drawn from the sub-stream
/// `derive_seed(seed, [j])`, so the hunt is deterministic and parallelism
/// cannot reorder anything observable).
///
/// When the condition's witness sizes are infeasible at this `n`, the report
/// says so and carries zero trials rather than inventing undersized sets.
pub fn audit_random(g: &ColoredBipartiteGraph, cfg: &AuditConfig) -> Result<ViolationReport> {
    if cfg.params.color >= g.q() {
        return Err(Error::Argument(format!(
            "params color {} out of range for q = {}",
            cfg.params.color,
            g.q()
        )));
    }
    if let Some(reason) = witness_infeasibility(g.n(), cfg.condition, &cfg.params, cfg.alpha_i)? {
        return Ok(ViolationReport {
            condition: cfg.condition,
            n: g.n(),
            params: cfg.params,
            alpha_i: cfg.alpha_i,
            seed: cfg.seed,
            trials_requested: cfg.trials,
            trials_executed: 0,
            planted_evaluated: 0,
            feasible: false,
            infeasible_reason: Some(reason),
            violations: Vec::new(),
        });
    }

    let mut violations = Vec::new();
    for (idx, sets) in cfg.planted.iter().enumerate() {
        let eval = evaluate_condition(g, cfg.condition, sets, &cfg.params, cfg.alpha_i)?;
        if !eval.holds {
            violations.push(ViolationRecord {
                trial: None,
                planted_index: Some(idx),
                sets: sets.clone(),
                observed: eval.observed,
                threshold: eval.threshold,
            });
        }
    }

    let sampler = Sampler::new(g, &cfg.params, cfg.alpha_i)?;
    let mut sampled: Vec<ViolationRecord> = (0..cfg.trials)
        .into_par_iter()
        .filter_map(|trial| {
            let mut rng = rng::stream(rng::derive_seed(cfg.seed, &[trial]));
            let sets = sampler.sample(cfg.condition, &mut rng);
            let eval = evaluate_condition(g, cfg.condition, &sets, &cfg.params, cfg.alpha_i)
                .expect("sampled witnesses satisfy the size constraints");
            (!eval.holds).then(|| ViolationRecord {
                trial: Some(trial),
                planted_index: None,
                sets,
                observed: eval.observed,
                threshold: eval.threshold,
            })
        })
        .collect();
    violations.append(&mut sampled);

    Ok(ViolationReport {
        condition: cfg.condition,
        n: g.n(),
        params: cfg.params,
        alpha_i: cfg.alpha_i,
        seed: cfg.seed,
        trials_requested: cfg.trials,
        trials_executed: cfg.trials,
        planted_evaluated: cfg.planted.len(),
        feasible: true,
        infeasible_reason: None,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ColorLaw;

    fn close(a: f64, b: f64) {
        assert!(
            (a - b).abs() <= 1e-12 * b.abs().max(1.0),
            "{a} vs {b}"
        );
    }

    fn params(beta: f64, eta: f64) -> LemmaParams {
        LemmaParams::new(beta, eta, 5.0, 2.0, 0, 2).unwrap()
    }

    #[test]
    fn constants_match_formula_oracle() {
        let p = params(0.3, 1.0);
        let c = threshold_constants(2000.0, 0.5, &p).unwrap();
        close(c.gamma_b, 44.07945608651872);
        close(c.gamma_d, 17.631782434607487);
        close(c.low_degree_threshold, 0.11401353689313123);
        close(c.growth_factor, 0.045605414757252494);
        close(c.layer_goal, 0.06);

        let pa = params(0.3, 10.0);
        let ca = threshold_constants(2000.0, 0.5, &pa).unwrap();
        assert_eq!(ca.gamma_a, 1.0); // 10 / (20 · 0.5) exactly

        // k at n = e^e: ln n = e, ln ln n = 1, so k = 10e.
        let ce = threshold_constants(std::f64::consts::E.exp(), 0.5, &p).unwrap();
        close(ce.k, 27.18281828459045);
    }

    #[test]
    fn constants_positive_and_finite() {
        for (n, a) in [(3.0, 0.1), (100.0, 0.9), (1e6, 0.25)] {
            let p = LemmaParams::new(0.2, 1.5, 5.0, 2.0, 0, 3).unwrap();
            let c = threshold_constants(n, a, &p).unwrap();
            for v in [
                c.gamma_a,
                c.gamma_b,
                c.gamma_d,
                c.k,
                c.low_degree_threshold,
                c.growth_factor,
                c.layer_goal,
            ] {
                assert!(v.is_finite() && v > 0.0, "n={n} a={a}: {c:?}");
            }
        }
    }

    #[test]
    fn constants_domain() {
        let p = params(0.3, 1.0);
        assert!(threshold_constants(2.0, 0.5, &p).is_err());
        assert!(threshold_constants(2000.0, 0.0, &p).is_err());
        assert!(threshold_constants(2000.0, 1.5, &p).is_err());
        assert!(threshold_constants(f64::NAN, 0.5, &p).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(LemmaParams::new(0.5, 1.0, 5.0, 2.0, 0, 2).is_err()); // beta = 1/q
        assert!(LemmaParams::new(0.0, 1.0, 5.0, 2.0, 0, 2).is_err());
        assert!(LemmaParams::new(0.3, 0.0, 5.0, 2.0, 0, 2).is_err());
        assert!(LemmaParams::new(0.3, 1.0, -1.0, 2.0, 0, 2).is_err());
        assert!(LemmaParams::new(0.3, 1.0, 5.0, 2.0, 2, 2).is_err());
        assert!(LemmaParams::new(0.49, 1.0, 5.0, 2.0, 1, 2).is_ok());
    }

    #[test]
    fn condition_letters_round_trip() {
        for c in Condition::ALL {
            let s = c.to_string();
            assert_eq!(s.parse::<Condition>().unwrap(), c);
        }
        assert!("g".parse::<Condition>().is_err());
        assert_eq!("B".parse::<Condition>().unwrap(), Condition::B);
        assert_eq!(serde_json::to_string(&Condition::C).unwrap(), "\"c\"");
    }

    /// 12×12 fixture: a complete color-0 block between A{0,1,2} and
    /// B{0,1,2,3} (12 edges), plus diagonal color-1 padding. With η = 10,
    /// α_i = 0.5: γ_a = 1, so 3 ≤ |S| ≤ 4 is allowed, and the threshold for
    /// |S| = 3 is 30 ln 12 ≈ 74.5 — the dense block's 12 edges sit well
    /// under it.
    fn block_fixture() -> ColoredBipartiteGraph {
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in 0..4 {
                edges.push((a, b, 0));
            }
        }
        for v in 0..12 {
            edges.push((v, (v + 5) % 12, 1));
        }
        ColoredBipartiteGraph::new(12, 2, &edges).unwrap()
    }

    #[test]
    fn condition_a_hand_fixture() {
        let g = block_fixture();
        let p = LemmaParams::new(0.3, 10.0, 5.0, 2.0, 0, 2).unwrap();
        let sets = WitnessSets::new(vec![0, 1, 2], vec![0, 1, 2, 3]);
        let eval = evaluate_condition(&g, Condition::A, &sets, &p, 0.5).unwrap();
        assert!(eval.holds);
        assert_eq!(eval.observed, 12.0);
        close(eval.threshold, 74.54719949364001);

        // |S| outside the window [2.48, 4.83]:
        for s in [vec![0, 1], vec![0, 1, 2, 3, 4]] {
            let bad = WitnessSets::new(s, vec![0]);
            match evaluate_condition(&g, Condition::A, &bad, &p, 0.5) {
                Err(Error::Argument(msg)) => assert!(msg.contains("condition (a)")),
                other => panic!("expected argument error, got {other:?}"),
            }
        }
    }

    #[test]
    fn condition_d_counts_nonadjacent_vertices() {
        // n = 10, color 0 edges from S = {0, 1} reach B-vertices 0..4 only.
        let mut edges = vec![
            (0, 0, 0),
            (0, 1, 0),
            (1, 2, 0),
            (1, 3, 0),
        ];
        for v in 0..10 {
            edges.push((v, v, 1));
        }
        edges.retain(|&(a, b, c)| !(c == 1 && a == b && a < 4 && b < 2)); // keep it a set
        let g = ColoredBipartiteGraph::new(10, 2, &edges).unwrap();
        let p = LemmaParams::new(0.2, 1.0, 5.0, 2.0, 0, 2).unwrap();
        let sets = WitnessSets::new(vec![0, 1], (0..10).collect());
        let eval = evaluate_condition(&g, Condition::D, &sets, &p, 0.5).unwrap();
        // B-vertices 0..3 have a color-0 neighbor in S; 4..9 do not.
        assert_eq!(eval.observed, 6.0);
        let gamma_d = (4.0 / 0.5) * (std::f64::consts::E / 0.2).ln();
        close(eval.threshold, gamma_d * 10.0 / (10f64).ln());
        assert!(eval.holds);
    }

    #[test]
    fn conditions_b_c_infeasible_at_small_n() {
        let g = ColoredBipartiteGraph::generate_with_p(
            12,
            0.4,
            &ColorLaw::uniform(2).unwrap(),
            5,
        )
        .unwrap();
        let p = params(0.3, 1.0);
        for cond in [Condition::B, Condition::C] {
            let reason = witness_infeasibility(12, cond, &p, 0.5).unwrap();
            assert!(reason.is_some(), "{cond} should be infeasible at n = 12");

            let report = audit_random(
                &g,
                &AuditConfig {
                    condition: cond,
                    params: p,
                    alpha_i: 0.5,
                    trials: 10,
                    seed: 1,
                    planted: vec![],
                },
            )
            .unwrap();
            assert!(!report.feasible);
            assert_eq!(report.trials_executed, 0);
            assert!(report.violations.is_empty());
            assert!(report.infeasible_reason.unwrap().contains("γ_b"));

            // Direct evaluation under infeasible sizes is an argument error.
            let sets = WitnessSets::new((0..4).collect(), (0..4).collect())
                .with_x(vec![0])
                .with_z(vec![0]);
            assert!(matches!(
                evaluate_condition(&g, cond, &sets, &p, 0.5),
                Err(Error::Argument(_))
            ));
        }
        // (d) and (f) stay feasible at any n.
        assert!(witness_infeasibility(12, Condition::D, &p, 0.5)
            .unwrap()
            .is_none());
        assert!(witness_infeasibility(12, Condition::F, &p, 0.5)
            .unwrap()
            .is_none());
    }

    #[test]
    fn planted_violation_is_found_and_revalidates() {
        // Color 0 lives only between A{0..4} and B{0..4}; the witness
        // S = {5}, T = {5} has e_0(S, T) = 0, violating (f) at β n/10 = 0.3.
        let mut edges = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                edges.push((a, b, 0));
            }
        }
        for v in 0..10 {
            edges.push((v, (v + 5) % 10, 1));
        }
        let g = ColoredBipartiteGraph::new(10, 2, &edges).unwrap();
        let p = params(0.3, 1.0);
        let planted = WitnessSets::new(vec![5], vec![5]);

        let report = audit_random(
            &g,
            &AuditConfig {
                condition: Condition::F,
                params: p,
                alpha_i: 0.5,
                trials: 50,
                seed: 7,
                planted: vec![planted.clone()],
            },
        )
        .unwrap();
        assert!(report.feasible);
        assert_eq!(report.planted_evaluated, 1);
        let hit = report
            .violations
            .iter()
            .find(|v| v.planted_index == Some(0))
            .expect("planted violation must be reported");
        assert_eq!(hit.observed, 0.0);
        assert_eq!(hit.sets, planted);

        // Every reported witness re-validates as a violation.
        for v in &report.violations {
            let eval =
                evaluate_condition(&g, Condition::F, &v.sets, &p, 0.5).unwrap();
            assert!(!eval.holds);
            assert_eq!(eval.observed, v.observed);
        }
    }

    #[test]
    fn sampled_witnesses_satisfy_constraints_and_are_deterministic() {
        let g = ColoredBipartiteGraph::generate_with_p(
            40,
            0.25,
            &ColorLaw::uniform(2).unwrap(),
            99,
        )
        .unwrap();
        let p = LemmaParams::new(0.2, 1.0, 5.0, 2.0, 0, 2).unwrap();
        let sampler = Sampler::new(&g, &p, 0.5).unwrap();
        for cond in [Condition::A, Condition::D, Condition::E, Condition::F] {
            assert!(witness_infeasibility(40, cond, &p, 0.5).unwrap().is_none());
            for trial in 0..40u64 {
                let mut rng = rng::stream(rng::derive_seed(11, &[trial]));
                let sets = sampler.sample(cond, &mut rng);
                let mut rng2 = rng::stream(rng::derive_seed(11, &[trial]));
                assert_eq!(sets, sampler.sample(cond, &mut rng2), "{cond} {trial}");
                // Must pass the strict evaluator's constraint checks.
                evaluate_condition(&g, cond, &sets, &p, 0.5)
                    .unwrap_or_else(|e| panic!("{cond} trial {trial}: {e}"));
            }
        }
    }

    #[test]
    fn audit_reports_are_deterministic() {
        let g = ColoredBipartiteGraph::generate_with_p(
            30,
            0.3,
            &ColorLaw::uniform(2).unwrap(),
            123,
        )
        .unwrap();
        let cfg = AuditConfig {
            condition: Condition::F,
            params: params(0.3, 1.0),
            alpha_i: 0.5,
            trials: 200,
            seed: 42,
            planted: vec![],
        };
        let r1 = audit_random(&g, &cfg).unwrap();
        let r2 = audit_random(&g, &cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
        assert_eq!(r1.trials_executed, 200);
    }

    #[test]
    fn witness_sets_serialize_one_based() {
        let w = WitnessSets::new(vec![0, 2], vec![1]).with_x(vec![0]);
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["s"], serde_json::json!([1, 3]));
        assert_eq!(json["t"], serde_json::json!([2]));
        assert_eq!(json["x"], serde_json::json!([1]));
        assert!(json.get("z").is_none());
    }
}
