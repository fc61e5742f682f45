//! Colored bipartite graphs: representation, the random model, color-aware
//! queries, and the text interchange format.
//!
//! A graph lives on vertex sides `A` and `B`, both of size `n`, with every
//! edge carrying one of `q` colors. Vertices and colors are 0-based here;
//! the text format (and all JSON artifacts) are 1-based.

use crate::error::{Error, Result};
use crate::rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Which side of the bipartition a vertex set lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// Color distribution `α = (α_1, …, α_q)`: entries strictly positive and
/// summing to 1 within [`ColorLaw::SUM_TOLERANCE`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ColorLaw {
    alphas: Vec<f64>,
}

impl ColorLaw {
    /// Allowed absolute deviation of `Σ α_i` from 1.
    pub const SUM_TOLERANCE: f64 = 1e-12;

    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::Argument("color law needs at least one color".into()));
        }
        if let Some(a) = alphas.iter().find(|a| !a.is_finite() || **a <= 0.0) {
            return Err(Error::Argument(format!(
                "color probabilities must be finite and positive, got {a}"
            )));
        }
        let sum: f64 = alphas.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::Argument(format!(
                "color probabilities must sum to 1 (within {}), got {sum}",
                Self::SUM_TOLERANCE
            )));
        }
        Ok(ColorLaw { alphas })
    }

    /// The uniform law on `q` colors.
    pub fn uniform(q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::Argument("color law needs at least one color".into()));
        }
        Ok(ColorLaw {
            alphas: vec![1.0 / q as f64; q],
        })
    }

    pub fn q(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn alpha(&self, color: usize) -> f64 {
        self.alphas[color]
    }

    pub fn alpha_min(&self) -> f64 {
        self.alphas.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Color for a uniform draw `u ∈ [0, 1)`: the smallest `i` with
    /// `u < α_1 + … + α_{i+1}`; the last color absorbs any floating-point
    /// leftover at the top of the interval.
    pub fn sample(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (i, a) in self.alphas.iter().enumerate() {
            acc += a;
            if u < acc {
                return i;
            }
        }
        self.alphas.len() - 1
    }
}

impl TryFrom<Vec<f64>> for ColorLaw {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        ColorLaw::new(v)
    }
}

impl From<ColorLaw> for Vec<f64> {
    fn from(law: ColorLaw) -> Self {
        law.alphas
    }
}

/// Edge probability `p = (ln n + ω)/n` of the random model.
///
/// Requires `n ≥ 2`; the result must land in `(0, 1]` or the parameters are
/// outside the model's domain.
pub fn edge_probability(n: usize, omega: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Argument(format!(
            "edge probability needs n >= 2, got {n}"
        )));
    }
    if !omega.is_finite() {
        return Err(Error::Argument(format!("omega must be finite, got {omega}")));
    }
    let p = ((n as f64).ln() + omega) / n as f64;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::ModelDomain(format!(
            "edge probability (ln {n} + {omega})/{n} = {p} falls outside (0, 1]"
        )));
    }
    Ok(p)
}

/// Parameters of the random model `G_{n,n,p}` with `p = (ln n + ω)/n` and
/// i.i.d. edge colors from `law`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomModelParams {
    pub n: usize,
    pub omega: f64,
    pub law: ColorLaw,
    pub seed: u64,
}

impl RandomModelParams {
    pub fn edge_probability(&self) -> Result<f64> {
        edge_probability(self.n, self.omega)
    }
}

/// A colored bipartite graph with sides of equal size `n` and `q` colors.
///
/// Adjacency is stored per vertex on both sides, sorted by neighbor index,
/// which fixes the canonical edge order `(a, b)` used everywhere iteration
/// order matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredBipartiteGraph {
    n: usize,
    q: usize,
    adj_a: Vec<Vec<(u32, u32)>>,
    adj_b: Vec<Vec<(u32, u32)>>,
    edge_count: usize,
}

impl ColoredBipartiteGraph {
    /// Graph from an explicit edge list `(a, b, color)`, all 0-based.
    pub fn new(n: usize, q: usize, edges: &[(usize, usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("graph needs n >= 1".into()));
        }
        if q == 0 {
            return Err(Error::Argument("graph needs q >= 1".into()));
        }
        let mut g = ColoredBipartiteGraph {
            n,
            q,
            adj_a: vec![Vec::new(); n],
            adj_b: vec![Vec::new(); n],
            edge_count: 0,
        };
        for &(a, b, c) in edges {
            if a >= n || b >= n {
                return Err(Error::Argument(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            if c >= q {
                return Err(Error::Argument(format!(
                    "color {c} out of range for q = {q}"
                )));
            }
            g.adj_a[a].push((b as u32, c as u32));
        }
        for (a, row) in g.adj_a.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::Argument(format!(
                    "duplicate edge ({a}, {})",
                    w[0].0
                )));
            }
            for &(b, c) in row.iter() {
                g.adj_b[b as usize].push((a as u32, c));
            }
            g.edge_count += row.len();
        }
        // adj_b rows are filled in ascending a already; nothing to sort.
        Ok(g)
    }

    /// Sample from the random model: keep each of the `n²` pairs with
    /// probability `p = (ln n + ω)/n`, coloring kept edges i.i.d. from the law.
    pub fn generate(params: &RandomModelParams) -> Result<Self> {
        let p = params.edge_probability()?;
        Self::generate_with_p(params.n, p, &params.law, params.seed)
    }

    /// Same sampler with an explicit edge probability `p ∈ (0, 1]`.
    ///
    /// Draw order is fixed: pairs `(a, b)` in row-major order, one uniform
    /// for the keep decision (`u < p`, so `p = 1` keeps everything), then —
    /// only for kept pairs — one uniform for the color. This makes a seed's
    /// output identical across platforms.
    pub fn generate_with_p(n: usize, p: f64, law: &ColorLaw, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("graph needs n >= 1".into()));
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::ModelDomain(format!(
                "edge probability {p} falls outside (0, 1]"
            )));
        }
        let mut rng = rng::stream(seed);
        let mut g = ColoredBipartiteGraph {
            n,
            q: law.q(),
            adj_a: vec![Vec::new(); n],
            adj_b: vec![Vec::new(); n],
            edge_count: 0,
        };
        for a in 0..n {
            for b in 0..n {
                if rng::next_unit(&mut rng) < p {
                    let c = law.sample(rng::next_unit(&mut rng)) as u32;
                    g.adj_a[a].push((b as u32, c));
                    g.adj_b[b].push((a as u32, c));
                    g.edge_count += 1;
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Neighbors of `a ∈ A` as `(b, color)`, ascending in `b`.
    pub fn adj_a(&self, a: usize) -> &[(u32, u32)] {
        &self.adj_a[a]
    }

    /// Neighbors of `b ∈ B` as `(a, color)`, ascending in `a`.
    pub fn adj_b(&self, b: usize) -> &[(u32, u32)] {
        &self.adj_b[b]
    }

    fn adj(&self, side: Side, v: usize) -> &[(u32, u32)] {
        match side {
            Side::A => &self.adj_a[v],
            Side::B => &self.adj_b[v],
        }
    }

    /// Edges `(a, b, color)` in canonical `(a, b)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.adj_a.iter().enumerate().flat_map(|(a, row)| {
            row.iter()
                .map(move |&(b, c)| (a, b as usize, c as usize))
        })
    }

    /// Color of edge `(a, b)` if present.
    pub fn color_of(&self, a: usize, b: usize) -> Option<usize> {
        let row = &self.adj_a[a];
        row.binary_search_by_key(&(b as u32), |&(nb, _)| nb)
            .ok()
            .map(|i| row[i].1 as usize)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.color_of(a, b).is_some()
    }

    pub fn degree(&self, side: Side, v: usize) -> usize {
        self.adj(side, v).len()
    }

    /// Number of color-`color` edges at `v`.
    pub fn color_degree(&self, side: Side, v: usize, color: usize) -> usize {
        self.adj(side, v)
            .iter()
            .filter(|&&(_, c)| c as usize == color)
            .count()
    }

    /// True if any vertex on either side has no incident edge.
    pub fn has_isolated_vertex(&self) -> bool {
        self.adj_a.iter().any(|r| r.is_empty()) || self.adj_b.iter().any(|r| r.is_empty())
    }

    fn member_mask(&self, set: &[usize], what: &str) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n];
        for &v in set {
            if v >= self.n {
                return Err(Error::Argument(format!(
                    "{what} contains vertex {v}, out of range for n = {}",
                    self.n
                )));
            }
            if mask[v] {
                return Err(Error::Argument(format!(
                    "{what} contains vertex {v} twice"
                )));
            }
            mask[v] = true;
        }
        Ok(mask)
    }

    fn check_color(&self, color: usize) -> Result<()> {
        if color >= self.q {
            return Err(Error::Argument(format!(
                "color {color} out of range for q = {}",
                self.q
            )));
        }
        Ok(())
    }

    /// `e_color(S, T)`: number of color-`color` edges between `s ⊆ A` and
    /// `t ⊆ B`. The slices are treated as sets; repeated vertices are an
    /// argument error.
    pub fn count_color_edges(&self, s: &[usize], t: &[usize], color: usize) -> Result<usize> {
        self.check_color(color)?;
        let s_mask = self.member_mask(s, "S")?;
        let t_mask = self.member_mask(t, "T")?;
        let mut count = 0;
        for (a, in_s) in s_mask.iter().enumerate() {
            if !in_s {
                continue;
            }
            count += self.adj_a[a]
                .iter()
                .filter(|&&(b, c)| c as usize == color && t_mask[b as usize])
                .count();
        }
        Ok(count)
    }

    /// `N_color(S)`: vertices on the opposite side joined to `s` (a subset of
    /// `side`) by a color-`color` edge. Sorted ascending.
    pub fn neighbors_colored(&self, side: Side, s: &[usize], color: usize) -> Result<Vec<usize>> {
        self.check_color(color)?;
        let s_mask = self.member_mask(s, "S")?;
        let mut out_mask = vec![false; self.n];
        for (v, in_s) in s_mask.iter().enumerate() {
            if !in_s {
                continue;
            }
            for &(w, c) in self.adj(side, v) {
                if c as usize == color {
                    out_mask[w as usize] = true;
                }
            }
        }
        Ok((0..self.n).filter(|&w| out_mask[w]).collect())
    }

    /// The spanning subgraph keeping exactly the color-`color` edges. Colors
    /// keep their indices (`q` is unchanged).
    pub fn color_subgraph(&self, color: usize) -> Result<Self> {
        self.check_color(color)?;
        let mut g = ColoredBipartiteGraph {
            n: self.n,
            q: self.q,
            adj_a: vec![Vec::new(); self.n],
            adj_b: vec![Vec::new(); self.n],
            edge_count: 0,
        };
        for (a, row) in self.adj_a.iter().enumerate() {
            for &(b, c) in row {
                if c as usize == color {
                    g.adj_a[a].push((b, c));
                    g.adj_b[b as usize].push((a as u32, c));
                    g.edge_count += 1;
                }
            }
        }
        Ok(g)
    }

    /// Canonical text form: optional comments, a `n q` header, then one
    /// `a b c` line per edge (1-based), sorted by `(a, b)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.q);
        for (a, b, c) in self.edges() {
            let _ = writeln!(out, "{} {} {}", a + 1, b + 1, c + 1);
        }
        out
    }

    /// Parse the text form. `#` starts a comment (whole or end of line);
    /// blank lines are skipped; the first data line must be the `n q` header;
    /// every edge line must hold exactly three integers in range, 1-based,
    /// with no duplicate `(a, b)` pair. Edge lines may appear in any order.
    pub fn from_text(text: &str) -> Result<Self> {
        fn bad(line: usize, msg: impl Into<String>) -> Error {
            Error::Parse {
                line,
                msg: msg.into(),
            }
        }
        fn parse_int(tok: &str, line: usize, what: &str) -> Result<usize> {
            tok.parse::<usize>()
                .map_err(|_| bad(line, format!("{what} must be a non-negative integer, got {tok:?}")))
        }

        let mut header: Option<(usize, usize)> = None;
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        let mut seen = std::collections::HashSet::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let data = raw.split('#').next().unwrap_or("").trim();
            if data.is_empty() {
                continue;
            }
            let toks: Vec<&str> = data.split_whitespace().collect();
            match header {
                None => {
                    if toks.len() != 2 {
                        return Err(bad(line, format!("header must be `n q`, got {data:?}")));
                    }
                    let n = parse_int(toks[0], line, "n")?;
                    let q = parse_int(toks[1], line, "q")?;
                    if n == 0 || q == 0 {
                        return Err(bad(line, "header needs n >= 1 and q >= 1"));
                    }
                    header = Some((n, q));
                }
                Some((n, q)) => {
                    if toks.len() != 3 {
                        return Err(bad(line, format!("edge line must be `a b c`, got {data:?}")));
                    }
                    let a = parse_int(toks[0], line, "a")?;
                    let b = parse_int(toks[1], line, "b")?;
                    let c = parse_int(toks[2], line, "c")?;
                    if a < 1 || a > n || b < 1 || b > n {
                        return Err(bad(line, format!("edge ({a}, {b}) out of range for n = {n}")));
                    }
                    if c < 1 || c > q {
                        return Err(bad(line, format!("color {c} out of range for q = {q}")));
                    }
                    if !seen.insert((a, b)) {
                        return Err(bad(line, format!("duplicate edge ({a}, {b})")));
                    }
                    edges.push((a - 1, b - 1, c - 1));
                }
            }
        }

        let (n, q) = header.ok_or_else(|| bad(text.lines().count().max(1), "missing `n q` header"))?;
        ColoredBipartiteGraph::new(n, q, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fixture() -> ColoredBipartiteGraph {
        // 4x4, 7 edges, two colors (0-based here).
        ColoredBipartiteGraph::new(
            4,
            2,
            &[
                (0, 1, 0),
                (0, 2, 1),
                (1, 1, 1),
                (1, 2, 0),
                (2, 0, 1),
                (2, 2, 1),
                (3, 3, 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn color_law_validation() {
        assert!(ColorLaw::new(vec![]).is_err());
        assert!(ColorLaw::new(vec![0.5, 0.6]).is_err());
        assert!(ColorLaw::new(vec![1.1, -0.1]).is_err());
        assert!(ColorLaw::new(vec![0.5, 0.5, 0.0]).is_err());
        assert!(ColorLaw::new(vec![0.5, 0.5 + 1e-10]).is_err());
        let law = ColorLaw::new(vec![0.25, 0.25, 0.5]).unwrap();
        assert_eq!(law.q(), 3);
        assert_eq!(law.alpha_min(), 0.25);
        let u = ColorLaw::uniform(3).unwrap();
        assert!((u.alphas().iter().sum::<f64>() - 1.0).abs() <= ColorLaw::SUM_TOLERANCE);
    }

    #[test]
    fn color_sampling_inverts_cumulative_law() {
        let law = ColorLaw::new(vec![0.25, 0.25, 0.5]).unwrap();
        assert_eq!(law.sample(0.0), 0);
        assert_eq!(law.sample(0.2499), 0);
        assert_eq!(law.sample(0.25), 1);
        assert_eq!(law.sample(0.4999), 1);
        assert_eq!(law.sample(0.5), 2);
        assert_eq!(law.sample(0.999999), 2);
    }

    #[test]
    fn edge_probability_examples() {
        assert_eq!(edge_probability(1000, 2.0).unwrap(), 0.008907755278982138);
        // ln 10 + (10 - ln 10) = 10 exactly, so p = 1 is allowed.
        assert_eq!(edge_probability(10, 10.0 - 10f64.ln()).unwrap(), 1.0);
        match edge_probability(2, 5.0) {
            Err(Error::ModelDomain(msg)) => assert!(msg.contains("2.8465735902799727")),
            other => panic!("expected model domain error, got {other:?}"),
        }
        assert!(matches!(edge_probability(1, 0.0), Err(Error::Argument(_))));
        assert!(matches!(
            edge_probability(2, -10.0),
            Err(Error::ModelDomain(_))
        ));
    }

    #[test]
    fn p_one_gives_complete_graph() {
        let law = ColorLaw::uniform(2).unwrap();
        let g = ColoredBipartiteGraph::generate_with_p(5, 1.0, &law, 9).unwrap();
        assert_eq!(g.edge_count(), 25);
        for a in 0..5 {
            assert_eq!(g.degree(Side::A, a), 5);
            assert_eq!(g.degree(Side::B, a), 5);
        }
    }

    #[test]
    fn generation_is_seed_deterministic() {
        let law = ColorLaw::uniform(3).unwrap();
        let params = RandomModelParams {
            n: 60,
            omega: 1.5,
            law: law.clone(),
            seed: 777,
        };
        let g1 = ColoredBipartiteGraph::generate(&params).unwrap();
        let g2 = ColoredBipartiteGraph::generate(&params).unwrap();
        assert_eq!(g1, g2);
        let g3 = ColoredBipartiteGraph::generate(&RandomModelParams {
            seed: 778,
            ..params
        })
        .unwrap();
        assert_ne!(g1, g3);
    }

    /// Edge count concentrates around n²p and colors stay balanced.
    /// Windows: count within mean ± 4σ of Binomial(n², p); two-color χ²
    /// statistic below the 0.999 quantile of χ²(1) = 10.827566170662733.
    #[test]
    fn generated_graph_matches_model_statistics() {
        let n = 200;
        let omega = (200f64).ln().ln();
        let p = edge_probability(n, omega).unwrap();
        let law = ColorLaw::uniform(2).unwrap();
        let g = ColoredBipartiteGraph::generate(&RandomModelParams {
            n,
            omega,
            law,
            seed: 2024,
        })
        .unwrap();

        let mean = (n * n) as f64 * p;
        let sigma = ((n * n) as f64 * p * (1.0 - p)).sqrt();
        let count = g.edge_count() as f64;
        assert!(
            (count - mean).abs() <= 4.0 * sigma,
            "edge count {count} outside {mean} ± {}",
            4.0 * sigma
        );

        let m = g.edge_count() as f64;
        let c0 = g.edges().filter(|&(_, _, c)| c == 0).count() as f64;
        let c1 = m - c0;
        let chi2 = (c0 - c1) * (c0 - c1) / m;
        assert!(chi2 < 10.827566170662733, "color imbalance χ² = {chi2}");
    }

    #[test]
    fn constructor_rejects_bad_edges() {
        assert!(matches!(
            ColoredBipartiteGraph::new(2, 1, &[(0, 2, 0)]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            ColoredBipartiteGraph::new(2, 1, &[(0, 0, 1)]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            ColoredBipartiteGraph::new(2, 1, &[(0, 0, 0), (0, 0, 0)]),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn counts_and_neighborhoods_match_hand_enumeration() {
        let g = small_fixture();
        assert_eq!(g.count_color_edges(&[0, 1], &[1, 2], 0).unwrap(), 2);
        assert_eq!(g.count_color_edges(&[0, 1], &[1, 2], 1).unwrap(), 2);
        assert_eq!(g.count_color_edges(&[3], &[0, 1, 2], 0).unwrap(), 0);
        assert_eq!(g.neighbors_colored(Side::A, &[0, 2], 1).unwrap(), vec![0, 2]);
        assert_eq!(g.neighbors_colored(Side::A, &[3], 0).unwrap(), vec![3]);
        assert_eq!(g.neighbors_colored(Side::B, &[1], 1).unwrap(), vec![1]);
        assert_eq!(g.neighbors_colored(Side::A, &[0, 1], 2).unwrap_err().exit_code(), 2);
        assert!(g.count_color_edges(&[0, 0], &[1], 0).is_err());
        assert!(g.count_color_edges(&[0], &[9], 0).is_err());
    }

    #[test]
    fn color_subgraph_keeps_only_that_color() {
        let g = small_fixture();
        let g0 = g.color_subgraph(0).unwrap();
        assert_eq!(g0.q(), 2);
        assert_eq!(g0.edge_count(), 3);
        assert!(g0.edges().all(|(_, _, c)| c == 0));
        let g1 = g.color_subgraph(1).unwrap();
        assert_eq!(g1.edge_count(), 4);
        assert_eq!(g0.edge_count() + g1.edge_count(), g.edge_count());
        assert!(g0.has_isolated_vertex()); // vertex 2 in A has no color-0 edge
        assert!(!g.has_isolated_vertex());
    }

    #[test]
    fn color_degrees() {
        let g = small_fixture();
        assert_eq!(g.color_degree(Side::A, 0, 0), 1);
        assert_eq!(g.color_degree(Side::A, 0, 1), 1);
        assert_eq!(g.color_degree(Side::A, 2, 1), 2);
        assert_eq!(g.color_degree(Side::B, 2, 1), 2);
        assert_eq!(g.color_degree(Side::B, 3, 1), 0);
    }

    #[test]
    fn text_round_trip_canonical() {
        let g = small_fixture();
        let text = g.to_text();
        assert!(text.starts_with("4 2\n"));
        assert_eq!(text.lines().count(), 8);
        let back = ColoredBipartiteGraph::from_text(&text).unwrap();
        assert_eq!(g, back);
        // 1-based indices on disk
        assert!(text.contains("1 2 1\n"));
        assert!(text.contains("4 4 1\n"));
    }

    #[test]
    fn parser_accepts_comments_and_any_edge_order() {
        let text = "# fixture\n\n4 2  # header\n4 4 1\n1 2 1\n# middle\n1 3 2\n2 2 2\n2 3 1\n3 1 2\n3 3 2\n";
        let g = ColoredBipartiteGraph::from_text(text).unwrap();
        assert_eq!(g, small_fixture());
    }

    #[test]
    fn parser_names_offending_line() {
        let cases: [(&str, usize, &str); 6] = [
            ("4\n", 1, "header"),
            ("2 1\n1 1\n", 2, "edge line"),
            ("2 1\n1 3 1\n", 2, "out of range"),
            ("2 1\n1 1 2\n", 2, "color 2 out of range"),
            ("2 1\n1 1 1\n\n1 1 1\n", 4, "duplicate"),
            ("2 1\n1 x 1\n", 2, "integer"),
        ];
        for (text, line, frag) in cases {
            match ColoredBipartiteGraph::from_text(text) {
                Err(Error::Parse { line: l, msg }) => {
                    assert_eq!(l, line, "line for {text:?}");
                    assert!(msg.contains(frag), "{msg:?} should mention {frag:?}");
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
        assert!(matches!(
            ColoredBipartiteGraph::from_text("# nothing\n"),
            Err(Error::Parse { .. })
        ));
    }
}

#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn random_graphs_round_trip_text(n in 1usize..20, qm1 in 0usize..4, seed in any::<u64>()) {
            let law = ColorLaw::uniform(qm1 + 1).unwrap();
            let g = ColoredBipartiteGraph::generate_with_p(n, 0.3, &law, seed).unwrap();
            let back = ColoredBipartiteGraph::from_text(&g.to_text()).unwrap();
            prop_assert_eq!(g, back);
        }

        #[test]
        fn color_subgraphs_partition_edges(seed in any::<u64>()) {
            let law = ColorLaw::new(vec![0.2, 0.3, 0.5]).unwrap();
            let g = ColoredBipartiteGraph::generate_with_p(12, 0.4, &law, seed).unwrap();
            let total: usize = (0..3).map(|c| g.color_subgraph(c).unwrap().edge_count()).sum();
            prop_assert_eq!(total, g.edge_count());
        }

        #[test]
        fn neighborhoods_union_over_colors(seed in any::<u64>()) {
            let law = ColorLaw::uniform(2).unwrap();
            let g = ColoredBipartiteGraph::generate_with_p(10, 0.3, &law, seed).unwrap();
            let s: Vec<usize> = vec![0, 3, 7];
            let mut union: Vec<usize> = (0..2)
                .flat_map(|c| g.neighbors_colored(Side::A, &s, c).unwrap())
                .collect();
            union.sort_unstable();
            union.dedup();
            let direct: Vec<usize> = {
                let mut mask = vec![false; 10];
                for &a in &s {
                    for &(b, _) in g.adj_a(a) {
                        mask[b as usize] = true;
                    }
                }
                (0..10).filter(|&b| mask[b]).collect()
            };
            prop_assert_eq!(union, direct);
        }
    }
}
