//! Reproducible Monte Carlo experiments: end-to-end recoloring demos,
//! isolated-vertex and monochromatic-matching frequency checks, and factorial
//! threshold sweeps with CSV/JSON artifacts.
//!
//! Determinism contract: with a fixed master seed every run produces
//! byte-identical output. Per-trial generators are derived streams
//! ([`crate::rng::derive_seed`]), so trials and sweep cells are independent
//! and can run in any order (sweep cells run in parallel). Wall-clock
//! measurement is opt-in (`with_timing`) precisely because it breaks the
//! byte-identity guarantee.

use crate::error::{Error, Result};
use crate::graph::{edge_probability, ColorLaw, ColoredBipartiteGraph};
use crate::matching::{maximum_matching, profile, ColorProfile};
use crate::recolor::recolor_to_target;
use crate::rng::derive_seed;
use crate::ser;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// How a sweep column chooses the edge probability at a given `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensitySpec {
    /// `p = c · ln n / n`.
    Multiplier(f64),
    /// `p = (ln n + ln ln n) / n` — the model's default density.
    Omega,
}

impl DensitySpec {
    /// The edge probability this spec yields at `n`, domain-checked.
    pub fn probability(&self, n: usize) -> Result<f64> {
        match *self {
            DensitySpec::Omega => {
                let ln_n = (n as f64).ln();
                edge_probability(n, ln_n.ln())
            }
            DensitySpec::Multiplier(c) => {
                if n < 2 {
                    return Err(Error::Argument(format!("n must be at least 2, got {n}")));
                }
                let p = c * (n as f64).ln() / n as f64;
                if !(p.is_finite() && p > 0.0 && p <= 1.0) {
                    return Err(Error::ModelDomain(format!(
                        "density x{c} gives p = {p} at n = {n}, outside (0, 1]"
                    )));
                }
                Ok(p)
            }
        }
    }
}

impl fmt::Display for DensitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DensitySpec::Multiplier(c) => write!(f, "x{c}"),
            DensitySpec::Omega => f.write_str("omega"),
        }
    }
}

impl FromStr for DensitySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("omega") {
            return Ok(DensitySpec::Omega);
        }
        let body = s.strip_prefix('x').unwrap_or(s);
        let c: f64 = body
            .parse()
            .map_err(|_| Error::Argument(format!("unrecognized density spec {s:?}")))?;
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Argument(format!(
                "density multiplier must be positive, got {c}"
            )));
        }
        Ok(DensitySpec::Multiplier(c))
    }
}

impl Serialize for DensitySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Named target-profile generators for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    /// `n` split as evenly as possible across the colors.
    Balanced,
    /// Every color at `⌈βn⌉` except one, which takes the remainder.
    Corner { color: usize },
}

impl TargetKind {
    /// Materialize the profile at concrete `(n, q, beta)`.
    pub fn profile(&self, n: usize, q: usize, beta: f64) -> Result<ColorProfile> {
        if q == 0 {
            return Err(Error::Argument("need at least one color".into()));
        }
        match *self {
            TargetKind::Balanced => {
                let base = n / q;
                let rem = n % q;
                Ok(ColorProfile::new(
                    (0..q).map(|i| base + usize::from(i < rem)).collect(),
                ))
            }
            TargetKind::Corner { color } => {
                if color >= q {
                    return Err(Error::Argument(format!(
                        "corner color {} out of range for q = {q}",
                        color + 1
                    )));
                }
                if !(beta.is_finite() && beta > 0.0 && beta < 1.0) {
                    return Err(Error::Argument(format!(
                        "beta must lie in (0, 1), got {beta}"
                    )));
                }
                let floor = (beta * n as f64).ceil() as usize;
                let others = floor.checked_mul(q - 1).filter(|&s| s <= n);
                let Some(rest) = others.map(|s| n - s) else {
                    return Err(Error::Argument(format!(
                        "corner target infeasible: (q-1)·⌈βn⌉ = {}·{floor} exceeds n = {n}",
                        q - 1
                    )));
                };
                let mut counts = vec![floor; q];
                counts[color] = rest;
                Ok(ColorProfile::new(counts))
            }
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TargetKind::Balanced => f.write_str("balanced"),
            TargetKind::Corner { color } => write!(f, "corner{}", color + 1),
        }
    }
}

impl FromStr for TargetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("balanced") {
            return Ok(TargetKind::Balanced);
        }
        if let Some(body) = s.strip_prefix("corner") {
            let color = if body.is_empty() {
                1
            } else {
                body.parse::<usize>()
                    .map_err(|_| Error::Argument(format!("unrecognized target kind {s:?}")))?
            };
            if color == 0 {
                return Err(Error::Argument("corner colors are numbered from 1".into()));
            }
            return Ok(TargetKind::Corner { color: color - 1 });
        }
        Err(Error::Argument(format!("unrecognized target kind {s:?}")))
    }
}

impl Serialize for TargetKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Every coordinate of `target` must reach `⌈βn⌉` (and the sum must be `n`):
/// the precondition under which the recoloring walk is expected to succeed.
fn check_target(target: &ColorProfile, n: usize, q: usize, beta: f64) -> Result<()> {
    if target.q() != q {
        return Err(Error::Argument(format!(
            "target has {} colors, law has {q}",
            target.q()
        )));
    }
    if target.sum() != n {
        return Err(Error::Argument(format!(
            "target sums to {}, need n = {n}",
            target.sum()
        )));
    }
    let floor = (beta * n as f64).ceil() as usize;
    if let Some(i) = (0..q).find(|&i| target.count(i) < floor) {
        return Err(Error::Argument(format!(
            "target count {} for color {} is below ⌈βn⌉ = {floor}",
            target.count(i),
            i + 1
        )));
    }
    Ok(())
}

/// Everything observed in one generated instance.
struct TrialRecord {
    pm: bool,
    recolor_ok: bool,
    steps: Option<usize>,
    mono_pm: Vec<bool>,
    isolated: Vec<bool>,
    runtime_ms: Option<f64>,
}

fn run_trial(
    n: usize,
    p: f64,
    law: &ColorLaw,
    target: &ColorProfile,
    seed: u64,
    with_timing: bool,
) -> Result<TrialRecord> {
    let start = with_timing.then(Instant::now);
    let g = ColoredBipartiteGraph::generate_with_p(n, p, law, seed)?;
    let m = maximum_matching(&g);
    let pm = m.is_perfect();

    let mut recolor_ok = false;
    let mut steps = None;
    if pm {
        let out = recolor_to_target(&g, &m, target)?;
        if out.succeeded() {
            // Successes are reported only when backed by a checked matching
            // with the exact target profile.
            out.matching.validate(&g)?;
            let reached = profile(&g, &out.matching)?;
            if &reached != target {
                return Err(Error::Consistency(format!(
                    "recoloring claimed success but reached {reached} instead of {target}"
                )));
            }
            recolor_ok = true;
            steps = Some(out.steps.len());
        }
    }

    let mut mono_pm = Vec::with_capacity(law.q());
    let mut isolated = Vec::with_capacity(law.q());
    for c in 0..law.q() {
        let sub = g.color_subgraph(c)?;
        mono_pm.push(maximum_matching(&sub).is_perfect());
        isolated.push(sub.has_isolated_vertex());
    }

    Ok(TrialRecord {
        pm,
        recolor_ok,
        steps,
        mono_pm,
        isolated,
        runtime_ms: start.map(|t| t.elapsed().as_secs_f64() * 1e3),
    })
}

/// One experiment cell: a parameter point with its observed frequencies.
/// Produced by [`run_theorem_demo`] and, in batches, by [`run_sweep`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub density: DensitySpec,
    /// Edge probability actually used; absent when the cell failed before
    /// generation.
    pub p: Option<f64>,
    /// Name of the target generator (or `"custom"` for explicit profiles).
    pub target: String,
    pub target_profile: Option<ColorProfile>,
    pub trials: usize,
    pub pm_count: usize,
    pub pm_freq: f64,
    pub recolor_success_count: usize,
    pub recolor_failure_count: usize,
    /// Successes over all trials.
    pub recolor_freq: f64,
    /// Successes over trials that had a perfect matching.
    pub recolor_given_pm: Option<f64>,
    pub mean_steps: Option<f64>,
    pub mean_runtime_ms: Option<f64>,
    pub mono_pm_freq: Vec<f64>,
    pub isolated_freq: Vec<f64>,
    /// Cell-level failure, recorded instead of aborting a sweep.
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(
        n: usize,
        density: DensitySpec,
        p: Option<f64>,
        target: String,
        trials: usize,
        q: usize,
        error: String,
    ) -> Self {
        SweepRow {
            n,
            density,
            p,
            target,
            target_profile: None,
            trials,
            pm_count: 0,
            pm_freq: 0.0,
            recolor_success_count: 0,
            recolor_failure_count: 0,
            recolor_freq: 0.0,
            recolor_given_pm: None,
            mean_steps: None,
            mean_runtime_ms: None,
            mono_pm_freq: vec![0.0; q],
            isolated_freq: vec![0.0; q],
            error: Some(error),
        }
    }

    fn from_records(
        n: usize,
        density: DensitySpec,
        p: f64,
        target_name: String,
        target: ColorProfile,
        records: &[TrialRecord],
    ) -> Self {
        let trials = records.len();
        let q = target.q();
        let pm_count = records.iter().filter(|r| r.pm).count();
        let ok_count = records.iter().filter(|r| r.recolor_ok).count();
        let denom = trials as f64;
        let freq_of = |pred: &dyn Fn(&TrialRecord) -> bool| {
            records.iter().filter(|r| pred(r)).count() as f64 / denom
        };
        let steps: Vec<usize> = records.iter().filter_map(|r| r.steps).collect();
        let runtimes: Vec<f64> = records.iter().filter_map(|r| r.runtime_ms).collect();
        SweepRow {
            n,
            density,
            p: Some(p),
            target: target_name,
            target_profile: Some(target),
            trials,
            pm_count,
            pm_freq: pm_count as f64 / denom,
            recolor_success_count: ok_count,
            recolor_failure_count: pm_count - ok_count,
            recolor_freq: ok_count as f64 / denom,
            recolor_given_pm: (pm_count > 0).then(|| ok_count as f64 / pm_count as f64),
            mean_steps: (!steps.is_empty())
                .then(|| steps.iter().sum::<usize>() as f64 / steps.len() as f64),
            mean_runtime_ms: (!runtimes.is_empty())
                .then(|| runtimes.iter().sum::<f64>() / runtimes.len() as f64),
            mono_pm_freq: (0..q).map(|c| freq_of(&|r| r.mono_pm[c])).collect(),
            isolated_freq: (0..q).map(|c| freq_of(&|r| r.isolated[c])).collect(),
            error: None,
        }
    }

    fn csv_line(&self, q: usize) -> String {
        let mut cols: Vec<String> = vec![
            self.n.to_string(),
            self.density.to_string(),
            fmt_opt_f64(self.p),
            self.target.clone(),
            self.target_profile
                .as_ref()
                .map(|t| join_counts(t.counts()))
                .unwrap_or_default(),
            self.trials.to_string(),
            self.pm_count.to_string(),
            format!("{}", self.pm_freq),
            self.recolor_success_count.to_string(),
            self.recolor_failure_count.to_string(),
            format!("{}", self.recolor_freq),
            fmt_opt_f64(self.recolor_given_pm),
            fmt_opt_f64(self.mean_steps),
            fmt_opt_f64(self.mean_runtime_ms),
        ];
        for c in 0..q {
            cols.push(format!("{}", self.mono_pm_freq.get(c).copied().unwrap_or(0.0)));
        }
        for c in 0..q {
            cols.push(format!("{}", self.isolated_freq.get(c).copied().unwrap_or(0.0)));
        }
        cols.push(self.error.as_deref().map(csv_safe).unwrap_or_default());
        cols.join(",")
    }
}

fn fmt_opt_f64(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

fn join_counts(counts: &[usize]) -> String {
    counts
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Keep cell text from breaking the CSV shape.
fn csv_safe(s: &str) -> String {
    s.replace(['\n', '\r'], " ").replace(',', ";")
}

/// The column line for row CSVs at a given color count.
pub fn csv_columns(q: usize) -> String {
    let mut cols: Vec<String> = [
        "n",
        "density",
        "p",
        "target",
        "target_profile",
        "trials",
        "pm_count",
        "pm_freq",
        "recolor_success_count",
        "recolor_failure_count",
        "recolor_freq",
        "recolor_given_pm",
        "mean_steps",
        "mean_runtime_ms",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for c in 1..=q {
        cols.push(format!("mono_pm_freq_c{c}"));
    }
    for c in 1..=q {
        cols.push(format!("isolated_freq_c{c}"));
    }
    cols.push("error".into());
    cols.join(",")
}

/// CSV artifact for a bare list of rows (used by single-cell commands).
pub fn rows_to_csv(tag: &str, q: usize, rows: &[SweepRow]) -> String {
    let mut out = format!("# colormatch {tag} v1\n{}\n", csv_columns(q));
    for row in rows {
        out.push_str(&row.csv_line(q));
        out.push('\n');
    }
    out
}

/// Generate → match → recolor toward `target`, over seeded trials.
///
/// `p = (ln n + ω)/n`. Requires `Σ target = n` and every coordinate at least
/// `⌈βn⌉`; rejects anything else as an argument error before sampling.
pub fn run_theorem_demo(
    n: usize,
    omega: f64,
    law: &ColorLaw,
    beta: f64,
    target: &ColorProfile,
    trials: usize,
    seed: u64,
) -> Result<SweepRow> {
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    if !(beta.is_finite() && beta > 0.0 && beta < 1.0) {
        return Err(Error::Argument(format!(
            "beta must lie in (0, 1), got {beta}"
        )));
    }
    check_target(target, n, law.q(), beta)?;
    let p = edge_probability(n, omega)?;
    let records: Vec<TrialRecord> = (0..trials)
        .map(|t| run_trial(n, p, law, target, derive_seed(seed, &[t as u64]), false))
        .collect::<Result<_>>()?;
    Ok(SweepRow::from_records(
        n,
        DensitySpec::Omega,
        p,
        "custom".into(),
        target.clone(),
        &records,
    ))
}

/// Frequency of an isolated vertex (either side) in one color's subgraph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsolatedVertexReport {
    pub n: usize,
    pub omega: f64,
    pub p: f64,
    #[serde(serialize_with = "ser::one_based")]
    pub color: usize,
    pub trials: usize,
    pub seed: u64,
    pub hit_count: usize,
    pub frequency: f64,
}

impl IsolatedVertexReport {
    pub fn to_csv(&self) -> String {
        format!(
            "# colormatch check-isolated v1\nn,omega,p,color,trials,seed,hit_count,frequency\n{},{},{},{},{},{},{},{}\n",
            self.n,
            self.omega,
            self.p,
            self.color + 1,
            self.trials,
            self.seed,
            self.hit_count,
            self.frequency
        )
    }
}

/// How often `color`'s subgraph of `G_{n,n,p}` has an isolated vertex, at
/// `p = (ln n + ω)/n`. A color with law weight `α` keeps each edge with
/// probability `αp`, below the subgraph's own connectivity threshold — so
/// for `q ≥ 2` this frequency should be high, certifying that the all-one-
/// color profile is unreachable.
pub fn run_isolated_vertex_check(
    n: usize,
    omega: f64,
    law: &ColorLaw,
    color: usize,
    trials: usize,
    seed: u64,
) -> Result<IsolatedVertexReport> {
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    if color >= law.q() {
        return Err(Error::Argument(format!(
            "color {} out of range for q = {}",
            color + 1,
            law.q()
        )));
    }
    let p = edge_probability(n, omega)?;
    let mut hit_count = 0;
    for t in 0..trials {
        let g =
            ColoredBipartiteGraph::generate_with_p(n, p, law, derive_seed(seed, &[t as u64]))?;
        if g.color_subgraph(color)?.has_isolated_vertex() {
            hit_count += 1;
        }
    }
    Ok(IsolatedVertexReport {
        n,
        omega,
        p,
        color,
        trials,
        seed,
        hit_count,
        frequency: hit_count as f64 / trials as f64,
    })
}

/// Per-color frequencies of monochromatic perfect matchings at the inflated
/// density `p = q(ln n + ω)/(α_min n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullCubeReport {
    pub n: usize,
    pub omega: f64,
    pub p: f64,
    pub trials: usize,
    pub seed: u64,
    pub mono_pm_count: Vec<usize>,
    pub mono_pm_freq: Vec<f64>,
    /// Trials where every color subgraph had a perfect matching at once.
    pub all_colors_count: usize,
    pub all_colors_freq: f64,
}

impl FullCubeReport {
    pub fn to_csv(&self) -> String {
        let q = self.mono_pm_freq.len();
        let mut cols: Vec<String> = ["n", "omega", "p", "trials", "seed"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        for c in 1..=q {
            cols.push(format!("mono_pm_freq_c{c}"));
        }
        cols.push("all_colors_freq".into());
        let mut vals = vec![
            self.n.to_string(),
            format!("{}", self.omega),
            format!("{}", self.p),
            self.trials.to_string(),
            self.seed.to_string(),
        ];
        for c in 0..q {
            vals.push(format!("{}", self.mono_pm_freq[c]));
        }
        vals.push(format!("{}", self.all_colors_freq));
        format!(
            "# colormatch check-fullcube v1\n{}\n{}\n",
            cols.join(","),
            vals.join(",")
        )
    }
}

/// At `p = q(ln n + ω)/(α_min n)` every color's subgraph sits above the
/// perfect-matching threshold, so every extreme profile `n·e_i` — and with
/// it the whole profile cube — should be achievable. Frequencies of the `q`
/// monochromatic perfect matchings over seeded trials.
pub fn run_full_cube_check(
    n: usize,
    omega: f64,
    law: &ColorLaw,
    trials: usize,
    seed: u64,
) -> Result<FullCubeReport> {
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    if n < 2 {
        return Err(Error::Argument(format!("n must be at least 2, got {n}")));
    }
    let q = law.q();
    let p = q as f64 * ((n as f64).ln() + omega) / (law.alpha_min() * n as f64);
    if !(p.is_finite() && p > 0.0 && p <= 1.0) {
        return Err(Error::ModelDomain(format!(
            "inflated probability p = {p} falls outside (0, 1] at n = {n}"
        )));
    }
    let mut mono_pm_count = vec![0usize; q];
    let mut all_colors_count = 0;
    for t in 0..trials {
        let g =
            ColoredBipartiteGraph::generate_with_p(n, p, law, derive_seed(seed, &[t as u64]))?;
        let mut all = true;
        for c in 0..q {
            let perfect = maximum_matching(&g.color_subgraph(c)?).is_perfect();
            mono_pm_count[c] += usize::from(perfect);
            all &= perfect;
        }
        all_colors_count += usize::from(all);
    }
    Ok(FullCubeReport {
        n,
        omega,
        p,
        trials,
        seed,
        mono_pm_freq: mono_pm_count
            .iter()
            .map(|&c| c as f64 / trials as f64)
            .collect(),
        mono_pm_count,
        all_colors_count,
        all_colors_freq: all_colors_count as f64 / trials as f64,
    })
}

/// A full factorial experiment over sizes × densities × targets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub n_values: Vec<usize>,
    pub densities: Vec<DensitySpec>,
    pub law: ColorLaw,
    pub beta: f64,
    pub targets: Vec<TargetKind>,
    pub trials: usize,
    pub seed: u64,
    /// Record wall-clock means (breaks byte-identical reruns).
    pub with_timing: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.densities.is_empty() || self.targets.is_empty() {
            return Err(Error::Argument(
                "sweep needs at least one n, one density, and one target".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::Argument("trials must be at least 1".into()));
        }
        if !(self.beta.is_finite() && self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::Argument(format!(
                "beta must lie in (0, 1), got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

/// Sweep artifact: the spec echoed back plus one row per cell, in factorial
/// order (n outermost, then density, then target).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// The versioned CSV artifact (schema documented in header comments).
    pub fn to_csv(&self) -> String {
        let q = self.law_q();
        let spec = &self.spec;
        let lists = format!(
            "# n=[{}] densities=[{}] targets=[{}]",
            spec.n_values
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            spec.densities
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            spec.targets
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        let mut out = format!(
            "# colormatch sweep v1\n# seed={} trials={} beta={} law={} timing={}\n{lists}\n{}\n",
            spec.seed,
            spec.trials,
            spec.beta,
            spec.law
                .alphas()
                .iter()
                .map(|a| format!("{a}"))
                .collect::<Vec<_>>()
                .join(";"),
            spec.with_timing,
            csv_columns(q),
        );
        for row in &self.rows {
            out.push_str(&row.csv_line(q));
            out.push('\n');
        }
        out
    }

    /// The JSON mirror of the same artifact.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Consistency(format!("report serialization failed: {e}")))?;
        s.push('\n');
        Ok(s)
    }

    fn law_q(&self) -> usize {
        self.spec.law.q()
    }
}

fn run_sweep_cell(spec: &SweepSpec, ni: usize, ci: usize, ti: usize) -> SweepRow {
    let n = spec.n_values[ni];
    let density = spec.densities[ci];
    let kind = spec.targets[ti];
    let q = spec.law.q();
    let name = kind.to_string();

    let p = match density.probability(n) {
        Ok(p) => p,
        Err(e) => return SweepRow::failed(n, density, None, name, spec.trials, q, e.to_string()),
    };
    let target = match kind
        .profile(n, q, spec.beta)
        .and_then(|t| check_target(&t, n, q, spec.beta).map(|_| t))
    {
        Ok(t) => t,
        Err(e) => {
            return SweepRow::failed(n, density, Some(p), name, spec.trials, q, e.to_string())
        }
    };

    let mut records = Vec::with_capacity(spec.trials);
    for t in 0..spec.trials {
        let trial_seed = derive_seed(
            spec.seed,
            &[n as u64, ci as u64, ti as u64, t as u64],
        );
        match run_trial(n, p, &spec.law, &target, trial_seed, spec.with_timing) {
            Ok(r) => records.push(r),
            Err(e) => {
                return SweepRow::failed(
                    n,
                    density,
                    Some(p),
                    name,
                    spec.trials,
                    q,
                    format!("trial {t}: {e}"),
                )
            }
        }
    }
    SweepRow::from_records(n, density, p, name, target, &records)
}

/// Run every cell of the factorial (in parallel; outputs are keyed by cell,
/// so execution order never shows in the artifact). Cell-level problems are
/// recorded in the row's `error` column; only a malformed spec is an error.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let mut cells = Vec::new();
    for ni in 0..spec.n_values.len() {
        for ci in 0..spec.densities.len() {
            for ti in 0..spec.targets.len() {
                cells.push((ni, ci, ti));
            }
        }
    }
    let rows: Vec<SweepRow> = cells
        .par_iter()
        .map(|&(ni, ci, ti)| run_sweep_cell(spec, ni, ci, ti))
        .collect();
    Ok(SweepReport {
        spec: spec.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law2() -> ColorLaw {
        ColorLaw::uniform(2).unwrap()
    }

    #[test]
    fn density_specs_parse_display_and_evaluate() {
        assert_eq!("omega".parse::<DensitySpec>().unwrap(), DensitySpec::Omega);
        assert_eq!(
            "x1.5".parse::<DensitySpec>().unwrap(),
            DensitySpec::Multiplier(1.5)
        );
        assert_eq!(
            "2".parse::<DensitySpec>().unwrap(),
            DensitySpec::Multiplier(2.0)
        );
        assert!("x-1".parse::<DensitySpec>().is_err());
        assert!("fast".parse::<DensitySpec>().is_err());
        assert_eq!(DensitySpec::Multiplier(1.5).to_string(), "x1.5");
        assert_eq!(DensitySpec::Omega.to_string(), "omega");

        let n = 100;
        let ln_n = 100f64.ln();
        let p = DensitySpec::Multiplier(1.5).probability(n).unwrap();
        assert!((p - 1.5 * ln_n / 100.0).abs() < 1e-15);
        let p = DensitySpec::Omega.probability(n).unwrap();
        assert!((p - (ln_n + ln_n.ln()) / 100.0).abs() < 1e-15);
        // A multiplier that pushes p past 1 is a model-domain error.
        assert!(matches!(
            DensitySpec::Multiplier(50.0).probability(10),
            Err(Error::ModelDomain(_))
        ));
    }

    #[test]
    fn target_kinds_materialize() {
        assert_eq!(
            TargetKind::Balanced.profile(10, 3, 0.2).unwrap().counts(),
            &[4, 3, 3]
        );
        // ⌈0.3·10⌉ = 3 on the off colors, remainder 4 on the corner color.
        assert_eq!(
            TargetKind::Corner { color: 1 }
                .profile(10, 3, 0.3)
                .unwrap()
                .counts(),
            &[3, 4, 3]
        );
        assert!(TargetKind::Corner { color: 3 }.profile(10, 3, 0.3).is_err());
        // (q-1)·⌈βn⌉ = 2·5 > 8.
        assert!(TargetKind::Corner { color: 0 }.profile(8, 3, 0.6).is_err());

        assert_eq!("balanced".parse::<TargetKind>().unwrap(), TargetKind::Balanced);
        assert_eq!(
            "corner2".parse::<TargetKind>().unwrap(),
            TargetKind::Corner { color: 1 }
        );
        assert_eq!(
            "corner".parse::<TargetKind>().unwrap(),
            TargetKind::Corner { color: 0 }
        );
        assert!("corner0".parse::<TargetKind>().is_err());
        assert!("middle".parse::<TargetKind>().is_err());
        assert_eq!(TargetKind::Corner { color: 1 }.to_string(), "corner2");
    }

    #[test]
    fn demo_rejects_bad_targets() {
        let law = law2();
        // All mass on one color violates the β floor.
        let err = run_theorem_demo(
            50,
            1.0,
            &law,
            0.3,
            &ColorProfile::new(vec![50, 0]),
            5,
            1,
        );
        assert!(matches!(err, Err(Error::Argument(_))));
        // Sum mismatch.
        assert!(run_theorem_demo(50, 1.0, &law, 0.3, &ColorProfile::new(vec![30, 30]), 5, 1)
            .is_err());
        // Wrong arity.
        assert!(
            run_theorem_demo(50, 1.0, &law, 0.3, &ColorProfile::new(vec![50]), 5, 1).is_err()
        );
    }

    #[test]
    fn demo_runs_and_is_deterministic() {
        let law = law2();
        let target = ColorProfile::new(vec![25, 25]);
        let row = run_theorem_demo(50, 2.0, &law, 0.3, &target, 10, 42).unwrap();
        let again = run_theorem_demo(50, 2.0, &law, 0.3, &target, 10, 42).unwrap();
        assert_eq!(row, again);
        assert_eq!(row.trials, 10);
        assert_eq!(row.target, "custom");
        assert_eq!(row.target_profile.as_ref().unwrap().counts(), &[25, 25]);
        assert!(row.pm_count <= 10);
        assert!(row.recolor_success_count <= row.pm_count);
        assert_eq!(
            row.recolor_failure_count,
            row.pm_count - row.recolor_success_count
        );
        assert!((row.pm_freq - row.pm_count as f64 / 10.0).abs() < 1e-15);
        assert_eq!(row.mono_pm_freq.len(), 2);
        assert_eq!(row.isolated_freq.len(), 2);
        assert!(row.mean_runtime_ms.is_none());
        assert!(row.error.is_none());
        // ω = 2 at n = 50 sits above the matching threshold often enough.
        assert!(row.pm_count >= 6, "pm_count = {}", row.pm_count);
        if row.pm_count > 0 {
            assert!(row.recolor_given_pm.is_some());
        }
    }

    #[test]
    fn isolated_check_matches_regimes() {
        let law = law2();
        // Sparse color subgraph: isolates should be common at n = 200.
        let report = run_isolated_vertex_check(200, (200f64).ln().ln(), &law, 0, 20, 9).unwrap();
        assert!(report.frequency >= 0.9, "frequency = {}", report.frequency);
        assert_eq!(report.hit_count as f64 / 20.0, report.frequency);
        // Dense regime: α·p·n far above 3 ln n leaves no isolates.
        let report = run_isolated_vertex_check(30, 20.0, &law, 0, 20, 9).unwrap();
        assert_eq!(report.frequency, 0.0);
        // Bad color.
        assert!(run_isolated_vertex_check(30, 1.0, &law, 2, 5, 9).is_err());
    }

    #[test]
    fn full_cube_check_runs_and_rejects_domain() {
        let law = law2();
        let report = run_full_cube_check(60, (60f64).ln().ln(), &law, 10, 5).unwrap();
        assert_eq!(report.mono_pm_freq.len(), 2);
        for c in 0..2 {
            assert_eq!(
                report.mono_pm_count[c] as f64 / 10.0,
                report.mono_pm_freq[c]
            );
            assert!(report.mono_pm_freq[c] >= 0.8, "c={c}: {}", report.mono_pm_freq[c]);
        }
        assert!(report.all_colors_freq <= report.mono_pm_freq[0]);
        // Tiny α_min inflates p past 1.
        let skewed = ColorLaw::new(vec![0.999, 0.001]).unwrap();
        assert!(matches!(
            run_full_cube_check(60, 1.0, &skewed, 5, 5),
            Err(Error::ModelDomain(_))
        ));
    }

    #[test]
    fn sweep_produces_factorial_rows_and_stable_artifacts() {
        let spec = SweepSpec {
            n_values: vec![20],
            densities: vec![DensitySpec::Multiplier(1.5), DensitySpec::Omega],
            law: law2(),
            beta: 0.25,
            targets: vec![TargetKind::Balanced, TargetKind::Corner { color: 0 }],
            trials: 4,
            seed: 7,
            with_timing: false,
        };
        let report = run_sweep(&spec).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.rows.iter().all(|r| r.error.is_none()));
        // Factorial order: density-major within fixed n.
        assert_eq!(report.rows[0].density, DensitySpec::Multiplier(1.5));
        assert_eq!(report.rows[0].target, "balanced");
        assert_eq!(report.rows[1].target, "corner1");
        assert_eq!(report.rows[2].density, DensitySpec::Omega);

        let csv = report.to_csv();
        assert!(csv.starts_with("# colormatch sweep v1\n"));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3 + 1 + 4); // comments, column line, rows
        assert!(lines[3].starts_with("n,density,p,target,"));

        // Byte-identical rerun.
        let again = run_sweep(&spec).unwrap();
        assert_eq!(again.to_csv(), csv);
        assert_eq!(again.to_json().unwrap(), report.to_json().unwrap());

        // JSON mirror parses and matches shape.
        let v: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 4);
        assert_eq!(v["spec"]["seed"], 7);
        assert_eq!(v["rows"][0]["density"], "x1.5");
    }

    #[test]
    fn sweep_records_cell_failures_without_aborting() {
        let spec = SweepSpec {
            n_values: vec![20],
            // 50·ln 20/20 > 1: the first cell must fail, the second run.
            densities: vec![DensitySpec::Multiplier(50.0), DensitySpec::Omega],
            law: law2(),
            beta: 0.25,
            targets: vec![TargetKind::Balanced],
            trials: 2,
            seed: 3,
            with_timing: false,
        };
        let report = run_sweep(&spec).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows[0].error.is_some());
        assert!(report.rows[0].p.is_none());
        assert_eq!(report.rows[0].pm_count, 0);
        assert!(report.rows[1].error.is_none());

        // The recorded message stays CSV-safe.
        let csv = report.to_csv();
        let bad_line = csv.lines().nth(4).unwrap();
        assert_eq!(bad_line.matches(',').count(), csv_columns(2).matches(',').count());

        // β floor violations are recorded per cell, too.
        let spec = SweepSpec {
            beta: 0.6,
            densities: vec![DensitySpec::Omega],
            ..spec
        };
        let report = run_sweep(&spec).unwrap();
        assert!(report.rows[0].error.as_deref().unwrap().contains("below"));
    }

    #[test]
    fn sweep_validates_spec() {
        let empty = SweepSpec {
            n_values: vec![],
            densities: vec![DensitySpec::Omega],
            law: law2(),
            beta: 0.3,
            targets: vec![TargetKind::Balanced],
            trials: 1,
            seed: 0,
            with_timing: false,
        };
        assert!(run_sweep(&empty).is_err());
        let zero_trials = SweepSpec {
            n_values: vec![10],
            trials: 0,
            ..empty.clone()
        };
        assert!(run_sweep(&zero_trials).is_err());
    }

    #[test]
    fn timing_flag_populates_runtime() {
        let law = law2();
        let spec = SweepSpec {
            n_values: vec![20],
            densities: vec![DensitySpec::Omega],
            law,
            beta: 0.25,
            targets: vec![TargetKind::Balanced],
            trials: 2,
            seed: 11,
            with_timing: true,
        };
        let report = run_sweep(&spec).unwrap();
        assert!(report.rows[0].mean_runtime_ms.is_some());
    }
}
