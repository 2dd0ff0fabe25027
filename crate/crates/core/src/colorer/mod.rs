//! Two-phase randomized coloring.
//!
//! Phase 1 is a Moser–Tardos loop over one event per base vertex: the vertex is
//! uncolored and its residual list is short, or (triangle-free pipeline) some
//! surviving element has too many residual cross edges, or (`K_r`-free
//! pipeline) too many uncolored neighbors. A bad event at `u` is fixed by
//! redrawing the picks on `N(u)` uniformly given all other picks. Phase 2
//! colors the residual cover, by resampling ([`complete_lll`]) or greedily
//! ([`greedy_complete`]). Every success is verified with
//! [`Cover::is_coloring`].

mod complete;
mod phase1;

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::cover::{random_cover, residual, Cover, CoverError, CoverMode, PartialColoring};
use crate::graph::{is_kr_free, is_triangle_free, CliqueBudgetExceeded, Graph, DEFAULT_CLIQUE_BUDGET};
use crate::sampler::{ceil_param, layer_threshold, params_kr, params_triangle_free, SamplerError};
use crate::seed;

pub use complete::{check_lll_preconditions, complete_lll, greedy_complete, lll_parameters, CompletionError};
pub use phase1::{mt_phase1, violated_events, EventRule, Phase1, Phase1Config, Phase1Result};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ColorerError {
    #[error("the input graph contains a triangle")]
    NotTriangleFree,
    #[error("the input graph contains a clique on {0} vertices")]
    ContainsClique(usize),
    #[error(transparent)]
    CliqueBudget(#[from] CliqueBudgetExceeded),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("{0}")]
    InvalidOptions(String),
}

/// Residual cross-degree cap used by the triangle-free pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum CapMode {
    /// `⌊ℓ/8⌋`, which the resampling completion needs.
    #[default]
    Eighth,
    /// `⌊ℓ/2⌋`. Phase 2 falls back to greedy completion whenever the residual
    /// does not meet the `⌊ℓ/8⌋` precondition.
    Half,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PipelineOptions {
    pub seed: u64,
    /// List size of the generated cover; ignored when a cover is supplied.
    pub k: Option<usize>,
    pub ell: Option<usize>,
    /// Phase-1 round cap; defaults to `100·n`.
    pub max_rounds: Option<u64>,
    /// Phase-2 round cap; defaults to `100·n`.
    pub completion_rounds: Option<u64>,
    pub cap_mode: CapMode,
    /// Layer threshold for the `K_r`-free sampler; defaults to `⌈Δ^{1/20}⌉`.
    pub threshold: Option<u128>,
    /// Glauber warm-start steps; defaults to the sampler's burn-in.
    pub burn_in: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Phase1Cap,
    Phase2Cap,
    /// Greedy completion met a vertex with no free slot.
    Phase2Stuck,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::Phase1Cap => "phase1_cap",
            Outcome::Phase2Cap => "phase2_cap",
            Outcome::Phase2Stuck => "phase2_stuck",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Timings {
    pub phase1: Duration,
    pub phase2: Duration,
}

/// Result of a pipeline run. Equality ignores the timings.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub outcome: Outcome,
    pub n: usize,
    pub max_degree: usize,
    pub k: usize,
    pub ell: usize,
    pub degree_cap: usize,
    pub phase1_rounds: u64,
    pub phase2_rounds: u64,
    /// Uncolored vertices left by phase 1.
    pub residual_vertices: usize,
    /// Vertices whose event still held when phase 1 stopped.
    pub violated: usize,
    pub coloring: Option<PartialColoring>,
    pub warnings: Vec<String>,
    pub timings: Timings,
}

impl PartialEq for RunReport {
    fn eq(&self, other: &Self) -> bool {
        let key = |r: &RunReport| {
            (
                r.outcome,
                r.n,
                r.max_degree,
                r.k,
                r.ell,
                r.degree_cap,
                r.phase1_rounds,
                r.phase2_rounds,
                r.residual_vertices,
                r.violated,
            )
        };
        key(self) == key(other) && self.coloring == other.coloring && self.warnings == other.warnings
    }
}

impl RunReport {
    pub fn is_success(&self) -> bool {
        self.outcome == Outcome::Success
    }

    /// `key=value` lines, without timings or the coloring.
    pub fn key_values(&self) -> String {
        let mut out = format!(
            "outcome={}\nn={}\nmax_degree={}\nk={}\nell={}\ndegree_cap={}\nphase1_rounds={}\nphase2_rounds={}\nresidual_vertices={}\nviolated={}\n",
            self.outcome.as_str(),
            self.n,
            self.max_degree,
            self.k,
            self.ell,
            self.degree_cap,
            self.phase1_rounds,
            self.phase2_rounds,
            self.residual_vertices,
            self.violated,
        );
        for w in &self.warnings {
            out.push_str(&format!("warning={w}\n"));
        }
        out
    }
}

enum Completion {
    Lll { rounds: u64 },
    Greedy,
    GreedyIfNeeded { rounds: u64 },
}

struct Plan<'a> {
    cover: &'a Cover,
    k: usize,
    cfg: Phase1Config,
    completion: Completion,
    warnings: Vec<String>,
}

fn shortest_list(cover: &Cover) -> usize {
    (0..cover.graph().vertex_count())
        .map(|v| cover.list_size(v))
        .min()
        .unwrap_or(0)
}

fn check_cover(g: &Graph, cover: &Cover) -> Result<(), ColorerError> {
    if cover.graph() != g {
        return Err(ColorerError::InvalidOptions(
            "the supplied cover is over a different base graph".into(),
        ));
    }
    Ok(())
}

fn execute(g: &Graph, plan: Plan<'_>) -> Result<RunReport, ColorerError> {
    for w in &plan.warnings {
        log::warn!("{w}");
    }
    let n = g.vertex_count();
    let mut report = RunReport {
        outcome: Outcome::Phase1Cap,
        n,
        max_degree: g.max_degree(),
        k: plan.k,
        ell: plan.cfg.ell,
        degree_cap: plan.cfg.degree_cap,
        phase1_rounds: 0,
        phase2_rounds: 0,
        residual_vertices: 0,
        violated: 0,
        coloring: None,
        warnings: plan.warnings,
        timings: Timings::default(),
    };
    let start = Instant::now();
    let phase1 = mt_phase1(plan.cover, &plan.cfg)?;
    report.timings.phase1 = start.elapsed();
    report.phase1_rounds = phase1.rounds;
    report.violated = phase1.violated;
    report.residual_vertices = n - phase1.coloring.domain_size();
    if !phase1.success {
        return Ok(report);
    }

    let start = Instant::now();
    let rc = residual(plan.cover, &phase1.coloring)?;
    let mut rng = seed::rng(seed::derive(plan.cfg.seed, 1));
    let completed = match plan.completion {
        Completion::Lll { rounds } => complete_lll(&rc, plan.cfg.ell, rounds, &mut rng).map(|(c, r)| {
            report.phase2_rounds = r;
            c
        }),
        Completion::Greedy => greedy_complete(&rc),
        Completion::GreedyIfNeeded { rounds } => match check_lll_preconditions(&rc, plan.cfg.ell) {
            Ok(()) => complete_lll(&rc, plan.cfg.ell, rounds, &mut rng).map(|(c, r)| {
                report.phase2_rounds = r;
                c
            }),
            Err(_) => greedy_complete(&rc),
        },
    };
    report.timings.phase2 = start.elapsed();
    let rest = match completed {
        Ok(c) => c,
        Err(CompletionError::RoundCap(r)) => {
            report.phase2_rounds = r;
            report.outcome = Outcome::Phase2Cap;
            return Ok(report);
        }
        Err(CompletionError::Stuck(_)) => {
            report.outcome = Outcome::Phase2Stuck;
            return Ok(report);
        }
        Err(e) => unreachable!("phase 1 guarantees the completion preconditions: {e}"),
    };
    let full = phase1.coloring.union(&rc.lift(&rest, n));
    assert!(
        plan.cover.is_coloring(&full)?,
        "pipeline produced an invalid coloring"
    );
    report.outcome = Outcome::Success;
    report.coloring = Some(full);
    Ok(report)
}

fn below_threshold_warning(k: usize, params_k: usize) -> String {
    format!("k = {k} is below the parameter formula's k = {params_k}; running anyway")
}

/// Triangle-free pipeline: phase 1 with the cross-degree rule, then
/// resampling completion. Without a supplied cover, a random perfect `k`-fold
/// cover is generated from the seed, with `k` from the options or from
/// [`params_triangle_free`].
pub fn color_triangle_free(
    g: &Graph,
    eps: f64,
    cover: Option<&Cover>,
    opts: &PipelineOptions,
) -> Result<RunReport, ColorerError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(SamplerError::Domain(format!("ε must lie in (0, 1), got {eps}")).into());
    }
    if !is_triangle_free(g) {
        return Err(ColorerError::NotTriangleFree);
    }
    let n = g.vertex_count();
    let params = params_triangle_free(g.max_degree(), eps).ok();
    let generated;
    let cover = match cover {
        Some(c) => {
            check_cover(g, c)?;
            c
        }
        None => {
            let k = opts.k.or(params.map(|p| p.k)).ok_or_else(|| {
                ColorerError::InvalidOptions("Δ < 2: the parameter formula is undefined, pass k explicitly".into())
            })?;
            generated = random_cover(g, k, seed::derive(opts.seed, 0), CoverMode::Perfect)?;
            &generated
        }
    };
    let k = shortest_list(cover);
    let ell = opts.ell.or(params.map(|p| p.ell)).unwrap_or(1).max(1);
    let mut warnings = Vec::new();
    if let Some(p) = params.filter(|p| k < p.k) {
        warnings.push(below_threshold_warning(k, p.k));
    }
    let mut cfg = Phase1Config::triangle_free(ell, n, seed::derive(opts.seed, 1));
    if opts.cap_mode == CapMode::Half {
        cfg.degree_cap = ell / 2;
    }
    cfg.max_rounds = opts.max_rounds.unwrap_or(cfg.max_rounds);
    cfg.burn_in = opts.burn_in;
    let rounds = opts.completion_rounds.unwrap_or(100 * n as u64);
    let completion = match opts.cap_mode {
        CapMode::Eighth => Completion::Lll { rounds },
        CapMode::Half => Completion::GreedyIfNeeded { rounds },
    };
    execute(
        g,
        Plan {
            cover,
            k,
            cfg,
            completion,
            warnings,
        },
    )
}

/// `K_r`-free pipeline: phase 1 with the residual-degree rule and layered
/// resampling, then greedy completion. `k` comes from the options or from
/// [`params_kr`], which needs `Δ > 4` and `r >= 4`. `ℓ` defaults to
/// `⌈Δ^{9/10}⌉`, capped at `⌊k/4⌋` when `k` is below the formula's value.
pub fn color_kr_free(
    g: &Graph,
    r: usize,
    cover: Option<&Cover>,
    opts: &PipelineOptions,
) -> Result<RunReport, ColorerError> {
    if r < 3 {
        return Err(ColorerError::InvalidOptions(format!("clique size r must be at least 3, got {r}")));
    }
    if !is_kr_free(g, r, DEFAULT_CLIQUE_BUDGET)? {
        return Err(ColorerError::ContainsClique(r));
    }
    let n = g.vertex_count();
    let delta = g.max_degree();
    let params = params_kr(delta, r);
    let generated;
    let cover = match cover {
        Some(c) => {
            check_cover(g, c)?;
            c
        }
        None => {
            let k = match (opts.k, &params) {
                (Some(k), _) => k,
                (None, Ok(p)) => p.k,
                (None, Err(e)) => return Err(e.clone().into()),
            };
            generated = random_cover(g, k, seed::derive(opts.seed, 0), CoverMode::Perfect)?;
            &generated
        }
    };
    let k = shortest_list(cover);
    let ell = opts
        .ell
        .unwrap_or_else(|| {
            let formula = ceil_param((delta as f64).powf(0.9));
            match &params {
                Ok(p) if k >= p.k => formula,
                _ => formula.min(k / 4),
            }
        })
        .max(1);
    let mut warnings = Vec::new();
    if let Some(p) = params.as_ref().ok().filter(|p| k < p.k) {
        warnings.push(below_threshold_warning(k, p.k));
    }
    let threshold = opts.threshold.unwrap_or_else(|| layer_threshold(delta));
    let mut cfg = Phase1Config::kr_free(ell, n, threshold, seed::derive(opts.seed, 1));
    cfg.max_rounds = opts.max_rounds.unwrap_or(cfg.max_rounds);
    cfg.burn_in = opts.burn_in;
    execute(
        g,
        Plan {
            cover,
            k,
            cfg,
            completion: Completion::Greedy,
            warnings,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn opts(seed: u64, k: usize) -> PipelineOptions {
        PipelineOptions {
            seed,
            k: Some(k),
            ..Default::default()
        }
    }

    #[test]
    fn five_cycle_with_three_colors() {
        let c5 = generate(&Family::Cycle { n: 5 }).unwrap();
        let successes = (0..10)
            .filter(|&s| color_triangle_free(&c5, 0.5, None, &opts(s, 3)).unwrap().is_success())
            .count();
        assert!(successes >= 1);
    }

    #[test]
    fn rejects_wrong_inputs() {
        let k3 = generate(&Family::Complete { n: 3 }).unwrap();
        assert_eq!(color_triangle_free(&k3, 0.5, None, &opts(0, 3)), Err(ColorerError::NotTriangleFree));
        let k4 = generate(&Family::Complete { n: 4 }).unwrap();
        assert_eq!(color_kr_free(&k4, 4, None, &opts(0, 4)), Err(ColorerError::ContainsClique(4)));
        let c5 = generate(&Family::Cycle { n: 5 }).unwrap();
        assert!(matches!(
            color_kr_free(&c5, 4, None, &PipelineOptions::default()),
            Err(ColorerError::Sampler(SamplerError::Domain(_)))
        ));
        assert!(color_triangle_free(&c5, 1.0, None, &opts(0, 3)).is_err());
    }

    #[test]
    fn generous_lists_succeed() {
        for s in 0..10 {
            let g = generate(&Family::RandomTriangleFree { n: 60, d: 5.0, seed: s }).unwrap();
            let r = color_triangle_free(&g, 0.5, None, &opts(s, g.max_degree() + 1)).unwrap();
            if let Some(c) = &r.coloring {
                assert_eq!(c.domain_size(), 60);
            }
            let g = generate(&Family::RandomKrFree { n: 60, d: 6.0, r: 4, seed: s }).unwrap();
            let r = color_kr_free(&g, 4, None, &opts(s, g.max_degree() + 1)).unwrap();
            assert!(r.coloring.is_some() == r.is_success());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let g = generate(&Family::RandomTriangleFree { n: 80, d: 6.0, seed: 3 }).unwrap();
        let a = color_triangle_free(&g, 0.5, None, &opts(11, 5)).unwrap();
        let b = color_triangle_free(&g, 0.5, None, &opts(11, 5)).unwrap();
        assert_eq!(a, b);
        assert!(!a.warnings.is_empty() || a.k >= params_triangle_free(g.max_degree(), 0.5).unwrap().k);
    }
}
