use std::collections::BTreeSet;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ColorerError;
use crate::cover::{Assignment, Cover, CoverError, PartialColoring};
use crate::sampler::{default_burn_in, glauber_run, layered_sample, star_sample, LocalPicks, NeighborhoodInstance};
use crate::seed;

/// Which clause, besides list survival, makes a vertex's event bad.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EventRule {
    /// Some surviving list element has residual cross-degree above the cap.
    CrossDegree,
    /// The residual base degree `deg_{G_I}(u)` is at least `ℓ`.
    BaseDegree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Phase1Config {
    /// Survival threshold `ℓ >= 1`.
    pub ell: usize,
    /// Residual cross-degree cap, used by [`EventRule::CrossDegree`].
    pub degree_cap: usize,
    pub rule: EventRule,
    pub max_rounds: u64,
    pub seed: u64,
    /// Threshold on `ind(F_i)` for the layered sampler.
    pub threshold: u128,
    /// Glauber warm-start steps; `None` uses the default burn-in.
    pub burn_in: Option<u64>,
}

impl Phase1Config {
    /// Triangle-free defaults: cap `⌊ℓ/8⌋`, 100 rounds per vertex.
    pub fn triangle_free(ell: usize, n: usize, seed: u64) -> Self {
        Phase1Config {
            ell,
            degree_cap: ell / 8,
            rule: EventRule::CrossDegree,
            max_rounds: 100 * n as u64,
            seed,
            threshold: 1,
            burn_in: None,
        }
    }

    /// `K_r`-free defaults: survival plus residual base degree below `ℓ`.
    pub fn kr_free(ell: usize, n: usize, threshold: u128, seed: u64) -> Self {
        Phase1Config {
            ell,
            degree_cap: ell / 8,
            rule: EventRule::BaseDegree,
            max_rounds: 100 * n as u64,
            seed,
            threshold,
            burn_in: None,
        }
    }
}

/// Whether the event at `u` holds under the picks of `state`.
pub(crate) fn is_violated(state: &Assignment<'_>, u: usize, cfg: &Phase1Config) -> bool {
    if state.pick(u).is_some() {
        return false;
    }
    if state.free_slots(u).take(cfg.ell).count() < cfg.ell {
        return true;
    }
    match cfg.rule {
        EventRule::CrossDegree => state
            .free_slots(u)
            .any(|s| state.residual_cross_degree(u, s) > cfg.degree_cap),
        EventRule::BaseDegree => state.residual_degree(u) >= cfg.ell,
    }
}

/// Vertices whose event holds under `coloring`, in increasing order.
pub fn violated_events(cover: &Cover, coloring: &PartialColoring, cfg: &Phase1Config) -> Result<Vec<usize>, CoverError> {
    let state = Assignment::from_coloring(cover, coloring)?;
    Ok((0..cover.graph().vertex_count())
        .filter(|&u| is_violated(&state, u, cfg))
        .collect())
}

/// Result of [`mt_phase1`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Phase1Result {
    pub coloring: PartialColoring,
    pub rounds: u64,
    /// True iff no event holds at the end.
    pub success: bool,
    pub violated: usize,
}

/// Stepwise Moser–Tardos run over the vertex events.
pub struct Phase1<'c> {
    state: Assignment<'c>,
    cfg: Phase1Config,
    violated: BTreeSet<usize>,
    rng: ChaCha8Rng,
    rounds: u64,
}

impl<'c> Phase1<'c> {
    /// Warm-starts with Glauber dynamics over all vertices.
    pub fn new(cover: &'c Cover, cfg: Phase1Config) -> Self {
        let mut rng = seed::rng(cfg.seed);
        let mut state = Assignment::new(cover);
        let all: Vec<usize> = (0..cover.graph().vertex_count()).collect();
        let burn_in = cfg.burn_in.unwrap_or_else(|| default_burn_in(cover, &all));
        glauber_run(&mut state, &all, burn_in, &mut rng);
        let violated = all.into_iter().filter(|&u| is_violated(&state, u, &cfg)).collect();
        Phase1 {
            state,
            cfg,
            violated,
            rng,
            rounds: 0,
        }
    }

    pub fn coloring(&self) -> PartialColoring {
        self.state.to_coloring()
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    /// The lowest vertex whose event holds.
    pub fn first_violated(&self) -> Option<usize> {
        self.violated.first().copied()
    }

    fn resample(&mut self, u: usize) -> Result<LocalPicks, ColorerError> {
        let cover = self.state.cover();
        let g = cover.graph();
        for &v in g.neighbors(u) {
            self.state.set(v, None);
        }
        let inst = NeighborhoodInstance::from_assignment(&self.state, u)?;
        let picks = if g.neighborhood_is_independent(u) {
            star_sample(&inst, &mut self.rng)?
        } else {
            layered_sample(&inst, self.cfg.threshold, &mut self.rng)?.0
        };
        inst.apply(&mut self.state, &picks);
        Ok(picks)
    }

    /// Resamples the picks on `N(u)` for the first violated `u` and returns `u`;
    /// `None` when no event holds.
    pub fn step(&mut self) -> Result<Option<usize>, ColorerError> {
        let Some(u) = self.first_violated() else {
            return Ok(None);
        };
        self.resample(u)?;
        self.rounds += 1;
        let g = self.state.cover().graph();
        for w in g.ball(u, 3).expect("vertex in range") {
            if is_violated(&self.state, w, &self.cfg) {
                self.violated.insert(w);
            } else {
                self.violated.remove(&w);
            }
        }
        Ok(Some(u))
    }

    /// Steps until no event holds or the round cap is reached.
    pub fn run(mut self) -> Result<Phase1Result, ColorerError> {
        while !self.violated.is_empty() && self.rounds < self.cfg.max_rounds {
            self.step()?;
        }
        Ok(Phase1Result {
            coloring: self.state.to_coloring(),
            rounds: self.rounds,
            success: self.violated.is_empty(),
            violated: self.violated.len(),
        })
    }
}

/// Moser–Tardos phase 1: while some vertex event holds, resample the picks on
/// the neighborhood of the lowest such vertex from their conditional uniform
/// distribution given everything else.
pub fn mt_phase1(cover: &Cover, cfg: &Phase1Config) -> Result<Phase1Result, ColorerError> {
    Phase1::new(cover, cfg.clone()).run()
}
