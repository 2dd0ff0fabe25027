use itertools::Itertools;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{binomial_sigma, ExperimentReport, HarnessError, NeighborhoodCase, Row, EXACT_SLACK};
use crate::colorer::{color_triangle_free, PipelineOptions};
use crate::exact::{ind_count, median_alpha, DEFAULT_ENUMERATION_LIMIT};
use crate::graph::{generate, Family, Graph};
use crate::sampler::{
    ceil_param, f_lambda, layered_sample, params_triangle_free, star_draw, LocalPicks, NeighborhoodInstance,
    ENUMERATION_LIMIT,
};
use crate::seed;

const CHUNK: u64 = 4096;

/// Runs `trials` draws in chunks of [`CHUNK`], chunk `c` seeded with
/// `derive(seed, c)`, and sums the per-chunk counters.
fn tally<F>(trials: u64, seed: u64, width: usize, draw: F) -> Vec<u64>
where
    F: Fn(&mut [u64], &mut ChaCha8Rng) + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seed::rng(seed::derive(seed, c));
            let mut counts = vec![0u64; width];
            for _ in 0..CHUNK.min(trials - c * CHUNK) {
                draw(&mut counts, &mut rng);
            }
            counts
        })
        .reduce(
            || vec![0u64; width],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

fn star_instance(case: &NeighborhoodCase) -> Result<NeighborhoodInstance<'_>, HarnessError> {
    let inst = case.instance()?;
    if let Some((x, y)) = inst.internal_cross_edge() {
        return Err(HarnessError::Precondition(format!(
            "the neighborhood lists carry the cross edge {x}-{y}; the star procedure does not apply"
        )));
    }
    Ok(inst)
}

fn focus_list_size(inst: &NeighborhoodInstance<'_>) -> Result<usize, HarnessError> {
    let k = inst.cover().list_size(inst.focus());
    if k > 64 {
        return Err(HarnessError::Precondition(format!("focus list of size {k} exceeds 64")));
    }
    Ok(k)
}

/// `Pr[x ∈ L_I(u)] = ∏_{v ∈ Ñ(x)} |L_J(v)|/(|L_J(v)|+1)` under the star procedure.
fn presence_probability(inst: &NeighborhoodInstance<'_>, x: usize) -> f64 {
    inst.touched(x)
        .map(|i| {
            let a = inst.available(i).len() as f64;
            a / (a + 1.0)
        })
        .product()
}

/// `(exp(-Σ 1/|L_J(v)|), exp(-Σ 1/(|L_J(v)|+1)))` over `v ∈ Ñ(x)`.
fn presence_bounds(inst: &NeighborhoodInstance<'_>, x: usize) -> (f64, f64) {
    let (lo, hi) = inst.touched(x).fold((0.0, 0.0), |(lo, hi), i| {
        let a = inst.available(i).len() as f64;
        (lo + 1.0 / a, hi + 1.0 / (a + 1.0))
    });
    ((-lo).exp(), (-hi).exp())
}

/// Bitmask of the surviving focus slots.
fn survivor_mask(inst: &NeighborhoodInstance<'_>, picks: &LocalPicks) -> u64 {
    inst.surviving(picks).iter().fold(0, |m, &x| m | 1 << x)
}

fn fraction(states: &[LocalPicks], pred: impl Fn(&LocalPicks) -> bool) -> f64 {
    states.iter().filter(|s| pred(s)).count() as f64 / states.len() as f64
}

/// Survival of the focus list under a uniform independent subset of
/// `L_J(N(u))`, drawn by the star procedure.
///
/// Reports, per focus slot `x`, the exact `Pr[x ∈ L_I(u)]` with its two
/// exponential bounds and the empirical frequency; the exact and empirical
/// `E|L_I(u)|`; and the frequencies `p0` of `|L_I(u)| < ℓ` and `p1` of a
/// surviving slot with residual cross-degree above `ℓ/2`, next to `Δ^{-3}/8`.
/// Only the exact identities are gated.
pub fn survival_experiment(
    case: &NeighborhoodCase,
    ell: usize,
    trials: u64,
    seed: u64,
) -> Result<ExperimentReport, HarnessError> {
    let inst = star_instance(case)?;
    let k = focus_list_size(&inst)?;
    let delta = case.cover.graph().max_degree();
    let mut report = ExperimentReport::new("survival", seed);
    report.param("focus", inst.focus());
    report.param("degree", inst.neighbors().len());
    report.param("max_degree", delta);
    report.param("k", k);
    report.param("ell", ell);
    report.param("trials", trials);

    let high_degree = |picks: &LocalPicks, survivors: &[usize]| {
        survivors
            .iter()
            .any(|&x| 2 * inst.residual_cross_degree(x, picks) > ell)
    };
    let counts = tally(trials, seed, 2 * k + 2, |c, rng| {
        let picks = star_draw(&inst, rng);
        let survivors = inst.surviving(&picks);
        for &x in &survivors {
            c[x] += 1;
        }
        c[k + survivors.len()] += 1;
        if high_degree(&picks, &survivors) {
            c[2 * k + 1] += 1;
        }
    });
    let states = inst.enumerate(ENUMERATION_LIMIT).ok();

    let (mut e, mut e_lo, mut e_hi) = (0.0, 0.0, 0.0);
    let (mut sandwich, mut agree, mut in_ci) = (true, true, 0);
    for x in 0..k {
        let p = presence_probability(&inst, x);
        let (lo, hi) = presence_bounds(&inst, x);
        sandwich &= lo <= p + EXACT_SLACK && p <= hi + EXACT_SLACK;
        if let Some(states) = &states {
            agree &= (fraction(states, |s| inst.surviving(s).contains(&x)) - p).abs() <= EXACT_SLACK;
        }
        let row = Row::frequency(format!("p_x[{x}]"), counts[x], trials).exact(p).lower(lo).upper(hi);
        if row.ci_low.unwrap() <= p && p <= row.ci_high.unwrap() {
            in_ci += 1;
        }
        report.row(row);
        e += p;
        e_lo += lo;
        e_hi += hi;
    }
    let hist = &counts[k..=2 * k];
    let mean = if trials == 0 {
        0.0
    } else {
        hist.iter().enumerate().map(|(s, &c)| (s as u64 * c) as f64).sum::<f64>() / trials as f64
    };
    report.row(Row::new("E|L_I(u)|", mean).exact(e).lower(e_lo).upper(e_hi));

    let bound = (delta as f64).powi(-3) / 8.0;
    let mut p0 = Row::frequency("p0", hist[..ell.min(k + 1)].iter().sum(), trials).upper(bound);
    let mut p1 = Row::frequency("p1", counts[2 * k + 1], trials).upper(bound);
    if let Some(states) = &states {
        p0 = p0.exact(fraction(states, |s| inst.surviving(s).len() < ell));
        p1 = p1.exact(fraction(states, |s| high_degree(s, &inst.surviving(s))));
    }
    let (p0_low, p1_low) = (p0.ci_low.unwrap(), p1.ci_low.unwrap());
    report.row(p0);
    report.row(p1);

    report.verdict(
        "exp(-Σ 1/|L_J(v)|) ≤ Pr[x ∈ L_I(u)] ≤ exp(-Σ 1/(|L_J(v)|+1)) for every x",
        sandwich,
        true,
        format!("{k} focus slots"),
    );
    report.verdict(
        "Σ_x lower bound ≤ E|L_I(u)| ≤ Σ_x upper bound",
        e_lo <= e + EXACT_SLACK && e <= e_hi + EXACT_SLACK,
        true,
        format!("{e_lo} ≤ {e} ≤ {e_hi}"),
    );
    if let Some(states) = &states {
        report.verdict(
            "closed-form Pr[x ∈ L_I(u)] equals enumeration",
            agree,
            true,
            format!("{} states", states.len()),
        );
    }
    if trials > 0 {
        report.verdict(
            "exact Pr[x ∈ L_I(u)] inside the 99% interval of its frequency",
            in_ci == k,
            false,
            format!("{in_ci}/{k}"),
        );
    }
    for (name, low) in [("p0", p0_low), ("p1", p1_low)] {
        report.verdict(
            format!("{name} ≤ Δ^-3/8"),
            low <= bound,
            false,
            "asymptotic bound, holds for large Δ only",
        );
    }
    Ok(report)
}

/// `Pr[all of T survive] = ∏_v (1 - c_v(T)/(|L_J(v)|+1))`, where `c_v(T)`
/// counts the slots of `T` with a partner in `L_J(v)`; the complement events
/// follow by inclusion-exclusion.
fn absent_closed_form(inst: &NeighborhoodInstance<'_>, set: &[usize]) -> f64 {
    let d = inst.neighbors().len();
    let mut total = 0.0;
    for size in 0..=set.len() {
        for t in set.iter().combinations(size) {
            let mut hits = vec![0usize; d];
            for &&x in &t {
                for i in inst.touched(x) {
                    hits[i] += 1;
                }
            }
            let present: f64 = (0..d)
                .map(|i| 1.0 - hits[i] as f64 / (inst.available(i).len() as f64 + 1.0))
                .product();
            total += if size % 2 == 0 { present } else { -present };
        }
    }
    total
}

/// Exact check, by enumerating the independent subsets of `L_J(N(u))`, that
/// the events `x ∉ L_I(u)` are negatively correlated:
/// `Pr[∀x ∈ S: x ∉ L_I(u)] ≤ ∏_{x∈S} Pr[x ∉ L_I(u)]` for every `S` of size at
/// most 4. When the star procedure applies, every probability is also computed
/// in closed form and compared. The inequality is gated only in that case.
pub fn negcorr_experiment(case: &NeighborhoodCase, seed: u64) -> Result<ExperimentReport, HarnessError> {
    let inst = case.instance()?;
    let k = focus_list_size(&inst)?;
    let states = inst.enumerate(ENUMERATION_LIMIT)?;
    let masks: Vec<u64> = states.iter().map(|s| survivor_mask(&inst, s)).collect();
    let absent = |set: u64| masks.iter().filter(|&&m| m & set == 0).count() as f64 / masks.len() as f64;
    let star = inst.internal_cross_edge().is_none();

    let mut report = ExperimentReport::new("negcorr", seed);
    report.param("focus", inst.focus());
    report.param("k", k);
    report.param("states", states.len());
    report.param("star", star);
    let (mut holds, mut agree) = (true, true);
    let (mut subsets, mut strict) = (0, 0);
    let mut max_gap = f64::NEG_INFINITY;
    for size in 1..=k.min(4) {
        for set in (0..k).combinations(size) {
            let joint = absent(set.iter().fold(0, |m, &x| m | 1 << x));
            let product: f64 = set.iter().map(|&x| absent(1 << x)).product();
            holds &= joint <= product + EXACT_SLACK;
            if joint < product - EXACT_SLACK {
                strict += 1;
            }
            max_gap = max_gap.max(joint - product);
            if star {
                agree &= (absent_closed_form(&inst, &set) - joint).abs() <= EXACT_SLACK;
            }
            subsets += 1;
            report.row(Row::new(format!("absent{{{}}}", set.iter().join(" ")), joint).exact(joint).upper(product));
        }
    }
    report.row(Row::new("subsets", subsets as f64));
    report.row(Row::new("strict", strict as f64));
    report.row(Row::new("max_gap", max_gap));
    report.verdict(
        "Pr[∀x ∈ S: x ∉ L_I(u)] ≤ ∏_{x∈S} Pr[x ∉ L_I(u)] for |S| ≤ 4",
        holds,
        star,
        if star {
            format!("{subsets} subsets, {strict} strict")
        } else {
            "neighborhood lists carry cross edges; reported only".into()
        },
    );
    if star {
        report.verdict("closed-form absence probabilities equal enumeration", agree, true, "");
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// `Pr[X ≤ (1-δ)E[X]] ≤ exp(-δ²E[X]/2)` for `0 < δ < 1`.
    Lower,
    /// `Pr[X ≥ (1+δ)E[X]] ≤ exp(-δE[X]/3)` for `δ > 1`.
    Upper,
}

/// The Chernoff bound for negatively correlated indicators.
pub fn chernoff_check(expectation: f64, delta: f64, tail: Tail) -> Result<f64, HarnessError> {
    if !(expectation >= 0.0 && expectation.is_finite()) {
        return Err(HarnessError::Domain(format!("expectation must be finite and nonnegative, got {expectation}")));
    }
    match tail {
        Tail::Lower if delta > 0.0 && delta < 1.0 => Ok((-delta * delta * expectation / 2.0).exp()),
        Tail::Upper if delta > 1.0 => Ok((-delta * expectation / 3.0).exp()),
        Tail::Lower => Err(HarnessError::Domain(format!("lower tail needs 0 < δ < 1, got {delta}"))),
        Tail::Upper => Err(HarnessError::Domain(format!("upper tail needs δ > 1, got {delta}"))),
    }
}

/// Lower-tail Chernoff check on `X = |L_I(u)|`, a sum of indicators whose
/// complements are negatively correlated under the star procedure. For each
/// `δ`, the empirical `Pr[X ≤ (1-δ)E[X]]` must not exceed the bound by more
/// than three binomial standard deviations (taken at the bound); when the
/// instance is enumerable the exact tail must not exceed it at all.
pub fn chernoff_experiment(
    case: &NeighborhoodCase,
    deltas: &[f64],
    trials: u64,
    seed: u64,
) -> Result<ExperimentReport, HarnessError> {
    let inst = star_instance(case)?;
    let k = focus_list_size(&inst)?;
    let e: f64 = (0..k).map(|x| presence_probability(&inst, x)).sum();
    let bounds = deltas
        .iter()
        .map(|&d| chernoff_check(e, d, Tail::Lower))
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = ExperimentReport::new("chernoff", seed);
    report.param("focus", inst.focus());
    report.param("k", k);
    report.param("trials", trials);
    report.param("deltas", deltas.iter().join(" "));

    let hist = tally(trials, seed, k + 1, |c, rng| {
        c[inst.surviving(&star_draw(&inst, rng)).len()] += 1;
    });
    let sizes: Option<Vec<usize>> = inst
        .enumerate(ENUMERATION_LIMIT)
        .ok()
        .map(|states| states.iter().map(|s| inst.surviving(s).len()).collect());
    report.row(Row::new("E[X]", e).exact(e));
    for (&delta, &bound) in deltas.iter().zip(&bounds) {
        let cut = (1.0 - delta) * e + 1e-9;
        let hits: u64 = hist.iter().enumerate().filter(|&(s, _)| s as f64 <= cut).map(|(_, &c)| c).sum();
        let mut row = Row::frequency(format!("tail[δ={delta}]"), hits, trials).upper(bound);
        let sigma = binomial_sigma(bound, trials);
        if trials > 0 {
            report.verdict(
                format!("Pr[X ≤ (1-δ)E[X]] ≤ exp(-δ²E[X]/2) + 3σ at δ = {delta}"),
                row.value <= bound + 3.0 * sigma,
                true,
                format!("empirical {} (99% CI {}..{}), bound {bound}, σ {sigma}", row.value, row.ci_low.unwrap(), row.ci_high.unwrap()),
            );
        }
        if let Some(sizes) = &sizes {
            let exact = sizes.iter().filter(|&&s| s as f64 <= cut).count() as f64 / sizes.len() as f64;
            row = row.exact(exact);
            report.verdict(
                format!("exact Pr[X ≤ (1-δ)E[X]] ≤ exp(-δ²E[X]/2) at δ = {delta}"),
                exact <= bound + EXACT_SLACK,
                true,
                format!("exact {exact}, bound {bound}"),
            );
        }
        report.row(row);
    }
    Ok(report)
}

/// Checks `ᾱ(F) ≥ f(ind(F))` on `samples` random `K_r`-free graphs `F`. Sample
/// `i` uses seed `derive(seed, i)` to pick `n ∈ [2, n_max]` and `d ∈ [0, n-1)`
/// and generates `F` from the `K_r`-free family. Any failure is logged as an
/// error.
pub fn shearer_experiment(r: usize, n_max: usize, samples: u64, seed: u64) -> Result<ExperimentReport, HarnessError> {
    if r < 4 {
        return Err(HarnessError::Domain(format!("r must be at least 4, got {r}")));
    }
    if !(2..=DEFAULT_ENUMERATION_LIMIT).contains(&n_max) {
        return Err(HarnessError::Domain(format!(
            "n_max must lie in [2, {DEFAULT_ENUMERATION_LIMIT}], got {n_max}"
        )));
    }
    let results = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = seed::derive(seed, i);
            let mut rng = seed::rng(s);
            let n = rng.gen_range(2..=n_max);
            let d = rng.gen_range(0.0..(n - 1) as f64);
            let g = generate(&Family::RandomKrFree { n, d, r, seed: s })?;
            let ind = ind_count(&g)?;
            let alpha = median_alpha(&g)?;
            let f = if ind > 2 { Some(f_lambda(ind as f64, r)?) } else { None };
            Ok((g, ind, alpha, f))
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let mut report = ExperimentReport::new("shearer", seed);
    report.param("r", r);
    report.param("n_max", n_max);
    report.param("samples", samples);
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut min_margin = f64::INFINITY;
    for (i, (g, ind, alpha, f)) in results.into_iter().enumerate() {
        report.corpus.push(g.to_edge_list());
        let mut row = Row::new(format!("alpha[{i}]"), alpha as f64).exact(ind as f64);
        if let Some(f) = f {
            checked += 1;
            min_margin = min_margin.min(alpha as f64 - f);
            if (alpha as f64) < f {
                failures.push(i);
            }
            row = row.lower(f);
        }
        report.row(row);
    }
    if !failures.is_empty() {
        log::error!("ᾱ(F) < f(ind(F)) on samples {failures:?} (seed {seed})");
    }
    report.verdict(
        "ᾱ(F) ≥ f(ind(F)) for every sample with ind(F) > 2",
        failures.is_empty(),
        true,
        format!("{checked} checked, minimum margin {min_margin}, failing samples {failures:?}"),
    );
    Ok(report)
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// Estimates, with the layered sampler, the probability that the first `ℓ`
/// neighbors of `u` all stay uncolored with residual lists of size at least
/// `ℓ`, next to the bound `1/ℓ!`. Exact when the instance is enumerable.
/// Report-only.
pub fn factorial_bound_experiment(
    case: &NeighborhoodCase,
    ell: usize,
    trials: u64,
    threshold: u128,
    seed: u64,
) -> Result<ExperimentReport, HarnessError> {
    if ell == 0 {
        return Err(HarnessError::Domain("ℓ must be at least 1".into()));
    }
    let inst = case.instance()?;
    let degree = inst.neighbors().len();
    let bound = 1.0 / factorial(ell);
    let mut report = ExperimentReport::new("factorial", seed);
    report.param("focus", inst.focus());
    report.param("degree", degree);
    report.param("ell", ell);
    report.param("trials", trials);
    report.param("threshold", threshold);
    let inequality = "Pr[v_1..v_ℓ uncolored with |L_I(v_t)| ≥ ℓ] ≤ 1/ℓ!";
    if degree < ell {
        report.param("applicable", false);
        report.verdict(inequality, true, false, "not applicable: deg(u) < ℓ");
        return Ok(report);
    }
    report.param("applicable", true);
    layered_sample(&inst, threshold, &mut seed::rng(seed))?;
    let event = |picks: &LocalPicks| (0..ell).all(|t| picks[t].is_none() && inst.residual_list_size(t, picks) >= ell);
    let counts = tally(trials, seed, 1, |c, rng| {
        let (picks, _) = layered_sample(&inst, threshold, rng).expect("layer sizes checked");
        if event(&picks) {
            c[0] += 1;
        }
    });
    let mut row = Row::frequency("tuple_uncolored", counts[0], trials).upper(bound);
    let exact = inst.enumerate(ENUMERATION_LIMIT).ok().map(|s| fraction(&s, event));
    if let Some(p) = exact {
        row = row.exact(p);
    }
    let sigma = binomial_sigma(bound, trials);
    let holds = exact.is_none_or(|p| p <= bound + EXACT_SLACK) && row.value <= bound + 3.0 * sigma;
    report.verdict(
        inequality,
        holds,
        false,
        format!(
            "empirical {}, exact {}, bound {bound}",
            row.value,
            exact.map_or("n/a".to_string(), |p| p.to_string())
        ),
    );
    report.row(row);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    /// `G(n, Δ/n)` with triangles broken, then degrees capped at `Δ`.
    TriangleFree,
    /// Random bipartite graph on parts of sizes `⌊n/2⌋` and `⌈n/2⌉` with edge
    /// probability `Δ/⌊n/2⌋`, then degrees capped at `Δ`.
    Bipartite,
}

impl SweepFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SweepFamily::TriangleFree => "triangle_free",
            SweepFamily::Bipartite => "bipartite",
        }
    }

    fn graph(&self, n: usize, delta: usize, seed: u64) -> Result<Graph, HarnessError> {
        let g = match self {
            SweepFamily::TriangleFree => generate(&Family::RandomTriangleFree { n, d: delta as f64, seed })?,
            SweepFamily::Bipartite => {
                let half = n / 2;
                let p = (delta as f64 / half.max(1) as f64).min(1.0);
                generate(&Family::RandomBipartite { n: half, m: n - half, p, seed })?
            }
        };
        Ok(cap_degree(&g, delta))
    }
}

/// Keeps edges in [`Graph::edges`] order while both endpoints are below
/// `max_degree`.
pub fn cap_degree(g: &Graph, max_degree: usize) -> Graph {
    let mut degree = vec![0; g.vertex_count()];
    let kept: Vec<(usize, usize)> = g
        .edges()
        .filter(|&(u, v)| {
            let keep = degree[u] < max_degree && degree[v] < max_degree;
            if keep {
                degree[u] += 1;
                degree[v] += 1;
            }
            keep
        })
        .collect();
    Graph::from_edges(g.vertex_count(), kept).expect("subgraph of a valid graph")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: SweepFamily,
    pub n: usize,
    pub deltas: Vec<usize>,
    pub multipliers: Vec<f64>,
    pub trials: u64,
    pub eps: f64,
    pub seed: u64,
    pub max_rounds: Option<u64>,
}

/// One CSV line of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: &'static str,
    pub n: usize,
    pub delta: usize,
    pub m: f64,
    pub k: usize,
    pub ell: usize,
    pub trials: u64,
    pub successes: u64,
    pub mean_rounds: f64,
}

/// Success fractions of the triangle-free pipeline with `k = ⌈mΔ/ln Δ⌉` and
/// `ℓ` from the parameter formula at `Δ`. Trial `t` at the `i`-th `Δ` uses the
/// graph seeded by `g = derive(derive(seed, i), t)` for every multiplier, and
/// the `j`-th multiplier runs with seed `derive(g, j + 1)`.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, HarnessError> {
    if cfg.n < 2 {
        return Err(HarnessError::Domain("sweep needs n >= 2".into()));
    }
    if let Some(m) = cfg.multipliers.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
        return Err(HarnessError::Domain(format!("multiplier must be positive, got {m}")));
    }
    let mut rows = Vec::new();
    for (i, &delta) in cfg.deltas.iter().enumerate() {
        let params = params_triangle_free(delta, cfg.eps)?;
        let graphs = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let gs = seed::derive(seed::derive(cfg.seed, i as u64), t);
                cfg.family.graph(cfg.n, delta, gs).map(|g| (gs, g))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (j, &m) in cfg.multipliers.iter().enumerate() {
            let k = ceil_param(m * delta as f64 / (delta as f64).ln()).max(1);
            let runs = graphs
                .par_iter()
                .map(|(gs, g)| {
                    let opts = PipelineOptions {
                        seed: seed::derive(*gs, j as u64 + 1),
                        k: Some(k),
                        ell: Some(params.ell),
                        max_rounds: cfg.max_rounds,
                        ..Default::default()
                    };
                    color_triangle_free(g, cfg.eps, None, &opts).map(|r| (r.is_success(), r.phase1_rounds))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let successes = runs.iter().filter(|r| r.0).count() as u64;
            let mean_rounds = if runs.is_empty() {
                0.0
            } else {
                runs.iter().map(|r| r.1 as f64).sum::<f64>() / runs.len() as f64
            };
            rows.push(SweepRow {
                family: cfg.family.name(),
                n: cfg.n,
                delta,
                m,
                k,
                ell: params.ell,
                trials: cfg.trials,
                successes,
                mean_rounds,
            });
        }
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["family", "n", "delta", "m", "k", "ell", "trials", "successes", "mean_rounds"])
            .expect("in-memory write");
    }
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{cover_from_lists, random_cover, CoverMode};
    use crate::harness::{layered_case, star_case};

    fn star(lists: &[Vec<u32>], focus: Vec<u32>) -> NeighborhoodCase {
        let d = lists.len();
        let g = Graph::from_edges(d + 1, (1..=d).map(|v| (0, v))).unwrap();
        let mut all = vec![focus];
        all.extend(lists.iter().cloned());
        NeighborhoodCase::unconditioned(cover_from_lists(&g, &all).unwrap(), 0)
    }

    #[test]
    fn survival_without_cross_edges() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let case = NeighborhoodCase::unconditioned(random_cover(&g, 3, 1, CoverMode::Density(0.0)).unwrap(), 0);
        let r = survival_experiment(&case, 3, 5000, 1).unwrap();
        assert!(r.passed());
        for x in 0..3 {
            let row = r.find_row(&format!("p_x[{x}]")).unwrap();
            assert_eq!((row.exact, row.value), (Some(1.0), 1.0));
        }
        assert_eq!(r.find_row("p0").unwrap().value, 0.0);
    }

    #[test]
    fn survival_single_neighbor_full_matching() {
        let case = star(&[vec![1, 2]], vec![1, 2]);
        let trials = 100_000;
        let r = survival_experiment(&case, 1, trials, 2).unwrap();
        assert!(r.passed());
        for x in 0..2 {
            let row = r.find_row(&format!("p_x[{x}]")).unwrap();
            assert!((row.exact.unwrap() - 2.0 / 3.0).abs() < 1e-15);
            assert!((row.value - 2.0 / 3.0).abs() <= 3.0 * binomial_sigma(2.0 / 3.0, trials));
        }
        let e = r.find_row("E|L_I(u)|").unwrap();
        assert!((e.exact.unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn survival_on_random_cases() {
        for s in 0..20 {
            let r = survival_experiment(&star_case(s), 2, 2000, s).unwrap();
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
            let e = r.find_row("E|L_I(u)|").unwrap();
            assert!(e.lower.unwrap() <= e.exact.unwrap() + EXACT_SLACK);
        }
        assert!(matches!(
            survival_experiment(&layered_case(0), 1, 10, 0),
            Err(HarnessError::Precondition(_))
        ));
    }

    #[test]
    fn negcorr_equalities() {
        let g = Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        let none = NeighborhoodCase::unconditioned(random_cover(&g, 3, 1, CoverMode::Density(0.0)).unwrap(), 0);
        let r = negcorr_experiment(&none, 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.find_row("strict").unwrap().value, 0.0);
        assert_eq!(r.find_row("max_gap").unwrap().value, 0.0);

        // Slot 0 meets only neighbor 1 and slot 1 only neighbor 2.
        let disjoint = star(&[vec![1, 5], vec![2, 6]], vec![1, 2]);
        let r = negcorr_experiment(&disjoint, 0).unwrap();
        assert!(r.passed());
        let row = r.find_row("absent{0 1}").unwrap();
        assert!((row.value - row.upper.unwrap()).abs() < 1e-15);
    }

    #[test]
    fn negcorr_strict_on_overlapping_layers() {
        let overlap = star(&[vec![1, 2], vec![1, 2]], vec![1, 2]);
        let r = negcorr_experiment(&overlap, 0).unwrap();
        assert!(r.passed());
        assert!(r.find_row("strict").unwrap().value > 0.0);
        for s in 0..30 {
            assert!(negcorr_experiment(&star_case(s), s).unwrap().passed());
        }
    }

    #[test]
    fn chernoff_arithmetic() {
        assert!((chernoff_check(32.0, 0.5, Tail::Lower).unwrap() - (-4.0f64).exp()).abs() < 1e-15);
        assert!((chernoff_check(32.0, 0.5, Tail::Lower).unwrap() - 0.0183).abs() < 1e-4);
        assert!((chernoff_check(6.0, 2.0, Tail::Upper).unwrap() - (-4.0f64).exp()).abs() < 1e-15);
        assert!(chernoff_check(6.0, 1.5, Tail::Lower).is_err());
        assert!(chernoff_check(6.0, 0.5, Tail::Upper).is_err());
        assert!(chernoff_check(-1.0, 0.5, Tail::Lower).is_err());
    }

    #[test]
    fn chernoff_empirical_mode() {
        for s in 0..10 {
            let r = chernoff_experiment(&star_case(s), &[0.25, 0.5, 0.75], 4000, s).unwrap();
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
        assert!(chernoff_experiment(&star_case(0), &[1.5], 10, 0).is_err());
    }

    #[test]
    fn shearer_examples() {
        let edgeless = Graph::empty(10);
        assert_eq!(ind_count(&edgeless).unwrap(), 1024);
        assert_eq!(median_alpha(&edgeless).unwrap(), 5);
        let f = f_lambda(1024.0, 4).unwrap();
        assert!((f - 10.0 / (8.0 * 10f64.log2())).abs() < 1e-12 && (f - 0.376).abs() < 1e-3);
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(median_alpha(&k2).unwrap(), 1);
        assert!((f_lambda(3.0, 4).unwrap() - 0.2983).abs() < 1e-3);

        let r = shearer_experiment(4, 14, 40, 3).unwrap();
        assert!(r.passed());
        assert_eq!(r.corpus.len(), 40);
        assert_eq!(r, shearer_experiment(4, 14, 40, 3).unwrap());
        assert!(shearer_experiment(3, 10, 1, 0).is_err());
        assert!(shearer_experiment(4, 31, 1, 0).is_err());
    }

    #[test]
    fn factorial_bound_cases() {
        let case = layered_case(4);
        let r = factorial_bound_experiment(&case, 1, 1000, 1, 4).unwrap();
        assert_eq!(r.find_row("tuple_uncolored").unwrap().upper, Some(1.0));
        assert!(r.verdicts[0].holds);

        let wide = star(&[vec![1, 2, 3, 4], vec![1, 2, 3, 4], vec![1, 2, 3, 4]], vec![1, 2, 3]);
        let r = factorial_bound_experiment(&wide, 3, 20_000, 1, 5).unwrap();
        let row = r.find_row("tuple_uncolored").unwrap();
        assert!((row.upper.unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(row.exact.unwrap() <= 1.0 / 6.0);
        assert!(r.verdicts[0].holds);

        let r = factorial_bound_experiment(&star(&[vec![1]], vec![1]), 2, 10, 1, 0).unwrap();
        assert!(r.parameters.contains(&("applicable".into(), "false".into())));
    }

    #[test]
    fn sweep_contract() {
        let cfg = SweepConfig {
            family: SweepFamily::TriangleFree,
            n: 60,
            deltas: vec![6, 8],
            multipliers: vec![1.0, 4.0],
            trials: 4,
            eps: 0.5,
            seed: 11,
            max_rounds: None,
        };
        let rows = sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        for r in &rows {
            assert!(r.successes <= r.trials);
            if r.k > r.delta {
                assert_eq!(r.successes, r.trials);
            }
        }
        let csv = sweep_csv(&rows);
        assert!(csv.starts_with("family,n,delta,m,k,ell,trials,successes,mean_rounds\n"));
        assert_eq!(csv, sweep_csv(&sweep(&cfg).unwrap()));
        let bip = SweepConfig { family: SweepFamily::Bipartite, ..cfg };
        assert!(sweep(&bip).unwrap().iter().all(|r| r.successes <= r.trials));
    }

    #[test]
    fn degree_capping() {
        let g = generate(&Family::Complete { n: 6 }).unwrap();
        let h = cap_degree(&g, 2);
        assert!(h.max_degree() <= 2);
        assert!(h.edge_count() > 0);
    }
}
