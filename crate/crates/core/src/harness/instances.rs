use rand::seq::SliceRandom;
use rand::Rng;

use super::HarnessError;
use crate::cover::{residual, Cover, CoverVertex, PartialColoring, ResidualCover};
use crate::graph::{generate, Family, Graph};
use crate::sampler::{glauber_sample, NeighborhoodInstance, SamplerError, ENUMERATION_LIMIT};
use crate::seed;

/// A cover, a focus vertex and an independent conditioning set `J` outside
/// `N[focus]`: the input of the neighborhood experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodCase {
    pub cover: Cover,
    pub focus: usize,
    pub conditioning: PartialColoring,
}

impl NeighborhoodCase {
    /// The case with nothing conditioned on.
    pub fn unconditioned(cover: Cover, focus: usize) -> Self {
        let n = cover.graph().vertex_count();
        NeighborhoodCase {
            cover,
            focus,
            conditioning: PartialColoring::new(n),
        }
    }

    pub fn instance(&self) -> Result<NeighborhoodInstance<'_>, SamplerError> {
        NeighborhoodInstance::new(&self.cover, self.focus, &self.conditioning)
    }

    /// Number of independent subsets of `L_J(N(u))`, if at most
    /// [`ENUMERATION_LIMIT`].
    pub fn state_count(&self) -> Option<usize> {
        self.instance().ok()?.enumerate(ENUMERATION_LIMIT).ok().map(|s| s.len())
    }
}

/// Random cross matchings between lists of the given sizes; each pair of a
/// random maximal matching is kept with probability `density`.
fn random_pairs<R: Rng + ?Sized>(
    g: &Graph,
    sizes: &[usize],
    density: f64,
    rng: &mut R,
) -> Vec<(CoverVertex, CoverVertex)> {
    let mut pairs = Vec::new();
    for (u, v) in g.edges() {
        let mut a: Vec<usize> = (0..sizes[u]).collect();
        let mut b: Vec<usize> = (0..sizes[v]).collect();
        a.shuffle(rng);
        b.shuffle(rng);
        for (&s, &t) in a.iter().zip(&b) {
            if rng.gen_bool(density) {
                pairs.push((CoverVertex::new(u, s), CoverVertex::new(v, t)));
            }
        }
    }
    pairs
}

fn random_case<R: Rng + ?Sized>(rng: &mut R, internal: bool) -> NeighborhoodCase {
    let d = if internal { rng.gen_range(2..=5) } else { rng.gen_range(1..=4) };
    let outer = rng.gen_range(0..=3);
    let n = 1 + d + outer;
    let mut edges: Vec<(usize, usize)> = (1..=d).map(|v| (0, v)).collect();
    if internal {
        for v in 1..=d {
            for w in v + 1..=d {
                // Keep N(0) triangle-free so the graph stays K4-free.
                let common = (1..=d).any(|x| {
                    edges.contains(&(v.min(x), v.max(x))) && edges.contains(&(w.min(x), w.max(x)))
                });
                if !common && rng.gen_bool(0.5) {
                    edges.push((v, w));
                }
            }
        }
    }
    for w in d + 1..n {
        let reach = if internal { d + 1 } else { w };
        for v in 1..reach {
            if rng.gen_bool(0.4) {
                edges.push((v, w));
            }
        }
    }
    let g = Graph::from_edges(n, edges).expect("valid edges");
    let mut sizes = vec![0; n];
    sizes[0] = rng.gen_range(2..=4);
    for s in sizes.iter_mut().skip(1) {
        *s = rng.gen_range(1..=3);
    }
    let density = if rng.gen_bool(0.5) { 1.0 } else { 0.75 };
    let pairs = random_pairs(&g, &sizes, density, rng);
    let cover = Cover::from_parts(g, sizes, pairs);
    let region: Vec<usize> = (d + 1..n).collect();
    let conditioning = glauber_sample(&cover, &region, 20 * region.len() as u64, rng);
    NeighborhoodCase {
        cover,
        focus: 0,
        conditioning,
    }
}

fn search_case(seed: u64, internal: bool) -> NeighborhoodCase {
    for attempt in 0.. {
        let mut rng = seed::rng(seed::derive(seed, attempt));
        let case = random_case(&mut rng, internal);
        let inst = case.instance().expect("generated cases are valid");
        if internal && inst.internal_cross_edge().is_none() {
            continue;
        }
        if matches!(case.state_count(), Some(c) if c >= 2) {
            return case;
        }
    }
    unreachable!()
}

/// A random case whose neighborhood is independent in the base graph and has
/// between 2 and [`ENUMERATION_LIMIT`] independent subsets. Deterministic in
/// `seed`.
pub fn star_case(seed: u64) -> NeighborhoodCase {
    search_case(seed, false)
}

/// Like [`star_case`], but the base graph has edges inside `N(u)` (it stays
/// `K_4`-free) and the neighborhood lists carry at least one cross edge.
pub fn layered_case(seed: u64) -> NeighborhoodCase {
    search_case(seed, true)
}

/// A random cover with every list of size `ell` in which no cover vertex has
/// more than `cap` cross neighbors, as a residual of the empty coloring. The
/// base is a random triangle-free graph `G(n, d/n)`; each edge's matching keeps
/// a pair only while both endpoints are below the cap.
pub fn capped_residual(n: usize, d: f64, ell: usize, cap: usize, seed: u64) -> Result<ResidualCover, HarnessError> {
    if ell == 0 {
        return Err(HarnessError::Domain("ℓ must be at least 1".into()));
    }
    let g = generate(&Family::RandomTriangleFree { n, d, seed })?;
    let mut rng = seed::rng(seed::derive(seed, 1));
    let mut degree = vec![vec![0usize; ell]; n];
    let mut pairs = Vec::new();
    let mut perm: Vec<usize> = (0..ell).collect();
    for (u, v) in g.edges() {
        perm.shuffle(&mut rng);
        for (s, &t) in perm.iter().enumerate() {
            if degree[u][s] < cap && degree[v][t] < cap {
                degree[u][s] += 1;
                degree[v][t] += 1;
                pairs.push((CoverVertex::new(u, s), CoverVertex::new(v, t)));
            }
        }
    }
    let cover = Cover::from_parts(g, vec![ell; n], pairs);
    Ok(residual(&cover, &PartialColoring::new(n))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorer::check_lll_preconditions;
    use crate::cover::validate;

    #[test]
    fn generated_cases_meet_their_contracts() {
        for s in 0..30 {
            let star = star_case(s);
            assert!(validate(star.cover.graph(), &star.cover.to_data()).is_valid());
            let inst = star.instance().unwrap();
            assert!(inst.internal_cross_edge().is_none());
            assert!(star.cover.graph().neighborhood_is_independent(0));
            assert!(star.cover.is_independent(&star.conditioning).unwrap());
            let c = star.state_count().unwrap();
            assert!((2..=ENUMERATION_LIMIT).contains(&c));

            let layered = layered_case(s);
            assert!(layered.instance().unwrap().internal_cross_edge().is_some());
            assert!(crate::graph::is_kr_free(layered.cover.graph(), 4, 1_000_000).unwrap());
            assert!(layered.state_count().is_some());
        }
        assert_eq!(star_case(9), star_case(9));
    }

    #[test]
    fn capped_residuals_meet_the_completion_preconditions() {
        for s in 0..5 {
            let rc = capped_residual(200, 10.0, 8, 1, s).unwrap();
            check_lll_preconditions(&rc, 8).unwrap();
            assert!(!rc.cover.cross_edges().is_empty());
        }
    }
}
