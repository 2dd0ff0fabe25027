use rand::Rng;
use thiserror::Error;

use crate::cover::{Assignment, CoverVertex, PartialColoring, ResidualCover};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("vertex {vertex} has a residual list of size {size}, below ℓ = {ell}")]
    ShortList { vertex: usize, size: usize, ell: usize },
    #[error("cover vertex {x} has cross-degree {degree}, above the cap {cap}")]
    HighCrossDegree { x: CoverVertex, degree: usize, cap: usize },
    #[error("ℓ must be at least 1")]
    ZeroEll,
    #[error("no conflict-free sample within {0} resampling rounds")]
    RoundCap(u64),
    #[error("greedy completion is stuck at vertex {0}")]
    Stuck(usize),
}

/// `(p, d, 4pd)` for the completion events: `p = ℓ⁻²` is the probability of
/// one bad pair and `d = ℓ²/4` bounds its dependency degree. The product is
/// evaluated as `4d/ℓ²`, which is exact while `ℓ² < 2^53`.
pub fn lll_parameters(ell: usize) -> (f64, f64, f64) {
    let l2 = (ell as f64) * (ell as f64);
    let d = l2 / 4.0;
    (1.0 / l2, d, 4.0 * d / l2)
}

/// Checks `|L(u)| >= ℓ` and `deg*(x) <= ⌊ℓ/8⌋` on the residual cover.
pub fn check_lll_preconditions(rc: &ResidualCover, ell: usize) -> Result<(), CompletionError> {
    if ell == 0 {
        return Err(CompletionError::ZeroEll);
    }
    let c = &rc.cover;
    let cap = ell / 8;
    for v in 0..c.graph().vertex_count() {
        let size = c.list_size(v);
        if size < ell {
            return Err(CompletionError::ShortList { vertex: v, size, ell });
        }
        for s in 0..size {
            let x = CoverVertex::new(v, s);
            let degree = c.cross_neighbors(x).count();
            if degree > cap {
                return Err(CompletionError::HighCrossDegree { x, degree, cap });
            }
        }
    }
    Ok(())
}

/// Completion by resampling. Each list is cut to its first `ℓ` slots and one
/// slot per list is drawn uniformly; while some cross edge joins two picks, both
/// endpoints are redrawn. Returns a coloring of the residual cover and the
/// number of resampling rounds.
pub fn complete_lll<R: Rng + ?Sized>(
    rc: &ResidualCover,
    ell: usize,
    max_rounds: u64,
    rng: &mut R,
) -> Result<(PartialColoring, u64), CompletionError> {
    check_lll_preconditions(rc, ell)?;
    let c = &rc.cover;
    let g = c.graph();
    let n = g.vertex_count();
    let mut picks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..ell)).collect();
    let conflict = |picks: &[usize]| {
        g.edges()
            .find(|&(u, v)| c.partner_at(u, picks[u], v) == Some(picks[v]))
    };
    let mut rounds = 0;
    while let Some((u, v)) = conflict(&picks) {
        if rounds == max_rounds {
            return Err(CompletionError::RoundCap(max_rounds));
        }
        picks[u] = rng.gen_range(0..ell);
        picks[v] = rng.gen_range(0..ell);
        rounds += 1;
    }
    Ok((PartialColoring::from_picks(picks.into_iter().map(Some).collect()), rounds))
}

/// Greedy completion in degeneracy order, taking the lowest free slot.
pub fn greedy_complete(rc: &ResidualCover) -> Result<PartialColoring, CompletionError> {
    let c = &rc.cover;
    let mut state = Assignment::new(c);
    for v in c.graph().degeneracy_order() {
        let s = state.free_slots(v).next().ok_or(CompletionError::Stuck(v))?;
        state.set(v, Some(s));
    }
    Ok(state.to_coloring())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{cover_from_lists, random_cover, residual, CoverMode};
    use crate::graph::{generate, Family, Graph};
    use crate::seed;

    fn whole(c: crate::cover::Cover) -> ResidualCover {
        let n = c.graph().vertex_count();
        residual(&c, &PartialColoring::new(n)).unwrap()
    }

    #[test]
    fn boundary_arithmetic() {
        for ell in (1..=5000).chain([1 << 20, 94_906_265]) {
            let (p, d, product) = lll_parameters(ell);
            assert_eq!(product, 1.0, "ℓ = {ell}");
            assert!((4.0 * p * d - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn no_cross_edges_needs_no_resampling() {
        let g = generate(&Family::Cycle { n: 7 }).unwrap();
        let rc = whole(random_cover(&g, 3, 1, CoverMode::Density(0.0)).unwrap());
        let (col, rounds) = complete_lll(&rc, 3, 10, &mut seed::rng(1)).unwrap();
        assert_eq!(rounds, 0);
        assert!(rc.cover.is_coloring(&col).unwrap());
    }

    #[test]
    fn preconditions_are_checked() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let short = whole(cover_from_lists(&g, &[vec![1, 2], vec![3]]).unwrap());
        assert_eq!(
            complete_lll(&short, 2, 10, &mut seed::rng(0)),
            Err(CompletionError::ShortList { vertex: 1, size: 1, ell: 2 })
        );
        let dense = whole(cover_from_lists(&g, &[vec![1, 2], vec![1, 2]]).unwrap());
        assert!(matches!(
            complete_lll(&dense, 2, 10, &mut seed::rng(0)),
            Err(CompletionError::HighCrossDegree { degree: 1, cap: 0, .. })
        ));
        assert!(check_lll_preconditions(&dense, 8).is_err());
    }

    #[test]
    fn greedy_examples() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let stuck = whole(cover_from_lists(&g, &[vec![1], vec![1]]).unwrap());
        assert!(matches!(greedy_complete(&stuck), Err(CompletionError::Stuck(_))));
        let empty = whole(cover_from_lists(&Graph::empty(0), &[]).unwrap());
        assert_eq!(greedy_complete(&empty).unwrap(), PartialColoring::new(0));
        let g = generate(&Family::RandomTriangleFree { n: 50, d: 5.0, seed: 4 }).unwrap();
        let rc = whole(random_cover(&g, g.max_degree() + 1, 4, CoverMode::Perfect).unwrap());
        let col = greedy_complete(&rc).unwrap();
        assert!(rc.cover.is_coloring(&col).unwrap());
    }
}
