use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::clique::{all_cliques, DEFAULT_CLIQUE_BUDGET};
use super::{Graph, GraphError};

/// Graph families used as test and experiment inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Cycle { n: usize },
    Complete { n: usize },
    /// Parts of sizes `n` and `m`; each cross pair is an edge with probability `p`.
    RandomBipartite { n: usize, m: usize, p: f64, seed: u64 },
    /// G(n, d/n) with one random edge of each triangle deleted until none remain.
    RandomTriangleFree { n: usize, d: f64, seed: u64 },
    /// G(n, d/n) with one random edge of each K_r deleted until none remain.
    RandomKrFree { n: usize, d: f64, r: usize, seed: u64 },
}

fn invalid(msg: impl Into<String>) -> GraphError {
    GraphError::InvalidParameters(msg.into())
}

pub fn generate(family: &Family) -> Result<Graph, GraphError> {
    match *family {
        Family::Cycle { n } => {
            if n < 3 {
                return Err(invalid("a cycle needs at least 3 vertices"));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Family::Complete { n } => {
            if n == 0 {
                return Err(invalid("complete graph needs n >= 1"));
            }
            Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
        }
        Family::RandomBipartite { n, m, p, seed } => {
            if n == 0 || m == 0 || !(0.0..=1.0).contains(&p) {
                return Err(invalid("bipartite needs n, m >= 1 and 0 <= p <= 1"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in 0..m {
                    if rng.gen_bool(p) {
                        edges.push((a, n + b));
                    }
                }
            }
            Graph::from_edges(n + m, edges)
        }
        Family::RandomTriangleFree { n, d, seed } => clique_free(n, d, 3, seed),
        Family::RandomKrFree { n, d, r, seed } => {
            if r < 3 {
                return Err(invalid("K_r-free generation needs r >= 3"));
            }
            clique_free(n, d, r, seed)
        }
    }
}

fn clique_free(n: usize, d: f64, r: usize, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 || !(d >= 0.0) || d > n as f64 {
        return Err(invalid("random clique-free graph needs n >= 1 and 0 <= d <= n"));
    }
    let p = (d / n as f64).min(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let dense = Graph::from_edges(n, edges)?;
    let mut cliques = all_cliques(&dense, r, DEFAULT_CLIQUE_BUDGET)
        .map_err(|e| invalid(format!("while removing K_{r}: {e}")))?;
    // Walking a uniformly shuffled list and skipping already-broken cliques picks
    // a uniformly random surviving clique at every step.
    cliques.shuffle(&mut rng);
    let mut alive: HashSet<(usize, usize)> = dense.edges().collect();
    for clique in &cliques {
        let pairs: Vec<(usize, usize)> = clique
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| clique[i + 1..].iter().map(move |&b| (a, b)))
            .collect();
        if pairs.iter().all(|e| alive.contains(e)) {
            let victim = pairs[rng.gen_range(0..pairs.len())];
            alive.remove(&victim);
        }
    }
    let mut kept: Vec<(usize, usize)> = alive.into_iter().collect();
    kept.sort_unstable();
    Graph::from_edges(n, kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_kr_free, is_triangle_free};
    use proptest::prelude::*;

    #[test]
    fn deterministic_families() {
        let c5 = generate(&Family::Cycle { n: 5 }).unwrap();
        assert_eq!(c5.max_degree(), 2);
        assert!(is_triangle_free(&c5));
        let k4 = generate(&Family::Complete { n: 4 }).unwrap();
        assert_eq!(k4.max_degree(), 3);
        assert_eq!(k4.edge_count(), 6);
    }

    #[test]
    fn random_triangle_free_is_triangle_free() {
        let g = generate(&Family::RandomTriangleFree { n: 100, d: 10.0, seed: 1 }).unwrap();
        assert!(is_triangle_free(&g));
        assert!(g.edge_count() > 300);
    }

    #[test]
    fn generation_is_seed_deterministic() {
        let fam = Family::RandomKrFree { n: 60, d: 20.0, r: 4, seed: 9 };
        let a = generate(&fam).unwrap();
        assert_eq!(a, generate(&fam).unwrap());
        assert!(is_kr_free(&a, 4, DEFAULT_CLIQUE_BUDGET).unwrap());
        let b = generate(&Family::RandomKrFree { n: 60, d: 20.0, r: 4, seed: 10 }).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn bipartite_has_no_inner_edges() {
        let g = generate(&Family::RandomBipartite { n: 6, m: 7, p: 0.5, seed: 3 }).unwrap();
        assert_eq!(g.vertex_count(), 13);
        assert!(g.edges().all(|(u, v)| u < 6 && v >= 6));
    }

    #[test]
    fn invalid_parameters() {
        assert!(generate(&Family::Cycle { n: 2 }).is_err());
        assert!(generate(&Family::RandomBipartite { n: 2, m: 2, p: 1.5, seed: 0 }).is_err());
        assert!(generate(&Family::RandomKrFree { n: 10, d: 3.0, r: 2, seed: 0 }).is_err());
        assert!(generate(&Family::RandomTriangleFree { n: 10, d: -1.0, seed: 0 }).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn triangle_removal_always_succeeds(n in 3usize..40, d in 0.0f64..12.0, seed in any::<u64>()) {
            let d = d.min(n as f64);
            let g = generate(&Family::RandomTriangleFree { n, d, seed }).unwrap();
            prop_assert!(is_triangle_free(&g));
        }
    }
}
