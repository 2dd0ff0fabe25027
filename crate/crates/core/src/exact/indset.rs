use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::graph::Graph;

/// Largest graph `ind_count` and `median_alpha` accept by default.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("graph on {vertices} vertices exceeds the enumeration limit of {limit}")]
pub struct TooLarge {
    pub vertices: usize,
    pub limit: usize,
}

/// A graph on at most 64 vertices with bitmask adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskGraph {
    adj: Vec<u64>,
}

impl MaskGraph {
    pub const MAX_VERTICES: usize = 64;

    /// `None` when `n > 64`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Option<Self> {
        if n > Self::MAX_VERTICES {
            return None;
        }
        let mut adj = vec![0u64; n];
        for (u, v) in edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Some(MaskGraph { adj })
    }

    pub fn from_graph(g: &Graph) -> Option<Self> {
        Self::new(g.vertex_count(), g.edges())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn full_mask(&self) -> u64 {
        match self.adj.len() {
            64 => u64::MAX,
            n => (1u64 << n) - 1,
        }
    }

    fn count_in(&self, mask: u64, memo: &mut HashMap<u64, u128>) -> u128 {
        if mask == 0 {
            return 1;
        }
        if let Some(&c) = memo.get(&mask) {
            return c;
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let count = if self.adj[v] & mask == 0 {
            2 * self.count_in(rest, memo)
        } else {
            self.count_in(rest, memo) + self.count_in(rest & !self.adj[v], memo)
        };
        memo.insert(mask, count);
        count
    }

    /// Number of independent sets, including the empty set.
    pub fn count(&self) -> u128 {
        self.count_in(self.full_mask(), &mut HashMap::new())
    }

    fn polynomial_in(&self, mask: u64, memo: &mut HashMap<u64, Vec<u128>>) -> Vec<u128> {
        if mask == 0 {
            return vec![1];
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let without = self.polynomial_in(rest, memo);
        let with = if self.adj[v] & mask == 0 {
            without.clone()
        } else {
            self.polynomial_in(rest & !self.adj[v], memo)
        };
        let mut out = vec![0u128; without.len().max(with.len() + 1)];
        for (i, c) in without.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in with.iter().enumerate() {
            out[i + 1] += c;
        }
        while out.len() > 1 && out.last() == Some(&0) {
            out.pop();
        }
        memo.insert(mask, out.clone());
        out
    }

    /// Coefficient `i` is the number of independent sets of size `i`.
    pub fn independence_polynomial(&self) -> Vec<u128> {
        self.polynomial_in(self.full_mask(), &mut HashMap::new())
    }

    /// A uniformly random independent set, as a bitmask.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let mut memo = HashMap::new();
        let mut mask = self.full_mask();
        let mut chosen = 0u64;
        while mask != 0 {
            let v = mask.trailing_zeros() as usize;
            let bit = 1u64 << v;
            let rest = mask & !bit;
            if self.adj[v] & mask == 0 {
                if rng.gen_bool(0.5) {
                    chosen |= bit;
                }
                mask = rest;
            } else {
                let excluded = self.count_in(rest, &mut memo);
                let included = self.count_in(rest & !self.adj[v], &mut memo);
                if rng.gen_range(0..excluded + included) < included {
                    chosen |= bit;
                    mask = rest & !self.adj[v];
                } else {
                    mask = rest;
                }
            }
        }
        chosen
    }
}

fn mask_graph(f: &Graph, limit: usize) -> Result<MaskGraph, TooLarge> {
    let too_large = TooLarge {
        vertices: f.vertex_count(),
        limit: limit.min(MaskGraph::MAX_VERTICES),
    };
    if f.vertex_count() > limit {
        return Err(too_large);
    }
    MaskGraph::from_graph(f).ok_or(too_large)
}

/// `ind(F)`: the number of independent sets of `f`, counting the empty set.
pub fn ind_count(f: &Graph) -> Result<u128, TooLarge> {
    Ok(mask_graph(f, DEFAULT_ENUMERATION_LIMIT)?.count())
}

/// Independent-set counts by size.
pub fn independence_polynomial(f: &Graph) -> Result<Vec<u128>, TooLarge> {
    Ok(mask_graph(f, DEFAULT_ENUMERATION_LIMIT)?.independence_polynomial())
}

/// Median independent-set size: the largest `α` such that at least half of all
/// independent sets have size at least `α`. Sizes are integral, so the supremum
/// over real `α` is attained at an integer.
pub fn median_alpha(f: &Graph) -> Result<usize, TooLarge> {
    let poly = independence_polynomial(f)?;
    let total: u128 = poly.iter().sum();
    let mut tail = 0u128;
    for size in (0..poly.len()).rev() {
        tail += poly[size];
        if 2 * tail >= total {
            return Ok(size);
        }
    }
    unreachable!("the full tail always reaches half of the total")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use proptest::prelude::*;
    use rand::SeedableRng;

    /// Subset-enumeration oracle.
    fn brute_sizes(g: &Graph) -> Vec<u128> {
        let n = g.vertex_count();
        let mut sizes = vec![0u128; n + 1];
        for mask in 0u32..1 << n {
            if g.edges().all(|(u, v)| mask & (1 << u) == 0 || mask & (1 << v) == 0) {
                sizes[mask.count_ones() as usize] += 1;
            }
        }
        sizes
    }

    fn brute_median(g: &Graph) -> usize {
        let sizes = brute_sizes(g);
        let total: u128 = sizes.iter().sum();
        (0..sizes.len())
            .filter(|&a| 2 * sizes[a..].iter().sum::<u128>() >= total)
            .max()
            .unwrap()
    }

    #[test]
    fn counts_small_graphs() {
        assert_eq!(ind_count(&Graph::empty(3)).unwrap(), 8);
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(ind_count(&k2).unwrap(), 3);
        let c5 = generate(&Family::Cycle { n: 5 }).unwrap();
        assert_eq!(brute_sizes(&c5).iter().sum::<u128>(), 11);
        assert_eq!(ind_count(&c5).unwrap(), 11);
        assert_eq!(ind_count(&Graph::empty(0)).unwrap(), 1);
    }

    #[test]
    fn median_alpha_examples() {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(median_alpha(&k2).unwrap(), 1);
        assert_eq!(median_alpha(&Graph::empty(1)).unwrap(), 1);
        assert_eq!(median_alpha(&Graph::empty(4)).unwrap(), 2);
    }

    #[test]
    fn enumeration_limit() {
        assert_eq!(
            ind_count(&Graph::empty(31)),
            Err(TooLarge { vertices: 31, limit: 30 })
        );
        assert_eq!(ind_count(&Graph::empty(30)).unwrap(), 1 << 30);
    }

    #[test]
    fn uniform_sampling_frequencies() {
        // Path on 3 vertices: 5 independent sets.
        let g = MaskGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let mut freq = HashMap::new();
        let trials = 50_000;
        for _ in 0..trials {
            *freq.entry(g.sample_uniform(&mut rng)).or_insert(0u32) += 1;
        }
        assert_eq!(freq.len(), 5);
        for (&mask, &c) in &freq {
            assert_eq!(mask & 0b011, mask & 0b011 & !(mask >> 1) & !(mask << 1));
            let p = c as f64 / trials as f64;
            assert!((p - 0.2).abs() < 0.01, "mask {mask:b}: {p}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn agrees_with_subset_enumeration(n in 0usize..=12, d in 0.0f64..6.0, seed in any::<u64>()) {
            let g = if n == 0 {
                Graph::empty(0)
            } else {
                let d = d.min(n as f64);
                generate(&Family::RandomKrFree { n, d, r: 4, seed }).unwrap()
            };
            let sizes = brute_sizes(&g);
            let mut poly = independence_polynomial(&g).unwrap();
            poly.resize(sizes.len(), 0);
            prop_assert_eq!(&poly, &sizes);
            prop_assert_eq!(ind_count(&g).unwrap(), sizes.iter().sum::<u128>());
            if n > 0 {
                prop_assert_eq!(median_alpha(&g).unwrap(), brute_median(&g));
            }
        }
    }
}
