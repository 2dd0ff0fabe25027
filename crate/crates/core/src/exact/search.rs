use itertools::Itertools;

use super::{ExactError, NodeMeter, OutOfNodes, SearchBudget, SearchOutcome};
use crate::cover::{Assignment, Cover, CoverVertex, PartialColoring};
use crate::graph::Graph;

struct Backtrack<'c, 'm> {
    state: Assignment<'c>,
    rank: Vec<usize>,
    meter: &'m mut NodeMeter,
}

impl Backtrack<'_, '_> {
    /// Fail-first: branch on the unpicked vertex with the fewest free slots,
    /// ties broken by degeneracy-order position.
    fn next_vertex(&self) -> Option<Result<usize, ()>> {
        let cover = self.state.cover();
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..cover.graph().vertex_count() {
            if self.state.pick(v).is_some() {
                continue;
            }
            let free = self.state.free_slots(v).count();
            if free == 0 {
                return Some(Err(()));
            }
            if best.is_none_or(|(f, r, _)| (free, self.rank[v]) < (f, r)) {
                best = Some((free, self.rank[v], v));
            }
        }
        best.map(|(_, _, v)| Ok(v))
    }

    fn solve(&mut self) -> Result<bool, OutOfNodes> {
        let v = match self.next_vertex() {
            None => return Ok(true),
            Some(Err(())) => return Ok(false),
            Some(Ok(v)) => v,
        };
        let slots: Vec<usize> = self.state.free_slots(v).collect();
        for s in slots {
            self.meter.tick()?;
            self.state.set(v, Some(s));
            if self.solve()? {
                return Ok(true);
            }
            self.state.set(v, None);
        }
        Ok(false)
    }
}

fn degeneracy_rank(g: &Graph) -> Vec<usize> {
    let mut rank = vec![0; g.vertex_count()];
    for (i, v) in g.degeneracy_order().into_iter().enumerate() {
        rank[v] = i;
    }
    rank
}

fn search_coloring(cover: &Cover, rank: Vec<usize>, meter: &mut NodeMeter) -> Result<Option<PartialColoring>, OutOfNodes> {
    let mut bt = Backtrack {
        state: Assignment::new(cover),
        rank,
        meter,
    };
    Ok(bt.solve()?.then(|| bt.state.to_coloring()))
}

/// Searches for a `cover`-coloring by backtracking.
pub fn find_coloring(cover: &Cover, budget: SearchBudget) -> SearchOutcome<PartialColoring> {
    let mut meter = NodeMeter::new(budget);
    match search_coloring(cover, degeneracy_rank(cover.graph()), &mut meter) {
        Ok(Some(coloring)) => {
            debug_assert_eq!(cover.is_coloring(&coloring), Ok(true));
            SearchOutcome::Found(coloring)
        }
        Ok(None) => SearchOutcome::NoSolution,
        Err(OutOfNodes) => SearchOutcome::BudgetExceeded,
    }
}

/// Whether every `k`-fold cover of a graph is colorable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DpVerdict {
    Colorable,
    /// A `k`-fold cover with no coloring.
    NotColorable(Cover),
}

/// The degeneracy `d`: greedy coloring in degeneracy order succeeds for every
/// cover with lists of size `> d`.
fn degeneracy(g: &Graph) -> usize {
    let order = g.degeneracy_order();
    let mut seen = vec![false; g.vertex_count()];
    let mut d = 0;
    for v in order {
        d = d.max(g.neighbors(v).iter().filter(|&&w| seen[w]).count());
        seen[v] = true;
    }
    d
}

/// Edges of a BFS spanning forest, as `(u, v)` with `u < v`.
fn spanning_forest(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut tree = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    tree.push((v.min(w), v.max(w)));
                    queue.push_back(w);
                }
            }
        }
    }
    tree.sort_unstable();
    tree
}

/// Runs `check` on every `k`-fold cover with perfect matchings, up to list
/// relabeling. Relabeling the lists along a spanning forest turns every
/// matching on a forest edge into the identity, so only the remaining
/// `|E| - |V| + c` edges vary; with `gauge = false` all `(k!)^|E|` covers are
/// visited (used by tests).
fn for_each_perfect_cover(
    g: &Graph,
    k: usize,
    gauge: bool,
    meter: &mut NodeMeter,
    mut check: impl FnMut(Cover, &mut NodeMeter) -> Result<bool, OutOfNodes>,
) -> Result<bool, OutOfNodes> {
    let fixed: Vec<(usize, usize)> = if gauge { spanning_forest(g) } else { Vec::new() };
    let free: Vec<(usize, usize)> = g.edges().filter(|e| fixed.binary_search(e).is_err()).collect();
    let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
    let identity = |u: usize, v: usize| (0..k).map(move |i| (CoverVertex::new(u, i), CoverVertex::new(v, i)));
    let base: Vec<(CoverVertex, CoverVertex)> = fixed.iter().flat_map(|&(u, v)| identity(u, v)).collect();

    let mut odometer = vec![0usize; free.len()];
    loop {
        meter.tick()?;
        let mut pairs = base.clone();
        for (&(u, v), &p) in free.iter().zip(&odometer) {
            pairs.extend(perms[p].iter().enumerate().map(|(i, &j)| (CoverVertex::new(u, i), CoverVertex::new(v, j))));
        }
        let cover = Cover::from_parts(g.clone(), vec![k; g.vertex_count()], pairs);
        if !check(cover, meter)? {
            return Ok(false);
        }
        // Advance the mixed-radix counter; stop after the last combination.
        let mut pos = 0;
        loop {
            if pos == odometer.len() {
                return Ok(true);
            }
            odometer[pos] += 1;
            if odometer[pos] < perms.len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
    }
}

fn k_dp_colorable(g: &Graph, k: usize, gauge: bool, meter: &mut NodeMeter) -> Result<DpVerdict, OutOfNodes> {
    if k > degeneracy(g) {
        return Ok(DpVerdict::Colorable);
    }
    let rank = degeneracy_rank(g);
    let mut witness = None;
    let all = for_each_perfect_cover(g, k, gauge, meter, |cover, meter| {
        let ok = search_coloring(&cover, rank.clone(), meter)?.is_some();
        if !ok {
            witness = Some(cover);
        }
        Ok(ok)
    })?;
    Ok(match witness {
        Some(cover) if !all => DpVerdict::NotColorable(cover),
        _ => DpVerdict::Colorable,
    })
}

/// Decides whether `g` is DP-colorable from every `k`-fold cover.
///
/// Only covers with a perfect matching on every edge are enumerated: deleting a
/// cross edge never destroys a coloring, so every `k`-fold cover is colorable
/// iff every perfect one is. Lists along a spanning forest are relabeled to the
/// identity, and `k > degeneracy(g)` is answered by the greedy bound.
pub fn is_k_dp_colorable(g: &Graph, k: usize, budget: SearchBudget) -> Result<DpVerdict, ExactError> {
    if k == 0 {
        return Err(ExactError::ZeroFold);
    }
    let mut meter = NodeMeter::new(budget);
    k_dp_colorable(g, k, true, &mut meter).map_err(|_| meter.error())
}

/// Outcome of [`chi_dp`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChiDp {
    Exact(usize),
    /// `χ_DP > k_max`; `witness` is an uncolorable `k_max`-fold cover.
    AboveMax { k_max: usize, witness: Cover },
}

/// The DP-chromatic number, searched over `1..=k_max`. The budget is shared by
/// all values of `k`.
pub fn chi_dp(g: &Graph, k_max: usize, budget: SearchBudget) -> Result<ChiDp, ExactError> {
    if k_max == 0 {
        return Err(ExactError::ZeroFold);
    }
    let mut meter = NodeMeter::new(budget);
    let mut last = None;
    for k in 1..=k_max {
        match k_dp_colorable(g, k, true, &mut meter).map_err(|_| meter.error())? {
            DpVerdict::Colorable => return Ok(ChiDp::Exact(k)),
            DpVerdict::NotColorable(witness) => last = Some(witness),
        }
    }
    Ok(ChiDp::AboveMax {
        k_max,
        witness: last.expect("k_max >= 1"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{cover_from_lists, fixtures, random_cover, CoverMode};
    use crate::graph::{generate, Family};
    use proptest::prelude::*;

    fn complete(n: usize) -> Graph {
        generate(&Family::Complete { n }).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        generate(&Family::Cycle { n }).unwrap()
    }

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    /// Tries every transversal.
    fn brute_colorable(c: &Cover) -> bool {
        let n = c.graph().vertex_count();
        let sizes: Vec<usize> = (0..n).map(|v| c.list_size(v)).collect();
        let total: usize = sizes.iter().product();
        (0..total).any(|mut code| {
            let picks = sizes
                .iter()
                .map(|&s| {
                    let p = code % s;
                    code /= s;
                    Some(p)
                })
                .collect();
            c.is_coloring(&PartialColoring::from_picks(picks)).unwrap()
        })
    }

    #[test]
    fn fig1_covers() {
        let found = find_coloring(&fixtures::fig1_h1(), budget()).found().unwrap();
        assert!(fixtures::fig1_h1().is_coloring(&found).unwrap());
        assert_eq!(find_coloring(&fixtures::fig1_h2(), budget()), SearchOutcome::NoSolution);
    }

    #[test]
    fn edgeless_graph_is_trivially_colorable() {
        let c = random_cover(&Graph::empty(3), 2, 1, CoverMode::Perfect).unwrap();
        let found = find_coloring(&c, budget()).found().unwrap();
        assert_eq!(found.domain_size(), 3);
        let c0 = cover_from_lists(&Graph::empty(0), &[]).unwrap();
        assert_eq!(find_coloring(&c0, budget()), SearchOutcome::Found(PartialColoring::new(0)));
    }

    #[test]
    fn budget_is_reported() {
        let c = random_cover(&complete(6), 5, 3, CoverMode::Perfect).unwrap();
        assert_eq!(
            find_coloring(&c, SearchBudget::new(2).unwrap()),
            SearchOutcome::BudgetExceeded
        );
        assert!(SearchBudget::new(0).is_none());
        assert_eq!(
            chi_dp(&complete(4), 4, SearchBudget::new(3).unwrap()),
            Err(ExactError::BudgetExceeded(3))
        );
    }

    #[test]
    fn cycle_four() {
        match is_k_dp_colorable(&cycle(4), 2, budget()).unwrap() {
            DpVerdict::NotColorable(w) => {
                assert!(crate::cover::validate(w.graph(), &w.to_data()).is_valid());
                assert!(!brute_colorable(&w));
            }
            DpVerdict::Colorable => panic!("C4 is not 2-DP-colorable"),
        }
        assert_eq!(is_k_dp_colorable(&cycle(4), 3, budget()).unwrap(), DpVerdict::Colorable);
    }

    #[test]
    fn single_edge() {
        let k2 = complete(2);
        assert!(matches!(is_k_dp_colorable(&k2, 1, budget()).unwrap(), DpVerdict::NotColorable(_)));
        assert_eq!(is_k_dp_colorable(&k2, 2, budget()).unwrap(), DpVerdict::Colorable);
        assert_eq!(is_k_dp_colorable(&k2, 0, budget()), Err(ExactError::ZeroFold));
    }

    #[test]
    fn chi_dp_values() {
        for n in 3..=6 {
            assert_eq!(chi_dp(&cycle(n), 4, budget()).unwrap(), ChiDp::Exact(3), "C{n}");
        }
        assert_eq!(chi_dp(&complete(4), 4, budget()).unwrap(), ChiDp::Exact(4));
        assert_eq!(chi_dp(&Graph::empty(1), 3, budget()).unwrap(), ChiDp::Exact(1));
        assert!(matches!(
            chi_dp(&complete(4), 3, budget()).unwrap(),
            ChiDp::AboveMax { k_max: 3, .. }
        ));
    }

    #[test]
    fn gauge_fixing_matches_full_enumeration() {
        let graphs = [
            cycle(4),
            cycle(5),
            complete(3),
            Graph::from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap(),
            Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (3, 4)]).unwrap(),
        ];
        for g in &graphs {
            for k in 1..=2 {
                let mut m1 = NodeMeter::new(budget());
                let mut m2 = NodeMeter::new(budget());
                let gauged = matches!(k_dp_colorable(g, k, true, &mut m1).unwrap(), DpVerdict::Colorable);
                let mut full = true;
                for_each_perfect_cover(g, k, false, &mut m2, |c, _| {
                    full &= brute_colorable(&c);
                    Ok(true)
                })
                .unwrap();
                assert_eq!(gauged, full, "{g:?} k={k}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn search_agrees_with_transversal_enumeration(n in 1usize..6, k in 1usize..4, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = generate(&Family::RandomBipartite { n, m: n, p, seed }).unwrap();
            let c = random_cover(&g, k, seed, CoverMode::Density(0.8)).unwrap();
            match find_coloring(&c, budget()) {
                SearchOutcome::Found(col) => prop_assert!(c.is_coloring(&col).unwrap()),
                SearchOutcome::NoSolution => prop_assert!(!brute_colorable(&c)),
                SearchOutcome::BudgetExceeded => prop_assert!(false, "budget"),
            }
        }
    }
}
