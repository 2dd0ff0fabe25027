//! Uniform samplers for independent subsets of cover neighborhoods.
//!
//! Fix a focus vertex `u` and an independent set `J` of `H` with no pick in
//! `N[u]`. Conditioned on `J`, the picks on `N(u)` are uniform over the
//! independent subsets of `L_J(N(u))`; every sampler here targets that
//! distribution. The blank choice at a neighbor is an absent pick.

mod glauber;
mod layered;
mod params;

use rand::Rng;
use thiserror::Error;

use crate::cover::{Assignment, Cover, CoverError, CoverVertex, PartialColoring};

pub use glauber::{default_burn_in, glauber_run, glauber_sample};
pub use layered::{layered_sample, InitialDraw, LayerRecord, LayeredTrace};
pub use params::{ceil_param, f_lambda, layer_threshold, params_kr, params_triangle_free, Params};

/// Default cap on the number of states the exact enumerator will list.
pub const ENUMERATION_LIMIT: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplerError {
    #[error("focus vertex {0} is out of range")]
    FocusOutOfRange(usize),
    #[error("conditioning set picks vertex {0} inside the closed neighborhood of the focus")]
    PickInNeighborhood(usize),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("cross edge {0} - {1} inside the neighborhood")]
    InternalCrossEdge(CoverVertex, CoverVertex),
    #[error("more than {0} independent subsets")]
    TooManyStates(usize),
    #[error("layer {layer} has {size} elements, more than exact sampling supports")]
    LayerTooLarge { layer: usize, size: usize },
    #[error("parameter out of domain: {0}")]
    Domain(String),
}

/// Picks aligned with [`NeighborhoodInstance::neighbors`]: `Some(slot)` is a
/// slot of `L(v)`, `None` the blank.
pub type LocalPicks = Vec<Option<usize>>;

/// The conditional sampling problem at a focus vertex.
///
/// Elements of `L_J(N(u))` are numbered locally, neighbor by neighbor.
#[derive(Debug, Clone)]
pub struct NeighborhoodInstance<'c> {
    cover: &'c Cover,
    focus: usize,
    neighbors: Vec<usize>,
    available: Vec<Vec<usize>>,
    elements: Vec<(usize, usize)>,
    element_id: Vec<Vec<Option<usize>>>,
    adjacency: Vec<Vec<usize>>,
    layers: Vec<Vec<usize>>,
}

impl<'c> NeighborhoodInstance<'c> {
    /// The instance at `focus` conditioned on `conditioning`, which must be
    /// independent and pick nothing in `N[focus]`.
    pub fn new(cover: &'c Cover, focus: usize, conditioning: &PartialColoring) -> Result<Self, SamplerError> {
        if focus >= cover.graph().vertex_count() {
            return Err(SamplerError::FocusOutOfRange(focus));
        }
        let state = Assignment::from_coloring(cover, conditioning)?;
        Self::from_assignment(&state, focus)
    }

    /// Same as [`new`](Self::new), reading `J` from an assignment.
    pub fn from_assignment(state: &Assignment<'c>, focus: usize) -> Result<Self, SamplerError> {
        let cover = state.cover();
        let g = cover.graph();
        if focus >= g.vertex_count() {
            return Err(SamplerError::FocusOutOfRange(focus));
        }
        if let Some(v) = std::iter::once(focus)
            .chain(g.neighbors(focus).iter().copied())
            .find(|&v| state.pick(v).is_some())
        {
            return Err(SamplerError::PickInNeighborhood(v));
        }
        let neighbors = g.neighbors(focus).to_vec();
        let available: Vec<Vec<usize>> = neighbors.iter().map(|&v| state.free_slots(v).collect()).collect();
        let mut elements = Vec::new();
        let mut element_id = Vec::with_capacity(neighbors.len());
        for (i, &v) in neighbors.iter().enumerate() {
            let mut ids = vec![None; cover.list_size(v)];
            for &s in &available[i] {
                ids[s] = Some(elements.len());
                elements.push((i, s));
            }
            element_id.push(ids);
        }
        let mut adjacency = vec![Vec::new(); elements.len()];
        for (id, &(i, s)) in elements.iter().enumerate() {
            let v = neighbors[i];
            for (p, &w) in g.neighbors(v).iter().enumerate() {
                let Ok(j) = neighbors.binary_search(&w) else { continue };
                if let Some(other) = cover.partner(v, p, s).and_then(|t| element_id[j][t]) {
                    adjacency[id].push(other);
                }
            }
            adjacency[id].sort_unstable();
        }
        let layers = (0..cover.list_size(focus))
            .map(|x| {
                (0..neighbors.len())
                    .filter_map(|i| cover.partner(focus, i, x).and_then(|t| element_id[i][t]))
                    .collect()
            })
            .collect();
        Ok(NeighborhoodInstance {
            cover,
            focus,
            neighbors,
            available,
            elements,
            element_id,
            adjacency,
            layers,
        })
    }

    pub fn cover(&self) -> &'c Cover {
        self.cover
    }

    pub fn focus(&self) -> usize {
        self.focus
    }

    /// `N(u)` in increasing order.
    pub fn neighbors(&self) -> &[usize] {
        &self.neighbors
    }

    /// Slots of `L_J(v)` for the `i`-th neighbor.
    pub fn available(&self, i: usize) -> &[usize] {
        &self.available[i]
    }

    /// Number of local elements `|L_J(N(u))|`.
    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    /// `(neighbor index, slot)` of a local element.
    pub fn element(&self, id: usize) -> (usize, usize) {
        self.elements[id]
    }

    pub fn element_id(&self, i: usize, slot: usize) -> Option<usize> {
        self.element_id[i].get(slot).copied().flatten()
    }

    /// Local elements cross-adjacent to `id`.
    pub fn adjacent(&self, id: usize) -> &[usize] {
        &self.adjacency[id]
    }

    /// The layer `Λ(x)` of the focus slot `x`, as local elements.
    pub fn layer(&self, x: usize) -> &[usize] {
        &self.layers[x]
    }

    /// Neighbor indices `v` with `N_H(x) ∩ L_J(v) ≠ ∅`, i.e. `Ñ(x)`.
    pub fn touched(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.layers[x].iter().map(|&id| self.elements[id].0)
    }

    /// First cross edge between two local elements, if any.
    pub fn internal_cross_edge(&self) -> Option<(CoverVertex, CoverVertex)> {
        let at = |id: usize| {
            let (i, s) = self.elements[id];
            CoverVertex::new(self.neighbors[i], s)
        };
        self.adjacency
            .iter()
            .enumerate()
            .find_map(|(id, adj)| adj.first().map(|&other| (at(id), at(other))))
    }

    /// True iff `picks` is an independent subset of `L_J(N(u))`.
    pub fn is_independent(&self, picks: &LocalPicks) -> bool {
        if picks.len() != self.neighbors.len() {
            return false;
        }
        let mut ids = Vec::new();
        for (i, p) in picks.iter().enumerate() {
            if let Some(s) = *p {
                match self.element_id(i, s) {
                    Some(id) => ids.push(id),
                    None => return false,
                }
            }
        }
        ids.iter()
            .all(|&a| self.adjacency[a].iter().all(|b| !ids.contains(b)))
    }

    /// Local elements not adjacent to any pick (ignoring elements of picked lists).
    fn unblocked(&self, picks: &LocalPicks) -> Vec<bool> {
        let mut free = vec![true; self.elements.len()];
        for (i, p) in picks.iter().enumerate() {
            if let Some(id) = p.and_then(|s| self.element_id(i, s)) {
                for &b in &self.adjacency[id] {
                    free[b] = false;
                }
            }
        }
        free
    }

    /// Focus slots surviving in `L_I(u)`, where `I = J ∪ picks`.
    pub fn surviving(&self, picks: &LocalPicks) -> Vec<usize> {
        (0..self.layers.len())
            .filter(|&x| {
                self.layers[x].iter().all(|&id| {
                    let (i, s) = self.elements[id];
                    picks[i] != Some(s)
                })
            })
            .collect()
    }

    /// Residual cross-degree of the focus slot `x` in `Ĥ_I`.
    pub fn residual_cross_degree(&self, x: usize, picks: &LocalPicks) -> usize {
        let free = self.unblocked(picks);
        self.layers[x]
            .iter()
            .filter(|&&id| picks[self.elements[id].0].is_none() && free[id])
            .count()
    }

    /// `|L_I(v)|` for the `i`-th neighbor, 0 when it is picked.
    pub fn residual_list_size(&self, i: usize, picks: &LocalPicks) -> usize {
        if picks[i].is_some() {
            return 0;
        }
        let free = self.unblocked(picks);
        self.available[i]
            .iter()
            .filter(|&&s| free[self.element_id[i][s].expect("available slot")])
            .count()
    }

    /// Every independent subset of `L_J(N(u))`, in lexicographic order of the
    /// pick vectors (blank first). Fails beyond `limit` states.
    pub fn enumerate(&self, limit: usize) -> Result<Vec<LocalPicks>, SamplerError> {
        let mut out = Vec::new();
        let mut picks = vec![None; self.neighbors.len()];
        let mut blocked = vec![0u32; self.elements.len()];
        self.enumerate_from(0, &mut picks, &mut blocked, &mut out, limit)?;
        Ok(out)
    }

    fn enumerate_from(
        &self,
        i: usize,
        picks: &mut LocalPicks,
        blocked: &mut [u32],
        out: &mut Vec<LocalPicks>,
        limit: usize,
    ) -> Result<(), SamplerError> {
        if i == self.neighbors.len() {
            if out.len() == limit {
                return Err(SamplerError::TooManyStates(limit));
            }
            out.push(picks.clone());
            return Ok(());
        }
        self.enumerate_from(i + 1, picks, blocked, out, limit)?;
        for &s in &self.available[i] {
            let id = self.element_id[i][s].expect("available slot");
            if blocked[id] > 0 {
                continue;
            }
            for &b in &self.adjacency[id] {
                blocked[b] += 1;
            }
            picks[i] = Some(s);
            self.enumerate_from(i + 1, picks, blocked, out, limit)?;
            picks[i] = None;
            for &b in &self.adjacency[id] {
                blocked[b] -= 1;
            }
        }
        Ok(())
    }

    /// Writes `picks` into `state`, whose picks on `N(u)` must be empty.
    pub fn apply(&self, state: &mut Assignment<'_>, picks: &LocalPicks) {
        for (i, p) in picks.iter().enumerate() {
            if p.is_some() {
                state.set(self.neighbors[i], *p);
            }
        }
    }
}

/// An exactly uniform independent subset of `L_J(N(u))`, by enumeration.
pub fn enum_uniform<R: Rng + ?Sized>(inst: &NeighborhoodInstance<'_>, rng: &mut R) -> Result<LocalPicks, SamplerError> {
    let mut states = inst.enumerate(ENUMERATION_LIMIT)?;
    let pick = rng.gen_range(0..states.len());
    Ok(states.swap_remove(pick))
}

/// The star procedure: each neighbor independently draws uniformly from
/// `L_J(v) ∪ {•}`. Exact when the neighborhood lists carry no cross edges,
/// which is checked.
pub fn star_sample<R: Rng + ?Sized>(inst: &NeighborhoodInstance<'_>, rng: &mut R) -> Result<LocalPicks, SamplerError> {
    if let Some((x, y)) = inst.internal_cross_edge() {
        return Err(SamplerError::InternalCrossEdge(x, y));
    }
    Ok(star_draw(inst, rng))
}

pub(crate) fn star_draw<R: Rng + ?Sized>(inst: &NeighborhoodInstance<'_>, rng: &mut R) -> LocalPicks {
    inst.available
        .iter()
        .map(|list| {
            let r = rng.gen_range(0..=list.len());
            list.get(r).copied()
        })
        .collect()
}

/// `∏_v 1/(|L_J(v)|+1)`: the probability the star procedure assigns to each
/// independent subset.
pub fn star_state_probability(inst: &NeighborhoodInstance<'_>) -> f64 {
    inst.available
        .iter()
        .map(|l| 1.0 / (l.len() as f64 + 1.0))
        .product()
}

#[cfg(test)]
pub(crate) mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::cover::{cover_from_lists, random_cover, CoverMode};
    use crate::graph::Graph;
    use crate::seed;

    /// Star at 0 with the given neighbor lists (colors), no other edges.
    pub fn star_cover(lists: &[Vec<u32>], focus_list: Vec<u32>) -> Cover {
        let d = lists.len();
        let g = Graph::from_edges(d + 1, (1..=d).map(|v| (0, v))).unwrap();
        let mut all = vec![focus_list];
        all.extend(lists.iter().cloned());
        cover_from_lists(&g, &all).unwrap()
    }

    pub fn frequencies(samples: impl Iterator<Item = LocalPicks>) -> HashMap<LocalPicks, u64> {
        let mut freq = HashMap::new();
        for s in samples {
            *freq.entry(s).or_insert(0) += 1;
        }
        freq
    }

    #[test]
    fn enumeration_examples() {
        let c = star_cover(&[vec![1, 2]], vec![1]);
        let inst = NeighborhoodInstance::new(&c, 0, &PartialColoring::new(2)).unwrap();
        assert_eq!(inst.enumerate(200).unwrap(), vec![vec![None], vec![Some(0)], vec![Some(1)]]);

        let lone = cover_from_lists(&Graph::empty(1), &[vec![1]]).unwrap();
        let inst = NeighborhoodInstance::new(&lone, 0, &PartialColoring::new(1)).unwrap();
        assert_eq!(inst.enumerate(200).unwrap(), vec![Vec::<Option<usize>>::new()]);

        // Focus 0 adjacent to 1 and 2, which share color 5 across the edge 1-2.
        let g = Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let c = cover_from_lists(&g, &[vec![9], vec![5], vec![5]]).unwrap();
        let inst = NeighborhoodInstance::new(&c, 0, &PartialColoring::new(3)).unwrap();
        assert_eq!(
            inst.enumerate(200).unwrap(),
            vec![vec![None, None], vec![None, Some(0)], vec![Some(0), None]]
        );
        assert!(matches!(star_sample(&inst, &mut seed::rng(1)), Err(SamplerError::InternalCrossEdge(_, _))));
        assert_eq!(inst.enumerate(2), Err(SamplerError::TooManyStates(2)));
    }

    #[test]
    fn conditioning_restricts_lists() {
        // Path 2 - 1 - 0 - 3 with J picking at 2.
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 3)]).unwrap();
        let c = cover_from_lists(&g, &[vec![1, 2], vec![1, 2, 3], vec![3], vec![1]]).unwrap();
        let mut j = PartialColoring::new(4);
        j.set(2, Some(0));
        let inst = NeighborhoodInstance::new(&c, 0, &j).unwrap();
        assert_eq!(inst.neighbors(), &[1, 3]);
        // Color 3 (slot 2) at vertex 1 is blocked by the pick at 2.
        assert_eq!(inst.available(0), &[0, 1]);
        assert_eq!(inst.layer(0).len(), 2);
        assert_eq!(inst.layer(1).len(), 1);
        let mut bad = PartialColoring::new(4);
        bad.set(3, Some(0));
        assert_eq!(
            NeighborhoodInstance::new(&c, 0, &bad).unwrap_err(),
            SamplerError::PickInNeighborhood(3)
        );
        assert_eq!(
            NeighborhoodInstance::new(&c, 7, &j).unwrap_err(),
            SamplerError::FocusOutOfRange(7)
        );
    }

    #[test]
    fn star_distribution_single_neighbor() {
        let c = star_cover(&[vec![1, 2, 3]], vec![1]);
        let inst = NeighborhoodInstance::new(&c, 0, &PartialColoring::new(2)).unwrap();
        assert_eq!(star_state_probability(&inst), 0.25);
        let mut rng = seed::rng(9);
        let n = 40_000;
        let freq = frequencies((0..n).map(|_| star_sample(&inst, &mut rng).unwrap()));
        assert_eq!(freq.len(), 4);
        for c in freq.values() {
            assert!((*c as f64 / n as f64 - 0.25).abs() < 0.015);
        }
    }

    #[test]
    fn star_matches_enumeration_on_two_neighbors() {
        let c = star_cover(&[vec![1], vec![1, 2]], vec![1, 2]);
        let inst = NeighborhoodInstance::new(&c, 0, &PartialColoring::new(3)).unwrap();
        let states = inst.enumerate(200).unwrap();
        assert_eq!(states.len(), 6);
        assert!((star_state_probability(&inst) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn surviving_and_degrees() {
        let c = star_cover(&[vec![1, 2], vec![1]], vec![1, 2]);
        let inst = NeighborhoodInstance::new(&c, 0, &PartialColoring::new(3)).unwrap();
        assert_eq!(inst.touched(0).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(inst.surviving(&vec![None, None]), vec![0, 1]);
        assert_eq!(inst.surviving(&vec![Some(0), None]), vec![1]);
        assert_eq!(inst.residual_cross_degree(0, &vec![None, None]), 2);
        assert_eq!(inst.residual_cross_degree(0, &vec![Some(1), None]), 1);
        assert_eq!(inst.residual_list_size(0, &vec![None, Some(0)]), 2);
        assert_eq!(inst.residual_list_size(1, &vec![None, Some(0)]), 0);
    }

    #[test]
    fn random_instances_enumerate_independent_sets() {
        for s in 0..30u64 {
            let g = crate::graph::generate(&crate::graph::Family::RandomBipartite { n: 2, m: 4, p: 0.6, seed: s }).unwrap();
            let c = random_cover(&g, 2, s, CoverMode::Density(0.7)).unwrap();
            let inst = NeighborhoodInstance::new(&c, 0, &PartialColoring::new(6)).unwrap();
            let states = inst.enumerate(1000).unwrap();
            assert!(states.iter().all(|p| inst.is_independent(p)));
            let expected: usize = (0..inst.neighbors().len()).map(|i| inst.available(i).len() + 1).product();
            assert_eq!(states.len(), expected);
        }
    }
}
