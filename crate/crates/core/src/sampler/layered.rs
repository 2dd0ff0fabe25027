use rand::Rng;
use serde::Serialize;

use super::{star_draw, LocalPicks, NeighborhoodInstance, SamplerError, ENUMERATION_LIMIT};
use crate::exact::MaskGraph;

/// One step of the layered procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayerRecord {
    /// 1-based step index.
    pub i: usize,
    /// `ind(F_i)`.
    pub ind: u128,
    /// `|S_i|`.
    pub chosen: usize,
    pub s: usize,
    pub t: usize,
}

/// How the starting set `I_0` was drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InitialDraw {
    /// Star procedure; exact because the neighborhood has no cross edges.
    Star,
    /// Exact, by enumeration.
    Enumerated,
    /// Approximate: Glauber dynamics for the given number of steps.
    Glauber(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayeredTrace {
    pub initial: InitialDraw,
    pub records: Vec<LayerRecord>,
}

impl LayeredTrace {
    /// `(s_k, t_k)`.
    pub fn counters(&self) -> (usize, usize) {
        self.records.last().map_or((0, 0), |r| (r.s, r.t))
    }
}

/// Picks plus, per local element, the number of picked cross neighbors.
struct LocalState<'a, 'c> {
    inst: &'a NeighborhoodInstance<'c>,
    picks: LocalPicks,
    blocked: Vec<u32>,
}

impl<'a, 'c> LocalState<'a, 'c> {
    fn new(inst: &'a NeighborhoodInstance<'c>) -> Self {
        LocalState {
            inst,
            picks: vec![None; inst.neighbors().len()],
            blocked: vec![0; inst.element_count()],
        }
    }

    fn set(&mut self, i: usize, slot: Option<usize>) {
        if let Some(old) = self.picks[i] {
            let id = self.inst.element_id(i, old).expect("picked element");
            for &b in self.inst.adjacent(id) {
                self.blocked[b] -= 1;
            }
        }
        if let Some(s) = slot {
            let id = self.inst.element_id(i, s).expect("available element");
            debug_assert_eq!(self.blocked[id], 0);
            for &b in self.inst.adjacent(id) {
                self.blocked[b] += 1;
            }
        }
        self.picks[i] = slot;
    }

    fn glauber<R: Rng + ?Sized>(&mut self, steps: u64, rng: &mut R) {
        let d = self.picks.len();
        if d == 0 {
            return;
        }
        let mut options = Vec::new();
        for _ in 0..steps {
            let i = rng.gen_range(0..d);
            self.set(i, None);
            options.clear();
            options.extend(
                self.inst
                    .available(i)
                    .iter()
                    .copied()
                    .filter(|&s| self.blocked[self.inst.element_id(i, s).expect("available")] == 0),
            );
            let r = rng.gen_range(0..=options.len());
            if let Some(&s) = options.get(r) {
                self.set(i, Some(s));
            }
        }
    }
}

fn initial_draw<R: Rng + ?Sized>(state: &mut LocalState<'_, '_>, rng: &mut R) -> InitialDraw {
    let inst = state.inst;
    if inst.internal_cross_edge().is_none() {
        for (i, p) in star_draw(inst, rng).into_iter().enumerate() {
            state.set(i, p);
        }
        return InitialDraw::Star;
    }
    if let Ok(states) = inst.enumerate(ENUMERATION_LIMIT) {
        let chosen = &states[rng.gen_range(0..states.len())];
        for (i, p) in chosen.iter().enumerate() {
            state.set(i, *p);
        }
        return InitialDraw::Enumerated;
    }
    let steps = 50 * inst.element_count() as u64;
    state.glauber(steps, rng);
    InitialDraw::Glauber(steps)
}

/// The sequential layer procedure. Starting from a uniform `I_0`, for each
/// focus slot `x_i` in order, the picks inside the layer `Λ(x_i)` are replaced
/// by a uniform independent set `S_i` of `F_i = F(x_i, I_{i-1} \ Λ_i)`, and
/// `s` or `t` is incremented according to whether `ind(F_i) > threshold`.
///
/// `I_0` is exact when the neighborhood has no cross edges or at most
/// [`ENUMERATION_LIMIT`] independent subsets, and otherwise comes from Glauber
/// dynamics; the trace records which.
pub fn layered_sample<R: Rng + ?Sized>(
    inst: &NeighborhoodInstance<'_>,
    threshold: u128,
    rng: &mut R,
) -> Result<(LocalPicks, LayeredTrace), SamplerError> {
    let layer_count = inst.cover().list_size(inst.focus());
    for x in 0..layer_count {
        let size = inst.layer(x).len();
        if size > MaskGraph::MAX_VERTICES {
            return Err(SamplerError::LayerTooLarge { layer: x, size });
        }
    }
    let mut state = LocalState::new(inst);
    let initial = initial_draw(&mut state, rng);
    let (mut s, mut t) = (0, 0);
    let mut records = Vec::with_capacity(layer_count);
    for x in 0..layer_count {
        let layer = inst.layer(x);
        for &id in layer {
            let (i, slot) = inst.element(id);
            if state.picks[i] == Some(slot) {
                state.set(i, None);
            }
        }
        let f: Vec<usize> = layer
            .iter()
            .copied()
            .filter(|&id| state.picks[inst.element(id).0].is_none() && state.blocked[id] == 0)
            .collect();
        let edges = f.iter().enumerate().flat_map(|(a, &ia)| {
            f.iter()
                .enumerate()
                .skip(a + 1)
                .filter(move |&(_, ib)| inst.adjacent(ia).binary_search(ib).is_ok())
                .map(move |(b, _)| (a, b))
        });
        let graph = MaskGraph::new(f.len(), edges).expect("layer size checked");
        let ind = graph.count();
        if ind > threshold {
            s += 1;
        } else {
            t += 1;
        }
        let chosen = graph.sample_uniform(rng);
        for (a, &id) in f.iter().enumerate() {
            if chosen & (1 << a) != 0 {
                let (i, slot) = inst.element(id);
                state.set(i, Some(slot));
            }
        }
        let i = x + 1;
        assert_eq!(s + t, i, "layer counters out of step");
        records.push(LayerRecord {
            i,
            ind,
            chosen: chosen.count_ones() as usize,
            s,
            t,
        });
    }
    debug_assert!(inst.is_independent(&state.picks));
    Ok((state.picks, LayeredTrace { initial, records }))
}
