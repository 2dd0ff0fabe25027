use super::{Assignment, Cover, CoverError, CoverVertex, PartialColoring};

/// The instance left after fixing an independent set `I`: the base graph
/// `G_I = G - dom(I)` and lists `L_I(u) = L(u) \ N_H(I)`, renumbered densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualCover {
    pub cover: Cover,
    /// Residual vertex index -> original base vertex.
    pub vertex_origin: Vec<usize>,
    /// Residual vertex index -> (residual slot -> original slot).
    pub slot_origin: Vec<Vec<usize>>,
}

impl ResidualCover {
    /// Maps a coloring of the residual back to original vertices and slots.
    pub fn lift(&self, coloring: &PartialColoring, original_n: usize) -> PartialColoring {
        let mut out = PartialColoring::new(original_n);
        for (v, s) in coloring.iter() {
            out.set(self.vertex_origin[v], Some(self.slot_origin[v][s]));
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_origin.is_empty()
    }
}

/// Builds `(G_I, L_I, H_I)`. Fails if `I` is not independent. The parent cover
/// is left untouched.
pub fn residual(cover: &Cover, coloring: &PartialColoring) -> Result<ResidualCover, CoverError> {
    let state = Assignment::from_coloring(cover, coloring)?;
    Ok(residual_of(&state))
}

pub(crate) fn residual_of(state: &Assignment<'_>) -> ResidualCover {
    let cover = state.cover();
    let g = cover.graph();
    let keep: Vec<bool> = (0..g.vertex_count()).map(|v| state.pick(v).is_none()).collect();
    let (base, vertex_origin) = g.induced(&keep);
    let slot_origin: Vec<Vec<usize>> = vertex_origin
        .iter()
        .map(|&v| state.free_slots(v).collect())
        .collect();
    let mut new_vertex = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in vertex_origin.iter().enumerate() {
        new_vertex[v] = i;
    }
    let mut new_slot: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (i, &v) in vertex_origin.iter().enumerate() {
        new_slot[v] = vec![usize::MAX; cover.list_size(v)];
        for (j, &s) in slot_origin[i].iter().enumerate() {
            new_slot[v][s] = j;
        }
    }
    let mut pairs = Vec::new();
    for (x, y) in cover.cross_edges() {
        if state.in_residual(x.vertex, x.slot) && state.in_residual(y.vertex, y.slot) {
            pairs.push((
                CoverVertex::new(new_vertex[x.vertex], new_slot[x.vertex][x.slot]),
                CoverVertex::new(new_vertex[y.vertex], new_slot[y.vertex][y.slot]),
            ));
        }
    }
    let sizes = slot_origin.iter().map(Vec::len).collect();
    ResidualCover {
        cover: Cover::from_parts(base, sizes, pairs),
        vertex_origin,
        slot_origin,
    }
}
