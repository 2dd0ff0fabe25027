use super::{Cover, CoverError, CoverVertex, PartialColoring};

/// A mutable independent set of `H` that keeps, for every cover vertex, the
/// number of picked cross neighbors. That makes residual lists `L_I(v)` and
/// residual cross-degrees cheap to query while picks change.
#[derive(Debug, Clone)]
pub struct Assignment<'c> {
    cover: &'c Cover,
    picks: Vec<Option<usize>>,
    blocked: Vec<u32>,
}

impl<'c> Assignment<'c> {
    pub fn new(cover: &'c Cover) -> Self {
        Assignment {
            cover,
            picks: vec![None; cover.graph().vertex_count()],
            blocked: vec![0; cover.cover_vertex_count()],
        }
    }

    /// Loads `coloring`, which must be independent in `cover`.
    pub fn from_coloring(cover: &'c Cover, coloring: &PartialColoring) -> Result<Self, CoverError> {
        if let Some((x, y)) = cover.find_conflict(coloring)? {
            return Err(CoverError::NotIndependent(x, y));
        }
        let mut a = Assignment::new(cover);
        for (v, s) in coloring.iter() {
            a.set(v, Some(s));
        }
        Ok(a)
    }

    pub fn cover(&self) -> &'c Cover {
        self.cover
    }

    pub fn pick(&self, v: usize) -> Option<usize> {
        self.picks[v]
    }

    pub fn picks(&self) -> &[Option<usize>] {
        &self.picks
    }

    pub fn to_coloring(&self) -> PartialColoring {
        PartialColoring::from_picks(self.picks.clone())
    }

    fn shift_blocks(&mut self, v: usize, s: usize, add: bool) {
        let cover = self.cover;
        for (p, &w) in cover.graph().neighbors(v).iter().enumerate() {
            if let Some(t) = cover.partner(v, p, s) {
                let id = cover.id(CoverVertex::new(w, t));
                if add {
                    self.blocked[id] += 1;
                } else {
                    self.blocked[id] -= 1;
                }
            }
        }
    }

    /// Replaces the pick at `v`. The new pick must not be cross-blocked.
    pub fn set(&mut self, v: usize, slot: Option<usize>) {
        if let Some(old) = self.picks[v] {
            self.shift_blocks(v, old, false);
        }
        if let Some(s) = slot {
            debug_assert!(s < self.cover.list_size(v));
            debug_assert!(
                self.is_free(v, s),
                "pick ({v}, {s}) is cross-matched to another pick"
            );
            self.shift_blocks(v, s, true);
        }
        self.picks[v] = slot;
    }

    /// Number of picks cross-adjacent to `(v, s)`.
    pub fn block_count(&self, v: usize, s: usize) -> u32 {
        self.blocked[self.cover.id(CoverVertex::new(v, s))]
    }

    /// `(v, s)` has no picked cross neighbor.
    #[inline]
    pub fn is_free(&self, v: usize, s: usize) -> bool {
        self.block_count(v, s) == 0
    }

    /// Slots of `L(v)` with no picked cross neighbor. For an unpicked `v` this is `L_I(v)`.
    pub fn free_slots(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.cover.list_size(v)).filter(move |&s| self.is_free(v, s))
    }

    /// `(v, s)` belongs to the residual cover `H_I`.
    #[inline]
    pub fn in_residual(&self, v: usize, s: usize) -> bool {
        self.picks[v].is_none() && self.is_free(v, s)
    }

    /// `|L_I(v)|` for an unpicked `v`, 0 for a picked one.
    pub fn residual_list_size(&self, v: usize) -> usize {
        if self.picks[v].is_some() {
            0
        } else {
            self.free_slots(v).count()
        }
    }

    /// `deg*` of `(v, s)` in the residual cover.
    pub fn residual_cross_degree(&self, v: usize, s: usize) -> usize {
        let cover = self.cover;
        cover
            .graph()
            .neighbors(v)
            .iter()
            .enumerate()
            .filter(|&(p, &w)| {
                cover
                    .partner(v, p, s)
                    .is_some_and(|t| self.in_residual(w, t))
            })
            .count()
    }

    /// Number of unpicked neighbors of `v`: its degree in `G_I`.
    pub fn residual_degree(&self, v: usize) -> usize {
        self.cover
            .graph()
            .neighbors(v)
            .iter()
            .filter(|&&w| self.picks[w].is_none())
            .count()
    }
}
