//! Covers `(L, H)` of a base graph.
//!
//! A cover vertex is a pair `(u, i)` with `i < |L(u)|`. The cliques on the lists
//! are implicit; only the cross matchings between lists of adjacent base
//! vertices are stored, one slot-to-slot map per directed base edge.

mod assignment;
mod io;
mod residual;
mod validate;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::seed;

pub use assignment::Assignment;
pub use io::{parse_cover, CoverParseError};
pub use residual::{residual, ResidualCover};
pub use validate::{validate, Axiom, ValidationReport, Violation};

const NO_PARTNER: u32 = u32::MAX;

/// A vertex `(vertex, slot)` of the cover graph `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CoverVertex {
    pub vertex: usize,
    pub slot: usize,
}

impl CoverVertex {
    pub fn new(vertex: usize, slot: usize) -> Self {
        CoverVertex { vertex, slot }
    }
}

impl std::fmt::Display for CoverVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.vertex, self.slot)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverError {
    #[error("vertex {0} has an empty list")]
    EmptyList(usize),
    #[error("cover is not valid: {0}")]
    Invalid(ValidationReport),
    #[error("cover describes {cover} base vertices but the graph has {graph}")]
    BaseMismatch { cover: usize, graph: usize },
    #[error("cover vertex {0} does not exist")]
    UnknownCoverVertex(CoverVertex),
    #[error("picks {0} and {1} are joined by a cross edge")]
    NotIndependent(CoverVertex, CoverVertex),
    #[error("invalid cover parameters: {0}")]
    InvalidParameters(String),
}

/// A raw, possibly invalid cover description: what the text format carries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverData {
    pub n: usize,
    /// Declared fold `k`, or `None` for ragged lists.
    pub fold: Option<usize>,
    /// `(base vertex, list size)` entries in input order.
    pub lists: Vec<(usize, usize)>,
    /// Matched cross pairs in input order.
    pub pairs: Vec<(CoverVertex, CoverVertex)>,
}

/// A validated cover of an owned base graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    graph: Graph,
    sizes: Vec<usize>,
    list_offset: Vec<usize>,
    partner_offset: Vec<usize>,
    partners: Vec<u32>,
}

impl Cover {
    /// Builds a cover from list sizes and cross pairs that are already known to
    /// satisfy the axioms.
    pub(crate) fn from_parts(
        graph: Graph,
        sizes: Vec<usize>,
        pairs: impl IntoIterator<Item = (CoverVertex, CoverVertex)>,
    ) -> Cover {
        let n = graph.vertex_count();
        let mut list_offset = Vec::with_capacity(n + 1);
        let mut partner_offset = Vec::with_capacity(n + 1);
        let (mut lo, mut po) = (0, 0);
        for v in 0..n {
            list_offset.push(lo);
            partner_offset.push(po);
            lo += sizes[v];
            po += sizes[v] * graph.degree(v);
        }
        list_offset.push(lo);
        partner_offset.push(po);
        let mut cover = Cover {
            graph,
            sizes,
            list_offset,
            partner_offset,
            partners: vec![NO_PARTNER; po],
        };
        for (x, y) in pairs {
            let px = cover.graph.neighbor_index(x.vertex, y.vertex).expect("pair on an edge");
            let py = cover.graph.neighbor_index(y.vertex, x.vertex).expect("pair on an edge");
            let ix = cover.partner_index(x.vertex, px, x.slot);
            let iy = cover.partner_index(y.vertex, py, y.slot);
            cover.partners[ix] = y.slot as u32;
            cover.partners[iy] = x.slot as u32;
        }
        cover
    }

    /// Validates `data` against `graph` and builds the cover.
    pub fn from_data(graph: Graph, data: &CoverData) -> Result<Cover, CoverError> {
        if data.n != graph.vertex_count() {
            return Err(CoverError::BaseMismatch {
                cover: data.n,
                graph: graph.vertex_count(),
            });
        }
        let report = validate(&graph, data);
        if !report.is_valid() {
            return Err(CoverError::Invalid(report));
        }
        let mut sizes = vec![0; data.n];
        for &(v, size) in &data.lists {
            sizes[v] = size;
        }
        Ok(Cover::from_parts(graph, sizes, data.pairs.iter().copied()))
    }

    #[inline]
    fn partner_index(&self, v: usize, p: usize, s: usize) -> usize {
        self.partner_offset[v] + p * self.sizes[v] + s
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn list_size(&self, v: usize) -> usize {
        self.sizes[v]
    }

    /// `Some(k)` when every list has size `k`.
    pub fn fold(&self) -> Option<usize> {
        match self.sizes.first() {
            Some(&k) if self.sizes.iter().all(|&s| s == k) => Some(k),
            Some(_) => None,
            None => Some(0),
        }
    }

    /// Total number of cover vertices `|V(H)|`.
    pub fn cover_vertex_count(&self) -> usize {
        *self.list_offset.last().unwrap_or(&0)
    }

    /// Dense id of a cover vertex in `0..cover_vertex_count()`.
    #[inline]
    pub fn id(&self, x: CoverVertex) -> usize {
        self.list_offset[x.vertex] + x.slot
    }

    pub fn contains(&self, x: CoverVertex) -> bool {
        x.vertex < self.sizes.len() && x.slot < self.sizes[x.vertex]
    }

    /// Partner of `(v, s)` in the list of the `p`-th neighbor of `v`.
    #[inline]
    pub fn partner(&self, v: usize, p: usize, s: usize) -> Option<usize> {
        match self.partners[self.partner_index(v, p, s)] {
            NO_PARTNER => None,
            t => Some(t as usize),
        }
    }

    /// Partner of `(v, s)` in `L(w)`; `None` when `vw` is not an edge or `(v, s)`
    /// is unmatched there.
    pub fn partner_at(&self, v: usize, s: usize, w: usize) -> Option<usize> {
        let p = self.graph.neighbor_index(v, w)?;
        self.partner(v, p, s)
    }

    /// Cross neighbors of `x` in `H*`.
    pub fn cross_neighbors(&self, x: CoverVertex) -> impl Iterator<Item = CoverVertex> + '_ {
        self.graph
            .neighbors(x.vertex)
            .iter()
            .enumerate()
            .filter_map(move |(p, &w)| self.partner(x.vertex, p, x.slot).map(|t| CoverVertex::new(w, t)))
    }

    /// `deg*(x)`: the number of cross edges at `x`.
    pub fn cross_degree(&self, x: CoverVertex) -> Result<usize, CoverError> {
        if !self.contains(x) {
            return Err(CoverError::UnknownCoverVertex(x));
        }
        Ok(self.cross_neighbors(x).count())
    }

    /// Cross edges `(x, y)` with `x.vertex < y.vertex`, sorted.
    pub fn cross_edges(&self) -> Vec<(CoverVertex, CoverVertex)> {
        let mut out = Vec::new();
        for v in 0..self.graph.vertex_count() {
            for (p, &w) in self.graph.neighbors(v).iter().enumerate() {
                if w < v {
                    continue;
                }
                for s in 0..self.sizes[v] {
                    if let Some(t) = self.partner(v, p, s) {
                        out.push((CoverVertex::new(v, s), CoverVertex::new(w, t)));
                    }
                }
            }
        }
        out
    }

    pub fn to_data(&self) -> CoverData {
        CoverData {
            n: self.graph.vertex_count(),
            fold: self.fold(),
            lists: self.sizes.iter().copied().enumerate().collect(),
            pairs: self.cross_edges(),
        }
    }

    /// Serializes to the cover text format.
    pub fn to_text(&self) -> String {
        io::write_cover(&self.to_data())
    }

    /// True iff the picks form an independent set of `H`.
    pub fn is_independent(&self, coloring: &PartialColoring) -> Result<bool, CoverError> {
        Ok(self.find_conflict(coloring)?.is_none())
    }

    fn check_picks(&self, coloring: &PartialColoring) -> Result<(), CoverError> {
        if coloring.len() != self.graph.vertex_count() {
            return Err(CoverError::BaseMismatch {
                cover: self.graph.vertex_count(),
                graph: coloring.len(),
            });
        }
        for (v, s) in coloring.iter() {
            let x = CoverVertex::new(v, s);
            if !self.contains(x) {
                return Err(CoverError::UnknownCoverVertex(x));
            }
        }
        Ok(())
    }

    pub(crate) fn find_conflict(
        &self,
        coloring: &PartialColoring,
    ) -> Result<Option<(CoverVertex, CoverVertex)>, CoverError> {
        self.check_picks(coloring)?;
        for (v, s) in coloring.iter() {
            for (p, &w) in self.graph.neighbors(v).iter().enumerate() {
                if w > v {
                    if let (Some(t), Some(pw)) = (self.partner(v, p, s), coloring.pick(w)) {
                        if t == pw {
                            return Ok(Some((CoverVertex::new(v, s), CoverVertex::new(w, t))));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// True iff the picks are independent and cover every base vertex.
    pub fn is_coloring(&self, coloring: &PartialColoring) -> Result<bool, CoverError> {
        Ok(self.find_conflict(coloring)?.is_none()
            && coloring.domain_size() == self.graph.vertex_count())
    }
}

/// The canonical cover of a list assignment: `(u, c)` and `(v, c)` are matched
/// for every edge `uv` and shared color `c`. Slot `i` of `L(u)` holds the
/// `i`-th smallest color of `lists[u]`.
pub fn cover_from_lists(graph: &Graph, lists: &[Vec<u32>]) -> Result<Cover, CoverError> {
    let n = graph.vertex_count();
    if lists.len() != n {
        return Err(CoverError::BaseMismatch {
            cover: lists.len(),
            graph: n,
        });
    }
    let sorted: Vec<Vec<u32>> = lists
        .iter()
        .map(|l| {
            let mut l = l.clone();
            l.sort_unstable();
            l.dedup();
            l
        })
        .collect();
    if let Some(v) = sorted.iter().position(Vec::is_empty) {
        return Err(CoverError::EmptyList(v));
    }
    let mut pairs = Vec::new();
    for (u, v) in graph.edges() {
        for (i, c) in sorted[u].iter().enumerate() {
            if let Ok(j) = sorted[v].binary_search(c) {
                pairs.push((CoverVertex::new(u, i), CoverVertex::new(v, j)));
            }
        }
    }
    let sizes = sorted.iter().map(Vec::len).collect();
    Ok(Cover::from_parts(graph.clone(), sizes, pairs))
}

/// How `random_cover` fills the cross matchings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CoverMode {
    /// A uniformly random perfect matching on every edge.
    Perfect,
    /// A uniformly random perfect matching thinned by keeping each pair with
    /// probability `p`.
    Density(f64),
}

/// A random `k`-fold cover, deterministic in `seed`.
pub fn random_cover(graph: &Graph, k: usize, seed: u64, mode: CoverMode) -> Result<Cover, CoverError> {
    if k == 0 {
        return Err(CoverError::InvalidParameters("fold k must be at least 1".into()));
    }
    if let CoverMode::Density(p) = mode {
        if !(0.0..=1.0).contains(&p) {
            return Err(CoverError::InvalidParameters(format!("density {p} outside [0, 1]")));
        }
    }
    let mut rng = seed::rng(seed);
    let mut pairs = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    for (u, v) in graph.edges() {
        perm.shuffle(&mut rng);
        for (i, &j) in perm.iter().enumerate() {
            let keep = match mode {
                CoverMode::Perfect => true,
                CoverMode::Density(p) => rng.gen_bool(p),
            };
            if keep {
                pairs.push((CoverVertex::new(u, i), CoverVertex::new(v, j)));
            }
        }
    }
    Ok(Cover::from_parts(graph.clone(), vec![k; graph.vertex_count()], pairs))
}

/// At most one pick `(v, slot)` per base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct PartialColoring {
    picks: Vec<Option<usize>>,
}

impl PartialColoring {
    /// The empty coloring over `n` base vertices.
    pub fn new(n: usize) -> Self {
        PartialColoring { picks: vec![None; n] }
    }

    pub fn from_picks(picks: Vec<Option<usize>>) -> Self {
        PartialColoring { picks }
    }

    /// Number of base vertices (not picks).
    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }

    pub fn pick(&self, v: usize) -> Option<usize> {
        self.picks[v]
    }

    pub fn set(&mut self, v: usize, slot: Option<usize>) {
        self.picks[v] = slot;
    }

    /// `(vertex, slot)` for every picked vertex, in vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.picks
            .iter()
            .enumerate()
            .filter_map(|(v, s)| s.map(|s| (v, s)))
    }

    /// dom(I) as a sorted vertex list.
    pub fn domain(&self) -> Vec<usize> {
        self.iter().map(|(v, _)| v).collect()
    }

    pub fn domain_size(&self) -> usize {
        self.picks.iter().filter(|p| p.is_some()).count()
    }

    pub fn picks(&self) -> &[Option<usize>] {
        &self.picks
    }

    /// Adds the picks of `other` on vertices where `self` has none.
    pub fn union(&self, other: &PartialColoring) -> PartialColoring {
        PartialColoring {
            picks: self
                .picks
                .iter()
                .zip(&other.picks)
                .map(|(a, b)| a.or(*b))
                .collect(),
        }
    }
}
