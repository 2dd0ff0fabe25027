//! Simple undirected graphs on dense vertex indices `0..n`.

mod clique;
mod generate;
mod io;

use std::collections::VecDeque;

use thiserror::Error;

pub use clique::{
    all_cliques, find_clique, is_kr_free, is_triangle_free, CliqueBudgetExceeded,
    DEFAULT_CLIQUE_BUDGET,
};
pub use generate::{generate, Family};
pub use io::{parse_graph, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
}

/// An immutable simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    max_degree: usize,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
            max_degree: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges (in either orientation)
    /// collapse to one edge.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_adjacency_unchecked(adj))
    }

    fn from_adjacency_unchecked(mut adj: Vec<Vec<usize>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        Graph {
            adj,
            edge_count,
            max_degree,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Δ(G).
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Sorted neighbors of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of `v` inside `neighbors(u)`, if adjacent.
    pub fn neighbor_index(&self, u: usize, v: usize) -> Option<usize> {
        self.adj.get(u)?.binary_search(&v).ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn check_vertex(&self, u: usize) -> Result<(), GraphError> {
        if u < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: u,
                n: self.vertex_count(),
            })
        }
    }

    /// N^d[u]: all vertices at distance at most `d` from `u`, sorted.
    pub fn ball(&self, u: usize, d: usize) -> Result<Vec<usize>, GraphError> {
        self.check_vertex(u)?;
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::from([u]);
        dist[u] = 0;
        let mut out = vec![u];
        while let Some(v) = queue.pop_front() {
            if dist[v] == d {
                continue;
            }
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// True when no two neighbors of `u` are adjacent.
    pub fn neighborhood_is_independent(&self, u: usize) -> bool {
        let nbrs = &self.adj[u];
        nbrs.iter()
            .enumerate()
            .all(|(i, &v)| nbrs[i + 1..].iter().all(|&w| !self.has_edge(v, w)))
    }

    /// The subgraph induced by the vertices with `keep[v] == true`, renumbered
    /// in increasing order. Returns the graph and the map new index -> old index.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        let origin: Vec<usize> = (0..self.vertex_count()).filter(|&v| keep[v]).collect();
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (new, &old) in origin.iter().enumerate() {
            index[old] = new;
        }
        let adj = origin
            .iter()
            .map(|&old| {
                self.adj[old]
                    .iter()
                    .filter(|&&w| keep[w])
                    .map(|&w| index[w])
                    .collect()
            })
            .collect();
        (Self::from_adjacency_unchecked(adj), origin)
    }

    /// Vertex order in which every vertex has at most `degeneracy` earlier
    /// neighbors (reverse of the smallest-last elimination order). Ties are
    /// broken by lowest index so the order is deterministic.
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut removed = vec![false; n];
        let mut buckets: Vec<std::collections::BTreeSet<usize>> =
            vec![Default::default(); self.max_degree + 1];
        for v in 0..n {
            buckets[degree[v]].insert(v);
        }
        let mut elimination = Vec::with_capacity(n);
        for _ in 0..n {
            let d = buckets.iter().position(|b| !b.is_empty()).expect("vertex left");
            let v = buckets[d].pop_first().expect("non-empty bucket");
            removed[v] = true;
            elimination.push(v);
            for &w in &self.adj[v] {
                if !removed[w] {
                    buckets[degree[w]].remove(&w);
                    degree[w] -= 1;
                    buckets[degree[w]].insert(w);
                }
            }
        }
        elimination.reverse();
        elimination
    }

    /// Serializes to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        use std::fmt::Write;
        let mut out = format!("p {} {}\n", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            writeln!(out, "e {u} {v}").expect("write to string");
        }
        out
    }
}
