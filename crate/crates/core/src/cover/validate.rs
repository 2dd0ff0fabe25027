use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{CoverData, CoverVertex};
use crate::graph::Graph;

/// The four cover axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    /// Lists partition the cover vertices.
    C1,
    /// Lists are cliques; those edges are implicit and never stored.
    C2,
    /// Cross edges only join lists of adjacent base vertices.
    C3,
    /// Cross edges over one base edge form a matching.
    C4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// A base vertex has more than one list entry (C1).
    DuplicateList { vertex: usize },
    /// A base vertex has no list entry (C1).
    MissingList { vertex: usize },
    /// A list entry names a vertex outside the base graph (C1).
    ListOutsideBase { vertex: usize },
    /// A stored pair references a cover vertex that belongs to no list (C1).
    UnlistedCoverVertex { x: CoverVertex },
    /// A stored pair joins two vertices of the same list (C2).
    StoredListEdge { x: CoverVertex, y: CoverVertex },
    /// A stored pair joins lists of non-adjacent base vertices (C3).
    CrossOnNonEdge { x: CoverVertex, y: CoverVertex },
    /// `x` has more than one partner across the base edge `(u, v)` (C4).
    NotMatching { u: usize, v: usize, x: CoverVertex },
}

impl Violation {
    pub fn axiom(&self) -> Axiom {
        match self {
            Violation::DuplicateList { .. }
            | Violation::MissingList { .. }
            | Violation::ListOutsideBase { .. }
            | Violation::UnlistedCoverVertex { .. } => Axiom::C1,
            Violation::StoredListEdge { .. } => Axiom::C2,
            Violation::CrossOnNonEdge { .. } => Axiom::C3,
            Violation::NotMatching { .. } => Axiom::C4,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axiom = self.axiom();
        match self {
            Violation::DuplicateList { vertex } => write!(f, "{axiom:?} duplicate_list vertex={vertex}"),
            Violation::MissingList { vertex } => write!(f, "{axiom:?} missing_list vertex={vertex}"),
            Violation::ListOutsideBase { vertex } => {
                write!(f, "{axiom:?} list_outside_base vertex={vertex}")
            }
            Violation::UnlistedCoverVertex { x } => {
                write!(f, "{axiom:?} unlisted_cover_vertex x={}:{}", x.vertex, x.slot)
            }
            Violation::StoredListEdge { x, y } => write!(
                f,
                "{axiom:?} stored_list_edge x={}:{} y={}:{}",
                x.vertex, x.slot, y.vertex, y.slot
            ),
            Violation::CrossOnNonEdge { x, y } => write!(
                f,
                "{axiom:?} cross_on_non_edge x={}:{} y={}:{}",
                x.vertex, x.slot, y.vertex, y.slot
            ),
            Violation::NotMatching { u, v, x } => write!(
                f,
                "{axiom:?} not_matching edge={u}-{v} x={}:{}",
                x.vertex, x.slot
            ),
        }
    }
}

/// Every axiom violation found in a cover description; empty iff valid.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// The distinct axioms violated.
    pub fn axioms(&self) -> BTreeSet<Axiom> {
        self.violations.iter().map(Violation::axiom).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let lines: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", lines.join("; "))
    }
}

/// Checks C1-C4 for `data` over the base graph `graph`.
pub fn validate(graph: &Graph, data: &CoverData) -> ValidationReport {
    let n = graph.vertex_count().max(data.n);
    let mut violations = Vec::new();
    let mut sizes: Vec<Option<usize>> = vec![None; n];
    for &(vertex, size) in &data.lists {
        if vertex >= graph.vertex_count() {
            violations.push(Violation::ListOutsideBase { vertex });
        } else if sizes[vertex].is_some() {
            violations.push(Violation::DuplicateList { vertex });
        } else {
            sizes[vertex] = Some(size);
        }
    }
    for (vertex, size) in sizes.iter().enumerate().take(graph.vertex_count()) {
        if size.is_none() {
            violations.push(Violation::MissingList { vertex });
        }
    }
    let listed = |x: CoverVertex| x.vertex < graph.vertex_count() && sizes[x.vertex].is_some_and(|s| x.slot < s);

    // Per base edge, how often each endpoint cover vertex is used.
    let mut usage: BTreeMap<(usize, usize), BTreeMap<CoverVertex, usize>> = BTreeMap::new();
    for &(x, y) in &data.pairs {
        let unlisted: Vec<CoverVertex> = [x, y].into_iter().filter(|&z| !listed(z)).collect();
        if !unlisted.is_empty() {
            violations.extend(unlisted.into_iter().map(|x| Violation::UnlistedCoverVertex { x }));
            continue;
        }
        if x.vertex == y.vertex {
            violations.push(Violation::StoredListEdge { x, y });
            continue;
        }
        if !graph.has_edge(x.vertex, y.vertex) {
            violations.push(Violation::CrossOnNonEdge { x, y });
            continue;
        }
        let edge = (x.vertex.min(y.vertex), x.vertex.max(y.vertex));
        let counts = usage.entry(edge).or_default();
        *counts.entry(x).or_default() += 1;
        *counts.entry(y).or_default() += 1;
    }
    for ((u, v), counts) in usage {
        for (x, count) in counts {
            if count > 1 {
                violations.push(Violation::NotMatching { u, v, x });
            }
        }
    }
    ValidationReport { violations }
}
