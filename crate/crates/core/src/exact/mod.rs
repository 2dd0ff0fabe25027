//! Exhaustive computations for small instances: cover colorings, `χ_DP`,
//! `ind(F)` and the median independent-set size `ᾱ(F)`.

mod indset;
mod search;

use thiserror::Error;

pub use indset::{
    ind_count, independence_polynomial, median_alpha, MaskGraph, TooLarge, DEFAULT_ENUMERATION_LIMIT,
};
pub use search::{chi_dp, find_coloring, is_k_dp_colorable, ChiDp, DpVerdict};

/// Cap on the number of search nodes an exact computation may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    max_nodes: u64,
}

impl SearchBudget {
    pub const DEFAULT_NODES: u64 = 100_000_000;

    /// `None` when `max_nodes` is 0.
    pub fn new(max_nodes: u64) -> Option<Self> {
        (max_nodes >= 1).then_some(SearchBudget { max_nodes })
    }

    pub fn max_nodes(&self) -> u64 {
        self.max_nodes
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: Self::DEFAULT_NODES,
        }
    }
}

/// Result of a budgeted search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// The search space was exhausted without a solution.
    NoSolution,
    BudgetExceeded,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("fold k must be at least 1")]
    ZeroFold,
}

/// Node counter shared by nested searches.
#[derive(Debug)]
pub(crate) struct NodeMeter {
    used: u64,
    max: u64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct OutOfNodes;

impl NodeMeter {
    pub(crate) fn new(budget: SearchBudget) -> Self {
        NodeMeter {
            used: 0,
            max: budget.max_nodes,
        }
    }

    pub(crate) fn tick(&mut self) -> Result<(), OutOfNodes> {
        self.used += 1;
        if self.used > self.max {
            Err(OutOfNodes)
        } else {
            Ok(())
        }
    }

    pub(crate) fn error(&self) -> ExactError {
        ExactError::BudgetExceeded(self.max)
    }
}
