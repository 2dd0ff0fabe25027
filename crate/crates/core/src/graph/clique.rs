use thiserror::Error;

use super::Graph;

/// Node budget for exact clique searches.
pub const DEFAULT_CLIQUE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("clique search budget of {0} nodes exceeded")]
pub struct CliqueBudgetExceeded(pub u64);

pub fn is_triangle_free(g: &Graph) -> bool {
    g.edges().all(|(u, v)| {
        let (a, b) = (g.neighbors(u), g.neighbors(v));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    })
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

struct CliqueSearch<'g, F> {
    g: &'g Graph,
    r: usize,
    budget: u64,
    visited: u64,
    stack: Vec<usize>,
    on_clique: F,
}

impl<F: FnMut(&[usize]) -> bool> CliqueSearch<'_, F> {
    /// Returns `Ok(true)` when the callback asked to stop.
    fn extend(&mut self, candidates: &[usize]) -> Result<bool, CliqueBudgetExceeded> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(CliqueBudgetExceeded(self.budget));
        }
        if self.stack.len() == self.r {
            return Ok((self.on_clique)(&self.stack));
        }
        for (i, &c) in candidates.iter().enumerate() {
            if self.stack.len() + 1 + (candidates.len() - i - 1) < self.r {
                break;
            }
            let next = intersect_sorted(&candidates[i + 1..], self.g.neighbors(c));
            self.stack.push(c);
            let stop = self.extend(&next)?;
            self.stack.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Visits every `r`-clique (as a sorted vertex list) until `on_clique` returns true.
fn search_cliques<F>(g: &Graph, r: usize, budget: u64, on_clique: F) -> Result<(), CliqueBudgetExceeded>
where
    F: FnMut(&[usize]) -> bool,
{
    assert!(r >= 1, "clique size must be positive");
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    let mut search = CliqueSearch {
        g,
        r,
        budget,
        visited: 0,
        stack: Vec::with_capacity(r),
        on_clique,
    };
    search.extend(&all).map(|_| ())
}

/// Some clique on `r` vertices, if one exists.
pub fn find_clique(g: &Graph, r: usize, budget: u64) -> Result<Option<Vec<usize>>, CliqueBudgetExceeded> {
    let mut found = None;
    search_cliques(g, r, budget, |c| {
        found = Some(c.to_vec());
        true
    })?;
    Ok(found)
}

/// All cliques on `r` vertices, in lexicographic order.
pub fn all_cliques(g: &Graph, r: usize, budget: u64) -> Result<Vec<Vec<usize>>, CliqueBudgetExceeded> {
    let mut found = Vec::new();
    search_cliques(g, r, budget, |c| {
        found.push(c.to_vec());
        false
    })?;
    Ok(found)
}

/// True iff `g` has no clique on `r >= 2` vertices.
pub fn is_kr_free(g: &Graph, r: usize, budget: u64) -> Result<bool, CliqueBudgetExceeded> {
    assert!(r >= 2, "K_r-freeness needs r >= 2");
    Ok(find_clique(g, r, budget)?.is_none())
}
