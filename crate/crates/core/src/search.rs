//! Budgeted searches whose results do not depend on the number of workers.
//!
//! A search is split into strata (for example, by the first chosen index)
//! that are explored in order. Sequentially, one node budget is drawn down
//! stratum after stratum and the first success wins. In parallel, a chunk of
//! strata is explored concurrently, each with the budget still remaining at
//! the start of the chunk, and the per-stratum results are then replayed in
//! order against the running budget. Because a stratum's search is a
//! deterministic function of its budget, the replay reproduces the
//! sequential outcome exactly, including the node count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default node budget for searches.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A node counter with a hard limit.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    pub fn unlimited() -> Budget {
        Budget::new(u64::MAX)
    }

    /// Charges one node. Returns false, without charging, once the limit is
    /// reached; callers must then abandon the search.
    pub fn tick(&mut self) -> bool {
        if self.used >= self.limit {
            return false;
        }
        self.used += 1;
        true
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.limit
    }
}

/// How a budgeted search ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchEnd {
    Found,
    /// The whole space was explored without success.
    Complete,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult<T> {
    pub value: Option<T>,
    pub end: SearchEnd,
    pub nodes: u64,
}

impl<T> SearchResult<T> {
    pub fn found(&self) -> bool {
        self.value.is_some()
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchResult<U> {
        SearchResult { value: self.value.map(f), end: self.end, nodes: self.nodes }
    }
}

/// Runs `search(stratum, budget)` over `0..strata` in order and returns the
/// first success. `search` must be deterministic and must stop as soon as
/// [`Budget::tick`] refuses.
pub fn ordered_search<T, F>(strata: usize, budget: u64, workers: usize, search: F) -> SearchResult<T>
where
    T: Send,
    F: Fn(usize, &mut Budget) -> Option<T> + Sync,
{
    if workers <= 1 {
        let mut b = Budget::new(budget);
        for s in 0..strata {
            if let Some(v) = search(s, &mut b) {
                return SearchResult { value: Some(v), end: SearchEnd::Found, nodes: b.used() };
            }
            if b.exhausted() {
                return SearchResult { value: None, end: SearchEnd::BudgetExhausted, nodes: b.used() };
            }
        }
        return SearchResult { value: None, end: SearchEnd::Complete, nodes: b.used() };
    }

    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
    let mut used = 0u64;
    let mut start = 0;
    while start < strata {
        let end = (start + workers).min(strata);
        let remaining = budget - used;
        let results: Vec<(Option<T>, u64)> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|s| {
                    let mut b = Budget::new(remaining);
                    let v = search(s, &mut b);
                    (v, b.used())
                })
                .collect()
        });
        for (v, n) in results {
            // a run that stayed within the sequential allowance is identical
            // to the sequential run; one that went past it would have been cut off
            if n > budget - used {
                return SearchResult { value: None, end: SearchEnd::BudgetExhausted, nodes: budget };
            }
            used += n;
            if v.is_some() {
                return SearchResult { value: v, end: SearchEnd::Found, nodes: used };
            }
            if used == budget {
                return SearchResult { value: None, end: SearchEnd::BudgetExhausted, nodes: used };
            }
        }
        start = end;
    }
    SearchResult { value: None, end: SearchEnd::Complete, nodes: used }
}
