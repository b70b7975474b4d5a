use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Default search budget, in explored nodes.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Shared node counter for exhaustive searches.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
    what: &'static str,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0), what: "search" }
    }

    pub fn labelled(limit: u64, what: &'static str) -> Self {
        Budget { limit, used: AtomicU64::new(0), what }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used())
    }

    #[inline]
    pub fn tick(&self) -> Result<()> {
        let used = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.limit {
            Err(Error::BudgetExceeded(format!("{} exceeded {} nodes", self.what, self.limit)))
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
