use crate::error::{Error, Result};

/// Upper bound on the number of candidates any single enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeGuard {
    pub max_frontier: usize,
}

impl SizeGuard {
    pub const DEFAULT_FRONTIER: usize = 1_000_000;

    pub fn new(max_frontier: usize) -> Self {
        SizeGuard { max_frontier }
    }

    pub(crate) fn budget(&self) -> Budget {
        Budget {
            limit: self.max_frontier,
            spent: 0,
        }
    }

    /// Fails if a single structure would already exceed the guard.
    pub(crate) fn check(&self, size: usize) -> Result<()> {
        if size > self.max_frontier {
            Err(Error::SizeGuardExceeded {
                limit: self.max_frontier,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for SizeGuard {
    fn default() -> Self {
        SizeGuard::new(Self::DEFAULT_FRONTIER)
    }
}

/// Running candidate counter for one search.
#[derive(Debug)]
pub(crate) struct Budget {
    limit: usize,
    spent: usize,
}

impl Budget {
    pub(crate) fn spend(&mut self, n: usize) -> Result<()> {
        self.spent = self.spent.saturating_add(n);
        if self.spent > self.limit {
            Err(Error::SizeGuardExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}
