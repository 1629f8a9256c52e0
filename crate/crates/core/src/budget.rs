//! Limits on exhaustive computations.

use crate::error::{Error, Result};

/// Caps for the exhaustive searches. Exceeding any cap is reported as
/// [`Error::BudgetExceeded`], never as a silent partial result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Backtracking nodes visited by one isometry search.
    pub max_nodes: u64,
    /// Largest ambient dimension an isometry search may run in.
    pub max_ambient_dim: usize,
    /// Largest field order an isometry search may run over.
    pub max_q: u32,
    /// Largest number of vectors (or forms) a linear scan may visit.
    pub max_scan: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 100_000_000, max_ambient_dim: 6, max_q: 5, max_scan: 1_000_000 }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_nodes: u64::MAX, max_ambient_dim: usize::MAX, max_q: u32::MAX, max_scan: u64::MAX }
    }

    pub fn with_nodes(self, max_nodes: u64) -> Self {
        Budget { max_nodes, ..self }
    }

    pub(crate) fn check_search(&self, q: u32, dim: usize) -> Result<()> {
        if dim > self.max_ambient_dim {
            return Err(Error::BudgetExceeded(format!(
                "ambient dimension {dim} exceeds the cap {}",
                self.max_ambient_dim
            )));
        }
        if q > self.max_q {
            return Err(Error::BudgetExceeded(format!("field order {q} exceeds the cap {}", self.max_q)));
        }
        Ok(())
    }

    /// Checks that `q^n` items fit in the scan cap.
    pub(crate) fn check_scan(&self, q: u32, n: usize) -> Result<u64> {
        (q as u64)
            .checked_pow(n as u32)
            .filter(|&t| t <= self.max_scan)
            .ok_or_else(|| Error::BudgetExceeded(format!("scan of {q}^{n} items exceeds the cap {}", self.max_scan)))
    }
}
