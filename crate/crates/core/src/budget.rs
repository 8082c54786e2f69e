//! Resource limits shared by every computation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::DEFAULT_SUBGROUP_BOUND;

/// Environment variable overriding the memory budget, in MiB.
pub const BUDGET_ENV: &str = "ARTIN_TATE_BUDGET_MB";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budget {
    /// Largest dense matrix allowed, in MiB of `u64` entries.
    pub memory_mb: u64,
    /// Highest cohomological degree computed through the bar complex.
    pub degree_cap: usize,
    /// Largest group order for subgroup-lattice enumeration.
    pub subgroup_bound: usize,
    /// Largest number of free generators in one term of a resolution.
    pub resolution_rank: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            memory_mb: 1024,
            degree_cap: 4,
            subgroup_bound: DEFAULT_SUBGROUP_BOUND,
            resolution_rank: 5000,
        }
    }
}

impl Budget {
    /// Defaults, with the memory limit taken from [`BUDGET_ENV`] when set.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(mb) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
        {
            b.memory_mb = mb;
        }
        b
    }

    pub fn check_matrix(&self, what: &str, rows: usize, cols: usize) -> Result<()> {
        let bytes = (rows as u128) * (cols as u128) * 8;
        let limit = (self.memory_mb as u128) << 20;
        if bytes > limit {
            return Err(Error::budget(
                format!("{what} ({rows}x{cols} matrix, bytes)"),
                bytes,
                limit,
            ));
        }
        Ok(())
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.degree_cap {
            return Err(Error::budget(
                "cohomological degree",
                degree as u128,
                self.degree_cap as u128,
            ));
        }
        Ok(())
    }
}
