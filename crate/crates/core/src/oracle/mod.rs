//! Exact solvers for tiny instances.

mod enumerate;
mod pmssc;
mod precedence;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::ProblemInstance;

pub use enumerate::{exact_pds, exact_pmc};
pub use pmssc::exact_pmssc;
pub use precedence::{exact_pds_precedence, PrecedenceOptimum};

/// Size caps; solvers refuse larger instances instead of running unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLimits {
    pub max_k: usize,
    pub max_m: usize,
    pub max_n: usize,
    /// Search nodes visited before giving up.
    pub node_budget: u64,
}

impl OracleLimits {
    /// Caps for the schedule search.
    pub const PMSSC: OracleLimits = OracleLimits {
        max_k: 6,
        max_m: 3,
        max_n: 10,
        node_budget: 20_000_000,
    };

    /// Caps for labeling enumeration.
    pub const ENUMERATION: OracleLimits = OracleLimits {
        max_k: 12,
        max_m: 4,
        max_n: 64,
        node_budget: 50_000_000,
    };

    pub fn check(&self, inst: &ProblemInstance) -> Result<()> {
        let over = |what: &str, got: usize, cap: usize| {
            Err(Error::LimitsExceeded(format!("{what} = {got} exceeds {cap}")))
        };
        if inst.k() > self.max_k {
            return over("k", inst.k(), self.max_k);
        }
        if inst.m() > self.max_m {
            return over("m", inst.m(), self.max_m);
        }
        if inst.n() > self.max_n {
            return over("n", inst.n(), self.max_n);
        }
        Ok(())
    }
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits::ENUMERATION
    }
}

/// Counts search nodes against the budget.
pub(crate) struct NodeCounter {
    pub visited: u64,
    budget: u64,
}

impl NodeCounter {
    pub fn new(budget: u64) -> Self {
        NodeCounter { visited: 0, budget }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::LimitsExceeded(format!("node budget {} exhausted", self.budget)));
        }
        Ok(())
    }
}
