//! Resource caps shared by all decision procedures.

use std::time::{Duration, Instant};

use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Config {
    /// Maximum number of Venn regions (and group cells) in one decomposition.
    pub max_venn: usize,
    /// Maximum number of types or augmented-type candidates.
    pub max_types: usize,
    /// Maximum number of search nodes of the Boolean search in the solver.
    pub max_branches: usize,
    /// Maximum number of branch-and-bound nodes per integer feasibility check.
    pub max_bb_nodes: usize,
    /// Multiplier `d` of the sparse support bound.
    pub sparse_multiplier: u64,
    /// Maximum number of interpretations inspected by the model enumerator.
    pub max_models: u64,
    /// Maximum number of super-spoiler candidates.
    pub max_spoilers: usize,
    /// Maximum number of elements of a constructed interpretation.
    pub max_elements: usize,
    /// Worker threads for independent consistency checks (1 = sequential).
    pub jobs: usize,
    pub deadline: Option<Instant>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_venn: 1 << 16,
            max_types: 1 << 14,
            max_branches: 200_000,
            max_bb_nodes: 20_000,
            sparse_multiplier: 2,
            max_models: 50_000_000,
            max_spoilers: 100_000,
            max_elements: 200_000,
            jobs: 1,
            deadline: None,
        }
    }
}

impl Config {
    pub fn with_timeout(mut self, secs: u64) -> Self {
        self.deadline = Some(Instant::now() + Duration::from_secs(secs));
        self
    }

    pub fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::ResourceExceeded("time limit".into())),
            _ => Ok(()),
        }
    }
}
