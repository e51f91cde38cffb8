//! Evidence harnesses: exhaustive lattice enumeration and seeded random
//! search over curves whose shadows have prescribed topology.
//!
//! Everything here checks lattice or small-rational instances only; a clean
//! report is evidence for a statement about all curves, not a proof.

mod convex;
mod lattice;
mod min_vertex;
mod path_cycles;
mod strand_suite;
pub mod symmetry;
mod tree_cycles;

use std::collections::BTreeMap;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::{classify, shadow_complex, TopologyReport};
use crate::curve::PolyChain;

pub use convex::search_convex_shadow_paths;
pub use lattice::{
    corners, lattice_vertices, sample_closed_walk, sample_open_walk, sample_planar_path,
    walk_chain,
};
pub use min_vertex::enumerate_min_vertex_paths;
pub use path_cycles::search_path_shadow_cycles;
pub use strand_suite::{run_strand_suite, StrandSuiteConfig, StrandSuiteReport};
pub use tree_cycles::{find_tree_shadow_cycle, min_branch_point_census};

/// Default cap on the a-priori size of an exhaustive search.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

/// Budget from `SHADOWLAB_BUDGET`, falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u64 {
    std::env::var("SHADOWLAB_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search space estimate {estimate} exceeds budget {budget}")]
    BudgetExceeded { estimate: u64, budget: u64 },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    PathShadowCycles,
    MinVertexPaths,
    TreeShadowCycles,
    ConvexShadowPaths,
    BranchCensus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchConfig {
    pub mode: Mode,
    /// Per-axis bound of the search box `{0..grid_max}^3`.
    pub grid_max: i64,
    /// Walk length for lattice cycles, vertex count for chains.
    pub max_length: usize,
    /// Number of random instances; 0 asks for exhaustive enumeration.
    pub sample_count: u64,
    pub seed: u64,
    /// Cap on the estimated size of exhaustive searches.
    pub budget: u64,
}

impl SearchConfig {
    pub fn new(mode: Mode, grid_max: i64, max_length: usize, sample_count: u64, seed: u64) -> Self {
        SearchConfig {
            mode,
            grid_max,
            max_length,
            sample_count,
            seed,
            budget: DEFAULT_BUDGET,
        }
    }

    fn expect_mode(&self, mode: Mode) -> Result<(), SearchError> {
        if self.mode != mode {
            return Err(SearchError::InvalidConfig(format!(
                "mode {:?} passed to the {:?} search",
                self.mode, mode
            )));
        }
        if self.grid_max < 1 {
            return Err(SearchError::InvalidConfig("gridMax must be at least 1".into()));
        }
        Ok(())
    }

    fn check_budget(&self, estimate: u64) -> Result<(), SearchError> {
        if estimate > self.budget {
            Err(SearchError::BudgetExceeded {
                estimate,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub config: SearchConfig,
    pub instances_checked: u64,
    /// Instances distinct up to symmetry and translation, where tracked.
    pub distinct_instances: Option<u64>,
    pub counterexamples: Vec<PolyChain>,
    pub witnesses: Vec<PolyChain>,
    pub histogram: BTreeMap<String, u64>,
    /// Mode-specific counters.
    pub stats: BTreeMap<String, u64>,
    /// Wall-clock time; left out of the JSON so reports stay reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchReport {
    fn new(config: &SearchConfig) -> Self {
        SearchReport {
            config: config.clone(),
            instances_checked: 0,
            distinct_instances: None,
            counterexamples: Vec::new(),
            witnesses: Vec::new(),
            histogram: BTreeMap::new(),
            stats: BTreeMap::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn bump(&mut self, key: &str, by: u64) {
        *self.histogram.entry(key.to_string()).or_default() += by;
    }

    fn stat(&mut self, key: &str, by: u64) {
        *self.stats.entry(key.to_string()).or_default() += by;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Independent generator for sample `index`.
pub(crate) fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Topology reports of the three shadows of a spatial chain.
pub fn shadow_reports(chain: &PolyChain) -> [TopologyReport; 3] {
    std::array::from_fn(|k| {
        let cx = shadow_complex(chain, k + 1).expect("valid spatial chain");
        classify(&cx)
    })
}

pub(crate) fn triple_key(reports: &[TopologyReport; 3]) -> String {
    reports
        .iter()
        .map(|r| r.classification.name())
        .collect::<Vec<_>>()
        .join(",")
}
