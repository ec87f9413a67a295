//! Near-extremal constructions and searches for small `|A + αA|`.

mod conjecture;
mod construct;
mod search;
mod sweep;

pub use conjecture::{conjectured_constant, ConjecturedConstant, FactorValue};
pub use construct::{box_construction, enumerate_ap, is_proper, omega_construction, Polytope, ProperAP};
pub use search::{
    exhaustive_min, exhaustive_min_with_budget, local_search_min, naive_dilate_size, SearchResult,
    DEFAULT_NODE_BUDGET,
};
pub use sweep::{box_sweep, omega_sweep, strictly_increasing, to_csv, SweepRow};
