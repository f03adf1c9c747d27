//! Stretch measurement, Monte-Carlo estimation, structural audits and
//! exhaustive oracles.

mod audit;
mod brute;
mod profile;
mod stretch;

pub use audit::{audit_first_level, audit_star_partition, AuditCheck, AuditReport, CheckStatus};
pub use brute::{brute_force_best_tree, count_spanning_trees, BRUTE_FORCE_MAX_VERTICES};
pub use profile::{decomposition_stretch_profile, DepthRow, StretchProfile, PROFILE_BUDGET_CONSTANT};
pub use stretch::{
    edge_graph_distances, edge_stretches, expected_stretch_mc, stretch_report, trial_seed, EdgeStretch, KahanSum,
    McEstimate, StretchReport,
};
