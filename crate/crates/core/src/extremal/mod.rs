//! Sharpness probes on the explicit extremal families and a seeded search
//! for configurations approaching the constants `1/4` and `k/4`.

pub mod probes;
pub mod search;

pub use probes::{
    block_ratio, excess_ratio, niceex_block, normal_schur_pair, dominance_pair, probe_dominance_pair,
    probe_dominance_shifted, probe_niceex, probe_normal_schur_pair, probe_projection, probe_referee, probe_scan,
    project_contraction, referee_detail, referee_pair, referee_projections, schur_niceex_block, triangle_objective,
    ProbeFamily, ProbeResult, ProbeScan, RefereeDetail,
};
pub use search::{
    conjecture_report, search, theorem_objective, Breach, ConjectureReport, ConjectureSummary, RestartSummary,
    SearchConfig, SearchKind, SearchResult, TrajectoryPoint,
};
