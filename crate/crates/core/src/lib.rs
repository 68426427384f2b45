//! Kernelization for Feedback Vertex Set.
//!
//! Given a multigraph `G` and a budget `k`, [`kernelize`] produces an
//! equivalent instance with at most `2k² + k` vertices and `4k²` edges, or
//! rejects. The engine behind it is [`min_cycle_cover`], an augmenting-walk
//! algorithm for half-integral minimum s-cycle covers that returns a packing
//! of equal size as an optimality certificate.
//!
//! The [`oracle`] module holds exhaustive reference implementations used by
//! the test suites.

pub mod cyclecover;
pub mod generate;
pub mod kernel;
pub mod multigraph;
pub mod oracle;
pub mod reductions;

pub use cyclecover::{
    augment, doubled_to_fraction, explicit_packing, extract_cover, find_augmenting_walk,
    min_cycle_cover, AugmentingWalk, BasicPacking, CoverError, CoverOutcome, CycleCover,
    ExplicitPacking, Half, PrevTable, SCycle, SearchOutcome, VertexType,
};
pub use kernel::{
    cycle_cover_reduction, iteration_bound, kernelize, size_bounds, KernelError, KernelOutcome,
    KernelStats, Verdict,
};
pub use multigraph::{Component, EdgeId, GraphError, MultiGraph, VertexId};
pub use reductions::{apply_basic_reductions, ReductionLog};
