//! Hypergraph girth, copy systems, pretrains and trains, with explicit partite
//! constructions and exhaustive verification oracles.

pub mod budget;
pub mod construct;
pub mod copy_system;
pub mod error;
pub mod forest;
pub mod hypergraph;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod pretrain;
pub mod train;

pub use budget::Budget;
pub use error::{Error, Result};
pub use hypergraph::{
    enumerate_copies, girth, girth_exceeds, is_a_intersecting, is_strongly_induced, shortest_edge_cycle, validate,
    CopyMode, EdgeCycle, EdgeId, Embedding, Hypergraph, Partite, RawHypergraph, RawPartite, Sub, Vertex, Violation,
};
pub use partition::Partition;
pub use copy_system::{
    classify_cycle, cycle_metrics, find_master_copy, girth_of_system_exceeds, has_clean_intersections,
    semitidy_equivalence_check, Connector, CopyRef, CopySystem, CycleClass, CycleOfCopies, GirthReport, Threshold,
};
pub use pretrain::{
    big_cycle_order, classify_big_cycle, derive, find_supreme_copy, frak_girth_pretrain_exceeds,
    frak_girth_system_exceeds, is_extension, is_scattered, semidirect_extend, wagon_assimilation, BigConnector, BigCycle,
    BigCycleClass, BigGirthReport, Pretrain, PretrainCopySystem,
};
pub use train::{
    frak_girth_seq_exceeds, frak_girth_seq_system_exceeds, lift_one_extension, validate_train, verify_revision,
    GirthSequence, Quasitrain, QuasitrainCopySystem, Train,
};
pub use oracle::{
    edge_arrows, min_hj_exponent, min_product_ramsey, vertex_arrows, ArrowReport, SearchOptions,
};
pub use construct::{Budgets, Ctx, Flavor, FlavoredSystem, Handle, Picture, Placement, Structure};
pub use forest::{forest_extension, is_forest, is_partial_forest, terminal_and_initial, PartialForest};
pub use io::{emit, export_dot, parse, Body, Document, Mode};
