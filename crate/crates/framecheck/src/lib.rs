//! Deterministic validation and scoring engine for timber-frame
//! structural scene graphs.
//!
//! The engine decides whether a structure is physically valid via a
//! ten-test suite over axis-aligned member boxes, scores generated
//! structures against references with topological and visual fidelity
//! metrics, produces structured feedback, and aggregates corpus-level
//! failure analytics. Everything is simulation-free and deterministic:
//! identical inputs produce byte-identical reports at any worker count.
//!
//! Built with data-parallel inner loops (pairwise contact filtering,
//! voxel fills, batch validation) behind the default `parallel` feature;
//! disabling it yields a fully sequential build with identical results.

pub mod contact;
pub mod corpus;
pub mod fidelity;
pub mod fixtures;
pub mod geom;
pub mod params;
pub mod plan;
pub mod scene;
pub mod span_table;
pub mod validate;

pub use contact::{compute_support, ContactParams, SupportState};
pub use corpus::{lod_map, machine_lines, run_corpus, CorpusReport};
pub use fidelity::{
    census_accuracy, composite_topo, hungarian_match, joint_pass, topo_scores, visual_scores,
    voxel_iou, FidelityParams, TopoScores, VisualScores,
};
pub use fixtures::{apply_mutation, generate_gable, FixtureSpec, Mutation, MutationKind};
pub use geom::Box3;
pub use params::ValidationParams;
pub use plan::{check_plan, topo_order, PlanContext, PlanDocument};
pub use scene::{classify_member, parse_scene, serialize_scene, Category, Member, Scene};
pub use span_table::SpanTable;
pub use validate::{format_feedback, run_suite, SuiteReport, TestId, Violation};
