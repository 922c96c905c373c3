//! Analytic Hierarchy Process engine for choosing Design-for-X techniques,
//! bundled with a DfX knowledge base.
//!
//! - [`hierarchy`]: the decision tree, the 1–9 judgment scale and reciprocal matrices.
//! - [`priority`]: principal-eigenvector priorities and consistency ratios.
//! - [`engine`]: whole-hierarchy solves, synthesis, pruning and what-if queries.
//! - [`catalog`]: the DfX catalog, quality attributes, strategy map and published weights.
//! - [`presets`]: bundled hierarchies with judgment sets.
//! - [`report`]: CSV, Markdown and JSON renderings.

pub mod catalog;
pub mod engine;
pub mod hierarchy;
pub mod matrix;
pub mod presets;
pub mod priority;
pub mod report;

pub use engine::{assemble, solve, EngineError, EngineOptions, GlobalWeights, Model, Solution, SolvedModel};
pub use hierarchy::{ComparisonMatrix, DecisionHierarchy, HierarchyDocument, Intensity, JudgmentRecord};
pub use priority::{ConsistencyReport, PriorityResult};
