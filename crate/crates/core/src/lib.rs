//! Testability of forbidden-subgraph properties on graphs of bounded
//! degeneracy, where a tester may only ask for uniformly random neighbors.
//!
//! The crate has two halves. [`characterize`] decides, for a finite family
//! of forbidden patterns, whether freeness from the family admits a
//! constant-query tester with one-sided error, and produces checkable
//! certificates either way. [`oracle`], [`instances`] and [`experiment`]
//! run such testers against generated hosts with exact query accounting,
//! and [`diagnostics`] recomputes the packing structure those testers rely
//! on from full information.

pub mod characterize;
pub mod diagnostics;
pub mod experiment;
pub mod graph;
pub mod instances;
pub mod oracle;
pub mod patterns;
pub mod rng;

pub use graph::{Appearance, Graph, GraphError, Packing};
