//! Lipschitz learning on graphs.
//!
//! Given a weighted graph and real labels on a subset of its vertices (the
//! terminals), this crate extends the labels to every vertex so that the
//! edge gradients `(v(x) - v(y)) / len(x, y)` are as small as possible:
//!
//! * [`solver::comp_inf_min`] minimizes the largest absolute gradient
//!   (a minimal Lipschitz extension);
//! * [`solver::comp_lex_min`] and [`solver::comp_fast_lex_min`] compute the
//!   unique extension whose sorted gradient vector is lexicographically
//!   minimal (the graph analogue of an absolutely minimal Lipschitz
//!   extension);
//! * [`solver::directed_lex_min`] handles directed graphs, where only the
//!   positive part of a gradient along an edge is penalized;
//! * [`l0`] removes a bounded number of outlier labels so that the
//!   remaining ones admit the smallest possible Lipschitz constant.
//!
//! The [`oracle`] module holds slow, independent reference implementations
//! used by the test-suite.

pub mod bounds;
pub mod error;
pub mod graph;
pub mod l0;
pub mod oracle;
pub mod shortest;
pub mod solver;
pub mod steepest;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{
    check_well_posed, enumerate_terminal_gradients, gradient, lex_compare, lex_compare_with,
    DefectReport, Edge, GradientVector, Graph, LexOrder, PartialAssignment, TerminalPath,
    Tolerance, VertexId,
};
pub use solver::{SolveOptions, SolverResult};
