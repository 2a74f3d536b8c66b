//! Exact chromatic polynomials and Whitney numbers of the first kind for
//! partially filled group expansions `𝔊·Γ^(X)` of simple graphs.
//!
//! The Whitney numbers of such an expansion are polynomials in the group
//! order γ. This crate computes them symbolically from the base graph and
//! checks them against brute-force enumeration over concrete gain graphs
//! and against the rank function of the frame matroid.

pub mod chromatic;
pub mod cli;
pub mod error;
pub mod graph;
pub mod group;
pub mod matroid;
pub mod poly;
pub mod whitney;

pub use chromatic::{
    chromatic_full, chromatic_graph, chromatic_partial, chromatic_subset_expansion, nbc_count, nbc_count_with_order,
    SweepMode, SweepOptions,
};
pub use error::{Error, Result};
pub use graph::{parse_graph, SimpleGraph, VertexSet};
pub use group::{parse_group, EdgeSubset, FiniteGroup, GainEdge, GainGraph};
pub use matroid::{characteristic_from_ranks, classify_circuit, cross_check, CircuitClass, CheckFamily, CrossCheckReport};
pub use poly::{binom, expansion_substitute, BivariatePolynomial, GammaPolynomial, IntPolynomial, UnitShift};
pub use whitney::{
    check_stirling_identity, check_vandermonde, dowling_whitney, lower_whitney, special_coefficients, whitney_full,
    whitney_graph, whitney_partial, StirlingTable, WhitneyEngine, WhitneyVector,
};
