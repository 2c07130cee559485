//! Quasi-linear p-Schrödinger operators on weighted graphs.
//!
//! Finite windows of locally summable graphs ([`graph`]), the p-Laplacian and
//! Schrödinger operator ([`operators`]), energy functionals and the ground
//! state representation ([`energy`]), the elementary inequalities behind it
//! ([`inequalities`]), criticality tools ([`criticality`]) and standard model
//! families ([`models`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod criticality;
pub mod energy;
pub mod error;
pub mod graph;
pub mod inequalities;
pub mod math;
pub mod models;
pub mod operators;
pub mod random;

pub use error::{Error, Result};
pub use graph::{Edge, GraphBuilder, GraphFunction, VertexId, VertexSubset, WeightedGraph};
pub use operators::PExponent;

/// Names of the public operations, as reported by front ends.
pub const OPERATIONS: &[&str] = &[
    "degree",
    "boundary",
    "is_connected",
    "phi_p",
    "gradient",
    "p_laplacian",
    "schroedinger_apply",
    "greens_residual",
    "classify",
    "energy",
    "bracket",
    "simplified_energy",
    "simplified_energy_1",
    "simplified_energy_2",
    "simplified_energy_3",
    "gsr_check",
    "picone_residual",
    "corollary_bounds_check",
    "ineq2_sides",
    "ineq1_check",
    "ineq34_check",
    "ineq5_check",
    "lindqvist_check",
    "constant_cp",
    "scan_equivalence",
    "capacity",
    "null_sequence_search",
    "ground_state_trend",
    "hardy_witness",
    "harnack_constant",
    "harnack_verify",
    "proper_subset_check",
    "liouville_check",
    "gsr_criticality_transfer",
    "nat_line",
    "int_line",
    "grid2d",
    "weighted_line",
    "hardy_u",
    "alpha_seq",
    "gsr_display_check",
];
