//! Degeneration witnesses, separating sets and the degeneration graph of small algebras.

mod certificate;
mod graph;
mod separating;
mod witness;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::catalog::CatalogError;
use crate::symbolic::SymbolicError;

pub use certificate::{Certificate, CertificateKind};
pub use graph::{
    edges_to_dot, node_label, parse_dot_edges, primary_to_dot, DegenerationGraph, DotEdge, Edge, EdgeKind, Node,
    PrimaryEdge, PrimaryGraph, ZERO_NODE,
};
pub use separating::{
    borel_element, check_emptiness, check_membership, check_stability, condition_var, condition_vars, conditions_at,
    generic_tensor, orbit_misses_region, separating_from_spec, symbolic_stability, triangular_order,
    verify_separating_set, EmptinessReport, ExcludedTarget, Parametrization, SeparatingConfig, SeparatingReport,
    SeparatingSet, StabilityReport, SubVerdict, BOREL_VARS,
};
pub use witness::{
    check_necessary_conditions, composable, compose_specs, identity_witness, universal_witness, verify_composition,
    verify_degeneration, witness_from_spec, DegenerationOutcome, DegenerationWitness, NecessaryCheck, NecessaryCondition,
    Refutation, MAX_SPEED,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformationError {
    #[error("basis of {0} is singular over the Laurent field")]
    SingularBasis(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("could not decide: {0}")]
    Undecided(String),
    #[error("unknown graph node `{0}`")]
    UnknownNode(String),
    #[error("edge {0} is not verified")]
    Unverified(String),
    #[error("DOT: {0}")]
    Dot(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

#[cfg(test)]
mod tests;
