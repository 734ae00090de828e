//! Exact computer algebra for Sullivan models over ℚ.
//!
//! The crate provides free graded-commutative algebras with Koszul signs,
//! differentials and their cohomology, morphisms and their induced maps,
//! contractible-pair elimination, quotient-ring dimension counts, and
//! constructors for the models of the projectivised tangent bundle of ℂPⁿ
//! and the flag manifold U(n+1)/U(1)×U(1)×U(n−1).

pub mod algebra;
pub mod cdga;
pub mod expr;
pub mod linalg;
pub mod models;
pub mod reduction;
pub mod report;
pub mod ring;

pub use algebra::{AlgebraError, Element, Generator, GradedAlgebra, Homogeneity, Monomial};
pub use cdga::{BettiTable, CdgaError, CdgaMorphism, DegreeMap, FreeCdga, InducedCohomologyMap};
pub use expr::{
    load_model, parse_element, print_element, save_model, DocumentError, ExprError, ModelDocument,
};
pub use linalg::{kernel_basis, rank, solve_in_span, LinalgError, Rational, SparseMatrix};
pub use models::{BlockPartition, BuiltinModel, ChernData, ModelError};
pub use reduction::{Cascade, ContractiblePair, Elimination, EliminationStep, ReductionError};
pub use report::CheckReport;
pub use ring::{RingError, RingPresentation};
