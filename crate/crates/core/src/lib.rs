//! Exact order theory on finitely generated subgroups of Q^n: rational
//! linear algebra with Farkas certificates, formal square-root
//! arithmetic, positive cones with their semiclosed closure,
//! lexicographic hyperplane order stacks, linear extensions of cone
//! orders, and a text DSL with a CLI front end.

pub mod cli;
pub mod cone;
pub mod dsl;
pub mod error;
pub mod extension;
pub mod freal;
pub mod group;
pub mod linalg;
pub mod lp;
pub mod stack;

pub use cone::{closure_contains, validate_cone, ClosureCone, ConeReport, ConeSpec};
pub use error::{Error, Result};
pub use extension::{
    archimedean_witness, check_hyperplane_condition, directed_join, intersection_harness,
    intersection_harness_seq, is_extension, product_leq, random_extension, separating_extension,
    ExtensionReport, HarnessReport, PointReport, ProductOrder,
};
pub use freal::{nth_prime, squarefree_decompose, FormalReal, Functional};
pub use group::{canonical_rep, psi, CanonicalRep, GroupPresentation};
pub use linalg::{gauss_kernel, hnf_solve, in_span, same_span, QMatrix, QVec, Q, Z};
pub use lp::{certificate_refutes, lp_feasible, witness_satisfies, LpResult};
pub use stack::{
    holder_map, holder_value, is_archimedean, is_linear_on, orders_equal, zajceva_stack,
    Clarified, OrderEquality, OrderStack, Sign,
};
