//! Core groups of surface-knot diagrams, cyclic branched cover presentations,
//! and the invariants used to compare them.
//!
//! A [`Diagram`] yields Wirtinger-type and core presentations. The
//! [`covering`] module builds kernel, branched and direct cover presentations
//! from any base presentation, and [`invariants`] computes abelianizations and
//! homomorphism counts into small finite groups.

pub mod corpus;
pub mod covering;
pub mod diagrams;
pub mod exec;
pub mod frontend;
pub mod invariants;
pub mod matrix;
pub mod presentations;
pub mod words;

pub use covering::{CoverError, CoverSpec, KernelWord};
pub use diagrams::{Arc, Diagram, DiagramError};
pub use exec::Execution;
pub use invariants::{abelian_invariants, hom_count, AbelianInvariants, FiniteGroup};
pub use matrix::IntegerMatrix;
pub use presentations::Presentation;
pub use words::{Letter, Sign, Word};
