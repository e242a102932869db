//! Exact computational homological algebra over finite-dimensional graded
//! algebras.
//!
//! The crate builds up from dense exact linear algebra (`field`, `matrix`)
//! through graded algebras presented by structure constants (`algebra`) and
//! semifree differential-graded modules with their cones, shifts and
//! tensors (`dgmodule`), to Hom complexes, Ext rings with Yoneda products
//! and the P-object / spherical classifiers (`hom`), the spherical twist
//! and P-twist endofunctors (`twist`), the ambient degeneration model with
//! its long-exact-sequence oracle (`ambient`), and machinery for deciding
//! and certifying quasi-isomorphism (`equiv`).

pub mod error;
pub mod field;
pub mod matrix;
pub mod algebra;
pub mod dgmodule;
pub mod hom;
pub mod equiv;
pub mod twist;
pub mod ambient;
pub mod sampling;

pub use algebra::{AlgebraElement, GradedAlgebra};
pub use dgmodule::{GradedComplex, ModuleRef, Morphism, SemifreeModule};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use matrix::Matrix;
