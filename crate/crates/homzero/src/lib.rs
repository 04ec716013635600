//! Exact homological algebra for finite semigroups with zero.
//!
//! The crate computes 0-homology groups of a finite semigroup with zero from
//! its multiplication table, with coefficients in a 0-module presented by
//! integer action matrices on a finitely generated abelian group. For
//! semigroups that are categorical at zero, these groups coincide with the
//! Eilenberg–MacLane homology of the (generally infinite) 0-reflector, which
//! makes homology of finitely presented semigroups computable from a finite
//! model. The `presentation` module builds such finite models from defining
//! relations, and `pipeline` chains the whole construction together.
//!
//! All group arithmetic is exact: matrices carry arbitrary-precision integers
//! and every reported group is an invariant-factor decomposition.

pub mod abelian;
pub mod homology;
pub mod pipeline;
pub mod presentation;
pub mod reflector;
pub mod semigroup;
pub mod zmodule;

pub use abelian::{AbelianGroupClass, ChainComplexFG, FGAbelianGroup, IntMatrix};
pub use semigroup::{FiniteSemigroup, FiniteZeroSemigroup};
pub use zmodule::ZeroModuleAction;
