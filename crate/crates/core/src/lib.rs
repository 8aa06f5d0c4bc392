//! Exact-sequence calculus for section algebras of bundles over spheres.
//!
//! The building blocks are exact computations with finitely generated abelian
//! groups ([`group`], [`hom`], [`localize`]), classification of extensions
//! ([`extension`]), and the solver for the long exact Wang sequence of a
//! bundle over `S^k` ([`wang`]) together with built-in coefficient data
//! ([`tables`]).

pub mod extension;
pub mod finite;
pub mod group;
pub mod hom;
pub mod localize;
pub mod matrix;
pub mod snf;
pub mod tables;
pub mod wang;

pub use extension::{
    brute_force_extensions, classify_by_primes, enumerate_by_cocycles, enumerate_extensions,
    ext_classes, ExtensionAnswer, ExtensionError, ExtensionProblem,
};
pub use group::{direct_sum, group_from_presentation, FgGroup, GroupError};
pub use hom::{hom_invariants, hom_well_defined, GroupHom, HomError, HomInvariants};
pub use localize::{localize, localize_hom, LocalizationError, LocalizationRing};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithDecomposition};
