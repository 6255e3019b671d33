//! Exact and homology-level verification of Dehn twist relations on
//! Milnor fiber surfaces.
//!
//! The crate has two verification engines. The exact engine ([`words`])
//! represents a boundary-fixing mapping class by its action on the edges of a
//! spine graph, as a groupoid automorphism; two classes are equal iff their
//! reduced actions agree on every edge. The homology engine ([`homology`])
//! represents the same twist as an integer transvection on `H_1` and gives a
//! fast necessary condition. [`surfaces`] ships validated models with exact
//! twist tables, [`dsl`] parses twist-word expressions and relation scripts,
//! [`relations`] generates and verifies the relation catalogue, [`derivation`]
//! replays step-by-step rewriting proofs, and [`milnor`] computes the
//! singularity invariants the surface families come from.

pub mod derivation;
pub mod dsl;
pub mod homology;
pub mod milnor;
pub mod relations;
pub mod surfaces;
pub mod words;

pub use dsl::{RelationStatement, TwistExpr};
pub use homology::{HomologyClass, IntersectionForm, TwistMatrix};
pub use surfaces::{CurveData, SurfaceModel, ValidationReport};

pub use words::{GroupoidMorphism, SpineGraph, Word};
