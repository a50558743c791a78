//! Exact-arithmetic toolkit for finite convex geometries.
//!
//! The crate realizes geometries of relatively convex sets `Co(R^n, A)`
//! from rational point configurations, decides the axioms of convex
//! geometries and the Caratheodory/Carousel rule family on explicit
//! closure systems, searches for sublattice embeddings between lattices of
//! closed sets, and ships a gallery of small constructions wired into a
//! regression suite. All geometric decisions use exact rational
//! arithmetic.

pub mod closure;
pub mod gallery;
pub mod geometry;
pub mod lattice;
pub mod rules;
pub mod simplex;

pub use closure::{
    is_atomistic, is_closure_family, is_convex_geometry, satisfies_anti_exchange, ClosedFamily,
    ClosureReport, GroundSet, Subset, Witness,
};
pub use geometry::{
    build_geometry, hull_membership, relative_closure, HullCertificate, Point, PointConfig,
};
pub use lattice::{
    build_lattice, count_subgeometry_embeddings, find_subgeometry_embedding, is_strong_extension,
    to_dot, verify_embedding, EmbeddingMap, Lattice,
};
pub use rules::{
    check_caratheodory, check_carousel, check_carousel_implies_caratheodory,
    check_sharp_carousel_2, check_sharp_theorem_elementwise, Rule, RuleVerdict, RuleWitness,
};
pub use simplex::Rat;
