//! Exceptional collections of line bundles on smooth complete toric
//! varieties: exact lattice arithmetic, polytopes and normal fans, toric
//! line-bundle cohomology, Hom-quiver analysis of candidate collections, and
//! the numerical wall criterion.

pub mod cohomology;
pub mod dataset;
pub mod divisor;
pub mod fan;
pub mod intersection;
pub mod lattice;
pub mod polytope;
pub mod quiver;
pub mod report;
