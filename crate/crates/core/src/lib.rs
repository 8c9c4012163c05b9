//! Smooth complete toric varieties as unimodular simplicial fans.
//!
//! Fans are stored with explicit integer rays and maximal cones. From there
//! the crate computes primitive collections and relations, Mori cone
//! generators and extremality, the Fano test, star subdivisions and their
//! inverses, and the presentations used by the classification tables in
//! [`catalog`]. Every computation is exact.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod audit;
pub mod catalog;
pub mod error;
pub mod fan;
pub mod lattice;
pub mod linalg;
pub mod mori;
pub mod oracle;
pub mod presentation;
pub mod primitive;
pub mod simplex;
pub mod surgery;

pub use catalog::{catalog, instances, instantiate, AlphaRule, FamilyId, FamilyInstance, Group, Section};
pub use error::{Error, OracleError, PresentationError, Result};
pub use fan::{validate, Fan, Location, RelationBasis, SmoothCompleteFan, ValidationReport, Witness};
pub use lattice::{LatticeVector, RaySet, MAX_RAYS};
pub use mori::{
    contraction_reports, curve_class, detect_divisor_to_curve, is_extremal, is_fano,
    is_splitting_fan, ContractionKind, ContractionReport, CurveClass, MoriCone,
};
pub use presentation::{isomorphic, presentation_of, realize, realize_with_seed, Presentation, Relation};
pub use primitive::{primitive_collections, primitive_relation, primitive_relations, PrimitiveCollection, PrimitiveRelation};
pub use surgery::{blow_down, blow_down_relation, blow_up, same_fan_up_to_ray_order};
