//! Finite objects of the base categories `Pos`, `Met`, `Gra` and `MGra`,
//! their morphisms, and the (co)limit constructions the other modules use.

mod constructions;
mod enumerate;
pub mod json;
mod morphism;
mod object;

pub use constructions::{
    canonical_form, coequalizer, copair, coproduct, decode_tuple, discretize, encode_tuple, find_isomorphism,
    induced_subobject, is_isomorphic, is_regular_epi, product, product_many, pullback, quotient, tensor, Cone,
    Discretization,
};
pub(crate) use constructions::shortest_paths;
pub(crate) use enumerate::bump;
pub use enumerate::enumerate_objects;
pub use morphism::{enumerate_constrained, enumerate_morphisms, hom_points, hom_points_map, Morphism};
pub use object::{Backend, FiniteObject, MultiEdges, Structure, Violation, ViolationKind};
