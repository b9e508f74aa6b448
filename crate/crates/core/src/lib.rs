//! Exact computation with finite commutative unital rings and the geometry
//! built on top of them: prime spectra with the Zariski topology,
//! localizations, presheaves of rings on finite topological spaces,
//! sheafification by projective limits, stalks, and affine schemes.
//!
//! Everything is table-driven and finite, so every claim the library makes
//! (an ideal is prime, a presheaf is a sheaf, a comparison map is an
//! isomorphism, ...) is established by exhaustive checking and reported with
//! a concrete witness when it fails.

pub mod corpus;
pub mod diagram;
pub mod error;
pub mod export;
pub mod hom;
pub mod ideal;
pub mod limits;
pub mod localize;
pub mod morphism;
pub mod presheaf;
pub mod report;
pub mod ring;
pub mod scheme;
pub mod sheaf_axioms;
pub mod sheafify;
pub mod spec_space;
pub mod stalk;
pub mod topology;

pub use error::{Error, Result};
pub use limits::Limits;
pub use ring::{FiniteRing, RingElement};
