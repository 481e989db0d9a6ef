//! Exact combinatorics of finite-type root systems, Dynkin foldings, the
//! McKay correspondence, Garside normal forms for Artin groups, and a
//! polynomial model of surface deformation families driven by all of these.

pub mod artin;
pub mod diagram;
pub mod family;
pub mod folding;
pub mod linalg;
pub mod mckay;
pub mod poly;
pub mod roots;
pub mod seed;
pub mod weyl;

pub use artin::{ArtinWord, NormalForm};
pub use diagram::{DynkinDiagram, TypeTag};
pub use family::{
    BaseModel, BaseShape, BraidFlopReport, CurveConfiguration, CurveEntry, FlopRecord, Section,
};
pub use folding::{DiagramAutomorphism, Folding};
pub use mckay::{AffineClassification, CharacterData, GroupKind, MatrixGroup, McKayGraph};
pub use poly::RatPoly;
pub use roots::{Root, RootSystem, Sign, SurfaceLattice};
pub use weyl::WeylElement;
