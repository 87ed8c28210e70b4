//! Finitely generated abelian groups and the integer linear algebra they
//! rest on: BigInt matrices with Smith normal form, group arithmetic
//! (tensor, Tor, Hom, Ext), homomorphism enumeration, and chain-complex
//! homology with universal coefficients.

pub mod matrix;
pub mod group;
pub mod hom;
pub mod homology;

pub use group::FgAbGroup;
pub use hom::GroupHom;
pub use homology::ChainComplex;
pub use matrix::{IntMatrix, Smith};
