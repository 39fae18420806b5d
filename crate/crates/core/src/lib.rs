//! Exact computations with mod-p étale motivic cohomology of function fields
//! over finite fields: Kato symbols and differential forms, the ramification
//! filtration and residues on k0(t), and invariants of quadratic forms in
//! characteristic 2.

#![allow(clippy::needless_range_loop, clippy::type_complexity, clippy::wrong_self_convention)]

pub mod cli;
pub mod cohomology;
pub mod error;
pub mod factor;
pub mod form;
pub mod gf;
pub mod invariants;
pub mod linalg;
pub mod membership;
pub mod mpoly;
pub mod parse;
pub mod quadform;
pub mod sample;
pub mod suite;
pub mod tower;
pub mod upoly;

pub use error::{Error, Result};
pub use gf::Gf;
pub use tower::{Elem, FieldElement, Tower};
pub use upoly::Field;
