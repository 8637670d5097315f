//! Filtered and bifiltered free resolutions over the (homogenized) Weyl algebra,
//! restriction of D-modules along `t = 0`, and presentations of algebraic local
//! cohomology for quasi-homogeneous isolated singularities.

pub mod error;
pub mod filtration;
pub mod groebner;
pub mod resolution;
pub mod restriction;
pub mod localcohom;
pub mod weyl;

pub use error::{Error, Result};
pub use filtration::{ModuleElement, OrderKind, OrderSpec, PositionStrategy, ShiftedFreeModule};
pub use weyl::{AlgebraKind, MonomialKey, Operator, Rat, Signature, Term};
