//! Virtual quadratic spaces over finite fields.
//!
//! A virtual quadratic space is a triple `(V, Q, U)`: a non-degenerate
//! quadratic space `(V, Q)` together with a subspace `U`. Its isometries are
//! the isometries of `V` fixing `U^⊥` pointwise. Over finite fields these
//! groups have characteristic-independent orders, and non-degenerate virtual
//! spaces of dimension `n` fall into two classes for even `n` and one for odd.
//!
//! The crate provides exact finite-field arithmetic ([`field`]), linear
//! algebra ([`linalg`]), quadratic spaces ([`quad`]), the embedding and
//! minimalization constructions ([`embedding`]), classification
//! ([`classify`]) and isometry-group enumeration ([`iso_groups`]).

pub mod budget;
pub mod classify;
pub mod embedding;
pub mod error;
pub mod field;
pub mod io;
pub mod iso_groups;
pub mod linalg;
pub mod quad;

pub use budget::Budget;
pub use error::{Error, Result};
pub use field::{Fe, Field, FieldElement, FieldSpec};
pub use linalg::{Matrix, Subspace, Vector};
pub use quad::{QuadraticSpace, VirtualQuadraticSpace};
