//! Line polar Grassmann codes of orthogonal type over odd finite fields.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the algebra:
//! finite field arithmetic, dense linear algebra over `F_q`, canonical
//! quadratic/alternating forms, enumeration of the polar geometry of
//! totally singular lines, the code `P(n,2)` built from it, and the closed
//! form point counts used to pin down its minimum distance.
//!
//! File formats, parallel drivers and the command line tool live in the
//! `polarcode` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod code;
pub mod counting;
pub mod error;
pub mod field;
pub mod forms;
pub mod geometry;
pub mod matrix;
pub mod sample;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElement};
pub use matrix::{Matrix, Subspace};
