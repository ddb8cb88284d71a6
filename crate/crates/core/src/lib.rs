//! Exact homology-lattice computations for rational and ruled symplectic 4-manifolds.
//!
//! The crate classifies integral classes (exceptional, `K`-null spherical,
//! Lagrangian spherical), reduces them to normal form with Cremona-type
//! reflections, tests symplectic-cone membership and factors lattice
//! isometries into words of Lagrangian Dehn twists. Everything is exact:
//! integers are arbitrary precision and forms use normalized rationals.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]

#[macro_use]
extern crate alloc;

pub mod cone;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod parse;
pub mod reduction;
pub mod twist;
pub mod word;

pub use num_bigint::BigInt as Int;
pub use num_rational::BigRational as Rational;

pub use error::{LatticeError, Result};
pub use lattice::{
    form_pairing, is_characteristic, pairing, reflect, reflection_matrix, FormClass, HomClass,
    LatticeModel,
};
pub use matrix::IntMatrix;
pub use parse::{parse_class, parse_form, print_class, print_form, ParseError};
pub use word::ReflectionWord;
