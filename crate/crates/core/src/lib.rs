//! Finite-model verification of uniformly locally bounded spaces.
//!
//! The crate models uniform structures and bornologies on finite carriers,
//! the topology of uniform biconvergence on bounded sets for finite map sets,
//! the four group uniformities, and three concrete infinite models with exact
//! arithmetic: order automorphisms of the rationals, affine-at-infinity
//! permutations of the integers, and finite measure algebras.

pub mod born;
pub mod error;
pub mod gen;
pub mod groupunif;
pub mod mapspace;
pub mod qorder;
pub mod rational;
pub mod relalg;
pub mod report;
pub mod sigma;
pub mod space;
pub mod suite;
pub mod symz;
pub mod ulb;
pub mod unif;

pub use error::{Error, Result};
