//! Exact verification, classification and decomposition of polynomial
//! orthogonal pairs between projective spaces carrying Hermitian forms
//! `H_{r,s,t}` of arbitrary signature.

pub mod biform;
pub mod cli;
pub mod error;
pub mod exactla;
pub mod exactnum;
pub mod format;
pub mod gen;
pub mod numcheck;
pub mod pairs;
pub mod poly;

pub use biform::{BiForm, Signature};
pub use error::{Error, Result};
pub use exactla::GqMatrix;
pub use exactnum::{Gq, GaussianRational, Rational};
pub use pairs::{Classification, Decomposition, Kind, MapDecomposition, PolyMapPair};
pub use poly::{Monomial, MultiPoly};
