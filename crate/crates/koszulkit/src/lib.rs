//! Exact-arithmetic toolkit for N-homogeneous algebra presentations:
//! word orders, reduction operators and their lattice, side-confluence
//! analysis, Koszul complex construction, and verification of the
//! left-bound contracting homotopy.

pub mod error;
pub mod expr;
pub mod koszul;
pub mod linalg;
pub mod presentation;
pub mod redop;
pub mod word;

pub use error::KoszulError;
