//! Exact cohomology and higher Massey products.
//!
//! Two families of differential graded algebras are covered: Chevalley–Eilenberg
//! complexes of positively graded nilpotent Lie algebras, and Koszul complexes of
//! monomial rings (which include the Stanley–Reisner face rings, whose cohomology
//! is the cohomology of the moment-angle complex).

pub mod dga;
pub mod error;
pub mod face;
pub mod generators;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod massey;
pub mod poly;
pub mod resolution;
pub mod ring;

pub use error::{Error, Result};
pub use linalg::{Field, Scalar};
