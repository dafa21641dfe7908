//! Code surgery for CSS codes, computed with chain complexes over F2.
//!
//! A CSS code is a chain complex `C2 → C1 → C0` (Z checks, qubits, X checks).
//! Merges are quotients by subcodes, splits are their transposes, and the
//! induced action on logical operators is read off homology. The
//! [`simverify`] module checks all of this against state-vector simulation.

pub mod catalog;
pub mod chaincomplex;
pub mod csscode;
pub mod error;
pub mod f2linalg;
pub mod io;
pub mod protocols;
pub mod report;
pub mod simverify;
pub mod surgery;

pub use error::{Error, Result};
