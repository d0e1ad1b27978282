//! Residual affine subspaces of the shifted root hyperplane arrangement
//! `{α(v) = k_α}` attached to a root system and a Weyl-invariant parameter
//! function, computed in exact rational arithmetic, together with the rank
//! one residue decomposition of the trace density `η`.

// `AffineFlat` caches its center in a `OnceLock`; ordering and hashing use
// only the canonical equations, so flats are sound map keys.
#![allow(clippy::mutable_key_type)]

pub mod arrangement;
pub mod dynkin;
pub mod error;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod plancherel1;
pub mod rational;
pub mod residual;
pub mod rootsys;

pub use arrangement::{AffineFlat, IndexReport, Intersection};
pub use error::{Error, Result};
pub use rootsys::{ParameterFunction, RootSystem};
