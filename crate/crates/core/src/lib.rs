//! Discretized one-dimensional model spaces, optimal transport, diffusion
//! semigroups and numerical checks of Sobolev–Kantorovich type inequalities.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod calculus;
pub mod error;
pub mod inequality;
pub mod linalg;
pub mod measure;
pub mod params;
pub mod quadrature;
pub mod semigroup;
pub mod space;
pub mod special;
pub mod transport;

pub use error::{Error, Result};
pub use inequality::{InequalityReport, Verdict};
pub use measure::{Density, SignedMeasure};
pub use params::InequalityParams;
pub use space::{Space1D, SpaceKind, SpaceRef};
