//! Upper Banach density, syndetic and piecewise syndetic structure, and
//! difference sets `A − B` in `Z` and `Z^d`, computed on finite windows with
//! independently re-checkable certificates.

pub mod bohr;
pub mod cert;
pub mod cli;
pub mod density;
pub mod error;
pub mod folner;
pub mod jin;
pub mod lattice;
pub mod real;
pub mod rng;
pub mod setmodel;
pub mod structure;

pub use error::{Error, Result};
