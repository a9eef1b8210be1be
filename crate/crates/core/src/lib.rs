//! Edge-indexed graphs, deformation moves, coverings and commation search.

pub mod commation;
pub mod corpus;
pub mod covers;
pub mod eig;
pub mod error;
pub mod modular;
pub mod rigidity;
pub mod moves;
pub mod sieve;

pub use covers::CoveringMap;
pub use eig::{isomorphic, EIGraph, IsoWitness};
pub use error::{Error, Result};
