//! Parking on random Cayley trees and mappings, the frozen Erdős–Rényi
//! process, the couplings between them, exact enumeration and numerics.

pub mod acceptance;
pub mod coupling;
pub mod enumerate;
pub mod error;
pub mod frozen;
pub mod graph;
pub mod numerics;
pub mod parking;
pub mod rng;

pub use error::{Error, Result};
