//! Simulation of the quantum kicked top and its few-qubit exact solutions.
//!
//! The crate covers the Floquet engine on the permutation-symmetric subspace
//! ([`symspace`]), entanglement measures ([`measures`]), closed-form dynamics
//! for three and four qubits ([`exact3`], [`exact4`]), the classical map
//! ([`classical`]), Husimi distributions ([`husimi`]) and a readout-corrected
//! three-qubit tomography pipeline ([`tomo`]).

pub mod chebyshev;
pub mod classical;
pub mod error;
pub mod exact3;
pub mod exact4;
pub mod husimi;
pub mod measures;
pub mod symspace;
pub mod tomo;

pub use error::{Error, Result};
