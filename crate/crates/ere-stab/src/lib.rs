//! Linear stability of the essential part of elliptic relative equilibria of the
//! planar restricted 4-body problem with Lagrangian-triangle primaries.
//!
//! The pipeline runs from masses and the limit position of the massless body
//! ([`model`]) to the 4×4 periodic linear Hamiltonian system and its monodromy
//! ([`essential`]), symplectic normal forms ([`sympl`]), ω-Morse indices by Fourier
//! Galerkin ([`galerkin`]), closed-form e = 0 regions ([`regions`]), degenerate
//! surface tracing ([`curves`]) and parameter sweeps ([`scan`]).

pub mod acceptance;
pub mod cli;
pub mod common;
pub mod curves;
pub mod essential;
pub mod galerkin;
pub mod model;
pub mod regions;
pub mod scan;
pub mod sympl;

pub use common::{Error, Result};
pub use model::{make_params, EssentialParams};
