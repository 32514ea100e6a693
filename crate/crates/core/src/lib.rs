//! Three-well Bose-Hubbard condensate: exact diagonalization, classification of
//! eigenstates in the torus (dynamical) representation, idealized oscillator
//! matrix elements and two-eigenstate oscillation dynamics.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] builds the Fock basis and the Hamiltonian,
//! * [`eigen`] diagonalizes it,
//! * [`dynrep`] evaluates eigenstates on the angle torus, classifies them and
//!   groups them into ladder families,
//! * [`analytic`] holds the idealized wave functions and their closed-form
//!   number-operator matrix elements,
//! * [`dynamics`] builds superpositions and their particle-number trajectories,
//! * [`io`] covers configuration, state specs, the eigendata cache and CSV,
//! * [`session`] ties the pieces together for the command-line pipeline.

pub mod analytic;
pub mod dynamics;
pub mod dynrep;
pub mod eigen;
pub mod error;
pub mod io;
pub mod matrix;
pub mod model;
pub mod session;

pub use error::{Error, Result};
