//! Supersymmetric composites of one-dimensional Dirac operators.
//!
//! The crate is `no_std` with `alloc`. It covers the Darboux transformation
//! engine ([`darboux`]), the 4×4 composite Hamiltonian and its two-velocity
//! rotation ([`composite`]), the spectral map 𝔼±(λ) ([`spectrum`]), the two
//! closed-form models ([`models`]) and an independent numerical verifier built
//! on [`numkit`] and [`dirac`].
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod composite;
pub mod darboux;
pub mod dirac;
pub mod error;
pub mod models;
pub mod numkit;
pub mod spectrum;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
