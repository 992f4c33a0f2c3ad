//! The two worked systems: the Darboux-transformed free particle and the
//! Pöschl-Teller model with the special mass U₀√(2κ−1).

pub mod free_particle;
pub mod poschl_teller;

pub use free_particle::{fp_assemble, fp_reflection, FreeParticleAssembly, FreeParticleModel};
pub use poschl_teller::{
    pt_bound_states, pt_composite_levels, pt_scattering, BoundState, CompositeLevel, PoschlTellerModel, PtScattering,
    StateKind,
};
