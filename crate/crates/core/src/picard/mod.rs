//! Picard groups, their characters, and Hecke kernels for tori.

mod character;
mod group;
mod hecke;
mod mumford;
mod twisted;

pub use character::{characters, TorusCharacter};
pub use group::{Class, PicardGroup};
pub use hecke::{
    build_kernel, eigenvalue_check, gl1_relative_trace, vanishing_scan, EigenvalueCheck, HeckeKernelTable, VanishingScan,
};
pub use mumford::{Cantor, Mumford};
pub use twisted::{
    eisenstein_factorization_check, hecke_components_h, m_independent, rho_h_factorization_check,
    twisted_hitchin_base_count, twisted_torus_bundles, FactorizationCheck, HeckeComponent, TwistedTorusBundleSet,
};
