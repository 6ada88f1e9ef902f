//! The SL2 Hitchin-type base `(D, b)`: discriminants, the delta invariant,
//! component groups of spectral data and stratification counts.

mod base;
mod strata;

pub use base::{
    delta_invariant, delta_squarefree, discriminant, hitchin_base_enumerate, hitchin_base_size, pi0_classify,
    spectral_discriminant_function, BaseIter, DiscriminantReport, HitchinBasePoint, Pi0, Pi0Class,
};
pub use strata::{
    generic_histogram, gm_torsor_check, growth_exponent, martens_dimension, martens_fiber_count, strata_histogram,
    stratify, StrataLevel, Stratification, StratumFit, TorsorCheck, EXPONENT_TOLERANCE,
};
