//! Thermal operations: realization, energy conservation and constructions.

mod construct;
mod spec;
mod spin_block;

pub use construct::{
    compose_specs, convex_combine_specs, decompose_nonresonant, missing_levels, spin_embed, spin_embed_prediction,
    DecompositionPart, WeightedSpec,
};
pub use spec::{dilate, energy_residual, realize, EnergyResidual, ThermalOpSpec, ENERGY_TOL};
pub use spin_block::{spin_block_choi, SpinBlockChoi, SpinBlockSpec};
