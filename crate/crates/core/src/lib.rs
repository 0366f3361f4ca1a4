//! Reasoning for the lattice-based description logic LE-ALC.

pub mod cli;
pub mod kb;
pub mod model;
pub mod query;
pub mod syntax;
pub mod tableau;
pub mod unravel;
