//! Homomorphism-polynomial compiler, finite-field counting and hardness
//! gadget verification.

pub mod circuit;
pub mod compiler;
pub mod decomp;
pub mod families;
pub mod gadgets;
pub mod graph;
pub mod oracles;
pub mod rings;
