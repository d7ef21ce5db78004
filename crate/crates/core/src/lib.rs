//! Finite relation algebras presented by atoms: axiom checking, measurable
//! atoms and their groups, coset semi-frames, coset and group relation
//! algebras, and scaffold-based representability.

pub mod bits;
pub mod coset;
pub mod frame;
pub mod group;
pub mod measure;
pub mod parallel;
pub mod ra;
pub mod repr;
