//! Nilpotent orbit dualities (BVLS, Sommers, Achar), canonical unramified
//! wavefront sets and basic Arthur packets, driven by validated group bundles.

pub mod cli;
pub mod data;
pub mod duality;
pub mod orbits;
pub mod packets;
pub mod partitions;
pub mod rootdata;
