//! Wild-knot constructions driven by groups of sphere inversions.
//!
//! The crate builds nested beaded necklaces (a knotted thread with round
//! beads strung on it), iterates them under the inversion group generated by
//! the bead boundary spheres, and exposes the derived structures: limit-set
//! point clouds with symbolic addresses, stage-by-stage knot approximations,
//! knot-group presentations assembled by meridian amalgamation, an explicit
//! circle-valued fibration of the trivial-model complement, and sheet
//! navigation in q-fold cyclic branched covers.

pub mod algebra;
pub mod config;
pub mod conformal;
pub mod covers;
pub mod fibration;
pub mod formats;
pub mod necklace;

mod vecmath;
