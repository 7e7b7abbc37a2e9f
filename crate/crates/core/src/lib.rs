//! Symbolic torus-surgery calculus for 4-manifolds built from product
//! building blocks.
//!
//! A [`blocks::ManifoldState`] carries a presentation of the fundamental
//! group of the complement of its catalogued tori together with integer
//! invariants. The [`surgery`] operations transform states; a final report
//! identifies the fundamental group, derives Betti numbers and, where a
//! classification theorem applies, a homeomorphism label.

pub mod group;
pub mod invariants;
pub mod blocks;
pub mod surgery;
pub mod scenario;
