//! Exact combinatorics of piecewise-linear divisors on tropical curves.
//!
//! The crate covers dual graphs ([`graph`]), lattice quotients and their
//! characteristic monoids ([`lattice`]), PL divisors and their minimal
//! monoids ([`divisor`]), the finite enumeration of slope assignments with a
//! fixed multidegree ([`enumerate`]), and the alignment subdivision with its
//! rubber data ([`rubber`]). Everything is exact integer or rational
//! arithmetic.

pub mod cli;
pub mod divisor;
pub mod enumerate;
pub mod graph;
pub mod lattice;
pub mod polyhedral;
pub mod rubber;
