//! Classification of Q-factorial Fano varieties of Picard number one that carry
//! a torus action of complexity one, through their graded trinomial Cox rings.
//!
//! Everything is computed in exact integer arithmetic.  A variety is encoded by
//! a [`coxring::RingData`]: a list of exponent blocks with degrees in a finitely
//! generated abelian group `K = Z ⊕ K^t`, plus degrees for free variables.  The
//! crate derives the combinatorial invariants (Picard index, anticanonical
//! self-intersection, Gorenstein index) from that datum, bounds the search space
//! for a given dimension and Picard index, and enumerates all classes up to
//! graded isomorphism.

pub mod bounds;
pub mod cli;
pub mod coxring;
pub mod enumerate;
pub mod fixtures;
pub mod intlin;
pub mod invariants;
pub mod strata;
