//! Exact integer linear algebra: matrices, Smith/Hermite normal forms,
//! finitely generated abelian groups and their subgroups.

mod autos;
mod group;
mod matrix;
mod subgroup;

pub use autos::{torsion_automorphisms, TorsionAut};
pub use group::{AbGroup, GroupElem};
pub use matrix::{row_hermite_form, smith_normal_form, BigMatrix, IntMatrix, SmithForm};
pub use subgroup::{cokernel, QuotientMap, Subgroup};
