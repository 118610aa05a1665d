//! Invariants of the encoded varieties, computed exactly from the grading.
//!
//! Everything is read off the minimal supports: the local class group at a
//! minimal stratum is the class group modulo the degrees of the variables
//! that survive there, the Picard index is the least common multiple of the
//! local indices, and the Gorenstein index is the least common multiple of
//! the local orders of the canonical class.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::coxring::RingData;
use crate::intlin::{AbGroup, Subgroup};
use crate::strata::{minimal_supports, weight_set};

/// The full invariant record of one variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyInvariants {
    pub dimension: usize,
    pub picard_index: i64,
    pub gorenstein_index: i64,
    pub self_intersection: BigRational,
    pub moduli_count: usize,
    pub fano: bool,
    pub toric: bool,
}

/// The class group of the variety near the stratum with the given support:
/// the grading group modulo the degrees of the surviving variables.
pub fn local_class_group(data: &RingData, support: &[usize]) -> AbGroup {
    Subgroup::span(&data.group, &weight_set(data, support))
        .quotient()
        .group()
        .clone()
}

/// The index of the Picard group inside the class group: the least common
/// multiple over all minimal strata of `gcd` of the surviving free degrees,
/// times the torsion order.
pub fn picard_index(data: &RingData) -> i64 {
    let mut result = 1i64;
    for s in minimal_supports(data) {
        let g = weight_set(data, &s)
            .iter()
            .fold(0i64, |acc, w| acc.gcd(&w.free()[0]));
        result = result.lcm(&g);
    }
    result * data.group.torsion_order()
}

/// Cross-check route for [`picard_index`]: intersects, inside `Z`, the
/// subgroups spanned by the surviving free degrees of each minimal stratum,
/// and multiplies the index of the intersection by the torsion order.
pub fn picard_index_span_route(data: &RingData) -> i64 {
    let line = AbGroup::free(1);
    let mut acc = Subgroup::full(&line);
    for s in minimal_supports(data) {
        let gens: Vec<_> = weight_set(data, &s)
            .iter()
            .map(|w| line.elem(&[w.free()[0]], &[]))
            .collect();
        acc = acc.intersect(&Subgroup::span(&line, &gens));
    }
    acc.index()
        .expect("positive degrees keep the intersection of full rank")
        * data.group.torsion_order()
}

/// The Gorenstein index: the least common multiple over all minimal strata of
/// the order of the canonical class in the local class group.
pub fn gorenstein_index(data: &RingData) -> i64 {
    let canonical = data.group.neg(&data.anticanonical_class());
    let mut result = 1i64;
    for s in minimal_supports(data) {
        let span = Subgroup::span(&data.group, &weight_set(data, &s));
        let order = span
            .order_in_quotient(&canonical)
            .expect("local class groups are finite for positive degrees");
        result = result.lcm(&order);
    }
    result
}

/// The anticanonical self-intersection number
/// `(-K)^dim = ((-K)^0)^dim * (gamma^0)^(r-1) / (prod of free degrees * torsion order)`,
/// as an exact rational.
pub fn self_intersection(data: &RingData) -> BigRational {
    let anti = BigInt::from(data.anticanonical_class().free()[0]);
    let mut num = anti.pow(data.dimension() as u32);
    if let Some(gamma) = data.relation_degree() {
        num *= BigInt::from(gamma.free()[0]).pow((data.r() - 1) as u32);
    }
    let mut den = BigInt::from(data.group.torsion_order());
    for w in data.weight_list() {
        den *= BigInt::from(w.free()[0]);
    }
    BigRational::new(num, den)
}

/// Necessary compatibility between exponents and torsion: for any two blocks,
/// the gcd of their exponent gcds must divide the torsion order.
pub fn ell_divisibility_check(data: &RingData) -> bool {
    let ells = data.block_exponent_gcds();
    let t = data.group.torsion_order();
    for i in 0..ells.len() {
        for j in i + 1..ells.len() {
            if t % ells[i].gcd(&ells[j]) != 0 {
                return false;
            }
        }
    }
    true
}

/// Computes every invariant of a datum.
pub fn compute_all(data: &RingData) -> VarietyInvariants {
    VarietyInvariants {
        dimension: data.dimension(),
        picard_index: picard_index(data),
        gorenstein_index: gorenstein_index(data),
        self_intersection: self_intersection(data),
        moduli_count: data.moduli_count(),
        fano: data.is_fano(),
        toric: data.is_toric(),
    }
}

/// Renders an exact rational as `p` or `p/q` in lowest terms.
pub fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
