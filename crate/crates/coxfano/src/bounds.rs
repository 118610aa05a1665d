//! Effective bounds that make the classification a finite search.
//!
//! For fixed dimension `d` and Picard index `mu` every admissible datum falls
//! into one of five shape cases, each with explicit caps on the number of
//! relations, the exponents, the free weight parts and the relation degree.
//! The cases are told apart by the multiset of block sizes:
//!
//! * `I`   - no relations (toric),
//! * `II`  - all blocks singletons,
//! * `III` - exactly one block of size `>= 2`,
//! * `IV`  - exactly two such blocks,
//! * `V`   - three or more.

use num_bigint::BigUint;

use crate::coxring::RingData;

/// Shape case of a datum; see the module docs.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum CaseTag {
    I,
    II,
    III,
    IV,
    V,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseTag::I => "I",
            CaseTag::II => "II",
            CaseTag::III => "III",
            CaseTag::IV => "IV",
            CaseTag::V => "V",
        };
        write!(f, "{s}")
    }
}

/// Whether the prime-counting function counts primes strictly below `x` or
/// up to and including `x`.  The strict reading is the default; the inclusive
/// variant only widens the search space and is kept for sensitivity checks.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum XiConvention {
    #[default]
    StrictlyBelow,
    Inclusive,
}

/// Number of primes below `x` (or up to `x`, by convention).
pub fn prime_count_below(x: i64, convention: XiConvention) -> usize {
    let limit = match convention {
        XiConvention::StrictlyBelow => x - 1,
        XiConvention::Inclusive => x,
    };
    if limit < 2 {
        return 0;
    }
    let limit = limit as usize;
    let mut sieve = vec![true; limit + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2;
    while p * p <= limit {
        if sieve[p] {
            let mut q = p * p;
            while q <= limit {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve.iter().filter(|&&b| b).count()
}

/// An upper bound, inclusive or exclusive.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Bound {
    AtMost(i64),
    LessThan(i64),
}

impl Bound {
    pub fn allows(&self, v: i64) -> bool {
        match *self {
            Bound::AtMost(c) => v <= c,
            Bound::LessThan(c) => v < c,
        }
    }

    /// The largest allowed value.
    pub fn max_value(&self) -> i64 {
        match *self {
            Bound::AtMost(c) => c,
            Bound::LessThan(c) => c - 1,
        }
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::AtMost(c) => write!(f, "<= {c}"),
            Bound::LessThan(c) => write!(f, "< {c}"),
        }
    }
}

fn saturating_pow(base: i64, exp: usize) -> i64 {
    (0..exp).fold(1i64, |acc, _| acc.saturating_mul(base))
}

/// The bound set of one case at parameters `(d, mu)`.
#[derive(Clone, Copy, Debug)]
pub struct SearchBounds {
    pub case: CaseTag,
    pub dimension: usize,
    pub picard_index: i64,
    pub convention: XiConvention,
    /// Largest admissible number of relations plus one (`r`); zero when the
    /// case is empty at these parameters.
    pub max_r: usize,
}

/// Builds the bound set for a case; `d >= 1`, `mu >= 1`.
pub fn search_bounds(d: usize, mu: i64, case: CaseTag) -> SearchBounds {
    search_bounds_with(d, mu, case, XiConvention::default())
}

pub fn search_bounds_with(
    d: usize,
    mu: i64,
    case: CaseTag,
    convention: XiConvention,
) -> SearchBounds {
    assert!(d >= 1 && mu >= 1, "parameters must be positive");
    let di = d as i64;
    let xi = |x: i64| prime_count_below(x, convention) as i64;
    let max_r = match case {
        CaseTag::I => 1,
        CaseTag::II => mu + xi(mu) - 1,
        CaseTag::III => mu + xi(6 * di * mu) - 1,
        CaseTag::IV => mu + xi(2 * (di + 1) * mu) - 1,
        CaseTag::V => mu + xi((di + 2) * mu) + di - 1,
    };
    SearchBounds {
        case,
        dimension: d,
        picard_index: mu,
        convention,
        max_r: max_r.max(0) as usize,
    }
}

impl SearchBounds {
    fn d(&self) -> i64 {
        self.dimension as i64
    }

    /// Cap on the torsion order of the class group (all cases).
    pub fn torsion_order_cap(&self) -> i64 {
        self.picard_index
    }

    /// Cap on the free part of a free-variable degree (all cases).
    pub fn free_weight_cap(&self) -> i64 {
        self.picard_index
    }

    /// Cap on the total variable count in the relation-free case.
    pub fn toric_var_cap(&self) -> usize {
        self.dimension + 1
    }

    /// Cap on the free part of the relation degree; `r` only matters in
    /// case `II`.
    pub fn gamma_cap(&self, r: usize) -> Bound {
        let (d, mu) = (self.d(), self.picard_index);
        match self.case {
            CaseTag::I => Bound::AtMost(0),
            CaseTag::II => Bound::AtMost(saturating_pow(mu, r + 1)),
            CaseTag::III => Bound::LessThan(6 * d * mu),
            CaseTag::IV => Bound::LessThan(2 * (d + 1) * mu),
            CaseTag::V => Bound::LessThan((d + 2) * mu),
        }
    }

    /// Cap on the free weight parts inside blocks of size `>= 2`.
    pub fn big_weight_cap(&self) -> i64 {
        self.picard_index
    }

    /// Cap on the exponents inside blocks of size `>= 2`.
    pub fn big_exponent_cap(&self) -> Bound {
        let (d, mu) = (self.d(), self.picard_index);
        match self.case {
            CaseTag::I | CaseTag::II => Bound::AtMost(0),
            CaseTag::III => Bound::AtMost(6 * d * mu),
            CaseTag::IV => Bound::LessThan(2 * (d + 1) * mu),
            CaseTag::V => Bound::LessThan((d + 2) * mu),
        }
    }

    /// Cap on the free weight of the singleton block at `position` (after
    /// sorting singletons by weakly decreasing exponent).
    pub fn tail_weight_cap(&self, r: usize, position: usize) -> Bound {
        let (d, mu) = (self.d(), self.picard_index);
        match self.case {
            CaseTag::I => Bound::AtMost(mu),
            CaseTag::II => Bound::AtMost(saturating_pow(mu, r)),
            CaseTag::III => match position {
                0 => Bound::LessThan(2 * d * mu),
                1 => Bound::LessThan(3 * d * mu),
                _ => Bound::LessThan(6 * d * mu),
            },
            CaseTag::IV => match position {
                0 => Bound::LessThan((d + 1) * mu),
                _ => Bound::LessThan(2 * (d + 1) * mu),
            },
            CaseTag::V => Bound::LessThan((d + 2) * mu),
        }
    }

    /// Cap on the exponent of a singleton block.
    pub fn tail_exponent_cap(&self) -> Bound {
        let (d, mu) = (self.d(), self.picard_index);
        match self.case {
            CaseTag::I => Bound::AtMost(0),
            CaseTag::II => Bound::AtMost(mu),
            CaseTag::III => Bound::LessThan(6 * d * mu),
            CaseTag::IV => Bound::LessThan(2 * (d + 1) * mu),
            CaseTag::V => Bound::LessThan((d + 2) * mu),
        }
    }

    /// In case `II` the singleton exponents must divide `mu`.
    pub fn exponent_divides_mu(&self) -> bool {
        self.case == CaseTag::II
    }
}

/// The shape case of a datum.
pub fn case_of(data: &RingData) -> CaseTag {
    if !data.has_relations() {
        return CaseTag::I;
    }
    match data.blocks.iter().filter(|b| b.len() > 1).count() {
        0 => CaseTag::II,
        1 => CaseTag::III,
        2 => CaseTag::IV,
        _ => CaseTag::V,
    }
}

/// Checks every case bound for a datum claimed to live at `(d, mu)`.
pub fn check_bounds(data: &RingData, d: usize, mu: i64) -> bool {
    bound_violations(data, d, mu).is_empty()
}

/// Like [`check_bounds`] but reports each violated bound.
pub fn bound_violations(data: &RingData, d: usize, mu: i64) -> Vec<String> {
    let mut out = Vec::new();
    let case = case_of(data);
    let bounds = search_bounds(d, mu, case);
    let t = data.group.torsion_order();
    if t > bounds.torsion_order_cap() {
        out.push(format!("torsion order {t} exceeds {mu}"));
    }
    for (k, u) in data.free_weights.iter().enumerate() {
        if u.free()[0] > bounds.free_weight_cap() {
            out.push(format!("free degree {k} has weight {} > {mu}", u.free()[0]));
        }
    }
    if case == CaseTag::I {
        if data.var_count() > bounds.toric_var_cap() {
            out.push(format!(
                "{} variables exceed the cap {}",
                data.var_count(),
                bounds.toric_var_cap()
            ));
        }
        for w in data.weight_list() {
            if w.free()[0] > mu {
                out.push(format!("weight {} > {mu}", w.free()[0]));
            }
        }
        return out;
    }

    let r = data.r();
    if r > bounds.max_r {
        out.push(format!("r = {r} exceeds the cap {}", bounds.max_r));
    }
    let gamma0 = data.relation_degree().expect("relations present").free()[0];
    if !bounds.gamma_cap(r).allows(gamma0) {
        out.push(format!(
            "relation degree {gamma0} violates {}",
            bounds.gamma_cap(r)
        ));
    }

    // Arrange the blocks the way the bounds are stated: big blocks first,
    // then singletons by weakly decreasing exponent.
    let bigs: Vec<_> = data.blocks.iter().filter(|b| b.len() > 1).collect();
    let mut tails: Vec<_> = data.blocks.iter().filter(|b| b.len() == 1).collect();
    tails.sort_by_key(|b| std::cmp::Reverse(b.exponents[0]));

    let big_total: usize = bigs.iter().map(|b| b.len()).sum();
    let structural_ok = match case {
        CaseTag::II => data.m() + 1 == d,
        CaseTag::III | CaseTag::IV | CaseTag::V => {
            big_total + data.m() == d + bigs.len().saturating_sub(1)
        }
        CaseTag::I => true,
    };
    if !structural_ok {
        out.push("block sizes and free variable count do not fit the dimension".into());
    }
    if case == CaseTag::V && bigs.len() > d + 1 {
        out.push(format!(
            "{} blocks of size >= 2 exceed the cap {}",
            bigs.len(),
            d + 1
        ));
    }

    for b in &bigs {
        for (&l, w) in b.exponents.iter().zip(&b.weights) {
            if w.free()[0] > bounds.big_weight_cap() {
                out.push(format!(
                    "weight {} in a big block exceeds {mu}",
                    w.free()[0]
                ));
            }
            if !bounds.big_exponent_cap().allows(l) {
                out.push(format!(
                    "exponent {l} in a big block violates {}",
                    bounds.big_exponent_cap()
                ));
            }
        }
    }
    for (pos, b) in tails.iter().enumerate() {
        let l = b.exponents[0];
        let w0 = b.weights[0].free()[0];
        if l < 2 {
            out.push(format!("singleton block exponent {l} < 2"));
        }
        if bounds.exponent_divides_mu() && mu % l != 0 {
            out.push(format!("singleton exponent {l} does not divide {mu}"));
        }
        if !bounds.tail_exponent_cap().allows(l) {
            out.push(format!(
                "singleton exponent {l} violates {}",
                bounds.tail_exponent_cap()
            ));
        }
        if !bounds.tail_weight_cap(r, pos).allows(w0) {
            out.push(format!(
                "singleton weight {w0} at position {pos} violates {}",
                bounds.tail_weight_cap(r, pos)
            ));
        }
    }
    out
}

/// The shapes handled by the single-relation analysis (`r = 2`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RelationShape {
    /// One block of size `> 1`, two singletons with distinct exponents.
    OneBigDistinctTails,
    /// One block of size `> 1`, two singletons with equal exponents.
    OneBigEqualTails,
    /// Two blocks of size `> 1`, one singleton.
    TwoBig,
}

/// The bounds obtained from a single homogeneous trinomial relation.
#[derive(Clone, Copy, Debug)]
pub struct OneRelationBounds {
    pub first_tail_weight: Bound,
    pub second_tail_weight: Option<Bound>,
    pub first_tail_exponent: Bound,
    pub second_tail_exponent: Option<Bound>,
    pub relation_degree: Bound,
}

/// Bounds for a single relation of the given shape at `(d, mu)`.
pub fn lemma_one_relation_bounds(shape: RelationShape, d: usize, mu: i64) -> OneRelationBounds {
    let d = d as i64;
    match shape {
        RelationShape::OneBigDistinctTails => OneRelationBounds {
            first_tail_weight: Bound::LessThan(2 * d * mu),
            second_tail_weight: Some(Bound::LessThan(3 * d * mu)),
            first_tail_exponent: Bound::LessThan(6 * d * mu),
            second_tail_exponent: Some(Bound::LessThan(6 * d * mu)),
            relation_degree: Bound::LessThan(6 * d * mu),
        },
        RelationShape::OneBigEqualTails => OneRelationBounds {
            first_tail_weight: Bound::AtMost(mu),
            second_tail_weight: Some(Bound::AtMost(mu)),
            first_tail_exponent: Bound::AtMost(mu),
            second_tail_exponent: Some(Bound::AtMost(mu)),
            relation_degree: Bound::AtMost(mu),
        },
        RelationShape::TwoBig => OneRelationBounds {
            first_tail_weight: Bound::LessThan((d + 1) * mu),
            second_tail_weight: None,
            first_tail_exponent: Bound::LessThan(2 * (d + 1) * mu),
            second_tail_exponent: None,
            relation_degree: Bound::LessThan(2 * (d + 1) * mu),
        },
    }
}

/// The explicit overall upper bound on the number of deformation types at
/// `(d, mu)`.
pub fn count_upper_bound(d: usize, mu: i64) -> BigUint {
    let xi_mu = prime_count_below(mu, XiConvention::StrictlyBelow) as u64;
    let xi_6dmu = prime_count_below(6 * d as i64 * mu, XiConvention::StrictlyBelow) as u64;
    let mu_u = BigUint::from(mu as u64);
    let base2 = BigUint::from((6 * d as i64 * mu) as u64);
    let mu2 = (mu * mu) as u64;
    let e1 = mu2 + 3 * mu as u64 + xi_mu * xi_mu + xi_6dmu + 5 * d as u64;
    let e2 = 2 * mu as u64 + 2 * xi_6dmu + 3 * d as u64 - 2;
    mu_u.pow(e1 as u32) * base2.pow(e2 as u32)
}

/// Upper bound on the number of toric types at `(d, mu)`.
pub fn toric_count_bound(d: usize, mu: i64) -> BigUint {
    BigUint::from(mu as u64).pow((d * d) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::all_fixtures;
    use num_traits::One;

    #[test]
    fn prime_counts() {
        let s = XiConvention::StrictlyBelow;
        assert_eq!(prime_count_below(2, s), 0);
        assert_eq!(prime_count_below(3, s), 1);
        assert_eq!(prime_count_below(6, s), 3);
        assert_eq!(prime_count_below(13, s), 5);
        assert_eq!(prime_count_below(24, s), 9);
        let i = XiConvention::Inclusive;
        assert_eq!(prime_count_below(2, i), 1);
        assert_eq!(prime_count_below(13, i), 6);
        // Monotone, and the two conventions differ exactly at primes.
        let mut prev = 0;
        for x in 1..200 {
            let c = prime_count_below(x, s);
            assert!(c >= prev);
            prev = c;
            let diff = prime_count_below(x, i) - c;
            assert!(diff == 0 || diff == 1);
        }
    }

    #[test]
    fn bounds_for_one_big_block_case() {
        let b = search_bounds(2, 2, CaseTag::III);
        assert_eq!(b.max_r, 2 + 9 - 1);
        assert_eq!(b.gamma_cap(2), Bound::LessThan(24));
        assert_eq!(b.big_exponent_cap(), Bound::AtMost(24));
        assert_eq!(b.big_weight_cap(), 2);
        assert_eq!(b.tail_weight_cap(2, 0), Bound::LessThan(8));
        assert_eq!(b.tail_weight_cap(2, 1), Bound::LessThan(12));
        assert_eq!(b.tail_weight_cap(2, 2), Bound::LessThan(24));
    }

    #[test]
    fn bounds_for_all_singleton_case() {
        let b = search_bounds(2, 6, CaseTag::II);
        assert_eq!(b.max_r, 6 + 3 - 1);
        assert!(b.exponent_divides_mu());
        assert_eq!(b.gamma_cap(2), Bound::AtMost(216));
        assert_eq!(b.tail_weight_cap(2, 0), Bound::AtMost(36));
        // The case is empty at mu = 2: no primes below 2, so r <= 1 < 2.
        assert_eq!(search_bounds(2, 2, CaseTag::II).max_r, 1);
    }

    #[test]
    fn bounds_for_many_big_blocks_case() {
        let b = search_bounds(3, 2, CaseTag::V);
        assert_eq!(b.max_r, 2 + 4 + 3 - 1);
        assert_eq!(b.gamma_cap(3), Bound::LessThan(10));
    }

    #[test]
    fn fixtures_pass_their_case_bounds() {
        for f in all_fixtures().iter().take(11) {
            assert!(
                check_bounds(&f.data, 2, f.expected.picard_index),
                "{}: {:?}",
                f.name,
                bound_violations(&f.data, 2, f.expected.picard_index)
            );
        }
        // The graded family lives at growing mu = 3t.
        for f in all_fixtures().iter().skip(11) {
            assert!(
                check_bounds(&f.data, 2, f.expected.picard_index),
                "{}",
                f.name
            );
        }
    }

    #[test]
    fn violations_are_reported() {
        let f = &all_fixtures()[0];
        assert_eq!(case_of(&f.data), CaseTag::III);
        // Same datum, claimed at a too-small Picard index: the relation
        // degree bound gamma < 6*2*1 = 12 still holds (gamma = 4) but the
        // torsion order 2 exceeds mu = 1.
        assert!(!check_bounds(&f.data, 2, 1));
        assert!(bound_violations(&f.data, 2, 1)
            .iter()
            .any(|v| v.contains("torsion order")));
        // Wrong dimension breaks the structural size equation.
        assert!(!check_bounds(&f.data, 3, 2));
    }

    #[test]
    fn one_relation_bound_branches() {
        let b = lemma_one_relation_bounds(RelationShape::OneBigDistinctTails, 2, 2);
        assert_eq!(b.first_tail_weight, Bound::LessThan(8));
        assert_eq!(b.second_tail_weight, Some(Bound::LessThan(12)));
        assert_eq!(b.relation_degree, Bound::LessThan(24));

        let e = lemma_one_relation_bounds(RelationShape::OneBigEqualTails, 2, 4);
        for v in [
            e.first_tail_weight,
            e.second_tail_weight.unwrap(),
            e.first_tail_exponent,
            e.second_tail_exponent.unwrap(),
            e.relation_degree,
        ] {
            assert_eq!(v, Bound::AtMost(4));
        }

        let t = lemma_one_relation_bounds(RelationShape::TwoBig, 2, 3);
        assert_eq!(t.first_tail_weight, Bound::LessThan(9));
        assert_eq!(t.relation_degree, Bound::LessThan(18));
        assert!(t.second_tail_weight.is_none());
    }

    #[test]
    fn count_bounds() {
        assert_eq!(count_upper_bound(1, 1), BigUint::from(6u32).pow(9));
        assert_eq!(toric_count_bound(2, 3), BigUint::from(81u32));
        assert!(count_upper_bound(2, 2) >= BigUint::one());
        assert!(count_upper_bound(3, 6) > count_upper_bound(2, 2));
    }

    #[test]
    fn case_routing() {
        let fx = all_fixtures();
        assert_eq!(case_of(&fx[2].data), CaseTag::II); // three singletons
        assert_eq!(case_of(&fx[0].data), CaseTag::III); // one big block
        assert_eq!(case_of(&fx[6].data), CaseTag::III); // surface-07
    }
}
