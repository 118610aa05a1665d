//! Subgroups of finitely generated abelian groups, represented by canonical
//! Hermite bases of their preimage lattices, together with quotient maps.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::group::{AbGroup, GroupElem};
use super::matrix::{row_hermite_form, smith_normal_form, BigMatrix, IntMatrix};

/// The lattice of relations `t_i * e_{s+i}` defining the torsion coordinates
/// of `ambient` inside `Z^{s+q}`.
fn relation_rows(ambient: &AbGroup) -> IntMatrix {
    let n = ambient.coord_len();
    let s = ambient.free_rank();
    let mut m = IntMatrix::zero(ambient.torsion_len(), n);
    for (i, &t) in ambient.torsion().iter().enumerate() {
        m.set(i, s + i, t);
    }
    m
}

/// A subgroup `H` of an ambient group `K = Z^s ⊕ Z/t_1 ⊕ ... ⊕ Z/t_q`.
///
/// `H` is stored as the row-Hermite basis of its preimage lattice
/// `L ⊆ Z^{s+q}` under the projection `Z^{s+q} -> K`; the lattice always
/// contains the torsion relations, so equal subgroups have equal bases.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subgroup {
    ambient: AbGroup,
    basis: IntMatrix,
}

impl Subgroup {
    /// The subgroup generated by the given elements.
    pub fn span(ambient: &AbGroup, gens: &[GroupElem]) -> Subgroup {
        let n = ambient.coord_len();
        let mut rows: Vec<Vec<i64>> = gens.iter().map(|g| g.coords()).collect();
        for i in 0..ambient.torsion_len() {
            rows.push(relation_rows(ambient).row(i).to_vec());
        }
        let m = if rows.is_empty() {
            IntMatrix::zero(0, n)
        } else {
            IntMatrix::from_rows(&rows)
        };
        Subgroup {
            ambient: ambient.clone(),
            basis: row_hermite_form(&m),
        }
    }

    /// The zero subgroup.
    pub fn trivial(ambient: &AbGroup) -> Subgroup {
        Subgroup::span(ambient, &[])
    }

    /// The whole ambient group as a subgroup.
    pub fn full(ambient: &AbGroup) -> Subgroup {
        let n = ambient.coord_len();
        Subgroup {
            ambient: ambient.clone(),
            basis: IntMatrix::identity(n),
        }
    }

    pub fn ambient(&self) -> &AbGroup {
        &self.ambient
    }

    /// The canonical Hermite basis of the preimage lattice.
    pub fn basis_matrix(&self) -> &IntMatrix {
        &self.basis
    }

    /// Whether the subgroup is all of the ambient group.
    pub fn is_full(&self) -> bool {
        self.basis == IntMatrix::identity(self.ambient.coord_len())
    }

    pub fn contains(&self, e: &GroupElem) -> bool {
        self.basis.transpose().solve(&e.coords()).is_some()
    }

    /// The index `[K : H]`, or `None` when infinite.
    pub fn index(&self) -> Option<i64> {
        let n = self.ambient.coord_len();
        if self.basis.rows() < n {
            return None;
        }
        Some(self.basis.det().abs())
    }

    /// The quotient `K / H` together with the projection map.
    pub fn quotient(&self) -> QuotientMap {
        QuotientMap::from_lattice(&self.ambient, &self.basis)
    }

    /// The order of the class of `e` in `K / H`, or `None` when infinite.
    pub fn order_in_quotient(&self, e: &GroupElem) -> Option<i64> {
        let q = self.quotient();
        let image = q.map(e);
        q.group().elem_order(&image)
    }

    /// Whether the given elements generate the whole ambient group.
    pub fn generates(ambient: &AbGroup, elems: &[GroupElem]) -> bool {
        Subgroup::span(ambient, elems).is_full()
    }

    /// The intersection of two subgroups of the same ambient group.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(self.ambient, other.ambient, "ambient group mismatch");
        let n = self.ambient.coord_len();
        let ka = self.basis.rows();
        let kb = other.basis.rows();
        // Solve B_a^T x = B_b^T y: the common values form the intersection.
        let mut m = IntMatrix::zero(n, ka + kb);
        for i in 0..n {
            for j in 0..ka {
                m.set(i, j, self.basis.get(j, i));
            }
            for j in 0..kb {
                m.set(i, ka + j, -other.basis.get(j, i));
            }
        }
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for x in m.kernel_basis() {
            let mut row = vec![0i64; n];
            for (j, &xj) in x.iter().take(ka).enumerate() {
                for (c, cell) in row.iter_mut().enumerate() {
                    *cell = cell
                        .checked_add(
                            xj.checked_mul(self.basis.get(j, c))
                                .expect("integer overflow"),
                        )
                        .expect("integer overflow");
                }
            }
            rows.push(row);
        }
        for i in 0..self.ambient.torsion_len() {
            rows.push(relation_rows(&self.ambient).row(i).to_vec());
        }
        let gens = if rows.is_empty() {
            IntMatrix::zero(0, n)
        } else {
            IntMatrix::from_rows(&rows)
        };
        Subgroup {
            ambient: self.ambient.clone(),
            basis: row_hermite_form(&gens),
        }
    }
}

/// The cokernel `Z^rows / colspan(m)` of an integer matrix, in invariant
/// factor form.
pub fn cokernel(m: &IntMatrix) -> AbGroup {
    let snf = smith_normal_form(m);
    let free_rank = m.rows() - snf.rank;
    let torsion: Vec<i64> = snf.diagonal().into_iter().filter(|&d| d >= 2).collect();
    AbGroup::new(free_rank, torsion)
}

/// A quotient `K / H` presented by its invariant factors, with the projection
/// `K -> K / H` computable on elements.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    group: AbGroup,
    u: BigMatrix,
    diag: Vec<i64>,
}

impl QuotientMap {
    /// Builds the quotient of `ambient` by the subgroup whose preimage lattice
    /// is spanned by the rows of `lattice`.
    fn from_lattice(ambient: &AbGroup, lattice: &IntMatrix) -> QuotientMap {
        let n = ambient.coord_len();
        let cols = lattice.transpose();
        let snf = smith_normal_form(&cols);
        let mut diag = vec![0i64; n];
        for (i, slot) in diag.iter_mut().enumerate().take(snf.rank) {
            *slot = snf.d.get(i, i);
        }
        let free_rank = n - snf.rank;
        let torsion: Vec<i64> = diag.iter().copied().filter(|&d| d >= 2).collect();
        QuotientMap {
            group: AbGroup::new(free_rank, torsion),
            u: snf.u,
            diag,
        }
    }

    /// The quotient group.
    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    /// The image of an ambient element in the quotient.
    pub fn map(&self, e: &GroupElem) -> GroupElem {
        let y = self.u.apply(&e.coords());
        let mut free = Vec::with_capacity(self.group.free_rank());
        let mut torsion = Vec::with_capacity(self.group.torsion_len());
        for (yi, &d) in y.iter().zip(&self.diag) {
            match d {
                0 => free.push(yi.to_i64().expect("free quotient coordinate fits 64 bits")),
                1 => {}
                // Reduce modulo the invariant factor before narrowing: the
                // transform entries may not fit in 64 bits, the residue does.
                _ => torsion.push(
                    yi.mod_floor(&BigInt::from(d))
                        .to_i64()
                        .expect("residue fits"),
                ),
            }
        }
        self.group.elem(&free, &torsion)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_and_membership() {
        let k = AbGroup::new(1, vec![2]);
        let h = Subgroup::span(&k, &[k.elem(&[2], &[0]), k.elem(&[0], &[1])]);
        assert!(h.contains(&k.elem(&[2], &[0])));
        assert!(h.contains(&k.elem(&[4], &[1])));
        assert!(!h.contains(&k.elem(&[1], &[0])));
        assert_eq!(h.index(), Some(2));
        let q = h.quotient();
        assert_eq!(q.group(), &AbGroup::new(0, vec![2]));
    }

    #[test]
    fn quotient_normalizes_invariant_factors() {
        let k = AbGroup::free(2);
        let h = Subgroup::span(&k, &[k.elem(&[2, 0], &[]), k.elem(&[0, 3], &[])]);
        assert_eq!(h.quotient().group(), &AbGroup::new(0, vec![6]));
        assert_eq!(h.index(), Some(6));
    }

    #[test]
    fn order_in_quotient_examples() {
        let k = AbGroup::new(1, vec![3]);
        let h = Subgroup::span(&k, &[k.elem(&[1], &[1])]);
        assert_eq!(h.order_in_quotient(&k.elem(&[0], &[1])), Some(3));
        assert_eq!(h.order_in_quotient(&k.elem(&[1], &[0])), Some(3));
        assert_eq!(h.order_in_quotient(&k.elem(&[1], &[1])), Some(1));

        let z = AbGroup::free(1);
        let t = Subgroup::trivial(&z);
        assert_eq!(t.order_in_quotient(&z.elem(&[1], &[])), None);
        assert_eq!(t.order_in_quotient(&z.elem(&[0], &[])), Some(1));
    }

    #[test]
    fn order_in_quotient_cyclic_structure() {
        let k = AbGroup::new(0, vec![2, 4]);
        let h = Subgroup::span(&k, &[k.elem(&[], &[1, 2])]);
        assert_eq!(h.quotient().group(), &AbGroup::new(0, vec![4]));
        assert_eq!(h.order_in_quotient(&k.elem(&[], &[0, 1])), Some(4));
        assert_eq!(h.order_in_quotient(&k.elem(&[], &[1, 0])), Some(2));
    }

    #[test]
    fn generates_detects_full_group() {
        let k = AbGroup::new(1, vec![2]);
        assert!(Subgroup::generates(
            &k,
            &[k.elem(&[1], &[0]), k.elem(&[0], &[1])]
        ));
        assert!(Subgroup::generates(
            &k,
            &[k.elem(&[1], &[1]), k.elem(&[1], &[0])]
        ));
        assert!(!Subgroup::generates(&k, &[k.elem(&[1], &[0])]));
        assert!(!Subgroup::generates(&k, &[k.elem(&[2], &[1])]));
    }

    #[test]
    fn intersect_free_and_mixed() {
        let z = AbGroup::free(1);
        let a = Subgroup::span(&z, &[z.elem(&[2], &[])]);
        let b = Subgroup::span(&z, &[z.elem(&[3], &[])]);
        let c = a.intersect(&b);
        assert_eq!(c.index(), Some(6));
        assert!(c.contains(&z.elem(&[6], &[])));
        assert!(!c.contains(&z.elem(&[3], &[])));

        let k = AbGroup::new(1, vec![2]);
        let h1 = Subgroup::span(&k, &[k.elem(&[1], &[1])]);
        let h2 = Subgroup::span(&k, &[k.elem(&[1], &[0])]);
        let h = h1.intersect(&h2);
        assert_eq!(h.index(), Some(4));
        assert!(h.contains(&k.elem(&[2], &[0])));
        assert!(!h.contains(&k.elem(&[1], &[1])));
    }

    #[test]
    fn cokernel_examples() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(cokernel(&m), AbGroup::new(0, vec![6]));
        let p = IntMatrix::from_rows(&[vec![2], vec![0]]);
        assert_eq!(cokernel(&p), AbGroup::new(1, vec![2]));
        let zero = IntMatrix::zero(2, 0);
        assert_eq!(cokernel(&zero), AbGroup::free(2));
    }

    #[test]
    fn quotient_matches_brute_force_cosets() {
        // K = Z/2 ⊕ Z/4, H = <(1, 2)>: check coset counts and element orders
        // against a direct coset computation.
        let k = AbGroup::new(0, vec![2, 4]);
        let h = Subgroup::span(&k, &[k.elem(&[], &[1, 2])]);
        let members: Vec<GroupElem> = k.all_elements().filter(|e| h.contains(e)).collect();
        assert_eq!(members.len(), 2);
        let q = h.quotient();
        assert_eq!(q.group().torsion_order(), 8 / 2);
        for e in k.all_elements() {
            // Brute-force order of e + H: smallest k with k*e in H.
            let mut brute = None;
            for n in 1..=8 {
                if h.contains(&k.smul(n, &e)) {
                    brute = Some(n);
                    break;
                }
            }
            assert_eq!(h.order_in_quotient(&e), brute);
        }
    }
}
