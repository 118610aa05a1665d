//! Finitely generated abelian groups `Z^s ⊕ Z/t_1 ⊕ ... ⊕ Z/t_q` in invariant
//! factor form, and their elements.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::matrix::{smith_normal_form, IntMatrix};

/// A finitely generated abelian group, stored as a free rank together with the
/// invariant factor chain `t_1 | t_2 | ... | t_q` (each `t_i >= 2`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct AbGroup {
    free_rank: usize,
    torsion: Vec<i64>,
}

impl AbGroup {
    /// The free group `Z^rank`.
    pub fn free(rank: usize) -> Self {
        AbGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Builds a group from an invariant factor chain.  Panics if the moduli do
    /// not form a divisibility chain of factors `>= 2`.
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Self {
        for (i, &t) in torsion.iter().enumerate() {
            assert!(t >= 2, "invariant factor {t} < 2");
            if i > 0 {
                assert_eq!(t % torsion[i - 1], 0, "broken divisibility chain");
            }
        }
        AbGroup { free_rank, torsion }
    }

    /// Builds `Z^free_rank ⊕ Z/m_1 ⊕ ... ⊕ Z/m_k` for arbitrary moduli,
    /// normalizing the torsion part into an invariant factor chain.
    pub fn from_moduli(free_rank: usize, moduli: &[i64]) -> Self {
        assert!(moduli.iter().all(|&m| m >= 1), "moduli must be positive");
        let k = moduli.len();
        let mut diag = IntMatrix::zero(k, k);
        for (i, &m) in moduli.iter().enumerate() {
            diag.set(i, i, m);
        }
        let snf = smith_normal_form(&diag);
        let torsion: Vec<i64> = snf.diagonal().into_iter().filter(|&d| d >= 2).collect();
        AbGroup { free_rank, torsion }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// The invariant factors of the torsion part.
    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    /// Number of torsion coordinates.
    pub fn torsion_len(&self) -> usize {
        self.torsion.len()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> i64 {
        self.torsion.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Total coordinate count of an element (free plus torsion).
    pub fn coord_len(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// The zero element.
    pub fn zero(&self) -> GroupElem {
        GroupElem {
            free: vec![0; self.free_rank],
            torsion: vec![0; self.torsion.len()],
        }
    }

    /// Builds an element, reducing each torsion coordinate modulo its factor.
    pub fn elem(&self, free: &[i64], torsion: &[i64]) -> GroupElem {
        assert_eq!(free.len(), self.free_rank, "free coordinate count mismatch");
        assert_eq!(
            torsion.len(),
            self.torsion.len(),
            "torsion coordinate count mismatch"
        );
        GroupElem {
            free: free.to_vec(),
            torsion: torsion
                .iter()
                .zip(&self.torsion)
                .map(|(&v, &t)| v.rem_euclid(t))
                .collect(),
        }
    }

    /// Builds an element from a single coordinate vector (free part first).
    pub fn elem_from_coords(&self, coords: &[i64]) -> GroupElem {
        assert_eq!(coords.len(), self.coord_len(), "coordinate count mismatch");
        self.elem(&coords[..self.free_rank], &coords[self.free_rank..])
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        let free = a
            .free
            .iter()
            .zip(&b.free)
            .map(|(x, y)| x + y)
            .collect::<Vec<_>>();
        let torsion = a
            .torsion
            .iter()
            .zip(&b.torsion)
            .map(|(x, y)| x + y)
            .collect::<Vec<_>>();
        self.elem(&free, &torsion)
    }

    pub fn neg(&self, a: &GroupElem) -> GroupElem {
        let free = a.free.iter().map(|x| -x).collect::<Vec<_>>();
        let torsion = a.torsion.iter().map(|x| -x).collect::<Vec<_>>();
        self.elem(&free, &torsion)
    }

    pub fn sub(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        self.add(a, &self.neg(b))
    }

    pub fn smul(&self, c: i64, a: &GroupElem) -> GroupElem {
        let free = a.free.iter().map(|x| c * x).collect::<Vec<_>>();
        let torsion = a.torsion.iter().map(|x| c * x).collect::<Vec<_>>();
        self.elem(&free, &torsion)
    }

    /// The order of an element: `None` when infinite.
    pub fn elem_order(&self, a: &GroupElem) -> Option<i64> {
        if a.free.iter().any(|&x| x != 0) {
            return None;
        }
        let mut order = 1i64;
        for (&v, &t) in a.torsion.iter().zip(&self.torsion) {
            order = order.lcm(&(t / v.gcd(&t)));
        }
        Some(order)
    }

    /// Iterates over all elements of the torsion subgroup.
    pub fn torsion_elements(&self) -> impl Iterator<Item = GroupElem> + '_ {
        let q = self.torsion.len();
        let total = self.torsion_order();
        (0..total).map(move |mut idx| {
            let mut torsion = vec![0i64; q];
            for (slot, &t) in torsion.iter_mut().zip(&self.torsion) {
                *slot = idx % t;
                idx /= t;
            }
            GroupElem {
                free: vec![0; self.free_rank],
                torsion,
            }
        })
    }

    /// Iterates over every element when the group is finite (free rank zero).
    pub fn all_elements(&self) -> impl Iterator<Item = GroupElem> + '_ {
        assert_eq!(self.free_rank, 0, "cannot enumerate an infinite group");
        self.torsion_elements()
    }
}

/// An element of an [`AbGroup`], with torsion coordinates kept reduced into
/// `[0, t_i)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElem {
    free: Vec<i64>,
    torsion: Vec<i64>,
}

impl GroupElem {
    pub fn free(&self) -> &[i64] {
        &self.free
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    /// The single coordinate vector, free part first.
    pub fn coords(&self) -> Vec<i64> {
        let mut v = self.free.clone();
        v.extend_from_slice(&self.torsion);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&x| x == 0)
    }
}
