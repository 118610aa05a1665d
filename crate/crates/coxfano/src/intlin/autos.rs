//! Automorphisms of finite abelian groups, used to detect when two graded
//! rings differ only by a change of coordinates on the torsion part.

use num_integer::Integer;

use super::group::{AbGroup, GroupElem};
use super::subgroup::Subgroup;

/// An automorphism of the torsion part of an [`AbGroup`], stored by the images
/// of the canonical generators `e_1, ..., e_q`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorsionAut {
    images: Vec<Vec<i64>>,
}

impl TorsionAut {
    /// The identity automorphism.
    pub fn identity(group: &AbGroup) -> TorsionAut {
        let q = group.torsion_len();
        let mut images = vec![vec![0i64; q]; q];
        for (i, img) in images.iter_mut().enumerate() {
            img[i] = 1;
        }
        TorsionAut { images }
    }

    /// Applies the automorphism to a torsion coordinate vector.
    pub fn apply(&self, group: &AbGroup, residues: &[i64]) -> Vec<i64> {
        let q = group.torsion_len();
        assert_eq!(residues.len(), q, "torsion coordinate count mismatch");
        let mut out = vec![0i64; q];
        for (i, &xi) in residues.iter().enumerate() {
            for (o, &img) in out.iter_mut().zip(&self.images[i]) {
                *o += xi * img;
            }
        }
        for (o, &t) in out.iter_mut().zip(group.torsion()) {
            *o = o.rem_euclid(t);
        }
        out
    }
}

/// Enumerates every automorphism of the torsion part of `group`.
///
/// A candidate sends the generator `e_i` (of order `t_i`) to an element killed
/// by `t_i`; the candidate is an automorphism exactly when the images generate
/// the torsion subgroup.
pub fn torsion_automorphisms(group: &AbGroup) -> Vec<TorsionAut> {
    let q = group.torsion_len();
    let t = group.torsion();
    if q == 0 {
        return vec![TorsionAut { images: Vec::new() }];
    }
    let tor = AbGroup::new(0, t.to_vec());
    // Images of e_i: vectors y with t_i * y = 0, i.e. y_j a multiple of
    // t_j / gcd(t_i, t_j), giving gcd(t_i, t_j) choices per coordinate.
    let mut candidates: Vec<Vec<Vec<i64>>> = Vec::with_capacity(q);
    for i in 0..q {
        let counts: Vec<i64> = (0..q).map(|j| t[i].gcd(&t[j])).collect();
        let strides: Vec<i64> = (0..q).map(|j| t[j] / counts[j]).collect();
        let total: i64 = counts.iter().product();
        let mut list = Vec::with_capacity(total as usize);
        for mut idx in 0..total {
            let mut y = vec![0i64; q];
            for j in 0..q {
                y[j] = (idx % counts[j]) * strides[j];
                idx /= counts[j];
            }
            list.push(y);
        }
        candidates.push(list);
    }
    let mut result = Vec::new();
    let mut counters = vec![0usize; q];
    loop {
        let images: Vec<Vec<i64>> = (0..q).map(|i| candidates[i][counters[i]].clone()).collect();
        let gens: Vec<GroupElem> = images.iter().map(|y| tor.elem(&[], y)).collect();
        if Subgroup::generates(&tor, &gens) {
            result.push(TorsionAut { images });
        }
        let mut i = 0;
        loop {
            if i == q {
                return result;
            }
            counters[i] += 1;
            if counters[i] < candidates[i].len() {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
    }
}
