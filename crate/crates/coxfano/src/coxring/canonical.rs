//! Canonical representatives of graded ring data.
//!
//! Two data describe isomorphic graded rings exactly when one arises from the
//! other by (a) permuting variables within a block, (b) permuting blocks,
//! (c) permuting free variables, and (d) an automorphism of `K = Z ⊕ K^t`
//! preserving the positive free degrees.  Such an automorphism acts by
//! `(w0, wt) -> (w0, psi(wt) + w0 * tau)` for `psi` an automorphism of `K^t`
//! and `tau` in `K^t` (a change of splitting).  The permutation part is
//! collapsed by sorting; the canonical form is the minimum over all
//! `(tau, psi)` of the sorted datum.

use super::{BlockData, RingData};
use crate::intlin::{torsion_automorphisms, GroupElem, TorsionAut};

/// Bail out rather than walk an absurdly large torsion orbit.
const ORBIT_LIMIT: u64 = 1_000_000;

pub(super) fn canonical_form(data: &RingData) -> RingData {
    let group = &data.group;
    let auts = torsion_automorphisms(group);
    let orbit = (group.torsion_order() as u64).saturating_mul(auts.len() as u64);
    assert!(
        orbit <= ORBIT_LIMIT,
        "torsion orbit of size {orbit} exceeds the canonicalization limit"
    );
    let mut best: Option<RingData> = None;
    for tau in group.torsion_elements() {
        for aut in &auts {
            let candidate = sorted(&transform(data, &tau, aut));
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    best.expect("orbit is never empty")
}

fn transform(data: &RingData, tau: &GroupElem, aut: &TorsionAut) -> RingData {
    let group = &data.group;
    let map = |w: &GroupElem| -> GroupElem {
        let twisted = aut.apply(group, w.torsion());
        let shifted = group.smul(w.free()[0], tau);
        group.add(&group.elem(w.free(), &twisted), &shifted)
    };
    RingData {
        group: group.clone(),
        blocks: data
            .blocks
            .iter()
            .map(|b| BlockData {
                exponents: b.exponents.clone(),
                weights: b.weights.iter().map(map).collect(),
            })
            .collect(),
        free_weights: data.free_weights.iter().map(map).collect(),
    }
}

/// Sorts variables within blocks (exponent/degree pairs move together), then
/// the blocks themselves, then the free degrees.
fn sorted(data: &RingData) -> RingData {
    let mut blocks: Vec<BlockData> = data
        .blocks
        .iter()
        .map(|b| {
            let mut pairs: Vec<(i64, GroupElem)> = b
                .exponents
                .iter()
                .copied()
                .zip(b.weights.iter().cloned())
                .collect();
            pairs.sort();
            let (exponents, weights) = pairs.into_iter().unzip();
            BlockData { exponents, weights }
        })
        .collect();
    blocks.sort();
    let mut free_weights = data.free_weights.clone();
    free_weights.sort();
    RingData {
        group: data.group.clone(),
        blocks,
        free_weights,
    }
}
