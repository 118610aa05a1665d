//! Reference data with known invariants, used by the test suite and by the
//! `verify` subcommand as a self-check of the whole invariant pipeline.
//!
//! `classified_surfaces` lists the eleven del Pezzo surfaces with a nontrivial
//! torus action of complexity one, nontrivial torsion in the class group and
//! Picard index at most six.  `torsion_grading_family` grades one fixed
//! trinomial ring by groups with growing cyclic torsion; its invariants scale
//! linearly with the torsion order.

use crate::coxring::{BlockData, RingData};
use crate::intlin::AbGroup;

/// The invariants a fixture is expected to produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedInvariants {
    pub dimension: usize,
    pub picard_index: i64,
    /// Anticanonical self-intersection as a reduced fraction.
    pub self_intersection: (i64, i64),
    pub gorenstein_index: i64,
    pub moduli_count: usize,
}

/// A named reference datum.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub data: RingData,
    pub expected: ExpectedInvariants,
}

/// A degree literal: free part plus torsion residues.
type WeightLit<'a> = (i64, &'a [i64]);
/// A block literal: exponent vector plus one degree per variable.
type BlockLit<'a> = (&'a [i64], &'a [WeightLit<'a>]);

/// Builds a ring datum from compact literals: torsion moduli, blocks as
/// `(exponents, weights)` with weights `(free, residues)`, and free weights.
fn ring(torsion: &[i64], blocks: &[BlockLit], free: &[WeightLit]) -> RingData {
    let group = AbGroup::new(1, torsion.to_vec());
    RingData {
        group: group.clone(),
        blocks: blocks
            .iter()
            .map(|(l, ws)| BlockData {
                exponents: l.to_vec(),
                weights: ws.iter().map(|(f, t)| group.elem(&[*f], t)).collect(),
            })
            .collect(),
        free_weights: free.iter().map(|(f, t)| group.elem(&[*f], t)).collect(),
    }
}

fn fixture(
    name: &'static str,
    data: RingData,
    picard_index: i64,
    self_intersection: (i64, i64),
    gorenstein_index: i64,
) -> Fixture {
    let moduli_count = data.moduli_count();
    Fixture {
        name,
        data,
        expected: ExpectedInvariants {
            dimension: 2,
            picard_index,
            self_intersection,
            gorenstein_index,
            moduli_count,
        },
    }
}

/// The eleven surfaces with nontrivial torsion and Picard index 2, 3, 4 or 6.
pub fn classified_surfaces() -> Vec<Fixture> {
    vec![
        fixture(
            "surface-01",
            ring(
                &[2],
                &[
                    (&[1, 3], &[(1, &[0]), (1, &[0])]),
                    (&[4], &[(1, &[1])]),
                    (&[2], &[(2, &[1])]),
                ],
                &[],
            ),
            2,
            (1, 1),
            1,
        ),
        fixture(
            "surface-02",
            ring(
                &[3],
                &[
                    (&[1, 2], &[(1, &[1]), (1, &[1])]),
                    (&[3], &[(1, &[2])]),
                    (&[3], &[(1, &[0])]),
                ],
                &[],
            ),
            3,
            (1, 1),
            1,
        ),
        fixture(
            "surface-03",
            ring(
                &[2, 2],
                &[
                    (&[2], &[(1, &[1, 0])]),
                    (&[2], &[(1, &[1, 1])]),
                    (&[2], &[(1, &[0, 1])]),
                ],
                &[(1, &[0, 0])],
            ),
            4,
            (2, 1),
            1,
        ),
        fixture(
            "surface-04",
            ring(
                &[4],
                &[
                    (&[1, 1], &[(1, &[1]), (1, &[3])]),
                    (&[2], &[(1, &[2])]),
                    (&[2], &[(1, &[0])]),
                ],
                &[],
            ),
            4,
            (2, 1),
            1,
        ),
        fixture(
            "surface-05",
            ring(
                &[2],
                &[
                    (&[2, 1], &[(1, &[1]), (2, &[0])]),
                    (&[2], &[(2, &[1])]),
                    (&[4], &[(1, &[0])]),
                ],
                &[],
            ),
            4,
            (2, 1),
            1,
        ),
        fixture(
            "surface-06",
            ring(
                &[2],
                &[
                    (&[1, 2], &[(2, &[0]), (2, &[1])]),
                    (&[6], &[(1, &[0])]),
                    (&[2], &[(3, &[1])]),
                ],
                &[],
            ),
            4,
            (1, 1),
            2,
        ),
        fixture(
            "surface-07",
            ring(
                &[2, 2],
                &[
                    (&[1, 1], &[(1, &[1, 0]), (1, &[1, 0])]),
                    (&[2], &[(1, &[0, 1])]),
                    (&[2], &[(1, &[1, 1])]),
                    (&[2], &[(1, &[0, 0])]),
                ],
                &[],
            ),
            4,
            (1, 1),
            1,
        ),
        fixture(
            "surface-08",
            ring(
                &[3],
                &[
                    (&[3], &[(2, &[1])]),
                    (&[3], &[(2, &[2])]),
                    (&[2], &[(3, &[0])]),
                ],
                &[(1, &[0])],
            ),
            6,
            (2, 3),
            3,
        ),
        fixture(
            "surface-09",
            ring(
                &[3],
                &[
                    (&[1, 1], &[(1, &[1]), (2, &[2])]),
                    (&[3], &[(1, &[2])]),
                    (&[3], &[(1, &[0])]),
                ],
                &[],
            ),
            6,
            (2, 1),
            1,
        ),
        fixture(
            "surface-10",
            ring(
                &[2],
                &[
                    (&[1, 1], &[(3, &[1]), (1, &[1])]),
                    (&[2], &[(2, &[1])]),
                    (&[4], &[(1, &[0])]),
                ],
                &[],
            ),
            6,
            (3, 1),
            1,
        ),
        fixture(
            "surface-11",
            ring(
                &[2],
                &[
                    (&[1, 5], &[(3, &[1]), (1, &[1])]),
                    (&[2], &[(4, &[1])]),
                    (&[8], &[(1, &[0])]),
                ],
                &[],
            ),
            6,
            (1, 3),
            3,
        ),
    ]
}

/// One trinomial surface graded by `Z ⊕ Z/t` for growing `t`: the Picard and
/// Gorenstein indices are `3t` and the degree is `1/(3t)`.
pub fn torsion_grading_family() -> Vec<Fixture> {
    type OwnedBlock = (Vec<i64>, Vec<(i64, Vec<i64>)>);
    let blocks = |res: [i64; 4]| -> Vec<OwnedBlock> {
        vec![
            (vec![7, 1], vec![(1, vec![res[0]]), (3, vec![res[1]])]),
            (vec![5], vec![(2, vec![res[2]])]),
            (vec![2], vec![(5, vec![res[3]])]),
        ]
    };
    let entries: Vec<(&'static str, Vec<i64>, Vec<OwnedBlock>)> = vec![
        ("family-t1", vec![], blocks([0, 0, 0, 0])),
        ("family-t3", vec![3], blocks([0, 2, 1, 1])),
        ("family-t9", vec![9], blocks([2, 1, 3, 3])),
        ("family-t11", vec![11], blocks([0, 1, 9, 6])),
        ("family-t13", vec![13], blocks([0, 3, 11, 8])),
        ("family-t17", vec![17], blocks([0, 7, 15, 12])),
    ];
    entries
        .into_iter()
        .map(|(name, torsion, blocks)| {
            let t: i64 = torsion.iter().product::<i64>().max(1);
            let torsion = if torsion.is_empty() || torsion[0] == 1 {
                vec![]
            } else {
                torsion
            };
            let group = AbGroup::new(1, torsion);
            let q = group.torsion_len();
            let data = RingData {
                group: group.clone(),
                blocks: blocks
                    .into_iter()
                    .map(|(l, ws)| BlockData {
                        exponents: l,
                        weights: ws
                            .into_iter()
                            .map(|(f, t)| group.elem(&[f], &t[..q]))
                            .collect(),
                    })
                    .collect(),
                free_weights: vec![],
            };
            Fixture {
                name,
                data,
                expected: ExpectedInvariants {
                    dimension: 2,
                    picard_index: 3 * t,
                    self_intersection: (1, 3 * t),
                    gorenstein_index: 3 * t,
                    moduli_count: 0,
                },
            }
        })
        .collect()
}

/// Every fixture known to the crate.
pub fn all_fixtures() -> Vec<Fixture> {
    let mut v = classified_surfaces();
    v.extend(torsion_grading_family());
    v
}
