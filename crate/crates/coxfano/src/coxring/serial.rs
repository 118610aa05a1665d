//! JSON encoding of ring data.
//!
//! The wire format spells out the derived quantities (`r`, `m`,
//! `moduli_count`) so that files are self-describing; decoding re-derives and
//! cross-checks them.  Degrees are encoded as `[free, [torsion residues]]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{BlockData, RingData};
use crate::intlin::AbGroup;

/// A degree: free part plus torsion residues.
pub type WeightJson = (i64, Vec<i64>);

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BlockJson {
    pub n: usize,
    pub l: Vec<i64>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

/// The JSON view of a [`RingData`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RingDataJson {
    pub r: usize,
    pub blocks: Vec<BlockJson>,
    pub m: usize,
    pub group: GroupJson,
    pub weights: Vec<WeightJson>,
    pub free_weights: Vec<WeightJson>,
    pub moduli_count: usize,
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum DecodeError {
    #[error("field `r` is {given}, but {blocks} block(s) imply r = {expected}")]
    BadR {
        given: usize,
        blocks: usize,
        expected: usize,
    },
    #[error("field `m` is {given}, but {expected} free degree(s) are listed")]
    BadM { given: usize, expected: usize },
    #[error("field `moduli_count` is {given}, expected {expected}")]
    BadModuliCount { given: usize, expected: usize },
    #[error("block {index}: field `n` is {n}, but {listed} exponent(s) are listed")]
    BadBlockArity {
        index: usize,
        n: usize,
        listed: usize,
    },
    #[error("{given} degree(s) listed for {expected} block variable(s)")]
    BadWeightCount { given: usize, expected: usize },
    #[error("torsion moduli {moduli:?} do not form a divisibility chain of factors >= 2")]
    BadTorsionChain { moduli: Vec<i64> },
    #[error("degree {index} has {given} torsion residue(s), expected {expected}")]
    BadTorsionArity {
        index: usize,
        given: usize,
        expected: usize,
    },
}

pub(super) fn to_json(data: &RingData) -> RingDataJson {
    let weight = |w: &crate::intlin::GroupElem| (w.free()[0], w.torsion().to_vec());
    RingDataJson {
        r: data.r(),
        blocks: data
            .blocks
            .iter()
            .map(|b| BlockJson {
                n: b.len(),
                l: b.exponents.clone(),
            })
            .collect(),
        m: data.m(),
        group: GroupJson {
            free_rank: data.group.free_rank(),
            torsion: data.group.torsion().to_vec(),
        },
        weights: data
            .blocks
            .iter()
            .flat_map(|b| b.weights.iter().map(weight))
            .collect(),
        free_weights: data.free_weights.iter().map(weight).collect(),
        moduli_count: data.moduli_count(),
    }
}

pub(super) fn from_json(json: &RingDataJson) -> Result<RingData, DecodeError> {
    let expected_r = json.blocks.len().saturating_sub(1);
    if json.r != expected_r {
        return Err(DecodeError::BadR {
            given: json.r,
            blocks: json.blocks.len(),
            expected: expected_r,
        });
    }
    if json.m != json.free_weights.len() {
        return Err(DecodeError::BadM {
            given: json.m,
            expected: json.free_weights.len(),
        });
    }
    let expected_moduli = expected_r.saturating_sub(2);
    if json.moduli_count != expected_moduli {
        return Err(DecodeError::BadModuliCount {
            given: json.moduli_count,
            expected: expected_moduli,
        });
    }
    for (index, b) in json.blocks.iter().enumerate() {
        if b.n != b.l.len() {
            return Err(DecodeError::BadBlockArity {
                index,
                n: b.n,
                listed: b.l.len(),
            });
        }
    }
    let n_total: usize = json.blocks.iter().map(|b| b.n).sum();
    if json.weights.len() != n_total {
        return Err(DecodeError::BadWeightCount {
            given: json.weights.len(),
            expected: n_total,
        });
    }
    for (i, &t) in json.group.torsion.iter().enumerate() {
        let chained = t >= 2 && (i == 0 || t % json.group.torsion[i - 1] == 0);
        if !chained {
            return Err(DecodeError::BadTorsionChain {
                moduli: json.group.torsion.clone(),
            });
        }
    }
    let group = AbGroup::new(json.group.free_rank, json.group.torsion.clone());
    let q = group.torsion_len();
    let decode =
        |index: usize, (f, t): &WeightJson| -> Result<crate::intlin::GroupElem, DecodeError> {
            if t.len() != q {
                return Err(DecodeError::BadTorsionArity {
                    index,
                    given: t.len(),
                    expected: q,
                });
            }
            // The grading group may have free rank != 1 in a file; only rank-one
            // groups pass validation, but decoding stays total.
            let mut free = vec![0i64; group.free_rank()];
            if let Some(slot) = free.first_mut() {
                *slot = *f;
            }
            Ok(group.elem(&free, t))
        };
    let mut weights = Vec::with_capacity(json.weights.len());
    for (i, w) in json.weights.iter().enumerate() {
        weights.push(decode(i, w)?);
    }
    let mut blocks = Vec::with_capacity(json.blocks.len());
    let mut taken = 0usize;
    for b in &json.blocks {
        blocks.push(BlockData {
            exponents: b.l.clone(),
            weights: weights[taken..taken + b.n].to_vec(),
        });
        taken += b.n;
    }
    let mut free_weights = Vec::with_capacity(json.free_weights.len());
    for (i, w) in json.free_weights.iter().enumerate() {
        free_weights.push(decode(json.weights.len() + i, w)?);
    }
    Ok(RingData {
        group,
        blocks,
        free_weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::AbGroup;

    fn sample() -> RingData {
        let k = AbGroup::new(1, vec![2]);
        RingData {
            group: k.clone(),
            blocks: vec![
                BlockData {
                    exponents: vec![1, 3],
                    weights: vec![k.elem(&[1], &[0]), k.elem(&[1], &[0])],
                },
                BlockData {
                    exponents: vec![4],
                    weights: vec![k.elem(&[1], &[1])],
                },
                BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[2], &[1])],
                },
            ],
            free_weights: vec![],
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let data = sample();
        let text = serde_json::to_string(&data.to_json()).unwrap();
        let parsed: RingDataJson = serde_json::from_str(&text).unwrap();
        let back = RingData::from_json(&parsed).unwrap();
        assert_eq!(back, data);
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
    }

    #[test]
    fn json_shape_matches_wire_format() {
        let v: serde_json::Value = serde_json::to_value(sample().to_json()).unwrap();
        assert_eq!(v["r"], 2);
        assert_eq!(v["m"], 0);
        assert_eq!(v["moduli_count"], 0);
        assert_eq!(v["blocks"][0]["n"], 2);
        assert_eq!(v["blocks"][0]["l"], serde_json::json!([1, 3]));
        assert_eq!(v["group"]["torsion"], serde_json::json!([2]));
        assert_eq!(v["weights"][2], serde_json::json!([1, [1]]));
    }

    #[test]
    fn inconsistent_fields_are_rejected() {
        let mut j = sample().to_json();
        j.r = 5;
        assert!(matches!(
            RingData::from_json(&j),
            Err(DecodeError::BadR { .. })
        ));

        let mut j = sample().to_json();
        j.m = 1;
        assert!(matches!(
            RingData::from_json(&j),
            Err(DecodeError::BadM { .. })
        ));

        let mut j = sample().to_json();
        j.moduli_count = 3;
        assert!(matches!(
            RingData::from_json(&j),
            Err(DecodeError::BadModuliCount { .. })
        ));

        let mut j = sample().to_json();
        j.weights.pop();
        assert!(matches!(
            RingData::from_json(&j),
            Err(DecodeError::BadWeightCount { .. })
        ));

        let mut j = sample().to_json();
        j.group.torsion = vec![2, 3];
        assert!(matches!(
            RingData::from_json(&j),
            Err(DecodeError::BadTorsionChain { .. })
        ));

        let mut j = sample().to_json();
        j.weights[0].1.push(0);
        assert!(matches!(
            RingData::from_json(&j),
            Err(DecodeError::BadTorsionArity { .. })
        ));
    }
}
