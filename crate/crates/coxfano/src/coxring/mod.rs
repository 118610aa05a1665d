//! Graded trinomial ring data: the discrete input from which every variety in
//! the classification is rebuilt.
//!
//! A datum consists of `r + 1` blocks of variables `T_{i1}, ..., T_{i n_i}`
//! with exponents `l_{ij} >= 1`, plus `m` extra free variables, all graded by
//! a group `K = Z ⊕ K^t` of free rank one.  For `r >= 2` the ring carries
//! `r - 1` trinomial relations between the block monomials
//! `T_i^{l_i} = prod_j T_{ij}^{l_{ij}}`, which forces all block monomials to
//! share one degree.  A datum with no blocks is a plain polynomial ring and
//! describes a toric variety.

mod canonical;
mod serial;

pub use serial::{DecodeError, RingDataJson};

use crate::intlin::{row_hermite_form, smith_normal_form, AbGroup, GroupElem, IntMatrix, Subgroup};

/// One block of variables: exponents `l_{ij}` and degrees `deg T_{ij}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BlockData {
    pub exponents: Vec<i64>,
    pub weights: Vec<GroupElem>,
}

impl BlockData {
    /// Number of variables in the block.
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

/// A full graded ring datum.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct RingData {
    pub group: AbGroup,
    pub blocks: Vec<BlockData>,
    pub free_weights: Vec<GroupElem>,
}

/// Outcome of one named validation check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// The collected results of [`RingData::validate`].
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// The names of all failed checks.
    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name,
            passed,
            detail: detail.into(),
        });
    }
}

impl RingData {
    /// Number of relations plus one; the blocks are indexed `0, ..., r`.
    pub fn r(&self) -> usize {
        self.blocks.len().saturating_sub(1)
    }

    /// Total number of block variables.
    pub fn n_total(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    /// Number of free variables.
    pub fn m(&self) -> usize {
        self.free_weights.len()
    }

    /// Total number of variables.
    pub fn var_count(&self) -> usize {
        self.n_total() + self.m()
    }

    /// All degrees in variable order: block variables first, then free ones.
    pub fn weight_list(&self) -> Vec<GroupElem> {
        let mut w: Vec<GroupElem> = self
            .blocks
            .iter()
            .flat_map(|b| b.weights.iter().cloned())
            .collect();
        w.extend(self.free_weights.iter().cloned());
        w
    }

    /// Whether the datum has trinomial relations (at least three blocks).
    pub fn has_relations(&self) -> bool {
        self.blocks.len() >= 3
    }

    /// A datum without blocks is a polynomial ring, hence toric.
    pub fn is_toric(&self) -> bool {
        !self.has_relations()
    }

    /// Dimension of the encoded variety.
    pub fn dimension(&self) -> usize {
        if self.has_relations() {
            self.n_total() + self.m() - self.r()
        } else {
            self.n_total() + self.m() - 1
        }
    }

    /// Dimension of the family the ring moves in (its relation coefficients):
    /// `r - 2` relations beyond the first can be scaled independently.
    pub fn moduli_count(&self) -> usize {
        self.r().saturating_sub(2)
    }

    /// Degree of the block monomial `T_i^{l_i}`.
    pub fn monomial_degree(&self, i: usize) -> GroupElem {
        let block = &self.blocks[i];
        let mut acc = self.group.zero();
        for (l, w) in block.exponents.iter().zip(&block.weights) {
            acc = self.group.add(&acc, &self.group.smul(*l, w));
        }
        acc
    }

    /// The common degree of the relations, when relations are present.
    pub fn relation_degree(&self) -> Option<GroupElem> {
        self.has_relations().then(|| self.monomial_degree(0))
    }

    /// The anticanonical class: the sum of all variable degrees minus
    /// `(r - 1)` times the relation degree.
    pub fn anticanonical_class(&self) -> GroupElem {
        let mut acc = self.group.zero();
        for w in self.weight_list() {
            acc = self.group.add(&acc, &w);
        }
        if let Some(gamma) = self.relation_degree() {
            let r = self.r() as i64;
            acc = self.group.sub(&acc, &self.group.smul(r - 1, &gamma));
        }
        acc
    }

    /// A variety is Fano exactly when its anticanonical class is ample, i.e.
    /// has positive free part.
    pub fn is_fano(&self) -> bool {
        self.anticanonical_class().free()[0] > 0
    }

    /// Per-block gcd of the exponents.
    pub fn block_exponent_gcds(&self) -> Vec<i64> {
        self.blocks
            .iter()
            .map(|b| {
                b.exponents
                    .iter()
                    .fold(0i64, |acc, &l| num_integer::gcd(acc, l))
            })
            .collect()
    }

    /// The degree map `Z^(n+m) -> K` as a matrix: first row the free parts,
    /// then one row per torsion coordinate.
    pub fn degree_matrix(&self) -> IntMatrix {
        let weights = self.weight_list();
        let q = self.group.torsion_len();
        let mut mat = IntMatrix::zero(1 + q, weights.len());
        for (j, w) in weights.iter().enumerate() {
            mat.set(0, j, w.free()[0]);
            for (i, &t) in w.torsion().iter().enumerate() {
                mat.set(1 + i, j, t);
            }
        }
        mat
    }

    /// A Hermite basis (rows) of the kernel of the degree map inside
    /// `Z^(n+m)`: integer exponent vectors of degree zero.
    pub fn degree_kernel_basis(&self) -> IntMatrix {
        let nm = self.var_count();
        let q = self.group.torsion_len();
        let deg = self.degree_matrix();
        // Augment with the torsion moduli so that "zero degree" means zero
        // free part and torsion part divisible by the moduli.
        let mut m = IntMatrix::zero(1 + q, nm + q);
        for i in 0..1 + q {
            for j in 0..nm {
                m.set(i, j, deg.get(i, j));
            }
        }
        for (i, &t) in self.group.torsion().iter().enumerate() {
            m.set(1 + i, nm + i, t);
        }
        let kernel = m.kernel_basis();
        let rows: Vec<Vec<i64>> = kernel.iter().map(|v| v[..nm].to_vec()).collect();
        let mat = if rows.is_empty() {
            IntMatrix::zero(0, nm)
        } else {
            IntMatrix::from_rows(&rows)
        };
        row_hermite_form(&mat)
    }

    /// The exponent vector of `T_i^{l_i} - T_0^{l_0}` in `Z^(n+m)`.
    fn relation_row(&self, i: usize) -> Vec<i64> {
        let nm = self.var_count();
        let mut row = vec![0i64; nm];
        let mut offset = 0usize;
        for (b, block) in self.blocks.iter().enumerate() {
            for (j, &l) in block.exponents.iter().enumerate() {
                if b == 0 {
                    row[offset + j] = -l;
                } else if b == i {
                    row[offset + j] = l;
                }
            }
            offset += block.len();
        }
        row
    }

    /// Runs every structural check and reports the outcome of each.
    ///
    /// The checks, in order: `shape` (well-formed blocks, grading group of
    /// free rank one), `positivity` (all free parts positive), `homogeneity`
    /// (block monomials share one degree), `non-redundancy` (no block is a
    /// single variable with exponent one), `almost-freeness` (any `n + m - 1`
    /// degrees generate `K`), and `saturation` (the relation exponent lattice
    /// is primitive inside the kernel of the degree map, so the grading is the
    /// finest one making the relations homogeneous).
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();

        let mut shape_ok = true;
        let mut shape_msgs: Vec<String> = Vec::new();
        if self.group.free_rank() != 1 {
            shape_ok = false;
            shape_msgs.push(format!(
                "grading group has free rank {}",
                self.group.free_rank()
            ));
        }
        if matches!(self.blocks.len(), 1 | 2) {
            shape_ok = false;
            shape_msgs.push(format!(
                "{} block(s) cannot carry a trinomial relation",
                self.blocks.len()
            ));
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if b.is_empty() {
                shape_ok = false;
                shape_msgs.push(format!("block {i} is empty"));
            }
            if b.exponents.len() != b.weights.len() {
                shape_ok = false;
                shape_msgs.push(format!("block {i} has mismatched exponent/degree counts"));
            }
            if b.exponents.iter().any(|&l| l < 1) {
                shape_ok = false;
                shape_msgs.push(format!("block {i} has an exponent < 1"));
            }
        }
        if self.var_count() == 0 {
            shape_ok = false;
            shape_msgs.push("no variables".into());
        }
        report.push("shape", shape_ok, shape_msgs.join("; "));
        if !shape_ok {
            return report;
        }

        let bad: Vec<String> = self
            .weight_list()
            .iter()
            .enumerate()
            .filter(|(_, w)| w.free()[0] <= 0)
            .map(|(j, w)| format!("variable {j} has free degree {}", w.free()[0]))
            .collect();
        report.push("positivity", bad.is_empty(), bad.join("; "));

        let mut homogeneous = true;
        if self.has_relations() {
            let gamma = self.monomial_degree(0);
            for i in 1..self.blocks.len() {
                if self.monomial_degree(i) != gamma {
                    homogeneous = false;
                }
            }
            report.push(
                "homogeneity",
                homogeneous,
                if homogeneous {
                    String::new()
                } else {
                    "block monomial degrees differ".into()
                },
            );

            let redundant: Vec<String> = self
                .blocks
                .iter()
                .enumerate()
                .filter(|(_, b)| b.len() == 1 && b.exponents[0] == 1)
                .map(|(i, _)| format!("block {i} is a single variable of exponent 1"))
                .collect();
            report.push("non-redundancy", redundant.is_empty(), redundant.join("; "));
        }

        let weights = self.weight_list();
        let mut not_free: Vec<usize> = Vec::new();
        for skip in 0..weights.len() {
            let rest: Vec<GroupElem> = weights
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != skip)
                .map(|(_, w)| w.clone())
                .collect();
            if !Subgroup::generates(&self.group, &rest) {
                not_free.push(skip);
            }
        }
        report.push(
            "almost-freeness",
            not_free.is_empty(),
            if not_free.is_empty() {
                String::new()
            } else {
                format!("degrees fail to generate after dropping variable(s) {not_free:?}")
            },
        );

        if self.has_relations() && homogeneous {
            let basis = self.degree_kernel_basis();
            let basis_t = basis.transpose();
            let mut coeff_rows: Vec<Vec<i64>> = Vec::new();
            let mut inside = true;
            for i in 1..self.blocks.len() {
                match basis_t.solve(&self.relation_row(i)) {
                    Some(c) => coeff_rows.push(c),
                    None => inside = false,
                }
            }
            if !inside {
                report.push(
                    "saturation",
                    false,
                    "a relation exponent vector does not lie in the degree kernel",
                );
            } else {
                let c = IntMatrix::from_rows(&coeff_rows);
                let factors: Vec<i64> = smith_normal_form(&c)
                    .diagonal()
                    .into_iter()
                    .filter(|&d| d != 0)
                    .collect();
                let saturated = factors.iter().all(|&d| d == 1);
                report.push(
                    "saturation",
                    saturated,
                    if saturated {
                        String::new()
                    } else {
                        format!("relation lattice has invariant factors {factors:?} in the degree kernel")
                    },
                );
            }
        }

        report
    }

    /// The canonical representative of the isomorphism class of this datum.
    pub fn canonical_form(&self) -> RingData {
        canonical::canonical_form(self)
    }

    /// Whether two data encode isomorphic graded rings.
    pub fn equivalent(&self, other: &RingData) -> bool {
        self.group == other.group && self.canonical_form() == other.canonical_form()
    }

    /// JSON-facing view of the datum.
    pub fn to_json(&self) -> RingDataJson {
        serial::to_json(self)
    }

    /// Rebuilds a datum from its JSON view.
    pub fn from_json(json: &RingDataJson) -> Result<RingData, DecodeError> {
        serial::from_json(json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn projective_plane() -> RingData {
        let k = AbGroup::free(1);
        RingData {
            group: k.clone(),
            blocks: vec![],
            free_weights: vec![k.elem(&[1], &[]); 3],
        }
    }

    /// Three singleton blocks of exponent 2 with the (Z/2)^2 torsion grading
    /// that makes the trinomial a genuine Cox ring.
    fn torsion_quadric() -> RingData {
        let k = AbGroup::new(1, vec![2, 2]);
        RingData {
            group: k.clone(),
            blocks: vec![
                BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[1], &[1, 0])],
                },
                BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[1], &[1, 1])],
                },
                BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[1], &[0, 1])],
                },
            ],
            free_weights: vec![k.elem(&[1], &[0, 0])],
        }
    }

    #[test]
    fn toric_projective_plane() {
        let p2 = projective_plane();
        assert!(p2.is_toric());
        assert_eq!(p2.dimension(), 2);
        assert_eq!(p2.moduli_count(), 0);
        assert!(p2.validate().is_valid());
        assert!(p2.is_fano());
        assert_eq!(p2.anticanonical_class(), p2.group.elem(&[3], &[]));
        assert_eq!(p2.relation_degree(), None);
    }

    #[test]
    fn torsion_quadric_is_valid() {
        let x = torsion_quadric();
        assert!(!x.is_toric());
        assert_eq!(x.r(), 2);
        assert_eq!(x.dimension(), 2);
        let report = x.validate();
        assert!(report.is_valid(), "failures: {:?}", report.failures());
        assert_eq!(x.relation_degree(), Some(x.group.elem(&[2], &[0, 0])));
        // -K = (1+1+1+1) - 1*2 = 2 on the free part.
        assert_eq!(x.anticanonical_class().free()[0], 2);
        assert!(x.is_fano());
    }

    #[test]
    fn coarse_grading_fails_saturation() {
        // The same trinomial graded only by Z: the grading is not the finest
        // one, so the datum must be rejected.
        let k = AbGroup::free(1);
        let x = RingData {
            group: k.clone(),
            blocks: (0..3)
                .map(|_| BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[1], &[])],
                })
                .collect(),
            free_weights: vec![k.elem(&[1], &[])],
        };
        let report = x.validate();
        assert!(!report.is_valid());
        assert_eq!(report.failures(), vec!["saturation"]);
    }

    #[test]
    fn redundant_block_is_flagged() {
        let k = AbGroup::free(1);
        let x = RingData {
            group: k.clone(),
            blocks: vec![
                BlockData {
                    exponents: vec![1],
                    weights: vec![k.elem(&[2], &[])],
                },
                BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[1], &[])],
                },
                BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[1], &[])],
                },
            ],
            free_weights: vec![],
        };
        let report = x.validate();
        assert!(report.failures().contains(&"non-redundancy"));
    }

    #[test]
    fn almost_freeness_detects_gaps() {
        // Weights {2, 2, 2} in Z: dropping any variable leaves a subgroup of
        // index 2.
        let k = AbGroup::free(1);
        let x = RingData {
            group: k.clone(),
            blocks: vec![],
            free_weights: vec![k.elem(&[2], &[]); 3],
        };
        let report = x.validate();
        assert!(report.failures().contains(&"almost-freeness"));
    }

    #[test]
    fn inhomogeneous_data_is_flagged() {
        let k = AbGroup::free(1);
        let x = RingData {
            group: k.clone(),
            blocks: vec![
                BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[1], &[])],
                },
                BlockData {
                    exponents: vec![3],
                    weights: vec![k.elem(&[1], &[])],
                },
                BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[1], &[])],
                },
            ],
            free_weights: vec![k.elem(&[1], &[])],
        };
        assert!(x.validate().failures().contains(&"homogeneity"));
    }

    #[test]
    fn fano_condition_reads_relation_degree() {
        // gamma = 6, weights sum = 2+3+... : pick one Fano, one not.
        let k = AbGroup::free(1);
        let mk = |w0: i64, l: i64| BlockData {
            exponents: vec![l],
            weights: vec![k.elem(&[w0], &[])],
        };
        // 6 = 1*6 = 2*3 = 3*2: -K free part = (1+2+3) - 6 = 0, not Fano.
        let x = RingData {
            group: k.clone(),
            blocks: vec![mk(1, 6), mk(2, 3), mk(3, 2)],
            free_weights: vec![],
        };
        assert!(!x.is_fano());
        // Add a free variable: -K = 1 > 0.
        let y = RingData {
            free_weights: vec![k.elem(&[1], &[])],
            ..x.clone()
        };
        assert!(y.is_fano());
    }
}
