//! Exhaustive, bounded enumeration of admissible data at a fixed dimension
//! and Picard index.
//!
//! The search walks the five shape cases, enumerates free (degree-part) data
//! within the case bounds, extends each free datum by all torsion gradings,
//! filters by validity, the Fano condition and the requested Picard index,
//! and deduplicates by canonical form.  All arithmetic is exact and the
//! result order is deterministic, independent of the number of worker
//! threads.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    case_of, count_upper_bound, search_bounds, toric_count_bound, CaseTag, SearchBounds,
};
use crate::coxring::{BlockData, RingData};
use crate::intlin::{AbGroup, Subgroup};
use crate::invariants::{compute_all, ell_divisibility_check, picard_index, VarietyInvariants};

/// Restriction on the torsion part of the grading group.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionFilter {
    #[default]
    Any,
    NontrivialOnly,
    TrivialOnly,
}

/// Options steering [`classify`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub dimension: usize,
    pub picard_index: i64,
    pub torsion_filter: TorsionFilter,
    /// Also enumerate data without relations.
    pub include_toric: bool,
    /// Keep only data whose anticanonical class has positive free part.
    pub require_fano: bool,
    /// Restrict to relations that involve only singleton blocks.
    pub separated_only: bool,
    /// Abort after this many candidate visits.
    pub max_candidates: u64,
    /// Worker threads; `1` runs strictly sequentially.
    pub jobs: usize,
}

impl ClassifyOptions {
    pub fn new(dimension: usize, picard_index: i64) -> Self {
        ClassifyOptions {
            dimension,
            picard_index,
            torsion_filter: TorsionFilter::Any,
            include_toric: false,
            require_fano: true,
            separated_only: false,
            max_candidates: 100_000_000,
            jobs: 1,
        }
    }
}

/// One deformation class found by the search.
#[derive(Clone, Debug)]
pub struct ClassifiedVariety {
    /// Canonical representative of the datum.
    pub data: RingData,
    pub invariants: VarietyInvariants,
    pub case_tag: CaseTag,
    pub moduli_count: usize,
}

/// Counting summary for one parameter pair.
#[derive(Clone, Debug)]
pub struct CountReport {
    pub dimension: usize,
    pub picard_index: i64,
    pub nontoric: usize,
    pub toric: usize,
    pub upper_bound: BigUint,
    pub toric_upper_bound: BigUint,
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("candidate budget of {0} visits exhausted")]
    ResourceCap(u64),
    #[error("invalid options: {0}")]
    InvalidOptions(String),
}

/// All finite abelian groups whose order divides `mu`, as invariant factor
/// chains, in a fixed order (by order, then by chain length, then by chain).
pub fn enumerate_torsion_groups(mu: i64) -> Vec<AbGroup> {
    assert!(mu >= 1);
    let mut out = Vec::new();
    for t in divisors(mu) {
        let mut chains = chains_with_product(t, t);
        chains.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for c in chains {
            out.push(AbGroup::new(0, c));
        }
    }
    out
}

/// Ascending divisibility chains `c_1 | c_2 | ... | c_q` with product `n`,
/// every `c_i >= 2` and the last element dividing `cap`.
fn chains_with_product(n: i64, cap: i64) -> Vec<Vec<i64>> {
    if n == 1 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for c in divisors(n) {
        if c >= 2 && cap % c == 0 {
            for mut chain in chains_with_product(n / c, c) {
                chain.push(c);
                out.push(chain);
            }
        }
    }
    out
}

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|k| n % k == 0).collect()
}

fn lcm_slice(values: &[i64]) -> i64 {
    values.iter().fold(1i64, |a, &b| a.lcm(&b))
}

/// Tuples of the given length over `values` with non-decreasing entries.
fn nondecreasing_tuples(values: &[i64], len: usize) -> Vec<Vec<i64>> {
    fn rec(values: &[i64], len: usize, start: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..values.len() {
            cur.push(values[i]);
            rec(values, len, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(values, len, 0, &mut Vec::new(), &mut out);
    out
}

/// A degree datum without its torsion parts: per block the `(exponent,
/// free weight)` pairs, plus the free-variable weights.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeDatum {
    pub blocks: Vec<Vec<(i64, i64)>>,
    pub free_weights: Vec<i64>,
}

/// All solutions of one block of size `n`: non-decreasing `(l, w)` pairs with
/// `sum l*w = gamma0`, weights dividing `mu` and exponents within `cap`.
fn big_block_solutions(
    gamma0: i64,
    n: usize,
    bounds: &SearchBounds,
    mu: i64,
) -> Vec<Vec<(i64, i64)>> {
    let cap = bounds.big_exponent_cap();
    let weights = divisors(mu);
    let mut out = Vec::new();
    let mut cur: Vec<(i64, i64)> = Vec::new();
    fn rec(
        rem: i64,
        slots: usize,
        min_pair: (i64, i64),
        cap_max: i64,
        weights: &[i64],
        cur: &mut Vec<(i64, i64)>,
        out: &mut Vec<Vec<(i64, i64)>>,
    ) {
        if slots == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for l in min_pair.0..=cap_max {
            // Every remaining pair costs at least `l`.
            if l * slots as i64 > rem {
                break;
            }
            for &w in weights {
                if l == min_pair.0 && w < min_pair.1 {
                    continue;
                }
                let cost = l * w;
                if cost + (slots as i64 - 1) * l > rem {
                    break;
                }
                cur.push((l, w));
                rec(rem - cost, slots - 1, (l, w), cap_max, weights, cur, out);
                cur.pop();
            }
        }
    }
    rec(
        gamma0,
        n,
        (1, 1),
        cap.max_value(),
        &weights,
        &mut cur,
        &mut out,
    );
    out
}

struct FanoBudget {
    /// `(r - 1) * gamma0`, which the total weight sum must exceed.
    lhs: i64,
    /// Weight already accumulated from the blocks of size `>= 2`.
    base: i64,
    /// Largest possible contribution of the free variables.
    extra: i64,
}

/// Descending singleton-block sequences `(l, gamma0/l)` of the given length.
/// Pairwise exponent gcds (also against `prior_ells`) must divide `mu`.
fn tail_sequences(
    gamma0: i64,
    count: usize,
    bounds: &SearchBounds,
    r: usize,
    mu: i64,
    prior_ells: &[i64],
    fano: Option<&FanoBudget>,
) -> Vec<Vec<(i64, i64)>> {
    let mut divs: Vec<i64> = divisors(gamma0)
        .into_iter()
        .filter(|&l| l >= 2 && bounds.tail_exponent_cap().allows(l))
        .collect();
    divs.sort_by_key(|&l| std::cmp::Reverse(l));
    let mut out = Vec::new();
    let mut cur: Vec<(i64, i64)> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        gamma0: i64,
        divs: &[i64],
        count: usize,
        bounds: &SearchBounds,
        r: usize,
        mu: i64,
        prior_ells: &[i64],
        fano: Option<&FanoBudget>,
        pos: usize,
        prev_l: i64,
        sum_w: i64,
        cur: &mut Vec<(i64, i64)>,
        out: &mut Vec<Vec<(i64, i64)>>,
    ) {
        if pos == count {
            out.push(cur.clone());
            return;
        }
        for &l in divs {
            if l > prev_l {
                continue;
            }
            if bounds.exponent_divides_mu() && mu % l != 0 {
                continue;
            }
            let w = gamma0 / l;
            if !bounds.tail_weight_cap(r, pos).allows(w) {
                continue;
            }
            if prior_ells
                .iter()
                .chain(cur.iter().map(|(e, _)| e))
                .any(|&e| mu % e.gcd(&l) != 0)
            {
                continue;
            }
            if let Some(f) = fano {
                let remaining = (count - pos - 1) as i64;
                let optimistic = f.base + sum_w + w + remaining * (gamma0 / 2) + f.extra;
                if f.lhs >= optimistic {
                    continue;
                }
            }
            cur.push((l, w));
            rec(
                gamma0,
                divs,
                count,
                bounds,
                r,
                mu,
                prior_ells,
                fano,
                pos + 1,
                l,
                sum_w + w,
                cur,
                out,
            );
            cur.pop();
        }
    }
    rec(
        gamma0,
        &divs,
        count,
        bounds,
        r,
        mu,
        prior_ells,
        fano,
        0,
        i64::MAX,
        0,
        &mut cur,
        &mut out,
    );
    out
}

/// All block assemblies at relation degree `gamma0` for the given block
/// sizes (sizes `>= 2` first, then singletons), within the case bounds for
/// `r` relations plus one.  Only the structural prunes are applied here; the
/// Fano condition and the Picard index are filtered later.
pub fn free_solutions(
    gamma0: i64,
    block_sizes: &[usize],
    bounds: &SearchBounds,
    r: usize,
) -> Vec<Vec<Vec<(i64, i64)>>> {
    assemble_blocks(gamma0, block_sizes, bounds, r, bounds.picard_index, None)
}

fn assemble_blocks(
    gamma0: i64,
    block_sizes: &[usize],
    bounds: &SearchBounds,
    r: usize,
    mu: i64,
    fano_extra: Option<i64>,
) -> Vec<Vec<Vec<(i64, i64)>>> {
    let big_sizes: Vec<usize> = block_sizes.iter().copied().filter(|&n| n > 1).collect();
    let tail_count = block_sizes.len() - big_sizes.len();

    // Solutions per big block; equal sizes share one list.
    let big_lists: Vec<Vec<Vec<(i64, i64)>>> = big_sizes
        .iter()
        .map(|&n| big_block_solutions(gamma0, n, bounds, mu))
        .collect();
    if big_lists.iter().any(|l| l.is_empty()) {
        return Vec::new();
    }

    let mut out = Vec::new();
    let mut idx = vec![0usize; big_lists.len()];
    'combos: loop {
        // For equal sizes only take non-decreasing index tuples; the block
        // order inside a datum is immaterial.
        let ordered = idx
            .windows(2)
            .zip(big_sizes.windows(2))
            .all(|(ij, nm)| nm[0] != nm[1] || ij[0] <= ij[1]);
        if ordered {
            let combo: Vec<&Vec<(i64, i64)>> =
                idx.iter().zip(&big_lists).map(|(&i, l)| &l[i]).collect();
            let ells: Vec<i64> = combo
                .iter()
                .map(|b| b.iter().fold(0i64, |a, &(l, _)| a.gcd(&l)))
                .collect();
            let gcd_ok = (0..ells.len())
                .all(|i| (i + 1..ells.len()).all(|j| mu % ells[i].gcd(&ells[j]) == 0));
            if gcd_ok {
                let base: i64 = combo.iter().flat_map(|b| b.iter()).map(|&(_, w)| w).sum();
                let budget = fano_extra.map(|extra| FanoBudget {
                    lhs: (r as i64 - 1) * gamma0,
                    base,
                    extra,
                });
                for tails in
                    tail_sequences(gamma0, tail_count, bounds, r, mu, &ells, budget.as_ref())
                {
                    let mut blocks: Vec<Vec<(i64, i64)>> =
                        combo.iter().map(|b| (*b).clone()).collect();
                    blocks.extend(tails.iter().map(|&p| vec![p]));
                    out.push(blocks);
                }
            }
        }
        // Odometer.
        let mut k = big_lists.len();
        loop {
            if k == 0 {
                break 'combos;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < big_lists[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
    out
}

/// All torsion gradings of a free datum by the torsion group `kt` (a group
/// with free rank zero).  Every returned datum is homogeneous and almost
/// free by construction.
pub fn torsion_gradings(free: &FreeDatum, kt: &AbGroup) -> Vec<RingData> {
    let counter = AtomicU64::new(0);
    torsion_gradings_counted(free, kt, &counter, u64::MAX).expect("no cap")
}

fn torsion_gradings_counted(
    free: &FreeDatum,
    kt: &AbGroup,
    visits: &AtomicU64,
    max_visits: u64,
) -> Result<Vec<RingData>, ClassifyError> {
    assert_eq!(kt.free_rank(), 0, "torsion group expected");
    let torsion: Vec<i64> = kt.torsion().to_vec();
    let full = AbGroup::new(1, torsion.clone());
    let m = free.free_weights.len();
    let free_choices: Vec<Vec<i64>> = kt.all_elements().map(|e| e.torsion().to_vec()).collect();

    let mut out = Vec::new();
    let mut emit = |block_res: Vec<Vec<Vec<i64>>>, free_res: Vec<Vec<i64>>| {
        if visits.fetch_add(1, Ordering::Relaxed) + 1 > max_visits {
            return Err(ClassifyError::ResourceCap(max_visits));
        }
        let data = assemble_data(free, &full, &block_res, &free_res);
        if is_almost_free(&data) {
            out.push(data);
        }
        Ok(())
    };

    if free.blocks.is_empty() {
        stream_product(&vec![free_choices.clone(); m], |combo| {
            emit(Vec::new(), combo.to_vec())
        })?;
        return Ok(out);
    }

    for gamma in kt.all_elements() {
        let gamma_res = gamma.torsion();
        let mut lists: Vec<Vec<Vec<Vec<i64>>>> = Vec::with_capacity(free.blocks.len());
        let mut feasible = true;
        for block in &free.blocks {
            let assignments = block_assignments(block, gamma_res, &torsion, kt);
            if assignments.is_empty() {
                feasible = false;
                break;
            }
            lists.push(assignments);
        }
        if !feasible {
            continue;
        }
        let mut all_lists: Vec<Vec<ResChoice>> = lists
            .into_iter()
            .map(|l| l.into_iter().map(ResChoice::Block).collect())
            .collect();
        for _ in 0..m {
            all_lists.push(free_choices.iter().cloned().map(ResChoice::Free).collect());
        }
        let nb = free.blocks.len();
        stream_product(&all_lists, |combo| {
            let block_res: Vec<Vec<Vec<i64>>> = combo[..nb]
                .iter()
                .map(|c| match c {
                    ResChoice::Block(b) => b.clone(),
                    ResChoice::Free(_) => unreachable!(),
                })
                .collect();
            let free_res: Vec<Vec<i64>> = combo[nb..]
                .iter()
                .map(|c| match c {
                    ResChoice::Free(f) => f.clone(),
                    ResChoice::Block(_) => unreachable!(),
                })
                .collect();
            emit(block_res, free_res)
        })?;
    }
    Ok(out)
}

#[derive(Clone)]
enum ResChoice {
    Block(Vec<Vec<i64>>),
    Free(Vec<i64>),
}

/// Streams the cartesian product of the lists, calling `f` with one element
/// reference per list.  An empty list set yields a single empty combination.
fn stream_product<T: Clone, E>(
    lists: &[Vec<T>],
    mut f: impl FnMut(&[T]) -> Result<(), E>,
) -> Result<(), E> {
    if lists.iter().any(|l| l.is_empty()) {
        return Ok(());
    }
    let mut idx = vec![0usize; lists.len()];
    loop {
        let combo: Vec<T> = idx.iter().zip(lists).map(|(&i, l)| l[i].clone()).collect();
        f(&combo)?;
        let mut k = lists.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Residue assignments for one block making its monomial degree hit
/// `gamma_res`: one residue vector per variable.
fn block_assignments(
    block: &[(i64, i64)],
    gamma_res: &[i64],
    torsion: &[i64],
    kt: &AbGroup,
) -> Vec<Vec<Vec<i64>>> {
    let n = block.len();
    let q = torsion.len();
    let mut out = Vec::new();
    if n == 1 {
        let l = block[0].0;
        let per_component: Vec<Vec<i64>> = (0..q)
            .map(|c| solve_linear_mod(l, gamma_res[c], torsion[c]))
            .collect();
        if per_component.iter().any(|s| s.is_empty()) {
            return out;
        }
        let _ = stream_product::<i64, std::convert::Infallible>(&per_component, |combo| {
            out.push(vec![combo.to_vec()]);
            Ok(())
        });
        return out;
    }
    // Free residues for all but the last variable, then solve for it.
    let elem_choices: Vec<Vec<i64>> = kt.all_elements().map(|e| e.torsion().to_vec()).collect();
    let front_lists = vec![elem_choices; n - 1];
    let _ = stream_product::<Vec<i64>, std::convert::Infallible>(&front_lists, |front| {
        let last_l = block[n - 1].0;
        let per_component: Vec<Vec<i64>> = (0..q)
            .map(|c| {
                let partial: i64 = block[..n - 1]
                    .iter()
                    .zip(front)
                    .map(|(&(l, _), res)| (l % torsion[c]) * res[c])
                    .sum();
                let rhs = (gamma_res[c] - partial).rem_euclid(torsion[c]);
                solve_linear_mod(last_l, rhs, torsion[c])
            })
            .collect();
        if per_component.iter().all(|s| !s.is_empty()) {
            let _ = stream_product::<i64, std::convert::Infallible>(&per_component, |last| {
                let mut vars: Vec<Vec<i64>> = front.to_vec();
                vars.push(last.to_vec());
                out.push(vars);
                Ok(())
            });
        }
        Ok(())
    });
    out
}

/// Solutions `x` in `[0, t)` of `a x = b (mod t)`.
fn solve_linear_mod(a: i64, b: i64, t: i64) -> Vec<i64> {
    let a = a.rem_euclid(t);
    let b = b.rem_euclid(t);
    let g = a.gcd(&t);
    if b % g != 0 {
        return Vec::new();
    }
    let t1 = t / g;
    let x0 = if t1 == 1 {
        0
    } else {
        (b / g % t1) * mod_inverse(a / g, t1) % t1
    };
    (0..g).map(|k| (x0 + k * t1).rem_euclid(t)).collect()
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    // Extended Euclid; `a` and `m` coprime.
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m)
}

fn assemble_data(
    free: &FreeDatum,
    group: &AbGroup,
    block_res: &[Vec<Vec<i64>>],
    free_res: &[Vec<i64>],
) -> RingData {
    let blocks = free
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| BlockData {
            exponents: b.iter().map(|&(l, _)| l).collect(),
            weights: b
                .iter()
                .enumerate()
                .map(|(j, &(_, w))| group.elem(&[w], &block_res[i][j]))
                .collect(),
        })
        .collect();
    let free_weights = free
        .free_weights
        .iter()
        .zip(free_res)
        .map(|(&u, res)| group.elem(&[u], res))
        .collect();
    RingData {
        group: group.clone(),
        blocks,
        free_weights,
    }
}

fn is_almost_free(data: &RingData) -> bool {
    let ws = data.weight_list();
    (0..ws.len()).all(|skip| {
        let rest: Vec<_> = ws
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, w)| w.clone())
            .collect();
        Subgroup::generates(&data.group, &rest)
    })
}

/// One unit of search work; units are processed independently and merged
/// deterministically.
#[derive(Clone, Debug)]
enum Unit {
    Toric,
    AllSingleton {
        r: usize,
    },
    WithBigs {
        case: CaseTag,
        sizes: Vec<usize>,
        r: usize,
        gamma0: i64,
    },
}

fn build_units(opts: &ClassifyOptions) -> Vec<Unit> {
    let (d, mu) = (opts.dimension, opts.picard_index);
    let mut units = Vec::new();
    if opts.include_toric {
        units.push(Unit::Toric);
    }
    let b2 = search_bounds(d, mu, CaseTag::II);
    for r in 2..=b2.max_r {
        units.push(Unit::AllSingleton { r });
    }
    if !opts.separated_only {
        for (case, sizes) in big_size_shapes(d) {
            let bounds = search_bounds(d, mu, case);
            let min_r = match case {
                CaseTag::V => sizes.len() - 1,
                _ => 2,
            };
            for r in min_r.max(2)..=bounds.max_r {
                for gamma0 in 1..=bounds.gamma_cap(r).max_value() {
                    units.push(Unit::WithBigs {
                        case,
                        sizes: sizes.clone(),
                        r,
                        gamma0,
                    });
                }
            }
        }
    }
    units
}

/// Block-size shapes with at least one block of size two or more, paired
/// with their case tag.  Sizes are weakly decreasing.
fn big_size_shapes(d: usize) -> Vec<(CaseTag, Vec<usize>)> {
    let mut out = Vec::new();
    for n0 in 2..=d {
        out.push((CaseTag::III, vec![n0]));
    }
    for n0 in 2..=d + 1 {
        for n1 in 2..=n0 {
            if n0 + n1 <= d + 1 {
                out.push((CaseTag::IV, vec![n0, n1]));
            }
        }
    }
    // Three or more blocks of size >= 2, total size at most d + count - 1.
    fn rec(max: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() >= 3 {
            out.push(cur.clone());
        }
        for n in (2..=max.min(budget)).rev() {
            // Appending one more block raises the budget by one.
            cur.push(n);
            rec(n, budget + 1 - n, cur, out);
            cur.pop();
        }
    }
    let mut many = Vec::new();
    if d >= 4 {
        // Budget for the first block: total <= d + (count - 1); seeding with
        // count = 1 gives d, and each extra block adds one.
        rec(d, d, &mut Vec::new(), &mut many);
    }
    for sizes in many {
        out.push((CaseTag::V, sizes));
    }
    out
}

fn free_variable_count(case: CaseTag, d: usize, sizes: &[usize]) -> Option<usize> {
    match case {
        CaseTag::I => Some(d + 1),
        CaseTag::II => d.checked_sub(1),
        _ => {
            let total: usize = sizes.iter().sum();
            (d + sizes.len() - 1).checked_sub(total)
        }
    }
}

fn process_unit(
    unit: &Unit,
    opts: &ClassifyOptions,
    groups: &[AbGroup],
    visits: &AtomicU64,
) -> Result<Vec<RingData>, ClassifyError> {
    let (d, mu) = (opts.dimension, opts.picard_index);
    let mut found = Vec::new();
    let free_data: Vec<FreeDatum> = match unit {
        Unit::Toric => {
            let m = d + 1;
            nondecreasing_tuples(&divisors(mu), m)
                .into_iter()
                .map(|us| FreeDatum {
                    blocks: Vec::new(),
                    free_weights: us,
                })
                .collect()
        }
        Unit::AllSingleton { r } => all_singleton_data(opts, *r),
        Unit::WithBigs {
            case,
            sizes,
            r,
            gamma0,
        } => {
            let bounds = search_bounds(d, mu, *case);
            let Some(m) = free_variable_count(*case, d, sizes) else {
                return Ok(found);
            };
            let mut block_sizes = sizes.clone();
            block_sizes.extend(std::iter::repeat_n(1, r + 1 - sizes.len()));
            let fano_extra = opts.require_fano.then_some(m as i64 * mu);
            let assemblies = assemble_blocks(*gamma0, &block_sizes, &bounds, *r, mu, fano_extra);
            let mut data = Vec::new();
            for blocks in assemblies {
                for us in nondecreasing_tuples(&divisors(mu), m) {
                    if opts.require_fano {
                        let w_sum: i64 = blocks.iter().flatten().map(|&(_, w)| w).sum();
                        let u_sum: i64 = us.iter().sum();
                        if (*r as i64 - 1) * gamma0 >= w_sum + u_sum {
                            continue;
                        }
                    }
                    data.push(FreeDatum {
                        blocks: blocks.clone(),
                        free_weights: us,
                    });
                }
            }
            data
        }
    };

    for fd in free_data {
        if visits.fetch_add(1, Ordering::Relaxed) + 1 > opts.max_candidates {
            return Err(ClassifyError::ResourceCap(opts.max_candidates));
        }
        for kt in groups {
            for data in torsion_gradings_counted(&fd, kt, visits, opts.max_candidates)? {
                if !data.validate().is_valid() {
                    continue;
                }
                if opts.require_fano && !data.is_fano() {
                    continue;
                }
                if !ell_divisibility_check(&data) {
                    continue;
                }
                if picard_index(&data) != opts.picard_index {
                    continue;
                }
                found.push(data.canonical_form());
            }
        }
    }
    Ok(found)
}

/// Free data for the all-singleton case: `r + 1` singleton blocks whose
/// exponents divide `mu`, relation degree `lcm * q` with `q | mu`, and
/// `d - 1` free variables.
fn all_singleton_data(opts: &ClassifyOptions, r: usize) -> Vec<FreeDatum> {
    let (d, mu) = (opts.dimension, opts.picard_index);
    let bounds = search_bounds(d, mu, CaseTag::II);
    let Some(m) = free_variable_count(CaseTag::II, d, &[]) else {
        return Vec::new();
    };
    let ls: Vec<i64> = divisors(mu).into_iter().filter(|&l| l >= 2).collect();
    let mut out = Vec::new();
    for asc in nondecreasing_tuples(&ls, r + 1) {
        let seq: Vec<i64> = asc.into_iter().rev().collect();
        let lc = lcm_slice(&seq);
        for q in divisors(mu) {
            let gamma0 = lc * q;
            if !bounds.gamma_cap(r).allows(gamma0) {
                continue;
            }
            let ws: Vec<i64> = seq.iter().map(|&l| gamma0 / l).collect();
            if ws
                .iter()
                .enumerate()
                .any(|(pos, &w)| !bounds.tail_weight_cap(r, pos).allows(w))
            {
                continue;
            }
            for us in nondecreasing_tuples(&divisors(mu), m) {
                if opts.require_fano {
                    let w_sum: i64 = ws.iter().sum();
                    let u_sum: i64 = us.iter().sum();
                    if (r as i64 - 1) * gamma0 >= w_sum + u_sum {
                        continue;
                    }
                }
                out.push(FreeDatum {
                    blocks: seq.iter().zip(&ws).map(|(&l, &w)| vec![(l, w)]).collect(),
                    free_weights: us,
                });
            }
        }
    }
    out
}

/// Runs the full search and returns the deformation classes in a canonical
/// deterministic order.
pub fn classify(opts: &ClassifyOptions) -> Result<Vec<ClassifiedVariety>, ClassifyError> {
    if opts.dimension < 1 {
        return Err(ClassifyError::InvalidOptions(
            "dimension must be >= 1".into(),
        ));
    }
    if opts.picard_index < 1 {
        return Err(ClassifyError::InvalidOptions(
            "picard index must be >= 1".into(),
        ));
    }
    if opts.jobs < 1 {
        return Err(ClassifyError::InvalidOptions("jobs must be >= 1".into()));
    }
    let groups: Vec<AbGroup> = enumerate_torsion_groups(opts.picard_index)
        .into_iter()
        .filter(|g| match opts.torsion_filter {
            TorsionFilter::Any => true,
            TorsionFilter::NontrivialOnly => g.torsion_order() > 1,
            TorsionFilter::TrivialOnly => g.torsion_order() == 1,
        })
        .collect();
    let units = build_units(opts);
    let visits = AtomicU64::new(0);

    let results: Result<Vec<Vec<RingData>>, ClassifyError> = if opts.jobs == 1 {
        units
            .iter()
            .map(|u| process_unit(u, opts, &groups, &visits))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| ClassifyError::InvalidOptions(e.to_string()))?;
        pool.install(|| {
            use rayon::prelude::*;
            units
                .par_iter()
                .map(|u| process_unit(u, opts, &groups, &visits))
                .collect()
        })
    };

    let mut dedup: BTreeMap<RingData, ()> = BTreeMap::new();
    for batch in results? {
        for data in batch {
            dedup.insert(data, ());
        }
    }
    Ok(dedup
        .into_keys()
        .map(|data| {
            let invariants = compute_all(&data);
            let case_tag = case_of(&data);
            let moduli_count = data.moduli_count();
            ClassifiedVariety {
                data,
                invariants,
                case_tag,
                moduli_count,
            }
        })
        .collect())
}

/// The all-singleton sub-search without the Fano restriction.
pub fn classify_separated(
    dimension: usize,
    picard_index: i64,
) -> Result<Vec<ClassifiedVariety>, ClassifyError> {
    let opts = ClassifyOptions {
        separated_only: true,
        require_fano: false,
        ..ClassifyOptions::new(dimension, picard_index)
    };
    classify(&opts)
}

/// Counts classes at one parameter pair, reporting toric data separately.
pub fn count_types(opts: &ClassifyOptions) -> Result<CountReport, ClassifyError> {
    let all = classify(opts)?;
    let toric = all.iter().filter(|v| v.case_tag == CaseTag::I).count();
    Ok(CountReport {
        dimension: opts.dimension,
        picard_index: opts.picard_index,
        nontoric: all.len() - toric,
        toric,
        upper_bound: count_upper_bound(opts.dimension, opts.picard_index),
        toric_upper_bound: toric_count_bound(opts.dimension, opts.picard_index),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{all_fixtures, classified_surfaces};

    fn torsions(groups: &[AbGroup]) -> Vec<Vec<i64>> {
        groups.iter().map(|g| g.torsion().to_vec()).collect()
    }

    #[test]
    fn torsion_groups_are_complete_and_ordered() {
        assert_eq!(
            torsions(&enumerate_torsion_groups(4)),
            vec![vec![], vec![2], vec![4], vec![2, 2]]
        );
        assert_eq!(
            torsions(&enumerate_torsion_groups(6)),
            vec![vec![], vec![2], vec![3], vec![6]]
        );
        // 12 admits two groups of order 4 and two of order 12.
        assert_eq!(enumerate_torsion_groups(12).len(), 8);
    }

    #[test]
    fn singleton_block_solutions() {
        let b = search_bounds(2, 4, CaseTag::II);
        let sols = free_solutions(4, &[1], &b, 2);
        assert_eq!(sols, vec![vec![vec![(4, 1)]], vec![vec![(2, 2)]]]);
    }

    #[test]
    fn big_block_solutions_respect_weight_divisibility() {
        let b = search_bounds(2, 2, CaseTag::III);
        let sols = free_solutions(4, &[2], &b, 2);
        assert_eq!(sols.len(), 4);
        for sol in &sols {
            let block = &sol[0];
            assert_eq!(block.iter().map(|&(l, w)| l * w).sum::<i64>(), 4);
            assert!(block.iter().all(|&(_, w)| 2 % w == 0));
            assert!(block.windows(2).all(|p| p[0] <= p[1]));
        }
    }

    #[test]
    fn full_shape_solutions_contain_reference_datum() {
        let b = search_bounds(2, 2, CaseTag::III);
        let sols = free_solutions(4, &[2, 1, 1], &b, 2);
        // Blocks of surface-01: {(1,1),(3,1)} plus tails 4^1 and 2^2.
        let expected = vec![vec![(1, 1), (3, 1)], vec![(4, 1)], vec![(2, 2)]];
        assert!(sols.contains(&expected), "{sols:?}");
        // A pair of tails with exponents (4, 4) has gcd 4, which does not
        // divide mu = 2, so no assembly may contain it.
        assert!(sols
            .iter()
            .all(|s| s.iter().filter(|b| b == &&vec![(4i64, 1i64)]).count() <= 1));
    }

    #[test]
    fn gradings_recover_reference_surface() {
        let fixture = &classified_surfaces()[0]; // surface-01, torsion Z/2
        let fd = FreeDatum {
            blocks: vec![vec![(1, 1), (3, 1)], vec![(4, 1)], vec![(2, 2)]],
            free_weights: vec![],
        };
        let kt = AbGroup::new(0, vec![2]);
        let gradings = torsion_gradings(&fd, &kt);
        assert!(!gradings.is_empty());
        let target = fixture.data.canonical_form();
        assert!(
            gradings.iter().any(|g| g.canonical_form() == target),
            "reference grading not found"
        );
        for g in &gradings {
            assert!(g.validate().is_valid(), "{:?}", g.validate().failures());
        }
    }

    #[test]
    fn blockless_data_get_each_grading_once() {
        let fd = FreeDatum {
            blocks: vec![],
            free_weights: vec![1, 1, 1],
        };
        let kt = AbGroup::new(0, vec![3]);
        let gradings = torsion_gradings(&fd, &kt);
        // 27 residue tuples, filtered by almost-freeness.
        assert!(gradings.len() < 27);
        let mut seen = std::collections::BTreeSet::new();
        for g in gradings {
            assert!(seen.insert(g), "duplicate grading");
        }
    }

    #[test]
    fn classify_smallest_surface_parameters() {
        let opts = ClassifyOptions {
            torsion_filter: TorsionFilter::NontrivialOnly,
            ..ClassifyOptions::new(2, 2)
        };
        let found = classify(&opts).unwrap();
        assert_eq!(found.len(), 1);
        let surface01 = classified_surfaces()[0].data.canonical_form();
        assert_eq!(found[0].data, surface01);
        assert_eq!(found[0].invariants.picard_index, 2);
        assert_eq!(found[0].invariants.gorenstein_index, 1);
        assert_eq!(
            found[0].invariants.self_intersection,
            num_rational::BigRational::from_integer(1.into())
        );
    }

    #[test]
    fn classify_picard_index_three() {
        let opts = ClassifyOptions {
            torsion_filter: TorsionFilter::NontrivialOnly,
            ..ClassifyOptions::new(2, 3)
        };
        let found = classify(&opts).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(
            found[0].data,
            classified_surfaces()[1].data.canonical_form()
        );
    }

    #[test]
    fn torsion_filters_partition_the_output() {
        let base = ClassifyOptions::new(2, 4);
        let any = classify(&base).unwrap();
        let trivial = classify(&ClassifyOptions {
            torsion_filter: TorsionFilter::TrivialOnly,
            ..base.clone()
        })
        .unwrap();
        let nontrivial = classify(&ClassifyOptions {
            torsion_filter: TorsionFilter::NontrivialOnly,
            ..base.clone()
        })
        .unwrap();
        assert_eq!(any.len(), trivial.len() + nontrivial.len());
        let mut union: Vec<&RingData> =
            trivial.iter().chain(&nontrivial).map(|v| &v.data).collect();
        union.sort();
        let mut all: Vec<&RingData> = any.iter().map(|v| &v.data).collect();
        all.sort();
        assert_eq!(union, all);
    }

    #[test]
    fn separated_search_is_all_singleton() {
        let found = classify_separated(2, 4).unwrap();
        assert!(!found.is_empty());
        assert!(found.iter().all(|v| v.case_tag == CaseTag::II));
        let surface03 = classified_surfaces()[2].data.canonical_form();
        assert!(found.iter().any(|v| v.data == surface03));
    }

    #[test]
    fn toric_data_are_included_on_request() {
        let opts = ClassifyOptions {
            include_toric: true,
            ..ClassifyOptions::new(2, 3)
        };
        let found = classify(&opts).unwrap();
        let toric: Vec<_> = found.iter().filter(|v| v.case_tag == CaseTag::I).collect();
        assert!(!toric.is_empty());
        for v in &toric {
            assert!(v.invariants.toric);
            assert_eq!(v.invariants.picard_index, 3);
        }
        let report = count_types(&opts).unwrap();
        assert_eq!(report.toric, toric.len());
        assert_eq!(report.nontoric, found.len() - toric.len());
    }

    #[test]
    fn candidate_budget_is_enforced() {
        let opts = ClassifyOptions {
            max_candidates: 10,
            ..ClassifyOptions::new(2, 4)
        };
        assert!(matches!(
            classify(&opts),
            Err(ClassifyError::ResourceCap(10))
        ));
    }

    #[test]
    fn parallel_run_matches_sequential() {
        let seq = classify(&ClassifyOptions::new(2, 4)).unwrap();
        let par = classify(&ClassifyOptions {
            jobs: 4,
            ..ClassifyOptions::new(2, 4)
        })
        .unwrap();
        assert_eq!(seq.len(), par.len());
        assert!(seq.iter().zip(&par).all(|(a, b)| a.data == b.data));
    }

    #[test]
    fn outputs_satisfy_their_own_filters() {
        let found = classify(&ClassifyOptions::new(2, 4)).unwrap();
        for v in &found {
            assert!(v.data.validate().is_valid());
            assert!(v.data.is_fano());
            assert!(ell_divisibility_check(&v.data));
            assert_eq!(picard_index(&v.data), 4);
            assert_eq!(v.data.dimension(), 2);
            // Canonical forms are fixed points.
            assert_eq!(v.data.canonical_form(), v.data);
        }
        // All eleven reference surfaces reappear at their parameters.
        for f in all_fixtures().iter().take(11) {
            if f.expected.picard_index == 4 {
                let target = f.data.canonical_form();
                assert!(
                    found.iter().any(|v| v.data == target),
                    "{} missing from classification",
                    f.name
                );
            }
        }
    }
}
