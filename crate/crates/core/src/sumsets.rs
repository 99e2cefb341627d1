//! Sumsets, restricted sumsets and distinct-sum numberings in finite
//! abelian groups.
//!
//! Lower-bound checks, each returning what was computed so callers can
//! assert or report:
//!
//! * Cauchy-Davenport: `|A+B| >= min(p, |A|+|B|-1)` in `Z_p`, `p` prime;
//! * da Silva-Hamidoune: `|n^A| >= min(p, n|A| - n^2 + 1)` in `Z_p`,
//!   where `n^A` is the set of sums of `n` distinct elements of `A`;
//! * the same bound with `n = 2` over any finite abelian group, with
//!   `p` replaced by `p(G)`, the least order of a nonzero element:
//!   `|2^A| >= min(p(G), 2|A|-3)`;
//! * Kneser: with `H` the stabilizer of `A+B`, if
//!   `|A+B| <= |A|+|B|-1` then `|A+B| = |A+H| + |B+H| - |H|`, and in
//!   consequence `|A+B| >= min(p(G), |A|+|B|-1)` always.
//!
//! Numbering searches (exhaustive, lexicographically least result):
//!
//! * [`hall_numbering`]: given `b_1..b_n` listing as many terms as the
//!   group has elements, a permutation `sigma` making all
//!   `a_sigma(i) + b_i` distinct; one exists iff `sum b_i = 0`;
//! * [`snevily_numbering`]: given `|A| = |B| = n`, numberings of `A`
//!   and `B` with pairwise distinct sums `a_i + b_i`. Known to exist
//!   for cyclic groups of odd order; conjectured for all odd-order
//!   abelian groups, so a `NoNumbering` result on one of those is a
//!   counterexample candidate. For even order, nothing is claimed
//!   (taking `A = B = G` cyclic even fails by a parity argument);
//! * [`snevily_z_permutation`]: integers `a_1..a_k` and `n > k`:
//!   a permutation with `i + a_sigma(i)` distinct mod `n`;
//! * [`multiset_count_check`]: in a cyclic group, for sets `A_1..A_n`
//!   of equal size `k > m(n-1)` and distinct `b_1..b_n`, at least
//!   `(k-1)n - m*C(n,2) + 1` multisets `{a_1..a_n}` with all
//!   `m*a_i + b_i` distinct.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::arith;
use crate::groups::{FinAbGroup, GroupElement, GroupError, Subgroup, MAX_GROUP_ORDER};
use crate::zerosum::GSequence;

/// Cap on positions for the permutation searches.
pub const MAX_NUMBERING: usize = 16;

/// Cap on enumerated tuples/combinations.
pub const MAX_ENUMERATION: u128 = 20_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SumsetError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("the sets live in different groups")]
    MixedGroups,
    #[error("the set must be nonempty")]
    EmptySet,
    #[error("the group is not cyclic of prime order (order {order})")]
    NotPrimeOrderCyclic { order: u64 },
    #[error("the group is not cyclic")]
    NotCyclic,
    #[error("restricted sumset needs n >= 1")]
    ZeroN,
    #[error("sets have sizes {a} and {b}, numberings need them equal")]
    SizeMismatch { a: usize, b: usize },
    #[error("expected {expected} terms, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("search over {got} positions exceeds the limit {limit}")]
    TooManyPositions { got: usize, limit: usize },
    #[error("enumeration of {cells} candidates exceeds the limit {limit}")]
    EnumerationTooLarge { cells: u128, limit: u128 },
    #[error("the b-terms must be pairwise distinct")]
    NotDistinct,
    #[error("the multiplier m must be at least 1")]
    ZeroMultiplier,
    #[error("sets must share one cardinality k with k > m(n-1); got k = {k}, need k > {floor}")]
    CardinalityTooSmall { k: usize, floor: u64 },
    #[error("sets have different cardinalities")]
    UnequalCardinalities,
}

/// A subset of a group: sorted, duplicate-free element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSubset {
    group: FinAbGroup,
    elements: Vec<GroupElement>,
}

impl GSubset {
    pub fn new(group: FinAbGroup, elements: Vec<GroupElement>) -> Result<Self, SumsetError> {
        for e in &elements {
            if e.coords().len() != group.rank() {
                return Err(GroupError::DimensionMismatch {
                    expected: group.rank(),
                    got: e.coords().len(),
                }
                .into());
            }
        }
        let mut elements = elements;
        elements.sort();
        elements.dedup();
        Ok(GSubset { group, elements })
    }

    pub fn from_indices(group: FinAbGroup, indices: &[u64]) -> Result<Self, SumsetError> {
        let elements = indices
            .iter()
            .map(|&i| {
                if i < group.order() {
                    Ok(group.element_from_index(i))
                } else {
                    Err(SumsetError::BadLength { expected: group.order() as usize, got: i as usize })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        GSubset::new(group, elements)
    }

    pub fn full(group: &FinAbGroup) -> Self {
        let elements = group.elements().collect();
        GSubset { group: group.clone(), elements }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    /// Membership table over element indices.
    fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.group.order() as usize];
        for e in &self.elements {
            mask[self.group.element_index(e) as usize] = true;
        }
        mask
    }
}

/// `A + B = {a + b}`.
pub fn sumset(a: &GSubset, b: &GSubset) -> Result<GSubset, SumsetError> {
    if a.group != b.group {
        return Err(SumsetError::MixedGroups);
    }
    let g = &a.group;
    let mut out = BTreeSet::new();
    for x in &a.elements {
        for y in &b.elements {
            out.insert(g.add(x, y));
        }
    }
    Ok(GSubset { group: g.clone(), elements: out.into_iter().collect() })
}

/// `n^A`: sums of `n` pairwise distinct elements of `A` (`n >= 1`).
/// Empty when `n > |A|`.
pub fn restricted_sumset(a: &GSubset, n: usize) -> Result<GSubset, SumsetError> {
    if n == 0 {
        return Err(SumsetError::ZeroN);
    }
    let combos = binomial(a.len() as u128, n as u128);
    if combos > MAX_ENUMERATION {
        return Err(SumsetError::EnumerationTooLarge { cells: combos, limit: MAX_ENUMERATION });
    }
    let g = &a.group;
    let mut out = BTreeSet::new();
    // Depth-first over index combinations i_1 < ... < i_n.
    fn go(
        g: &FinAbGroup,
        elems: &[GroupElement],
        from: usize,
        left: usize,
        acc: &GroupElement,
        out: &mut BTreeSet<GroupElement>,
    ) {
        if left == 0 {
            out.insert(acc.clone());
            return;
        }
        for i in from..=elems.len().saturating_sub(left) {
            go(g, elems, i + 1, left - 1, &g.add(acc, &elems[i]), out);
        }
    }
    go(g, &a.elements, 0, n, &g.identity(), &mut out);
    Ok(GSubset { group: g.clone(), elements: out.into_iter().collect() })
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// What a lower-bound check computed: the achieved size and the bound
/// it must not fall below (possibly negative, hence signed).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub actual: u64,
    pub bound: i64,
    pub holds: bool,
}

impl BoundReport {
    fn new(actual: u64, bound: i64) -> Self {
        BoundReport { actual, bound, holds: actual as i64 >= bound }
    }
}

fn require_prime_cyclic(g: &FinAbGroup) -> Result<u64, SumsetError> {
    let p = g.order();
    if g.is_cyclic() && arith::is_prime(p) {
        Ok(p)
    } else {
        Err(SumsetError::NotPrimeOrderCyclic { order: p })
    }
}

/// `|A+B| >= min(p, |A|+|B|-1)` over `Z_p`, `p` prime; both sets
/// nonempty.
pub fn cauchy_davenport_check(a: &GSubset, b: &GSubset) -> Result<BoundReport, SumsetError> {
    if a.group != b.group {
        return Err(SumsetError::MixedGroups);
    }
    let p = require_prime_cyclic(&a.group)?;
    if a.is_empty() || b.is_empty() {
        return Err(SumsetError::EmptySet);
    }
    let actual = sumset(a, b)?.len() as u64;
    let bound = (p as i64).min(a.len() as i64 + b.len() as i64 - 1);
    Ok(BoundReport::new(actual, bound))
}

/// `|n^A| >= min(p, n|A| - n^2 + 1)` over `Z_p`, `p` prime, `A`
/// nonempty.
pub fn dsh_bound_check(a: &GSubset, n: usize) -> Result<BoundReport, SumsetError> {
    let p = require_prime_cyclic(&a.group)?;
    if a.is_empty() {
        return Err(SumsetError::EmptySet);
    }
    let actual = restricted_sumset(a, n)?.len() as u64;
    let n = n as i64;
    let bound = (p as i64).min(n * a.len() as i64 - n * n + 1);
    Ok(BoundReport::new(actual, bound))
}

/// `|2^A| >= min(p(G), 2|A| - 3)` over any finite abelian group;
/// `p(G)` is the least order of a nonzero element (absent for the
/// trivial group, where the other branch always applies).
pub fn pair_sum_bound_check(a: &GSubset) -> Result<BoundReport, SumsetError> {
    if a.is_empty() {
        return Err(SumsetError::EmptySet);
    }
    let actual = restricted_sumset(a, 2)?.len() as u64;
    let size_bound = 2 * a.len() as i64 - 3;
    let bound = match a.group.min_nonzero_order() {
        Some(p) => (p as i64).min(size_bound),
        None => size_bound,
    };
    Ok(BoundReport::new(actual, bound))
}

/// The stabilizer `{g : g + S = S}`; the whole group when `S` is empty.
pub fn stabilizer(s: &GSubset) -> Result<Subgroup, SumsetError> {
    let g = &s.group;
    if g.order() > MAX_GROUP_ORDER {
        return Err(GroupError::GroupTooLarge { order: g.order(), limit: MAX_GROUP_ORDER }.into());
    }
    let mask = s.mask();
    let mut indices = Vec::new();
    'cand: for c in 0..g.order() {
        let shift = g.element_from_index(c);
        for e in &s.elements {
            if !mask[g.element_index(&g.add(e, &shift)) as usize] {
                continue 'cand;
            }
        }
        indices.push(c);
    }
    Ok(Subgroup::from_closed_indices(g, indices))
}

/// Everything the stabilizer identity involves, computed outright.
#[derive(Clone, Debug)]
pub struct KneserReport {
    /// `|A+B|`.
    pub sumset_size: u64,
    /// Stabilizer `H` of `A+B`.
    pub stabilizer: Subgroup,
    /// `|A+H|` and `|B+H|`.
    pub a_plus_h: u64,
    pub b_plus_h: u64,
    /// Is the hypothesis `|A+B| <= |A|+|B|-1` met?
    pub applies: bool,
    /// `|A+B| = |A+H| + |B+H| - |H|`; vacuously true when the
    /// hypothesis fails.
    pub identity_holds: bool,
    /// `|A+B| >= min(p(G), |A|+|B|-1)`.
    pub corollary_holds: bool,
}

/// Evaluates the stabilizer identity and its Cauchy-Davenport-style
/// corollary for nonempty `A`, `B`.
pub fn kneser_check(a: &GSubset, b: &GSubset) -> Result<KneserReport, SumsetError> {
    if a.group != b.group {
        return Err(SumsetError::MixedGroups);
    }
    if a.is_empty() || b.is_empty() {
        return Err(SumsetError::EmptySet);
    }
    let g = &a.group;
    let ab = sumset(a, b)?;
    let h = stabilizer(&ab)?;
    let h_set = GSubset { group: g.clone(), elements: h.elements().collect() };
    let a_plus_h = sumset(a, &h_set)?.len() as u64;
    let b_plus_h = sumset(b, &h_set)?.len() as u64;
    let sumset_size = ab.len() as u64;
    let applies = sumset_size <= (a.len() + b.len() - 1) as u64;
    let identity_holds = !applies || sumset_size == a_plus_h + b_plus_h - h.order();
    let size_bound = (a.len() + b.len() - 1) as i64;
    let corollary_bound = match g.min_nonzero_order() {
        Some(p) => (p as i64).min(size_bound),
        None => size_bound,
    };
    Ok(KneserReport {
        sumset_size,
        stabilizer: h,
        a_plus_h,
        b_plus_h,
        applies,
        identity_holds,
        corollary_holds: sumset_size as i64 >= corollary_bound,
    })
}

/// For `b` listing `|G|` terms: the lex-least permutation `sigma` (as
/// indices into the group's element order) with all `a_sigma(i) + b_i`
/// distinct, where `a_0, a_1, ...` are the group elements in index
/// order. `None` iff `sum b_i != 0`.
pub fn hall_numbering(b: &GSequence) -> Result<Option<Vec<usize>>, SumsetError> {
    let g = b.group();
    let n = g.order();
    if n as usize != b.len() {
        return Err(SumsetError::BadLength { expected: n as usize, got: b.len() });
    }
    if n as usize > 2 * MAX_NUMBERING {
        return Err(SumsetError::TooManyPositions { got: n as usize, limit: 2 * MAX_NUMBERING });
    }
    // A numbering makes {a_sigma(i) + b_i} a permutation of G, forcing
    // sum b_i = 0; so a nonzero sum cannot have one.
    if !b.sum().is_zero() {
        return Ok(None);
    }
    let n = n as usize;
    let b_idx: Vec<usize> = b.terms().iter().map(|e| g.element_index(e) as usize).collect();
    let mut add = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            add[i * n + j] = g
                .element_index(&g.add(&g.element_from_index(i as u64), &g.element_from_index(j as u64)))
                as usize;
        }
    }
    let mut sigma = Vec::with_capacity(n);
    let mut used_elem = vec![false; n];
    let mut used_sum = vec![false; n];
    if assign_distinct(&add, &b_idx, 0, &mut used_elem, &mut used_sum, &mut sigma) {
        Ok(Some(sigma))
    } else {
        Ok(None)
    }
}

/// Backtracking core shared by the numbering searches: at position
/// `i`, pick the least unused row index whose sum with column `b[i]`
/// is unused.
fn assign_distinct(
    add: &[usize],
    b_idx: &[usize],
    i: usize,
    used_elem: &mut [bool],
    used_sum: &mut [bool],
    sigma: &mut Vec<usize>,
) -> bool {
    let n = b_idx.len();
    if i == n {
        return true;
    }
    let width = used_elem.len();
    for x in 0..width {
        if used_elem[x] {
            continue;
        }
        let s = add[x * width + b_idx[i]];
        if used_sum[s] {
            continue;
        }
        used_elem[x] = true;
        used_sum[s] = true;
        sigma.push(x);
        if assign_distinct(add, b_idx, i + 1, used_elem, used_sum, sigma) {
            return true;
        }
        sigma.pop();
        used_elem[x] = false;
        used_sum[s] = false;
    }
    false
}

/// Outcome of a distinct-sum numbering search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Numbering {
    /// Positions `i` pair `a.elements()[a_order[i]]` with
    /// `b.elements()[b_order[i]]`; all the pair sums are distinct.
    Found { a_order: Vec<usize>, b_order: Vec<usize> },
    NoNumbering,
}

/// Searches for numberings of `A` and `B` (equal sizes, same group)
/// with pairwise distinct sums `a_i + b_i`.
///
/// The numbering of `A` can be fixed as its sorted order: permuting
/// positions afterwards pairs the same elements. The search permutes
/// `B` and returns the lex-least assignment. For odd-order cyclic
/// groups a numbering always exists; odd-order noncyclic groups are
/// conjectured to behave the same way, so `NoNumbering` there is
/// noteworthy.
pub fn snevily_numbering(a: &GSubset, b: &GSubset) -> Result<Numbering, SumsetError> {
    if a.group != b.group {
        return Err(SumsetError::MixedGroups);
    }
    if a.len() != b.len() {
        return Err(SumsetError::SizeMismatch { a: a.len(), b: b.len() });
    }
    if a.is_empty() {
        return Err(SumsetError::EmptySet);
    }
    let n = a.len();
    if n > MAX_NUMBERING {
        return Err(SumsetError::TooManyPositions { got: n, limit: MAX_NUMBERING });
    }
    let g = &a.group;
    let order = g.order() as usize;
    // add[x][i]: index of b_x + a_i, so rows are candidate b's.
    let mut add = vec![0usize; n * n];
    for (x, bx) in b.elements.iter().enumerate() {
        for (i, ai) in a.elements.iter().enumerate() {
            add[x * n + i] = g.element_index(&g.add(bx, ai)) as usize;
        }
    }
    let cols: Vec<usize> = (0..n).collect();
    let mut sigma = Vec::with_capacity(n);
    let mut used_elem = vec![false; n];
    let mut used_sum = vec![false; order];
    if assign_distinct_rect(&add, &cols, 0, n, &mut used_elem, &mut used_sum, &mut sigma) {
        Ok(Numbering::Found { a_order: (0..n).collect(), b_order: sigma })
    } else {
        Ok(Numbering::NoNumbering)
    }
}

/// As [`assign_distinct`], with a non-square sum table (`n` rows of
/// `n` columns but sums indexed by the whole group).
#[allow(clippy::too_many_arguments)]
fn assign_distinct_rect(
    add: &[usize],
    cols: &[usize],
    i: usize,
    n: usize,
    used_elem: &mut [bool],
    used_sum: &mut [bool],
    sigma: &mut Vec<usize>,
) -> bool {
    if i == cols.len() {
        return true;
    }
    for x in 0..n {
        if used_elem[x] {
            continue;
        }
        let s = add[x * n + cols[i]];
        if used_sum[s] {
            continue;
        }
        used_elem[x] = true;
        used_sum[s] = true;
        sigma.push(x);
        if assign_distinct_rect(add, cols, i + 1, n, used_elem, used_sum, sigma) {
            return true;
        }
        sigma.pop();
        used_elem[x] = false;
        used_sum[s] = false;
    }
    false
}

/// Integers `a_1..a_k` and a modulus `n`: the lex-least permutation
/// `sigma` with `i + a_sigma(i)` pairwise distinct mod `n`
/// (`i = 1..k`). Conjectured to exist whenever `n > k`; impossible for
/// `n < k` by pigeonhole.
pub fn snevily_z_permutation(a: &[i64], n: u64) -> Result<Option<Vec<usize>>, SumsetError> {
    if n == 0 {
        return Err(SumsetError::NotCyclic);
    }
    let k = a.len();
    if k > MAX_NUMBERING {
        return Err(SumsetError::TooManyPositions { got: k, limit: MAX_NUMBERING });
    }
    if k as u64 > n {
        return Ok(None);
    }
    // add[x][i]: (i+1 + a_x) mod n.
    let mut add = vec![0usize; k * k];
    for (x, &ax) in a.iter().enumerate() {
        for i in 0..k {
            add[x * k + i] = (i as i64 + 1 + ax).rem_euclid(n as i64) as usize;
        }
    }
    let cols: Vec<usize> = (0..k).collect();
    let mut sigma = Vec::with_capacity(k);
    let mut used_elem = vec![false; k];
    let mut used_sum = vec![false; n as usize];
    if assign_distinct_rect(&add, &cols, 0, k, &mut used_elem, &mut used_sum, &mut sigma) {
        Ok(Some(sigma))
    } else {
        Ok(None)
    }
}

/// Result of the distinct-sum multiset count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultisetCountReport {
    pub count: u64,
    pub bound: i64,
    pub holds: bool,
}

/// Counts multisets `{a_1..a_n}` with `a_i` drawn from `A_i` and all
/// `m*a_i + b_i` pairwise distinct, and compares against the
/// guaranteed minimum `(k-1)n - m*C(n,2) + 1`.
///
/// Hypotheses enforced: cyclic group (so all subgroups are cyclic),
/// equal cardinalities `k > m(n-1)`, pairwise distinct `b_i`, `m >= 1`.
pub fn multiset_count_check(
    sets: &[GSubset],
    b: &GSequence,
    m: u64,
) -> Result<MultisetCountReport, SumsetError> {
    let first = sets.first().ok_or(SumsetError::EmptySet)?;
    let g = first.group().clone();
    if !g.is_cyclic() {
        return Err(SumsetError::NotCyclic);
    }
    if sets.iter().any(|s| *s.group() != g) || *b.group() != g {
        return Err(SumsetError::MixedGroups);
    }
    let n = sets.len();
    if b.len() != n {
        return Err(SumsetError::BadLength { expected: n, got: b.len() });
    }
    if m == 0 {
        return Err(SumsetError::ZeroMultiplier);
    }
    let k = first.len();
    if sets.iter().any(|s| s.len() != k) {
        return Err(SumsetError::UnequalCardinalities);
    }
    let floor = m * (n as u64 - 1);
    if k as u64 <= floor {
        return Err(SumsetError::CardinalityTooSmall { k, floor });
    }
    let mut b_sorted: Vec<&GroupElement> = b.terms().iter().collect();
    b_sorted.sort();
    if b_sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(SumsetError::NotDistinct);
    }
    let cells = (k as u128).pow(n as u32);
    if cells > MAX_ENUMERATION {
        return Err(SumsetError::EnumerationTooLarge { cells, limit: MAX_ENUMERATION });
    }

    // shifted[i][j]: index of m*A_i[j] + b_i.
    let shifted: Vec<Vec<u64>> = sets
        .iter()
        .zip(b.terms())
        .map(|(s, bi)| {
            s.elements()
                .iter()
                .map(|a| g.element_index(&g.add(&g.scalar_mul(m as i64, a), bi)))
                .collect()
        })
        .collect();
    let element_idx: Vec<Vec<u64>> = sets
        .iter()
        .map(|s| s.elements().iter().map(|a| g.element_index(a)).collect())
        .collect();

    let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut pick = vec![0usize; n];
    'outer: loop {
        let distinct = {
            let mut seen: Vec<u64> = pick
                .iter()
                .enumerate()
                .map(|(i, &j)| shifted[i][j])
                .collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        };
        if distinct {
            let mut multiset: Vec<u64> = pick
                .iter()
                .enumerate()
                .map(|(i, &j)| element_idx[i][j])
                .collect();
            multiset.sort_unstable();
            found.insert(multiset);
        }
        for i in 0..n {
            pick[i] += 1;
            if pick[i] < k {
                continue 'outer;
            }
            pick[i] = 0;
        }
        break;
    }
    let count = found.len() as u64;
    let bound = (k as i64 - 1) * n as i64 - m as i64 * (n as i64 * (n as i64 - 1) / 2) + 1;
    Ok(MultisetCountReport { count, bound, holds: count as i64 >= bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zp(p: u64, indices: &[u64]) -> GSubset {
        GSubset::from_indices(FinAbGroup::cyclic(p).unwrap(), indices).unwrap()
    }

    #[test]
    fn subset_construction_sorts_and_dedups() {
        let g = FinAbGroup::cyclic(5).unwrap();
        let s = GSubset::new(
            g.clone(),
            vec![
                g.element(&[3]).unwrap(),
                g.element(&[1]).unwrap(),
                g.element(&[3]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(&g.element(&[3]).unwrap()));
        assert!(GSubset::new(g, vec![FinAbGroup::trivial().identity()]).is_err());
    }

    #[test]
    fn sumset_hand_case() {
        let a = zp(5, &[0, 1]);
        let b = zp(5, &[0, 2]);
        let ab = sumset(&a, &b).unwrap();
        let want = zp(5, &[0, 1, 2, 3]);
        assert_eq!(ab, want);
        let other = zp(7, &[0]);
        assert_eq!(sumset(&a, &other).unwrap_err(), SumsetError::MixedGroups);
    }

    #[test]
    fn restricted_sumset_hand_cases() {
        let a = zp(5, &[0, 1, 2]);
        assert_eq!(restricted_sumset(&a, 1).unwrap(), a);
        assert_eq!(restricted_sumset(&a, 2).unwrap(), zp(5, &[1, 2, 3]));
        assert_eq!(restricted_sumset(&a, 3).unwrap(), zp(5, &[3]));
        assert!(restricted_sumset(&a, 4).unwrap().is_empty());
        assert_eq!(restricted_sumset(&a, 0).unwrap_err(), SumsetError::ZeroN);
    }

    /// Bitmask brute force over subsets of fixed popcount.
    fn restricted_oracle(a: &GSubset, n: usize) -> Vec<GroupElement> {
        let g = a.group();
        let k = a.len();
        let mut out = BTreeSet::new();
        for mask in 0u32..1 << k {
            if mask.count_ones() as usize != n {
                continue;
            }
            let sum = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .fold(g.identity(), |acc, i| g.add(&acc, &a.elements()[i]));
            out.insert(sum);
        }
        out.into_iter().collect()
    }

    #[test]
    fn prime_order_bounds_hand_cases() {
        let r = cauchy_davenport_check(&zp(5, &[0, 1]), &zp(5, &[0, 2])).unwrap();
        assert_eq!(r, BoundReport { actual: 4, bound: 3, holds: true });
        // Saturation: both full sets.
        let full = zp(3, &[0, 1, 2]);
        let r = cauchy_davenport_check(&full, &full).unwrap();
        assert_eq!(r, BoundReport { actual: 3, bound: 3, holds: true });
        // Equality case for the restricted bound: 2^{1,2,3} = {3,4,5}.
        let r = dsh_bound_check(&zp(7, &[1, 2, 3]), 2).unwrap();
        assert_eq!(r, BoundReport { actual: 3, bound: 3, holds: true });
        // n > |A| makes the bound vacuous.
        let r = dsh_bound_check(&zp(7, &[1, 2]), 3).unwrap();
        assert!(r.holds && r.bound <= 0);
    }

    #[test]
    fn prime_order_checks_reject_other_groups() {
        let z4 = GSubset::from_indices(FinAbGroup::cyclic(4).unwrap(), &[0, 1]).unwrap();
        assert_eq!(
            cauchy_davenport_check(&z4, &z4).unwrap_err(),
            SumsetError::NotPrimeOrderCyclic { order: 4 }
        );
        let v4 = GSubset::from_indices(FinAbGroup::new([2, 2]).unwrap(), &[0, 1]).unwrap();
        assert_eq!(
            dsh_bound_check(&v4, 2).unwrap_err(),
            SumsetError::NotPrimeOrderCyclic { order: 4 }
        );
        assert_eq!(
            cauchy_davenport_check(&zp(5, &[]), &zp(5, &[0])).unwrap_err(),
            SumsetError::EmptySet
        );
    }

    #[test]
    fn pair_sum_bound_on_general_groups() {
        // Z4: p(G) = 2.
        let a = GSubset::from_indices(FinAbGroup::cyclic(4).unwrap(), &[0, 1]).unwrap();
        let r = pair_sum_bound_check(&a).unwrap();
        assert_eq!(r, BoundReport { actual: 1, bound: 1, holds: true });
        // Z2 x Z2, three elements: 2^A has all three nonzero sums.
        let g = FinAbGroup::new([2, 2]).unwrap();
        let a = GSubset::from_indices(g, &[0, 1, 2]).unwrap();
        let r = pair_sum_bound_check(&a).unwrap();
        assert_eq!(r, BoundReport { actual: 3, bound: 2, holds: true });
        // Trivial group: bound is negative, vacuously fine.
        let t = GSubset::from_indices(FinAbGroup::trivial(), &[0]).unwrap();
        assert!(pair_sum_bound_check(&t).unwrap().holds);
    }

    #[test]
    fn stabilizer_hand_cases() {
        let g = FinAbGroup::cyclic(6).unwrap();
        let s = GSubset::from_indices(g.clone(), &[0, 2, 4]).unwrap();
        assert_eq!(stabilizer(&s).unwrap().element_indices(), &[0, 2, 4]);
        let s = GSubset::from_indices(g.clone(), &[0, 1]).unwrap();
        assert_eq!(stabilizer(&s).unwrap().element_indices(), &[0]);
        let empty = GSubset::from_indices(g.clone(), &[]).unwrap();
        assert!(stabilizer(&empty).unwrap().is_whole_group());
        let full = GSubset::full(&g);
        assert!(stabilizer(&full).unwrap().is_whole_group());
    }

    #[test]
    fn stabilizer_identity_on_periodic_sets() {
        let g = FinAbGroup::cyclic(6).unwrap();
        let a = GSubset::from_indices(g.clone(), &[0, 3]).unwrap();
        let r = kneser_check(&a, &a).unwrap();
        assert!(r.applies); // |A+B| = 2 <= 3
        assert_eq!(r.sumset_size, 2);
        assert_eq!(r.stabilizer.order(), 2);
        assert_eq!((r.a_plus_h, r.b_plus_h), (2, 2));
        assert!(r.identity_holds); // 2 = 2 + 2 - 2
        assert!(r.corollary_holds);
        // A case where the hypothesis fails: large spread-out sets.
        let a = GSubset::from_indices(g.clone(), &[0, 1]).unwrap();
        let b = GSubset::from_indices(g, &[0, 2, 4]).unwrap();
        let r = kneser_check(&a, &b).unwrap();
        assert_eq!(r.sumset_size, 6);
        assert!(!r.applies && r.identity_holds && r.corollary_holds);
    }

    /// All n! permutations, for cross-checking the backtracking.
    fn hall_oracle(b: &GSequence) -> Option<Vec<usize>> {
        let g = b.group();
        let n = g.order() as usize;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<usize>> = None;
        permute(&mut perm, 0, &mut |p| {
            let mut sums: Vec<u64> = p
                .iter()
                .zip(b.terms())
                .map(|(&x, bi)| g.element_index(&g.add(&g.element_from_index(x as u64), bi)))
                .collect();
            sums.sort_unstable();
            if sums.windows(2).all(|w| w[0] != w[1]) && best.as_ref().is_none_or(|q| p < &q[..]) {
                best = Some(p.to_vec());
            }
        });
        best
    }

    fn permute(p: &mut Vec<usize>, i: usize, visit: &mut impl FnMut(&[usize])) {
        if i == p.len() {
            visit(p);
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            permute(p, i + 1, visit);
            p.swap(i, j);
        }
        // Restore ascending order of the tail for determinism.
        p[i..].sort_unstable();
    }

    #[test]
    fn hall_numbering_hand_cases() {
        let g = FinAbGroup::cyclic(3).unwrap();
        let b = GSequence::from_indices(g.clone(), &[0, 0, 0]).unwrap();
        assert_eq!(hall_numbering(&b).unwrap(), Some(vec![0, 1, 2]));
        let b = GSequence::from_indices(g.clone(), &[1, 2, 0]).unwrap();
        let sigma = hall_numbering(&b).unwrap().unwrap();
        assert_eq!(Some(sigma), hall_oracle(&b));
        // Nonzero sum: impossible.
        let b = GSequence::from_indices(g, &[1, 0, 0]).unwrap();
        assert_eq!(hall_numbering(&b).unwrap(), None);
        // Wrong length.
        let g = FinAbGroup::cyclic(3).unwrap();
        let b = GSequence::from_indices(g, &[0, 0]).unwrap();
        assert!(matches!(
            hall_numbering(&b).unwrap_err(),
            SumsetError::BadLength { expected: 3, got: 2 }
        ));
    }

    #[test]
    fn snevily_numbering_hand_cases() {
        let g = FinAbGroup::cyclic(5).unwrap();
        let a = GSubset::from_indices(g.clone(), &[0, 1]).unwrap();
        let b = GSubset::from_indices(g.clone(), &[0, 2]).unwrap();
        match snevily_numbering(&a, &b).unwrap() {
            Numbering::Found { a_order, b_order } => {
                assert_eq!(a_order, vec![0, 1]);
                assert_eq!(b_order, vec![0, 1]); // 0+0 = 0, 1+2 = 3
            }
            Numbering::NoNumbering => panic!("odd cyclic groups always have one"),
        }
        // Parity obstruction: A = B = Z2 has none.
        let z2 = FinAbGroup::cyclic(2).unwrap();
        let full = GSubset::full(&z2);
        assert_eq!(
            snevily_numbering(&full, &full).unwrap(),
            Numbering::NoNumbering
        );
        let a = GSubset::from_indices(g.clone(), &[0]).unwrap();
        let b2 = GSubset::from_indices(g, &[0, 1]).unwrap();
        assert_eq!(
            snevily_numbering(&a, &b2).unwrap_err(),
            SumsetError::SizeMismatch { a: 1, b: 2 }
        );
    }

    #[test]
    fn snevily_z_hand_cases() {
        assert_eq!(snevily_z_permutation(&[0, 1], 3).unwrap(), Some(vec![0, 1]));
        // Repeated values are allowed in the integer version.
        assert_eq!(
            snevily_z_permutation(&[4, 4, 1], 5).unwrap(),
            Some(vec![0, 1, 2])
        );
        // k > n is impossible by pigeonhole.
        assert_eq!(snevily_z_permutation(&[0, 1, 2], 2).unwrap(), None);
        assert_eq!(snevily_z_permutation(&[], 4).unwrap(), Some(vec![]));
    }

    #[test]
    fn multiset_count_hand_case() {
        let g = FinAbGroup::cyclic(5).unwrap();
        let a = GSubset::from_indices(g.clone(), &[0, 1, 2]).unwrap();
        let b = GSequence::from_indices(g.clone(), &[0, 1]).unwrap();
        let r = multiset_count_check(&[a.clone(), a.clone()], &b, 1).unwrap();
        // Hand count: of the 9 pairs, (1,0) and (2,1) collide, leaving
        // 7 pairs and 6 distinct multisets.
        assert_eq!(r.count, 6);
        assert_eq!(r.bound, 4);
        assert!(r.holds);

        let b_dup = GSequence::from_indices(g.clone(), &[1, 1]).unwrap();
        assert_eq!(
            multiset_count_check(&[a.clone(), a.clone()], &b_dup, 1).unwrap_err(),
            SumsetError::NotDistinct
        );
        let small = GSubset::from_indices(g.clone(), &[0]).unwrap();
        assert_eq!(
            multiset_count_check(&[small.clone(), small], &b, 1).unwrap_err(),
            SumsetError::CardinalityTooSmall { k: 1, floor: 1 }
        );
        let v4 = FinAbGroup::new([2, 2]).unwrap();
        let s = GSubset::full(&v4);
        let bb = GSequence::from_indices(v4, &[0, 1]).unwrap();
        assert_eq!(
            multiset_count_check(&[s.clone(), s], &bb, 1).unwrap_err(),
            SumsetError::NotCyclic
        );
    }

    fn small_odd_cyclic() -> impl Strategy<Value = FinAbGroup> {
        prop::sample::select(vec![3u64, 5, 7, 9])
            .prop_map(|n| FinAbGroup::cyclic(n).unwrap())
    }

    proptest! {
        #[test]
        fn restricted_matches_bitmask_oracle(
            seed in any::<u64>(),
            p in prop::sample::select(vec![5u64, 7, 11]),
            n in 1usize..4,
        ) {
            let indices: Vec<u64> = (0..p).filter(|i| seed >> (i % 64) & 1 == 1).collect();
            prop_assume!(!indices.is_empty());
            let a = zp(p, &indices);
            let got = restricted_sumset(&a, n).unwrap();
            prop_assert_eq!(got.elements(), &restricted_oracle(&a, n)[..]);
        }

        #[test]
        fn cauchy_davenport_holds_on_z7(a_bits in 1u64..128, b_bits in 1u64..128) {
            let a = zp(7, &(0..7).filter(|i| a_bits >> i & 1 == 1).collect::<Vec<_>>());
            let b = zp(7, &(0..7).filter(|i| b_bits >> i & 1 == 1).collect::<Vec<_>>());
            prop_assert!(cauchy_davenport_check(&a, &b).unwrap().holds);
        }

        #[test]
        fn kneser_holds_on_small_groups(
            factors in prop::sample::select(vec![vec![6u64], vec![8], vec![2, 4], vec![2, 2, 2], vec![9], vec![12]]),
            a_bits in any::<u64>(),
            b_bits in any::<u64>(),
        ) {
            let g = FinAbGroup::new(factors).unwrap();
            let n = g.order();
            let a_idx: Vec<u64> = (0..n).filter(|i| a_bits >> (i % 64) & 1 == 1).collect();
            let b_idx: Vec<u64> = (0..n).filter(|i| b_bits >> (i % 64) & 1 == 1).collect();
            prop_assume!(!a_idx.is_empty() && !b_idx.is_empty());
            let a = GSubset::from_indices(g.clone(), &a_idx).unwrap();
            let b = GSubset::from_indices(g, &b_idx).unwrap();
            let r = kneser_check(&a, &b).unwrap();
            prop_assert!(r.identity_holds);
            prop_assert!(r.corollary_holds);
        }

        #[test]
        fn hall_matches_brute_force(seed in any::<u64>()) {
            let g = FinAbGroup::new([2, 2]).unwrap();
            // Three free terms, the fourth balances the sum to zero.
            let t0 = g.element_from_index(seed % 4);
            let t1 = g.element_from_index(seed / 4 % 4);
            let t2 = g.element_from_index(seed / 16 % 4);
            let t3 = g.neg(&g.add(&g.add(&t0, &t1), &t2));
            let b = GSequence::new(g, vec![t0, t1, t2, t3]).unwrap();
            let got = hall_numbering(&b).unwrap();
            prop_assert!(got.is_some());
            prop_assert_eq!(got, hall_oracle(&b));
        }

        #[test]
        fn snevily_found_on_odd_cyclic(g in small_odd_cyclic(), a_bits in any::<u64>(), b_bits in any::<u64>()) {
            let n = g.order();
            let a_idx: Vec<u64> = (0..n).filter(|i| a_bits >> (i % 64) & 1 == 1).collect();
            let b_idx: Vec<u64> = (0..n).filter(|i| b_bits >> (i % 64) & 1 == 1).collect();
            prop_assume!(!a_idx.is_empty() && a_idx.len() == b_idx.len());
            let a = GSubset::from_indices(g.clone(), &a_idx).unwrap();
            let b = GSubset::from_indices(g.clone(), &b_idx).unwrap();
            match snevily_numbering(&a, &b).unwrap() {
                Numbering::Found { a_order, b_order } => {
                    let sums: BTreeSet<u64> = a_order
                        .iter()
                        .zip(&b_order)
                        .map(|(&i, &j)| {
                            g.element_index(&g.add(&a.elements()[i], &b.elements()[j]))
                        })
                        .collect();
                    prop_assert_eq!(sums.len(), a_order.len());
                }
                Numbering::NoNumbering => {
                    return Err(TestCaseError::fail("odd cyclic must have a numbering"));
                }
            }
        }
    }
}
