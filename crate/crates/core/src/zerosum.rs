//! Zero-sum subsequences of sequences over finite abelian groups.
//!
//! * [`egz_witness`]: for a group of order `n`, a zero-sum subsequence
//!   of length exactly `n` (guaranteed to exist once the sequence has
//!   `2n - 1` terms);
//! * [`zero_sum_free_max`] / [`davenport_constant`]: exhaustive search
//!   for the longest sequence with no nonempty zero-sum subsequence;
//! * [`olson_davenport`]: the closed form `1 + sum (d_t - 1)` for
//!   `p`-groups, so search and formula can cross-check each other;
//! * [`cover_zero_sum_witness`]: the bridge from covering multiplicity
//!   to zero-sums. If every integer is covered by `{a_s(n_s)}` either
//!   `2q - 1` or `2q` times, `q` a prime power, then any `c_1..c_k` in
//!   a group of order `q` admit `I` with `sum_{s in I} 1/n_s = q` and
//!   `sum_{s in I} c_s = 0`.
//!
//! Witness searches return the lexicographically least index set and
//! the DP table sizes are bounded, so results are deterministic and
//! refusals explicit.

use std::collections::HashMap;

use thiserror::Error;

use crate::arith;
use crate::covers::{self, CoverError};
use crate::groups::{FinAbGroup, GroupElement, GroupError};
use crate::residues::ResidueSystem;
use crate::Budgeted;

/// Largest group order for the zero-sum-free search (subset sums are a
/// 64-bit mask).
pub const MAX_MASK_ORDER: u64 = 64;

/// Cell cap for witness DP tables.
pub const MAX_DP_CELLS: u128 = 200_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZeroSumError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("witness table needs {cells} cells, limit is {limit}")]
    DpTooLarge { cells: u128, limit: u128 },
    #[error("sequence has {got} terms but the system has {expected} classes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("group order {q} is not a prime power (at least 2)")]
    NotPrimePower { q: u64 },
    #[error("x = {x} is covered {got} times, outside {{2q-1, 2q}} for q = {q}")]
    MultiplicityOutOfRange { x: u64, got: u64, q: u64 },
    #[error("the group is not a p-group")]
    NotAPGroup,
}

/// A finite sequence of elements of one group, order kept, repetition
/// allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSequence {
    group: FinAbGroup,
    terms: Vec<GroupElement>,
}

impl GSequence {
    pub fn new(group: FinAbGroup, terms: Vec<GroupElement>) -> Result<Self, ZeroSumError> {
        for t in &terms {
            if t.coords().len() != group.rank() {
                return Err(GroupError::DimensionMismatch {
                    expected: group.rank(),
                    got: t.coords().len(),
                }
                .into());
            }
        }
        Ok(GSequence { group, terms })
    }

    /// Builds a sequence from element indices.
    pub fn from_indices(group: FinAbGroup, indices: &[u64]) -> Result<Self, ZeroSumError> {
        let terms = indices
            .iter()
            .map(|&i| {
                if i < group.order() {
                    Ok(group.element_from_index(i))
                } else {
                    Err(GroupError::DimensionMismatch { expected: group.rank(), got: usize::MAX })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GSequence { group, terms })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn terms(&self) -> &[GroupElement] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sum(&self) -> GroupElement {
        self.terms
            .iter()
            .fold(self.group.identity(), |acc, t| self.group.add(&acc, t))
    }
}

/// Lexicographically least `I` (ascending indices) with `|I| = |G|` and
/// `sum_{s in I} c_s = 0`, or `None` if there is none. A sequence of
/// length at least `2|G| - 1` always yields `Some`.
pub fn egz_witness(seq: &GSequence) -> Result<Option<Vec<usize>>, ZeroSumError> {
    let g = seq.group();
    let n = g.order() as usize;
    let l = seq.len();
    if l < n {
        return Ok(None);
    }
    let cells = (l as u128 + 1) * (n as u128 + 1) * n as u128;
    if cells > MAX_DP_CELLS {
        return Err(ZeroSumError::DpTooLarge { cells, limit: MAX_DP_CELLS });
    }

    // feasible[i][j][t]: some j positions in i.. sum to the element with
    // index t.
    let at = |i: usize, j: usize, t: usize| (i * (n + 1) + j) * n + t;
    let mut feasible = vec![false; (l + 1) * (n + 1) * n];
    feasible[at(l, 0, 0)] = true;
    for i in (0..l).rev() {
        let c = &seq.terms[i];
        for t in 0..n {
            // Index of (element t) - c_i: the target left after taking i.
            let t_minus = g.element_index(&g.sub(&g.element_from_index(t as u64), c)) as usize;
            for j in 0..=n {
                let skip = feasible[at(i + 1, j, t)];
                let take = j > 0 && feasible[at(i + 1, j - 1, t_minus)];
                feasible[at(i, j, t)] = skip || take;
            }
        }
    }

    if !feasible[at(0, n, 0)] {
        return Ok(None);
    }
    // Prefer taking the current position: yields the lex-least set.
    let mut witness = Vec::with_capacity(n);
    let (mut j, mut t) = (n, 0usize);
    for i in 0..l {
        if j == 0 {
            break;
        }
        let t_minus =
            g.element_index(&g.sub(&g.element_from_index(t as u64), &seq.terms[i])) as usize;
        if feasible[at(i + 1, j - 1, t_minus)] {
            witness.push(i);
            j -= 1;
            t = t_minus;
        }
    }
    debug_assert_eq!(witness.len(), n);
    Ok(Some(witness))
}

/// Length of the longest sequence over `G` with no nonempty zero-sum
/// subsequence, by exhaustive DFS.
///
/// The state is the set of achievable nonempty subset sums (a bitmask
/// over element indices, hence the order cap) plus the least element
/// index still allowed, which canonicalizes sequences to nondecreasing
/// index order. Exceeding `node_budget` returns
/// [`Budgeted::Exhausted`].
pub fn zero_sum_free_max(
    g: &FinAbGroup,
    node_budget: u64,
) -> Result<Budgeted<u64>, ZeroSumError> {
    let n = g.order();
    if n > MAX_MASK_ORDER {
        return Err(GroupError::GroupTooLarge { order: n, limit: MAX_MASK_ORDER }.into());
    }
    let n = n as usize;
    let mut add = vec![0u8; n * n];
    for i in 0..n {
        for j in 0..n {
            add[i * n + j] = g
                .element_index(&g.add(&g.element_from_index(i as u64), &g.element_from_index(j as u64)))
                as u8;
        }
    }
    let mut ctx = DepthSearch {
        add,
        n,
        memo: HashMap::new(),
        nodes: 0,
        budget: node_budget,
        exhausted: false,
    };
    let best = ctx.depth(0, 1);
    if ctx.exhausted {
        Ok(Budgeted::Exhausted { nodes: ctx.nodes })
    } else {
        Ok(Budgeted::Done(u64::from(best)))
    }
}

struct DepthSearch {
    add: Vec<u8>,
    n: usize,
    memo: HashMap<(u64, u8), u32>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl DepthSearch {
    /// Longest zero-sum-free extension from achievable-sum set `sums`,
    /// using element indices `>= min_idx`.
    fn depth(&mut self, sums: u64, min_idx: u8) -> u32 {
        if self.exhausted {
            return 0;
        }
        if let Some(&d) = self.memo.get(&(sums, min_idx)) {
            return d;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return 0;
        }
        let mut best = 0;
        for x in (min_idx as usize)..self.n {
            let mut next = sums | 1 << x;
            let mut rest = sums;
            while rest != 0 {
                let s = rest.trailing_zeros() as usize;
                next |= 1 << self.add[s * self.n + x];
                rest &= rest - 1;
            }
            if next & 1 == 1 {
                continue; // some subsequence now sums to zero
            }
            best = best.max(1 + self.depth(next, x as u8));
        }
        if !self.exhausted {
            self.memo.insert((sums, min_idx), best);
        }
        best
    }
}

/// Davenport constant `D(G)`: least `k` such that every length-`k`
/// sequence has a nonempty zero-sum subsequence. Computed by search.
pub fn davenport_constant(
    g: &FinAbGroup,
    node_budget: u64,
) -> Result<Budgeted<u64>, ZeroSumError> {
    Ok(match zero_sum_free_max(g, node_budget)? {
        Budgeted::Done(max) => Budgeted::Done(max + 1),
        exhausted => exhausted,
    })
}

/// Davenport constant of a `p`-group in closed form:
/// `D = 1 + sum_t (d_t - 1)`. Errors on groups whose factors are not
/// all powers of one prime (the trivial group is allowed).
pub fn olson_davenport(g: &FinAbGroup) -> Result<u64, ZeroSumError> {
    let mut base: Option<u64> = None;
    for &d in g.factors() {
        let p = arith::prime_power_base(d).ok_or(ZeroSumError::NotAPGroup)?;
        if *base.get_or_insert(p) != p {
            return Err(ZeroSumError::NotAPGroup);
        }
    }
    Ok(1 + g.factors().iter().map(|&d| d - 1).sum::<u64>())
}

/// Does `D(Z_n^k) = 1 + k(n - 1)` hold? Checked by exhaustive search,
/// so `n^k` must stay within [`MAX_MASK_ORDER`].
pub fn olson_conjecture_check(
    n: u64,
    k: u32,
    node_budget: u64,
) -> Result<Budgeted<bool>, ZeroSumError> {
    let g = FinAbGroup::new(std::iter::repeat(n).take(k as usize))?;
    Ok(match davenport_constant(&g, node_budget)? {
        Budgeted::Done(d) => Budgeted::Done(d == 1 + u64::from(k) * (n - 1)),
        Budgeted::Exhausted { nodes } => Budgeted::Exhausted { nodes },
    })
}

/// Covering-multiplicity zero-sum bridge. Requires `q = |G|` to be a
/// prime power at least 2, one term per residue class, and every
/// integer covered `2q - 1` or `2q` times (verified over one period).
/// Returns the lex-least `I` with `sum_{s in I} 1/n_s = q` and
/// `sum_{s in I} c_s = 0`; the hypotheses guarantee one exists.
pub fn cover_zero_sum_witness(
    a: &ResidueSystem,
    seq: &GSequence,
) -> Result<Option<Vec<usize>>, ZeroSumError> {
    let g = seq.group();
    let q = g.order();
    if q < 2 || arith::prime_power_base(q).is_none() {
        return Err(ZeroSumError::NotPrimePower { q });
    }
    let k = a.len();
    if seq.len() != k {
        return Err(ZeroSumError::LengthMismatch { expected: k, got: seq.len() });
    }
    let counts = covers::multiplicity_counts(a)?;
    for (x, &w) in counts.iter().enumerate() {
        let w = u64::from(w);
        if w != 2 * q - 1 && w != 2 * q {
            return Err(ZeroSumError::MultiplicityOutOfRange { x: x as u64, got: w, q });
        }
    }
    let period = counts.len() as u64;
    let weights: Vec<u64> = a
        .classes()
        .iter()
        .map(|c| {
            use num_traits::ToPrimitive;
            period / c.modulus().to_u64().expect("modulus divides the scanned period")
        })
        .collect();
    let target = (q * period) as usize;
    let qn = q as usize;

    let cells = (k as u128 + 1) * (target as u128 + 1) * qn as u128;
    if cells > MAX_DP_CELLS {
        return Err(ZeroSumError::DpTooLarge { cells, limit: MAX_DP_CELLS });
    }

    // feasible[i][j][t]: positions in i.. can contribute scaled
    // reciprocal weight exactly j and group sum t.
    let at = |i: usize, j: usize, t: usize| (i * (target + 1) + j) * qn + t;
    let mut feasible = vec![false; (k + 1) * (target + 1) * qn];
    feasible[at(k, 0, 0)] = true;
    for i in (0..k).rev() {
        let w = weights[i] as usize;
        let c = &seq.terms[i];
        for t in 0..qn {
            let t_minus = g.element_index(&g.sub(&g.element_from_index(t as u64), c)) as usize;
            for j in 0..=target {
                let skip = feasible[at(i + 1, j, t)];
                let take = j >= w && feasible[at(i + 1, j - w, t_minus)];
                feasible[at(i, j, t)] = skip || take;
            }
        }
    }
    if !feasible[at(0, target, 0)] {
        return Ok(None);
    }
    let mut witness = Vec::new();
    let (mut j, mut t) = (target, 0usize);
    for i in 0..k {
        let w = weights[i] as usize;
        let t_minus =
            g.element_index(&g.sub(&g.element_from_index(t as u64), &seq.terms[i])) as usize;
        if j >= w && feasible[at(i + 1, j - w, t_minus)] {
            witness.push(i);
            j -= w;
            t = t_minus;
        }
    }
    debug_assert_eq!(j, 0);
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyclic(n: u64) -> FinAbGroup {
        FinAbGroup::cyclic(n).unwrap()
    }

    fn seq_mod(n: u64, values: &[i64]) -> GSequence {
        let g = cyclic(n);
        let terms = values.iter().map(|&v| g.element(&[v]).unwrap()).collect();
        GSequence::new(g, terms).unwrap()
    }

    /// Brute force over all index sets of the required size.
    fn egz_oracle(seq: &GSequence) -> Option<Vec<usize>> {
        let g = seq.group();
        let n = g.order() as usize;
        let l = seq.len();
        if l < n || l > 20 {
            return None;
        }
        let mut best: Option<Vec<usize>> = None;
        for mask in 0u32..1 << l {
            if mask.count_ones() as usize != n {
                continue;
            }
            let picked: Vec<usize> = (0..l).filter(|i| mask >> i & 1 == 1).collect();
            let sum = picked
                .iter()
                .fold(g.identity(), |acc, &i| g.add(&acc, &seq.terms()[i]));
            if sum.is_zero() && best.as_ref().is_none_or(|b| picked < *b) {
                best = Some(picked);
            }
        }
        best
    }

    #[test]
    fn sequence_construction_and_sum() {
        let s = seq_mod(5, &[1, 2, 3]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.sum(), cyclic(5).element(&[1]).unwrap());
        let g = cyclic(5);
        let bad = GSequence::new(g, vec![FinAbGroup::trivial().identity()]);
        assert!(bad.is_err());
        assert!(GSequence::from_indices(cyclic(4), &[0, 5]).is_err());
    }

    #[test]
    fn egz_hand_cases() {
        assert_eq!(egz_witness(&seq_mod(2, &[1, 1, 0])).unwrap(), Some(vec![0, 1]));
        assert_eq!(egz_witness(&seq_mod(2, &[1, 0, 0])).unwrap(), Some(vec![1, 2]));
        assert_eq!(
            egz_witness(&seq_mod(3, &[1, 1, 1, 2, 0])).unwrap(),
            Some(vec![0, 1, 2])
        );
        // Too short to pick n terms at all.
        assert_eq!(egz_witness(&seq_mod(4, &[1, 2])).unwrap(), None);
    }

    #[test]
    fn egz_extremal_sequence_has_no_witness() {
        // n-1 zeros then n-1 ones: any n terms sum to a value in
        // 1..n-1 mod n, so the bound 2n-1 is tight.
        for n in 2..=6u64 {
            let vals: Vec<i64> = std::iter::repeat(0)
                .take(n as usize - 1)
                .chain(std::iter::repeat(1).take(n as usize - 1))
                .collect();
            let s = seq_mod(n, &vals);
            assert_eq!(egz_witness(&s).unwrap(), None, "n = {n}");
            assert_eq!(egz_oracle(&s), None);
        }
    }

    #[test]
    fn egz_on_a_noncyclic_group() {
        let g = FinAbGroup::new([2, 2]).unwrap();
        let terms: Vec<GroupElement> = [[1, 0], [0, 1], [1, 1], [1, 0], [0, 1], [1, 1], [0, 0]]
            .iter()
            .map(|c| g.element(&[c[0], c[1]]).unwrap())
            .collect();
        let s = GSequence::new(g.clone(), terms).unwrap();
        let w = egz_witness(&s).unwrap().expect("guaranteed at length 2n-1");
        assert_eq!(w.len(), 4);
        let sum = w.iter().fold(g.identity(), |acc, &i| g.add(&acc, &s.terms()[i]));
        assert!(sum.is_zero());
        assert_eq!(Some(w), egz_oracle(&s));
    }

    #[test]
    fn davenport_of_cyclic_groups_is_n() {
        for n in 1..=8u64 {
            let d = davenport_constant(&cyclic(n), 1_000_000).unwrap();
            assert_eq!(d, Budgeted::Done(n), "n = {n}");
        }
    }

    #[test]
    fn davenport_of_small_p_groups_matches_closed_form() {
        for factors in [vec![2, 2], vec![3, 3], vec![2, 4], vec![2, 2, 2], vec![9], vec![2, 2, 4]]
        {
            let g = FinAbGroup::new(factors).unwrap();
            let d = davenport_constant(&g, 10_000_000).unwrap().expect_done("budget");
            assert_eq!(d, olson_davenport(&g).unwrap(), "{g}");
        }
    }

    #[test]
    fn olson_formula_values() {
        assert_eq!(olson_davenport(&cyclic(8)).unwrap(), 8);
        assert_eq!(
            olson_davenport(&FinAbGroup::new([9, 3]).unwrap()).unwrap(),
            11
        );
        assert_eq!(olson_davenport(&FinAbGroup::trivial()).unwrap(), 1);
        assert_eq!(
            olson_davenport(&cyclic(6)).unwrap_err(),
            ZeroSumError::NotAPGroup
        );
        assert_eq!(
            olson_davenport(&FinAbGroup::new([2, 3]).unwrap()).unwrap_err(),
            ZeroSumError::NotAPGroup
        );
    }

    #[test]
    fn non_p_group_davenport_by_search() {
        // D(Z_6) = 6: not covered by the closed form, search only.
        let d = davenport_constant(&cyclic(6), 1_000_000).unwrap();
        assert_eq!(d, Budgeted::Done(6));
        let g = FinAbGroup::new([2, 6]).unwrap();
        let d = davenport_constant(&g, 10_000_000).unwrap();
        assert_eq!(d, Budgeted::Done(7)); // 1 + (2-1) + (6-1)
    }

    #[test]
    fn budget_exhaustion_reports_nodes() {
        match zero_sum_free_max(&FinAbGroup::new([4, 4]).unwrap(), 5).unwrap() {
            Budgeted::Exhausted { nodes } => assert!(nodes > 5),
            Budgeted::Done(_) => panic!("budget of 5 nodes cannot finish"),
        }
        assert!(zero_sum_free_max(&FinAbGroup::new([65]).unwrap(), 10).is_err());
    }

    #[test]
    fn olson_conjecture_small_cases() {
        assert_eq!(olson_conjecture_check(2, 2, 1_000_000).unwrap(), Budgeted::Done(true));
        assert_eq!(olson_conjecture_check(3, 2, 1_000_000).unwrap(), Budgeted::Done(true));
        assert_eq!(olson_conjecture_check(6, 1, 1_000_000).unwrap(), Budgeted::Done(true));
    }

    fn ones_cover(copies: usize) -> ResidueSystem {
        ResidueSystem::from_pairs(&vec![(0i64, 1i64); copies]).unwrap()
    }

    #[test]
    fn bridge_witness_hand_cases() {
        // Three copies of 0(1): every x covered 3 times, q = 2.
        let a = ones_cover(3);
        let c = seq_mod(2, &[1, 1, 0]);
        assert_eq!(cover_zero_sum_witness(&a, &c).unwrap(), Some(vec![0, 1]));
        let c = seq_mod(2, &[1, 0, 0]);
        assert_eq!(cover_zero_sum_witness(&a, &c).unwrap(), Some(vec![1, 2]));
        // With 0(2) added the multiplicity alternates between 3 and 4.
        let a = ResidueSystem::from_pairs(&[(0, 1), (0, 1), (0, 1), (0, 2)]).unwrap();
        let c = seq_mod(2, &[1, 1, 1, 1]);
        let w = cover_zero_sum_witness(&a, &c).unwrap().unwrap();
        assert_eq!(w, vec![0, 1]); // 1/1 + 1/1 = 2, 1 + 1 = 0
    }

    #[test]
    fn bridge_rejects_broken_hypotheses() {
        // Multiplicity 1 is outside {3, 4}.
        let thin = ones_cover(1);
        let c = seq_mod(2, &[1]);
        assert_eq!(
            cover_zero_sum_witness(&thin, &c).unwrap_err(),
            ZeroSumError::MultiplicityOutOfRange { x: 0, got: 1, q: 2 }
        );
        // |G| = 6 is not a prime power.
        let a = ResidueSystem::from_pairs(&vec![(0, 1); 11]).unwrap();
        let c = seq_mod(6, &[1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5]);
        assert_eq!(
            cover_zero_sum_witness(&a, &c).unwrap_err(),
            ZeroSumError::NotPrimePower { q: 6 }
        );
        let a = ones_cover(3);
        let c = seq_mod(2, &[1, 1]);
        assert_eq!(
            cover_zero_sum_witness(&a, &c).unwrap_err(),
            ZeroSumError::LengthMismatch { expected: 3, got: 2 }
        );
    }

    /// Brute force for the bridge: all 2^k subsets.
    fn bridge_oracle(a: &ResidueSystem, seq: &GSequence) -> Option<Vec<usize>> {
        use num_traits::ToPrimitive;
        let g = seq.group();
        let q = g.order();
        let k = a.len();
        let n = a.lcm_modulus().to_u64().unwrap();
        let weights: Vec<u64> = a
            .classes()
            .iter()
            .map(|c| n / c.modulus().to_u64().unwrap())
            .collect();
        (0u64..1 << k)
            .filter_map(|mask| {
                let picked: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
                let wsum: u64 = picked.iter().map(|&i| weights[i]).sum();
                let gsum = picked
                    .iter()
                    .fold(g.identity(), |acc, &i| g.add(&acc, &seq.terms()[i]));
                (wsum == q * n && gsum.is_zero()).then_some(picked)
            })
            .min()
    }

    fn doubled_plus_half() -> ResidueSystem {
        // Two disjoint covers plus one extra class: multiplicity 2 + 1
        // on half the integers, i.e. {3, 4} with q = 2... built so the
        // weights are not all equal.
        ResidueSystem::from_pairs(&[(0, 1), (0, 2), (1, 2), (0, 2), (0, 1)]).unwrap()
    }

    proptest! {
        #[test]
        fn egz_matches_brute_force(n in 2u64..5, vals in prop::collection::vec(0i64..8, 0..9)) {
            let s = seq_mod(n, &vals);
            prop_assert_eq!(egz_witness(&s).unwrap(), egz_oracle(&s));
        }

        #[test]
        fn egz_guarantee_at_threshold(n in 2u64..6, seed in any::<u64>()) {
            let g = cyclic(n);
            let mut state = seed;
            let vals: Vec<i64> = (0..2 * n - 1)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (state >> 33) as i64 % n as i64
                })
                .collect();
            let s = seq_mod(n, &vals);
            let w = egz_witness(&s).unwrap().expect("length 2n-1 guarantees a witness");
            prop_assert_eq!(w.len() as u64, n);
            prop_assert!(w.windows(2).all(|p| p[0] < p[1]));
            let sum = w.iter().fold(g.identity(), |acc, &i| g.add(&acc, &s.terms()[i]));
            prop_assert!(sum.is_zero());
        }

        #[test]
        fn bridge_matches_brute_force(vals in prop::collection::vec(0i64..2, 5)) {
            let a = doubled_plus_half();
            let c = seq_mod(2, &vals);
            prop_assert_eq!(cover_zero_sum_witness(&a, &c).unwrap(), bridge_oracle(&a, &c));
            prop_assert!(bridge_oracle(&a, &c).is_some());
        }
    }
}
