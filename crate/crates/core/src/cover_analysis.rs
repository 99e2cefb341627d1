//! Structure of disjoint covers (exact 1-covers) of the integers and a
//! desk-scale exhaustive search for covers.
//!
//! A disjoint cover partitions `Z` into residue classes. Classical facts
//! verified here:
//!
//! * with `1 < n_1 <= ... <= n_k`, the two largest moduli are equal;
//! * `k >= 1 + f(N)` where `N = lcm(n_1..n_k)` and `f` is the Mycielski
//!   function `f(p_1^a_1 ... p_r^a_r) = sum a_t (p_t - 1)`, and
//!   `N <= 2^(k-1)` (the Znám bound);
//! * the reciprocals of the moduli sum to exactly 1;
//! * every proper nonempty index set `J` has a twin `I != J` with the
//!   same reciprocal sum, and every fraction `r/n_t` with
//!   `0 <= r < n_t` is a sum of reciprocals over indices avoiding `t`.
//!
//! [`index_inequality_check`] evaluates, for any cover-multiplicity
//! period `n0` and any `d` not dividing `n0`, the chain
//!
//! ```text
//! |I(d)| >= |{a_s mod d : s in I(d)}| >= min d/gcd(d, n_s) >= p(d)
//! ```
//!
//! where `I(d) = {s : d | n_s}` and `p(d)` is the least prime factor of
//! `d`. The middle minimum is stated over `d`-nondividing moduli; both
//! readings of its range (classes only, or classes plus the period
//! `n_0 = n0`) are exposed via [`index_inequality_chain`] so tests can
//! compare them.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;
use crate::covers::{self, CoverError};
use crate::residues::{ResidueClass, ResidueSystem};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("the system is not a disjoint cover")]
    NotDisjointCover,
    #[error("index subset must be a nonempty proper subset of 0..{k}")]
    BadIndexSubset { k: usize },
    #[error("class index {t} out of range (k = {k})")]
    IndexOutOfRange { t: usize, k: usize },
    #[error("r = {r} is not in 0..n_t")]
    ROutOfRange { r: u64 },
    #[error("d divides the period, so the index chain does not apply")]
    DividesPeriod,
    #[error("no modulus is divisible by d")]
    EmptyIndexSet,
    #[error("{0} is not a period of the covering multiplicity")]
    NotAPeriod(BigInt),
    #[error("d must be at least 2 and fit in 64 bits")]
    BadD,
    #[error("subset-sum witnesses support at most 63 classes, got {got}")]
    TooManyClasses { got: usize },
    #[error("modulus pool must be nonempty, with k_max in 1..=12")]
    BadSearchParams,
    #[error("modulus pool contains 0")]
    ZeroPoolModulus,
}

/// Mycielski's function: `f(n) = sum a_t (p_t - 1)` over the prime
/// factorization `n = prod p_t^a_t`; `f(1) = 0`.
pub fn mycielski_f(n: u64) -> Result<u64, AnalysisError> {
    if n == 0 {
        return Err(AnalysisError::BadD);
    }
    Ok(arith::factorize(n)
        .into_iter()
        .map(|(p, a)| u64::from(a) * (p - 1))
        .sum())
}

/// Structural report on a residue system's disjoint-cover properties.
///
/// All fields are computed unconditionally; the classical implications
/// (`is_disjoint_cover` forces the others) are what the test suites
/// assert.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointCoverReport {
    /// Does the system cover every integer exactly once?
    pub is_disjoint_cover: bool,
    /// Are the two largest moduli equal (vacuously true for k = 1)?
    pub top_two_equal: bool,
    /// `k >= 1 + f(N)` and `N <= 2^(k-1)`?
    pub znam_ok: bool,
    /// `f(lcm of moduli)`.
    pub mycielski_f_of_n: u64,
    /// Is the reciprocal sum exactly 1?
    pub reciprocal_sum_is_one: bool,
}

pub fn analyze_disjoint(a: &ResidueSystem) -> Result<DisjointCoverReport, AnalysisError> {
    let is_disjoint_cover = covers::is_exact_m_cover_naive(a, 1)?.is_cover;
    let k = a.len();

    let mut moduli: Vec<&BigInt> = a.classes().iter().map(|c| c.modulus()).collect();
    moduli.sort();
    let top_two_equal = k == 1 || moduli[k - 2] == moduli[k - 1];

    let n = covers::scan_lcm(a)?;
    let mycielski_f_of_n = mycielski_f(n)?;
    let znam_ok = k as u64 >= 1 + mycielski_f_of_n
        && BigInt::from(n) <= (BigInt::one() << (k - 1));

    Ok(DisjointCoverReport {
        is_disjoint_cover,
        top_two_equal,
        znam_ok,
        mycielski_f_of_n,
        reciprocal_sum_is_one: a.reciprocal_sum().is_one(),
    })
}

/// Is `n0` a period of the covering multiplicity? Verified by scanning
/// one full lcm period.
pub fn is_period(a: &ResidueSystem, n0: &BigInt) -> Result<bool, AnalysisError> {
    if !n0.is_positive() {
        return Ok(false);
    }
    let lcm = a.lcm_modulus();
    if (&lcm % n0).is_zero() && *n0 <= lcm {
        // Divisor check is not enough: shifting by a divisor of the lcm
        // need not fix the multiplicity profile.
    }
    let counts = covers::multiplicity_counts(a)?;
    let n = counts.len() as u64;
    let shift = n0.mod_floor(&BigInt::from(n)).to_u64().expect("reduced");
    Ok((0..n).all(|x| counts[x as usize] == counts[((x + shift) % n) as usize]))
}

/// Which moduli enter the minimum in the index chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinRange {
    /// Classes `s` with `d` not dividing `n_s`, plus the period `n0`.
    WithPeriod,
    /// Classes only.
    ClassesOnly,
}

/// Fully evaluated index-inequality chain for one `(n0, d)` pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexChain {
    /// `|I(d)|`, the number of classes whose modulus `d` divides.
    pub index_count: usize,
    /// `|{a_s mod d : s in I(d)}|`.
    pub residue_count: usize,
    /// `min d/gcd(d, n_s)` over classes with `d` not dividing `n_s`;
    /// `None` when no class qualifies.
    pub min_ratio_classes: Option<BigInt>,
    /// Same minimum with the period term `d/gcd(d, n0)` included.
    pub min_ratio_with_period: BigInt,
    /// Least prime factor of `d`.
    pub least_prime: u64,
    pub holds_with_period: bool,
    pub holds_classes_only: bool,
}

/// Evaluates the chain for a verified period `n0` and a `d` with
/// `d` dividing no period, returning both readings of the minimum.
pub fn index_inequality_chain(
    a: &ResidueSystem,
    n0: &BigInt,
    d: &BigInt,
) -> Result<IndexChain, AnalysisError> {
    let d_u64 = d.to_u64().filter(|&v| v >= 2).ok_or(AnalysisError::BadD)?;
    if n0.mod_floor(d).is_zero() {
        return Err(AnalysisError::DividesPeriod);
    }
    if *n0 != a.lcm_modulus() && !is_period(a, n0)? {
        return Err(AnalysisError::NotAPeriod(n0.clone()));
    }

    let in_i: Vec<&ResidueClass> = a
        .classes()
        .iter()
        .filter(|c| c.modulus().mod_floor(d).is_zero())
        .collect();
    if in_i.is_empty() {
        return Err(AnalysisError::EmptyIndexSet);
    }
    let residues: BTreeSet<BigInt> = in_i.iter().map(|c| c.residue().mod_floor(d)).collect();

    let ratio = |n: &BigInt| d / d.gcd(n);
    let min_ratio_classes = a
        .classes()
        .iter()
        .filter(|c| !c.modulus().mod_floor(d).is_zero())
        .map(|c| ratio(c.modulus()))
        .min();
    let period_ratio = ratio(n0);
    let min_ratio_with_period = match &min_ratio_classes {
        Some(m) => m.min(&period_ratio).clone(),
        None => period_ratio,
    };

    let least_prime = arith::least_prime_factor(d_u64).expect("d >= 2");
    let index_count = in_i.len();
    let residue_count = residues.len();

    let holds = |min: &BigInt| {
        index_count >= residue_count
            && BigInt::from(residue_count as u64) >= *min
            && *min >= BigInt::from(least_prime)
    };
    Ok(IndexChain {
        holds_with_period: holds(&min_ratio_with_period),
        holds_classes_only: match &min_ratio_classes {
            // With no qualifying class the middle comparison is vacuous.
            None => index_count >= residue_count,
            Some(m) => holds(m),
        },
        index_count,
        residue_count,
        min_ratio_classes,
        min_ratio_with_period,
        least_prime,
    })
}

/// The index-inequality chain with the minimum taken over the
/// `d`-nondividing moduli *and* the period (the wider range).
pub fn index_inequality_check(
    a: &ResidueSystem,
    n0: &BigInt,
    d: &BigInt,
) -> Result<bool, AnalysisError> {
    Ok(index_inequality_chain(a, n0, d)?.holds_with_period)
}

/// For a disjoint cover and a nonempty proper index set `J`, finds an
/// index set `I != J` with the same reciprocal sum
/// `sum_{s in I} 1/n_s = sum_{s in J} 1/n_s`.
///
/// Deterministic: among all twins the one with the smallest index
/// bitmask is returned. `None` would contradict a theorem and is left to
/// the caller (the test suites) to treat as a failure.
pub fn unit_fraction_twin(
    a: &ResidueSystem,
    j: &BTreeSet<usize>,
) -> Result<Option<BTreeSet<usize>>, AnalysisError> {
    let k = a.len();
    if k > 63 {
        return Err(AnalysisError::TooManyClasses { got: k });
    }
    if j.is_empty() || j.len() >= k || j.iter().any(|&s| s >= k) {
        return Err(AnalysisError::BadIndexSubset { k });
    }
    if !covers::is_exact_m_cover_naive(a, 1)?.is_cover {
        return Err(AnalysisError::NotDisjointCover);
    }
    let weights = scaled_weights(a)?;
    let j_mask: u64 = j.iter().fold(0, |m, &s| m | 1 << s);
    let target: u64 = j.iter().map(|&s| weights[s]).sum();

    // Keep the two smallest masks per value; adding a fixed bit is
    // monotone in mask order, so the two global minima survive.
    let total: u64 = weights.iter().sum();
    let mut best: Vec<[Option<u64>; 2]> = vec![[None; 2]; (total + 1) as usize];
    best[0] = [Some(0), None];
    for (s, &w) in weights.iter().enumerate() {
        let bit = 1u64 << s;
        for v in (w..=total).rev() {
            let from = best[(v - w) as usize];
            for mask in from.into_iter().flatten() {
                insert_two_best(&mut best[v as usize], mask | bit);
            }
        }
    }
    Ok(best[target as usize]
        .into_iter()
        .flatten()
        .find(|&m| m != j_mask)
        .map(mask_to_set))
}

/// For a disjoint cover, any class index `t` and any `0 <= r < n_t`,
/// finds `I` avoiding `t` with `sum_{s in I} 1/n_s = r/n_t`; smallest
/// index bitmask, `r = 0` yields the empty set.
pub fn unit_fraction_ratio(
    a: &ResidueSystem,
    t: usize,
    r: u64,
) -> Result<Option<BTreeSet<usize>>, AnalysisError> {
    let k = a.len();
    if k > 63 {
        return Err(AnalysisError::TooManyClasses { got: k });
    }
    if t >= k {
        return Err(AnalysisError::IndexOutOfRange { t, k });
    }
    if BigInt::from(r) >= *a.classes()[t].modulus() {
        return Err(AnalysisError::ROutOfRange { r });
    }
    if !covers::is_exact_m_cover_naive(a, 1)?.is_cover {
        return Err(AnalysisError::NotDisjointCover);
    }
    let weights = scaled_weights(a)?;
    let target = r * weights[t];

    let total: u64 = weights.iter().sum();
    if target > total {
        return Ok(None);
    }
    let mut best: Vec<Option<u64>> = vec![None; (total + 1) as usize];
    best[0] = Some(0);
    for (s, &w) in weights.iter().enumerate() {
        if s == t {
            continue;
        }
        let bit = 1u64 << s;
        for v in (w..=total).rev() {
            if let Some(mask) = best[(v - w) as usize] {
                let cand = mask | bit;
                if best[v as usize].is_none_or(|cur| cand < cur) {
                    best[v as usize] = Some(best[v as usize].unwrap_or(cand).min(cand));
                }
            }
        }
    }
    Ok(best[target as usize].map(mask_to_set))
}

/// Reciprocals scaled by the lcm: weight `N/n_s` for class `s`.
fn scaled_weights(a: &ResidueSystem) -> Result<Vec<u64>, AnalysisError> {
    let n = covers::scan_lcm(a)?;
    Ok(a.classes()
        .iter()
        .map(|c| n / c.modulus().to_u64().expect("modulus divides u64 lcm"))
        .collect())
}

fn insert_two_best(slot: &mut [Option<u64>; 2], mask: u64) {
    match *slot {
        [None, _] => *slot = [Some(mask), None],
        [Some(a), _] if mask == a => {}
        [Some(a), None] => {
            *slot = if mask < a {
                [Some(mask), Some(a)]
            } else {
                [Some(a), Some(mask)]
            }
        }
        [Some(a), Some(b)] => {
            if mask == b {
            } else if mask < a {
                *slot = [Some(mask), Some(a)];
            } else if mask < b {
                *slot = [Some(a), Some(mask)];
            }
        }
    }
}

fn mask_to_set(mask: u64) -> BTreeSet<usize> {
    (0..64).filter(|s| mask >> s & 1 == 1).collect()
}

/// Configuration for [`search_covers`].
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Largest number of classes per system (1..=12).
    pub k_max: usize,
    /// Must the chosen moduli be pairwise distinct?
    pub distinct_moduli: bool,
    /// Search for exact 1-covers (partitions) instead of covers.
    pub exact: bool,
    /// Stop after this many systems.
    pub max_results: usize,
    /// Backtracking-node budget; exceeding it yields `complete = false`.
    pub node_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            k_max: 6,
            distinct_moduli: false,
            exact: false,
            max_results: 100_000,
            node_budget: 10_000_000,
        }
    }
}

/// Result of a cover search. `complete` is false when the node budget
/// or the result cap stopped the enumeration early; the systems found up
/// to that point are still returned.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub systems: Vec<ResidueSystem>,
    pub nodes: u64,
    pub complete: bool,
    pub hit_result_cap: bool,
}

/// Exhaustively enumerates covers (or exact 1-covers) whose moduli form
/// a sub-multiset of `pool` with at most `k_max` elements, backtracking
/// over residue choices.
///
/// Pruning: reciprocal-sum necessity (`>= 1` for covers, exactly 1 for
/// partitions), disjointness violations in exact mode, and a
/// covering-capacity bound in cover mode. Results are canonical (classes
/// sorted by modulus then residue) and deduplicated, and every reported
/// system is re-verified by a naive scan before being returned.
pub fn search_covers(pool: &[u64], cfg: &SearchConfig) -> Result<SearchOutcome, AnalysisError> {
    if pool.is_empty() || cfg.k_max == 0 || cfg.k_max > 12 {
        return Err(AnalysisError::BadSearchParams);
    }
    if pool.contains(&0) {
        return Err(AnalysisError::ZeroPoolModulus);
    }
    let mut pool = pool.to_vec();
    pool.sort_unstable();

    let mut search = Search {
        pool,
        cfg,
        found: BTreeSet::new(),
        nodes: 0,
        stopped: false,
        hit_result_cap: false,
    };
    let mut chosen = Vec::new();
    search.choose_moduli(0, &mut chosen);

    let systems: Vec<ResidueSystem> = search
        .found
        .iter()
        .map(|pairs| {
            let classes = pairs
                .iter()
                .map(|&(n, a)| ResidueClass::new(a as i64, n as i64).expect("valid class"))
                .collect();
            ResidueSystem::new(classes).expect("nonempty")
        })
        .collect();
    // Refuse to report anything the ground-truth scan disagrees with.
    for sys in &systems {
        let ok = if cfg.exact {
            covers::is_exact_m_cover_naive(sys, 1)?.is_cover
        } else {
            covers::is_m_cover_naive(sys, 1)?.is_cover
        };
        assert!(ok, "search produced a non-cover: {sys}");
    }
    Ok(SearchOutcome {
        systems,
        nodes: search.nodes,
        complete: !search.stopped,
        hit_result_cap: search.hit_result_cap,
    })
}

struct Search<'a> {
    pool: Vec<u64>,
    cfg: &'a SearchConfig,
    found: BTreeSet<Vec<(u64, u64)>>,
    nodes: u64,
    stopped: bool,
    hit_result_cap: bool,
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.cfg.node_budget {
            self.stopped = true;
        }
        self.stopped
    }

    /// Phase 1: pick a nondecreasing sub-multiset of the pool, pruning by
    /// reciprocal-sum feasibility, then hand off to residue assignment.
    fn choose_moduli(&mut self, from: usize, chosen: &mut Vec<u64>) {
        if self.tick() {
            return;
        }
        let sum = reciprocal_sum(chosen);
        let feasible = if self.cfg.exact {
            sum == (1, 1)
        } else {
            ge_one(sum)
        };
        if !chosen.is_empty() && feasible {
            self.assign_residues(chosen);
            if self.stopped {
                return;
            }
        }
        if chosen.len() == self.cfg.k_max {
            return;
        }
        // In exact mode a partial sum already at or above 1 cannot grow
        // into a different valid multiset.
        if self.cfg.exact && ge_one(sum) {
            return;
        }
        let mut i = from;
        while i < self.pool.len() {
            let n = self.pool[i];
            if self.cfg.distinct_moduli && chosen.last() == Some(&n) {
                i += 1;
                continue;
            }
            chosen.push(n);
            let next = if self.cfg.distinct_moduli {
                // Skip the remaining copies of n.
                let mut j = i + 1;
                while j < self.pool.len() && self.pool[j] == n {
                    j += 1;
                }
                j
            } else {
                i + 1
            };
            self.choose_moduli(next, chosen);
            chosen.pop();
            if self.stopped {
                return;
            }
            // Identical moduli at the same position yield identical
            // branches; advance past them.
            while i < self.pool.len() && self.pool[i] == n {
                i += 1;
            }
        }
    }

    /// Phase 2: backtrack over residues for a fixed nondecreasing modulus
    /// multiset, tracking multiplicities over the full lcm.
    fn assign_residues(&mut self, moduli: &[u64]) {
        let Some(lcm) = moduli
            .iter()
            .try_fold(1u64, |acc, &n| arith::lcm(acc, n).filter(|&l| l <= covers::MAX_SCAN))
        else {
            return; // period too large to verify; out of desk scope
        };
        let mut counts = vec![0u16; lcm as usize];
        let mut residues = Vec::with_capacity(moduli.len());
        self.residue_step(moduli, 0, lcm, &mut counts, &mut residues);
    }

    fn residue_step(
        &mut self,
        moduli: &[u64],
        depth: usize,
        lcm: u64,
        counts: &mut [u16],
        residues: &mut Vec<u64>,
    ) {
        if self.tick() {
            return;
        }
        if depth == moduli.len() {
            let complete = counts.iter().all(|&c| c >= 1);
            if complete {
                let mut pairs: Vec<(u64, u64)> = moduli
                    .iter()
                    .copied()
                    .zip(residues.iter().copied())
                    .collect();
                pairs.sort_unstable();
                self.found.insert(pairs);
                if self.found.len() >= self.cfg.max_results {
                    self.hit_result_cap = true;
                    self.stopped = true;
                }
            }
            return;
        }
        let n = moduli[depth];
        // Equal moduli get nondecreasing residues: kills permutations.
        let res_min = if depth > 0 && moduli[depth - 1] == n {
            residues[depth - 1]
        } else {
            0
        };
        // Capacity prune: can the remaining classes plug every hole?
        let uncovered = counts.iter().filter(|&&c| c == 0).count() as u64;
        let capacity: u64 = moduli[depth..].iter().map(|&m| lcm / m).sum();
        if uncovered > capacity {
            return;
        }
        'res: for a in res_min..n {
            if self.cfg.exact {
                let mut x = a as usize;
                while x < counts.len() {
                    if counts[x] > 0 {
                        continue 'res;
                    }
                    x += n as usize;
                }
            }
            let mut x = a as usize;
            while x < counts.len() {
                counts[x] += 1;
                x += n as usize;
            }
            residues.push(a);
            self.residue_step(moduli, depth + 1, lcm, counts, residues);
            residues.pop();
            let mut x = a as usize;
            while x < counts.len() {
                counts[x] -= 1;
                x += n as usize;
            }
            if self.stopped {
                return;
            }
        }
    }
}

/// Exact comparison helpers on reciprocal sums of u64 moduli, kept as a
/// reduced fraction in u128 to avoid overflow for k <= 12.
fn reciprocal_sum(moduli: &[u64]) -> (u128, u128) {
    let mut num: u128 = 0;
    let mut den: u128 = 1;
    for &n in moduli {
        let n = n as u128;
        num = num * n + den;
        den *= n;
        let g = gcd128(num, den);
        num /= g;
        den /= g;
    }
    (num, den)
}

fn ge_one(sum: (u128, u128)) -> bool {
    sum.0 >= sum.1
}

fn gcd128(a: u128, b: u128) -> u128 {
    if b == 0 { a.max(1) } else { gcd128(b, a % b) }
}
