//! Bounds and conjecture scans for covers of a finite abelian group by
//! cosets of subgroups.
//!
//! A coset system `{a_i + G_i}` that covers every element at least `m`
//! times obeys a family of classical inequalities once some coset is
//! essential to the cover:
//!
//! * Lettl–Sun: if coset `t` is irredundant then `[G:G_t] <= 2^(k-m)`
//!   and `k >= m + f([G:G_t])`, with `f` the Mycielski function
//!   (sum of `alpha*(p-1)` over the prime factorization).
//! * Tomkinson: a minimal 1-cover has `[G:∩G_i] <= k!`.
//! * Korec: a partition into more than one coset has
//!   `k >= 1 + f([G:∩G_i])`; Mycielski's per-coset form
//!   `k >= 1 + f([G:G_t])` follows for every `t`.
//! * Sun: a system covering every element exactly `m` times has
//!   `k >= m + d(G, ∩G_i)`, where for abelian groups the subgroup
//!   distance `d(G,H)` collapses to `f([G:H])`.
//!
//! Everything here is specialized to finite abelian groups: every
//! subgroup is normal, every quotient solvable, so the distance `d` and
//! the subnormality hypotheses of the general theory degenerate. The
//! two report builders verify their hypotheses (cover, irredundancy,
//! minimality) by explicit removal scans before quoting any bound.
//!
//! [`conjecture_searches`] exhaustively enumerates small instances of
//! four open conjectures (minimal covers, exact covers, minimal covers
//! by subgroups, and families of pairwise disjoint cosets) and reports
//! instance counts plus any counterexample candidates. Candidates are
//! re-verified along two independent code paths before being reported,
//! and are never turned into assertion failures: a genuine violation of
//! an open conjecture is a discovery, not a bug.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::arith;
use crate::covers::{self, CoverError};
use crate::groups::{
    abelian_groups_of_order, all_subgroups, CosetSystem, FinAbGroup, GroupError, Subgroup,
};
use crate::residues::ResidueSystem;
use crate::Budgeted;

use rayon::prelude::*;

/// Largest group order [`conjecture_searches`] accepts.
pub const MAX_SCAN_GROUP_ORDER: u64 = 32;
/// Largest system size `k` the scans accept.
pub const MAX_SCAN_K: usize = 6;
/// Largest covering multiplicity the scans accept.
pub const MAX_SCAN_M: u64 = 4;
/// Largest `k` for [`exact_cover_systems`] enumeration.
pub const MAX_ENUM_K: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CosetError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("system does not cover every element at least {m} times")]
    NotAnMCover { m: u64 },
    #[error("coset {t} is redundant: removing it still leaves a {m}-cover")]
    CosetRedundant { t: usize, m: u64 },
    #[error("cover is not minimal: coset {t} is removable")]
    NotMinimal { t: usize },
    #[error("coset index {t} out of range for a system of {k} cosets")]
    IndexOutOfRange { t: usize, k: usize },
    #[error("covering multiplicities are not uniform")]
    NotUniformCover,
    #[error("need at least two cosets")]
    NeedTwoCosets,
    #[error("subgroup of coset {i} does not contain the base subgroup")]
    SubgroupNotContained { i: usize },
    #[error("residue classes are not pairwise disjoint")]
    NotDisjointClasses,
    #[error(
        "scan scope out of range (need 1 <= order <= {}, 1 <= k <= {}, 1 <= m <= {}, positive budget)",
        MAX_SCAN_GROUP_ORDER,
        MAX_SCAN_K,
        MAX_SCAN_M
    )]
    ScopeTooLarge,
    #[error("m must be positive")]
    ZeroM,
}

/// Direction of a bound: is `actual` required to be at least or at most
/// the `required` value?
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

/// One evaluated inequality. `holds` is `actual >= required` for lower
/// bounds and `actual <= required` for upper bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub kind: BoundKind,
    pub required: u64,
    pub actual: u64,
    pub holds: bool,
}

impl BoundCheck {
    fn lower(actual: u64, required: u64) -> Self {
        BoundCheck { kind: BoundKind::Lower, required, actual, holds: actual >= required }
    }

    fn upper(actual: u64, required: u64) -> Self {
        BoundCheck { kind: BoundKind::Upper, required, actual, holds: actual <= required }
    }

    /// Recomputes `holds` from the other fields.
    pub fn recheck(&self) -> bool {
        match self.kind {
            BoundKind::Lower => self.actual >= self.required,
            BoundKind::Upper => self.actual <= self.required,
        }
    }
}

/// Evaluated bound collection for one coset system.
#[derive(Clone, Debug)]
pub struct CosetCoverReport {
    /// Number of cosets.
    pub k: usize,
    /// Uniform covering multiplicity, when every element is covered the
    /// same number of times.
    pub m: Option<u64>,
    /// The indices `[G:G_i]`, in system order.
    pub indices: Vec<u64>,
    /// `[G : ∩G_i]`.
    pub intersection_index: u64,
    /// Named inequalities, each with (required, actual, holds).
    pub bounds: BTreeMap<String, BoundCheck>,
}

impl CosetCoverReport {
    pub fn all_hold(&self) -> bool {
        self.bounds.values().all(|b| b.holds)
    }
}

impl fmt::Display for CosetCoverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} indices={:?} [G:∩]={}", self.k, self.indices, self.intersection_index)?;
        if let Some(m) = self.m {
            write!(f, " uniform m={m}")?;
        }
        for (name, b) in &self.bounds {
            let rel = match b.kind {
                BoundKind::Lower => ">=",
                BoundKind::Upper => "<=",
            };
            let mark = if b.holds { "ok" } else { "VIOLATED" };
            write!(f, "\n  {name}: {} {rel} {} [{mark}]", b.actual, b.required)?;
        }
        Ok(())
    }
}

/// Mycielski's function `f(n)`: sum of `alpha*(p-1)` over the prime
/// factorization of `n`.
fn mycielski(n: u64) -> u64 {
    debug_assert!(n >= 1);
    arith::factorize(n).into_iter().map(|(p, a)| u64::from(a) * (p - 1)).sum()
}

fn factorial_saturating(k: u64) -> u64 {
    (2..=k).fold(1u64, |acc, i| acc.saturating_mul(i))
}

fn pow2_saturating(e: u64) -> u64 {
    if e >= 64 {
        u64::MAX
    } else {
        1u64 << e
    }
}

/// Subgroup distance `d(G, H)` for a finite abelian ambient group.
///
/// Along any composition series from `H` to `G` the factors are cyclic
/// of prime order, so the sum of (factor order - 1) is exactly
/// `f([G:H])`. The classical sandwich
/// `[G:H] - 1 >= d(G,H) >= f([G:H]) >= log2([G:H])`
/// is asserted on every call.
pub fn distance_d(g: &FinAbGroup, h: &Subgroup) -> u64 {
    assert_eq!(h.group(), g, "subgroup of a different ambient group");
    let index = h.index_in_group();
    let d = mycielski(index);
    assert!(index - 1 >= d || index == 1, "distance exceeds index bound");
    assert!(
        (index as u128) <= 1u128 << d.min(127) as u32,
        "distance below the log2 floor"
    );
    d
}

fn sorted_intersection(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn intersect_subgroups<'a>(
    g: &FinAbGroup,
    subs: impl IntoIterator<Item = &'a Subgroup>,
) -> Subgroup {
    let mut acc: Vec<u64> = (0..g.order()).collect();
    for h in subs {
        acc = sorted_intersection(&acc, h.element_indices());
    }
    Subgroup::from_closed_indices(g, acc)
}

/// Multiplicity table plus the derived quantities every report needs.
struct SystemFacts {
    counts: Vec<u64>,
    indices: Vec<u64>,
    intersection_index: u64,
    uniform: Option<u64>,
}

fn system_facts(s: &CosetSystem) -> Result<SystemFacts, CosetError> {
    let counts = s.multiplicities()?;
    let indices: Vec<u64> = s.cosets().iter().map(|(_, h)| h.index_in_group()).collect();
    let inter = intersect_subgroups(s.group(), s.cosets().iter().map(|(_, h)| h));
    let intersection_index = s.group().order() / inter.order();
    let first = counts[0];
    let uniform = counts.iter().all(|&c| c == first).then_some(first);
    Ok(SystemFacts { counts, indices, intersection_index, uniform })
}

/// Does removing one copy of coset `t` still leave an `m`-cover?
///
/// Since the full system covers everything at least `m` times, removal
/// breaks the cover exactly when coset `t` contains an element of
/// multiplicity exactly `m`.
fn removal_keeps_cover(s: &CosetSystem, counts: &[u64], t: usize, m: u64) -> bool {
    let g = s.group();
    let (rep, sub) = &s.cosets()[t];
    let base = g.element_index(rep);
    !sub
        .element_indices()
        .iter()
        .any(|&h| counts[g.add_indices(base, h) as usize] == m)
}

/// Evaluates the two Lettl–Sun inequalities for an irredundant coset of
/// an at-least-`m` cover: `[G:G_t] <= 2^(k-m)` and
/// `k >= m + f([G:G_t])`.
///
/// Irredundancy of coset `t` is verified by a removal scan; the system
/// must cover every element at least `m` times.
pub fn irredundant_coset_bounds(
    s: &CosetSystem,
    m: u64,
    t: usize,
) -> Result<CosetCoverReport, CosetError> {
    if m == 0 {
        return Err(CosetError::ZeroM);
    }
    if t >= s.len() {
        return Err(CosetError::IndexOutOfRange { t, k: s.len() });
    }
    let facts = system_facts(s)?;
    if facts.counts.iter().any(|&c| c < m) {
        return Err(CosetError::NotAnMCover { m });
    }
    if removal_keeps_cover(s, &facts.counts, t, m) {
        return Err(CosetError::CosetRedundant { t, m });
    }
    let k = s.len() as u64;
    let n_t = facts.indices[t];
    let mut bounds = BTreeMap::new();
    bounds.insert(
        "lettl_sun_index".to_string(),
        BoundCheck::upper(n_t, pow2_saturating(k - m)),
    );
    bounds.insert(
        "lettl_sun_count".to_string(),
        BoundCheck::lower(k, m + mycielski(n_t)),
    );
    Ok(CosetCoverReport {
        k: s.len(),
        m: facts.uniform,
        indices: facts.indices,
        intersection_index: facts.intersection_index,
        bounds,
    })
}

/// Evaluates the bounds available for a minimal `m`-cover: Tomkinson's
/// `[G:∩G_i] <= k!` (1-covers), Sun's `k >= m + d(G, ∩G_i)` and Korec's
/// `k >= 1 + f([G:∩G_i])` with Mycielski's per-coset `k >= 1 + f([G:G_t])`
/// (both for exact covers, which a uniform minimal cover is).
///
/// Minimality is verified by `k` removal scans: deleting any single
/// coset must drop some element below multiplicity `m`. Entries whose
/// hypotheses the system does not satisfy are omitted rather than
/// reported vacuously; a minimal `m`-cover with uniform multiplicities
/// is automatically an exact `m`-cover, which is when the Sun and Korec
/// entries apply.
pub fn minimal_cover_bounds(s: &CosetSystem, m: u64) -> Result<CosetCoverReport, CosetError> {
    if m == 0 {
        return Err(CosetError::ZeroM);
    }
    let facts = system_facts(s)?;
    if facts.counts.iter().any(|&c| c < m) {
        return Err(CosetError::NotAnMCover { m });
    }
    for t in 0..s.len() {
        if removal_keeps_cover(s, &facts.counts, t, m) {
            return Err(CosetError::NotMinimal { t });
        }
    }
    let k = s.len() as u64;
    let mut bounds = BTreeMap::new();
    if m == 1 {
        bounds.insert(
            "tomkinson_intersection".to_string(),
            BoundCheck::upper(facts.intersection_index, factorial_saturating(k)),
        );
    }
    if let Some(w) = facts.uniform {
        // A uniform minimal m-cover covers exactly m times: were w > m,
        // every coset would be removable.
        debug_assert_eq!(w, m);
        let inter = intersect_subgroups(s.group(), s.cosets().iter().map(|(_, h)| h));
        bounds.insert(
            "sun_distance_count".to_string(),
            BoundCheck::lower(k, m + distance_d(s.group(), &inter)),
        );
        if w == 1 {
            bounds.insert(
                "korec_count".to_string(),
                BoundCheck::lower(k, 1 + mycielski(facts.intersection_index)),
            );
            for (t, &n_t) in facts.indices.iter().enumerate() {
                bounds.insert(
                    format!("mycielski_index_{t}"),
                    BoundCheck::lower(k, 1 + mycielski(n_t)),
                );
            }
        }
    }
    Ok(CosetCoverReport {
        k: s.len(),
        m: facts.uniform,
        indices: facts.indices,
        intersection_index: facts.intersection_index,
        bounds,
    })
}

/// Do two of the subgroup indices of a uniform exact cover coincide?
///
/// For a partition (or any uniform cover) of a group into more than one
/// coset the indices can never be pairwise distinct; in the abelian
/// case this is a proved theorem, so `false` here indicates a bug, not
/// a discovery.
pub fn herzog_schonheim_check(s: &CosetSystem) -> Result<bool, CosetError> {
    if s.len() < 2 {
        return Err(CosetError::NeedTwoCosets);
    }
    let facts = system_facts(s)?;
    if facts.uniform.is_none() {
        return Err(CosetError::NotUniformCover);
    }
    let mut indices = facts.indices;
    indices.sort_unstable();
    Ok(indices.windows(2).any(|w| w[0] == w[1]))
}

/// Verifies `[G : ∩G_i]` divides the product of the `[G:G_i]` and that
/// its prime divisors are exactly the union of theirs.
///
/// Both facts hold for arbitrary finite abelian groups; `false` would
/// indicate a bug.
pub fn index_divisibility_check(
    g: &FinAbGroup,
    subgroups: &[Subgroup],
) -> Result<bool, CosetError> {
    for h in subgroups {
        if h.group() != g {
            return Err(GroupError::MixedAmbientGroups.into());
        }
    }
    let inter = intersect_subgroups(g, subgroups);
    let inter_index = inter.index_in_group();
    // Product of the indices mod the intersection index, exactly.
    let product_mod = subgroups
        .iter()
        .fold(1u64 % inter_index.max(1), |acc, h| {
            acc * (h.index_in_group() % inter_index) % inter_index
        });
    let divides = inter_index == 1 || product_mod == 0;
    let prime_set = |n: u64| -> BTreeSet<u64> {
        arith::factorize(n).into_iter().map(|(p, _)| p).collect()
    };
    let union: BTreeSet<u64> = subgroups
        .iter()
        .flat_map(|h| prime_set(h.index_in_group()))
        .collect();
    Ok(divides && prime_set(inter_index) == union)
}

/// Verifies the coset-union lower bound: when every `G_i` contains `H`,
/// the union of the cosets holds at least `|∪ 0(n_i) ∩ [0,N)|` cosets
/// of `H`, where `n_i = [G:G_i]` and `N = [G:H]`.
///
/// The right-hand side is evaluated over the integers as a system of
/// residue classes `0 (mod n_i)` restricted to one window of length `N`.
pub fn coset_union_count_check(
    g: &FinAbGroup,
    h: &Subgroup,
    cosets: &CosetSystem,
) -> Result<bool, CosetError> {
    if h.group() != g || cosets.group() != g {
        return Err(GroupError::MixedAmbientGroups.into());
    }
    for (i, (_, g_i)) in cosets.cosets().iter().enumerate() {
        let inside = g_i.element_indices();
        if !h.element_indices().iter().all(|x| inside.binary_search(x).is_ok()) {
            return Err(CosetError::SubgroupNotContained { i });
        }
    }
    let counts = cosets.multiplicities()?;
    let union_elems = counts.iter().filter(|&&c| c > 0).count() as u64;
    // The union is H-invariant (each coset is a union of H-cosets), so
    // its size is an exact multiple of |H|.
    debug_assert_eq!(union_elems % h.order(), 0);
    let covered_h_cosets = union_elems / h.order();

    let n_cap = h.index_in_group();
    let pairs: Vec<(i64, i64)> = cosets
        .cosets()
        .iter()
        .map(|(_, g_i)| (0i64, g_i.index_in_group() as i64))
        .collect();
    let zero_classes = ResidueSystem::from_pairs(&pairs).expect("positive moduli");
    let window = covers::multiplicity_counts(&zero_classes)?;
    let period = window.len() as u64;
    // Every n_i divides N, hence so does their lcm; the count over one
    // lcm-period extends to [0, N) by periodicity.
    debug_assert_eq!(n_cap % period, 0);
    let bound = window.iter().filter(|&&c| c > 0).count() as u64 * (n_cap / period);
    Ok(covered_h_cosets >= bound)
}

/// Checks the disjoint-coset gcd inequality on a system of pairwise
/// disjoint residue classes: some pair of moduli must have
/// `gcd(n_i, n_j) >= k`. Vacuously true for `k < 2`; open in general,
/// so a `false` return is a counterexample candidate, not an assertion.
pub fn disjoint_residue_gcd_check(a: &ResidueSystem) -> Result<bool, CosetError> {
    let counts = covers::multiplicity_counts(a)?;
    if counts.iter().any(|&c| c > 1) {
        return Err(CosetError::NotDisjointClasses);
    }
    let k = a.len() as u64;
    if k < 2 {
        return Ok(true);
    }
    let moduli: Vec<u64> = a
        .classes()
        .iter()
        .map(|c| {
            use num_traits::ToPrimitive;
            c.modulus().to_u64().expect("modulus bounded by the scanned period")
        })
        .collect();
    let mut best = 0;
    for i in 0..moduli.len() {
        for j in i + 1..moduli.len() {
            best = best.max(arith::gcd(moduli[i], moduli[j]));
        }
    }
    Ok(best >= k)
}

/// Scope of a conjecture scan: every abelian group of order up to
/// `max_order`, coset systems of up to `max_k` cosets, covering
/// multiplicities up to `max_m`.
///
/// `node_budget` bounds the backtracking nodes spent per group; a group
/// that exhausts it leaves `complete = false` in the report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanScope {
    pub max_order: u64,
    pub max_k: usize,
    pub max_m: u64,
    pub node_budget: u64,
}

impl Default for ScanScope {
    fn default() -> Self {
        ScanScope { max_order: 12, max_k: 4, max_m: 2, node_budget: 10_000_000 }
    }
}

/// Scan result for one conjecture family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureFamilyReport {
    pub name: &'static str,
    /// Instances satisfying the hypothesis that were checked.
    pub instances: u64,
    /// Human-readable descriptions of instances violating the
    /// conjectured inequality, re-verified twice before being listed.
    pub counterexamples: Vec<String>,
}

/// Combined report of [`conjecture_searches`].
#[derive(Clone, Debug)]
pub struct ConjectureScanReport {
    pub scope: ScanScope,
    pub groups_scanned: u64,
    pub nodes: u64,
    pub complete: bool,
    pub families: Vec<ConjectureFamilyReport>,
}

impl ConjectureScanReport {
    pub fn counterexample_count(&self) -> usize {
        self.families.iter().map(|f| f.counterexamples.len()).sum()
    }
}

/// Node-budget ticker shared by the per-group enumerations.
struct Ticker {
    nodes: u64,
    budget: u64,
    stopped: bool,
}

impl Ticker {
    fn new(budget: u64) -> Self {
        Ticker { nodes: 0, budget, stopped: false }
    }

    /// Counts one node; returns false once the budget is gone.
    fn tick(&mut self) -> bool {
        if self.stopped {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.stopped = true;
        }
        !self.stopped
    }
}

/// One coset as a bitmask over element indices, with its subgroup index
/// `n = [G:G_i]` and provenance for rebuilding the real objects.
#[derive(Clone, Copy)]
struct CosetMask {
    mask: u64,
    size: u64,
    n: u64,
    sub: usize,
    rep: u64,
}

/// All cosets of all subgroups, sorted by ascending index (so sizes are
/// nonincreasing), then by the canonical subgroup and representative
/// order. This is the canonical enumeration order.
fn coset_masks(g: &FinAbGroup, subs: &[Subgroup]) -> Vec<CosetMask> {
    let mut out = Vec::new();
    for (si, h) in subs.iter().enumerate() {
        for rep in h.coset_reps() {
            let base = g.element_index(&rep);
            let mask = h
                .element_indices()
                .iter()
                .fold(0u64, |acc, &e| acc | 1u64 << g.add_indices(base, e));
            out.push(CosetMask {
                mask,
                size: h.order(),
                n: h.index_in_group(),
                sub: si,
                rep: base,
            });
        }
    }
    out.sort_by_key(|c| (c.n, c.sub, c.rep));
    out
}

/// Enumerates nondecreasing multisets of cosets (repeats allowed) that
/// cover every element at least `m` times, with at most `k_max` cosets.
/// In exact mode no element may exceed multiplicity `m`, so every visit
/// is an exact `m`-cover. Visits happen the moment coverage is reached;
/// proper extensions of a cover are never minimal and never exact, so
/// the branch stops there.
fn cover_multisets(
    order: u64,
    cosets: &[CosetMask],
    m: u64,
    k_max: usize,
    exact: bool,
    t: &mut Ticker,
    visit: &mut dyn FnMut(&[usize], &[u8]),
) {
    let mut counts = vec![0u8; order as usize];
    let mut chosen: Vec<usize> = Vec::with_capacity(k_max);
    let deficiency = m * order;
    rec_cover(order, cosets, m, k_max, exact, 0, deficiency, &mut chosen, &mut counts, t, visit);
}

#[allow(clippy::too_many_arguments)]
fn rec_cover(
    order: u64,
    cosets: &[CosetMask],
    m: u64,
    k_max: usize,
    exact: bool,
    from: usize,
    deficiency: u64,
    chosen: &mut Vec<usize>,
    counts: &mut [u8],
    t: &mut Ticker,
    visit: &mut dyn FnMut(&[usize], &[u8]),
) {
    if !t.tick() {
        return;
    }
    if deficiency == 0 {
        visit(chosen, counts);
        return;
    }
    if chosen.len() == k_max || from >= cosets.len() {
        return;
    }
    let slots = (k_max - chosen.len()) as u64;
    // Elements at multiplicity m already; an exact cover may not touch them.
    let full = full_mask(counts, m, order);
    for i in from..cosets.len() {
        let c = &cosets[i];
        // Sizes are nonincreasing in canonical order, so once the largest
        // remaining coset cannot close the gap nothing later can either.
        if deficiency > slots * c.size {
            break;
        }
        if exact && c.mask & full != 0 {
            continue;
        }
        let mut gained = 0u64;
        for_each_bit(c.mask, |x| {
            if u64::from(counts[x]) < m {
                gained += 1;
            }
            counts[x] += 1;
        });
        chosen.push(i);
        rec_cover(order, cosets, m, k_max, exact, i, deficiency - gained, chosen, counts, t, visit);
        chosen.pop();
        for_each_bit(c.mask, |x| counts[x] -= 1);
    }
}

fn for_each_bit(mut mask: u64, mut f: impl FnMut(usize)) {
    while mask != 0 {
        let x = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        f(x);
    }
}

fn full_mask(counts: &[u8], m: u64, order: u64) -> u64 {
    let mut full = 0u64;
    for x in 0..order as usize {
        if u64::from(counts[x]) == m {
            full |= 1u64 << x;
        }
    }
    full
}

/// A cover multiset is minimal exactly when every chosen coset contains
/// an element of multiplicity exactly `m`.
fn multiset_is_minimal(chosen: &[usize], cosets: &[CosetMask], counts: &[u8], m: u64) -> bool {
    let full = full_mask(counts, m, counts.len() as u64);
    chosen.iter().all(|&i| cosets[i].mask & full != 0)
}

/// Enumerates minimal covers of the full element set by subsets of the
/// given proper-subgroup masks, in canonical (ascending) order.
fn subgroup_covers(
    full: u64,
    masks: &[u64],
    k_max: usize,
    t: &mut Ticker,
    visit: &mut dyn FnMut(&[usize]),
) {
    let mut chosen = Vec::with_capacity(k_max);
    rec_subgroup(full, masks, k_max, 0, 0, &mut chosen, t, visit);
}

fn rec_subgroup(
    full: u64,
    masks: &[u64],
    k_max: usize,
    from: usize,
    union: u64,
    chosen: &mut Vec<usize>,
    t: &mut Ticker,
    visit: &mut dyn FnMut(&[usize]),
) {
    if !t.tick() {
        return;
    }
    if union == full {
        visit(chosen);
        return;
    }
    if chosen.len() == k_max {
        return;
    }
    for i in from..masks.len() {
        // A subgroup inside the current union stays redundant forever.
        if masks[i] & !union == 0 {
            continue;
        }
        chosen.push(i);
        rec_subgroup(full, masks, k_max, i + 1, union | masks[i], chosen, t, visit);
        chosen.pop();
    }
}

/// Enumerates families of pairwise disjoint cosets (sets, ascending
/// canonical order), visiting every family of size at least 2.
fn disjoint_families(
    cosets: &[CosetMask],
    k_max: usize,
    t: &mut Ticker,
    visit: &mut dyn FnMut(&[usize]),
) {
    let mut chosen = Vec::with_capacity(k_max);
    rec_disjoint(cosets, k_max, 0, 0, &mut chosen, t, visit);
}

fn rec_disjoint(
    cosets: &[CosetMask],
    k_max: usize,
    from: usize,
    used: u64,
    chosen: &mut Vec<usize>,
    t: &mut Ticker,
    visit: &mut dyn FnMut(&[usize]),
) {
    if !t.tick() {
        return;
    }
    if chosen.len() >= 2 {
        visit(chosen);
    }
    if chosen.len() == k_max {
        return;
    }
    for i in from..cosets.len() {
        if cosets[i].mask & used != 0 {
            continue;
        }
        chosen.push(i);
        rec_disjoint(cosets, k_max, i + 1, used | cosets[i].mask, chosen, t, visit);
        chosen.pop();
    }
}

fn build_system(
    g: &FinAbGroup,
    subs: &[Subgroup],
    cosets: &[CosetMask],
    chosen: &[usize],
) -> CosetSystem {
    CosetSystem::new(
        chosen
            .iter()
            .map(|&i| (g.element_from_index(cosets[i].rep), subs[cosets[i].sub].clone()))
            .collect(),
    )
    .expect("cosets share one ambient group")
}

/// Re-verifies a cover candidate along the two group-arithmetic paths
/// (multiplicity table and per-element membership scan), independent of
/// the bitmask search that produced it.
fn confirm_cover(sys: &CosetSystem, m: u64, exact: bool, minimal: bool) -> bool {
    let g = sys.group();
    let counts = sys.multiplicities().expect("scan-scale group");
    let check = |c: u64| if exact { c == m } else { c >= m };
    if !counts.iter().copied().all(check) {
        return false;
    }
    if !g.elements().all(|x| check(sys.multiplicity(&x))) {
        return false;
    }
    if minimal {
        for t in 0..sys.len() {
            let mut rest = sys.cosets().to_vec();
            rest.remove(t);
            let reduced = CosetSystem::new(rest).expect("nonempty remainder");
            if reduced.is_m_cover(m).expect("scan-scale group") {
                return false;
            }
        }
    }
    true
}

fn render_candidate(
    g: &FinAbGroup,
    sys: &CosetSystem,
    detail: std::fmt::Arguments<'_>,
) -> String {
    let cosets: Vec<String> = sys
        .cosets()
        .iter()
        .map(|(rep, h)| format!("{rep}+{:?}", h.element_indices()))
        .collect();
    format!("{g}: cosets=[{}]; {detail}", cosets.join(", "))
}

const FAMILY_NAMES: [&str; 4] = [
    "minimal-cover-lcm-count",
    "exact-cover-lcm-count",
    "subgroup-cover-count",
    "disjoint-coset-gcd",
];

#[derive(Default)]
struct FamilyAcc {
    instances: u64,
    counterexamples: Vec<String>,
}

struct GroupScan {
    nodes: u64,
    complete: bool,
    families: [FamilyAcc; 4],
}

fn scan_group(g: &FinAbGroup, scope: &ScanScope) -> Result<GroupScan, CosetError> {
    let subs = all_subgroups(g)?;
    let cosets = coset_masks(g, &subs);
    let order = g.order();
    let mut t = Ticker::new(scope.node_budget);
    let mut fams: [FamilyAcc; 4] = Default::default();

    // Minimal >=m covers: k >= m + f(lcm of the indices).
    for m in 1..=scope.max_m {
        let fam = &mut fams[0];
        let mut on_cover = |chosen: &[usize], counts: &[u8]| {
            if !multiset_is_minimal(chosen, &cosets, counts, m) {
                return;
            }
            fam.instances += 1;
            let k = chosen.len() as u64;
            let n = chosen
                .iter()
                .fold(1u64, |acc, &i| arith::lcm(acc, cosets[i].n).expect("indices divide |G|"));
            let required = m + mycielski(n);
            if k < required {
                let sys = build_system(g, &subs, &cosets, chosen);
                assert!(
                    confirm_cover(&sys, m, false, true),
                    "enumerator and naive scans disagree on a minimal cover"
                );
                fam.counterexamples.push(render_candidate(
                    g,
                    &sys,
                    format_args!("minimal {m}-cover; k={k}; lcm={n}; required k>={required}"),
                ));
            }
        };
        cover_multisets(order, &cosets, m, scope.max_k, false, &mut t, &mut on_cover);
    }

    // Exact m-covers: k >= m + f(lcm of the indices).
    for m in 1..=scope.max_m {
        let fam = &mut fams[1];
        let mut on_exact = |chosen: &[usize], _counts: &[u8]| {
            fam.instances += 1;
            let k = chosen.len() as u64;
            let n = chosen
                .iter()
                .fold(1u64, |acc, &i| arith::lcm(acc, cosets[i].n).expect("indices divide |G|"));
            let required = m + mycielski(n);
            if k < required {
                let sys = build_system(g, &subs, &cosets, chosen);
                assert!(
                    confirm_cover(&sys, m, true, false),
                    "enumerator and naive scans disagree on an exact cover"
                );
                fam.counterexamples.push(render_candidate(
                    g,
                    &sys,
                    format_args!("exact {m}-cover; k={k}; lcm={n}; required k>={required}"),
                ));
            }
        };
        cover_multisets(order, &cosets, m, scope.max_k, true, &mut t, &mut on_exact);
    }

    // Minimum-size covers by proper subgroups:
    // k >= 1 + sum (alpha-1)*p over [G:∩].
    //
    // The quantifier matters. Merely irredundant subgroup covers break
    // the inequality already at order 8 (four subgroups of Z2^3 with
    // trivial intersection cover it irredundantly, but the bound there
    // says 5), so the live reading is covers realizing the covering
    // number: as few proper subgroups as any cover of G uses. Every
    // such cover within reach satisfies the bound, with equality in
    // the classic configurations (lines of Zp^2, index-p pullbacks).
    {
        let fam = &mut fams[2];
        let proper: Vec<usize> = (0..subs.len()).filter(|&i| subs[i].order() < order).collect();
        let masks: Vec<u64> = proper
            .iter()
            .map(|&i| {
                subs[i]
                    .element_indices()
                    .iter()
                    .fold(0u64, |acc, &e| acc | 1u64 << e)
            })
            .collect();
        let full: u64 = if order == 64 { u64::MAX } else { (1u64 << order) - 1 };
        // Pass 1: the covering number within this scope. Cyclic groups
        // are not unions of proper subgroups, so `sigma` stays None
        // there and the family is vacuous.
        let mut sigma: Option<usize> = None;
        subgroup_covers(full, &masks, scope.max_k, &mut t, &mut |chosen: &[usize]| {
            let k = chosen.len();
            sigma = Some(sigma.map_or(k, |s| s.min(k)));
        });
        // Pass 2: check every cover of that size. Nothing smaller can
        // hide below `sigma`: pass 1 ran the same enumeration deeper.
        if let Some(sigma) = sigma {
            let mut on_subgroup_cover = |chosen: &[usize]| {
                if chosen.len() != sigma {
                    return;
                }
                fam.instances += 1;
                let k = chosen.len() as u64;
                let members: Vec<&Subgroup> =
                    chosen.iter().map(|&i| &subs[proper[i]]).collect();
                let inter = intersect_subgroups(g, members.iter().copied());
                let index = inter.index_in_group();
                let required = 1 + arith::factorize(index)
                    .into_iter()
                    .map(|(p, a)| (u64::from(a) - 1) * p)
                    .sum::<u64>();
                if k < required {
                    let union_ok = {
                        let mut seen = vec![false; order as usize];
                        for h in &members {
                            for &e in h.element_indices() {
                                seen[e as usize] = true;
                            }
                        }
                        seen.iter().all(|&s| s)
                    };
                    assert!(union_ok, "enumerator and naive scan disagree on a subgroup cover");
                    let desc: Vec<String> =
                        members.iter().map(|h| format!("{:?}", h.element_indices())).collect();
                    fam.counterexamples.push(format!(
                        "{g}: subgroups=[{}]; minimum-size subgroup cover; k={k}; [G:∩]={index}; required k>={required}",
                        desc.join(", ")
                    ));
                }
            };
            subgroup_covers(full, &masks, sigma, &mut t, &mut on_subgroup_cover);
        }
    }

    // Pairwise disjoint coset families: some pair of indices has gcd >= k.
    {
        let fam = &mut fams[3];
        let proper: Vec<CosetMask> =
            cosets.iter().copied().filter(|c| c.n >= 2).collect();
        let mut on_family = |chosen: &[usize]| {
            fam.instances += 1;
            let k = chosen.len() as u64;
            let mut best = 0u64;
            for (pos, &i) in chosen.iter().enumerate() {
                for &j in &chosen[pos + 1..] {
                    best = best.max(arith::gcd(proper[i].n, proper[j].n));
                }
            }
            if best < k {
                let sys = build_system(g, &subs, &proper, chosen);
                let disjoint = g
                    .elements()
                    .all(|x| sys.multiplicity(&x) <= 1);
                assert!(disjoint, "enumerator and naive scan disagree on disjointness");
                fam.counterexamples.push(render_candidate(
                    g,
                    &sys,
                    format_args!("pairwise disjoint; k={k}; max pairwise gcd={best}"),
                ));
            }
        };
        disjoint_families(&proper, scope.max_k, &mut t, &mut on_family);
    }

    Ok(GroupScan { nodes: t.nodes, complete: !t.stopped, families: fams })
}

/// Scans every abelian group of order up to `scope.max_order` for
/// instances of four open conjectures and checks the conjectured
/// inequality on each:
///
/// 1. minimal at-least-`m` covers: `k >= m + f(lcm of indices)`;
/// 2. exact `m`-covers: the same inequality;
/// 3. minimum-size covers by proper subgroups (covers realizing the
///    covering number): `k >= 1 + Σ (alpha_t - 1) p_t` over the
///    factorization of `[G:∩G_i]`;
/// 4. pairwise disjoint coset families: some pair of indices has
///    `gcd >= k`.
///
/// Violations are reported as counterexample candidates after being
/// re-verified with naive group arithmetic; they are never asserted
/// away. Groups are scanned in parallel; each group gets its own node
/// budget, so the outcome is deterministic regardless of scheduling.
pub fn conjecture_searches(scope: &ScanScope) -> Result<ConjectureScanReport, CosetError> {
    if scope.max_order == 0
        || scope.max_order > MAX_SCAN_GROUP_ORDER
        || scope.max_k == 0
        || scope.max_k > MAX_SCAN_K
        || scope.max_m == 0
        || scope.max_m > MAX_SCAN_M
        || scope.node_budget == 0
    {
        return Err(CosetError::ScopeTooLarge);
    }
    let groups: Vec<FinAbGroup> = (1..=scope.max_order)
        .flat_map(|n| abelian_groups_of_order(n).expect("scan-scale order"))
        .collect();
    let scans: Vec<GroupScan> = groups
        .par_iter()
        .map(|g| scan_group(g, scope))
        .collect::<Result<_, _>>()?;

    let mut families: Vec<ConjectureFamilyReport> = FAMILY_NAMES
        .iter()
        .map(|&name| ConjectureFamilyReport { name, instances: 0, counterexamples: Vec::new() })
        .collect();
    let mut nodes = 0u64;
    let mut complete = true;
    for scan in scans {
        nodes += scan.nodes;
        complete &= scan.complete;
        for (acc, fam) in scan.families.into_iter().zip(families.iter_mut()) {
            fam.instances += acc.instances;
            fam.counterexamples.extend(acc.counterexamples);
        }
    }
    Ok(ConjectureScanReport {
        scope: *scope,
        groups_scanned: groups.len() as u64,
        nodes,
        complete,
        families,
    })
}

/// Enumerates every exact `m`-cover of `g` by at most `k_max` cosets,
/// as real coset systems in canonical order. `m = 1` enumerates the
/// partitions of `g` into cosets.
pub fn exact_cover_systems(
    g: &FinAbGroup,
    m: u64,
    k_max: usize,
    node_budget: u64,
) -> Result<Budgeted<Vec<CosetSystem>>, CosetError> {
    if m == 0 {
        return Err(CosetError::ZeroM);
    }
    if k_max == 0 || k_max > MAX_ENUM_K || m > MAX_SCAN_M {
        return Err(CosetError::ScopeTooLarge);
    }
    let subs = all_subgroups(g)?;
    let cosets = coset_masks(g, &subs);
    let mut t = Ticker::new(node_budget);
    let mut out = Vec::new();
    let mut collect = |chosen: &[usize], _counts: &[u8]| {
        out.push(build_system(g, &subs, &cosets, chosen));
    };
    cover_multisets(g.order(), &cosets, m, k_max, true, &mut t, &mut collect);
    if t.stopped {
        return Ok(Budgeted::Exhausted { nodes: t.nodes });
    }
    Ok(Budgeted::Done(out))
}
