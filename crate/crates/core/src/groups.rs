//! Finite abelian groups presented as direct sums of cyclic groups.
//!
//! A group is a list of cyclic factor orders, `Z_{d_1} x ... x Z_{d_r}`
//! (factors equal to 1 are dropped, so the trivial group has rank 0).
//! Elements are coordinate vectors owned by value; the group performs
//! all arithmetic and validates dimensions. The mixed-radix index with
//! the first coordinate most significant is a bijection onto
//! `0..order()` that sorts elements lexicographically.
//!
//! [`Subgroup`] closures, [`all_subgroups`] lattice enumeration,
//! [`abelian_groups_of_order`] (one group per isomorphism class, in
//! invariant-factor form) and [`CosetSystem`] multiplicity counting are
//! the building blocks for the coset-cover and zero-sum modules.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arith;

/// Largest group order on which element-by-element scans (subgroup
/// closure, coset multiplicities) are permitted.
pub const MAX_GROUP_ORDER: u64 = 1 << 20;

/// Largest group order for full subgroup-lattice enumeration; elementary
/// 2-group lattices grow too fast beyond this.
pub const MAX_LATTICE_ORDER: u64 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("cyclic factor 0 is not a group")]
    ZeroFactor,
    #[error("group order overflows 64 bits")]
    OrderOverflow,
    #[error("group order {order} exceeds the scan limit {limit}")]
    GroupTooLarge { order: u64, limit: u64 },
    #[error("element has {got} coordinates, group has rank {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cosets come from different ambient groups")]
    MixedAmbientGroups,
    #[error("a coset system needs at least one coset")]
    EmptySystem,
    #[error("cannot parse group: {0}")]
    Parse(String),
}

/// An element of a [`FinAbGroup`], stored as its coordinate vector.
///
/// Elements carry no reference to their group; every operation goes
/// through group methods, which check dimensions. The derived ordering
/// (lexicographic on coordinates) coincides with index order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `Z_{d_1} x ... x Z_{d_r}` with `d_t >= 2`; cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    factors: Vec<u64>,
    order: u64,
}

impl FinAbGroup {
    /// Builds a group from cyclic factor orders. Factors equal to 1 are
    /// dropped; a factor of 0 or an order overflowing u64 is an error.
    pub fn new(factors: impl IntoIterator<Item = u64>) -> Result<Self, GroupError> {
        let factors: Vec<u64> = factors.into_iter().filter(|&d| d != 1).collect();
        if factors.contains(&0) {
            return Err(GroupError::ZeroFactor);
        }
        let order = factors
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d))
            .ok_or(GroupError::OrderOverflow)?;
        Ok(FinAbGroup { factors, order })
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: Vec::new(), order: 1 }
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        FinAbGroup::new([n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.factors.len()] }
    }

    /// Builds an element from signed coordinates, reducing each one
    /// modulo its factor.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        if coords.len() != self.factors.len() {
            return Err(GroupError::DimensionMismatch {
                expected: self.factors.len(),
                got: coords.len(),
            });
        }
        let coords = coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
            .collect();
        Ok(GroupElement { coords })
    }

    /// Inverse of [`element_index`](Self::element_index); `idx` must be
    /// below the order.
    pub fn element_from_index(&self, idx: u64) -> GroupElement {
        assert!(idx < self.order, "index {idx} out of range");
        let mut coords = vec![0; self.factors.len()];
        let mut rest = idx;
        for (t, &d) in self.factors.iter().enumerate().rev() {
            coords[t] = rest % d;
            rest /= d;
        }
        GroupElement { coords }
    }

    /// Mixed-radix index, first coordinate most significant.
    pub fn element_index(&self, e: &GroupElement) -> u64 {
        self.check_dims(e);
        e.coords
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&c, &d)| acc * d + c)
    }

    /// All elements in index (= lexicographic) order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element_from_index(i))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.check_dims(a);
        self.check_dims(b);
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.factors)
            .map(|((&x, &y), &d)| {
                let s = x + y;
                if s >= d { s - d } else { s }
            })
            .collect();
        GroupElement { coords }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.check_dims(a);
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &d)| if x == 0 { 0 } else { d - x })
            .collect();
        GroupElement { coords }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, k: i64, a: &GroupElement) -> GroupElement {
        self.check_dims(a);
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &d)| ((k as i128 * x as i128).rem_euclid(d as i128)) as u64)
            .collect();
        GroupElement { coords }
    }

    /// Order of `a`: the lcm over coordinates of `d_t / gcd(c_t, d_t)`.
    pub fn element_order(&self, a: &GroupElement) -> u64 {
        self.check_dims(a);
        a.coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &d)| d / arith::gcd(c, d))
            .fold(1, |acc, o| arith::lcm(acc, o).expect("divides group order"))
    }

    /// Least order of a nonzero element; `None` for the trivial group.
    /// Equals the least prime dividing the group order.
    pub fn min_nonzero_order(&self) -> Option<u64> {
        arith::least_prime_factor(self.order)
    }

    /// Exponent: the lcm of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.factors
            .iter()
            .fold(1, |acc, &d| arith::lcm(acc, d).expect("divides group order"))
    }

    /// A direct sum of cyclic groups is cyclic iff the factor orders are
    /// pairwise coprime.
    pub fn is_cyclic(&self) -> bool {
        (0..self.factors.len()).all(|i| {
            (i + 1..self.factors.len()).all(|j| arith::gcd(self.factors[i], self.factors[j]) == 1)
        })
    }

    /// Canonical invariant factors `d_1 | d_2 | ... | d_r`, ascending.
    pub fn invariant_factors(&self) -> Vec<u64> {
        // Per prime, sort the exponents descending; the i-th invariant
        // factor (from the top) multiplies the i-th largest power of
        // each prime.
        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for &d in &self.factors {
            for (p, a) in arith::factorize(d) {
                match per_prime.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, exps)) => exps.push(a),
                    None => per_prime.push((p, vec![a])),
                }
            }
        }
        let rank = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        for (_, exps) in &mut per_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            exps.resize(rank, 0);
        }
        let mut inv: Vec<u64> = (0..rank)
            .map(|i| per_prime.iter().map(|(p, e)| p.pow(e[i])).product())
            .collect();
        inv.reverse();
        inv
    }

    pub fn is_isomorphic(&self, other: &FinAbGroup) -> bool {
        self.invariant_factors() == other.invariant_factors()
    }

    fn check_dims(&self, e: &GroupElement) {
        assert_eq!(
            e.coords.len(),
            self.factors.len(),
            "element rank {} does not match group rank {}",
            e.coords.len(),
            self.factors.len()
        );
    }

    /// Index-space addition used by closure scans.
    pub(crate) fn add_indices(&self, i: u64, j: u64) -> u64 {
        self.element_index(&self.add(&self.element_from_index(i), &self.element_from_index(j)))
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "Z{d}")?;
        }
        Ok(())
    }
}

impl FromStr for FinAbGroup {
    type Err = GroupError;

    /// Accepts forms like `Z4xZ2`, `z4 X z2`, `C12`, `4x2`, `Z_8`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_factor = |tok: &str| -> Result<u64, GroupError> {
            let t = tok.trim();
            let t = t
                .strip_prefix(['z', 'Z', 'c', 'C'])
                .map(|r| r.strip_prefix('_').unwrap_or(r))
                .unwrap_or(t);
            t.parse::<u64>()
                .map_err(|_| GroupError::Parse(format!("bad factor {tok:?}")))
        };
        if s.trim().is_empty() {
            return Err(GroupError::Parse("empty group".into()));
        }
        let factors = s
            .split(['x', 'X'])
            .map(parse_factor)
            .collect::<Result<Vec<u64>, _>>()?;
        FinAbGroup::new(factors)
    }
}

/// A subgroup, stored as its full sorted element-index list.
///
/// Equality compares the ambient group and the element set; the
/// generating set used to build the subgroup is remembered but not part
/// of its identity.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: FinAbGroup,
    generators: Vec<GroupElement>,
    indices: Vec<u64>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.indices == other.indices
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Wraps a sorted index list already known to be closed under the
    /// group operation (stabilizers, for instance, are subgroups by
    /// construction).
    pub(crate) fn from_closed_indices(group: &FinAbGroup, indices: Vec<u64>) -> Subgroup {
        debug_assert!(indices.first() == Some(&0));
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Subgroup { group: group.clone(), generators: Vec::new(), indices }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.indices.len() as u64
    }

    /// `[G : H]`.
    pub fn index_in_group(&self) -> u64 {
        self.group.order() / self.order()
    }

    pub fn element_indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.indices.iter().map(|&i| self.group.element_from_index(i))
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.indices.binary_search(&self.group.element_index(e)).is_ok()
    }

    pub fn is_whole_group(&self) -> bool {
        self.order() == self.group.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Least-index representative of each coset, ascending; there are
    /// exactly `index_in_group()` of them and their cosets partition the
    /// group.
    pub fn coset_reps(&self) -> Vec<GroupElement> {
        let g = &self.group;
        let mut seen = vec![false; g.order() as usize];
        let mut reps = Vec::with_capacity(self.index_in_group() as usize);
        for i in 0..g.order() {
            if seen[i as usize] {
                continue;
            }
            reps.push(g.element_from_index(i));
            for &h in &self.indices {
                seen[g.add_indices(i, h) as usize] = true;
            }
        }
        reps
    }
}

/// Closure of `gens` inside `group`. Fails on groups larger than
/// [`MAX_GROUP_ORDER`].
pub fn subgroup_from_generators(
    group: &FinAbGroup,
    gens: &[GroupElement],
) -> Result<Subgroup, GroupError> {
    if group.order() > MAX_GROUP_ORDER {
        return Err(GroupError::GroupTooLarge { order: group.order(), limit: MAX_GROUP_ORDER });
    }
    for e in gens {
        if e.coords.len() != group.rank() {
            return Err(GroupError::DimensionMismatch {
                expected: group.rank(),
                got: e.coords.len(),
            });
        }
    }
    let mut indices = vec![0u64];
    for g in gens {
        indices = extend_by(group, &indices, group.element_index(g));
    }
    Ok(Subgroup { group: group.clone(), generators: gens.to_vec(), indices })
}

/// `<H, g>` from the sorted index list of a subgroup `H`: the union of
/// the cosets `H + jg` for `j` below the order of `g` modulo `H`.
fn extend_by(group: &FinAbGroup, h: &[u64], g: u64) -> Vec<u64> {
    if h.binary_search(&g).is_ok() {
        return h.to_vec();
    }
    let mut out = h.to_vec();
    let mut x = g;
    while h.binary_search(&x).is_err() {
        out.extend(h.iter().map(|&e| group.add_indices(e, x)));
        x = group.add_indices(x, g);
    }
    out.sort_unstable();
    out
}

/// Every subgroup, found by closing the lattice under single-element
/// extensions starting from the trivial subgroup. Sorted by (order,
/// element list) for determinism.
pub fn all_subgroups(group: &FinAbGroup) -> Result<Vec<Subgroup>, GroupError> {
    if group.order() > MAX_LATTICE_ORDER {
        return Err(GroupError::GroupTooLarge { order: group.order(), limit: MAX_LATTICE_ORDER });
    }
    let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut queue: Vec<Vec<u64>> = vec![vec![0]];
    found.insert(vec![0]);
    while let Some(h) = queue.pop() {
        let mut inside = h.iter().copied().peekable();
        for g in 0..group.order() {
            if inside.peek() == Some(&g) {
                inside.next();
                continue;
            }
            let k = extend_by(group, &h, g);
            if found.insert(k.clone()) {
                queue.push(k);
            }
        }
    }
    let mut subgroups: Vec<Subgroup> = found
        .into_iter()
        .map(|indices| Subgroup { group: group.clone(), generators: Vec::new(), indices })
        .collect();
    subgroups.sort_by_key(|h| (h.order(), h.indices.clone()));
    Ok(subgroups)
}

/// One group per isomorphism class of abelian groups of order `n`, each
/// in invariant-factor form (`d_1 | d_2 | ... | d_r`, ascending), sorted
/// by factor list.
pub fn abelian_groups_of_order(n: u64) -> Result<Vec<FinAbGroup>, GroupError> {
    if n == 0 {
        return Err(GroupError::ZeroFactor);
    }
    let primes = arith::factorize(n);
    let choices: Vec<Vec<Vec<u32>>> =
        primes.iter().map(|&(_, a)| partitions(a)).collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; primes.len()];
    loop {
        let rank = primes
            .iter()
            .enumerate()
            .map(|(i, _)| choices[i][pick[i]].len())
            .max()
            .unwrap_or(0);
        let mut factors: Vec<u64> = (0..rank)
            .map(|slot| {
                primes
                    .iter()
                    .enumerate()
                    .map(|(i, &(p, _))| {
                        let part = &choices[i][pick[i]];
                        p.pow(part.get(slot).copied().unwrap_or(0))
                    })
                    .product()
            })
            .collect();
        factors.reverse();
        out.push(FinAbGroup::new(factors).expect("factors are positive"));

        // Advance the mixed-radix choice vector.
        let mut i = 0;
        loop {
            if i == pick.len() {
                out.sort_by(|a, b| a.factors.cmp(&b.factors));
                return Ok(out);
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Partitions of `a` into nonincreasing positive parts; `a = 0` yields
/// the single empty partition.
fn partitions(a: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(a, a, &mut Vec::new(), &mut out);
    out
}

/// A finite family of cosets `a_t + H_t` of one ambient group, possibly
/// with repeats and with varying subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSystem {
    group: FinAbGroup,
    cosets: Vec<(GroupElement, Subgroup)>,
}

impl CosetSystem {
    pub fn new(cosets: Vec<(GroupElement, Subgroup)>) -> Result<Self, GroupError> {
        let (first, _) = cosets.first().ok_or(GroupError::EmptySystem)?;
        let group = cosets[0].1.group().clone();
        if first.coords.len() != group.rank() {
            return Err(GroupError::DimensionMismatch {
                expected: group.rank(),
                got: first.coords.len(),
            });
        }
        for (rep, sub) in &cosets {
            if *sub.group() != group {
                return Err(GroupError::MixedAmbientGroups);
            }
            if rep.coords.len() != group.rank() {
                return Err(GroupError::DimensionMismatch {
                    expected: group.rank(),
                    got: rep.coords.len(),
                });
            }
        }
        Ok(CosetSystem { group, cosets })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn cosets(&self) -> &[(GroupElement, Subgroup)] {
        &self.cosets
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires at least one coset
    }

    /// Number of cosets containing `x`.
    pub fn multiplicity(&self, x: &GroupElement) -> u64 {
        self.cosets
            .iter()
            .filter(|(rep, sub)| sub.contains(&self.group.sub(x, rep)))
            .count() as u64
    }

    /// Multiplicity of every group element, indexed by element index.
    pub fn multiplicities(&self) -> Result<Vec<u64>, GroupError> {
        let order = self.group.order();
        if order > MAX_GROUP_ORDER {
            return Err(GroupError::GroupTooLarge { order, limit: MAX_GROUP_ORDER });
        }
        let mut counts = vec![0u64; order as usize];
        for (rep, sub) in &self.cosets {
            let base = self.group.element_index(rep);
            for &h in sub.element_indices() {
                counts[self.group.add_indices(base, h) as usize] += 1;
            }
        }
        Ok(counts)
    }

    pub fn is_m_cover(&self, m: u64) -> Result<bool, GroupError> {
        Ok(self.multiplicities()?.iter().all(|&c| c >= m))
    }

    pub fn is_exact_m_cover(&self, m: u64) -> Result<bool, GroupError> {
        Ok(self.multiplicities()?.iter().all(|&c| c == m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z4z2() -> FinAbGroup {
        FinAbGroup::new([4, 2]).unwrap()
    }

    /// Order by the definition: least k >= 1 with k*a = 0.
    fn order_oracle(g: &FinAbGroup, e: &GroupElement) -> u64 {
        let mut x = e.clone();
        let mut k = 1;
        while !x.is_zero() {
            x = g.add(&x, e);
            k += 1;
        }
        k
    }

    #[test]
    fn construction_normalizes_and_validates() {
        let g = FinAbGroup::new([1, 4, 1, 2]).unwrap();
        assert_eq!(g.factors(), &[4, 2]);
        assert_eq!(g.order(), 8);
        assert_eq!(g.rank(), 2);
        assert_eq!(FinAbGroup::new([]).unwrap(), FinAbGroup::trivial());
        assert_eq!(FinAbGroup::new([0, 2]).unwrap_err(), GroupError::ZeroFactor);
        assert_eq!(
            FinAbGroup::new([u64::MAX, 2]).unwrap_err(),
            GroupError::OrderOverflow
        );
    }

    #[test]
    fn index_is_a_sorted_bijection() {
        let g = z4z2();
        assert_eq!(g.element_from_index(5).coords(), &[2, 1]);
        for i in 0..g.order() {
            assert_eq!(g.element_index(&g.element_from_index(i)), i);
        }
        let elems: Vec<GroupElement> = g.elements().collect();
        let mut sorted = elems.clone();
        sorted.sort();
        assert_eq!(elems, sorted);
    }

    #[test]
    fn arithmetic_in_z4z2() {
        let g = z4z2();
        let a = g.element(&[3, 1]).unwrap();
        let b = g.element(&[2, 1]).unwrap();
        assert_eq!(g.add(&a, &b), g.element(&[1, 0]).unwrap());
        assert_eq!(g.neg(&a), g.element(&[1, 1]).unwrap());
        assert_eq!(g.sub(&a, &a), g.identity());
        assert_eq!(g.scalar_mul(-3, &a), g.element(&[-9, -3]).unwrap());
        assert_eq!(g.element(&[-1, -1]).unwrap().coords(), &[3, 1]);
        assert!(matches!(
            g.element(&[1]),
            Err(GroupError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn element_orders_match_repeated_addition() {
        let g = FinAbGroup::new([6, 4]).unwrap();
        for e in g.elements() {
            assert_eq!(g.element_order(&e), order_oracle(&g, &e), "e = {e}");
        }
        let h = z4z2();
        assert_eq!(h.element_order(&h.element(&[2, 1]).unwrap()), 2);
        assert_eq!(h.element_order(&h.element(&[1, 0]).unwrap()), 4);
        assert_eq!(h.element_order(&h.identity()), 1);
    }

    #[test]
    fn least_nonzero_order_is_least_prime_factor() {
        for factors in [vec![4, 2], vec![9, 3], vec![15], vec![35], vec![7]] {
            let g = FinAbGroup::new(factors).unwrap();
            let by_scan = g
                .elements()
                .filter(|e| !e.is_zero())
                .map(|e| g.element_order(&e))
                .min();
            assert_eq!(g.min_nonzero_order(), by_scan, "{g}");
        }
        assert_eq!(FinAbGroup::trivial().min_nonzero_order(), None);
    }

    #[test]
    fn cyclicity_matches_element_order_scan() {
        for n in 1..=24u64 {
            for g in abelian_groups_of_order(n).unwrap() {
                let has_generator = g.elements().any(|e| g.element_order(&e) == g.order());
                assert_eq!(g.is_cyclic(), has_generator, "{g}");
            }
        }
    }

    #[test]
    fn invariant_factors_classify_up_to_isomorphism() {
        let a = FinAbGroup::new([6]).unwrap();
        let b = FinAbGroup::new([2, 3]).unwrap();
        assert_eq!(b.invariant_factors(), vec![6]);
        assert!(a.is_isomorphic(&b));
        assert!(!z4z2().is_isomorphic(&FinAbGroup::new([8]).unwrap()));
        assert_eq!(
            FinAbGroup::new([6, 4]).unwrap().invariant_factors(),
            vec![2, 12]
        );
        assert_eq!(FinAbGroup::trivial().invariant_factors(), Vec::<u64>::new());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["Z4xZ2", "z4 X z2", "C12", "4x2", "Z_8", "Z1"] {
            let g: FinAbGroup = s.parse().unwrap();
            let round: FinAbGroup = g.to_string().parse().unwrap();
            assert_eq!(g, round, "from {s:?}");
        }
        assert_eq!("Z4xZ2".parse::<FinAbGroup>().unwrap(), z4z2());
        assert_eq!("Z1".parse::<FinAbGroup>().unwrap(), FinAbGroup::trivial());
        assert!("".parse::<FinAbGroup>().is_err());
        assert!("Z0".parse::<FinAbGroup>().is_err());
        assert!("Z4x".parse::<FinAbGroup>().is_err());
        assert!("abc".parse::<FinAbGroup>().is_err());
    }

    #[test]
    fn subgroup_closure_in_z4z2() {
        let g = z4z2();
        let h = subgroup_from_generators(&g, &[g.element(&[2, 0]).unwrap()]).unwrap();
        assert_eq!(h.order(), 2);
        assert_eq!(h.index_in_group(), 4);
        assert!(h.contains(&g.element(&[2, 0]).unwrap()));
        assert!(!h.contains(&g.element(&[1, 0]).unwrap()));

        let whole =
            subgroup_from_generators(&g, &[g.element(&[1, 0]).unwrap(), g.element(&[0, 1]).unwrap()])
                .unwrap();
        assert!(whole.is_whole_group());

        let trivial = subgroup_from_generators(&g, &[]).unwrap();
        assert!(trivial.is_trivial());
        assert_eq!(trivial.element_indices(), &[0]);
    }

    #[test]
    fn coset_reps_partition_the_group() {
        let g = z4z2();
        let h = subgroup_from_generators(&g, &[g.element(&[2, 0]).unwrap()]).unwrap();
        let reps = h.coset_reps();
        assert_eq!(reps.len() as u64, h.index_in_group());
        assert_eq!(reps[0], g.identity());
        let mut covered: Vec<u64> = reps
            .iter()
            .flat_map(|r| h.elements().map(|e| g.element_index(&g.add(r, &e))).collect::<Vec<_>>())
            .collect();
        covered.sort_unstable();
        assert_eq!(covered, (0..g.order()).collect::<Vec<u64>>());
    }

    #[test]
    fn subgroup_lattice_sizes() {
        // Oracles: hand-enumerated lattices.
        assert_eq!(all_subgroups(&z4z2()).unwrap().len(), 8);
        assert_eq!(all_subgroups(&FinAbGroup::new([2, 2]).unwrap()).unwrap().len(), 5);
        assert_eq!(all_subgroups(&FinAbGroup::new([8]).unwrap()).unwrap().len(), 4);
        // Cyclic group: one subgroup per divisor.
        assert_eq!(all_subgroups(&FinAbGroup::new([12]).unwrap()).unwrap().len(), 6);
        assert_eq!(all_subgroups(&FinAbGroup::trivial()).unwrap().len(), 1);
        let lattice = all_subgroups(&FinAbGroup::new([2, 2, 2]).unwrap()).unwrap();
        assert_eq!(lattice.len(), 16); // 1 + 7 + 7 + 1
        for h in &lattice {
            assert_eq!(8 % h.order(), 0);
        }
    }

    #[test]
    fn group_counts_by_order() {
        // Oracle: product over primes of partition counts of the
        // exponents.
        for (n, count) in [
            (1u64, 1usize),
            (2, 1),
            (4, 2),
            (8, 3),
            (12, 2),
            (16, 5),
            (24, 3),
            (36, 4),
            (64, 11),
            (72, 6),
            (100, 4),
        ] {
            let groups = abelian_groups_of_order(n).unwrap();
            assert_eq!(groups.len(), count, "order {n}");
            for g in &groups {
                assert_eq!(g.order(), n);
                // Invariant-factor form: consecutive divisibility.
                for w in g.factors().windows(2) {
                    assert_eq!(w[1] % w[0], 0, "{g}");
                }
                assert_eq!(g.factors(), g.invariant_factors(), "{g}");
            }
            for (i, a) in groups.iter().enumerate() {
                for b in &groups[i + 1..] {
                    assert!(!a.is_isomorphic(b), "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn coset_system_multiplicities() {
        let g = FinAbGroup::new([4]).unwrap();
        let h = subgroup_from_generators(&g, &[g.element(&[2]).unwrap()]).unwrap();
        let partition = CosetSystem::new(vec![
            (g.element(&[0]).unwrap(), h.clone()),
            (g.element(&[1]).unwrap(), h.clone()),
        ])
        .unwrap();
        assert_eq!(partition.multiplicities().unwrap(), vec![1, 1, 1, 1]);
        assert!(partition.is_exact_m_cover(1).unwrap());

        let doubled = CosetSystem::new(vec![
            (g.element(&[0]).unwrap(), h.clone()),
            (g.element(&[2]).unwrap(), h.clone()),
        ])
        .unwrap();
        assert_eq!(doubled.multiplicities().unwrap(), vec![2, 0, 2, 0]);
        assert!(!doubled.is_m_cover(1).unwrap());
        assert_eq!(doubled.multiplicity(&g.element(&[2]).unwrap()), 2);

        let other = FinAbGroup::new([2, 2]).unwrap();
        let k = subgroup_from_generators(&other, &[other.element(&[1, 0]).unwrap()]).unwrap();
        assert_eq!(
            CosetSystem::new(vec![(g.element(&[0]).unwrap(), h), (other.identity(), k)])
                .unwrap_err(),
            GroupError::MixedAmbientGroups
        );
        assert_eq!(CosetSystem::new(vec![]).unwrap_err(), GroupError::EmptySystem);
    }

    fn small_group() -> impl Strategy<Value = FinAbGroup> {
        prop::sample::select(vec![
            FinAbGroup::new([2, 2]).unwrap(),
            FinAbGroup::new([4, 2]).unwrap(),
            FinAbGroup::new([6]).unwrap(),
            FinAbGroup::new([3, 3]).unwrap(),
            FinAbGroup::new([8, 2]).unwrap(),
            FinAbGroup::new([12]).unwrap(),
            FinAbGroup::new([2, 2, 2]).unwrap(),
            FinAbGroup::new([9]).unwrap(),
        ])
    }

    proptest! {
        #[test]
        fn lagrange_holds_for_generated_subgroups(
            g in small_group(),
            seeds in prop::collection::vec(any::<u64>(), 0..3),
        ) {
            let gens: Vec<GroupElement> =
                seeds.iter().map(|&s| g.element_from_index(s % g.order())).collect();
            let h = subgroup_from_generators(&g, &gens).unwrap();
            prop_assert_eq!(g.order() % h.order(), 0);
            prop_assert_eq!(h.coset_reps().len() as u64, h.index_in_group());
            for gen in &gens {
                prop_assert!(h.contains(gen));
            }
        }

        #[test]
        fn scalar_mul_agrees_with_repeated_addition(
            g in small_group(),
            seed in any::<u64>(),
            k in 0i64..20,
        ) {
            let e = g.element_from_index(seed % g.order());
            let mut sum = g.identity();
            for _ in 0..k {
                sum = g.add(&sum, &e);
            }
            prop_assert_eq!(g.scalar_mul(k, &e), sum);
        }
    }
}
