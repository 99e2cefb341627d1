//! Cover verification: does a residue system hit every integer at least
//! (or exactly) `m` times?
//!
//! Three verification routes are provided.
//!
//! * [`is_m_cover_naive`] scans one full period `0..lcm(n_1..n_k)` and is
//!   the ground truth the other routes are tested against.
//! * [`is_m_cover_window`] checks only `|S|` *consecutive* integers,
//!   where `S` is the set of fractional parts of the subset sums
//!   `sum_{s in I} m_s/n_s` over all `I`, for any multipliers `m_s`
//!   coprime to `n_s`. If every integer in such a window is covered at
//!   least `m` times, the whole line is; a failing window refutes at the
//!   failing point. The window may start anywhere, so near-misses can be
//!   probed cheaply from many starts.
//! * [`is_exact_m_cover_window`] does the same for *exact* multiplicity,
//!   with the window length `|T|`, `T` the set of fractional parts
//!   `{r/n_s}`; `|T| <= n_1 + ... + n_k - k + 1` always holds.
//!
//! [`erdos_2k_check`] covers the classical `1..2^k` criterion: a system
//! of `k` classes covering `1..2^k` covers every integer. It is sound
//! because with all multipliers 1 the set `S` has at most `2^k` elements,
//! so a clean run of `2^k` consecutive integers contains a certifying
//! window.
//!
//! The subset-sum set `S` is computed over the common denominator
//! `N = lcm(n_1..n_k)` by a bitset dynamic program (insert one class at a
//! time with a cyclic shift-or), never by enumerating `2^k` subsets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::residues::ResidueSystem;

/// Largest period the scanning and window-preprocessing routes will
/// materialize (bits for the subset-sum DP, one counter per residue for
/// the naive scan).
pub const MAX_SCAN: u64 = 10_000_000;

/// Largest class count accepted by [`erdos_2k_check`]; the window size
/// `2^k` is intractable beyond this.
pub const MAX_ERDOS_CLASSES: usize = 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("multiplicity target m must be at least 1")]
    ZeroM,
    #[error("expected {expected} multipliers, got {got}")]
    MultiplierCount { expected: usize, got: usize },
    #[error("multiplier for class {index} shares a factor with its modulus")]
    NonCoprimeMultiplier { index: usize },
    #[error("lcm of moduli is {lcm}, beyond the scan bound {MAX_SCAN}")]
    ScanTooLarge { lcm: BigInt },
    #[error("class {index} has a modulus too large for scanning")]
    ClassTooLarge { index: usize },
    #[error("2^k window refused for k = {got} classes (max {MAX_ERDOS_CLASSES})")]
    TooManyClasses { got: usize },
}

/// Which route produced a [`CoverVerdict`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverMethod {
    /// Full scan of one period.
    NaivePeriod,
    /// Window certificate of length `|S|` (subset-sum fractional parts).
    SWindow,
    /// Exact-multiplicity window certificate of length `|T|`.
    TWindow,
    /// The `1..2^k` window.
    Erdos2k,
}

impl CoverMethod {
    pub fn name(self) -> &'static str {
        match self {
            CoverMethod::NaivePeriod => "naive-period",
            CoverMethod::SWindow => "s-window",
            CoverMethod::TWindow => "t-window",
            CoverMethod::Erdos2k => "erdos-2k",
        }
    }
}

/// Outcome of a cover check.
///
/// When `is_cover` is false, `witness` is the least `x` in the scanned
/// range whose multiplicity violates the requirement (`< m` for the
/// at-least checks, `!= m` for the exact checks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverVerdict {
    pub is_cover: bool,
    pub m: u64,
    pub method: CoverMethod,
    pub witness: Option<BigInt>,
}

impl CoverVerdict {
    fn certified(m: u64, method: CoverMethod) -> Self {
        CoverVerdict {
            is_cover: true,
            m,
            method,
            witness: None,
        }
    }

    fn refuted(m: u64, method: CoverMethod, witness: BigInt) -> Self {
        CoverVerdict {
            is_cover: false,
            m,
            method,
            witness: Some(witness),
        }
    }
}

/// A set of residues modulo a common denominator, viewed as the set of
/// fractional parts `{r/N : r in set}`. Always contains 0 when produced
/// by [`fractional_part_set`] (the empty subset sum).
#[derive(Clone, Debug)]
pub struct FractionalPartSet {
    denominator: u64,
    bits: Bits,
}

impl FractionalPartSet {
    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// Number of distinct fractional parts.
    pub fn len(&self) -> u64 {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Is `r/denominator` in the set (`r` reduced mod the denominator)?
    pub fn contains(&self, r: u64) -> bool {
        self.bits.test(r % self.denominator)
    }

    /// The residues present, ascending.
    pub fn residues(&self) -> Vec<u64> {
        self.bits.ones()
    }
}

/// The set `S` of fractional parts of all subset sums
/// `sum_{s in I} m_s/n_s`, as residues over `N = lcm(n_1..n_k)`.
///
/// `multipliers` must match the class count and each `m_s` must be
/// coprime to `n_s`; `None` means all ones. Runs in `O(k * N)` bit
/// operations.
pub fn fractional_part_set(
    a: &ResidueSystem,
    multipliers: Option<&[BigInt]>,
) -> Result<FractionalPartSet, CoverError> {
    let n = scan_lcm(a)?;
    let steps = subset_steps(a, multipliers, n)?;
    let mut bits = Bits::new(n);
    bits.set(0);
    for step in steps {
        bits.or_cyclic_shift(step);
    }
    Ok(FractionalPartSet {
        denominator: n,
        bits,
    })
}

/// The set `T` of fractional parts `{r/n_s : 0 <= r < n_s, 1 <= s <= k}`,
/// as residues over `N`: the union of the multiples of each `N/n_s`.
pub fn modulus_fraction_set(a: &ResidueSystem) -> Result<FractionalPartSet, CoverError> {
    let n = scan_lcm(a)?;
    let mut bits = Bits::new(n);
    let mut slot_sum = 0u128;
    for c in a.classes() {
        let m = c
            .modulus()
            .to_u64()
            .expect("modulus divides the u64 lcm");
        slot_sum += u128::from(m);
        let stride = n / m;
        let mut r = 0u64;
        while r < n {
            bits.set(r);
            r += stride;
        }
    }
    let set = FractionalPartSet {
        denominator: n,
        bits,
    };
    // |T| <= n_1 + ... + n_k - k + 1: the k sets each contain 0.
    debug_assert!(u128::from(set.len()) <= slot_sum - a.len() as u128 + 1);
    Ok(set)
}

/// Ground-truth check: scans `0..lcm` and reports the least
/// under-covered point, if any.
pub fn is_m_cover_naive(a: &ResidueSystem, m: u64) -> Result<CoverVerdict, CoverError> {
    let counts = multiplicity_counts(a)?;
    let fail = counts.iter().position(|&w| u64::from(w) < m);
    Ok(match fail {
        None => CoverVerdict::certified(m, CoverMethod::NaivePeriod),
        Some(x) => CoverVerdict::refuted(m, CoverMethod::NaivePeriod, BigInt::from(x)),
    })
}

/// Ground-truth exactness check: scans `0..lcm` and reports the least
/// point whose multiplicity differs from `m`.
pub fn is_exact_m_cover_naive(a: &ResidueSystem, m: u64) -> Result<CoverVerdict, CoverError> {
    let counts = multiplicity_counts(a)?;
    let fail = counts.iter().position(|&w| u64::from(w) != m);
    Ok(match fail {
        None => CoverVerdict::certified(m, CoverMethod::NaivePeriod),
        Some(x) => CoverVerdict::refuted(m, CoverMethod::NaivePeriod, BigInt::from(x)),
    })
}

/// Window certificate for "covers at least `m` times".
///
/// Checks `w(x) >= m` only for `x` in `start .. start + |S|`; if all pass
/// the system is certified an m-cover of the whole line, otherwise the
/// first failing `x` (a genuine under-covered point) is the witness.
pub fn is_m_cover_window(
    a: &ResidueSystem,
    m: u64,
    multipliers: Option<&[BigInt]>,
    start: &BigInt,
) -> Result<CoverVerdict, CoverError> {
    if m == 0 {
        return Err(CoverError::ZeroM);
    }
    let s_set = fractional_part_set(a, multipliers)?;
    match window_violation(a, start, s_set.len(), Requirement::AtLeast(m))? {
        None => Ok(CoverVerdict::certified(m, CoverMethod::SWindow)),
        Some(x) => Ok(CoverVerdict::refuted(m, CoverMethod::SWindow, x)),
    }
}

/// Window certificate for "covers exactly `m` times".
///
/// Checks `w(x) == m` for `x` in `start .. start + |T|`; all-pass
/// certifies an exact m-cover, and the first `x` with `w(x) != m` (in
/// either direction) refutes.
pub fn is_exact_m_cover_window(
    a: &ResidueSystem,
    m: u64,
    start: &BigInt,
) -> Result<CoverVerdict, CoverError> {
    if m == 0 {
        return Err(CoverError::ZeroM);
    }
    let t_set = modulus_fraction_set(a)?;
    match window_violation(a, start, t_set.len(), Requirement::Exactly(m))? {
        None => Ok(CoverVerdict::certified(m, CoverMethod::TWindow)),
        Some(x) => Ok(CoverVerdict::refuted(m, CoverMethod::TWindow, x)),
    }
}

/// The `1..2^k` criterion: a system of `k` classes covering
/// `1, 2, ..., 2^k` covers every integer. Refuses `k > 30`.
pub fn erdos_2k_check(a: &ResidueSystem) -> Result<CoverVerdict, CoverError> {
    let k = a.len();
    if k > MAX_ERDOS_CLASSES {
        return Err(CoverError::TooManyClasses { got: k });
    }
    let window = 1u64 << k;
    match window_violation(a, &BigInt::one(), window, Requirement::AtLeast(1))? {
        None => Ok(CoverVerdict::certified(1, CoverMethod::Erdos2k)),
        Some(x) => Ok(CoverVerdict::refuted(1, CoverMethod::Erdos2k, x)),
    }
}

enum Requirement {
    AtLeast(u64),
    Exactly(u64),
}

impl Requirement {
    fn violated(&self, w: u64) -> bool {
        match *self {
            Requirement::AtLeast(m) => w < m,
            Requirement::Exactly(m) => w != m,
        }
    }
}

/// First `x` in `start .. start + len` whose multiplicity violates the
/// requirement. Per class only the offset to its next hit is tracked, so
/// the scan costs `O(k)` u64 operations per point after `k` big-integer
/// reductions up front.
fn window_violation(
    a: &ResidueSystem,
    start: &BigInt,
    len: u64,
    req: Requirement,
) -> Result<Option<BigInt>, CoverError> {
    // (r, n): r = (start - a_s) mod n_s; the class covers the current
    // point iff r == 0, and r advances by 1 mod n_s per step.
    let mut state: Vec<(u64, u64)> = Vec::with_capacity(a.len());
    for (index, c) in a.classes().iter().enumerate() {
        let n = c
            .modulus()
            .to_u64()
            .ok_or(CoverError::ClassTooLarge { index })?;
        let r = (start - c.residue())
            .mod_floor(c.modulus())
            .to_u64()
            .expect("reduced residue fits u64");
        state.push((r, n));
    }
    for j in 0..len {
        let w = state.iter().filter(|&&(r, _)| r == 0).count() as u64;
        if req.violated(w) {
            return Ok(Some(start + BigInt::from(j)));
        }
        for (r, n) in state.iter_mut() {
            *r += 1;
            if *r == *n {
                *r = 0;
            }
        }
    }
    Ok(None)
}

/// Covering multiplicities over one full period `0..lcm`, by a stride
/// sieve: `O(sum N/n_s)` increments.
pub(crate) fn multiplicity_counts(a: &ResidueSystem) -> Result<Vec<u32>, CoverError> {
    let n = scan_lcm(a)?;
    let mut counts = vec![0u32; n as usize];
    for (index, c) in a.classes().iter().enumerate() {
        let m = c
            .modulus()
            .to_u64()
            .ok_or(CoverError::ClassTooLarge { index })? as usize;
        let mut x = c
            .residue()
            .to_u64()
            .ok_or(CoverError::ClassTooLarge { index })? as usize;
        while x < counts.len() {
            counts[x] += 1;
            x += m;
        }
    }
    Ok(counts)
}

pub(crate) fn scan_lcm(a: &ResidueSystem) -> Result<u64, CoverError> {
    let lcm = a.lcm_modulus();
    match lcm.to_u64() {
        Some(n) if n <= MAX_SCAN => Ok(n),
        _ => Err(CoverError::ScanTooLarge { lcm }),
    }
}

/// DP steps `m_s * (N/n_s) mod N` for the subset-sum set, after
/// validating the multipliers.
fn subset_steps(
    a: &ResidueSystem,
    multipliers: Option<&[BigInt]>,
    n: u64,
) -> Result<Vec<u64>, CoverError> {
    let k = a.len();
    if let Some(ms) = multipliers {
        if ms.len() != k {
            return Err(CoverError::MultiplierCount {
                expected: k,
                got: ms.len(),
            });
        }
    }
    let big_n = BigInt::from(n);
    let mut steps = Vec::with_capacity(k);
    for (index, c) in a.classes().iter().enumerate() {
        let m_s = match multipliers {
            Some(ms) => ms[index].clone(),
            None => BigInt::one(),
        };
        if !m_s.gcd(c.modulus()).is_one() {
            return Err(CoverError::NonCoprimeMultiplier { index });
        }
        let stride = &big_n / c.modulus();
        let step = (m_s * stride).mod_floor(&big_n);
        steps.push(step.to_u64().expect("step reduced mod u64 lcm"));
    }
    Ok(steps)
}

/// Fixed-length bitset over `0..len` with the one nontrivial operation
/// the subset-sum DP needs: `self |= self rotated by shift`.
#[derive(Clone, Debug)]
struct Bits {
    len: u64,
    words: Vec<u64>,
}

impl Bits {
    fn new(len: u64) -> Self {
        assert!(len >= 1);
        Bits {
            len,
            words: vec![0u64; (len as usize).div_ceil(64)],
        }
    }

    fn set(&mut self, i: u64) {
        debug_assert!(i < self.len);
        self.words[(i / 64) as usize] |= 1u64 << (i % 64);
    }

    fn test(&self, i: u64) -> bool {
        debug_assert!(i < self.len);
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    fn ones(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.count() as usize);
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as u64;
                out.push(wi as u64 * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    /// `self |= { (i + shift) mod len : i in self }`.
    ///
    /// Implemented as a linear word shift into a scratch buffer of
    /// `len + shift` bits followed by folding the overflow back onto the
    /// low end; `O(words)` per call.
    fn or_cyclic_shift(&mut self, shift: u64) {
        let s = shift % self.len;
        if s == 0 {
            return;
        }
        let nw = self.words.len();
        let qw = (s / 64) as usize;
        let r = (s % 64) as u32;
        let mut lin = vec![0u64; nw + qw + 1];
        for (i, &w) in self.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            lin[i + qw] |= w << r;
            if r > 0 {
                lin[i + qw + 1] |= w >> (64 - r);
            }
        }
        // Low part: bit positions below len.
        for (i, w) in self.words.iter_mut().enumerate() {
            *w |= lin[i];
        }
        // Overflow part: positions [len, len + s) wrap to [0, s).
        let off = (self.len / 64) as usize;
        let rr = (self.len % 64) as u32;
        for j in 0..nw {
            let lo = lin.get(off + j).copied().unwrap_or(0);
            let lo = if rr > 0 { lo >> rr } else { lo };
            let hi = if rr > 0 {
                lin.get(off + j + 1).copied().unwrap_or(0) << (64 - rr)
            } else {
                0
            };
            self.words[j] |= lo | hi;
        }
        self.mask_top();
    }

    fn mask_top(&mut self) {
        let rem = (self.len % 64) as u32;
        if rem != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << rem) - 1;
        }
    }
}
