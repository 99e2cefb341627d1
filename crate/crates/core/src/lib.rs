//! Exact verification and desk-scale search for combinatorial covering
//! structures.
//!
//! The crate works with four families of objects:
//!
//! * residue classes `a(n) = a + nZ` and finite systems of them
//!   ([`residues`]), together with cover verification ([`covers`]) and
//!   structural analysis of disjoint covers ([`cover_analysis`]);
//! * finite abelian groups in direct-sum form, their subgroups and coset
//!   systems ([`groups`]);
//! * zero-sum sequences over finite abelian groups: Erdős–Ginzburg–Ziv
//!   witnesses, Davenport constants, and the bridge from covering
//!   multiplicities to zero-sum subset sums ([`zerosum`]);
//! * sumsets and restricted sumsets with the classical lower bounds, plus
//!   numbering problems of Hall and Snevily type ([`sumsets`]);
//! * lower/upper bounds and conjecture scans for covers of a finite
//!   abelian group by cosets ([`coset_covers`]).
//!
//! Arithmetic on residues and moduli is arbitrary precision throughout.
//! Operations that must materialize one full period (naive scans, the
//! window-certificate preprocessing) check an explicit size bound and
//! refuse inputs beyond it rather than silently truncating.
//!
//! Searches that could in principle run forever take a node budget and
//! return [`Budgeted::Exhausted`] when they hit it; exhaustion is a
//! distinct outcome, never coerced to "false".

pub mod coset_covers;
pub mod cover_analysis;
pub mod covers;
pub mod groups;
pub mod residues;
pub mod sumsets;
pub mod zerosum;

pub(crate) mod arith;

/// Result of a search that ran under a node budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Budgeted<T> {
    /// The search ran to completion.
    Done(T),
    /// The node budget ran out after `nodes` nodes; no conclusion.
    Exhausted { nodes: u64 },
}

impl<T> Budgeted<T> {
    pub fn is_done(&self) -> bool {
        matches!(self, Budgeted::Done(_))
    }

    /// Unwraps a completed outcome; panics on exhaustion.
    pub fn expect_done(self, msg: &str) -> T {
        match self {
            Budgeted::Done(v) => v,
            Budgeted::Exhausted { nodes } => {
                panic!("{msg}: search budget exhausted after {nodes} nodes")
            }
        }
    }
}
