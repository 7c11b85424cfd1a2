//! Object reachability in housing markets where agents sit on a social network
//! and trade only with neighbors, one individually rational swap at a time.
//!
//! Polynomial solvers cover strict preferences on paths ([`path_strict`]) and
//! weak preferences on stars ([`star_weak`]). Everything else goes through the
//! breadth-first [`oracle`]. The [`reductions`] module builds the hardness
//! gadgets used to sanity-check the oracle at small scale.

#![no_std]

extern crate alloc;

pub mod generate;
pub mod model;
pub mod oracle;
pub mod path_strict;
pub mod reductions;
pub mod star_weak;
pub mod twosat;

pub use model::{
    Agent, Assignment, Instance, InstanceParts, Network, NetworkKind, Object, PreferenceProfile,
    Query, SwapSequence, ValueFunction,
};

/// Answer to a reachability query. A positive answer carries its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reachability {
    Reachable(SwapSequence),
    Unreachable,
}

impl Reachability {
    pub fn is_reachable(&self) -> bool {
        matches!(self, Reachability::Reachable(_))
    }

    pub fn certificate(&self) -> Option<&SwapSequence> {
        match self {
            Reachability::Reachable(seq) => Some(seq),
            Reachability::Unreachable => None,
        }
    }
}
