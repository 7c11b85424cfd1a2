//! Hardness gadgets and brute-force checkers for their source problems.
//!
//! * [`sat`]: 2P1N-SAT formula to a weak-preference path instance.
//! * [`ham`]: directed Hamiltonian path to a star instance with valuations.

pub mod ham;
pub mod sat;

pub use ham::{brute_ham_path, digraph_to_star_welfare, Digraph, StarWelfareGadget};
pub use sat::{brute_sat, intended_sequence, sat_to_weak_path, validate_2p1n, CnfFormula, PathGadget};

use alloc::vec::Vec;

use crate::model::{Agent, Assignment, Instance, SwapSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("input too large for exhaustive search ({size} > {limit})")]
pub struct TooLarge {
    pub size: usize,
    pub limit: usize,
}

/// Apply rational swaps that make somebody strictly better off, first edge
/// first, until none is left. Returns the swaps and the final assignment.
pub fn improve_greedily(inst: &Instance, from: &Assignment) -> (SwapSequence, Assignment) {
    let mut cur = from.clone();
    let mut seq = Vec::new();
    loop {
        let step = inst.network().edges().iter().copied().find(|&(i, j)| {
            let (oi, oj) = (cur.object_of(i), cur.object_of(j));
            inst.swap_is_acceptable(&cur, i, j) && (inst.prefers(i, oj, oi) || inst.prefers(j, oi, oj))
        });
        match step {
            Some((i, j)) => {
                cur.swap(i, j);
                seq.push((i, j));
            }
            None => return (seq, cur),
        }
    }
}

/// Does every agent hold one of its top-tier objects?
pub fn all_hold_favorites(inst: &Instance, a: &Assignment) -> bool {
    (1..=inst.n()).all(|i| inst.rank(Agent(i), a.object_of(Agent(i))) == 0)
}
