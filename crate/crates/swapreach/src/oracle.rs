//! Brute-force ground truth: breadth-first search over assignments.
//!
//! States live in a flat byte arena (one byte per agent), so instances are
//! limited to 255 agents, far more than any search here can afford anyway.

use alloc::vec;
use alloc::vec::Vec;
use core::hash::BuildHasher;

use hashbrown::hash_table::{Entry, HashTable};
use hashbrown::DefaultHashBuilder;

use crate::model::{self, Agent, Assignment, Instance, MissingValues, Object, SwapSequence};
use crate::Reachability;

pub const DEFAULT_CAP: usize = 5_000_000;

const ROOT: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Distinct assignments stored.
    pub explored: usize,
    /// Largest number of discovered but unexpanded assignments.
    pub frontier_peak: usize,
    /// Deepest BFS layer reached.
    pub max_depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("state cap of {cap} exceeded after exploring {} assignments", .stats.explored)]
pub struct CapExceeded {
    pub cap: usize,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    CapExceeded(#[from] CapExceeded),
    #[error(transparent)]
    MissingValues(#[from] MissingValues),
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub cap: usize,
    /// Order in which network edges are tried, as indices into the edge list.
    pub edge_order: Option<Vec<usize>>,
}

impl SearchOptions {
    pub fn with_cap(cap: usize) -> Self {
        SearchOptions { cap, edge_order: None }
    }
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions::with_cap(DEFAULT_CAP)
    }
}

/// Every assignment reachable from the endowment, with BFS parent links.
#[derive(Clone, Debug)]
pub struct ReachableSet {
    n: usize,
    arena: Vec<u8>,
    parent: Vec<u32>,
    via: Vec<(Agent, Agent)>,
    depth: Vec<u32>,
    table: HashTable<u32>,
    hasher: DefaultHashBuilder,
    stats: SearchStats,
}

impl ReachableSet {
    fn new(n: usize) -> Self {
        ReachableSet {
            n,
            arena: Vec::new(),
            parent: Vec::new(),
            via: Vec::new(),
            depth: Vec::new(),
            table: HashTable::new(),
            hasher: DefaultHashBuilder::default(),
            stats: SearchStats::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    fn state(&self, idx: usize) -> &[u8] {
        &self.arena[idx * self.n..(idx + 1) * self.n]
    }

    fn find(&self, state: &[u8]) -> Option<usize> {
        let hash = self.hasher.hash_one(state);
        self.table
            .find(hash, |&i| self.state(i as usize) == state)
            .map(|&i| i as usize)
    }

    /// Insert unless present; returns the index of a new state.
    fn insert(&mut self, state: &[u8], parent: u32, via: (Agent, Agent), depth: u32) -> Option<usize> {
        let hash = self.hasher.hash_one(state);
        let n = self.n;
        let arena = &self.arena;
        let idx = self.parent.len() as u32;
        match self.table.entry(
            hash,
            |&i| &arena[i as usize * n..(i as usize + 1) * n] == state,
            |&i| self.hasher.hash_one(&arena[i as usize * n..(i as usize + 1) * n]),
        ) {
            Entry::Occupied(_) => None,
            Entry::Vacant(slot) => {
                slot.insert(idx);
                self.arena.extend_from_slice(state);
                self.parent.push(parent);
                self.via.push(via);
                self.depth.push(depth);
                Some(idx as usize)
            }
        }
    }

    fn assignment(&self, idx: usize) -> Assignment {
        decode(self.state(idx))
    }

    pub fn contains(&self, a: &Assignment) -> bool {
        a.n() == self.n && self.find(&encode(a.objects())).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = Assignment> + '_ {
        (0..self.len()).map(move |i| self.assignment(i))
    }

    /// Shortest swap sequence from the endowment to `a`.
    pub fn certificate(&self, a: &Assignment) -> Option<SwapSequence> {
        if a.n() != self.n {
            return None;
        }
        let idx = self.find(&encode(a.objects()))?;
        Some(self.trace(idx))
    }

    /// BFS depth of `a`, if reachable.
    pub fn depth(&self, a: &Assignment) -> Option<usize> {
        let idx = self.find(&encode(a.objects()))?;
        Some(self.depth[idx] as usize)
    }

    /// Assignments along the BFS tree path from the endowment to `a`.
    pub fn path_states(&self, a: &Assignment) -> Option<Vec<Assignment>> {
        let mut idx = self.find(&encode(a.objects()))?;
        let mut states = vec![self.assignment(idx)];
        while self.parent[idx] != ROOT {
            idx = self.parent[idx] as usize;
            states.push(self.assignment(idx));
        }
        states.reverse();
        Some(states)
    }

    fn trace(&self, mut idx: usize) -> SwapSequence {
        let mut seq = Vec::new();
        while self.parent[idx] != ROOT {
            seq.push(self.via[idx]);
            idx = self.parent[idx] as usize;
        }
        seq.reverse();
        seq
    }
}

fn encode(objects: &[Object]) -> Vec<u8> {
    objects.iter().map(|o| o.idx() as u8).collect()
}

fn decode(state: &[u8]) -> Assignment {
    Assignment::from_objects(state.iter().map(|&b| Object::from_idx(b as usize)).collect())
        .expect("stored states are permutations")
}

/// Run BFS, stopping early as soon as `goal` accepts a state. Returns the set
/// built so far and the index of the goal state, if any.
fn search(
    inst: &Instance,
    opts: &SearchOptions,
    goal: impl Fn(&[u8]) -> bool,
) -> Result<(ReachableSet, Option<usize>), CapExceeded> {
    let n = inst.n();
    assert!(n <= 255, "oracle supports at most 255 agents");
    let edges = inst.network().edges();
    let order: Vec<usize> = match &opts.edge_order {
        Some(order) => order.clone(),
        None => (0..edges.len()).collect(),
    };
    // rank[i][o] as a flat table over 0-based indices
    let mut rank = vec![0u32; n * n];
    for i in 0..n {
        for o in 0..n {
            rank[i * n + o] = inst.rank(Agent::from_idx(i), Object::from_idx(o));
        }
    }

    let mut set = ReachableSet::new(n);
    let root = encode(inst.endowment().objects());
    set.insert(&root, ROOT, (Agent(0), Agent(0)), 0);
    set.stats.explored = 1;
    set.stats.frontier_peak = 1;
    if goal(&root) {
        return Ok((set, Some(0)));
    }

    let mut cur = vec![0u8; n];
    let mut head = 0;
    while head < set.len() {
        cur.copy_from_slice(set.state(head));
        let depth = set.depth[head] + 1;
        for &e in &order {
            let (i, j) = edges[e];
            let (a, b) = (i.idx(), j.idx());
            let (oa, ob) = (cur[a] as usize, cur[b] as usize);
            if rank[a * n + ob] > rank[a * n + oa] || rank[b * n + oa] > rank[b * n + ob] {
                continue;
            }
            cur.swap(a, b);
            if set.find(&cur).is_none() {
                if set.len() >= opts.cap {
                    set.stats.explored = set.len();
                    return Err(CapExceeded { cap: opts.cap, stats: set.stats });
                }
                let idx = set.insert(&cur, head as u32, (i, j), depth).expect("absent");
                set.stats.explored = set.len();
                set.stats.max_depth = set.stats.max_depth.max(depth as usize);
                set.stats.frontier_peak = set.stats.frontier_peak.max(set.len() - head - 1);
                if goal(&cur) {
                    return Ok((set, Some(idx)));
                }
            }
            cur.swap(a, b);
        }
        head += 1;
    }
    Ok((set, None))
}

pub fn reachable_set(inst: &Instance, cap: usize) -> Result<ReachableSet, CapExceeded> {
    reachable_set_with(inst, &SearchOptions::with_cap(cap))
}

pub fn reachable_set_with(inst: &Instance, opts: &SearchOptions) -> Result<ReachableSet, CapExceeded> {
    search(inst, opts, |_| false).map(|(set, _)| set)
}

/// Can agent `k` end up holding `object`? The certificate is a shortest one.
pub fn is_reachable(inst: &Instance, k: Agent, object: Object, cap: usize) -> Result<Reachability, CapExceeded> {
    let (a, o) = (k.idx(), object.idx() as u8);
    let (set, hit) = search(inst, &SearchOptions::with_cap(cap), |s| s[a] == o)?;
    Ok(match hit {
        Some(idx) => Reachability::Reachable(set.trace(idx)),
        None => Reachability::Unreachable,
    })
}

/// Reachable assignments not Pareto-dominated by another reachable assignment.
pub fn pareto_frontier(inst: &Instance, cap: usize) -> Result<Vec<Assignment>, CapExceeded> {
    let set = reachable_set(inst, cap)?;
    Ok(frontier_of(inst, set.iter().collect()))
}

/// Non-dominated members of `states`, in order of increasing total rank.
pub fn frontier_of(inst: &Instance, states: Vec<Assignment>) -> Vec<Assignment> {
    let n = inst.n();
    let total = |a: &Assignment| -> u64 {
        (1..=n).map(|i| u64::from(inst.rank(Agent(i), a.object_of(Agent(i))))).sum()
    };
    let mut keyed: Vec<(u64, Assignment)> = states.into_iter().map(|a| (total(&a), a)).collect();
    keyed.sort_by_key(|(t, _)| *t);
    // A dominator has a strictly smaller rank total, and anything dominated
    // is dominated by some frontier member, so comparing against the
    // frontier built so far is enough.
    let mut frontier: Vec<Assignment> = Vec::new();
    for (_, a) in keyed {
        if !frontier.iter().any(|f| model::pareto_dominates(inst, f, &a)) {
            frontier.push(a);
        }
    }
    frontier
}

/// Largest welfare over the reachable set, with the first assignment (in BFS
/// order) attaining it.
pub fn max_welfare(inst: &Instance, cap: usize) -> Result<(i64, Assignment), OracleError> {
    inst.values().ok_or(MissingValues)?;
    let set = reachable_set(inst, cap)?;
    let mut best: Option<(i64, Assignment)> = None;
    for a in set.iter() {
        let w = model::welfare(inst, &a)?;
        if best.as_ref().is_none_or(|(b, _)| w > *b) {
            best = Some((w, a));
        }
    }
    Ok(best.expect("reachable set contains the endowment"))
}
