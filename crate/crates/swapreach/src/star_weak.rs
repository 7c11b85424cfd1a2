//! Object reachability on a star, weak preferences allowed.
//!
//! Leaves can only trade with the center, so the center's holding walks from
//! object to object. After relabeling (target holder is 1, center is n) the
//! question is whether an auxiliary digraph has a path from n to 1: each arc
//! `i -> j` is one trade where the center hands `o_i` to leaf `j` and takes
//! `o_j`. When the asking agent `k` is a leaf, a last trade hands it `o_1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Agent, Instance, NetworkKind, Object, SwapSequence};
use crate::Reachability;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StarError {
    #[error("network is not a star")]
    NotAStar,
    #[error("agent {0} is out of range")]
    AgentOutOfRange(Agent),
    #[error("object {0} is out of range")]
    ObjectOutOfRange(Object),
}

/// The vertex adjacent to every other one. For `n <= 2` the larger index wins.
pub fn find_center(inst: &Instance) -> Result<Agent, StarError> {
    let n = inst.n();
    let edges = inst.network().edges();
    if edges.len() + 1 != n {
        return Err(StarError::NotAStar);
    }
    if n == 1 {
        return Ok(Agent(1));
    }
    let mut degree = vec![0usize; n];
    for &(a, b) in edges {
        degree[a.idx()] += 1;
        degree[b.idx()] += 1;
    }
    (0..n).rev().find(|&i| degree[i] == n - 1).map(Agent::from_idx).ok_or(StarError::NotAStar)
}

/// Star instance after relabeling and pruning, with the maps back to the
/// caller's agents. Agent 1 holds the target, agent `n` is the center.
#[derive(Clone, Debug)]
pub struct Relabeled {
    pub instance: Instance,
    pub k: Agent,
    /// `original[t]` is the caller's agent behind agent `t + 1`.
    pub original: Vec<Agent>,
}

/// Put the target holder first and the center last, leaves in between in
/// increasing order. Objects follow their endowed holders, so the endowment
/// becomes the identity and the target becomes `o_1`.
pub fn relabel(inst: &Instance, center: Agent, k: Agent, target: Object) -> Relabeled {
    let holder = inst.endowment().holder_of(target);
    debug_assert_ne!(holder, center);
    let mut agents = vec![holder];
    agents.extend((1..=inst.n()).map(Agent).filter(|&a| a != holder && a != center));
    agents.push(center);
    let objects: Vec<Object> = agents.iter().map(|&a| inst.endowment().object_of(a)).collect();
    let instance = inst.remap(&agents, &objects, NetworkKind::Star);
    let k_new = Agent(agents.iter().position(|&a| a == k).expect("k is an agent") + 1);
    Relabeled { instance, k: k_new, original: agents }
}

/// Remove leaves `i ∉ {1, k, n}` with `o_i ≻_n o_1` or `o_n ≻_n o_i`: the
/// center would never take them on a way to `o_1`.
pub fn prune(rel: &Relabeled) -> Relabeled {
    let inst = &rel.instance;
    let n = inst.n();
    let center = Agent(n);
    let keep = |i: usize| {
        i == 1
            || i == n
            || i == rel.k.0
            || !(inst.prefers(center, Object(i), Object(1)) || inst.prefers(center, Object(n), Object(i)))
    };
    let kept: Vec<usize> = (1..=n).filter(|&i| keep(i)).collect();
    let agents: Vec<Agent> = kept.iter().map(|&i| Agent(i)).collect();
    let objects: Vec<Object> = kept.iter().map(|&i| Object(i)).collect();
    let instance = inst.remap(&agents, &objects, NetworkKind::Star);
    let k = Agent(kept.iter().position(|&i| i == rel.k.0).expect("k is kept") + 1);
    let original = kept.iter().map(|&i| rel.original[i - 1]).collect();
    Relabeled { instance, k, original }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Screen {
    Unreachable,
    Continue,
}

/// Necessary conditions on a relabeled, pruned instance.
pub fn quick_reject(inst: &Instance, k: Agent) -> Screen {
    let n = inst.n();
    let center = Agent(n);
    let (o1, ok, on) = (Object(1), Object(k.0), Object(n));
    let reject = inst.prefers(k, ok, o1)
        || inst.prefers(center, on, o1)
        || (k.0 != n && inst.prefers(center, o1, ok));
    if reject {
        Screen::Unreachable
    } else {
        Screen::Continue
    }
}

/// Possible center trades, as arcs over agents of a relabeled instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxDigraph {
    n: usize,
    out: Vec<Vec<Agent>>,
}

impl AuxDigraph {
    pub fn successors(&self, v: Agent) -> &[Agent] {
        &self.out[v.idx()]
    }

    pub fn arcs(&self) -> Vec<(Agent, Agent)> {
        (1..=self.n)
            .flat_map(|i| self.out[i - 1].iter().map(move |&j| (Agent(i), j)))
            .collect()
    }

    /// A simple path from `from` to `to`, found by depth-first search with
    /// successors tried in increasing order.
    pub fn find_path(&self, from: Agent, to: Agent) -> Option<Vec<Agent>> {
        let mut seen = vec![false; self.n];
        let mut stack: Vec<(Agent, usize)> = vec![(from, 0)];
        seen[from.idx()] = true;
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            if v == to {
                return Some(stack.iter().map(|&(a, _)| a).collect());
            }
            match self.out[v.idx()].get(top.1) {
                Some(&w) => {
                    top.1 += 1;
                    if !seen[w.idx()] {
                        seen[w.idx()] = true;
                        stack.push((w, 0));
                    }
                }
                None => {
                    stack.pop();
                }
            }
        }
        None
    }
}

pub fn build_aux(inst: &Instance, k: Agent) -> AuxDigraph {
    let n = inst.n();
    let center = Agent(n);
    let o = Object;
    let mut out = vec![Vec::new(); n];
    for i in 1..=n {
        for j in 1..=n {
            if j == i || j == n {
                continue;
            }
            let arc = if j == k.0 {
                // k trades with the center, still leaving a rational final trade
                i != 1
                    && inst.weakly_prefers(k, o(1), o(i))
                    && inst.weakly_prefers(k, o(i), o(k.0))
                    && inst.weakly_prefers(center, o(k.0), o(i))
                    && inst.weakly_prefers(center, o(i), o(1))
            } else {
                inst.weakly_prefers(Agent(j), o(i), o(j)) && inst.weakly_prefers(center, o(j), o(i))
            };
            if arc {
                out[i - 1].push(Agent(j));
            }
        }
    }
    AuxDigraph { n, out }
}

pub fn solve(inst: &Instance, k: Agent, target: Object) -> Result<Reachability, StarError> {
    let n = inst.n();
    let center = find_center(inst)?;
    if k.0 == 0 || k.0 > n {
        return Err(StarError::AgentOutOfRange(k));
    }
    if target.0 == 0 || target.0 > n {
        return Err(StarError::ObjectOutOfRange(target));
    }
    let endowment = inst.endowment();
    if endowment.object_of(k) == target {
        return Ok(Reachability::Reachable(Vec::new()));
    }
    if endowment.holder_of(target) == center {
        // The center's own object: only a direct trade can deliver it.
        let ok = inst.swap_is_acceptable(endowment, k, center);
        return Ok(if ok { Reachability::Reachable(vec![ordered(center, k)]) } else { Reachability::Unreachable });
    }

    let rel = prune(&relabel(inst, center, k, target));
    let work = &rel.instance;
    let (m, kk) = (work.n(), rel.k);
    if quick_reject(work, kk) == Screen::Unreachable {
        return Ok(Reachability::Unreachable);
    }
    let aux = build_aux(work, kk);
    let Some(path) = aux.find_path(Agent(m), Agent(1)) else {
        return Ok(Reachability::Unreachable);
    };
    let back = |a: Agent| rel.original[a.idx()];
    let mut seq: SwapSequence = path[1..].iter().map(|&v| ordered(back(Agent(m)), back(v))).collect();
    if kk.0 != m {
        seq.push(ordered(back(Agent(m)), back(kk)));
    }
    Ok(Reachability::Reachable(seq))
}

fn ordered(a: Agent, b: Agent) -> (Agent, Agent) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Every leaf other than `k` trades at most once and `k` at most twice.
pub fn is_simple_certificate(inst: &Instance, k: Agent, seq: &[(Agent, Agent)]) -> bool {
    let Ok(center) = find_center(inst) else { return false };
    let mut count = vec![0usize; inst.n()];
    for &(a, b) in seq {
        for x in [a, b] {
            if x != center {
                count[x.idx()] += 1;
            }
        }
    }
    (1..=inst.n()).all(|i| {
        let agent = Agent(i);
        agent == center || count[i - 1] <= if agent == k { 2 } else { 1 }
    })
}
