//! Object reachability on a path under strict preferences, in polynomial time.
//!
//! After trimming and (if needed) mirroring, the target object starts at agent
//! 1 and must travel right to agent `k`. For each possible last agent `n'`
//! that takes part in the trades, the question becomes whether some
//! *compatible* assignment exists with `o_1` at `k` and `o_{n'}` at `k - 1`.
//! Every object has at most two possible destinations (`i_l`, `i_r`), so the
//! choice is a boolean per object and compatibility is a 2-SAT formula.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{self, Agent, Assignment, Instance, NetworkKind, Object, SwapSequence};
use crate::twosat::{self, Clause, Lit, TwoSatInstance};
use crate::Reachability;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("network is not a path")]
    NotAPath,
    #[error("preferences contain ties; the path solver needs strict preferences")]
    NotStrict,
    #[error("agent {0} is out of range")]
    AgentOutOfRange(Agent),
    #[error("object {0} is out of range")]
    ObjectOutOfRange(Object),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InvalidConstraint {
    #[error("last agent {n_prime} lies left of target agent {k}")]
    LastBeforeTarget { k: usize, n_prime: usize },
    #[error("target agent must be at least 2 and at most n (got k = {k}, n = {n})")]
    TargetOutOfRange { k: usize, n: usize },
    #[error("constrained instances need a strict path with the identity endowment")]
    NotCanonical,
}

/// Possible destinations of one object in a compatible assignment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Candidates {
    pub left: Option<Agent>,
    pub right: Option<Agent>,
}

/// A neat constrained instance: agents `1..=n'` with the identity endowment,
/// asking for `o_1` at agent `k` and `o_{n'}` at agent `k - 1`.
#[derive(Clone, Debug)]
pub struct ConstrainedInstance {
    base: Instance,
    k: usize,
    candidates: Vec<Candidates>,
}

impl ConstrainedInstance {
    pub fn base(&self) -> &Instance {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_prime(&self) -> usize {
        self.base.n()
    }

    /// Candidates of object `o_i`, for every `i` in `1..=n'`.
    pub fn candidates(&self, object: Object) -> Candidates {
        self.candidates[object.idx()]
    }

    #[inline]
    fn prefers(&self, agent: usize, a: usize, b: usize) -> bool {
        self.base.prefers(Agent(agent), Object(a), Object(b))
    }
}

/// Work counters, for complexity checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub neat_instances: usize,
    pub candidate_checks: usize,
    pub set_updates: usize,
    pub pair_checks: usize,
}

/// Drop agents `1..l-1` (and their endowed objects), where `l` holds `o_l`.
/// Returns the trimmed instance, the new target agent and the target object,
/// which is now `o_1` when the endowment is the identity.
pub fn trim_left(inst: &Instance, k: Agent, o_l: Object) -> (Instance, Agent, Object) {
    let l = inst.endowment().holder_of(o_l).0;
    let agents: Vec<Agent> = (l..=inst.n()).map(Agent).collect();
    let objects: Vec<Object> = agents.iter().map(|&a| inst.endowment().object_of(a)).collect();
    let trimmed = inst.remap(&agents, &objects, inst.network().kind());
    (trimmed, Agent(k.0 + 1 - l), Object(1))
}

/// Keep agents `1..=n'` of a canonical instance (strict path, identity
/// endowment) and compute every object's candidates.
pub fn make_neat(inst: &Instance, k: Agent, n_prime: usize) -> Result<ConstrainedInstance, InvalidConstraint> {
    let mut stats = SolveStats::default();
    make_neat_counted(inst, k, n_prime, &mut stats)
}

fn make_neat_counted(
    inst: &Instance,
    k: Agent,
    n_prime: usize,
    stats: &mut SolveStats,
) -> Result<ConstrainedInstance, InvalidConstraint> {
    let n = inst.n();
    if k.0 < 2 || k.0 > n {
        return Err(InvalidConstraint::TargetOutOfRange { k: k.0, n });
    }
    if n_prime < k.0 || n_prime > n {
        return Err(InvalidConstraint::LastBeforeTarget { k: k.0, n_prime });
    }
    if inst.network().kind() != NetworkKind::Path
        || !inst.is_strict()
        || *inst.endowment() != Assignment::identity(n)
    {
        return Err(InvalidConstraint::NotCanonical);
    }
    let agents: Vec<Agent> = (1..=n_prime).map(Agent).collect();
    let objects: Vec<Object> = (1..=n_prime).map(Object).collect();
    let base = if n_prime == n { inst.clone() } else { inst.remap(&agents, &objects, NetworkKind::Path) };
    let mut ci = ConstrainedInstance { base, k: k.0, candidates: vec![Candidates::default(); n_prime] };
    ci.candidates[0] = Candidates { left: None, right: Some(k) };
    ci.candidates[n_prime - 1] = Candidates { left: Some(Agent(k.0 - 1)), right: None };
    for i in 2..n_prime {
        ci.candidates[i - 1] = candidates_counted(&ci, i, stats);
    }
    Ok(ci)
}

/// Destinations `(i_l, i_r)` for object `o_i`, `2 <= i <= n' - 1`.
pub fn compute_candidates(ci: &ConstrainedInstance, i: usize) -> Candidates {
    let mut stats = SolveStats::default();
    candidates_counted(ci, i, &mut stats)
}

fn candidates_counted(ci: &ConstrainedInstance, i: usize, stats: &mut SolveStats) -> Candidates {
    let np = ci.n_prime();
    let k = ci.k;
    debug_assert!(i >= 2 && i < np);
    if i < k {
        let (l, r) = left_side_candidates(np, k, i, |j, a, b| ci.prefers(j, a, b), stats);
        Candidates { left: l.map(Agent), right: r.map(Agent) }
    } else {
        // Mirror: agent j <-> n'+1-j, object o_a <-> o_{n'+1-a}; the target
        // agent becomes n'+2-k and o_i becomes an object left of it.
        let flip = |x: usize| np + 1 - x;
        let (l, r) = left_side_candidates(
            np,
            np + 2 - k,
            flip(i),
            |j, a, b| ci.prefers(flip(j), flip(a), flip(b)),
            stats,
        );
        Candidates { left: r.map(|a| Agent(flip(a))), right: l.map(|a| Agent(flip(a))) }
    }
}

/// Candidates for an object `o_i` with `i < k`, under the preference oracle
/// `pref(j, a, b)` meaning `o_a ≻_j o_b`.
///
/// Going left, `o_i` must meet `o_1` (which travels 1 -> k): it lands at
/// `i'` with `o_i ≻_{i'} o_1` and `o_1 ≻_j o_i` for `i' < j <= i`.
/// Going right it meets `o_{n'}` (which travels n' -> k-1): it lands at
/// `i' > k` with `o_i ≻_{i'} o_{n'}` and `o_{n'} ≻_j o_i` for `k-1 <= j < i'`.
/// Inside the crossing zone every agent that takes `o_i` must prefer it to
/// its own endowment, since holdings only improve.
fn left_side_candidates(
    np: usize,
    k: usize,
    i: usize,
    pref: impl Fn(usize, usize, usize) -> bool,
    stats: &mut SolveStats,
) -> (Option<usize>, Option<usize>) {
    let mut left = None;
    for land in 1..i {
        stats.candidate_checks += 1;
        if pref(land, i, 1) && (land + 1..=i).all(|j| pref(j, 1, i)) && (land..i).all(|j| pref(j, i, j)) {
            left = Some(land);
            break;
        }
    }
    let mut right = None;
    for land in k + 1..=np {
        stats.candidate_checks += 1;
        if pref(land, i, np) && (k - 1..land).all(|j| pref(j, np, i)) && ((k - 1).max(i + 1)..=land).all(|j| pref(j, i, j)) {
            right = Some(land);
            break;
        }
    }
    (left, right)
}

/// `R_j` for every agent `j`, before and after the update procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionSets {
    pub initial: Vec<Vec<Object>>,
    pub updated: Vec<Vec<Object>>,
}

impl PositionSets {
    pub fn get(&self, agent: Agent) -> &[Object] {
        &self.updated[agent.idx()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("no compatible assignment exists for this last agent")]
pub struct NoInstance;

pub fn build_position_sets(ci: &ConstrainedInstance) -> Result<PositionSets, NoInstance> {
    let mut stats = SolveStats::default();
    position_sets_counted(ci, &mut stats)
}

fn position_sets_counted(ci: &ConstrainedInstance, stats: &mut SolveStats) -> Result<PositionSets, NoInstance> {
    let np = ci.n_prime();
    let mut sets: Vec<Vec<Object>> = vec![Vec::new(); np];
    for (idx, c) in ci.candidates.iter().enumerate() {
        if c.left.is_none() && c.right.is_none() {
            return Err(NoInstance);
        }
        for agent in [c.left, c.right].into_iter().flatten() {
            sets[agent.idx()].push(Object::from_idx(idx));
        }
    }
    let initial = sets.clone();
    loop {
        let mut changed = false;
        for j in 0..np {
            match sets[j][..] {
                [] => return Err(NoInstance),
                [only] => {
                    for (j2, other) in sets.iter_mut().enumerate() {
                        if j2 != j && other.contains(&only) {
                            other.retain(|&o| o != only);
                            stats.set_updates += 1;
                            changed = true;
                        }
                    }
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    // By counting, a fixpoint with no empty set has only singletons and pairs.
    debug_assert!(sets.iter().all(|s| (1..=2).contains(&s.len())));
    Ok(PositionSets { initial, updated: sets })
}

/// Are `o_a` placed at `a_to` and `o_b` placed at `b_to` compatible?
/// Requires `a < b`, `a_to != a`, `b_to != b`.
pub fn pair_compatible(ci: &ConstrainedInstance, a: usize, a_to: usize, b: usize, b_to: usize) -> bool {
    debug_assert!(a < b && a_to != a && b_to != b);
    let (lo, hi) = (a.min(a_to).max(b.min(b_to)), a.max(a_to).min(b.max(b_to)));
    if lo > hi {
        return true;
    }
    let a_right = a_to > a;
    let b_right = b_to > b;
    match (a_right, b_right) {
        (true, true) => a_to < b_to && (lo..=hi).all(|q| ci.prefers(q, a, b)),
        (false, false) => a_to < b_to && (lo..=hi).all(|q| ci.prefers(q, b, a)),
        (true, false) => {
            // o_a and o_b swap with each other between agents c-1 and c
            let c = (a_to + b_to + 1) as isize - ci.k as isize;
            if c < lo as isize || c > hi as isize || c == a as isize {
                return false;
            }
            let c = c as usize;
            (a.max(b_to)..c).all(|q| ci.prefers(q, b, a)) && (c..=a_to.min(b)).all(|q| ci.prefers(q, a, b))
        }
        // a_to < a < b < b_to: the intervals cannot meet
        (false, true) => true,
    }
}

fn literal(ci: &ConstrainedInstance, object: Object, agent: Agent) -> Lit {
    let c = ci.candidates[object.idx()];
    if c.right == Some(agent) {
        Lit::pos(object.0)
    } else {
        debug_assert_eq!(c.left, Some(agent));
        Lit::neg(object.0)
    }
}

/// Clauses over `x_i` (`x_i` true: `o_i` goes to `i_r`; false: to `i_l`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSatEncoding {
    pub var_count: usize,
    pub agent_clauses: Vec<Clause>,
    pub compatible_clauses: Vec<Clause>,
}

impl TwoSatEncoding {
    pub fn instance(&self) -> TwoSatInstance {
        let mut ts = TwoSatInstance::new(self.var_count);
        for &(a, b) in self.agent_clauses.iter().chain(&self.compatible_clauses) {
            ts.add_clause(a, b);
        }
        ts
    }
}

pub fn build_twosat(ci: &ConstrainedInstance, sets: &PositionSets) -> TwoSatEncoding {
    let mut stats = SolveStats::default();
    twosat_counted(ci, sets, &mut stats)
}

fn twosat_counted(ci: &ConstrainedInstance, sets: &PositionSets, stats: &mut SolveStats) -> TwoSatEncoding {
    let np = ci.n_prime();
    let lits: Vec<Vec<(Object, Lit)>> = (1..=np)
        .map(|j| sets.get(Agent(j)).iter().map(|&o| (o, literal(ci, o, Agent(j)))).collect())
        .collect();

    let mut agent_clauses = Vec::new();
    for set in &lits {
        match set[..] {
            [(_, l)] => agent_clauses.push((l, l)),
            [(_, l1), (_, l2)] => {
                agent_clauses.push((l1, l2));
                agent_clauses.push((l1.negate(), l2.negate()));
            }
            _ => unreachable!("position sets hold one or two objects"),
        }
    }

    let mut compatible_clauses = Vec::new();
    for j1 in 0..np {
        for j2 in j1 + 1..np {
            for &(o1, l1) in &lits[j1] {
                for &(o2, l2) in &lits[j2] {
                    if o1 == o2 {
                        continue;
                    }
                    stats.pair_checks += 1;
                    let (p1, p2) = (j1 + 1, j2 + 1);
                    let ok = if o1 < o2 {
                        pair_compatible(ci, o1.0, p1, o2.0, p2)
                    } else {
                        pair_compatible(ci, o2.0, p2, o1.0, p1)
                    };
                    if !ok {
                        compatible_clauses.push((l1.negate(), l2.negate()));
                    }
                }
            }
        }
    }
    TwoSatEncoding { var_count: np, agent_clauses, compatible_clauses }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("model sends {0} to a destination it does not have, or two objects to one agent")]
pub struct InvalidModel(pub Object);

/// Place every object where the model sends it.
pub fn assignment_from_model(ci: &ConstrainedInstance, model: &[bool]) -> Result<Assignment, InvalidModel> {
    let np = ci.n_prime();
    let mut holding = vec![Object(0); np];
    for (idx, c) in ci.candidates.iter().enumerate() {
        let object = Object::from_idx(idx);
        let dest = if model[idx] { c.right } else { c.left }.ok_or(InvalidModel(object))?;
        if holding[dest.idx()].0 != 0 {
            return Err(InvalidModel(object));
        }
        holding[dest.idx()] = object;
    }
    Assignment::from_objects(holding).map_err(|e| InvalidModel(e.object))
}

/// Does `a` have `o_1` at `k`, `o_{n'}` at `k-1`, no object at home, and every
/// pair of objects compatible?
pub fn is_compatible(ci: &ConstrainedInstance, a: &Assignment) -> bool {
    let np = ci.n_prime();
    if a.n() != np || a.object_of(Agent(ci.k)) != Object(1) || a.object_of(Agent(ci.k - 1)) != Object(np) {
        return false;
    }
    if (1..=np).any(|i| a.object_of(Agent(i)) == Object(i)) {
        return false;
    }
    (1..=np).all(|x| {
        (x + 1..=np).all(|y| pair_compatible(ci, x, a.holder_of(Object(x)).0, y, a.holder_of(Object(y)).0))
    })
}

/// For `i = 1..k-1`, walk the object destined for agent `i` leftwards to it.
pub fn extract_sequence(ci: &ConstrainedInstance, compat: &Assignment) -> SwapSequence {
    let mut cur = Assignment::identity(ci.n_prime());
    let mut seq = Vec::new();
    for i in 1..ci.k {
        let wanted = compat.object_of(Agent(i));
        let mut p = cur.holder_of(wanted).0;
        while p > i {
            seq.push((Agent(p - 1), Agent(p)));
            cur.swap(Agent(p - 1), Agent(p));
            p -= 1;
        }
    }
    seq
}

/// Candidates, position sets, 2-SAT and extraction for one neat instance.
fn solve_neat(ci: &ConstrainedInstance, stats: &mut SolveStats) -> Option<SwapSequence> {
    let sets = position_sets_counted(ci, stats).ok()?;
    let enc = twosat_counted(ci, &sets, stats);
    let model = twosat::solve(&enc.instance()).ok()?;
    let compat = assignment_from_model(ci, &model).expect("agent clauses force a bijection");
    Some(extract_sequence(ci, &compat))
}

pub fn solve(inst: &Instance, k: Agent, o_l: Object) -> Result<Reachability, PathError> {
    solve_with_stats(inst, k, o_l).map(|(r, _)| r)
}

pub fn solve_with_stats(inst: &Instance, k: Agent, o_l: Object) -> Result<(Reachability, SolveStats), PathError> {
    let n = inst.n();
    if inst.network().kind() != NetworkKind::Path {
        return Err(PathError::NotAPath);
    }
    if !inst.is_strict() {
        return Err(PathError::NotStrict);
    }
    if k.0 == 0 || k.0 > n {
        return Err(PathError::AgentOutOfRange(k));
    }
    if o_l.0 == 0 || o_l.0 > n {
        return Err(PathError::ObjectOutOfRange(o_l));
    }
    let mut stats = SolveStats::default();
    if inst.endowment().object_of(k) == o_l {
        return Ok((Reachability::Reachable(Vec::new()), stats));
    }

    let (canon, _) = inst.with_identity_endowment();
    let (mut work, mut k_w, mut l) = (canon, k.0, inst.endowment().holder_of(o_l).0);
    let mirrored = l > k_w;
    if mirrored {
        work = model::mirror_instance(&work).expect("checked path");
        k_w = n + 1 - k_w;
        l = n + 1 - l;
    }
    let (trimmed, k_t, _) = trim_left(&work, Agent(k_w), Object(l));
    let offset = l - 1;

    for n_prime in k_t.0..=trimmed.n() {
        stats.neat_instances += 1;
        let ci = make_neat_counted(&trimmed, k_t, n_prime, &mut stats).expect("k <= n' <= n");
        if let Some(seq) = solve_neat(&ci, &mut stats) {
            let seq = seq
                .into_iter()
                .map(|(a, b)| {
                    let (a, b) = (a.0 + offset, b.0 + offset);
                    if mirrored {
                        (Agent(n + 1 - b), Agent(n + 1 - a))
                    } else {
                        (Agent(a), Agent(b))
                    }
                })
                .collect();
            return Ok((Reachability::Reachable(seq), stats));
        }
    }
    Ok((Reachability::Unreachable, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{verify_sequence, InstanceParts, Network, PreferenceProfile};

    fn strict_path(orders: &[&[usize]]) -> Instance {
        let n = orders.len();
        let prefs = PreferenceProfile::strict(
            orders.iter().map(|o| o.iter().map(|&x| Object(x)).collect()).collect(),
        );
        Instance::new(InstanceParts::new(n, Network::path(n), prefs)).unwrap()
    }

    #[test]
    fn figure1() {
        let inst = strict_path(&[&[2, 1, 3, 4], &[4, 3, 1, 2], &[1, 4, 3, 2], &[3, 1, 2, 4]]);
        let r = solve(&inst, Agent(3), Object(1)).unwrap();
        let seq = r.certificate().unwrap();
        assert_eq!(seq, &vec![(Agent(1), Agent(2)), (Agent(2), Agent(3))]);
        assert_eq!(verify_sequence(&inst, seq).unwrap().object_of(Agent(3)), Object(1));
        assert_eq!(solve(&inst, Agent(2), Object(2)).unwrap(), Reachability::Reachable(vec![]));
    }

    #[test]
    fn two_agents() {
        let inst = strict_path(&[&[2, 1], &[1, 2]]);
        let ci = make_neat(&inst, Agent(2), 2).unwrap();
        let sets = build_position_sets(&ci).unwrap();
        let enc = build_twosat(&ci, &sets);
        let model = twosat::solve(&enc.instance()).unwrap();
        assert!(!model[1]);
        let compat = assignment_from_model(&ci, &model).unwrap();
        assert_eq!(compat.objects(), &[Object(2), Object(1)]);
        assert_eq!(extract_sequence(&ci, &compat), vec![(Agent(1), Agent(2))]);
    }

    #[test]
    fn trimming_without_prefix_is_identity() {
        let inst = strict_path(&[&[2, 1, 3, 4], &[4, 3, 1, 2], &[1, 4, 3, 2], &[3, 1, 2, 4]]);
        let (t, k, o) = trim_left(&inst, Agent(3), Object(1));
        assert_eq!(t, inst);
        assert_eq!((k, o), (Agent(3), Object(1)));
    }

    #[test]
    fn neat_rejects_short_prefix() {
        let inst = strict_path(&[&[2, 1, 3], &[1, 2, 3], &[3, 1, 2]]);
        assert_eq!(
            make_neat(&inst, Agent(3), 2).unwrap_err(),
            InvalidConstraint::LastBeforeTarget { k: 3, n_prime: 2 }
        );
        assert_eq!(make_neat(&inst, Agent(3), 3).unwrap().base(), &inst);
    }

    #[test]
    fn stuck_object_means_no_instance() {
        // o2 is everyone's favourite so it can never move
        let inst = strict_path(&[&[2, 1, 3], &[2, 1, 3], &[2, 3, 1]]);
        let ci = make_neat(&inst, Agent(2), 3).unwrap();
        assert_eq!(ci.candidates(Object(2)), Candidates::default());
        assert_eq!(build_position_sets(&ci), Err(NoInstance));
    }

    #[test]
    fn ties_are_rejected() {
        let prefs = PreferenceProfile::from_tiers(vec![vec![vec![Object(1), Object(2)]]; 2]);
        let inst = Instance::new(InstanceParts::new(2, Network::path(2), prefs)).unwrap();
        assert_eq!(solve(&inst, Agent(2), Object(1)), Err(PathError::NotStrict));
    }
}
